import json

import pytest

from dilutetl.diagrams import enumerate_basis, make_diagram, multiply_diagrams, product_table
from dilutetl.linkstates import (
    DEFECT,
    ISOLATED,
    InvalidSpliceError,
    LinkState,
    LinkStateError,
    augmentation_ideal_basis,
    cup_iso_maps,
    cup_module,
    cup_pattern_diagram,
    diagram_with_link_states,
    enumerate_link_states,
    ideal_J,
    ideal_K,
    ideal_L,
    intersect,
    left_link_state,
    right_link_state,
    splice,
    splice_closure,
)

SIX_DIAGRAM = make_diagram(
    6, [("L1", "L3"), ("L4", "R1"), ("L5", "R5"), ("R3", "R4")],
    ["L2", "L6", "R2", "R6"])


def test_link_state_invariants_enforced():
    with pytest.raises(LinkStateError):
        LinkState(3, (2, DEFECT, 0))  # defect inside the cup (1, 3)
    with pytest.raises(LinkStateError):
        LinkState(4, (2, 3, 0, 1))  # crossing cups
    with pytest.raises(LinkStateError):
        LinkState(2, (1, DEFECT))  # not an involution


def test_right_link_state_of_six_diagram():
    p = right_link_state(SIX_DIAGRAM)
    assert p.to_text() == "DO()DO"
    assert left_link_state(SIX_DIAGRAM).to_text() == "(O)DDO"


def test_link_state_of_cups_and_propagating():
    u = make_diagram(2, [("L1", "L2"), ("R1", "R2")], [])
    assert right_link_state(u).to_text() == "()"
    ident = make_diagram(2, [("L1", "R1"), ("L2", "R2")], [])
    assert right_link_state(ident).to_text() == "DD"


def test_text_round_trip():
    for text in ("D", "O", "()", "DO()DO", "(())", "()()", "(O)"):
        assert LinkState.from_text(text).to_text() == text
    p = LinkState.from_text("DO()DO")
    assert LinkState.from_json_obj(json.loads(json.dumps(p.to_json_obj()))) == p


@pytest.mark.parametrize("n,count", [(1, 2), (2, 5)])
def test_enumerate_counts(n, count):
    assert len(enumerate_link_states(n)) == count


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_enumeration_matches_realized_states(n):
    states = set(enumerate_link_states(n))
    realized = {right_link_state(d) for d in enumerate_basis(n)}
    assert states == realized


def test_splice_basic_and_blocked():
    p = LinkState.from_text("DD")
    assert splice(p, 1, 2).to_text() == "()"
    q = LinkState.from_text("DDD")
    with pytest.raises(InvalidSpliceError) as err:
        splice(q, 1, 3)
    assert err.value.blocking == 2
    with pytest.raises(InvalidSpliceError):
        splice(LinkState.from_text("OD"), 1, 2)


def test_splice_across_cup_and_isolated():
    p = LinkState.from_text("DO()DO")
    assert splice(p, 1, 5).to_text() == "(O())O"


def test_splice_closure():
    iso = LinkState.from_text("OOO")
    assert splice_closure(iso) == {iso}
    p2 = LinkState.from_text("DD")
    assert {s.to_text() for s in splice_closure(p2)} == {"DD", "()"}
    p4 = LinkState.from_text("DDDD")
    texts = {s.to_text() for s in splice_closure(p4)}
    assert texts == {"DDDD", "()DD", "D()D", "DD()", "()()", "(())"}


def test_ideal_J_examples():
    J = ideal_J(LinkState.from_text("OO"))
    assert [d.to_text() for d in J.members()] == ["D2:", "D2:(L1,L2)"]
    J1 = ideal_J(LinkState.from_text("D"))
    assert [d.to_text() for d in J1.members()] == ["D1:(L1,R1)"]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_named_ideals_left_closure(n):
    res, _ = product_table(n)
    ideals = [ideal_J(p) for p in enumerate_link_states(n)]
    ideals += [ideal_L(n, i) for i in range(1, n)]
    ideals += [ideal_K(n, S) for S in ({1}, set(range(1, n + 1)))]
    size = len(enumerate_basis(n))
    for J in ideals:
        members = set(J.diagrams)
        for m in J.diagrams:
            for d in range(size):
                r = res[d, m]
                assert r == -1 or r in members, J.label


def test_ideal_K_examples():
    K1 = ideal_K(2, {1})
    assert [d.to_text() for d in K1.members()] == ["D2:(L1,R2)", "D2:(L2,R2)"]
    K12 = ideal_K(2, {1, 2})
    assert [d.to_text() for d in K12.members()] == ["D2:", "D2:(L1,L2)"]
    with pytest.raises(LinkStateError):
        ideal_K(2, set())


@pytest.mark.parametrize("n", [2, 3, 4])
def test_K_equals_splice_ideal_of_isolated_defect_state(n):
    import itertools

    for size in range(1, n + 1):
        for S in itertools.combinations(range(1, n + 1), size):
            q1 = LinkState(n, tuple(
                ISOLATED if v + 1 in S else DEFECT for v in range(n)))
            assert ideal_K(n, S).diagrams == ideal_J(q1).diagrams


def test_ideal_L_examples():
    L1 = ideal_L(2, 1)
    assert [d.to_text() for d in L1.members()] == \
        ["D2:(L1,L2)(R1,R2)", "D2:(R1,R2)"]
    with pytest.raises(LinkStateError):
        ideal_L(2, 2)
    assert len(intersect([ideal_L(3, 1), ideal_L(3, 2)])) == 0
    inter = intersect([ideal_L(5, 1), ideal_L(5, 3)])
    witness = make_diagram(
        5, [("L1", "L2"), ("L3", "L4"), ("R1", "R2"), ("R3", "R4"),
            ("L5", "R5")], [])
    assert inter.contains_diagram(witness)


def test_cup_module():
    assert cup_module(2).diagrams == ideal_L(2, 1).diagrams
    assert len(cup_module(2)) == 2
    with pytest.raises(LinkStateError):
        cup_module(3)
    for n in (2, 4, 6):
        U = range(1, n, 2)
        inter = intersect([ideal_L(n, i) for i in U])
        assert cup_module(n).diagrams == inter.diagrams
        for d in cup_module(n).members():
            assert d.propagating_count() == 0


def test_cup_iso_maps_small():
    fwd, bwd = cup_iso_maps(2)
    empty = make_diagram(2, [], ["L1", "L2", "R1", "R2"])
    rcup = make_diagram(2, [("R1", "R2")], ["L1", "L2"])
    lcup = make_diagram(2, [("L1", "L2")], ["R1", "R2"])
    both = make_diagram(2, [("L1", "L2"), ("R1", "R2")], [])
    assert fwd[empty] == rcup and bwd[rcup] == empty
    assert fwd[lcup] == both and bwd[both] == lcup


@pytest.mark.parametrize("n", [2, 4, 6])
def test_cup_iso_maps_mutually_inverse(n):
    fwd, bwd = cup_iso_maps(n)
    assert len(fwd) == len(bwd) == len(cup_module(n))
    assert all(bwd[fwd[d]] == d for d in fwd)
    assert all(fwd[bwd[d]] == d for d in bwd)


def test_diagram_with_link_states_is_the_unique_glue():
    left = LinkState.from_text("(O)DDO")
    right = LinkState.from_text("DO()DO")
    assert diagram_with_link_states(left, right) == SIX_DIAGRAM


def test_cup_pattern_diagram():
    d = cup_pattern_diagram(4)
    assert d.to_text() == "D4:(R1,R2)(R3,R4)"
    out = multiply_diagrams(d, d)
    assert out.is_annihilated


def test_augmentation_ideal_basis():
    I = augmentation_ideal_basis(2)
    assert len(I) == 8 and I.label == "I"
