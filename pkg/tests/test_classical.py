import random

import pytest

from dilutetl.classical import (
    NotClassicalError,
    as_tl_diagram,
    catalan,
    tl_bar_tor,
    tl_basis,
    tl_multiply,
    tor_contrast,
)
from dilutetl.diagrams import Diagram, enumerate_basis, make_diagram
from dilutetl.rings import Ring


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_tl_basis_catalan_counts(n):
    basis = tl_basis(n)
    assert len(basis) == catalan(n)
    assert set(basis) <= set(enumerate_basis(n))
    for d in basis:
        assert not d.isolated_slots()


def test_validator_rejects_isolated():
    with pytest.raises(NotClassicalError):
        as_tl_diagram(make_diagram(2, [("L1", "R1")], ["L2", "R2"]))


def test_cup_cap_relation():
    u = Diagram.from_text("D2:(L1,L2)(R1,R2)")
    assert tl_multiply(u, u) == (1, u)
    ident = Diagram.from_text("D2:(L1,R1)(L2,R2)")
    assert tl_multiply(ident, u) == (0, u)


def test_tl_products_never_annihilate_and_associate():
    rng = random.Random(21)
    basis = tl_basis(4)
    for _ in range(300):
        a, b, c = (rng.choice(basis) for _ in range(3))
        a1, ab = tl_multiply(a, b)
        a2, ab_c = tl_multiply(ab, c)
        b1, bc = tl_multiply(b, c)
        b2, a_bc = tl_multiply(a, bc)
        assert ab_c == a_bc and a1 + a2 == b1 + b2


def test_tl2_delta0_f2_tor_nonvanishing():
    groups = tl_bar_tor(2, Ring.prime_field(2, 0), 4)
    assert [g.betti for g in groups] == [1, 1, 1, 1, 1]


def test_tl2_delta1_q_tor_vanishing():
    groups = tl_bar_tor(2, Ring.rationals(1), 3)
    assert [g.betti for g in groups] == [1, 0, 0, 0]


def test_tl3_delta0_f2_baseline():
    # recorded as a regression baseline only
    groups = tl_bar_tor(3, Ring.prime_field(2, 0), 2)
    assert groups[0].betti == 1
    assert [g.betti for g in groups] == [1, 0, 0]


def test_contrast_table():
    obj = tor_contrast(2, Ring.prime_field(2, 0), 4)
    assert [g["betti"] for g in obj["classical"]] == [1, 1, 1, 1, 1]
    assert [g["betti"] for g in obj["dilute"]] == [1, 0, 0, 0, 0]
