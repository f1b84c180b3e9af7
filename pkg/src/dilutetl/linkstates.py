"""Link states, splices, and the named left ideals of the diagram algebra.

Cutting every propagating edge of a diagram at its midpoint leaves two
half-diagrams; the right half is the diagram's *right link state*: a
single column of n vertices each carrying a defect (a cut edge end), a
cup to another vertex, or nothing.  Planarity of the parent diagram
forces cups to be noncrossing and forbids a defect strictly inside a
cup.

A *splice* replaces two defects by a cup, legal exactly when no defect
lies strictly between them.  The ideals are all stored extensionally,
as sorted tuples of indices into the canonical diagram basis:

* splice ideal of p: diagrams whose right link state is reachable from
  p by splices;
* isolation ideal K_S: diagrams whose right-column isolated set is
  exactly S;
* cup ideal L_i: diagrams with no isolated right vertex and a cup at
  (i, i+1);
* the cup module (n even): diagrams whose right column is the full cup
  pattern (1,2)(3,4)...(n-1,n).

Text format for a link state: a string over D, O, (, ) such as
"DO()DO" - D defect, O isolated, balanced noncrossing parentheses.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .diagrams import (
    Diagram,
    DiagramError,
    MultiplicationOutcome,
    all_propagating_index,
    augmentation_ideal_indices,
    basis_index,
    enumerate_basis,
    multiply_diagrams,
)

DEFECT = -1
ISOLATED = -2


class LinkStateError(ValueError):
    pass


class InvalidSpliceError(LinkStateError):
    def __init__(self, msg: str, blocking: int | None = None):
        super().__init__(msg)
        self.blocking = blocking


@dataclass(frozen=True)
class LinkState:
    """One column of n vertices: defect, isolated, or half of a cup.

    ``state[v]`` (0-based) is DEFECT, ISOLATED, or the 0-based partner
    vertex of a cup.
    """

    n: int
    state: tuple[int, ...]

    def __post_init__(self):
        st = self.state
        if len(st) != self.n:
            raise LinkStateError("state length differs from n")
        open_cups: list[int] = []
        for v, x in enumerate(st):
            if x == DEFECT:
                if open_cups:
                    raise LinkStateError(
                        f"defect at vertex {v + 1} inside the cup opened "
                        f"at vertex {open_cups[-1] + 1}")
            elif x == ISOLATED:
                continue
            elif x > v:
                if not 0 <= x < self.n or st[x] != v:
                    raise LinkStateError("cup map is not an involution")
                open_cups.append(v)
            elif 0 <= x < v:
                if open_cups.pop() != x:
                    raise LinkStateError("cups cross")
            else:
                raise LinkStateError(f"bad entry {x} at vertex {v + 1}")

    def defects(self) -> tuple[int, ...]:
        """0-based defect positions."""
        return tuple(v for v, x in enumerate(self.state) if x == DEFECT)

    def isolated(self) -> tuple[int, ...]:
        return tuple(v for v, x in enumerate(self.state) if x == ISOLATED)

    def cups(self) -> tuple[tuple[int, int], ...]:
        return tuple((v, x) for v, x in enumerate(self.state)
                     if x > v)

    def defect_count(self) -> int:
        return len(self.defects())

    def to_text(self) -> str:
        out = []
        for v, x in enumerate(self.state):
            if x == DEFECT:
                out.append("D")
            elif x == ISOLATED:
                out.append("O")
            else:
                out.append("(" if x > v else ")")
        return "".join(out)

    @staticmethod
    def from_text(text: str) -> "LinkState":
        state: list[int] = []
        stack: list[int] = []
        for v, ch in enumerate(text):
            if ch == "D":
                state.append(DEFECT)
            elif ch == "O":
                state.append(ISOLATED)
            elif ch == "(":
                stack.append(v)
                state.append(0)  # patched on close
            elif ch == ")":
                if not stack:
                    raise LinkStateError(f"unbalanced ')' at {v + 1}")
                u = stack.pop()
                state[u] = v
                state.append(u)
            else:
                raise LinkStateError(f"bad character {ch!r}")
        if stack:
            raise LinkStateError("unbalanced '('")
        return LinkState(len(state), tuple(state))

    def to_json_obj(self) -> dict:
        entries = []
        for v, x in enumerate(self.state):
            entries.append("D" if x == DEFECT else "O" if x == ISOLATED else x + 1)
        return {"n": self.n, "entries": entries}

    @staticmethod
    def from_json_obj(obj: dict) -> "LinkState":
        state = []
        for e in obj["entries"]:
            state.append(DEFECT if e == "D" else ISOLATED if e == "O" else int(e) - 1)
        return LinkState(obj["n"], tuple(state))

    def __repr__(self) -> str:
        return f"<{self.to_text()}>"


# ---------------------------------------------------------------------------
# link states of diagrams


def right_link_state(d: Diagram) -> LinkState:
    """Right column of d with every propagating edge cut to a defect."""
    n = d.n
    state = [ISOLATED] * n
    for j in range(1, n + 1):
        p = d.right_partner(j)
        if p is None:
            continue
        side, k = p
        state[j - 1] = DEFECT if side == "L" else k - 1
    return LinkState(n, tuple(state))


def left_link_state(d: Diagram) -> LinkState:
    n = d.n
    state = [ISOLATED] * n
    for i in range(1, n + 1):
        p = d.left_partner(i)
        if p is None:
            continue
        side, k = p
        state[i - 1] = DEFECT if side == "R" else k - 1
    return LinkState(n, tuple(state))


@lru_cache(maxsize=None)
def enumerate_link_states(n: int) -> tuple[LinkState, ...]:
    """All link states on n vertices, sorted by text form.

    The count agrees with the number of distinct right link states
    realized by the diagram basis (checked in the tests).
    """
    results: list[LinkState] = []
    state = [ISOLATED] * n
    open_cups: list[int] = []

    def rec(v: int):
        if v == n:
            if not open_cups:
                results.append(LinkState(n, tuple(state)))
            return
        if not open_cups:  # a defect may not sit inside a cup
            state[v] = DEFECT
            rec(v + 1)
        state[v] = ISOLATED
        rec(v + 1)
        open_cups.append(v)  # open a cup; entry written when it closes
        rec(v + 1)
        open_cups.pop()
        if open_cups:  # close the innermost open cup here
            u = open_cups.pop()
            state[u], state[v] = v, u
            rec(v + 1)
            open_cups.append(u)
        state[v] = ISOLATED

    rec(0)
    results.sort(key=LinkState.to_text)
    return tuple(results)


def splice(p: LinkState, i: int, k: int) -> LinkState:
    """Replace the defects at vertices i < k (1-based) by the cup (i, k).

    Legal only when both are defects and no defect lies strictly
    between them; the blocking vertex is reported otherwise.
    """
    if not 1 <= i < k <= p.n:
        raise InvalidSpliceError(f"bad splice positions ({i}, {k})")
    for v, label in ((i, "first"), (k, "second")):
        if p.state[v - 1] != DEFECT:
            raise InvalidSpliceError(
                f"{label} splice vertex {v} is not a defect", blocking=v)
    for v in range(i, k - 1):
        if p.state[v] == DEFECT:
            raise InvalidSpliceError(
                f"defect at vertex {v + 1} lies between {i} and {k}",
                blocking=v + 1)
    state = list(p.state)
    state[i - 1], state[k - 1] = k - 1, i - 1
    return LinkState(p.n, tuple(state))


@lru_cache(maxsize=None)
def splice_closure(p: LinkState) -> frozenset[LinkState]:
    """All link states reachable from p by (possibly zero) splices."""
    seen = {p}
    frontier = [p]
    while frontier:
        q = frontier.pop()
        defects = q.defects()
        for t in range(len(defects) - 1):
            i, k = defects[t] + 1, defects[t + 1] + 1
            out = splice(q, i, k)
            if out not in seen:
                seen.add(out)
                frontier.append(out)
    return frozenset(seen)


# ---------------------------------------------------------------------------
# ideals


@dataclass(frozen=True)
class IdealBasis:
    """A left ideal spanned by an explicit subset of the diagram basis.

    ``diagrams`` holds sorted indices into enumerate_basis(n), so
    intersections and covers are exact set operations.  Left-ideal
    closure is a checked property, not a storage invariant.
    """

    n: int
    label: str
    diagrams: tuple[int, ...]

    def __post_init__(self):
        if tuple(sorted(set(self.diagrams))) != self.diagrams:
            raise LinkStateError(f"ideal {self.label}: indices not sorted/unique")

    def __len__(self) -> int:
        return len(self.diagrams)

    def members(self) -> tuple[Diagram, ...]:
        basis = enumerate_basis(self.n)
        return tuple(basis[i] for i in self.diagrams)

    def contains_diagram(self, d: Diagram) -> bool:
        return basis_index(self.n).get(d) in set(self.diagrams)


@lru_cache(maxsize=None)
def _rls_table(n: int) -> dict[LinkState, tuple[int, ...]]:
    table: dict[LinkState, list[int]] = {}
    for i, d in enumerate(enumerate_basis(n)):
        table.setdefault(right_link_state(d), []).append(i)
    return {p: tuple(v) for p, v in table.items()}


def diagrams_with_right_link_state(n: int, p: LinkState) -> tuple[int, ...]:
    return _rls_table(n).get(p, ())


def augmentation_ideal_basis(n: int) -> IdealBasis:
    """The span of all diagrams with fewer than n propagating edges."""
    return IdealBasis(n, "I", augmentation_ideal_indices(n))


def ideal_J(p: LinkState) -> IdealBasis:
    """Diagrams whose right link state lies in the splice closure of p."""
    n = p.n
    closure = splice_closure(p)
    idxs: list[int] = []
    for q in closure:
        idxs.extend(diagrams_with_right_link_state(n, q))
    return IdealBasis(n, f"J_{p.to_text()}", tuple(sorted(idxs)))


def ideal_K(n: int, S) -> IdealBasis:
    """Diagrams whose right-column isolated set is exactly S (1-based)."""
    S = frozenset(S)
    if not S:
        raise LinkStateError("K requires a nonempty vertex set")
    if not all(1 <= v <= n for v in S):
        raise LinkStateError(f"K vertex set {sorted(S)} out of range for n={n}")
    idxs = []
    for i, d in enumerate(enumerate_basis(n)):
        iso = {j for j in range(1, n + 1) if d.right_partner(j) is None}
        if iso == S:
            idxs.append(i)
    label = "K_{" + ",".join(f"R{v}" for v in sorted(S)) + "}"
    return IdealBasis(n, label, tuple(idxs))


def ideal_L(n: int, i: int) -> IdealBasis:
    """Diagrams with no isolated right vertex and a right cup (i, i+1)."""
    if not 1 <= i <= n - 1:
        raise LinkStateError(f"L index {i} out of range for n={n}")
    idxs = []
    for k, d in enumerate(enumerate_basis(n)):
        if any(d.right_partner(j) is None for j in range(1, n + 1)):
            continue
        if d.right_partner(i) == ("R", i + 1):
            idxs.append(k)
    return IdealBasis(n, f"L_{i}", tuple(idxs))


def intersect(ideals) -> IdealBasis:
    """Set intersection; valid because every named ideal is spanned by a
    subset of the same global diagram basis."""
    ideals = list(ideals)
    if not ideals:
        raise LinkStateError("nothing to intersect")
    n = ideals[0].n
    if any(j.n != n for j in ideals):
        raise LinkStateError("intersection of ideals with different n")
    common = set(ideals[0].diagrams)
    for j in ideals[1:]:
        common &= set(j.diagrams)
    label = " & ".join(j.label for j in ideals)
    return IdealBasis(n, label, tuple(sorted(common)))


def cup_module(n: int) -> IdealBasis:
    """Diagrams whose right column is the full cup pattern (n even)."""
    if n % 2:
        raise LinkStateError("the cup module needs even n")
    idxs = []
    for k, d in enumerate(enumerate_basis(n)):
        if all(d.right_partner(i) == ("R", i + 1) for i in range(1, n, 2)):
            if d.propagating_count() != 0:
                raise LinkStateError("cup module member with a propagating edge")
            idxs.append(k)
    return IdealBasis(n, f"Cup({n})", tuple(idxs))


def cup_pattern_diagram(n: int) -> Diagram:
    """All-isolated left column, right cups (1,2)(3,4)...(n-1,n)."""
    if n % 2:
        raise LinkStateError("cup pattern needs even n")
    state = []
    for v in range(0, n, 2):
        state.extend((v + 1, v))
    return diagram_with_link_states(
        LinkState(n, tuple([ISOLATED] * n)), LinkState(n, tuple(state)))


def diagram_with_link_states(left: LinkState, right: LinkState) -> Diagram:
    """The unique diagram with the given halves; defect counts must match
    (propagating edges join defects in order)."""
    if left.n != right.n:
        raise LinkStateError("halves of different sizes")
    n = left.n
    ld, rd = left.defects(), right.defects()
    if len(ld) != len(rd):
        raise LinkStateError("halves with different defect counts")
    pairing = [-1] * (2 * n)

    def right_slot(j0: int) -> int:
        return 2 * n - 1 - j0

    for v, x in left.cups():
        pairing[v], pairing[x] = x, v
    for v, x in right.cups():
        a, b = right_slot(v), right_slot(x)
        pairing[a], pairing[b] = b, a
    for v, w in zip(ld, rd):
        a, b = v, right_slot(w)
        pairing[a], pairing[b] = b, a
    from .diagrams import _from_pairing

    return _from_pairing(n, tuple(pairing))


def cup_iso_maps(n: int):
    """Mutually inverse bijections between the all-isolated ideal basis
    and the cup module basis (n even).

    Forward: right multiplication by the cup pattern diagram; must give
    loop count zero.  Backward: keep the left half, drop everything on
    the right.
    """
    if n % 2:
        raise LinkStateError("cup isomorphism needs even n")
    basis = enumerate_basis(n)
    k_full = ideal_K(n, range(1, n + 1))
    cupmod = cup_module(n)
    d_cup = cup_pattern_diagram(n)
    iso_state = LinkState(n, tuple([ISOLATED] * n))
    forward: dict[Diagram, Diagram] = {}
    backward: dict[Diagram, Diagram] = {}
    for i in k_full.diagrams:
        d = basis[i]
        out = multiply_diagrams(d, d_cup)
        if out.is_annihilated or out.loops != 0:
            raise LinkStateError(f"cup map degenerate on {d}")
        forward[d] = out.result
    for i in cupmod.diagrams:
        d = basis[i]
        backward[d] = diagram_with_link_states(left_link_state(d), iso_state)
    return forward, backward
