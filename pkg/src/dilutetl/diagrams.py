"""Dilute Temperley-Lieb diagrams and the algebra they span.

A diagram consists of two columns of n vertices, each vertex joined to at
most one other, with all edges drawable inside the rectangle without
crossings.  We number the 2n boundary *slots* 0..2n-1 in the cyclic
boundary order L1,...,Ln,Rn,...,R1.  In that reading, planarity is
exactly the condition that the chords form a balanced bracket sequence
(isolated slots skipped), and the sorted tuple of slot edges is a
canonical encoding; the basis order is lexicographic on it.

The product of two diagrams glues the right column of the first to the
left column of the second, reads off the paths between outer vertices,
and multiplies by delta^alpha where alpha counts the closed loops formed
in the glued column.  A component that has an edge but is stranded at
the glued column (a floating edge, or an edge lying entirely inside it)
kills the product.

Every value here is immutable; all operations are pure functions.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .rings import Ring


class DiagramError(ValueError):
    pass


class DuplicateVertexError(DiagramError):
    pass


class SelfEdgeError(DiagramError):
    pass


class NonPlanarError(DiagramError):
    def __init__(self, n: int, edge1: tuple[int, int], edge2: tuple[int, int]):
        self.edge1 = edge1
        self.edge2 = edge2
        names = lambda e: (slot_name(n, e[0]), slot_name(n, e[1]))
        super().__init__(
            f"edges {names(edge1)} and {names(edge2)} cross")


class SizeMismatchError(DiagramError):
    pass


# ---------------------------------------------------------------------------
# slots


def slot_name(n: int, s: int) -> str:
    return f"L{s + 1}" if s < n else f"R{2 * n - s}"


def parse_slot(n: int, name: str) -> int:
    col, idx = name[0], int(name[1:])
    if not 1 <= idx <= n or col not in "LR":
        raise DiagramError(f"bad slot name {name!r} for n={n}")
    return idx - 1 if col == "L" else 2 * n - idx


def _reading_key(n: int, s: int) -> int:
    """Order slots L1..Ln,R1..Rn (the order used in the text format)."""
    return s if s < n else n + (2 * n - s) - 1


# ---------------------------------------------------------------------------
# diagrams


@dataclass(frozen=True)
class Diagram:
    """A planar partial matching of the 2n slots.

    ``pairing[s]`` is the partner slot of s, or -1 if s is isolated.
    """

    n: int
    pairing: tuple[int, ...]

    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(
            (s, p) for s, p in enumerate(self.pairing) if p > s))

    def isolated_slots(self) -> tuple[int, ...]:
        return tuple(s for s, p in enumerate(self.pairing) if p < 0)

    def sort_key(self):
        return self.edges()

    def propagating_count(self) -> int:
        n = self.n
        return sum(1 for s, p in enumerate(self.pairing) if s < n <= p)

    def left_partner(self, i: int):
        """Partner of left vertex i (1-based): ('L'|'R', index) or None."""
        return self._classify(self.pairing[i - 1])

    def right_partner(self, j: int):
        """Partner of right vertex j (1-based): ('L'|'R', index) or None."""
        return self._classify(self.pairing[2 * self.n - j])

    def _classify(self, p: int):
        if p < 0:
            return None
        return ("L", p + 1) if p < self.n else ("R", 2 * self.n - p)

    def col_pairing(self) -> tuple[int, ...]:
        """Column encoding: 0..n-1 left, n..2n-1 right, top to bottom."""
        n = self.n
        out = [-1] * (2 * n)
        for s, p in enumerate(self.pairing):
            if p >= 0:
                a = s if s < n else n + (2 * n - 1 - s)
                b = p if p < n else n + (2 * n - 1 - p)
                out[a] = b
        return tuple(out)

    # -- text and JSON formats ---------------------------------------

    def to_text(self) -> str:
        n = self.n
        pairs = []
        for a, b in self.edges():
            na, nb = sorted((a, b), key=lambda s: _reading_key(n, s))
            pairs.append((_reading_key(n, na), slot_name(n, na), slot_name(n, nb)))
        pairs.sort()
        return f"D{n}:" + "".join(f"({u},{v})" for _, u, v in pairs)

    @staticmethod
    def from_text(text: str) -> "Diagram":
        head, _, body = text.partition(":")
        if not head.startswith("D"):
            raise DiagramError(f"bad diagram text {text!r}")
        n = int(head[1:])
        edges = []
        body = body.strip()
        while body:
            if body[0] != "(" or ")" not in body:
                raise DiagramError(f"bad diagram text {text!r}")
            inner, body = body[1:].split(")", 1)
            u, v = inner.split(",")
            edges.append((u.strip(), v.strip()))
        used = {name for e in edges for name in e}
        isolated = [slot_name(n, s) for s in range(2 * n)
                    if slot_name(n, s) not in used]
        return make_diagram(n, edges, isolated)

    def to_json_obj(self) -> dict:
        n = self.n
        edges = []
        for a, b in self.edges():
            na, nb = sorted((a, b), key=lambda s: _reading_key(n, s))
            edges.append((_reading_key(n, na), [slot_name(n, na), slot_name(n, nb)]))
        edges.sort()
        iso = sorted(self.isolated_slots(), key=lambda s: _reading_key(n, s))
        return {"n": n,
                "edges": [e for _, e in edges],
                "isolated": [slot_name(n, s) for s in iso]}

    @staticmethod
    def from_json_obj(obj: dict) -> "Diagram":
        return make_diagram(obj["n"], [tuple(e) for e in obj["edges"]],
                            list(obj["isolated"]))

    def __repr__(self) -> str:
        return self.to_text()


def _check_planar(n: int, pairing: tuple[int, ...]) -> None:
    """Balanced-nesting check on the cyclic slot order, O(n)."""
    stack: list[int] = []
    for s, p in enumerate(pairing):
        if p < 0:
            continue
        if p > s:
            stack.append(s)
        else:
            opener = stack.pop()
            if opener != p:
                raise NonPlanarError(n, (opener, pairing[opener]), (p, s))


def _from_pairing(n: int, pairing: tuple[int, ...]) -> Diagram:
    _check_planar(n, pairing)
    return Diagram(n, pairing)


def make_diagram(n: int, edge_list, isolated_list) -> Diagram:
    """Validate and build a diagram from named slot pairs.

    edge_list and isolated_list must partition {L1..Ln, R1..Rn}; entries
    may be slot names or raw slot indices.
    """
    if n < 1:
        raise DiagramError("n must be positive")

    def to_slot(x):
        return parse_slot(n, x) if isinstance(x, str) else int(x)

    pairing = [-1] * (2 * n)
    seen: set[int] = set()
    for u, v in edge_list:
        a, b = to_slot(u), to_slot(v)
        if a == b:
            raise SelfEdgeError(f"vertex {slot_name(n, a)} joined to itself")
        for s in (a, b):
            if s in seen:
                raise DuplicateVertexError(
                    f"vertex {slot_name(n, s)} used twice")
            seen.add(s)
        pairing[a], pairing[b] = b, a
    for x in isolated_list:
        s = to_slot(x)
        if s in seen:
            raise DuplicateVertexError(f"vertex {slot_name(n, s)} used twice")
        seen.add(s)
    if len(seen) != 2 * n:
        missing = sorted(set(range(2 * n)) - seen)
        raise DiagramError(
            "slots not accounted for: "
            + ", ".join(slot_name(n, s) for s in missing))
    return _from_pairing(n, tuple(pairing))


def diagram_from_col_pairing(n: int, col: tuple[int, ...]) -> Diagram:
    pairing = [-1] * (2 * n)
    for a, b in enumerate(col):
        if b >= 0:
            sa = a if a < n else n + (2 * n - 1 - a)
            sb = b if b < n else n + (2 * n - 1 - b)
            pairing[sa] = sb
    return _from_pairing(n, tuple(pairing))


# ---------------------------------------------------------------------------
# basis enumeration


def _noncrossing_matchings(k: int):
    """All noncrossing partial matchings of points 0..k-1, as pairings."""
    pairing = [-1] * k

    def rec(points):
        if not points:
            yield tuple(pairing)
            return
        a, rest = points[0], points[1:]
        yield from rec(rest)  # a isolated
        for t, b in enumerate(rest):
            pairing[a], pairing[b] = b, a
            inside, outside = rest[:t], rest[t + 1:]
            for _ in rec(inside):
                # inner assignment is in place; now fill the outside
                yield from rec(outside)
            pairing[a] = pairing[b] = -1

    yield from rec(tuple(range(k)))


@lru_cache(maxsize=None)
def enumerate_basis(n: int) -> tuple[Diagram, ...]:
    """All diagrams on two columns of n vertices, in canonical order.

    The order is lexicographic on the sorted slot-edge encoding and is
    therefore stable across runs.
    """
    if n < 1:
        raise DiagramError("n must be positive")
    diags = [Diagram(n, p) for p in _noncrossing_matchings(2 * n)]
    diags.sort(key=Diagram.sort_key)
    return tuple(diags)


@lru_cache(maxsize=None)
def basis_index(n: int) -> dict:
    return {d: i for i, d in enumerate(enumerate_basis(n))}


def all_propagating_diagram(n: int) -> Diagram:
    return Diagram(n, tuple(2 * n - 1 - s for s in range(2 * n)))


@lru_cache(maxsize=None)
def all_propagating_index(n: int) -> int:
    return basis_index(n)[all_propagating_diagram(n)]


def augmentation_ideal_indices(n: int) -> tuple[int, ...]:
    """Indices of the basis diagrams with fewer than n propagating edges."""
    return tuple(i for i, d in enumerate(enumerate_basis(n))
                 if d.propagating_count() < n)


# ---------------------------------------------------------------------------
# multiplication


@dataclass(frozen=True)
class MultiplicationOutcome:
    """Either zero (annihilated) or delta^loops times a diagram."""

    loops: int | None
    result: Diagram | None

    @staticmethod
    def annihilated() -> "MultiplicationOutcome":
        return MultiplicationOutcome(None, None)

    @staticmethod
    def product(loops: int, result: Diagram) -> "MultiplicationOutcome":
        return MultiplicationOutcome(loops, result)

    @property
    def is_annihilated(self) -> bool:
        return self.result is None


def multiply_diagrams(d1: Diagram, d2: Diagram) -> MultiplicationOutcome:
    """Glue d1 to d2 along the middle column and read off the product.

    Reference implementation on Diagram objects; the batched kernel in
    ``_kernels`` is cross-checked against this in the tests.  All
    components are scanned even once the product is known to be zero,
    so loop counting is deterministic.
    """
    if d1.n != d2.n:
        raise SizeMismatchError(f"cannot glue n={d1.n} to n={d2.n}")
    n = d1.n
    c1, c2 = d1.col_pairing(), d2.col_pairing()
    # vertices: 0..n-1 left outer, n..2n-1 middle, 2n..3n-1 right outer
    visited = [False] * (3 * n)
    edges: list[tuple[int, int]] = []
    dead = False
    alpha = 0

    def step(cur: int, via: int):
        # one step out of a middle vertex; via is the factor just used
        if via == 1:
            t = c2[cur - n]
            return (n + t if t >= 0 else -1), 2
        t = c1[cur]
        return t, 1

    def walk(start_col: int, first: int, via: int):
        nonlocal dead
        cur, v = first, via
        while n <= cur < 2 * n:
            visited[cur] = True
            cur, v = step(cur, v)
            if cur < 0:
                dead = True
                return
        visited[cur] = True
        a = start_col
        b = cur if cur < n else cur - n
        edges.append((a, b) if a < b else (b, a))

    for s in range(n):
        if c1[s] >= 0 and not visited[s]:
            visited[s] = True
            walk(s, c1[s], 1)
    for s in range(n):
        v = 2 * n + s
        t = c2[n + s]
        if t >= 0 and not visited[v]:
            visited[v] = True
            first = 2 * n + (t - n) if t >= n else n + t
            walk(n + s, first, 2)
    for m in range(n, 2 * n):
        if visited[m]:
            continue
        has1, has2 = c1[m] >= 0, c2[m - n] >= 0
        if not has1 and not has2:
            visited[m] = True  # bare middle vertex, discarded
        elif has1 != has2:
            dead = True  # stranded middle path; mark its component
            visited[m] = True
            cur, via = (c1[m], 1) if has1 else (n + c2[m - n], 2)
            while n <= cur < 2 * n and not visited[cur]:
                visited[cur] = True
                cur, via = step(cur, via)
                if cur < 0:
                    break
    for m in range(n, 2 * n):
        if visited[m]:
            continue
        alpha += 1
        visited[m] = True
        cur, via = c1[m], 1
        while cur != m:
            visited[cur] = True
            cur, via = step(cur, via)

    if dead:
        return MultiplicationOutcome.annihilated()
    col = [-1] * (2 * n)
    for a, b in edges:
        col[a], col[b] = b, a
    return MultiplicationOutcome.product(alpha, diagram_from_col_pairing(n, tuple(col)))


@lru_cache(maxsize=8)
def product_table(n: int) -> tuple[np.ndarray, np.ndarray]:
    """(result, loops) arrays over basis indices.

    result[i, j] is the basis index of the product diagram or -1 if the
    product is zero; loops[i, j] is the delta exponent (-1 when zero).
    Built by the batched kernel; the tests replay random entries through
    multiply_diagrams.
    """
    basis = enumerate_basis(n)
    N = len(basis)
    P = np.array([d.col_pairing() for d in basis], dtype=np.int8)
    keys, outa = _kernels.multiply_all(P)
    basis_keys = np.array(
        [_kernels.pack_pairing(d.col_pairing(), 2 * n + 2) for d in basis],
        dtype=np.int64)
    order = np.argsort(basis_keys)
    sorted_keys = basis_keys[order]
    flat = keys.reshape(-1)
    alive = outa.reshape(-1) >= 0
    pos = np.searchsorted(sorted_keys, flat[alive])
    if not np.array_equal(sorted_keys[pos], flat[alive]):
        raise DiagramError("kernel produced a non-basis product diagram")
    res = np.full(N * N, -1, np.int32)
    res[alive] = order[pos].astype(np.int32)
    res = res.reshape(N, N)
    loops = outa.astype(np.int8)
    return res, loops


def multiply_indices(n: int, i: int, j: int) -> tuple[int, int]:
    """(loops, result index) for basis diagrams i, j; result -1 if zero."""
    res, loops = product_table(n)
    return int(loops[i, j]), int(res[i, j])


# ---------------------------------------------------------------------------
# algebra elements


class AlgebraElement:
    """A finitely supported coefficient map from diagrams to a ring.

    Stored zero coefficients are pruned; two elements are equal exactly
    when their rings, sizes and term maps agree.
    """

    __slots__ = ("ring", "n", "terms")

    def __init__(self, ring: Ring, n: int, terms: dict[Diagram, object]):
        pruned = {}
        for d, c in terms.items():
            if d.n != n:
                raise SizeMismatchError(f"diagram {d} does not have n={n}")
            if not ring.is_zero(c):
                pruned[d] = c
        self.ring = ring
        self.n = n
        self.terms = pruned

    @staticmethod
    def zero(ring: Ring, n: int) -> "AlgebraElement":
        return AlgebraElement(ring, n, {})

    @staticmethod
    def from_diagram(ring: Ring, d: Diagram, coeff=None) -> "AlgebraElement":
        return AlgebraElement(ring, d.n, {d: ring.one if coeff is None else coeff})

    def coefficient(self, d: Diagram):
        return self.terms.get(d, self.ring.zero)

    def is_zero(self) -> bool:
        return not self.terms

    def _require_compatible(self, other: "AlgebraElement"):
        if self.ring != other.ring:
            raise SizeMismatchError("elements live over different rings")
        if self.n != other.n:
            raise SizeMismatchError("elements have different n")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._require_compatible(other)
        acc = dict(self.terms)
        for d, c in other.terms.items():
            acc[d] = self.ring.add(acc.get(d, self.ring.zero), c)
        return AlgebraElement(self.ring, self.n, acc)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(
            self.ring, self.n,
            {d: self.ring.neg(c) for d, c in self.terms.items()})

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def scale(self, c) -> "AlgebraElement":
        return AlgebraElement(
            self.ring, self.n,
            {d: self.ring.mul(c, x) for d, x in self.terms.items()})

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        return multiply_elements(self, other)

    def __eq__(self, other) -> bool:
        return (isinstance(other, AlgebraElement)
                and self.ring == other.ring and self.n == other.n
                and self.terms == other.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for d in sorted(self.terms, key=Diagram.sort_key):
            bits.append(f"({self.ring.element_str(self.terms[d])})*{d.to_text()}")
        return " + ".join(bits)


def multiply_elements(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Bilinear extension of the diagram product."""
    x._require_compatible(y)
    ring = x.ring
    acc: dict[Diagram, object] = {}
    for d1, c1 in x.terms.items():
        for d2, c2 in y.terms.items():
            out = multiply_diagrams(d1, d2)
            if out.is_annihilated:
                continue
            c = ring.mul(ring.mul(c1, c2), ring.delta_power(out.loops))
            d3 = out.result
            acc[d3] = ring.add(acc.get(d3, ring.zero), c)
    return AlgebraElement(ring, x.n, acc)


def identity_element(n: int, ring: Ring) -> AlgebraElement:
    """The unit: for every subset of rows, the diagram propagating on its
    complement with isolated vertices on the subset, all with coefficient
    one (2^n terms)."""
    terms = {}
    for r in range(n + 1):
        for omit in itertools.combinations(range(1, n + 1), r):
            pairing = [-1] * (2 * n)
            for j in range(1, n + 1):
                if j not in omit:
                    a, b = j - 1, 2 * n - j
                    pairing[a], pairing[b] = b, a
            terms[_from_pairing(n, tuple(pairing))] = ring.one
    return AlgebraElement(ring, n, terms)


def propagating_count(d: Diagram) -> int:
    return d.propagating_count()


def augmentation(x: AlgebraElement):
    """Coefficient of the unique diagram with n propagating edges."""
    return x.coefficient(all_propagating_diagram(x.n))


def diagram_to_json(d: Diagram) -> str:
    return json.dumps(d.to_json_obj())


def diagram_from_json(text: str) -> Diagram:
    return Diagram.from_json_obj(json.loads(text))
