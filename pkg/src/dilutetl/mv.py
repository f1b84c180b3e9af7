"""The idempotent cover of the augmentation ideal and its Mayer-Vietoris
complex, with the two functors applied to it.

The cover lists, in a fixed order, the isolation ideals K_S (subsets S
ordered by size then lexicographically) followed by the cup ideals
L_1..L_{n-1}.  Every nonzero intersection of cover ideals carries a
verified certificate that it is generated by an idempotent member: a
searched unit diagram for the splice ideal it equals, the empty diagram
for the all-isolated ideal, or - for the cup module when n is even -
transport through the mutually inverse cup maps.

The complex is built from the generic definition: degree p holds the
direct sum of all nonzero p-fold intersections, with signed inclusion
differentials; degree 0 is the whole algebra and degree -1 its quotient
by the augmentation ideal.  Zero summands are dropped from storage; the
indexing convention for a summand is its sorted tuple of cover indices.
All boundary matrices have integer (0, +-1) entries regardless of the
coefficient ring, so the chain-level checks hold for every delta at
once; the ring matters to homology and to the functors.

For odd n >= 5 the complex acquires a nonzero term in degree floor(n/2)
(pairs of non-adjacent cup ideals meet nontrivially), one degree beyond
what the shortest displayed shape would suggest; build_mv_complex flags
this in shape_notes rather than truncating.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .diagrams import (
    Diagram,
    all_propagating_index,
    enumerate_basis,
)
from .exact import (
    ChainComplex,
    FieldSolver,
    HomologyResult,
    LatticeSolver,
    SparseMatrix,
    complex_homology,
    presented_complex_homology,
)
from .homalg import hom_solver, module_action, ring_delta_int, tensor_moduli
from .idempotents import (
    CupTransportCertificate,
    GeneratorCertificate,
    assert_idempotent_generator,
    certify_cup_module,
    find_idempotent,
)
from .linkstates import (
    DEFECT,
    ISOLATED,
    IdealBasis,
    LinkState,
    augmentation_ideal_basis,
    ideal_J,
    ideal_K,
    ideal_L,
    intersect,
)
from .rings import Ring


class CoverError(ValueError):
    pass


@dataclass
class Cover:
    """The ordered cover ideals with certificates for every nonzero
    intersection, keyed by sorted tuples of cover indices."""

    n: int
    ideals: list[IdealBasis]
    nonzero: dict[tuple[int, ...], tuple[int, ...]]
    certificates: dict[tuple[int, ...], object]

    @property
    def width(self) -> int:
        return len(self.ideals)


def cover_ideal_order(n: int):
    """(kind, data) descriptors in the canonical cover order."""
    out = []
    for size in range(1, n + 1):
        for S in combinations(range(1, n + 1), size):
            out.append(("K", S))
    for i in range(1, n):
        out.append(("L", i))
    return out


def _certificate_for(n: int, kinds: list[tuple], T: tuple[int, ...],
                     members: tuple[int, ...], ideal: IdealBasis):
    """Certificate that the (intersection) ideal is idempotent-generated.

    Each nonzero intersection equals a splice ideal: of the
    isolated/defect state for one K_S, of the cup/defect state for cup
    ideals.  When that state has a defect the unit diagram is searched;
    the defect-free cases are the empty diagram (all of S isolated) and
    the cup module (transported certificate).
    """
    tags = [kinds[i] for i in T]
    if any(t[0] == "K" for t in tags):
        if len(tags) != 1:
            raise CoverError(f"intersection {T} with a K term is nonzero")
        S = set(tags[0][1])
        state = LinkState(n, tuple(
            ISOLATED if v + 1 in S else DEFECT for v in range(n)))
    else:
        U = {t[1] for t in tags}
        st = [DEFECT] * n
        for i in U:
            st[i - 1], st[i] = i, i - 1
        state = LinkState(n, tuple(st))
    expected = ideal_J(state)
    if expected.diagrams != members:
        raise CoverError(
            f"{ideal.label}: members differ from the splice ideal of "
            f"{state.to_text()}")
    if state.defect_count() == 0:
        if all(x == ISOLATED for x in state.state):
            e = Diagram(n, tuple([-1] * (2 * n)))
            cert = assert_idempotent_generator(ideal, e)
        else:
            cert = certify_cup_module(n)
        if not cert.ok:
            raise CoverError(f"certificate failed for {ideal.label}")
        return cert
    e = find_idempotent(state)
    cert = assert_idempotent_generator(ideal, e)
    if not cert.ok:
        raise CoverError(
            f"certificate failed for {ideal.label}: {cert.failures()}")
    return cert


def build_cover(n: int) -> Cover:
    """The cover with all certificates attached; raises CoverError with
    the offending ideal named if any check fails."""
    kinds = cover_ideal_order(n)
    ideals = []
    for kind, data in kinds:
        ideals.append(ideal_K(n, data) if kind == "K" else ideal_L(n, data))
    # union must be exactly the augmentation ideal
    union: set[int] = set()
    for J in ideals:
        union.update(J.diagrams)
    if tuple(sorted(union)) != augmentation_ideal_basis(n).diagrams:
        raise CoverError("cover union differs from the augmentation ideal")
    # nonzero intersections, generic nerve walk
    nonzero: dict[tuple[int, ...], tuple[int, ...]] = {}
    frontier = [((i,), set(J.diagrams)) for i, J in enumerate(ideals)
                if J.diagrams]
    while frontier:
        fresh = []
        for T, members in frontier:
            nonzero[T] = tuple(sorted(members))
            for j in range(T[-1] + 1, len(ideals)):
                inter = members & set(ideals[j].diagrams)
                if inter:
                    fresh.append((T + (j,), inter))
        frontier = fresh
    certificates = {}
    for T, members in nonzero.items():
        if len(T) == 1:
            ideal = ideals[T[0]]
        else:
            ideal = intersect([ideals[i] for i in T])
        certificates[T] = _certificate_for(n, kinds, T, members, ideal)
    return Cover(n, ideals, nonzero, certificates)


@dataclass
class MVComplex:
    """The Mayer-Vietoris chain complex plus the module data needed to
    apply functors: summands[p] lists (cover index tuple, members)."""

    chain: ChainComplex
    n: int
    cover: Cover
    summands: dict[int, list[tuple[tuple[int, ...], tuple[int, ...]]]]
    shape_notes: list[str] = field(default_factory=list)

    @property
    def top_degree(self) -> int:
        return max(self.chain.degrees)


def build_mv_complex(cover: Cover, ring: Ring) -> MVComplex:
    """Assemble degrees -1..top with the signed inclusion differentials;
    requires the cover certificates (build_cover attaches them)."""
    n = cover.n
    if any(T not in cover.certificates for T in cover.nonzero):
        raise CoverError("cover is missing certificates")
    basis_size = len(enumerate_basis(n))
    by_degree: dict[int, list[tuple[tuple[int, ...], tuple[int, ...]]]] = {}
    for T, members in cover.nonzero.items():
        by_degree.setdefault(len(T), []).append((T, members))
    for p in by_degree:
        by_degree[p].sort(key=lambda tm: tm[0])

    degrees: dict[int, list] = {-1: ["1"], 0: list(range(basis_size))}
    offsets: dict[int, dict[tuple[int, ...], int]] = {}
    member_pos: dict[tuple[int, ...], dict[int, int]] = {}
    for p, summands in sorted(by_degree.items()):
        labels = []
        offsets[p] = {}
        for T, members in summands:
            offsets[p][T] = len(labels)
            member_pos[T] = {d: k for k, d in enumerate(members)}
            labels.extend((T, d) for d in members)
        degrees[p] = labels

    boundaries: dict[int, SparseMatrix] = {}
    boundaries[0] = SparseMatrix(
        1, basis_size, {(0, all_propagating_index(n)): 1})
    if 1 in degrees:
        entries = {}
        for col, (T, d) in enumerate(degrees[1]):
            entries[(d, col)] = 1
        boundaries[1] = SparseMatrix(basis_size, len(degrees[1]), entries)
    top = max(by_degree) if by_degree else 0
    for p in range(2, top + 1):
        entries = {}
        for col, (T, d) in enumerate(degrees[p]):
            for k, j in enumerate(T):
                rest = T[:k] + T[k + 1:]
                row = offsets[p - 1][rest] + member_pos[rest][d]
                if k % 2 == 0:
                    entries[(row, col)] = 1
                else:
                    entries[(row, col)] = -1
        boundaries[p] = SparseMatrix(
            len(degrees[p - 1]), len(degrees[p]), entries)

    chain = ChainComplex(ring, degrees, boundaries)
    notes = []
    if n % 2 == 1:
        display_top = max(1, n // 2 - 1)
        if top > display_top:
            notes.append(
                f"odd n={n}: nonzero Mayer-Vietoris term in degree {top} "
                f"beyond the displayed truncation at degree {display_top}; "
                "the complex follows the generic definition")
    summands = {p: by_degree.get(p, []) for p in by_degree}
    summands[0] = [((), tuple(range(basis_size)))]
    return MVComplex(chain, n, cover, summands, notes)


def verify_acyclic(mv: MVComplex, ring: Ring | None = None) -> HomologyResult:
    """Homology of the full complex, degree -1 included; a nonzero group
    is a verification failure reported in the result, not an exception."""
    return complex_homology(mv.chain, ring)


# ---------------------------------------------------------------------------
# functors


@dataclass
class TensorComplex:
    """Degreewise presentation of (trivial module) tensor the resolution:
    free on the original basis, modulo one modulus per killed position."""

    ring: Ring
    dims: dict[int, int]
    diffs: dict[int, SparseMatrix]
    moduli: dict[int, dict[int, int]]

    def homology(self) -> HomologyResult:
        return presented_complex_homology(
            self.ring, self.dims, self.diffs, self.moduli)


def tensor_trivial(mv: MVComplex, ring: Ring | None = None) -> TensorComplex:
    """Apply (trivial module) tensor_A (-) to degrees 0..top.

    For each degree the ideal times the module is spanned by single
    basis positions with delta-power coefficients (the product of two
    basis diagrams is one diagram), so the quotient presentation is
    diagonal; the moduli come from the cached module actions.
    """
    ring = mv.chain.ring if ring is None else ring
    n = mv.n
    dims: dict[int, int] = {}
    moduli: dict[int, dict[int, int]] = {}
    for p in mv.chain.degrees:
        if p < 0:
            continue
        dims[p] = mv.chain.rank(p)
        mm: dict[int, int] = {}
        offset = 0
        for T, members in mv.summands.get(p, []):
            action = module_action(n, tuple(members))
            for pos, m in tensor_moduli(action, ring).items():
                mm[offset + pos] = m
            offset += len(members)
        moduli[p] = mm
    diffs = {p: mv.chain.boundaries[p]
             for p in mv.chain.boundaries if p >= 1}
    return TensorComplex(ring, dims, diffs, moduli)


@dataclass
class HomComplex:
    """Cochain complex of Hom(C_p, trivial module) in solution bases.

    Stored as a chain complex under degree negation (degree -p holds
    Hom(C_p)), so homology machinery applies unchanged; cohomology in
    degree p is homology in degree -p.
    """

    ring: Ring
    dims: dict[int, int]
    chain: ChainComplex

    def cohomology(self) -> HomologyResult:
        h = complex_homology(self.chain)
        return HomologyResult(
            h.ring_desc, {-q: g for q, g in h.groups.items()})


def hom_trivial(mv: MVComplex, ring: Ring | None = None) -> HomComplex:
    """Apply Hom_A(-, trivial module) to degrees 0..top.

    Solution bases are integral for Z and Q (the integer solution
    lattice is saturated, hence also a Q-basis); induced maps are
    compositions with the boundaries, solved exactly in those bases.
    """
    ring = mv.chain.ring if ring is None else ring
    n = mv.n
    use_int = ring.kind in ("Z", "Q")
    solver_ring = Ring.integers(ring_delta_int(ring)) if use_int else ring
    bases: dict[int, list[dict[int, int]]] = {}
    for p in mv.chain.degrees:
        if p < 0:
            continue
        vecs: list[dict[int, int]] = []
        offset = 0
        for T, members in mv.summands.get(p, []):
            for v in hom_solver(tuple(members), n, solver_ring):
                vecs.append({offset + pos: c for pos, c in v.items()})
            offset += len(members)
        bases[p] = vecs

    degrees = {-p: [("hom", p, k) for k in range(len(bases[p]))]
               for p in bases}
    boundaries: dict[int, SparseMatrix] = {}
    top = max(bases)
    for p in range(top):
        src = bases[p]
        dst = bases[p + 1]
        dT = mv.chain.boundary(p + 1).transpose()
        if use_int:
            solver = LatticeSolver(dst)
        else:
            solver = FieldSolver(ring)
            for v in dst:
                solver.add_column(v)
        cols = []
        for f in src:
            target: dict[int, int] = {}
            for (r, c), v in dT.entries.items():
                if c in f:
                    target[r] = target.get(r, 0) + v * f[c]
            target = {r: v for r, v in target.items() if v}
            coeffs = solver.solve(target)
            cols.append({k: int(c) for k, c in enumerate(coeffs) if c})
        boundaries[-p] = SparseMatrix.from_columns(len(dst), cols)
    dims = {p: len(bases[p]) for p in bases}
    # ring for the cochain: Z-entried matrices interpreted in `ring`
    chain = ChainComplex(ring, degrees, boundaries)
    return HomComplex(ring, dims, chain)


def tor_via_resolution(mv: MVComplex, ring: Ring | None = None) -> HomologyResult:
    return tensor_trivial(mv, ring).homology()


def ext_via_resolution(mv: MVComplex, ring: Ring | None = None) -> HomologyResult:
    return hom_trivial(mv, ring).cohomology()
