"""Homological operations over the diagram algebra.

Three ingredients live here, all driven by the cached product table:

* symbolic module-action data: for a module spanned by a subset of the
  diagram basis, every product of an augmentation-ideal diagram with a
  member is a single diagram with a delta exponent, so the action is a
  finite set of (position, exponent) pairs, computed once per module
  and specialized per ring;
* the reduced bar complex, whose degree-p term is the p-th tensor power
  of the augmentation ideal - an independent route to Tor used as an
  oracle against the resolution computation;
* the Hom-space solver: Hom_A(M, 1) as the exact solution space of the
  linear constraints f(d m) = eps(d) f(m).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np

from .diagrams import (
    all_propagating_index,
    augmentation_ideal_indices,
    enumerate_basis,
    product_table,
)
from .exact import (
    DegreeHomology,
    HomologyResult,
    LinearAlgebraError,
    SparseMatrix,
    field_kernel,
    int_kernel,
    rank_csc,
    smith_normal_form,
)
from .rings import Ring, RingError

BAR_ENTRY_GUARD = 10 ** 7
BAR_ECHELON_GUARD = 3 * 10 ** 8  # int64 cells for the rank echelon


class SizeGuardExceeded(RuntimeError):
    def __init__(self, dimension: int):
        self.dimension = dimension
        super().__init__(
            f"bar computation needing {dimension} stored entries exceeds "
            "the size guard")


def ring_delta_int(ring: Ring) -> int:
    """The loop value as an integer (matrix entries stay integral)."""
    d = ring.delta
    if isinstance(d, Fraction):
        if d.denominator != 1:
            raise RingError("non-integer delta is not supported here")
        return int(d)
    if isinstance(d, int):
        return d
    raise RingError("delta must be specialized to an integer")


# ---------------------------------------------------------------------------
# symbolic module action


@dataclass(frozen=True)
class ModuleAction:
    """Products of basis diagrams with the members of one module.

    positions/exponents: deduplicated pairs (result position, loop
    count) over all products d*m with d in the augmentation ideal;
    unit_result[m_pos] is the position of allprop*m (-1 when that
    product is zero).  Left-ideal closure is asserted during the build.
    """

    n: int
    size: int
    positions: tuple[int, ...]
    exponents: tuple[int, ...]
    unit_result: tuple[int, ...]


@lru_cache(maxsize=None)
def module_action(n: int, members: tuple[int, ...]) -> ModuleAction:
    res, loops = product_table(n)
    basis_size = len(enumerate_basis(n))
    m_idx = np.asarray(members, dtype=np.int64)
    i_idx = np.asarray(augmentation_ideal_indices(n), dtype=np.int64)
    pos_of = np.full(basis_size, -1, dtype=np.int64)
    pos_of[m_idx] = np.arange(len(members))

    sub = res[np.ix_(i_idx, m_idx)]
    sub_a = loops[np.ix_(i_idx, m_idx)].astype(np.int64)
    alive = sub >= 0
    hit = sub[alive].astype(np.int64)
    hit_pos = pos_of[hit]
    if np.any(hit_pos < 0):
        raise LinearAlgebraError(
            "module is not closed under left multiplication")
    codes = hit_pos * 64 + sub_a[alive]
    uniq = np.unique(codes)
    positions = tuple(int(c) // 64 for c in uniq)
    exponents = tuple(int(c) % 64 for c in uniq)

    ap = all_propagating_index(n)
    urow = res[ap, m_idx].astype(np.int64)
    ua = loops[ap, m_idx]
    if np.any(ua[urow >= 0] != 0):
        raise LinearAlgebraError("unit diagram product formed a loop")
    unit_result = []
    for r in urow:
        if r < 0:
            unit_result.append(-1)
            continue
        pos = int(pos_of[r])
        if pos < 0:
            raise LinearAlgebraError("module not closed under the unit diagram")
        unit_result.append(pos)
    return ModuleAction(n, len(members), positions, exponents,
                        tuple(unit_result))


def tensor_moduli(action: ModuleAction, ring: Ring) -> dict[int, int]:
    """Presentation moduli of (trivial module) tensor M = M / I*M.

    Every relation is delta^a on a single basis position; per position
    the relations combine into the gcd of the nonzero achieved values.
    """
    delta = ring_delta_int(ring)
    out: dict[int, int] = {}
    for pos, a in zip(action.positions, action.exponents):
        v = delta ** a
        if v == 0:
            continue
        out[pos] = gcd(out.get(pos, 0), v)
    return out


def hom_constraints(action: ModuleAction, ring: Ring) -> SparseMatrix:
    """Constraint rows for Hom_A(M, 1): f(d m) = eps(d) f(m).

    For d in the augmentation ideal the row is delta^a f(result) = 0;
    for the all-propagating diagram it is f(result) - f(m) = 0, or
    f(m) = 0 when the product dies.
    """
    delta = ring_delta_int(ring)
    rows: set[tuple[tuple[int, int], ...]] = set()
    for pos, a in zip(action.positions, action.exponents):
        v = delta ** a
        if v != 0:
            rows.add(((pos, v),))
    for m_pos, r_pos in enumerate(action.unit_result):
        if r_pos < 0:
            rows.add(((m_pos, 1),))
        elif r_pos != m_pos:
            a, b = sorted((m_pos, r_pos))
            rows.add(((a, 1), (b, -1)))
    entries = {}
    for i, row in enumerate(sorted(rows)):
        for pos, v in row:
            entries[(i, pos)] = v
    return SparseMatrix(len(rows), action.size, entries)


def hom_solver(members: tuple[int, ...], n: int, ring: Ring) -> list[dict]:
    """Basis of Hom_A(M, 1) as coefficient vectors on M's diagram basis."""
    action = module_action(n, tuple(members))
    mat = hom_constraints(action, ring)
    if ring.kind == "Z":
        return int_kernel(mat)
    return field_kernel(mat, ring)


# ---------------------------------------------------------------------------
# reduced bar complex


def bar_differential_csc(D: int, res_sub: np.ndarray, alpha_sub: np.ndarray,
                         delta: int, p: int):
    """CSC data of d_p : X^(tensor p) -> X^(tensor p-1) for the reduced
    bar complex: alternating sums of adjacent multiplications."""
    ncols = D ** p
    nrows = D ** (p - 1)
    cols_all = []
    rows_all = []
    vals_all = []
    max_a = int(alpha_sub.max(initial=0))
    delta_pows = np.array([delta ** a for a in range(max_a + 1)],
                          dtype=np.int64)
    base = np.arange(ncols, dtype=np.int64)
    for t in range(1, p):
        hi = D ** (p - t)
        lo = D ** (p - t - 1)
        x_t = (base // hi) % D
        x_t1 = (base // lo) % D
        pr = res_sub[x_t, x_t1]
        alive = pr >= 0
        if not np.any(alive):
            continue
        a = alpha_sub[x_t, x_t1][alive].astype(np.int64)
        vals = delta_pows[a] * ((-1) ** t)
        nz = vals != 0
        if not np.any(nz):
            continue
        cols_t = base[alive][nz]
        high = cols_t // (hi * D)
        low = cols_t % lo
        rows_t = (high * D + pr[alive][nz].astype(np.int64)) * lo + low
        cols_all.append(cols_t)
        rows_all.append(rows_t)
        vals_all.append(vals[nz])
    if not cols_all:
        indptr = np.zeros(ncols + 1, dtype=np.int64)
        return indptr, np.zeros(0, np.int64), np.zeros(0, np.int64), nrows
    cols_c = np.concatenate(cols_all)
    rows_c = np.concatenate(rows_all)
    vals_c = np.concatenate(vals_all)
    order = np.argsort(cols_c, kind="stable")
    cols_c, rows_c, vals_c = cols_c[order], rows_c[order], vals_c[order]
    indptr = np.zeros(ncols + 1, dtype=np.int64)
    np.add.at(indptr, cols_c + 1, 1)
    indptr = np.cumsum(indptr)
    return indptr, rows_c, vals_c, nrows


def _csc_to_sparse(indptr, rowidx, vals, nrows) -> SparseMatrix:
    entries: dict[tuple[int, int], int] = {}
    ncols = len(indptr) - 1
    for c in range(ncols):
        for t in range(int(indptr[c]), int(indptr[c + 1])):
            key = (int(rowidx[t]), c)
            entries[key] = entries.get(key, 0) + int(vals[t])
    return SparseMatrix(nrows, ncols, {k: v for k, v in entries.items() if v})


def bar_homology(D: int, res_sub: np.ndarray, alpha_sub: np.ndarray,
                 ring: Ring, max_degree: int) -> list[DegreeHomology]:
    """Tor dimensions from the reduced bar complex of an augmented
    algebra whose augmentation ideal has basis size D and single-diagram
    products given by (res_sub, alpha_sub).  Degree 0 is the ground ring
    by convention; d_1 = 0 because the augmentation kills the ideal.
    """
    top_p = max_degree + 1
    top_entries = max((p - 1) * D ** p for p in range(2, top_p + 1)) \
        if top_p >= 2 else 0
    if top_entries > BAR_ENTRY_GUARD:
        raise SizeGuardExceeded(top_entries)
    for p in range(2, top_p + 1):
        nrows = D ** (p - 1)
        if min(D ** p, nrows) * nrows > BAR_ECHELON_GUARD:
            raise SizeGuardExceeded(min(D ** p, nrows) * nrows)
    delta = ring_delta_int(ring)
    ranks = {1: 0}
    torsions = {1: ()}
    for p in range(2, max_degree + 2):
        indptr, rowidx, vals, nrows = bar_differential_csc(
            D, res_sub, alpha_sub, delta, p)
        if ring.kind == "Z":
            snf = smith_normal_form(_csc_to_sparse(indptr, rowidx, vals, nrows))
            ranks[p] = snf.rank
            torsions[p] = snf.torsion()
        else:
            ranks[p] = rank_csc(indptr, rowidx, list(vals), nrows, ring)
            torsions[p] = ()
    out = [DegreeHomology(1, ())]
    for p in range(1, max_degree + 1):
        betti = D ** p - ranks[p] - ranks[p + 1]
        out.append(DegreeHomology(betti, torsions[p + 1]))
    return out


def _restricted_table(n: int, keep: tuple[int, ...]):
    """Product table restricted to a subset closed under multiplication."""
    res, loops = product_table(n)
    basis_size = len(enumerate_basis(n))
    idx = np.asarray(keep, dtype=np.int64)
    pos_of = np.full(basis_size, -1, dtype=np.int64)
    pos_of[idx] = np.arange(len(keep))
    sub = res[np.ix_(idx, idx)].astype(np.int64)
    alive = sub >= 0
    mapped = np.where(alive, pos_of[np.where(alive, sub, 0)], -1)
    if np.any(mapped[alive] < 0):
        raise LinearAlgebraError("subset not closed under multiplication")
    alpha_sub = loops[np.ix_(idx, idx)].astype(np.int64)
    alpha_sub[~alive] = 0
    return mapped.astype(np.int64), alpha_sub


def bar_tor(n: int, ring: Ring, max_degree: int) -> list[DegreeHomology]:
    """Tor of the trivial module over the dilute diagram algebra, from
    the reduced bar complex; degrees 0..max_degree."""
    ideal = augmentation_ideal_indices(n)
    res_sub, alpha_sub = _restricted_table(n, ideal)
    return bar_homology(len(ideal), res_sub, alpha_sub, ring, max_degree)
