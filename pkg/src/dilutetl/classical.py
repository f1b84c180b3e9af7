"""Classical Temperley-Lieb contrast suite.

Classical diagrams are the dilute diagrams with no isolated vertices
(perfect planar matchings), and their product never annihilates: a
component stranded in the glued column is impossible when every vertex
has an edge.  Everything reuses the dilute machinery behind an
isolation-forbidding validator.

The point of this module is the contrast: at delta = 0 the classical
algebra on two strands has nonvanishing Tor in every degree (it is the
dual-numbers algebra k[e]/(e^2)), while the dilute algebra at the same
parameters vanishes above degree zero.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .diagrams import (
    Diagram,
    DiagramError,
    all_propagating_index,
    enumerate_basis,
    multiply_diagrams,
    product_table,
)
from .exact import DegreeHomology, LinearAlgebraError
from .homalg import bar_homology, bar_tor
from .rings import Ring


class NotClassicalError(DiagramError):
    pass


def as_tl_diagram(d: Diagram) -> Diagram:
    """Validate that d is a perfect matching (no isolated vertices)."""
    if d.isolated_slots():
        raise NotClassicalError(f"{d} has isolated vertices")
    return d


def catalan(n: int) -> int:
    import math

    return math.comb(2 * n, n) // (n + 1)


@lru_cache(maxsize=None)
def tl_basis_indices(n: int) -> tuple[int, ...]:
    return tuple(i for i, d in enumerate(enumerate_basis(n))
                 if not d.isolated_slots())


def tl_basis(n: int) -> tuple[Diagram, ...]:
    """Perfect planar matchings in canonical order (Catalan many)."""
    basis = enumerate_basis(n)
    return tuple(basis[i] for i in tl_basis_indices(n))


def tl_multiply(d1: Diagram, d2: Diagram) -> tuple[int, Diagram]:
    """(loop count, product diagram); classical products never die."""
    as_tl_diagram(d1), as_tl_diagram(d2)
    out = multiply_diagrams(d1, d2)
    if out.is_annihilated:
        raise LinearAlgebraError("classical product annihilated")
    return out.loops, as_tl_diagram(out.result)


@lru_cache(maxsize=None)
def _tl_restricted_table(n: int):
    """Product table over the classical ideal (non-identity matchings)."""
    res, loops = product_table(n)
    keep = tuple(i for i in tl_basis_indices(n)
                 if i != all_propagating_index(n))
    basis_size = len(enumerate_basis(n))
    idx = np.asarray(keep, dtype=np.int64)
    pos_of = np.full(basis_size, -1, dtype=np.int64)
    pos_of[idx] = np.arange(len(keep))
    sub = res[np.ix_(idx, idx)].astype(np.int64)
    if np.any(sub < 0):
        raise LinearAlgebraError("classical product annihilated")
    mapped = pos_of[sub]
    if np.any(mapped < 0):
        raise LinearAlgebraError("classical ideal not closed")
    alpha = loops[np.ix_(idx, idx)].astype(np.int64)
    return len(keep), mapped, alpha


def tl_bar_tor(n: int, ring: Ring, max_degree: int) -> list[DegreeHomology]:
    """Tor of the trivial module over the classical algebra, from the
    reduced bar complex of its augmentation ideal."""
    D, res_sub, alpha_sub = _tl_restricted_table(n)
    return bar_homology(D, res_sub, alpha_sub, ring, max_degree)


def tor_contrast(n: int, ring: Ring, max_degree: int) -> dict:
    """Side-by-side Tor dimensions, classical versus dilute."""
    classical = tl_bar_tor(n, ring, max_degree)
    dilute = bar_tor(n, ring, max_degree)
    return {
        "n": n,
        "ring": ring.descriptor(),
        "delta": ring.delta_descriptor(),
        "classical": [g.to_json_obj(p) for p, g in enumerate(classical)],
        "dilute": [g.to_json_obj(p) for p, g in enumerate(dilute)],
    }
