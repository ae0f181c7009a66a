"""Separability tests for pure states and two-qubit entanglement quantification."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import DimensionMismatchError
from .statevec import Bipartition, PureState
from .tolerances import RANK_TOL


def schmidt_rank(state: PureState, cut: Bipartition, rank_tol: float = RANK_TOL) -> int:
    """Number of singular values above rank_tol across the cut."""
    perm = [p - 1 for p in cut.side_a] + [p - 1 for p in cut.side_b]
    da = math.prod(state.dims[p - 1] for p in cut.side_a)
    db = math.prod(state.dims[p - 1] for p in cut.side_b)
    mat = state.tensor().transpose(perm).reshape(da, db)
    s = np.linalg.svd(mat, compute_uv=False)
    return int(np.count_nonzero(s > rank_tol))


def is_product_across(state: PureState, cut: Bipartition, rank_tol: float = RANK_TOL) -> bool:
    """True iff the state factorizes across the cut (Schmidt rank one)."""
    return schmidt_rank(state, cut, rank_tol) == 1


@dataclass(frozen=True)
class SeparabilityReport:
    """Schmidt ranks of the scanned bipartitions of a pure state.

    fully_product is decided by the single-party cuts alone, which is exact
    for pure states; entangled_cuts lists every scanned cut with rank >= 2.
    """

    ranks: dict
    fully_product: bool
    entangled_cuts: tuple[Bipartition, ...]


def separability_report(state: PureState, rank_tol: float = RANK_TOL) -> SeparabilityReport:
    """Evaluate all 1-vs-rest cuts, plus all 2-vs-rest cuts when N <= 6."""
    n = state.n_parties
    if n < 2:
        raise ValueError("separability needs at least two parties")
    cuts = [Bipartition.of((p,), n) for p in range(1, n + 1)]
    if 4 <= n <= 6:
        cuts.extend(Bipartition.of(pair, n) for pair in combinations(range(1, n + 1), 2))
    elif n == 3:
        pass  # 2-vs-rest duplicates the 1-vs-rest cuts at N=3

    ranks: dict = {}
    for cut in cuts:
        ranks[cut.canonical()] = schmidt_rank(state, cut, rank_tol)
    single = [Bipartition.of((p,), n).canonical() for p in range(1, n + 1)]
    fully_product = all(ranks[c] == 1 for c in single)
    entangled = tuple(c for c in ranks if ranks[c] >= 2)
    return SeparabilityReport(ranks, fully_product, entangled)


def concurrence(two_qubit: PureState) -> float:
    """Two-qubit pure-state concurrence 2|a00*a11 - a01*a10|, in [0, 1]."""
    if two_qubit.dims != (2, 2):
        raise DimensionMismatchError(f"concurrence needs dims (2, 2), got {two_qubit.dims}")
    a = two_qubit.amps
    return float(min(2.0 * abs(a[0] * a[3] - a[1] * a[2]), 1.0))
