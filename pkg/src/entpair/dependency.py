"""Dependency tables of the pair factors left by computational projections.

For a qubit state and a kept pair (p, q), every computational projection of
the other parties leaves the pair in some state. When all of those residuals
are product states, the table records their factors alpha (on p) and beta
(on q) as functions of the projected bit string, and the analysis operations
ask which bits each factor actually depends on.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import Optional, Union

import numpy as np

from .entanglement import concurrence
from .errors import ZeroOutcomeError
from .statevec import LocalVector, PureState, _fix_phase, linearly_independent, project
from .tolerances import PROD_TOL, TOL_INDEP, TOL_ZERO

_E = (np.array([1.0, 0.0], dtype=complex), np.array([0.0, 1.0], dtype=complex))


@dataclass(frozen=True)
class TableEntry:
    """Pair factors and weight of one computational projection outcome.

    alpha is phase-fixed (first significant coordinate real positive);
    beta carries the entry's residual phase so that alpha (x) beta
    reproduces the projected branch exactly.
    """

    alpha: np.ndarray
    beta: np.ndarray
    weight: float
    concurrence: float


@dataclass(frozen=True)
class DependencyTable:
    """Complete map from projected bit strings to product pair factors."""

    keep_pair: tuple[int, int]
    projected_parties: tuple[int, ...]
    entries: dict

    def entry(self, bits) -> TableEntry:
        return self.entries[tuple(int(b) for b in bits)]

    def reconstruct(self) -> PureState:
        """Reassemble the input state from the table, up to a global phase."""
        n = len(self.projected_parties) + 2
        tensor = np.zeros((2,) * n, dtype=complex)
        p, q = self.keep_pair
        order = sorted([p, q, *self.projected_parties])
        for bits, e in self.entries.items():
            branch = np.sqrt(e.weight) * np.multiply.outer(e.alpha, e.beta)
            for party, b in zip(self.projected_parties, bits):
                branch = np.multiply.outer(branch, _E[b])
            # branch axes: p, q, projected... -> permute into party order
            axes_parties = [p, q, *self.projected_parties]
            perm = [axes_parties.index(party) for party in order]
            tensor += branch.transpose(perm)
        return PureState.normalized((2,) * n, tensor.reshape(-1))


@dataclass(frozen=True)
class EntangledAt:
    """A computational projection already left the kept pair entangled."""

    bits: tuple[int, ...]
    residual: PureState
    concurrence: float


TableOutcome = Union[DependencyTable, EntangledAt]


def _product_factors(residual: PureState, tol_zero: float = TOL_ZERO):
    """Split a (near-)product two-qubit state into its local factors."""
    mat = residual.amps.reshape(2, 2)
    u, s, vh = np.linalg.svd(mat)
    alpha = _fix_phase(u[:, 0], tol_zero)
    beta = alpha.conj() @ mat  # keeps the branch phase on the beta side
    return alpha, beta / np.linalg.norm(beta)


def build_table(
    state: PureState,
    keep_pair,
    prod_tol: float = PROD_TOL,
    tol_zero: float = TOL_ZERO,
    scan_all: bool = False,
) -> TableOutcome:
    """Scan all computational projections of the non-kept parties.

    Returns EntangledAt for the first bit string (ascending binary order)
    whose residual has concurrence >= prod_tol, short-circuiting unless
    scan_all is set; otherwise returns the complete DependencyTable.

    Raises ZeroOutcomeError when an outcome has vanishing weight, which
    signals a missing basis fix (see fix_nonvanishing).
    """
    if any(d != 2 for d in state.dims):
        raise ValueError("dependency tables require qubit parties throughout")
    p, q = sorted(int(x) for x in keep_pair)
    if p == q or p < 1 or q > state.n_parties:
        raise ValueError(f"invalid keep pair {keep_pair}")
    projected = tuple(i for i in range(1, state.n_parties + 1) if i not in (p, q))

    entries: dict = {}
    hit: Optional[EntangledAt] = None
    for bits in iproduct((0, 1), repeat=len(projected)):
        assignments = [LocalVector(party, _E[b]) for party, b in zip(projected, bits)]
        try:
            residual, weight = project(state, assignments, tol_zero)
        except ZeroOutcomeError as exc:
            raise ZeroOutcomeError(
                f"computational outcome {bits} on parties {projected} has vanishing "
                "weight; apply fix_nonvanishing first"
            ) from exc
        c = concurrence(residual)
        if c >= prod_tol:
            if hit is None:
                hit = EntangledAt(bits, residual, c)
            if not scan_all:
                return hit
        else:
            alpha, beta = _product_factors(residual, tol_zero)
            entries[bits] = TableEntry(alpha, beta, weight, c)
    if hit is not None:
        return hit
    return DependencyTable((p, q), projected, entries)


def _flip_keys(table: DependencyTable, index: int, context) -> tuple[tuple, tuple]:
    projected = table.projected_parties
    if index not in projected:
        raise ValueError(f"index {index} is not a projected party of {projected}")
    others = [i for i in projected if i != index]
    if set(context) != set(others):
        raise ValueError(f"context must assign exactly the parties {others}")
    lo = tuple(0 if i == index else int(context[i]) for i in projected)
    hi = tuple(1 if i == index else int(context[i]) for i in projected)
    return lo, hi


def depends_on(
    table: DependencyTable,
    side: str,
    index: int,
    context,
    tol_indep: float = TOL_INDEP,
) -> bool:
    """Whether the side's factor changes when the indexed bit flips in this context.

    side is "alpha" or "beta"; context maps each other projected party to its
    bit value. Change means linear independence of the two factors.
    """
    if side not in ("alpha", "beta"):
        raise ValueError(f"side must be 'alpha' or 'beta', got {side!r}")
    lo, hi = _flip_keys(table, index, context)
    e0, e1 = table.entries[lo], table.entries[hi]
    if side == "alpha":
        return linearly_independent(e0.alpha, e1.alpha, tol_indep)
    return linearly_independent(e0.beta, e1.beta, tol_indep)


def dependent_indices(
    table: DependencyTable, side: str, tol_indep: float = TOL_INDEP
) -> frozenset:
    """Projected parties on which the side's factor depends in some context."""
    found = set()
    for index in table.projected_parties:
        others = [i for i in table.projected_parties if i != index]
        for values in iproduct((0, 1), repeat=len(others)):
            if depends_on(table, side, index, dict(zip(others, values)), tol_indep):
                found.add(index)
                break
    return frozenset(found)


def partition_check(
    table: DependencyTable, tol_indep: float = TOL_INDEP
) -> Optional[tuple[frozenset, frozenset]]:
    """Split the projected indices into an alpha part and a beta part, if possible.

    Returns (alpha_indices, beta_indices) when the two dependency sets are
    disjoint: alpha is then constant under flips outside its set, and beta
    under flips outside its own. Returns None when some index drives both
    factors; on a state with an all-product table that absence means a
    superposed projection must entangle the pair (see the search ladder).
    """
    alpha_dep = dependent_indices(table, "alpha", tol_indep)
    beta_dep = dependent_indices(table, "beta", tol_indep)
    if alpha_dep & beta_dep:
        return None
    return alpha_dep, beta_dep
