"""Locally project an entangled N-qudit pure state down to qubit-sized parties.

Parties are visited in order 1..N. A party whose cut against the rest has
Schmidt rank one is contracted onto its single Schmidt vector and kept as a
dimension-1 tensor factor (so party indexing stays stable); a party with
rank >= 2 is truncated to the span of its top two Schmidt vectors. Qubit
parties with rank 2 keep their computational basis, so an all-qubit state
with no product party passes through unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, PartyNotInTraceError
from .statevec import Bipartition, LocalVector, PureState, schmidt
from .tolerances import RANK_TOL


@dataclass(frozen=True)
class Kept1D:
    """Party was product against the rest; its sole Schmidt vector was kept."""

    vector: np.ndarray  # (d,) unit vector


@dataclass(frozen=True)
class Truncated2D:
    """Party was truncated to the span of two retained orthonormal vectors."""

    vectors: np.ndarray  # (d, 2) isometry, columns are the retained vectors


@dataclass(frozen=True)
class ReductionTrace:
    """Per-party actions of the reduction plus the all-qubit output state.

    weight is the cumulative squared norm retained by the truncations.
    output dims are 1 exactly at the Kept1D parties and 2 elsewhere.
    """

    input_dims: tuple[int, ...]
    actions: tuple
    output: PureState
    weight: float

    def isometry(self, party: int) -> np.ndarray:
        """The (d x k) isometry applied to a party; k = 1 or 2."""
        if not 1 <= party <= len(self.actions):
            raise PartyNotInTraceError(f"party {party} not in trace of {len(self.actions)}")
        action = self.actions[party - 1]
        if isinstance(action, Kept1D):
            return action.vector.reshape(-1, 1)
        return action.vectors


def reduce_to_qubits(state: PureState, rank_tol: float = RANK_TOL) -> ReductionTrace:
    """Iteratively truncate each party to at most two local dimensions.

    Entanglement survives: if the input is not fully product, neither is the
    output, because the last party whose truncation kept rank 2 stays
    entangled against the rest.
    """
    if state.n_parties < 2:
        raise ValueError("reduction needs at least two parties")
    n = state.n_parties
    current = state
    actions = []
    total_weight = 1.0
    for p in range(1, n + 1):
        dec = schmidt(current, Bipartition.of((p,), n), rank_tol)
        d = current.dims[p - 1]
        if dec.rank == 1:
            iso = dec.left_vectors[0].reshape(d, 1)
            actions.append(Kept1D(dec.left_vectors[0]))
        elif d == 2:
            actions.append(Truncated2D(np.eye(2, dtype=complex)))
            continue  # full-rank qubit party: nothing to do
        else:
            iso = np.column_stack([dec.left_vectors[0], dec.left_vectors[1]])
            actions.append(Truncated2D(iso))
        axis = p - 1
        tensor = np.moveaxis(
            np.tensordot(iso.conj().T, current.tensor(), axes=(1, axis)), 0, axis
        )
        total_weight *= float(np.linalg.norm(tensor) ** 2)
        new_dims = current.dims[:axis] + (iso.shape[1],) + current.dims[axis + 1 :]
        current = PureState.normalized(new_dims, tensor.reshape(-1))
    return ReductionTrace(state.dims, tuple(actions), current, min(total_weight, 1.0))


def embed_projection(trace: ReductionTrace, qubit_assignment: LocalVector) -> LocalVector:
    """Lift a qubit-level projection vector back to the original party dimension.

    Composing the original state with the lifted vector reproduces the
    qubit-level projection outcome, up to the trace's retained-pair
    coordinates on the kept parties.
    """
    party = qubit_assignment.party
    iso = trace.isometry(party)
    if qubit_assignment.coords.size != iso.shape[1]:
        raise DimensionMismatchError(
            f"assignment on party {party} has dimension {qubit_assignment.coords.size}, "
            f"trace retains {iso.shape[1]}"
        )
    return LocalVector(party, iso @ qubit_assignment.coords)


def lift_assignments(trace: ReductionTrace, assignments) -> tuple[LocalVector, ...]:
    """Lift every qubit-level assignment through the trace."""
    return tuple(embed_projection(trace, lv) for lv in assignments)
