"""Find a Hadamard subset that makes every computational amplitude nonvanishing.

Such a subset always exists for qubit states; failure to clear the floor
only signals that the numerical floor is too high. Subsets are tried in
order of increasing size, lexicographic within a size, so the result is
reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import NoSubsetFoundError
from .statevec import HADAMARD, PureState, apply_local_unitary
from .tolerances import AMP_FLOOR


@dataclass(frozen=True)
class BasisFix:
    subset: tuple[int, ...]
    fixed_state: PureState
    min_abs: float


def fix_nonvanishing(state: PureState, amp_floor: float = AMP_FLOOR) -> BasisFix:
    """Return the first Hadamard subset whose transform clears the amplitude floor.

    Parties of dimension 1 are trivial factors and are skipped; all other
    parties must be qubits (run reduce_to_qubits first).
    """
    if any(d > 2 for d in state.dims):
        raise ValueError("basis fixing needs qubit (or trivial) parties; reduce first")
    if state.n_parties > 20:
        raise ValueError("refusing to search subsets beyond 20 parties")
    eligible = [p for p, d in enumerate(state.dims, start=1) if d == 2]
    for size in range(len(eligible) + 1):
        for subset in combinations(eligible, size):
            fixed = state
            for p in subset:
                fixed = apply_local_unitary(fixed, p, HADAMARD)
            min_abs = float(np.min(np.abs(fixed.amps)))
            if min_abs > amp_floor:
                return BasisFix(subset, fixed, min_abs)
    raise NoSubsetFoundError(
        f"no Hadamard subset reached min amplitude > {amp_floor:g}; "
        "this is a numerical floor failure, lower amp_floor"
    )
