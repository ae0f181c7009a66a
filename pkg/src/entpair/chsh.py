"""Maximal CHSH violation of a two-qubit pure state, with optimal settings.

The construction goes through the Pauli correlation matrix T with
T_ij = <sigma_i (x) sigma_j>: the maximum of the CHSH functional over
measurement directions is 2*sqrt(t1 + t2), with t1 >= t2 the two largest
eigenvalues of T^T T, and the optimizing directions come from the singular
vectors. For pure states this equals 2*sqrt(1 + C^2) with C the concurrence,
which ties violation (s_max > 2) exactly to entanglement (C > 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .entanglement import concurrence
from .errors import DimensionMismatchError, NonUnitVectorError
from .statevec import PureState

PAULIS = np.stack(
    [
        np.array([[0, 1], [1, 0]], dtype=complex),
        np.array([[0, -1j], [1j, 0]], dtype=complex),
        np.array([[1, 0], [0, -1]], dtype=complex),
    ]
)

# preference order x, z, y when sign-fixing singular vectors
_SIGN_ORDER = (0, 2, 1)


@dataclass(frozen=True)
class ChshCertificate:
    """Maximal CHSH value with the settings that attain it.

    settings = (a, a_prime, b, b_prime) are unit Bloch vectors; evaluating
    the CHSH functional at them reproduces s_max.
    """

    s_max: float
    settings: tuple
    correlation_matrix: np.ndarray


def correlation_matrix(two_qubit: PureState) -> np.ndarray:
    """Real 3x3 matrix of Pauli pair expectations."""
    if two_qubit.dims != (2, 2):
        raise DimensionMismatchError(f"need dims (2, 2), got {two_qubit.dims}")
    m = two_qubit.amps.reshape(2, 2)
    return np.einsum("ab,iac,jbd,cd->ij", m.conj(), PAULIS, PAULIS, m).real


def _sign_fix(u: np.ndarray, vh: np.ndarray, k: int) -> None:
    for idx in _SIGN_ORDER:
        if abs(u[idx, k]) > 1e-9:
            if u[idx, k] < 0:
                u[:, k] *= -1.0
                vh[k, :] *= -1.0
            return


def max_chsh(two_qubit: PureState) -> ChshCertificate:
    """Maximal CHSH value of a pure two-qubit state and optimal settings."""
    t = correlation_matrix(two_qubit)
    u, s, vh = np.linalg.svd(t)
    u = u.copy()
    vh = vh.copy()
    _sign_fix(u, vh, 0)
    _sign_fix(u, vh, 1)
    s_max = 2.0 * math.sqrt(s[0] ** 2 + s[1] ** 2)

    theta = math.atan2(s[1], s[0])
    a = u[:, 0]
    a_prime = u[:, 1]
    b = math.cos(theta) * vh[0, :] + math.sin(theta) * vh[1, :]
    b_prime = math.cos(theta) * vh[0, :] - math.sin(theta) * vh[1, :]

    gisin = 2.0 * math.sqrt(1.0 + concurrence(two_qubit) ** 2)
    if abs(s_max - gisin) > 1e-6:
        raise RuntimeError(
            f"internal cross-check failed: s_max {s_max} vs 2*sqrt(1+C^2) {gisin}"
        )
    return ChshCertificate(s_max, (a, a_prime, b, b_prime), t)


def evaluate_chsh(two_qubit: PureState, settings) -> float:
    """CHSH functional a.Tb + a.Tb' + a'.Tb - a'.Tb' at the given unit vectors."""
    vectors = [np.asarray(v, dtype=float) for v in settings]
    if len(vectors) != 4 or any(v.shape != (3,) for v in vectors):
        raise ValueError("settings must be four real 3-vectors")
    for v in vectors:
        if abs(np.linalg.norm(v) - 1.0) > 1e-9:
            raise NonUnitVectorError("measurement directions must be unit vectors")
    a, a_prime, b, b_prime = vectors
    t = correlation_matrix(two_qubit)
    return float(a @ t @ b + a @ t @ b_prime + a_prime @ t @ b - a_prime @ t @ b_prime)
