"""Dense pure states of N parties with projection, local-unitary, and Schmidt machinery.

Amplitudes are stored row-major with party 1 most significant, so the flat
index of the computational basis state ``|b1 b2 ... bN>`` is
``b1*d2*...*dN + ... + bN``. All operations are pure functions; states and
vectors are immutable after construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product as iproduct

import numpy as np

from .errors import (
    DimensionMismatchError,
    NonUnitaryError,
    ZeroOutcomeError,
    ZeroVectorError,
)
from .tolerances import RANK_TOL, TOL_NORM, TOL_ZERO

HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / math.sqrt(2.0)


def _fix_phase(amps: np.ndarray, tol_zero: float = TOL_ZERO) -> np.ndarray:
    """Rotate a global phase so the first amplitude above tol_zero is real positive."""
    for a in amps:
        if abs(a) > tol_zero:
            return amps * (abs(a) / a)
    return amps


@dataclass(frozen=True)
class PureState:
    """A normalized pure state over parties with the given local dimensions.

    Attributes:
        dims: local dimension per party, party 1 first; every entry >= 1.
        amps: complex amplitude vector of length prod(dims), unit norm.
    """

    dims: tuple[int, ...]
    amps: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) < 1 or any(d < 1 for d in dims):
            raise ValueError(f"dims must be positive integers, got {dims}")
        amps = np.array(self.amps, dtype=complex)
        if amps.ndim != 1 or amps.size != math.prod(dims):
            raise ValueError(
                f"amplitude vector has length {amps.size}, expected {math.prod(dims)}"
            )
        nrm = np.linalg.norm(amps)
        if abs(nrm - 1.0) > TOL_NORM:
            raise ValueError(f"state is not normalized: |norm - 1| = {abs(nrm - 1.0):.3e}")
        amps.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amps", amps)

    @classmethod
    def normalized(cls, dims, amps, tol_zero: float = TOL_ZERO) -> "PureState":
        """Build a state from an unnormalized vector, fixing the global phase."""
        amps = np.asarray(amps, dtype=complex)
        nrm = np.linalg.norm(amps)
        if nrm < tol_zero:
            raise ZeroVectorError("cannot normalize a (near-)zero amplitude vector")
        return cls(tuple(dims), _fix_phase(amps / nrm, tol_zero))

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per party."""
        return self.amps.reshape(self.dims)


@dataclass(frozen=True)
class LocalVector:
    """A normalized vector living on one party (1-based index)."""

    party: int
    coords: np.ndarray

    def __post_init__(self):
        if self.party < 1:
            raise ValueError(f"party index must be >= 1, got {self.party}")
        coords = np.array(self.coords, dtype=complex)
        if coords.ndim != 1 or coords.size < 1:
            raise ValueError("coords must be a nonempty 1-d vector")
        nrm = np.linalg.norm(coords)
        if abs(nrm - 1.0) > TOL_NORM:
            raise ValueError(f"local vector is not normalized: |norm - 1| = {abs(nrm - 1.0):.3e}")
        coords.setflags(write=False)
        object.__setattr__(self, "coords", coords)

    @classmethod
    def normalized(cls, party: int, coords, tol_zero: float = TOL_ZERO) -> "LocalVector":
        coords = np.asarray(coords, dtype=complex)
        nrm = np.linalg.norm(coords)
        if nrm < tol_zero:
            raise ZeroVectorError("cannot normalize a (near-)zero local vector")
        return cls(party, coords / nrm)


@dataclass(frozen=True)
class Bipartition:
    """A split of the parties {1..N} into two nonempty sorted sides."""

    side_a: tuple[int, ...]
    side_b: tuple[int, ...]

    def __post_init__(self):
        a = tuple(sorted(set(self.side_a)))
        b = tuple(sorted(set(self.side_b)))
        n = len(a) + len(b)
        if not a or not b:
            raise ValueError("both sides of a bipartition must be nonempty")
        if set(a) & set(b):
            raise ValueError("bipartition sides overlap")
        if set(a) | set(b) != set(range(1, n + 1)):
            raise ValueError(f"bipartition does not cover parties 1..{n}")
        object.__setattr__(self, "side_a", a)
        object.__setattr__(self, "side_b", b)

    @classmethod
    def of(cls, side_a, n_parties: int) -> "Bipartition":
        a = set(side_a)
        return cls(tuple(sorted(a)), tuple(sorted(set(range(1, n_parties + 1)) - a)))

    def canonical(self) -> "Bipartition":
        """Orientation-independent form: smaller side first, ties by content."""
        key_a = (len(self.side_a), self.side_a)
        key_b = (len(self.side_b), self.side_b)
        return self if key_a <= key_b else Bipartition(self.side_b, self.side_a)


@dataclass(frozen=True)
class SchmidtDecomposition:
    """Singular-value form of a state across a bipartition.

    coefficients are strictly positive and descending; left/right vectors are
    orthonormal and paired so that sum_i s_i |l_i>|r_i> reconstructs the state
    (in the axis order side_a then side_b).
    """

    coefficients: np.ndarray
    left_vectors: tuple[np.ndarray, ...]
    right_vectors: tuple[np.ndarray, ...]

    @property
    def rank(self) -> int:
        return len(self.coefficients)


def _contract(state: PureState, assignments) -> np.ndarray:
    """Contract <coords| onto each assigned party; kept axes stay in party order."""
    tensor = state.tensor()
    for lv in sorted(assignments, key=lambda a: a.party, reverse=True):
        tensor = np.tensordot(tensor, lv.coords.conj(), axes=(lv.party - 1, 0))
    return tensor


def _check_assignments(state: PureState, assignments, allow_all: bool = False) -> None:
    parties = [lv.party for lv in assignments]
    if len(set(parties)) != len(parties):
        raise ValueError("assignment parties must be distinct")
    if not allow_all and len(parties) >= state.n_parties:
        raise ValueError("cannot project every party; keep at least one")
    for lv in assignments:
        if not 1 <= lv.party <= state.n_parties:
            raise ValueError(f"party {lv.party} outside 1..{state.n_parties}")
        if lv.coords.size != state.dims[lv.party - 1]:
            raise DimensionMismatchError(
                f"vector on party {lv.party} has dimension {lv.coords.size}, "
                f"expected {state.dims[lv.party - 1]}"
            )


def project(
    state: PureState, assignments, tol_zero: float = TOL_ZERO
) -> tuple[PureState, float]:
    """Project the assigned parties onto local vectors and renormalize.

    Args:
        state: the input state.
        assignments: LocalVectors on distinct parties, fewer than N of them.
        tol_zero: outcome-norm floor below which the outcome never occurs.

    Returns:
        (residual, weight): the renormalized state on the kept parties (in
        ascending party order) and the squared pre-normalization norm.

    Raises:
        ZeroOutcomeError: the outcome has probability below tol_zero**2;
            the caller should pick a different basis (see fix_nonvanishing).
    """
    _check_assignments(state, assignments)
    tensor = _contract(state, assignments)
    nrm = np.linalg.norm(tensor)
    if nrm < tol_zero:
        raise ZeroOutcomeError(
            "projection outcome has vanishing probability; choose a different basis"
        )
    weight = min(float(nrm) ** 2, 1.0)
    projected = {lv.party for lv in assignments}
    kept_dims = tuple(d for i, d in enumerate(state.dims, start=1) if i not in projected)
    residual = PureState(kept_dims, _fix_phase(tensor.reshape(-1) / nrm, tol_zero))
    return residual, weight


def apply_local_unitary(state: PureState, party: int, u: np.ndarray) -> PureState:
    """Apply a d x d unitary to one party, leaving the others untouched."""
    if not 1 <= party <= state.n_parties:
        raise ValueError(f"party {party} outside 1..{state.n_parties}")
    d = state.dims[party - 1]
    u = np.asarray(u, dtype=complex)
    if u.shape != (d, d):
        raise DimensionMismatchError(f"unitary has shape {u.shape}, expected ({d}, {d})")
    if np.max(np.abs(u.conj().T @ u - np.eye(d))) > TOL_NORM:
        raise NonUnitaryError("matrix is not unitary within 1e-10")
    axis = party - 1
    tensor = np.moveaxis(np.tensordot(u, state.tensor(), axes=(1, axis)), 0, axis)
    return PureState(state.dims, tensor.reshape(-1))


def _vector_sort_key(vec: np.ndarray):
    return tuple((-round(c.real, 12), -round(c.imag, 12)) for c in vec)


def schmidt(
    state: PureState, cut: Bipartition, rank_tol: float = RANK_TOL
) -> SchmidtDecomposition:
    """Schmidt decomposition of the state across a bipartition.

    Coefficients are the singular values above rank_tol of the amplitude
    matrix reshaped by the cut, sorted descending. Near-degenerate values are
    ordered by the lexicographic form of the phase-fixed left vectors so
    repeated runs are bit-stable. Left vectors live on side_a (sorted party
    order), right vectors on side_b.
    """
    if len(cut.side_a) + len(cut.side_b) != state.n_parties:
        raise ValueError("bipartition does not match state size")
    perm = [p - 1 for p in cut.side_a] + [p - 1 for p in cut.side_b]
    da = math.prod(state.dims[p - 1] for p in cut.side_a)
    db = math.prod(state.dims[p - 1] for p in cut.side_b)
    mat = state.tensor().transpose(perm).reshape(da, db)
    u, s, vh = np.linalg.svd(mat, full_matrices=False)

    kept = [k for k in range(s.size) if s[k] > rank_tol]
    triples = []
    for k in kept:
        left = u[:, k]
        right = vh[k, :]
        for a in left:
            if abs(a) > TOL_ZERO:
                phase = abs(a) / a
                left = left * phase
                right = right * np.conj(phase)
                break
        triples.append((float(s[k]), left, right))

    # stable sort within near-degenerate clusters
    ordered: list[tuple[float, np.ndarray, np.ndarray]] = []
    i = 0
    while i < len(triples):
        j = i
        while j + 1 < len(triples) and triples[i][0] - triples[j + 1][0] <= rank_tol:
            j += 1
        cluster = sorted(triples[i : j + 1], key=lambda t: _vector_sort_key(t[1]))
        ordered.extend(cluster)
        i = j + 1

    coeffs = np.array([t[0] for t in ordered])
    lefts = tuple(t[1] for t in ordered)
    rights = tuple(t[2] for t in ordered)
    return SchmidtDecomposition(coeffs, lefts, rights)


def linearly_independent(u, v, tol: float = None) -> bool:
    """True iff u != lambda*v for every nonzero scalar lambda.

    Implemented as |<u|v>| / (|u||v|) < 1 - tol.
    """
    from .tolerances import TOL_INDEP

    if tol is None:
        tol = TOL_INDEP
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu < TOL_ZERO or nv < TOL_ZERO:
        raise ZeroVectorError("linear independence is undefined for zero vectors")
    return abs(np.vdot(u, v)) / (nu * nv) < 1.0 - tol


def states_allclose(a: PureState, b: PureState, tol: float = 1e-9) -> bool:
    """Whether two states agree up to a global phase, within max-abs tol."""
    if a.dims != b.dims:
        return False
    overlap = np.vdot(b.amps, a.amps)
    if abs(overlap) < TOL_ZERO:
        return bool(np.max(np.abs(a.amps)) <= tol and np.max(np.abs(b.amps)) <= tol)
    phase = overlap / abs(overlap)
    return bool(np.max(np.abs(a.amps - phase * b.amps)) <= tol)


_QUBIT_SYMBOLS = {
    "0": np.array([1.0, 0.0], dtype=complex),
    "1": np.array([0.0, 1.0], dtype=complex),
    "+": np.array([1.0, 1.0], dtype=complex) / math.sqrt(2.0),
    "-": np.array([1.0, -1.0], dtype=complex) / math.sqrt(2.0),
}


def qubit_ket(symbols: str) -> PureState:
    """Product state of qubits from a string over the alphabet 0, 1, +, -."""
    if not symbols or any(c not in _QUBIT_SYMBOLS for c in symbols):
        raise ValueError(f"symbols must be a nonempty string over 01+-, got {symbols!r}")
    amps = np.array([1.0], dtype=complex)
    for c in symbols:
        amps = np.kron(amps, _QUBIT_SYMBOLS[c])
    return PureState((2,) * len(symbols), amps)


def computational_ket(dims, digits) -> PureState:
    """Computational basis state |digits> for the given local dimensions."""
    dims = tuple(int(d) for d in dims)
    digits = tuple(int(b) for b in digits)
    if len(digits) != len(dims) or any(not 0 <= b < d for b, d in zip(digits, dims)):
        raise ValueError("digits must index one basis state per party")
    idx = 0
    for b, d in zip(digits, dims):
        idx = idx * d + b
    amps = np.zeros(math.prod(dims), dtype=complex)
    amps[idx] = 1.0
    return PureState(dims, amps)


def haar_random_state(dims, rng: np.random.Generator) -> PureState:
    """Haar-uniform pure state: normalized standard complex Gaussian amplitudes."""
    n = math.prod(int(d) for d in dims)
    amps = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return PureState.normalized(tuple(dims), amps)


def haar_random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed d x d unitary via QR of a complex Gaussian matrix."""
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def product_basis_indices(dims) -> list[tuple[int, ...]]:
    """All computational multi-indices in row-major (party 1 most significant) order."""
    return list(iproduct(*(range(d) for d in dims)))
