"""Search for a local projection on the non-kept parties leaving a pair entangled.

The ladder runs cheap exact enumerations first and a numerical fallback last:

  S1  computational basis vectors per projected party,
  S2  the alphabet |0>, |1>, |+>, |->,
  S3  real tilted vectors cos(g)|0> + sin(g)|1> on up to two parties at a
      time over an angle mesh, the rest drawn from the S2 alphabet,
  S4  seeded random restarts refined by coordinate ascent on Bloch angles.

Candidates are enumerated in a deterministic order, so identical inputs and
seed give identical certificates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, product as iproduct
from typing import Optional, Union

import numpy as np
from scipy.optimize import minimize_scalar

from .entanglement import concurrence, separability_report
from .errors import (
    FullyProductError,
    SearchExhaustedError,
    ZeroOutcomeError,
)
from .statevec import LocalVector, PureState, _contract, project
from .tolerances import SUCCESS_FLOOR, TOL_ZERO

_STAGE_ORDER = ("S1", "S2", "S3", "S4")

_SYMBOLS = {
    "0": np.array([1.0, 0.0], dtype=complex),
    "1": np.array([0.0, 1.0], dtype=complex),
    "+": np.array([1.0, 1.0], dtype=complex) / math.sqrt(2.0),
    "-": np.array([1.0, -1.0], dtype=complex) / math.sqrt(2.0),
}
_S1_SYMBOLS = ("0", "1")
_S2_SYMBOLS = ("0", "1", "+", "-")

_TRIVIAL = np.array([1.0], dtype=complex)


@dataclass(frozen=True)
class StrategyLadder:
    """Ordered search stages with their parameters."""

    stages: tuple[str, ...] = _STAGE_ORDER
    grid_points: int = 24
    restarts: int = 10

    def __post_init__(self):
        stages = tuple(self.stages)
        if not stages or any(s not in _STAGE_ORDER for s in stages):
            raise ValueError(f"stages must be drawn from {_STAGE_ORDER}, got {stages}")
        if list(stages) != sorted(set(stages), key=_STAGE_ORDER.index):
            raise ValueError("stages must be unique and in ladder order")
        if self.grid_points < 2:
            raise ValueError("grid_points must be >= 2")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        object.__setattr__(self, "stages", stages)

    @classmethod
    def up_to(cls, last_stage: str, **kwargs) -> "StrategyLadder":
        if last_stage not in _STAGE_ORDER:
            raise ValueError(f"unknown stage {last_stage!r}")
        cut = _STAGE_ORDER.index(last_stage) + 1
        return cls(stages=_STAGE_ORDER[:cut], **kwargs)


@dataclass(frozen=True)
class ProjectionCertificate:
    """A projection that provably leaves the kept pair entangled.

    Re-projecting the state with the stored assignments reproduces residual,
    weight, and concurrence; see verify_certificate.
    """

    keep_pair: tuple[int, int]
    assignments: tuple[LocalVector, ...]
    residual: PureState
    concurrence: float
    weight: float
    strategy_used: str


@dataclass(frozen=True)
class PairFailure:
    """Per-pair failure tag from certify_all_pairs."""

    keep_pair: tuple[int, int]
    reason: str  # "fully_product" or "search_exhausted"
    message: str
    best_concurrence: float = 0.0


PairResult = Union[ProjectionCertificate, PairFailure]


def _tilted(angle: float) -> np.ndarray:
    return np.array([math.cos(angle), math.sin(angle)], dtype=complex)


def _stage_candidates(stage: str, free_parties, ladder: StrategyLadder):
    """Yield {party: coords} maps for one enumerative stage, deterministic order."""
    m = len(free_parties)
    if stage == "S1":
        for symbols in iproduct(_S1_SYMBOLS, repeat=m):
            yield {p: _SYMBOLS[s] for p, s in zip(free_parties, symbols)}
    elif stage == "S2":
        for symbols in iproduct(_S2_SYMBOLS, repeat=m):
            yield {p: _SYMBOLS[s] for p, s in zip(free_parties, symbols)}
    elif stage == "S3":
        if m == 0:
            return
        angles = [k * math.pi / ladder.grid_points for k in range(ladder.grid_points)]
        tilt_sets = [(free_parties[0],)] if m == 1 else list(combinations(free_parties, 2))
        for tilted in tilt_sets:
            others = [p for p in free_parties if p not in tilted]
            for symbols in iproduct(_S2_SYMBOLS, repeat=len(others)):
                fixed = {p: _SYMBOLS[s] for p, s in zip(others, symbols)}
                for grid in iproduct(angles, repeat=len(tilted)):
                    cand = dict(fixed)
                    for p, g in zip(tilted, grid):
                        cand[p] = _tilted(g)
                    yield cand
    else:  # pragma: no cover - S4 is handled by refine
        raise ValueError(f"no enumerative candidates for stage {stage}")


def _coords_to_angles(coords: np.ndarray) -> tuple[float, float]:
    theta = 2.0 * math.atan2(abs(coords[1]), abs(coords[0]))
    phi = float(np.angle(coords[1]) - np.angle(coords[0])) if abs(coords[1]) > 0 else 0.0
    return theta, phi


def _angles_to_coords(theta: float, phi: float) -> np.ndarray:
    return np.array(
        [math.cos(theta / 2.0), math.sin(theta / 2.0) * np.exp(1j * phi)], dtype=complex
    )


def _pair_operator(state: PureState, p: int, q: int, fixed, free_party: int) -> np.ndarray:
    """Unnormalized residual tensor M[m, i, j] = branch of |m> on the free party."""
    tensor = _contract(state, fixed)
    order = sorted([p, q, free_party])
    perm = [order.index(free_party), order.index(p), order.index(q)]
    return tensor.transpose(perm)


def _two_party_operator(
    state: PureState, p: int, q: int, fixed, fi: int, fj: int
) -> np.ndarray:
    """M[m, n, i, j]: pair branch of |m> on party fi and |n> on party fj."""
    tensor = _contract(state, fixed)
    order = sorted([p, q, fi, fj])
    perm = [order.index(fi), order.index(fj), order.index(p), order.index(q)]
    return tensor.transpose(perm)


def _operator_concurrence(m_op: np.ndarray, coords: np.ndarray) -> float:
    r = coords[0].conjugate() * m_op[0] + coords[1].conjugate() * m_op[1]
    n2 = float(np.sum(np.abs(r) ** 2))
    if n2 < TOL_ZERO**2:
        return 0.0
    return 2.0 * abs(r[0, 0] * r[1, 1] - r[0, 1] * r[1, 0]) / n2


def _best_angle(fn, lo: float, hi: float, coarse: int = 16) -> tuple[float, float]:
    """Coarse grid scan then bounded refinement; returns (angle, value)."""
    xs = np.linspace(lo, hi, coarse, endpoint=False)
    vals = [fn(x) for x in xs]
    k = int(np.argmax(vals))
    span = (hi - lo) / coarse
    res = minimize_scalar(
        lambda x: -fn(x),
        bounds=(xs[k] - span, xs[k] + span),
        method="bounded",
        options={"xatol": 1e-12},
    )
    if -res.fun > vals[k]:
        return float(res.x), float(-res.fun)
    return float(xs[k]), float(vals[k])


def _split_parties(state: PureState, p: int, q: int):
    projected = [i for i in range(1, state.n_parties + 1) if i not in (p, q)]
    trivial = [LocalVector(i, _TRIVIAL) for i in projected if state.dims[i - 1] == 1]
    free = [i for i in projected if state.dims[i - 1] == 2]
    return trivial, free


def _validated_pair(state: PureState, keep_pair) -> tuple[int, int]:
    p, q = sorted(int(x) for x in keep_pair)
    if p == q or p < 1 or q > state.n_parties:
        raise ValueError(f"invalid keep pair {keep_pair}")
    if any(d > 2 for d in state.dims):
        raise ValueError("search requires parties of dimension <= 2; reduce first")
    return p, q


def refine(
    state: PureState,
    keep_pair,
    start_assignments,
    max_sweeps: int = 200,
    min_gain: float = 1e-10,
) -> ProjectionCertificate:
    """Coordinate ascent on per-party Bloch angles, maximizing pair concurrence.

    The concurrence sequence is non-decreasing; ascent stops when a full
    sweep improves it by less than min_gain or after max_sweeps sweeps.
    When single-coordinate moves stall on a plateau (product residuals along
    every axis direction, as happens from computational starts), one joint
    probe over party pairs on a coarse tilt grid is tried before giving up.
    Returns the best point found, even when it falls short of a violation.
    """
    p, q = _validated_pair(state, keep_pair)
    trivial, free = _split_parties(state, p, q)
    by_party = {lv.party: lv.coords for lv in start_assignments}
    missing = [i for i in free if i not in by_party]
    if missing:
        raise ValueError(f"start assignments missing parties {missing}")
    angles = {i: _coords_to_angles(np.asarray(by_party[i], dtype=complex)) for i in free}

    def _fixed_for(skip) -> list:
        return trivial + [
            LocalVector(i, _angles_to_coords(*angles[i])) for i in free if i not in skip
        ]

    def current_value() -> float:
        try:
            residual, _ = project(state, _fixed_for(()))
        except ZeroOutcomeError:
            return 0.0
        return concurrence(residual)

    def pairwise_probe() -> float:
        """Best joint two-party tilt on a coarse grid; applies it if found."""
        probe_angles = [k * math.pi / 8 for k in range(8)]
        best_move = None
        best_move_val = best_val
        pairs = list(combinations(free, 2)) if len(free) > 1 else []
        for fi, fj in pairs:
            m_op = _two_party_operator(state, p, q, _fixed_for((fi, fj)), fi, fj)
            for gi in probe_angles:
                half = np.tensordot(_tilted(gi).conj(), m_op, axes=(0, 0))
                for gj in probe_angles:
                    val = _operator_concurrence(half, _tilted(gj))
                    if val > best_move_val:
                        best_move_val = val
                        best_move = ((fi, gi), (fj, gj))
        if len(free) == 1:
            i = free[0]
            m_op = _pair_operator(state, p, q, _fixed_for((i,)), i)
            for t in probe_angles:
                for f in [k * math.pi / 4 for k in range(8)]:
                    val = _operator_concurrence(m_op, _angles_to_coords(2 * t, f))
                    if val > best_move_val:
                        best_move_val = val
                        best_move = ((i, (2 * t, f)),)
        if best_move is None:
            return best_val
        for party, move in best_move:
            angles[party] = (
                move if isinstance(move, tuple) else _coords_to_angles(_tilted(move))
            )
        return best_move_val

    best_val = current_value()
    for _ in range(max_sweeps):
        sweep_start = best_val
        for i in free:
            m_op = _pair_operator(state, p, q, _fixed_for((i,)), i)
            theta, phi = angles[i]

            def val_theta(t, _phi=phi, _m=m_op):
                return _operator_concurrence(_m, _angles_to_coords(t, _phi))

            t_new, v_new = _best_angle(val_theta, 0.0, math.pi)
            if v_new > best_val:
                theta, best_val = t_new, v_new

            def val_phi(f, _theta=theta, _m=m_op):
                return _operator_concurrence(_m, _angles_to_coords(_theta, f))

            f_new, v_new = _best_angle(val_phi, 0.0, 2.0 * math.pi)
            if v_new > best_val:
                phi, best_val = f_new, v_new
            angles[i] = (theta, phi)
        if best_val - sweep_start < min_gain:
            best_val = pairwise_probe()
            if best_val - sweep_start < min_gain:
                break

    assignments = sorted(
        trivial + [LocalVector(i, _angles_to_coords(*angles[i])) for i in free],
        key=lambda lv: lv.party,
    )
    residual, weight = project(state, assignments)
    return ProjectionCertificate(
        (p, q), tuple(assignments), residual, concurrence(residual), weight, "S4"
    )


def find_entangling_projection(
    state: PureState,
    keep_pair,
    ladder: Optional[StrategyLadder] = None,
    seed: int = 0,
    success_floor: float = SUCCESS_FLOOR,
) -> ProjectionCertificate:
    """Run the ladder until a projection leaves the kept pair entangled.

    Raises FullyProductError when the input carries no entanglement at all or
    a kept party is a trivial dimension-1 factor, and SearchExhaustedError
    when the ladder completes without reaching success_floor (the message
    reports the best candidate found).
    """
    ladder = ladder or StrategyLadder()
    p, q = _validated_pair(state, keep_pair)
    if state.dims[p - 1] == 1 or state.dims[q - 1] == 1:
        raise FullyProductError(
            f"party {p if state.dims[p - 1] == 1 else q} is a dimension-1 factor; "
            "the pair stays product under every projection"
        )
    if separability_report(state).fully_product:
        raise FullyProductError("state is fully product; there is no entanglement to extract")

    trivial, free = _split_parties(state, p, q)
    best: Optional[tuple[float, list, PureState, float, str]] = None

    def consider(assignments, stage: str) -> Optional[ProjectionCertificate]:
        nonlocal best
        try:
            residual, weight = project(state, assignments)
        except ZeroOutcomeError:
            return None
        c = concurrence(residual)
        if best is None or c > best[0] + 1e-15:
            best = (c, assignments, residual, weight, stage)
        if c >= success_floor:
            ordered = tuple(sorted(assignments, key=lambda lv: lv.party))
            return ProjectionCertificate((p, q), ordered, residual, c, weight, stage)
        return None

    for stage in ladder.stages:
        if stage == "S4":
            rng = np.random.default_rng(seed)
            starts = []
            if best is not None:
                starts.append([lv for lv in best[1] if lv.party in free])
            for _ in range(ladder.restarts):
                starts.append(
                    [
                        LocalVector(
                            i,
                            _angles_to_coords(
                                rng.uniform(0.0, math.pi), rng.uniform(0.0, 2.0 * math.pi)
                            ),
                        )
                        for i in free
                    ]
                )
            for start in starts:
                cert = refine(state, (p, q), start)
                found = consider(list(cert.assignments), "S4")
                if found is not None:
                    return found
        else:
            for cand in _stage_candidates(stage, free, ladder):
                assignments = trivial + [LocalVector(i, v) for i, v in cand.items()]
                cert = consider(assignments, stage)
                if cert is not None:
                    return cert

    best_c = best[0] if best is not None else 0.0
    raise SearchExhaustedError(
        f"ladder {ladder.stages} exhausted for pair ({p}, {q}); best concurrence "
        f"{best_c:.3e} < floor {success_floor:g}",
        best_concurrence=best_c,
        best_assignments=tuple(best[1]) if best is not None else None,
    )


def certify_all_pairs(
    state: PureState,
    ladder: Optional[StrategyLadder] = None,
    seed: int = 0,
    success_floor: float = SUCCESS_FLOOR,
) -> dict:
    """Run the search for every unordered pair; failures become per-pair tags."""
    results: dict = {}
    for p, q in combinations(range(1, state.n_parties + 1), 2):
        try:
            results[(p, q)] = find_entangling_projection(
                state, (p, q), ladder, seed, success_floor
            )
        except FullyProductError as exc:
            results[(p, q)] = PairFailure((p, q), "fully_product", str(exc))
        except SearchExhaustedError as exc:
            results[(p, q)] = PairFailure(
                (p, q), "search_exhausted", str(exc), exc.best_concurrence
            )
    return results


def verify_certificate(
    state: PureState,
    cert: ProjectionCertificate,
    tol: float = 1e-9,
    success_floor: float = SUCCESS_FLOOR,
) -> float:
    """Re-derive the certificate from scratch; raises ValueError on any mismatch.

    Returns the recomputed concurrence.
    """
    from .statevec import states_allclose

    residual, weight = project(state, list(cert.assignments))
    if residual.dims != (2, 2):
        raise ValueError(f"residual is not a two-qubit state: dims {residual.dims}")
    if not states_allclose(residual, cert.residual, tol):
        raise ValueError("recomputed residual differs from the certificate")
    c = concurrence(residual)
    if abs(c - cert.concurrence) > tol:
        raise ValueError(
            f"recomputed concurrence {c} differs from certificate {cert.concurrence}"
        )
    if abs(weight - cert.weight) > tol:
        raise ValueError(f"recomputed weight {weight} differs from certificate {cert.weight}")
    if c < success_floor:
        raise ValueError(f"certificate concurrence {c} below success floor {success_floor}")
    return c
