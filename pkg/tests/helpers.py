"""Shared builders and independent oracles used across the test modules."""

from __future__ import annotations

import math
from itertools import product as iproduct

import numpy as np

from entpair import PureState


def named_state(name: str) -> PureState:
    s2 = 1.0 / math.sqrt(2.0)
    s3 = 1.0 / math.sqrt(3.0)
    table = {
        "bell": ((2, 2), {0: s2, 3: s2}),
        "ghz3": ((2, 2, 2), {0: s2, 7: s2}),
        "ghz4": ((2, 2, 2, 2), {0: s2, 15: s2}),
        "w3": ((2, 2, 2), {1: s3, 2: s3, 4: s3}),
        "counterexample": ((2, 2, 2, 2), {0b0000: 0.5, 0b0101: 0.5, 0b0110: 0.5, 0b1111: 0.5}),
        "ghz3_qutrit": ((3, 3, 3), {0: s3, 13: s3, 26: s3}),
    }
    dims, entries = table[name]
    amps = np.zeros(math.prod(dims), complex)
    for idx, val in entries.items():
        amps[idx] = val
    return PureState(dims, amps)


def random_unit_qubit(rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    return v / np.linalg.norm(v)


def independent_qubit_family(rng: np.random.Generator, count: int, margin: float = 0.15):
    """count unit 2-vectors, pairwise overlap magnitude below 1 - margin."""
    vecs: list[np.ndarray] = []
    while len(vecs) < count:
        v = random_unit_qubit(rng)
        if all(abs(np.vdot(v, w)) < 1.0 - margin for w in vecs):
            vecs.append(v)
    return vecs


def state_from_maps(alpha_of, beta_of, weight_of, n_projected: int) -> PureState:
    """State on parties (1, 2, 3..n+2): sum_b sqrt(w(b)) alpha(b) beta(b) |b>.

    Parties 1 and 2 hold the pair factors; the projected parties carry the
    computational bit string b.
    """
    tensor = np.zeros((2, 2) + (2,) * n_projected, complex)
    total = 0.0
    for bits in iproduct((0, 1), repeat=n_projected):
        w = float(weight_of(bits))
        total += w
        tensor[(slice(None), slice(None)) + bits] = (
            math.sqrt(w) * np.outer(alpha_of(bits), beta_of(bits))
        )
    return PureState((2,) * (n_projected + 2), tensor.reshape(-1) / math.sqrt(total))


def planted_partition_state(
    rng: np.random.Generator,
    n_projected: int,
    alpha_indices: frozenset,
    product_weights: bool,
):
    """All-product-table state where alpha depends exactly on alpha_indices.

    beta depends on the complement. Returns (state, alpha_of, beta_of).
    Projected parties are labeled 3..n+2; alpha_indices uses those labels.
    """
    beta_indices = frozenset(range(3, n_projected + 3)) - alpha_indices
    positions_a = sorted(i - 3 for i in alpha_indices)
    positions_b = sorted(i - 3 for i in beta_indices)
    fam_a = independent_qubit_family(rng, 2 ** len(positions_a))
    fam_b = independent_qubit_family(rng, 2 ** len(positions_b))

    def key(bits, positions):
        out = 0
        for pos in positions:
            out = 2 * out + bits[pos]
        return out

    alpha_of = lambda bits: fam_a[key(bits, positions_a)]
    beta_of = lambda bits: fam_b[key(bits, positions_b)]

    if product_weights:
        u = rng.uniform(0.2, 1.0, size=2 ** len(positions_a))
        v = rng.uniform(0.2, 1.0, size=2 ** len(positions_b))
        weight_of = lambda bits: u[key(bits, positions_a)] * v[key(bits, positions_b)]
    else:
        w = rng.uniform(0.2, 1.0, size=2**n_projected)
        weight_of = lambda bits: w[key(bits, list(range(n_projected)))]

    return state_from_maps(alpha_of, beta_of, weight_of, n_projected), alpha_of, beta_of


def max_product_overlap(state: PureState, rng: np.random.Generator, starts: int = 50,
                        iters: int = 80) -> float:
    """Best overlap with a fully product state, by alternating optimization."""
    tensor = state.tensor()
    n = state.n_parties
    best = 0.0
    for _ in range(starts):
        vecs = []
        for d in state.dims:
            v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
            vecs.append(v / np.linalg.norm(v))
        value = 0.0
        for _ in range(iters):
            previous = value
            for axis in range(n):
                w = tensor
                for other in range(n - 1, -1, -1):
                    if other != axis:
                        w = np.tensordot(w, vecs[other].conj(), axes=(other if other < axis else other if axis > other else other, 0)) if False else w
                # contract every axis except `axis`, from the highest down
                w = tensor
                for other in range(n - 1, -1, -1):
                    if other == axis:
                        continue
                    w = np.tensordot(w, vecs[other].conj(), axes=(other if other < axis else other, 0))
                nrm = np.linalg.norm(w)
                if nrm < 1e-15:
                    break
                vecs[axis] = w / nrm
                value = nrm
            if value - previous < 1e-13:
                break
        best = max(best, value)
    return best


def random_product_state(dims, rng: np.random.Generator) -> PureState:
    amps = np.array([1.0], complex)
    for d in dims:
        v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        amps = np.kron(amps, v / np.linalg.norm(v))
    return PureState(tuple(dims), amps)
