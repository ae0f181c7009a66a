"""JSON state files and bundled fixtures.

A state file is UTF-8 JSON with integer ``dims`` (party 1 first), ``amps``
as [re, im] pairs in row-major order with party 1 most significant, and an
optional ``label``. Saving a loaded file reproduces it byte for byte.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import numpy as np

from .statevec import PureState
from .tolerances import TOL_NORM, TOL_ZERO

MAX_AMPLITUDES = 2**20

_FIXTURES = Path(__file__).parent / "fixtures"

BUNDLED_FIXTURES = (
    "counterexample.json",
    "ghz3.json",
    "ghz4.json",
    "w3.json",
    "product4.json",
    "ghz3-qutrit.json",
)


def fixture_path(name: str) -> Path:
    path = _FIXTURES / name
    if not path.is_file():
        raise FileNotFoundError(f"no bundled fixture named {name!r}")
    return path


def canonical_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def state_to_obj(state: PureState, label: str | None = None) -> dict:
    obj = {
        "dims": list(state.dims),
        "amps": [[float(a.real), float(a.imag)] for a in state.amps],
    }
    if label is not None:
        obj["label"] = label
    return obj


def obj_to_state(obj: dict, warn_stream=None) -> tuple[PureState, str | None]:
    dims = obj.get("dims")
    amps = obj.get("amps")
    if not isinstance(dims, list) or not all(isinstance(d, int) and d >= 1 for d in dims):
        raise ValueError("dims must be a list of positive integers")
    if math.prod(dims) > MAX_AMPLITUDES:
        raise ValueError(f"state too large: prod(dims) exceeds {MAX_AMPLITUDES}")
    if not isinstance(amps, list) or len(amps) != math.prod(dims):
        raise ValueError(f"amps must list {math.prod(dims)} [re, im] pairs")
    vec = np.array([complex(re, im) for re, im in amps])
    nrm = np.linalg.norm(vec)
    if nrm < TOL_ZERO:
        raise ValueError("state vector has zero norm and cannot be normalized")
    if abs(nrm - 1.0) > TOL_NORM:
        if abs(nrm - 1.0) > 1e-6 and warn_stream is not None:
            print(
                f"warning: input norm deviates by {abs(nrm - 1.0):.3e}; renormalizing",
                file=warn_stream,
            )
        vec = vec / nrm
    label = obj.get("label")
    return PureState(tuple(dims), vec), label


def load_state(path, warn_stream=None) -> tuple[PureState, str | None]:
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    return obj_to_state(obj, warn_stream if warn_stream is not None else sys.stderr)


def save_state(path, state: PureState, label: str | None = None) -> None:
    Path(path).write_text(canonical_json(state_to_obj(state, label)), encoding="utf-8")


def vector_to_pairs(vec: np.ndarray) -> list:
    return [[float(a.real), float(a.imag)] for a in np.asarray(vec, dtype=complex)]


def pairs_to_vector(pairs) -> np.ndarray:
    return np.array([complex(re, im) for re, im in pairs])
