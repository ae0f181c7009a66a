"""Command-line pipeline: reduce, fix the basis, search, certify CHSH."""

from __future__ import annotations

import argparse
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .basisfix import fix_nonvanishing
from .chsh import evaluate_chsh, max_chsh
from .dependency import DependencyTable, build_table, partition_check
from .entanglement import concurrence, separability_report
from .errors import (
    EntpairError,
    FullyProductError,
    NoSubsetFoundError,
    SearchExhaustedError,
    ZeroOutcomeError,
)
from .reduction import Kept1D, reduce_to_qubits
from .search import (
    PairFailure,
    ProjectionCertificate,
    StrategyLadder,
    certify_all_pairs,
    find_entangling_projection,
    verify_certificate,
)
from .statevec import LocalVector, PureState, haar_random_state, project
from .stateio import (
    canonical_json,
    fixture_path,
    load_state,
    pairs_to_vector,
    save_state,
    state_to_obj,
    vector_to_pairs,
)
from .tolerances import AMP_FLOOR, SUCCESS_FLOOR, TOL_INDEP

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_PAIR_FAILURE = 2


def _resolve_state_path(arg: str) -> Path:
    path = Path(arg)
    if path.is_file():
        return path
    try:
        return fixture_path(arg)
    except FileNotFoundError:
        raise FileNotFoundError(f"state file {arg!r} not found (not a path or fixture)")


def _parse_pair(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected a pair like 1,2")
    return int(parts[0]), int(parts[1])


def _ket_str(vec: np.ndarray) -> str:
    return "[" + ", ".join(f"{a.real:+.4f}{a.imag:+.4f}j" for a in vec) + "]"


def _certificate_obj(cert: ProjectionCertificate) -> dict:
    chsh_cert = max_chsh(cert.residual)
    return {
        "status": "ok",
        "pair": list(cert.keep_pair),
        "strategy": cert.strategy_used,
        "assignments": [
            {"party": lv.party, "coords": vector_to_pairs(lv.coords)}
            for lv in cert.assignments
        ],
        "residual_amps": vector_to_pairs(cert.residual.amps),
        "concurrence": cert.concurrence,
        "weight": cert.weight,
        "chsh": {
            "s_max": chsh_cert.s_max,
            "settings": [[float(x) for x in v] for v in chsh_cert.settings],
            "correlation_matrix": [[float(x) for x in row] for row in chsh_cert.correlation_matrix],
        },
    }


def _failure_obj(failure: PairFailure) -> dict:
    return {
        "status": failure.reason,
        "pair": list(failure.keep_pair),
        "message": failure.message,
        "best_concurrence": failure.best_concurrence,
    }


def _dependency_excerpt(state: PureState, pair, tol_indep: float) -> dict:
    try:
        outcome = build_table(state, pair)
    except ZeroOutcomeError as exc:
        return {"status": "zero_outcome", "message": str(exc)}
    if not isinstance(outcome, DependencyTable):
        return {
            "status": "entangled_at",
            "bits": list(outcome.bits),
            "concurrence": outcome.concurrence,
        }
    partition = partition_check(outcome, tol_indep)
    entries = {}
    for bits, entry in list(outcome.entries.items())[:8]:
        key = "".join(str(b) for b in bits)
        entries[key] = {
            "alpha": vector_to_pairs(entry.alpha),
            "beta": vector_to_pairs(entry.beta),
            "weight": entry.weight,
        }
    return {
        "status": "complete_product_table",
        "projected_parties": list(outcome.projected_parties),
        "entries": entries,
        "partition": None
        if partition is None
        else {"alpha": sorted(partition[0]), "beta": sorted(partition[1])},
    }


def cmd_certify(args) -> int:
    try:
        path = _resolve_state_path(args.state)
        state, label = load_state(path)
    except (OSError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    ladder = StrategyLadder.up_to(
        args.stage_max, grid_points=args.grid, restarts=args.restarts
    )
    t_start = time.perf_counter()
    report: dict = {
        "input": {"path": str(path), "label": label, "dims": list(state.dims)},
        "seed": args.seed,
        "ladder": {
            "stages": list(ladder.stages),
            "grid_points": ladder.grid_points,
            "restarts": ladder.restarts,
        },
        "tolerances": {
            "tol_indep": args.tol_indep,
            "amp_floor": args.amp_floor,
            "success_floor": args.success_floor,
        },
    }

    working = state
    if any(d > 2 for d in state.dims):
        trace = reduce_to_qubits(state)
        working = trace.output
        report["reduction"] = {
            "applied": True,
            "actions": [
                "kept_1d" if isinstance(a, Kept1D) else "truncated_2d"
                for a in trace.actions
            ],
            "output_dims": list(working.dims),
            "retained_weight": trace.weight,
        }
    else:
        report["reduction"] = {"applied": False, "output_dims": list(state.dims)}

    sep = separability_report(working)
    report["fully_product"] = sep.fully_product
    if sep.fully_product:
        report["pairs"] = []
        print("input is fully product: no pair can be left entangled", file=sys.stderr)
        _emit(report, args)
        return EXIT_INPUT

    try:
        fix = fix_nonvanishing(working, amp_floor=args.amp_floor)
    except NoSubsetFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    searched = fix.fixed_state
    report["basis_fix"] = {"subset": list(fix.subset), "min_abs": fix.min_abs}

    if args.all_pairs:
        results = certify_all_pairs(searched, ladder, args.seed, args.success_floor)
    else:
        pair = tuple(sorted(args.keep))
        try:
            results = {pair: find_entangling_projection(
                searched, pair, ladder, args.seed, args.success_floor
            )}
        except FullyProductError as exc:
            results = {pair: PairFailure(pair, "fully_product", str(exc))}
        except SearchExhaustedError as exc:
            results = {
                pair: PairFailure(pair, "search_exhausted", str(exc), exc.best_concurrence)
            }

    pair_objs = []
    excerpt = None
    any_failure = False
    for pair in sorted(results):
        res = results[pair]
        if isinstance(res, ProjectionCertificate):
            pair_objs.append(_certificate_obj(res))
            if res.strategy_used != "S1" and excerpt is None:
                excerpt = _dependency_excerpt(searched, pair, args.tol_indep)
        else:
            any_failure = True
            pair_objs.append(_failure_obj(res))
    report["pairs"] = pair_objs
    report["dependency_excerpt"] = excerpt
    report["timings"] = {"total_s": time.perf_counter() - t_start}

    _emit(report, args)
    if args.output:
        Path(args.output).write_text(canonical_json(report), encoding="utf-8")
    return EXIT_PAIR_FAILURE if any_failure else EXIT_OK


def _emit(report: dict, args) -> None:
    if getattr(args, "json", False):
        sys.stdout.write(canonical_json(report))
        return
    print(f"state: {report['input']['path']}  dims {report['input']['dims']}")
    if report["reduction"]["applied"]:
        print(
            f"reduction: actions {report['reduction']['actions']} -> "
            f"dims {report['reduction']['output_dims']} "
            f"(retained weight {report['reduction']['retained_weight']:.6f})"
        )
    if report.get("fully_product"):
        print("verdict: fully product input")
        return
    if "basis_fix" in report:
        print(
            f"basis fix: Hadamard on {report['basis_fix']['subset']} "
            f"(min |amp| = {report['basis_fix']['min_abs']:.3e})"
        )
    for obj in report.get("pairs", []):
        pair = tuple(obj["pair"])
        if obj["status"] == "ok":
            print(
                f"pair {pair}: strategy {obj['strategy']}, "
                f"concurrence {obj['concurrence']:.6f}, weight {obj['weight']:.6f}, "
                f"s_max {obj['chsh']['s_max']:.6f}"
            )
        else:
            print(f"pair {pair}: FAILED ({obj['status']}) {obj['message']}")
    if report.get("dependency_excerpt"):
        exc = report["dependency_excerpt"]
        if exc["status"] == "complete_product_table":
            print("dependency table (all residuals product); partition:", exc["partition"])
            for key, entry in exc["entries"].items():
                alpha = pairs_to_vector(entry["alpha"])
                beta = pairs_to_vector(entry["beta"])
                print(f"  b'={key}  alpha {_ket_str(alpha)}  beta {_ket_str(beta)}")


def cmd_demo_counterexample(args) -> int:
    state, _ = load_state(fixture_path("counterexample.json"))
    print("four-qubit state (amplitude 1/2 on 0000, 0101, 0110, 1111):")
    for idx, amp in enumerate(state.amps):
        if abs(amp) > 1e-12:
            print(f"  |{idx:04b}>  {amp.real:+.4f}")

    outcome = build_table(state, (1, 2))
    assert isinstance(outcome, DependencyTable)
    print("\ncomputational projections of parties (3, 4) all leave (1, 2) product:")
    for bits, entry in outcome.entries.items():
        key = "".join(str(b) for b in bits)
        print(
            f"  b'={key}  alpha {_ket_str(entry.alpha)}  beta {_ket_str(entry.beta)}"
            f"  weight {entry.weight:.4f}"
        )
    partition = partition_check(outcome)
    print(f"\npartition of the projected indices: {partition!r}")
    print("(absent: both factors depend on both indices)")

    gamma = delta = math.pi / 4
    tilted = [
        LocalVector(3, np.array([math.cos(gamma), math.sin(gamma)])),
        LocalVector(4, np.array([math.cos(delta), math.sin(delta)])),
    ]
    residual, weight = project(state, tilted)
    c = concurrence(residual)
    cert = max_chsh(residual)
    print(f"\ntilted projection at gamma = delta = pi/4 (both parties onto |+>):")
    print(f"  residual {_ket_str(residual.amps)}  weight {weight:.4f}")
    print(f"  concurrence {c:.6f}  s_max {cert.s_max:.6f}")
    return EXIT_OK


def cmd_random(args) -> int:
    dims = (args.dim,) * args.parties
    if math.prod(dims) > 2**20:
        print("error: requested state too large", file=sys.stderr)
        return EXIT_INPUT
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(args.seed)
    for k in range(args.count):
        state = haar_random_state(dims, rng)
        name = f"random_n{args.parties}_d{args.dim}_seed{args.seed}_{k:03d}.json"
        save_state(out_dir / name, state, label=name.removesuffix(".json"))
        print(out_dir / name)
    return EXIT_OK


def cmd_verify(args) -> int:
    import json

    try:
        report = json.loads(Path(args.report).read_text(encoding="utf-8"))
        path = _resolve_state_path(args.state)
        state, _ = load_state(path)
    except (OSError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    working = state
    if report.get("reduction", {}).get("applied"):
        working = reduce_to_qubits(state).output
    searched = working
    if "basis_fix" in report:
        fix = fix_nonvanishing(
            working, amp_floor=report["tolerances"].get("amp_floor", AMP_FLOOR)
        )
        if list(fix.subset) != report["basis_fix"]["subset"]:
            print("verify: basis-fix subset mismatch", file=sys.stderr)
            return EXIT_PAIR_FAILURE
        searched = fix.fixed_state

    floor = report.get("tolerances", {}).get("success_floor", SUCCESS_FLOOR)
    failures = 0
    for obj in report.get("pairs", []):
        pair = tuple(obj["pair"])
        if obj["status"] != "ok":
            print(f"pair {pair}: recorded failure ({obj['status']}), nothing to verify")
            continue
        assignments = tuple(
            LocalVector(a["party"], pairs_to_vector(a["coords"]))
            for a in obj["assignments"]
        )
        residual = PureState((2, 2), pairs_to_vector(obj["residual_amps"]))
        cert = ProjectionCertificate(
            pair, assignments, residual, obj["concurrence"], obj["weight"], obj["strategy"]
        )
        try:
            verify_certificate(searched, cert, success_floor=floor)
            chsh_cert = max_chsh(residual)
            if abs(chsh_cert.s_max - obj["chsh"]["s_max"]) > 1e-9:
                raise ValueError("recorded s_max differs from recomputation")
            settings = [np.array(v) for v in obj["chsh"]["settings"]]
            if abs(evaluate_chsh(residual, settings) - obj["chsh"]["s_max"]) > 1e-7:
                raise ValueError("recorded settings do not reproduce s_max")
        except (ValueError, EntpairError) as exc:
            failures += 1
            print(f"pair {pair}: VERIFY FAILED: {exc}")
            continue
        print(f"pair {pair}: verified (concurrence {obj['concurrence']:.6f}, "
              f"s_max {obj['chsh']['s_max']:.6f})")
    return EXIT_PAIR_FAILURE if failures else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entpair",
        description="Extract and certify two-party entanglement from "
        "multiparticle pure states via local projections.",
    )
    parser.add_argument("--version", action="version", version=f"entpair {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    cert = sub.add_parser("certify", help="run the full pipeline on a state file")
    cert.add_argument("state", help="state file path or bundled fixture name")
    group = cert.add_mutually_exclusive_group(required=True)
    group.add_argument("--keep", type=_parse_pair, metavar="P,Q", help="pair to keep")
    group.add_argument("--all-pairs", action="store_true", help="certify every pair")
    cert.add_argument("--seed", type=int, default=0, help="search seed (default 0)")
    cert.add_argument("--grid", type=int, default=24, help="S3 mesh points per angle")
    cert.add_argument("--restarts", type=int, default=10, help="S4 random restarts")
    cert.add_argument(
        "--stage-max", default="S4", choices=("S1", "S2", "S3", "S4"),
        help="last ladder stage to run",
    )
    cert.add_argument("--tol-indep", type=float, default=TOL_INDEP)
    cert.add_argument("--amp-floor", type=float, default=AMP_FLOOR)
    cert.add_argument("--success-floor", type=float, default=SUCCESS_FLOOR)
    out = cert.add_mutually_exclusive_group()
    out.add_argument("--json", action="store_true", help="emit the JSON report")
    out.add_argument("--pretty", action="store_true", help="human-readable output (default)")
    cert.add_argument("--output", metavar="FILE", help="also write the JSON report here")
    cert.set_defaults(func=cmd_certify)

    demo = sub.add_parser(
        "demo-counterexample",
        help="walk through the bundled four-qubit counterexample",
    )
    demo.set_defaults(func=cmd_demo_counterexample)

    rand = sub.add_parser("random", help="write Haar-random state files")
    rand.add_argument("--parties", "-n", type=int, required=True)
    rand.add_argument("--dim", "-d", type=int, default=2)
    rand.add_argument("--seed", type=int, default=0)
    rand.add_argument("--count", type=int, default=1)
    rand.add_argument("--out-dir", default=".")
    rand.set_defaults(func=cmd_random)

    ver = sub.add_parser("verify", help="re-check every certificate in a report")
    ver.add_argument("report", help="JSON report written by certify --output")
    ver.add_argument("state", help="the state file the report was produced from")
    ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
