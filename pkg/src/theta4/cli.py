"""Command line front end: JSON reports over the library's checks.

Exit code contract, shared by every subcommand:
  0  pass (or report written and internally consistent)
  1  a mathematical check failed
  2  invalid input (bad files, bad flags, infeasible policies)
  3  warning (near-degenerate input; verdicts not trustworthy)

All file output is canonical JSON written atomically, so identical inputs
and seeds give byte-identical reports.  THETA4_THREADS caps the number of
worker threads used by run-suite (default 1).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from theta4 import __version__
from theta4.basis_analysis import NumericalRankPolicy, basis_report
from theta4.char2 import Characteristic, enumerate_characteristics, parity
from theta4.identities import inversion_residuals, quartic_residuals
from theta4.jsonio import (
    atomic_write_text,
    canonical_dumps,
    complex_json,
    load_tau_file,
    parse_char_spec,
    parse_point_spec,
)
from theta4.mmatrix import build_m, verify_sign_matrix
from theta4.theta_eval import (
    PeriodMatrix,
    TruncationError,
    TruncationPolicy,
    block_diagonal_tau,
    random_tau,
    theta_nulls,
    theta_series,
)

EXIT_PASS = 0
EXIT_MATH_FAIL = 1
EXIT_INPUT = 2
EXIT_WARN = 3

DEFAULT_POLICIES = {
    "target_eps": 1e-11,
    "identity_eps": 1e-8,
    "sv_threshold": 1e-7,
    "null_threshold": 1e-8,
    "samples": 5,
    "seed": 0,
}


def _emit(obj, out: str | None) -> None:
    text = canonical_dumps(obj)
    if out:
        atomic_write_text(out, text)
    else:
        sys.stdout.write(text)


def _cmd_chars(args) -> int:
    chars = enumerate_characteristics(args.genus)
    rows = [
        {"index": c.index, "a1": list(c.a1), "a2": list(c.a2), "parity": parity(c)}
        for c in chars
        if not (args.even_only and parity(c) != 1)
    ]
    _emit({"g": args.genus, "count": len(rows), "characteristics": rows}, args.out)
    return EXIT_PASS


def _cmd_mmatrix(args) -> int:
    m = build_m(args.genus)
    if args.emit:
        payload = {"g": m.g, "dim": m.dim, "entries": [[int(e) for e in row] for row in m.entries]}
        _emit(payload, args.emit)
    if args.verify:
        checks = verify_sign_matrix(args.genus)
        ok = all(checks.values())
        _emit({"g": args.genus, "dim": m.dim, "checks": checks, "ok": ok}, None)
        return EXIT_PASS if ok else EXIT_MATH_FAIL
    if not args.emit:
        payload = {"g": m.g, "dim": m.dim, "entries": [[int(e) for e in row] for row in m.entries]}
        _emit(payload, None)
    return EXIT_PASS


def _cmd_theta(args) -> int:
    tau = load_tau_file(args.tau)
    char = parse_char_spec(args.char, tau.g)
    z = parse_point_spec(args.z, tau.g) if args.z else np.zeros(tau.g, dtype=complex)
    policy = TruncationPolicy(target_eps=args.eps, max_radius=args.max_radius)
    result = theta_series(char, z, tau, policy)
    payload = {
        "char": char.to_json(),
        "value": complex_json(result.value),
        "tail_bound": result.tail_bound,
        "radius": result.radius,
    }
    _emit(payload, args.out)
    return EXIT_PASS


def _cmd_nulls(args) -> int:
    tau = load_tau_file(args.tau)
    policy = TruncationPolicy(target_eps=args.eps)
    nulls = theta_nulls(tau, policy)
    top = max(abs(v) for v in nulls.values())
    rows = [
        {"char": c.to_json(), "value": complex_json(v), "abs": abs(v)} for c, v in nulls.items()
    ]
    vanishing = [c.to_json() for c, v in nulls.items() if abs(v) < args.null_threshold * top]
    payload = {
        "g": tau.g,
        "max_abs": top,
        "null_threshold": args.null_threshold,
        "nulls": rows,
        "vanishing": vanishing,
    }
    _emit(payload, args.out)
    return EXIT_PASS


def _cmd_verify_identity(args, kind: str) -> int:
    tau = load_tau_file(args.tau)
    policy = TruncationPolicy(target_eps=args.target_eps)
    if kind == "quartic":
        residuals = quartic_residuals(tau, args.samples, args.seed, policy)
    else:
        residuals = inversion_residuals(tau, args.samples, args.seed, policy)
    _emit([r.to_json() for r in residuals], args.out)
    worst = max((r.rel_residual for r in residuals), default=0.0)
    print(f"{kind}: {len(residuals)} checks, max rel residual {worst:.3e}", file=sys.stderr)
    # a record passes when the residual is small relative to the sides or
    # absolutely at the term scale (the sides may legitimately both vanish)
    return EXIT_PASS if all(r.passes(args.eps) for r in residuals) else EXIT_MATH_FAIL


def _cmd_basis_report(args) -> int:
    tau = load_tau_file(args.tau)
    kappa0 = parse_char_spec(args.kappa0, tau.g) if args.kappa0 else None
    policy = TruncationPolicy(target_eps=args.eps)
    rank_policy = NumericalRankPolicy(rel_sv_threshold=args.sv_threshold)
    report = basis_report(
        tau,
        kappa0=kappa0,
        policy=policy,
        rank_policy=rank_policy,
        null_threshold=args.null_threshold,
        seed=args.seed,
        n_samples=args.samples,
    )
    _emit(report.to_json(), args.out)
    if report.status == "warn":
        return EXIT_WARN
    return EXIT_PASS if report.consistent else EXIT_MATH_FAIL


def standard_corpus() -> dict:
    """Built-in suite: an elliptic point, a generic genus-2 sample, and the
    genus-2 product with its expected single vanishing null."""
    return {
        "label": "standard",
        "policies": dict(DEFAULT_POLICIES),
        "entries": [
            {"label": "g1-elliptic-i", "tau": {"kind": "literal", "re": [[0.0]], "im": [[1.0]]}},
            {"label": "g2-random-7", "tau": {"kind": "random", "g": 2, "seed": 7, "floor": 1.0}},
            {
                "label": "g2-product-ii",
                "tau": {
                    "kind": "diagonal",
                    "entries": [{"re": 0.0, "im": 1.0}, {"re": 0.0, "im": 1.0}],
                },
                "expect": {"vanishing_nulls": 1, "verdicts": False},
            },
        ],
    }


def _tau_from_source(source, base_dir: Path) -> PeriodMatrix:
    if isinstance(source, str):
        return load_tau_file(base_dir / source)
    if not isinstance(source, dict):
        raise ValueError(f"tau source must be a path or an object, got {source!r}")
    kind = source.get("kind")
    if kind == "file":
        return load_tau_file(base_dir / source["path"])
    if kind == "literal":
        return PeriodMatrix.from_json({k: v for k, v in source.items() if k != "kind"})
    if kind == "random":
        return random_tau(int(source["g"]), int(source["seed"]), float(source.get("floor", 1.0)))
    if kind == "diagonal":
        entries = [complex(e["re"], e["im"]) for e in source["entries"]]
        return block_diagonal_tau(entries)
    if kind == "block":
        return block_diagonal_tau([_tau_from_source(b, base_dir) for b in source["blocks"]])
    raise ValueError(f"unknown tau source kind {kind!r}")


def _load_corpus(args) -> tuple[dict, Path]:
    if args.standard:
        return standard_corpus(), Path(".")
    if not args.corpus:
        raise ValueError("run-suite needs --corpus FILE or --standard")
    path = Path(args.corpus)
    try:
        corpus = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ValueError(f"cannot read corpus file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed corpus JSON {path}: {exc}") from exc
    if not isinstance(corpus, dict) or not isinstance(corpus.get("entries", []), list):
        raise ValueError("corpus must be an object with an entries array")
    return corpus, path.parent


def _run_entry(label: str, tau: PeriodMatrix, kappa0, expect: dict, policies: dict, seed: int) -> dict:
    policy = TruncationPolicy(target_eps=policies["target_eps"])
    rank_policy = NumericalRankPolicy(rel_sv_threshold=policies["sv_threshold"])
    samples = int(policies["samples"])
    identity_eps = float(policies["identity_eps"])

    result = {"label": label, "g": tau.g, "expected": expect}
    try:
        checks = verify_sign_matrix(tau.g)
        result["mmatrix_ok"] = all(checks.values())
        quartic = quartic_residuals(tau, samples, seed, policy)
        inversion = inversion_residuals(tau, samples, seed, policy)
        result["quartic_max_rel_residual"] = max(r.rel_residual for r in quartic)
        result["inversion_max_rel_residual"] = max(r.rel_residual for r in inversion)
        result["quartic_ok"] = all(r.passes(identity_eps) for r in quartic)
        result["inversion_ok"] = all(r.passes(identity_eps) for r in inversion)
        result["identity_eps"] = identity_eps
        report = basis_report(
            tau,
            kappa0=kappa0,
            policy=policy,
            rank_policy=rank_policy,
            null_threshold=policies["null_threshold"],
            seed=seed,
        )
        result["basis"] = report.to_json()
    except (ValueError, ArithmeticError, TruncationError) as exc:
        result["status"] = "error"
        result["error"] = str(exc)
        return result

    identities_ok = result["mmatrix_ok"] and result["quartic_ok"] and result["inversion_ok"]
    expected_ok = (
        len(report.vanishing) == int(expect["vanishing_nulls"])
        and report.point_basis_verdict == bool(expect["verdicts"])
        and report.fourth_power_basis_verdict == bool(expect["verdicts"])
    )
    if report.status == "warn":
        result["status"] = "warn"
    elif identities_ok and expected_ok and report.consistent:
        result["status"] = "pass"
    else:
        result["status"] = "fail"
    return result


def run_suite(corpus: dict, base_dir: Path) -> dict:
    """Execute the corpus and assemble the deterministic run report.

    Wall-clock timings go to stderr only; the report must be byte-identical
    across reruns with the same corpus.
    """
    policies = dict(DEFAULT_POLICIES)
    policies.update(corpus.get("policies", {}))
    entries = corpus.get("entries", [])

    prepared = []
    labels = set()
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict) or "label" not in entry or "tau" not in entry:
            raise ValueError(f"corpus entry {i} must have label and tau")
        label = str(entry["label"])
        if label in labels:
            raise ValueError(f"duplicate corpus label {label!r}")
        labels.add(label)
        tau = _tau_from_source(entry["tau"], base_dir)
        kappa0 = parse_char_spec(entry["kappa0"], tau.g) if "kappa0" in entry else None
        expect = {"vanishing_nulls": 0, "verdicts": True}
        expect.update(entry.get("expect", {}))
        prepared.append((label, tau, kappa0, expect, int(policies["seed"]) + i))

    workers = max(1, int(os.environ.get("THETA4_THREADS", "1")))

    def worker(item):
        label, tau, kappa0, expect, seed = item
        start = time.perf_counter()
        result = _run_entry(label, tau, kappa0, expect, policies, seed)
        print(f"[{label}] {result['status']} ({time.perf_counter() - start:.2f}s)", file=sys.stderr)
        return result

    if workers > 1 and len(prepared) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(worker, prepared))
    else:
        results = [worker(item) for item in prepared]

    statuses = [r["status"] for r in results]
    if any(s in ("fail", "error") for s in statuses):
        rollup = "fail"
    elif any(s == "warn" for s in statuses):
        rollup = "warn"
    else:
        rollup = "pass"
    return {
        "version": __version__,
        "label": corpus.get("label", ""),
        "policies": policies,
        "entries": results,
        "rollup": rollup,
    }


def _cmd_run_suite(args) -> int:
    corpus, base_dir = _load_corpus(args)
    if args.emit_corpus:
        _emit(corpus, args.emit_corpus)
    start = time.perf_counter()
    report = run_suite(corpus, base_dir)
    print(f"suite rollup: {report['rollup']} ({time.perf_counter() - start:.2f}s)", file=sys.stderr)
    _emit(report, args.out)
    return {"pass": EXIT_PASS, "fail": EXIT_MATH_FAIL, "warn": EXIT_WARN}[report["rollup"]]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="theta4",
        description="Exact and numerical checks for theta functions of order four.",
    )
    parser.add_argument("--version", action="version", version=f"theta4 {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("chars", help="enumerate characteristics with parities")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--even-only", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_chars)

    p = sub.add_parser("mmatrix", help="emit or verify the even-pair sign matrix")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--emit")
    p.set_defaults(func=_cmd_mmatrix)

    p = sub.add_parser("theta", help="evaluate one theta value")
    p.add_argument("--tau", required=True)
    p.add_argument("--char", required=True, help='characteristic "a1,a2"')
    p.add_argument("--z", help='point "re,im;re,im;..." (default 0)')
    p.add_argument("--eps", type=float, default=DEFAULT_POLICIES["target_eps"])
    p.add_argument("--max-radius", type=int, default=TruncationPolicy().max_radius)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_theta)

    p = sub.add_parser("nulls", help="even theta-nulls and vanishing detection")
    p.add_argument("--tau", required=True)
    p.add_argument("--eps", type=float, default=DEFAULT_POLICIES["target_eps"])
    p.add_argument("--null-threshold", type=float, default=DEFAULT_POLICIES["null_threshold"])
    p.add_argument("--out")
    p.set_defaults(func=_cmd_nulls)

    for kind in ("quartic", "inversion"):
        p = sub.add_parser(f"verify-{kind}", help=f"residuals of the {kind} identity")
        p.add_argument("--tau", required=True)
        p.add_argument("--samples", type=int, default=DEFAULT_POLICIES["samples"])
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--eps", type=float, default=DEFAULT_POLICIES["identity_eps"],
                       help="residual gate: exit 0 iff every rel residual is below this")
        p.add_argument("--target-eps", type=float, default=DEFAULT_POLICIES["target_eps"],
                       help="absolute tail target for each theta evaluation")
        p.add_argument("--out")
        p.set_defaults(func=lambda args, kind=kind: _cmd_verify_identity(args, kind))

    p = sub.add_parser("basis-report", help="rank/basis analysis for one period matrix")
    p.add_argument("--tau", required=True)
    p.add_argument("--kappa0", help='even characteristic "a1,a2" (default 0)')
    p.add_argument("--eps", type=float, default=DEFAULT_POLICIES["target_eps"])
    p.add_argument("--sv-threshold", type=float, default=DEFAULT_POLICIES["sv_threshold"])
    p.add_argument("--null-threshold", type=float, default=DEFAULT_POLICIES["null_threshold"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_basis_report)

    p = sub.add_parser("run-suite", help="run a corpus of period matrices end to end")
    p.add_argument("--corpus", help="corpus JSON file")
    p.add_argument("--standard", action="store_true", help="use the built-in corpus")
    p.add_argument("--emit-corpus", help="also write the corpus that was run")
    p.add_argument("--out", help="report file (default stdout)")
    p.set_defaults(func=_cmd_run_suite)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TruncationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
