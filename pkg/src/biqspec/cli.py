"""Command-line entry point ``biq``.

Exit codes: 0 success, 2 unreadable or malformed input, 3 input that parses
but violates a size, range or sign precondition.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__
from .errors import DimensionError, DocumentParseError, NegativeEntriesError
from .graph import adjacency_tensor, degree_tensors, laplacian, separability_report, signless_laplacian
from .io import TensorDocument, parse_edge_list
from .oracle import enumerate_m_eigenpairs_small, m_plus_pairs
from .spectra import SolverConfig, estimate_rho_star, min_m_eigenvalue_probe, solve_lambda_max
from .structure import classify_eigenpair, structure_report

EXIT_PARSE = 2
EXIT_DOMAIN = 3


class _Fail(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _Fail(EXIT_PARSE, f"cannot read {path}: {exc.strerror}") from None


def _load_tensor(path: str):
    doc = TensorDocument.from_json(_read(path))
    return doc.to_tensor()


def _config(args, default_tol=1e-10) -> SolverConfig:
    try:
        return SolverConfig(
            max_iter=args.max_iter,
            tol=args.tol if args.tol is not None else default_tol,
            restarts=args.restarts,
            seed=args.seed if args.seed is not None else 0,
        )
    except ValueError as exc:
        raise _Fail(EXIT_PARSE, f"invalid option: {exc}") from None


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _fmt_vec(v) -> str:
    return "(" + ", ".join(f"{c:.6f}" for c in v) + ")"


def cmd_analyze(args) -> str:
    A = _load_tensor(args.file)
    if A.m < 2 or A.n < 2:
        raise DimensionError(f"analyze needs m, n >= 2, got m={A.m}, n={A.n}")
    timing = {}

    t0 = time.perf_counter()
    report = structure_report(A)
    timing["structure_ms"] = (time.perf_counter() - t0) * 1e3

    t0 = time.perf_counter()
    outcome = solve_lambda_max(A, _config(args))
    outcome.best.kind = classify_eigenpair(outcome.best)
    timing["solve_ms"] = (time.perf_counter() - t0) * 1e3

    t0 = time.perf_counter()
    rho = estimate_rho_star(A, args.samples, args.seed or 0, outcome)
    timing["rho_star_ms"] = (time.perf_counter() - t0) * 1e3

    table = [outcome.best]
    if args.oracle:
        if A.m > 3 or A.n > 3:
            raise DimensionError("--oracle needs m, n <= 3")
        t0 = time.perf_counter()
        table = enumerate_m_eigenpairs_small(A, args.grid, args.tol if args.tol is not None else 1e-9)
        timing["oracle_ms"] = (time.perf_counter() - t0) * 1e3

    out = {
        "m": A.m,
        "n": A.n,
        "structure": report.to_dict(),
        "lambda_max": outcome.summary(),
        "rho_star_estimate": rho,
        "eigenpair_table": [p.to_dict() for p in table],
    }
    if args.oracle:
        out["m_plus_eigenvalues"] = [p.lam for p in m_plus_pairs(table)]
    if not args.no_timing:
        out["timing"] = timing
    if args.json:
        return _dump(out)

    s = out["structure"]
    lines = [
        f"tensor {A.m}x{A.n}x{A.m}x{A.n}",
        f"irreducible: {s['irreducible']}  (x-reducible {s['x_reducible']}, y-reducible {s['y_reducible']})",
        f"quasi-irreducible: {s['quasi_irreducible']}  "
        f"(x-quasi-reducible {s['x_quasi_reducible']}, y-quasi-reducible {s['y_quasi_reducible']})",
        f"lambda_max: {outcome.best.lam:.12g}  bounds [{outcome.lower_bound:.12g}, {outcome.upper_bound:.12g}]"
        f"  converged={outcome.converged}",
        f"rho* estimate: {rho:.12g}",
        "eigenpairs:",
    ]
    for p in table:
        lines.append(f"  {p.lam:+.10f}  x={_fmt_vec(p.x)}  y={_fmt_vec(p.y)}  {'|'.join(p.kind.labels())}")
    return "\n".join(lines) + "\n"


def cmd_eig(args) -> str:
    A = _load_tensor(args.file)
    outcome = solve_lambda_max(A, _config(args))
    outcome.best.kind = classify_eigenpair(outcome.best)
    if args.json:
        out = outcome.summary()
        out["class"] = outcome.best.kind.labels()
        return _dump(out)
    return (
        f"lambda_max: {outcome.best.lam:.15g}\n"
        f"x: {_fmt_vec(outcome.best.x)}\ny: {_fmt_vec(outcome.best.y)}\n"
        f"bounds: [{outcome.lower_bound:.15g}, {outcome.upper_bound:.15g}]  converged={outcome.converged}\n"
    )


def cmd_oracle(args) -> str:
    A = _load_tensor(args.file)
    pairs = enumerate_m_eigenpairs_small(A, args.grid, args.tol if args.tol is not None else 1e-9)
    if args.json:
        return _dump(
            {
                "eigenpairs": [p.to_dict() for p in pairs],
                "m_plus_eigenvalues": [p.lam for p in m_plus_pairs(pairs)],
            }
        )
    lines = [f"{len(pairs)} M-eigenpairs"]
    for p in pairs:
        lines.append(f"  {p.lam:+.10f}  x={_fmt_vec(p.x)}  y={_fmt_vec(p.y)}  {'|'.join(p.kind.labels())}")
    return "\n".join(lines) + "\n"


def cmd_psd(args) -> str:
    A = _load_tensor(args.file)
    tol = args.tol if args.tol is not None else 1e-9
    probe = min_m_eigenvalue_probe(A, _config(args, default_tol=1e-10))
    verdict = "PSD-CONSISTENT" if probe.value >= -tol else "NOT-PSD"
    if args.json:
        out = {"verdict": verdict, "probe": probe.value, "converged": probe.converged}
        if verdict == "NOT-PSD":
            out["witness"] = {"x": probe.x.tolist(), "y": probe.y.tolist()}
        return _dump(out)
    text = f"{verdict}  probe={probe.value:.12g}\n"
    if verdict == "NOT-PSD":
        text += f"witness x={_fmt_vec(probe.x)} y={_fmt_vec(probe.y)}\n"
    return text


EMITTERS = {
    "adjacency": adjacency_tensor,
    "d0": lambda G: degree_tensors(G)[0],
    "dx": lambda G: degree_tensors(G)[1],
    "dy": lambda G: degree_tensors(G)[2],
    "q": signless_laplacian,
    "l": laplacian,
}


def cmd_graph(args) -> str:
    G = parse_edge_list(_read(args.file))
    if args.emit == "report":
        report = separability_report(G)
        if args.json:
            return _dump(report)
        return "".join(f"{k}: {report[k]}\n" for k in ("T_separable", "S_separable", "bi_separable"))
    A = EMITTERS[args.emit](G)
    name = os.path.basename(args.file) if args.file != "-" else "stdin"
    return TensorDocument.from_tensor(A, {"name": f"{args.emit}({name})"}).to_json()


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--tol", type=float, default=None, help="convergence / residual / verdict tolerance")
    shared.add_argument("--restarts", type=int, default=32)
    shared.add_argument("--max-iter", type=int, default=5000)
    shared.add_argument("--seed", type=int, default=None, help="random seed (default 0)")
    shared.add_argument("--samples", type=int, default=10_000, help="random pairs for the rho* estimate")
    shared.add_argument("--json", action="store_true", help="machine-readable output")

    p = argparse.ArgumentParser(prog="biq", description="Spectral analysis of biquadratic tensors.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[shared], help="structure, lambda_max and rho* of a tensor document")
    a.add_argument("file")
    a.add_argument("--oracle", action="store_true", help="also enumerate all eigenpairs (m, n <= 3)")
    a.add_argument("--grid", type=int, default=None)
    a.add_argument("--no-timing", action="store_true", help="omit wall-clock timings (byte-stable output)")
    a.set_defaults(func=cmd_analyze, randomized=True)

    g = sub.add_parser("graph", parents=[shared], help="tensors and separability of an edge list")
    g.add_argument("file")
    g.add_argument("--emit", choices=[*EMITTERS, "report"], default="adjacency")
    g.set_defaults(func=cmd_graph, randomized=False)

    s = sub.add_parser("psd", parents=[shared], help="one-sided PSD probe")
    s.add_argument("file")
    s.set_defaults(func=cmd_psd, randomized=True)

    e = sub.add_parser("eig", parents=[shared], help="largest M-eigenvalue of a nonnegative tensor")
    e.add_argument("file")
    e.set_defaults(func=cmd_eig, randomized=True)

    o = sub.add_parser("oracle", parents=[shared], help="enumerate all M-eigenpairs (m, n <= 3)")
    o.add_argument("file")
    o.add_argument("--grid", type=int, default=None)
    o.set_defaults(func=cmd_oracle, randomized=False)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.randomized and args.seed is None and os.environ.get("BIQ_TEST_MODE") == "1":
            raise _Fail(EXIT_PARSE, "--seed is required when BIQ_TEST_MODE=1")
        text = args.func(args)
    except _Fail as exc:
        print(f"biq: {exc}", file=sys.stderr)
        return exc.code
    except DocumentParseError as exc:
        print(f"biq: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (DimensionError, NegativeEntriesError) as exc:
        print(f"biq: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    sys.stdout.write(text)
    sys.stdout.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
