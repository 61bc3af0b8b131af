"""
Command-line front end.

Exit codes: 0 when every checked invariant holds, 1 for unreadable or
invalid input, 2 when an invariant fails. Each command prints a JSON report
on stdout and, with ``--out``, writes it and its artifacts to a directory.
"""

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import io as sio
from .decompose import (
    Check,
    decompose_traceless,
    decompose_with_projection,
    build_witness,
    verify_decomposition,
    verify_witness,
)
from .equiv import approx_equivalent
from .errors import InternalInvariantBroken, SelfCommError
from .ii1 import approx_error, error_bounds, pipeline, quantize, recentered_distance
from .spectral import Tolerances, eigendecompose, unitary_equiv_exact

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INVARIANT = 2


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors, not invariant failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _tolerances(args):
    return Tolerances(
        hermiticity=args.herm_tol,
        cluster_gap=args.cluster_gap,
        residual=args.tol,
        trace_zero=args.trace_tol,
    )


def _report(command, inputs, checks, info=None, timings=None):
    rep = {
        "command": command,
        "inputs_digest": sio.digest(inputs),
        "inputs": [str(p) for p in inputs],
        "checks": [c.as_dict() for c in checks],
        "pass": all(c.passed for c in checks),
        "timings": timings or {},
    }
    if info:
        rep["info"] = info
    return rep


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def _emit(rep, out):
    text = sio.dumps(_jsonable(rep))
    if out is not None:
        (out / "report.json").write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return EXIT_OK if rep["pass"] else EXIT_INVARIANT


def _outdir(args):
    if args.out is None:
        return None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _read_matrix(path, tol):
    try:
        return sio.read_matrix(path, tol)
    except (OSError, sio.FormatError, SelfCommError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def cmd_decompose(args):
    tol = _tolerances(args)
    X = _read_matrix(args.input, tol)
    out = _outdir(args)
    t0 = time.perf_counter()
    try:
        if args.projection is not None:
            spec = eigendecompose(X, tol)
            if not 0 <= args.projection < X.shape[0]:
                raise InputError(f"projection index {args.projection} out of range")
            v = spec.basis[:, args.projection]
            if args.recenter:
                X = X - (np.trace(X).real / X.shape[0]) * np.eye(X.shape[0])
            dec = decompose_with_projection(X, np.outer(v, v.conj()), tol)
        else:
            dec = decompose_traceless(X, tol, recenter=args.recenter)
    except InternalInvariantBroken as exc:
        sys.stderr.write(f"invariant failure: {exc}\n")
        return EXIT_INVARIANT
    except SelfCommError as exc:
        raise InputError(f"{type(exc).__name__}: {exc}") from exc
    t1 = time.perf_counter()
    wit = build_witness(dec, tol=tol)
    wrep = verify_witness(dec.X, wit.Y, tol)
    t2 = time.perf_counter()
    if out is not None:
        sio.write_matrix(out / "X.json", dec.X, hermitian=True)
        sio.write_matrix(out / "A.json", dec.A, hermitian=True)
        sio.write_matrix(out / "B.json", dec.B, hermitian=True)
        sio.write_matrix(out / "U.json", dec.U, hermitian=False)
        sio.write_matrix(out / "Y.json", wit.Y, hermitian=False)
        if dec.P is not None:
            sio.write_matrix(out / "P.json", dec.P, hermitian=True)
    info = {
        "dim": int(X.shape[0]),
        "shift_t": wit.t,
        "basis_trace": [[p, q] for p, q in dec.basis_trace],
        "spectrum_A": sorted(np.linalg.eigvalsh(dec.A).tolist()),
        "spectrum_B": sorted(np.linalg.eigvalsh(dec.B).tolist()),
    }
    checks = dec.report.checks + wrep.checks
    rep = _report("decompose", [args.input], checks, info,
                  {"decompose_s": t1 - t0, "witness_s": t2 - t1})
    return _emit(rep, out)


def cmd_verify(args):
    tol = _tolerances(args)
    X = _read_matrix(args.x, tol)
    inputs = [args.x]
    checks = []
    info = {}
    have_abu = all(p is not None for p in (args.a, args.b, args.u))
    if not have_abu and args.y is None:
        raise InputError("need either --a/--b/--u or --y")
    if have_abu:
        A = _read_matrix(args.a, tol)
        B = _read_matrix(args.b, tol)
        U = _read_matrix(args.u, tol)
        P = _read_matrix(args.p, tol) if args.p else None
        inputs += [args.a, args.b, args.u] + ([args.p] if args.p else [])
        if {M.shape for M in (A, B, U, X)} != {X.shape} or (P is not None and P.shape != X.shape):
            raise InputError("dimension mismatch between claim files")
        rep = verify_decomposition(X, A, B, U, P, tol)
        checks += rep.checks
        info.update(rep.info)
    if args.y is not None:
        Y = _read_matrix(args.y, tol)
        inputs.append(args.y)
        if Y.shape != X.shape:
            raise InputError("dimension mismatch between claim files")
        wrep = verify_witness(X, Y, tol)
        checks += wrep.checks
        info.update(wrep.info)
    return _emit(_report("verify", inputs, checks, info), _outdir(args))


def _parse_schedule(text):
    try:
        sched = [int(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise InputError(f"bad schedule {text!r}") from exc
    if not sched or any(n < 2 for n in sched):
        raise InputError("schedule entries must be integers >= 2")
    return sched


def _read_element(path):
    try:
        return sio.read_element(path)
    except (OSError, sio.FormatError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def cmd_pipeline(args):
    tol = _tolerances(args)
    elem = _read_element(args.input)
    sched = _parse_schedule(args.schedule)
    t0 = time.perf_counter()
    try:
        steps = pipeline(elem, sched, tol)
    except InternalInvariantBroken as exc:
        sys.stderr.write(f"invariant failure: {exc}\n")
        return EXIT_INVARIANT
    except SelfCommError as exc:
        raise InputError(f"{type(exc).__name__}: {exc}") from exc
    reports = [s.report for s in steps]
    table = sio.pipeline_csv(reports)
    out = _outdir(args)
    if out is not None:
        (out / "pipeline.csv").write_text(table, encoding="utf-8")
    checks = []
    for r in reports:
        checks += [
            Check(f"n={r.n}:delta_q", r.delta_q, r.bound_q),
            Check(f"n={r.n}:d", r.d_output, r.bound_d),
            Check(f"n={r.n}:norm", r.max_norm, r.norm_budget),
            Check(f"n={r.n}:decomposition", 0.0 if r.decomposition_pass else 1.0, 0.0),
        ]
    rep = _report("pipeline", [args.input], checks, {"schedule": sched},
                  {"pipeline_s": time.perf_counter() - t0})
    return _emit(rep, out)


def cmd_quantize(args):
    elem = _read_element(args.input)
    if args.n < 2:
        raise InputError("--n must be >= 2")
    approx = quantize(elem, args.n)
    dq, d = approx_error(elem, approx)
    bq, bd = error_bounds(elem, args.n)
    out = _outdir(args)
    if out is not None:
        sio.write_matrix(out / "H.json", approx.H, hermitian=True)
        sio.write_matrix(out / "B.json", approx.B, hermitian=True)
    info = {
        "n": approx.n,
        "counts": approx.counts.tolist(),
        "theta": approx.theta.tolist(),
        "beta": elem.trace,
        "beta_n": approx.beta_n,
        "d_recentered": recentered_distance(elem, approx),
    }
    checks = [Check("delta_q", dq, bq), Check("d", d, bd)]
    return _emit(_report("quantize", [args.input], checks, info), out)


def cmd_equiv(args):
    tol = _tolerances(args)
    A = _read_matrix(args.a, tol)
    B = _read_matrix(args.b, tol)
    if A.shape != B.shape:
        raise InputError(f"dimension mismatch {A.shape} vs {B.shape}")
    try:
        U = unitary_equiv_exact(A, B, args.tol)
        approx = approx_equivalent(A, B, args.approx, args.tol)
    except SelfCommError as exc:
        raise InputError(str(exc)) from exc
    info = {"exact": U is not None, "approximate": approx, "K": args.approx or A.shape[0]}
    out = _outdir(args)
    if U is not None and out is not None:
        sio.write_matrix(out / "U.json", U, hermitian=False)
    checks = [
        Check("exact_equivalence", 0.0 if U is not None else 1.0, 0.0),
        Check("moment_equivalence", 0.0 if approx else 1.0, 0.0),
    ]
    return _emit(_report("equiv", [args.a, args.b], checks, info), out)


def cmd_witness(args):
    tol = _tolerances(args)
    X = _read_matrix(args.input, tol)
    try:
        dec = decompose_traceless(X, tol, recenter=args.recenter)
        wit = build_witness(dec, args.t, tol)
    except InternalInvariantBroken as exc:
        sys.stderr.write(f"invariant failure: {exc}\n")
        return EXIT_INVARIANT
    except SelfCommError as exc:
        raise InputError(f"{type(exc).__name__}: {exc}") from exc
    out = _outdir(args)
    if out is not None:
        sio.write_matrix(out / "Y.json", wit.Y, hermitian=False)
    rep = verify_witness(dec.X, wit.Y, tol)
    return _emit(_report("witness", [args.input], rep.checks, {"shift_t": wit.t, **rep.info}), out)


def build_parser():
    d = Tolerances()
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, default=d.residual, help="relative residual tolerance")
    common.add_argument("--trace-tol", type=float, default=d.trace_zero)
    common.add_argument("--cluster-gap", type=float, default=d.cluster_gap)
    common.add_argument("--herm-tol", type=float, default=d.hermiticity)
    common.add_argument("--out", help="directory for the report and artifacts")

    parser = _Parser(
        prog="selfcomm", description="Abelian self-commutator decompositions and II_1 models."
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("decompose", parents=[common], help="split traceless X as A - B")
    p.add_argument("input")
    p.add_argument("--recenter", action="store_true", help="subtract (tr X / n) I first")
    p.add_argument("--projection", type=int, metavar="IDX",
                   help="avoid the IDX-th eigenvector (ascending order) instead of the top one")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", parents=[common], help="re-check a claimed decomposition or witness")
    p.add_argument("--x", required=True)
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--u")
    p.add_argument("--p")
    p.add_argument("--y")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("pipeline", parents=[common], help="quantize and decompose a spectral element")
    p.add_argument("input")
    p.add_argument("--schedule", required=True, help="comma-separated subfactor orders")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("quantize", parents=[common], help="dyadic quantization at one order")
    p.add_argument("input")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_quantize)

    p = sub.add_parser("equiv", parents=[common], help="exact and moment equivalence")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--approx", type=int, metavar="K", help="highest moment order (default: dim)")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("witness", parents=[common], help="self-commutator witness Y for X")
    p.add_argument("input")
    p.add_argument("--t", type=float, help="shift (default ||A||)")
    p.add_argument("--recenter", action="store_true")
    p.set_defaults(func=cmd_witness)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
