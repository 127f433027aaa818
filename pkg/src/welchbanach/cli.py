"""``welch`` command-line front end.

Exit codes: 0 when every asserted bound holds, 2 when a bound whose
hypotheses hold is violated (or a cross-check disagrees), 3 on bad input,
4 when a search did not converge.
"""
from __future__ import annotations

import argparse
import datetime as _dt
import json
import math
import sys
from importlib import metadata as _md

import numpy as np

from . import serialize as io
from .asf import LpSpace, frame_operator, gram, is_normalized
from .bounds import EQ_TOL, BoundRecord, full_report, make_record
from .continuous import cont_metrics, cont_p_check, cont_trace_power_check, cont_welch_check
from .errors import NegativeRadicand, WelchError
from .metrics import equiangularity, frame_correlation, pseudo_frame_potential, rms_cross
from .numkernel import DEFAULT_TOLERANCES, ToleranceConfig, eigen
from .optimize import SearchConfig, etf_search, grassmannian_search, potential_minimize
from .symlift import explicit_lift, lifted_frame_spectrum, lifted_gram

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_NOT_CONVERGED = 0, 2, 3, 4
LIFT_REL_TOL = 1e-8


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; 2 is reserved for bound violations here
    def error(self, message):
        raise UsageError(message)


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _p_value(text: str) -> float:
    return math.inf if text.strip().lower() in ("inf", "infinity") else float(text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    d = DEFAULT_TOLERANCES
    common.add_argument("--tol-eig-imag", type=float, default=d.eig_imag_tol)
    common.add_argument("--tol-nonneg", type=float, default=d.nonneg_tol)
    common.add_argument("--tol-rank", type=float, default=d.rank_tol)
    common.add_argument("--tol-diag-cond", type=float, default=d.diag_cond_max)
    common.add_argument("--tol-eq", type=float, default=EQ_TOL, help="equality band for bound records")

    parser = _Parser(prog="welch", description="Welch bounds for dual pairs in finite-dimensional l^p spaces.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    g = sub.add_parser("gram", parents=[common], help="print or save the Gram matrix")
    g.add_argument("--input", required=True)
    g.add_argument("--out")

    r = sub.add_parser("report", parents=[common], help="run every bound check on a pair")
    r.add_argument("--input", required=True)
    r.add_argument("--orders", type=_ints, default=[1])
    r.add_argument("--p", type=_floats, default=[], dest="p_list")
    r.add_argument("--r", type=_floats, default=[0.5, 1.0, 2.0, 3.0], dest="r_list")
    r.add_argument("--json", dest="json_out")

    li = sub.add_parser("lift", parents=[common], help="lifted Gram matrix of order m")
    li.add_argument("--input", required=True)
    li.add_argument("--m", type=int, required=True)
    li.add_argument("--explicit", action="store_true", help="cross-check against the explicit lift")
    li.add_argument("--out")

    c = sub.add_parser("continuous", parents=[common], help="continuous checks over an atomic measure")
    c.add_argument("--input", required=True)
    c.add_argument("--orders", type=_ints, default=[1])
    c.add_argument("--p", type=_floats, default=[], dest="p_list")
    c.add_argument("--r", type=_floats, default=[0.5, 1.0, 2.0, 3.0], dest="r_list")
    c.add_argument("--json", dest="json_out")

    s = sub.add_parser("search", parents=[common], help="search for extremal pairs")
    s.add_argument("--mode", choices=["grassmannian", "etf", "potential"], required=True)
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("--count", type=int, help="number of elements (etf uses dim^2)")
    s.add_argument("--p", type=_p_value, default=2.0)
    s.add_argument("--field", choices=["real", "complex"], default="complex")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--restarts", type=int, default=32)
    s.add_argument("--max-iters", type=int, default=5000)
    s.add_argument("--out")

    m = sub.add_parser("metrics", parents=[common], help="correlation, RMS, potential, equiangularity")
    m.add_argument("--input", required=True)
    m.add_argument("--json", dest="json_out")
    return parser


def _tolerances(args) -> ToleranceConfig:
    return ToleranceConfig(args.tol_eig_imag, args.tol_nonneg, args.tol_rank, args.tol_diag_cond)


def _version() -> str:
    try:
        return _md.version("artifact")
    except _md.PackageNotFoundError:
        return "unknown"


def _metadata() -> dict:
    return {"generated": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
            "version": _version()}


def _record_rows(records: list[BoundRecord]) -> list[list]:
    return [[r.name, r.lhs, r.direction, r.rhs, r.slack, r.holds, r.equality, r.hypothesis_ok, r.notes]
            for r in records]


RECORD_HEADERS = ["check", "lhs", "", "rhs", "slack", "holds", "equal", "hyp_ok", "notes"]


def _pair_metrics(pair) -> dict:
    out: dict = {"pseudo_frame_potential": pseudo_frame_potential(pair)}
    if pair.n >= 2:
        out["correlation"] = frame_correlation(pair)
        try:
            out["rms_cross"] = rms_cross(pair)
        except NegativeRadicand:
            out["rms_cross"] = float("nan")
        eq = equiangularity(pair)
        out["equiangular"] = {"flag": eq.flag, "gamma": eq.gamma, "max_dev": eq.max_dev}
    return out


def _emit(out, text: str) -> None:
    out.write(text if text.endswith("\n") else text + "\n")


def cmd_gram(args, out) -> int:
    pair = io.load_pair(args.input)
    csv_text = io.matrix_to_csv(gram(pair))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
    else:
        _emit(out, csv_text)
    return EXIT_OK


def cmd_report(args, out) -> int:
    pair = io.load_pair(args.input)
    t = _tolerances(args)
    rep = full_report(pair, args.orders, args.p_list, args.r_list, args.tol_eq, t)
    metrics = _pair_metrics(pair)
    _emit(out, f"n={pair.n} d={pair.d} p={pair.space.p:g} field={pair.space.field} "
               f"normalized={'yes' if rep.normalized else 'no'}")
    _emit(out, io.table(RECORD_HEADERS, _record_rows(rep.records)))
    if rep.classical:
        note = f" ({rep.classical_note})" if rep.classical_note else ""
        _emit(out, f"classical bounds{note}:")
        _emit(out, io.table(["bound", "value", "applicable", "note"],
                            [[c.name, c.value, c.applicable, c.note] for c in rep.classical]))
    _emit(out, io.table(["metric", "value"], [[k, v if not isinstance(v, dict) else v["flag"]]
                                              for k, v in sorted(metrics.items())]))
    if args.json_out:
        io.write_json({"report": rep.as_dict(), "metrics": metrics, "metadata": _metadata()}, args.json_out)
    return EXIT_VIOLATION if rep.violations else EXIT_OK


def cmd_lift(args, out) -> int:
    pair = io.load_pair(args.input)
    lg = lifted_gram(gram(pair), args.m)
    spec = lifted_frame_spectrum(pair, args.m)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(io.matrix_to_csv(lg))
    else:
        _emit(out, io.matrix_to_csv(lg))
    _emit(out, "lifted spectrum: " + ", ".join(io._cell(z) for z in spec.eigenvalues)
          + f" (+{spec.zero_padding} zeros)")
    if not args.explicit:
        return EXIT_OK
    lifted = explicit_lift(pair, args.m)
    g2 = gram(lifted)
    scale = max(1.0, float(np.max(np.abs(lg))))
    gram_dev = float(np.max(np.abs(g2 - lg))) / scale
    ev = eigen(frame_operator(lifted)).full()
    ours = spec.full()
    k = min(len(ev), len(ours))
    rho = max(1.0, float(np.max(np.abs(ours))) if ours.size else 1.0)
    spec_dev = float(np.max(np.abs(np.sort_complex(ev)[-k:] - np.sort_complex(ours)[-k:]))) / rho if k else 0.0
    ok = gram_dev <= LIFT_REL_TOL and spec_dev <= LIFT_REL_TOL
    _emit(out, f"explicit lift: dim {lifted.d}, gram deviation {gram_dev:.3g}, "
               f"spectrum deviation {spec_dev:.3g}, {'consistent' if ok else 'MISMATCH'}")
    return EXIT_OK if ok else EXIT_VIOLATION


def _guarded(name: str, fn, tol: float):
    try:
        result = fn()
    except WelchError as exc:
        nan = float("nan")
        return [make_record(name, nan, nan, False, [str(exc)], tol)]
    return list(result) if isinstance(result, tuple) else [result]


def cmd_continuous(args, out) -> int:
    casf = io.load_casf(args.input)
    t = _tolerances(args)
    tol = args.tol_eq
    records: list[BoundRecord] = []
    for m in args.orders:
        records += _guarded(f"cont_welch[m={m}]", lambda m=m: cont_welch_check(casf, m, tol, t), tol)
    for r in args.r_list:
        records += _guarded(f"cont_trace_power[r={r:g}]", lambda r=r: cont_trace_power_check(casf, r, tol, t), tol)
    for p in args.p_list:
        records += _guarded(f"cont_p_sum[p={p:g}]", lambda p=p: cont_p_check(casf, p, tol, t), tol)
    mu = casf.measure
    _emit(out, f"atoms={mu.size} d={casf.d} total_mass={mu.total_mass:.6g} diag_mass={mu.diag_mass:.6g}")
    _emit(out, io.table(RECORD_HEADERS, _record_rows(records)))
    metrics = None
    if mu.size >= 2:
        cm = cont_metrics(casf)
        metrics = {"crms": cm.crms, "cpfp": cm.cpfp, "correlation": cm.correlation,
                   "equiangular": {"flag": cm.equiangular.flag, "gamma": cm.equiangular.gamma,
                                   "max_dev": cm.equiangular.max_dev}}
        _emit(out, io.table(["metric", "value"], [["crms", cm.crms], ["cpfp", cm.cpfp],
                                                  ["correlation", cm.correlation],
                                                  ["equiangular", cm.equiangular.flag]]))
    if args.json_out:
        body = {"records": [r.as_dict() for r in records], "metrics": metrics,
                "measure": {"size": mu.size, "total_mass": mu.total_mass,
                            "diag_mass": mu.diag_mass, "offdiag_mass": mu.offdiag_mass}}
        io.write_json({"report": body, "metadata": _metadata()}, args.json_out)
    return EXIT_VIOLATION if any(r.violated for r in records) else EXIT_OK


def cmd_search(args, out) -> int:
    space = LpSpace(args.dim, args.p, args.field)
    cfg = SearchConfig(seed=args.seed, restarts=args.restarts, max_iters=args.max_iters)
    if args.mode == "etf":
        result = etf_search(args.dim, cfg, space)
    else:
        if args.count is None:
            raise UsageError(f"--count is required for --mode {args.mode}")
        fn = grassmannian_search if args.mode == "grassmannian" else potential_minimize
        result = fn(space, args.count, cfg)
    meta = result.metadata()
    rows = [[k, v] for k, v in sorted(meta.items()) if not isinstance(v, dict)]
    rows += [[f"residual.{k}", v] for k, v in sorted(meta["residuals"].items())]
    _emit(out, io.table(["field", "value"], rows))
    if args.out:
        io.write_json(io.search_result_to_dict(result), args.out)
    return EXIT_OK if result.converged else EXIT_NOT_CONVERGED


def cmd_metrics(args, out) -> int:
    pair = io.load_pair(args.input)
    metrics = _pair_metrics(pair)
    if not is_normalized(pair):
        _emit(out, "note: pair is not normalized (f_j(tau_j) != 1); values are raw")
    rows = []
    for k, v in sorted(metrics.items()):
        if isinstance(v, dict):
            rows += [[f"{k}.{kk}", vv] for kk, vv in sorted(v.items())]
        else:
            rows.append([k, v])
    _emit(out, io.table(["metric", "value"], rows))
    if args.json_out:
        io.write_json(metrics, args.json_out)
    return EXIT_OK


COMMANDS = {
    "gram": cmd_gram,
    "report": cmd_report,
    "lift": cmd_lift,
    "continuous": cmd_continuous,
    "search": cmd_search,
    "metrics": cmd_metrics,
}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.verb](args, out)
    except UsageError as exc:
        err.write(f"welch: usage error: {exc}\n")
    except (WelchError, ValueError, TypeError, KeyError, OSError, json.JSONDecodeError) as exc:
        err.write(f"welch: error: {str(exc).splitlines()[0] if str(exc) else type(exc).__name__}\n")
    return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
