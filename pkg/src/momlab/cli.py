"""Batch command-line front end emitting one reproducible record per computation.

Subcommands: ``mom exact|mc|predict``, ``joint exact|predict``, ``phase``,
``integral``, ``fit``, ``crosscheck``.  Records go to standard output (or
--out FILE) as JSON lines or a headered CSV; nothing is written until the
whole run succeeded, so a failed run leaves no partial output.  Exit codes:
0 success, 2 usage error, 3 numerical-accuracy failure.

MOMLAB_THREADS caps the BLAS thread pools for the whole run.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import asdict, dataclass

from . import __version__

_METHODS = ("exact", "mc", "predict", "integral", "fit")

_FIELDS = ["command", "group", "n", "m", "alpha", "method", "value", "log_value",
           "stderr", "phase", "exponent", "exponent_stderr", "constant", "thetas",
           "seed", "samples", "runtime_ms", "version"]


@dataclass
class ResultRecord:
    command: str
    group: str
    n: int | None
    m: float | None
    alpha: float | None
    method: str
    value: float | None = None
    log_value: float | None = None
    stderr: float | None = None
    phase: str | None = None
    exponent: float | None = None
    exponent_stderr: float | None = None
    constant: float | None = None
    thetas: str | None = None
    seed: int | None = None
    samples: int | None = None
    runtime_ms: int = 0
    version: str = __version__


def _float_repr(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return "" if x is None else str(x)


def _emit(records, fmt: str, out) -> None:
    if fmt == "json":
        for r in records:
            d = {k: v for k, v in asdict(r).items() if v is not None}
            out.write(json.dumps(d, separators=(", ", ": ")) + "\n")
    else:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(_FIELDS)
        for r in records:
            d = asdict(r)
            w.writerow([_float_repr(d[k]) for k in _FIELDS])


def _parse_n_list(args) -> list[int]:
    if args.n_list:
        try:
            ns = [int(t) for t in args.n_list.split(",") if t.strip()]
        except ValueError as e:
            raise UsageError(f"bad --n-list: {e}")
        if not ns:
            raise UsageError("--n-list is empty")
        return ns
    if args.n is None:
        raise UsageError("one of --n / --n-list is required")
    return [args.n]


def _parse_thetas(text: str) -> tuple[float, ...]:
    try:
        th = tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError as e:
        raise UsageError(f"bad --thetas: {e}")
    if not th:
        raise UsageError("--thetas is empty")
    return th


class UsageError(Exception):
    pass


def _group_label(name: str, n: int):
    from .determinant import GroupFamily, GroupLabel

    try:
        fam = GroupFamily(name)
    except ValueError:
        raise UsageError(f"unknown group {name!r}")
    return GroupLabel(fam, n)


def _quad_spec(args, n: int):
    from .quadrature import QuadSpec, auto_depth

    return QuadSpec(nodes_per_panel=args.quad_nodes, depth=auto_depth(n))


def _int_m(args) -> int:
    if args.m != int(args.m):
        raise UsageError(f"this subcommand needs integer m, got {args.m}")
    return int(args.m)


def _cmd_mom(args, records) -> int:
    from .determinant import GroupFamily
    from .mom import MCEstimate, MoMParams, mom_exact, mom_mc
    from .sampling import Seed

    fam = GroupFamily(args.group)
    params = MoMParams(fam, args.m, args.alpha)
    for n in _parse_n_list(args):
        t0 = time.perf_counter()
        if args.mode == "exact":
            v = mom_exact(params, n, _quad_spec(args, n))
            rec = ResultRecord("mom exact", args.group, n, args.m, args.alpha, "exact",
                               value=v, log_value=math.log(v) if v > 0 else None)
        elif args.mode == "mc":
            est = mom_mc(params, n, args.samples, Seed(args.seed),
                         nodes_per_panel=args.quad_nodes)
            rec = ResultRecord("mom mc", args.group, n, args.m, args.alpha, "mc",
                               value=est.mean,
                               log_value=math.log(est.mean) if est.mean > 0 else None,
                               stderr=est.stderr, seed=args.seed, samples=args.samples)
        else:  # predict
            from .asymptotics import classify_phase
            rep = classify_phase(_group_label(args.group, n), _int_m(args), args.alpha)
            value = log_value = None
            if rep.constant is not None:
                value = rep.constant * n ** rep.exponent
                log_value = math.log(value)
            rec = ResultRecord("mom predict", args.group, n, args.m, args.alpha, "predict",
                               value=value, log_value=log_value, phase=rep.phase.value,
                               exponent=rep.exponent, constant=rep.constant)
        rec.runtime_ms = int(1000 * (time.perf_counter() - t0))
        records.append(rec)
    return 0


def _cmd_joint(args, records) -> int:
    thetas = _parse_thetas(args.thetas)
    m = len(thetas)
    group = _group_label(args.group, args.n)
    t0 = time.perf_counter()
    if args.mode == "exact":
        from .determinant import joint_moment_exact
        lv = joint_moment_exact(group, m, args.alpha, thetas)
        rec = ResultRecord("joint exact", args.group, args.n, m, args.alpha, "exact",
                           value=lv.to_float(), log_value=lv.log_abs if lv.sign else None,
                           thetas=args.thetas)
    else:
        from .asymptotics import predict_joint_moment_separated
        v = predict_joint_moment_separated(group, m, args.alpha, thetas)
        rec = ResultRecord("joint predict", args.group, args.n, m, args.alpha, "predict",
                           value=v, log_value=math.log(v) if v > 0 else None,
                           thetas=args.thetas)
    rec.runtime_ms = int(1000 * (time.perf_counter() - t0))
    records.append(rec)
    return 0


def _cmd_phase(args, records) -> int:
    from .asymptotics import classify_phase
    t0 = time.perf_counter()
    rep = classify_phase(_group_label(args.group, 1).family, _int_m(args), args.alpha)
    rec = ResultRecord("phase", args.group, None, args.m, args.alpha, "predict",
                       value=rep.constant, phase=rep.phase.value, exponent=rep.exponent,
                       constant=rep.constant,
                       log_value=math.log(rep.constant) if rep.constant else None)
    rec.runtime_ms = int(1000 * (time.perf_counter() - t0))
    records.append(rec)
    return 0


def _cmd_integral(args, records) -> int:
    from .asymptotics import i_hn_numeric
    for n in _parse_n_list(args):
        t0 = time.perf_counter()
        v = i_hn_numeric(_group_label(args.group, n), _int_m(args), args.alpha, n,
                         _quad_spec(args, n))
        rec = ResultRecord("integral", args.group, n, args.m, args.alpha, "integral",
                           value=v, log_value=math.log(v) if v > 0 else None)
        rec.runtime_ms = int(1000 * (time.perf_counter() - t0))
        records.append(rec)
    return 0


def _cmd_fit(args, records) -> int:
    from .asymptotics import fit_scaling_exponent, i_hn_numeric
    from .determinant import GroupFamily
    from .mom import MoMParams, mom_exact, mom_mc
    from .sampling import Seed

    ns = _parse_n_list(args)
    if len(ns) < 3:
        raise UsageError("fit needs --n-list with at least 3 sizes")
    t0 = time.perf_counter()
    pts = []
    for n in ns:
        if args.using == "exact":
            v = mom_exact(MoMParams(GroupFamily(args.group), args.m, args.alpha), n,
                          _quad_spec(args, n))
        elif args.using == "mc":
            v = mom_mc(MoMParams(GroupFamily(args.group), args.m, args.alpha), n,
                       args.samples, Seed(args.seed), nodes_per_panel=args.quad_nodes).mean
        else:
            v = i_hn_numeric(_group_label(args.group, n), _int_m(args), args.alpha, n,
                             _quad_spec(args, n))
        pts.append((n, v))
    slope, err = fit_scaling_exponent(pts)
    rec = ResultRecord("fit", args.group, ns[-1], args.m, args.alpha, "fit",
                       value=slope, exponent=slope, exponent_stderr=err,
                       seed=args.seed if args.using == "mc" else None,
                       samples=args.samples if args.using == "mc" else None)
    rec.runtime_ms = int(1000 * (time.perf_counter() - t0))
    records.append(rec)
    return 0


def _cmd_crosscheck(args, records) -> int:
    from .determinant import GroupFamily
    from .mom import MoMParams, mom_exact, mom_mc
    from .sampling import Seed

    params = MoMParams(GroupFamily(args.group), args.m, args.alpha)
    t0 = time.perf_counter()
    exact = mom_exact(params, args.n, _quad_spec(args, args.n))
    est = mom_mc(params, args.n, args.samples, Seed(args.seed),
                 nodes_per_panel=args.quad_nodes)
    dt = int(1000 * (time.perf_counter() - t0))
    records.append(ResultRecord("crosscheck", args.group, args.n, args.m, args.alpha,
                                "exact", value=exact,
                                log_value=math.log(exact) if exact > 0 else None,
                                runtime_ms=dt))
    records.append(ResultRecord("crosscheck", args.group, args.n, args.m, args.alpha,
                                "mc", value=est.mean,
                                log_value=math.log(est.mean) if est.mean > 0 else None,
                                stderr=est.stderr, seed=args.seed, samples=args.samples,
                                runtime_ms=dt))
    sigma = abs(exact - est.mean) / est.stderr if est.stderr > 0 else 0.0
    print(f"crosscheck: |exact - mc| = {sigma:.2f} sigma (threshold {args.sigma})",
          file=sys.stderr)
    if sigma > args.sigma:
        from .quadrature import AccuracyError
        raise AccuracyError(f"routes disagree by {sigma:.2f} sigma > {args.sigma}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="momlab",
                                description="moments of moments over compact groups")
    sub = p.add_subparsers(dest="command", required=True)
    groups = ["sp", "so-even", "so-odd", "sominus-even", "sominus-odd", "o-even", "o-odd"]

    def common(sp, n=True, m=True, samples=False, thetas=False):
        sp.add_argument("--group", required=True, choices=groups)
        sp.add_argument("--alpha", type=float, required=True)
        if m:
            sp.add_argument("--m", type=float, default=1)
        if n:
            sp.add_argument("--n", type=int)
            sp.add_argument("--n-list", dest="n_list")
        if samples:
            sp.add_argument("--samples", type=int, default=10000)
            sp.add_argument("--seed", type=int, default=0)
        if thetas:
            sp.add_argument("--thetas", required=True)
        sp.add_argument("--quad-nodes", dest="quad_nodes", type=int, default=16)
        sp.add_argument("--format", choices=["json", "csv"], default="json")
        sp.add_argument("--out")

    mom = sub.add_parser("mom", help="moments of moments")
    mom.add_argument("mode", choices=["exact", "mc", "predict"])
    common(mom, samples=True)

    joint = sub.add_parser("joint", help="joint moment at fixed angles")
    joint.add_argument("mode", choices=["exact", "predict"])
    common(joint, m=False, thetas=True)
    joint.set_defaults(n_list=None)

    phase = sub.add_parser("phase", help="phase classification")
    common(phase, n=False)
    phase.add_argument("--n", type=int)  # accepted, unused
    phase.set_defaults(n_list=None)

    integ = sub.add_parser("integral", help="regularized singular integral I_H(n)")
    common(integ)

    fit = sub.add_parser("fit", help="log-log scaling fit over an n list")
    fit.add_argument("--using", choices=["exact", "mc", "integral"], default="exact")
    common(fit, samples=True)

    cc = sub.add_parser("crosscheck", help="exact vs Monte Carlo agreement")
    common(cc, samples=True)
    cc.add_argument("--sigma", type=float, default=4.0)
    return p


_DISPATCH = {"mom": _cmd_mom, "joint": _cmd_joint, "phase": _cmd_phase,
             "integral": _cmd_integral, "fit": _cmd_fit, "crosscheck": _cmd_crosscheck}


def run(argv) -> int:
    """Parse argv, run the computation, and write records; returns the exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    records: list[ResultRecord] = []
    try:
        code = _DISPATCH[args.command](args, records)
    except UsageError as e:
        print(f"momlab: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"momlab: {e}", file=sys.stderr)
        return 2
    except ArithmeticError as e:
        # AccuracyError / ConsistencyError and friends
        print(f"momlab: numerical accuracy failure: {e}", file=sys.stderr)
        return 3
    except RuntimeError as e:
        print(f"momlab: {e}", file=sys.stderr)
        return 3
    buf = io.StringIO()
    _emit(records, args.format, buf)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return code


def main() -> None:
    limit = os.environ.get("MOMLAB_THREADS")
    if limit:
        try:
            cap = max(1, int(limit))
        except ValueError:
            print(f"momlab: bad MOMLAB_THREADS={limit!r}", file=sys.stderr)
            sys.exit(2)
        try:
            from threadpoolctl import threadpool_limits
        except ImportError:
            threadpool_limits = None
        if threadpool_limits is not None:
            with threadpool_limits(limits=cap):
                sys.exit(run(sys.argv[1:]))
    sys.exit(run(sys.argv[1:]))
