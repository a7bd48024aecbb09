"""Command-line harness: generate matrices, factor files, run sweeps.

Three subcommands. `gen` writes a generated matrix as a Matrix Market file
and prints its sparsity profile. `factor` loads a file, runs one pipeline
with one shift mode, and prints the experiment record (optionally JSON,
optionally with the bound report). `bench` sweeps conditioning knobs and
shift modes for one family and writes one CSV row per point.

Exit codes: 0 success, 2 usage error, 3 I/O or file-format failure,
4 breakdown under --strict. Breakdown without --strict is a recorded
outcome, not an error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from .algos import (cholesky_qr, cholesky_qr2, shifted_cholesky_qr,
                    shifted_cholesky_qr3)
from .bounds import evaluate_bounds, metrics
from .gen import (Family, GenSpec, ParseError, UnsupportedField, generate,
                  read_matrix_market, write_matrix_market)
from .matcore import spectral
from .shift import check_enc, plan_shift
from .sparsity import profile, validate_settings

#: fixed schema; reruns with equal arguments reproduce all non-timing
#: columns bit-identically
CSV_HEADER = ("matrix_id,family,m,n,kappa_measured,shift_mode,s_value,"
              "branch,orthogonality,residual_abs,residual_rel,"
              "breakdown_stage,bounds_satisfied,wall_time_s,profile_time_s,"
              "seed")

_BENCH_MODES = ("auto", "alternative", "original", "none")


def _cell(v):
    """Serialize one CSV/table cell; floats via repr for rerun stability."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


@dataclass(frozen=True)
class ExperimentRecord:
    """One benchmark row; None marks an absent CSV cell.

    Exactly one of orthogonality / breakdown_stage is present: a run either
    produced a measurable Q or stopped at a recorded stage.
    """

    matrix_id: str
    family: str
    m: int
    n: int
    kappa_measured: float
    shift_mode: str
    s_value: float
    branch: str
    orthogonality: float | None
    residual_abs: float | None
    residual_rel: float | None
    breakdown_stage: int | None
    bounds_satisfied: bool | None
    wall_time_s: float
    profile_time_s: float
    seed: int | None

    def __post_init__(self):
        if (self.orthogonality is None) == (self.breakdown_stage is None):
            raise ValueError(
                "exactly one of orthogonality / breakdown_stage must be set")
        if not self.wall_time_s > 0:
            raise ValueError("wall_time_s must be positive")

    def to_dict(self):
        return {
            "matrix_id": self.matrix_id, "family": self.family,
            "m": self.m, "n": self.n,
            "kappa_measured": self.kappa_measured,
            "shift_mode": self.shift_mode, "s_value": self.s_value,
            "branch": self.branch, "orthogonality": self.orthogonality,
            "residual_abs": self.residual_abs,
            "residual_rel": self.residual_rel,
            "breakdown_stage": self.breakdown_stage,
            "bounds_satisfied": self.bounds_satisfied,
            "wall_time_s": self.wall_time_s,
            "profile_time_s": self.profile_time_s, "seed": self.seed,
        }

    def csv_row(self):
        return ",".join(_cell(v) for v in self.to_dict().values())


def _build_parser():
    p = argparse.ArgumentParser(
        prog="scholqr",
        description="Cholesky QR factorization harness for tall-skinny "
                    "matrices with sparsity-aware shift selection.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a matrix and write it to a "
                                   "Matrix Market file")
    g.add_argument("--family", required=True, choices=["t1", "t2", "dense"])
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--knob", type=float, required=True,
                   help="conditioning knob: a (t1), b (t2), or sigma (dense)")
    g.add_argument("--seed", type=int, default=None,
                   help="dense family only; default 0")
    g.add_argument("--out", required=True)

    f = sub.add_parser("factor", help="factor a Matrix Market file and "
                                      "print the experiment record")
    f.add_argument("--in", dest="path", required=True)
    f.add_argument("--algo", required=True,
                   choices=["cqr", "cqr2", "scqr", "scqr3"])
    f.add_argument("--shift", default=None,
                   help="auto | alternative | original | value:<s> "
                        "(cqr/cqr2 accept only value:0)")
    f.add_argument("--check-bounds", action="store_true", dest="check_bounds")
    f.add_argument("--json", action="store_true", dest="as_json")
    f.add_argument("--strict", action="store_true",
                   help="exit 4 on breakdown instead of recording it")

    b = sub.add_parser("bench", help="sweep knobs and shift modes, write CSV")
    b.add_argument("--family", required=True, choices=["t1", "t2", "dense"])
    b.add_argument("--m", type=int, default=2048)
    b.add_argument("--n", type=int, default=64)
    b.add_argument("--knobs", required=True, help="comma-separated values")
    b.add_argument("--shifts", default="auto",
                   help="comma-separated subset of auto,alternative,"
                        "original,none")
    b.add_argument("--repeats", type=int, default=1)
    b.add_argument("--seed", type=int, default=0,
                   help="dense family only")
    b.add_argument("--out", required=True)
    b.add_argument("--parallel", type=int, default=1,
                   help="concurrent sweep points (capped by SCHOLQR_THREADS)")
    return p


def _usage(msg):
    print(f"error: {msg}", file=sys.stderr)
    return 2


def _cmd_gen(args):
    try:
        x = generate(GenSpec(Family(args.family), args.m, args.n,
                             args.knob, args.seed))
    except ValueError as e:
        return _usage(e)
    write_matrix_market(x, args.out)
    prof = profile(x)
    print(f"wrote {args.out} rows={x.shape[0]} cols={x.shape[1]} "
          f"kind={prof.kind.value} v={prof.v} t1={prof.t1} t2={prof.t2} "
          f"c={_cell(prof.c)}")
    for violation in validate_settings(x.shape[0], x.shape[1]):
        print(f"warning: size outside admissible range: {violation}")
    return 0


def _parse_shift(raw, algo):
    """Resolve --shift into (mode label, forced branch or None, value or None)."""
    if algo in ("cqr", "cqr2"):
        if raw is not None and raw not in ("value:0", "value:0.0"):
            raise ValueError(f"--algo {algo} accepts no shift "
                             f"(only value:0), got {raw!r}")
        return "none", None, 0.0
    raw = "auto" if raw is None else raw
    if raw == "auto":
        return "auto", None, None
    if raw in ("alternative", "original"):
        return raw, raw, None
    if raw.startswith("value:"):
        try:
            s = float(raw[6:])
        except ValueError:
            raise ValueError(f"bad shift value {raw!r}") from None
        if not (s >= 0.0 and math.isfinite(s)):
            raise ValueError(f"shift value must be finite and >= 0, got {s}")
        return raw, None, s
    raise ValueError(f"unknown shift mode {raw!r}")


def _run_algo(x, algo, s, keep_w):
    if algo == "cqr":
        return cholesky_qr(x)
    if algo == "cqr2":
        return cholesky_qr2(x)
    if algo == "scqr":
        return shifted_cholesky_qr(x, s)
    return shifted_cholesky_qr3(x, s, keep_w=keep_w)


def _bound_report(plan, spec, prof, met, kappa_w, m, n, s):
    if s != plan.s:
        plan = replace(plan, s=s, window_ok=s <= plan.j_b)
    enc = check_enc(prof, spec, m, n)
    return evaluate_bounds(plan, spec, met, kappa_w, m, n, enc=enc)


def _cmd_factor(args):
    try:
        mode, force, s_fixed = _parse_shift(args.shift, args.algo)
    except ValueError as e:
        return _usage(e)
    x = read_matrix_market(args.path)
    m, n = x.shape

    t0 = time.perf_counter()
    try:
        prof = profile(x)
        spec = spectral(x)
        plan = plan_shift(prof, spec, m, n, force_branch=force)
    except ValueError as e:
        # unusable file content (wide, non-finite, or all-zero matrix)
        print(f"error: {args.path}: {e}", file=sys.stderr)
        return 3
    profile_time = time.perf_counter() - t0

    s = plan.s if s_fixed is None else s_fixed
    keep_w = args.check_bounds and args.algo == "scqr3"
    t0 = time.perf_counter()
    out = _run_algo(x, args.algo, s, keep_w)
    wall = time.perf_counter() - t0

    report = None
    bounds_satisfied = None
    if out.succeeded:
        met = metrics(x, out)
        orth, rabs, rrel = met.orthogonality, met.residual_abs, met.residual_rel
        bstage = None
        if args.check_bounds:
            kappa_w = spectral(out.w).kappa2 if out.w is not None else None
            report = _bound_report(plan, spec, prof, met, kappa_w, m, n, s)
            bounds_satisfied = report.all_satisfied
    else:
        orth = rabs = rrel = None
        bstage = out.breakdown_stage

    rec = ExperimentRecord(
        matrix_id=Path(args.path).stem, family="file", m=m, n=n,
        kappa_measured=spec.kappa2, shift_mode=mode,
        s_value=0.0 if mode == "none" else s,
        branch="" if mode == "none" else plan.branch.value,
        orthogonality=orth, residual_abs=rabs, residual_rel=rrel,
        breakdown_stage=bstage, bounds_satisfied=bounds_satisfied,
        wall_time_s=wall, profile_time_s=profile_time, seed=None)

    payload = rec.to_dict()
    if report is not None:
        payload["bounds"] = {
            "branch": report.branch.value,
            "kappa_sufficient": report.kappa_sufficient,
            "kappa_admissible_U": report.kappa_admissible_U,
            "orth_bound": report.orth_bound,
            "resid_bound": report.resid_bound,
            "resid_bound_enc": report.resid_bound_enc,
            "stage1_resid_bound": report.stage1_resid_bound,
            "kappa_w_bound": report.kappa_w_bound,
            "all_satisfied": report.all_satisfied,
        }
    if args.as_json:
        print(json.dumps(payload))
    else:
        print(" ".join(f"{k}={_cell(v)}" for k, v in rec.to_dict().items()))
        if report is not None:
            print(" ".join(f"{k}={_cell(v)}" if not isinstance(v, str)
                           else f"{k}={v}"
                           for k, v in payload["bounds"].items()))
    if not out.succeeded and args.strict:
        return 4
    return 0


def _bench_point(family, m, n, knob, mode, seed, repeats):
    fam = Family(family)
    x = generate(GenSpec(fam, m, n, knob, seed))
    force = mode if mode in ("alternative", "original") else None

    t0 = time.perf_counter()
    prof = profile(x)
    spec = spectral(x)
    plan = plan_shift(prof, spec, m, n, force_branch=force)
    profile_time = time.perf_counter() - t0

    s = 0.0 if mode == "none" else plan.s
    t0 = time.perf_counter()
    out = shifted_cholesky_qr3(x, s, keep_w=True)
    times = [time.perf_counter() - t0]
    for _ in range(repeats - 1):
        t0 = time.perf_counter()
        shifted_cholesky_qr3(x, s)
        times.append(time.perf_counter() - t0)

    if out.succeeded:
        met = metrics(x, out)
        orth, rabs, rrel = met.orthogonality, met.residual_abs, met.residual_rel
        bstage = None
        kappa_w = spectral(out.w).kappa2
        report = _bound_report(plan, spec, prof, met, kappa_w, m, n, s)
        bounds_satisfied = report.all_satisfied
    else:
        orth = rabs = rrel = None
        bstage = out.breakdown_stage
        bounds_satisfied = None

    matrix_id = f"{family}-{knob:g}"
    if fam is Family.DENSE_SVD:
        matrix_id += f"-s{seed}"
    return ExperimentRecord(
        matrix_id=matrix_id, family=family, m=m, n=n,
        kappa_measured=spec.kappa2, shift_mode=mode, s_value=s,
        branch="" if mode == "none" else plan.branch.value,
        orthogonality=orth, residual_abs=rabs, residual_rel=rrel,
        breakdown_stage=bstage, bounds_satisfied=bounds_satisfied,
        wall_time_s=sum(times) / len(times), profile_time_s=profile_time,
        seed=seed if fam is Family.DENSE_SVD else None)


def _cmd_bench(args):
    try:
        knobs = [float(t) for t in args.knobs.split(",") if t.strip()]
    except ValueError:
        return _usage(f"bad --knobs {args.knobs!r}")
    modes = [t.strip() for t in args.shifts.split(",") if t.strip()]
    if not knobs or not modes:
        return _usage("--knobs and --shifts must be nonempty")
    bad = [mo for mo in modes if mo not in _BENCH_MODES]
    if bad:
        return _usage(f"unknown shift mode(s) {bad}; "
                      f"choose from {', '.join(_BENCH_MODES)}")
    if args.repeats < 1:
        return _usage("--repeats must be >= 1")
    if args.parallel < 1:
        return _usage("--parallel must be >= 1")

    # sorted sweep -> deterministic row order regardless of execution order
    points = sorted((k, mo) for k in knobs for mo in modes)
    workers = args.parallel
    cap = os.environ.get("SCHOLQR_THREADS")
    if cap:
        try:
            workers = min(workers, max(1, int(cap)))
        except ValueError:
            return _usage(f"bad SCHOLQR_THREADS {cap!r}")

    def run(point):
        knob, mode = point
        return _bench_point(args.family, args.m, args.n, knob, mode,
                            args.seed, args.repeats)

    try:
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                records = list(pool.map(run, points))
        else:
            records = [run(p) for p in points]
    except ValueError as e:
        return _usage(e)

    with open(args.out, "w") as fh:
        fh.write(CSV_HEADER + "\n")
        for rec in records:
            fh.write(rec.csv_row() + "\n")
    broke = sum(1 for r in records if r.breakdown_stage is not None)
    print(f"wrote {args.out}: {len(records)} rows ({broke} breakdowns)")
    return 0


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2
    try:
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "factor":
            return _cmd_factor(args)
        return _cmd_bench(args)
    except (OSError, ParseError, UnsupportedField) as e:
        print(f"error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
