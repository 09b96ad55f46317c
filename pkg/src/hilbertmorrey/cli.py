"""Command line front end.

Exit codes: 0 success, 1 an asserted check failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from importlib import resources

import numpy as np

from .embedding import sample_embedding
from .norms import (MorreyParams, ap_constant, discrete_morrey_norm, doubling_constant,
                    reverse_doubling_constant, weighted_morrey_norm)
from .seq import make_sequence, make_weight, seq_from_json
from .transforms import EvalPlan, hilbert_fast, hilbert_naive
from .verify import SCHEMA_VERSION, sweep, validate_config, write_report

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
JOBS_ENV = "HILBERTMORREY_JOBS"


class UsageError(Exception):
    pass


def _emit(text: str, path=None):
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(doc: dict, path=None):
    doc = {"schema_version": SCHEMA_VERSION, **doc}
    _emit(json.dumps(doc, sort_keys=True, indent=1) + "\n", path)


def _read_sequence(args):
    given = [a for a in ("delta", "values", "fixture") if getattr(args, a) is not None]
    if len(given) != 1:
        raise UsageError("give exactly one of --delta, --values, --fixture")
    try:
        if args.delta is not None:
            return make_sequence([1.0], args.delta)
        if args.values is not None:
            vals = [float(v) for v in args.values.split(",")]
            return make_sequence(vals, args.offset)
        with open(args.fixture) as fh:
            return seq_from_json(fh.read())
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        raise UsageError(f"bad sequence input: {exc}") from exc


def _params(args) -> MorreyParams:
    try:
        return MorreyParams(args.p, args.lam)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _weight_for(spec, b, margin=0):
    # large enough for every window the norm search can touch
    reach = max(abs(b.lo), abs(b.hi)) + (b.hi - b.lo) + 2 * margin + 1
    return make_weight(spec, (-2 * reach, 2 * reach))


def cmd_transform(args) -> int:
    b = _read_sequence(args)
    lo, hi = (-args.window, args.window) if args.window is not None else (args.lo, args.hi)
    if lo is None or hi is None:
        raise UsageError("give --window or both --lo and --hi")
    try:
        plan = EvalPlan(lo, hi)
        res = (hilbert_fast if args.fast else hilbert_naive)(b, plan)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _dump({"n": res.n.tolist(), "Hb": res.hb.tolist(), "tail_bound": res.tail_bound,
           "path": "fast" if args.fast else "naive"}, args.out)
    print(f"transform: {plan.size} values on [{lo}, {hi}], "
          f"max |Hb| = {np.abs(res.hb).max():.6g}, tail bound {res.tail_bound:.3g}",
          file=sys.stderr)
    return EXIT_OK


def cmd_norm(args) -> int:
    b = _read_sequence(args)
    P = _params(args)
    try:
        if args.weight is None:
            res = discrete_morrey_norm(b, P, args.margin)
        else:
            w = _weight_for(args.weight, b, args.margin)
            res = weighted_morrey_norm(b, w, P, EvalPlan(b.lo, b.hi, search_margin=args.margin))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _dump(res.as_dict(), args.out)
    return EXIT_OK


def cmd_apconst(args) -> int:
    try:
        w = make_weight(args.weight, (-args.window, args.window))
        ap = ap_constant(w, args.p)
        doc = {"value": ap.value, "exactness": ap.exactness, "witness": list(ap.witness),
               "window": list(ap.window)}
        if args.doubling:
            d = doubling_constant(w)
            d1 = reverse_doubling_constant(w, args.max_n)
            doc["doubling"] = {"value": d.value, "witness": list(d.witness)}
            doc["reverse_doubling"] = {"value": d1.value, "witness": list(d1.witness)}
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _dump(doc, args.out)
    return EXIT_OK


def cmd_embed(args) -> int:
    b = _read_sequence(args)
    try:
        w = make_weight(args.weight, (b.lo - 2, b.hi + 2))
        cols = sample_embedding(b, w, args.samples, args.style)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    names = ["x", "f", "w", "Sf", "Mf"]
    wr.writerow(names + ["schema_version"])
    for row in zip(*(cols[k] for k in names)):
        wr.writerow([repr(float(v)) for v in row] + [SCHEMA_VERSION])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def load_config(name: str) -> dict:
    """Config from a path, or a shipped config by name (``default``, ``negative-control``)."""
    shipped = resources.files("hilbertmorrey") / "configs" / f"{name}.json"
    try:
        if not os.path.exists(name) and shipped.is_file():
            return json.loads(shipped.read_text())
        with open(name) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {name!r}: {exc}") from exc


def cmd_verify(args) -> int:
    config = load_config(args.config)
    if args.jobs is not None:
        config["jobs"] = args.jobs
    try:
        cfg = validate_config(config)
    except ValueError as exc:
        raise UsageError(f"invalid config: {exc}") from exc
    output = dict(cfg["output"])
    if args.json:
        output["json"] = args.json
    if args.csv:
        output["csv"] = args.csv
    for path in output.values():
        parent = os.path.dirname(os.path.abspath(path))
        if not os.access(parent, os.W_OK):
            raise UsageError(f"output directory {parent!r} is not writable")
    start = time.perf_counter()
    report = sweep(config)
    write_report(report, output)
    if not output:
        sys.stdout.write(report.to_json())
    for cid, s in sorted(report.summary().items()):
        print(f"{cid:16s} rows {s['rows']:5d}  asserted {s['asserted']:5d}  failed {s['failed']}",
              file=sys.stderr)
    status = "PASS" if report.ok else "FAIL"
    print(f"verify: {status} in {time.perf_counter() - start:.1f}s", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_bench(args) -> int:
    rng = np.random.default_rng(args.seed)
    b = make_sequence(rng.standard_normal(args.support), -(args.support // 2), trim=False)
    rows = []
    hilbert_naive(b, EvalPlan(-8, 8))  # compile the kernel outside the timing
    for size in args.windows:
        plan = EvalPlan(-size, size)
        t0 = time.perf_counter()
        naive = hilbert_naive(b, plan).hb
        t1 = time.perf_counter()
        fast = hilbert_fast(b, plan).hb
        t2 = time.perf_counter()
        rel = float(np.abs(fast - naive).max() / np.abs(naive).max())
        rows.append({"window": size, "naive_s": t1 - t0, "fast_s": t2 - t1,
                     "speedup": (t1 - t0) / max(t2 - t1, 1e-12), "max_rel_diff": rel})
    _dump({"support": args.support, "rows": rows}, args.out)
    return EXIT_OK


def _add_sequence_args(p):
    p.add_argument("--delta", type=int, help="unit mass at this index")
    p.add_argument("--values", help="comma separated values")
    p.add_argument("--offset", type=int, default=0, help="index of the first --values entry")
    p.add_argument("--fixture", help='JSON file {"lo": int, "values": [...]}')


def _add_param_args(p):
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hilbertmorrey", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", help="discrete Hilbert transform on a window")
    _add_sequence_args(p)
    p.add_argument("--window", type=int, help="half-width: evaluate on [-W, W]")
    p.add_argument("--lo", type=int)
    p.add_argument("--hi", type=int)
    path = p.add_mutually_exclusive_group()
    path.add_argument("--fast", action="store_true", help="FFT convolution path")
    path.add_argument("--naive", action="store_true", help="direct summation (default)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("norm", help="discrete (weighted) Morrey norm")
    _add_sequence_args(p)
    _add_param_args(p)
    p.add_argument("--weight", help="weight family, e.g. const:1, power:0.5, random:7:4")
    p.add_argument("--margin", type=int, default=0, help="extra centers beyond the support")
    p.add_argument("--out")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("apconst", help="discrete A_p constant of a weight on [-W, W]")
    p.add_argument("--weight", required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--window", type=int, default=64)
    p.add_argument("--doubling", action="store_true", help="also report D and D1")
    p.add_argument("--max-n", type=int, default=16)
    p.add_argument("--out")
    p.set_defaults(func=cmd_apconst)

    p = sub.add_parser("embed", help="CSV samples of f, w, S(f), M(f)")
    _add_sequence_args(p)
    p.add_argument("--weight", default="const:1")
    p.add_argument("--style", default="quarter-linear", choices=["quarter-linear", "half-step"])
    p.add_argument("--samples", type=int, default=400)
    p.add_argument("--out")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("verify", help="run an inequality sweep from a JSON config")
    p.add_argument("--config", default="default",
                   help="config path or shipped name (default, negative-control)")
    p.add_argument("--jobs", type=int, default=None,
                   help=f"worker processes (default from ${JOBS_ENV}, else 1)")
    p.add_argument("--json", help="report JSON path (overrides the config)")
    p.add_argument("--csv", help="report CSV path (overrides the config)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="naive vs FFT transform timings")
    p.add_argument("--windows", type=int, nargs="+", default=[2 ** 12, 2 ** 15])
    p.add_argument("--support", type=int, default=17)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
