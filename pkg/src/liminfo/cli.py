"""Command-line entry point.

    liminfo table --s 2 --n 2 --verify
    liminfo query --s 3 --f 101 --mask 111
    liminfo dimwit --dim 7 --samples 1000000 --seed 42 --fit

Identical invocations produce byte-identical output.  ``--format json``
wraps any result as ``{"meta": {...}, "data": ...}``.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, rng as rngmod
from .designs import (
    CompositeQuestion,
    TableTooLarge,
    build_table,
    classify_question,
    item_indices,
    table_from_csv,
    table_to_csv,
    verify_table,
)
from .dimwitness import (
    DEFAULT_BINS,
    SAMPLER_ID,
    BallSampler,
    MeanHistogram,
    disc_halfdisc_demo,
    fit_dimension,
    histogram,
    ks_distance,
    purity_drift,
    sample_projections,
)
from .geometry import (
    TheoryLevel,
    mask_from_bits,
    mask_label,
    mask_to_bits,
    planar_rotation,
    qubit_embedding,
    random_rotation,
)
from .infometrics import ComplementaryFrame, InfoMeasure, invariance_scan, total_info
from .oracle import BooleanFunction, ParityQuestion, classical_answerable, classical_query, run_query

STOCHASTIC = {"info", "dimwit", "purity", "halfdisc"}


class UsageError(Exception):
    pass


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n"


def _meta(args) -> dict:
    params = {k: v for k, v in sorted(vars(args).items())
              if k not in {"command", "func", "output", "format", "strict"}}
    meta = {"version": __version__, "command": args.command, "parameters": params}
    if args.command in STOCHASTIC:
        meta["seed"] = args.seed
        meta["rng"] = rngmod.ALGORITHM
    return meta


def _emit(args, text: str):
    if args.output:
        try:
            Path(args.output).write_text(text)
        except OSError as exc:
            raise UsageError(f"cannot write {args.output}: {exc}") from None
    else:
        sys.stdout.write(text)


def _positive(name, value, minimum=1):
    if value is None or value < minimum:
        raise UsageError(f"--{name} must be >= {minimum}")


# -- subcommands ------------------------------------------------------------

def _item_text(item: int, s: int, N: int) -> str:
    """Item as its per-box function indices, e.g. '12' for j_1 = 1, j_2 = 2."""
    js = item_indices(item, s, N)
    width = len(str((1 << s) - 1))
    sep = "" if width == 1 else "."
    return sep.join(str(j).rjust(width) for j in js)


def cmd_table(args) -> int:
    if args.from_file:
        try:
            t = table_from_csv(Path(args.from_file).read_text())
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read table from {args.from_file}: {exc}") from None
    else:
        _positive("s", args.s)
        _positive("n", args.n)
        try:
            t = build_table(args.s, args.n, max_items=args.max_items)
        except TableTooLarge as exc:
            raise UsageError(str(exc)) from None
    report = verify_table(t) if args.verify or args.from_file else None

    if args.format == "json":
        data = {
            "s": t.s, "N": t.N, "rows": t.n_rows, "columns": t.n_columns,
            "table": [{"question": list(t.questions[r]) if r < len(t.questions) else None,
                       "kind": (classify_question(CompositeQuestion(t.N, t.questions[r]))
                                if r < len(t.questions) and any(t.questions[r]) else None),
                       "columns": t.columns(r)} for r in range(t.n_rows)],
        }
        if report is not None:
            data["verified"] = report.ok
            data["violation"] = report.violation
        _emit(args, _dumps({"meta": _meta(args), "data": data}))
    elif args.format == "csv" or args.output:
        _emit(args, table_to_csv(t))
        if report is not None and args.output:
            sys.stdout.write(f"verified: {str(report.ok).lower()}\n")
    else:
        lines = [f"s={t.s} N={t.N} rows={t.n_rows} columns={t.n_columns}"]
        if not args.from_file:
            for r in range(t.n_rows):
                q = t.questions[r] if r < len(t.questions) else ()
                cols = " | ".join(" ".join(_item_text(i, t.s, t.N) for i in c) for c in t.columns(r))
                lines.append(f"{cols}    lambda={q}")
        sys.stdout.write("\n".join(lines) + "\n")
    if report is not None:
        if args.format != "json" and not args.output:
            sys.stdout.write(f"verified: {str(report.ok).lower()}\n")
        if not report.ok:
            sys.stderr.write(f"verification failed: {report.violation}\n")
            return 1
    return 0


def cmd_query(args) -> int:
    try:
        f = BooleanFunction.from_bits(args.f)
        q = ParityQuestion.from_bits(args.mask)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    s = args.s if args.s is not None else f.s
    if not (f.s == q.s == s):
        raise UsageError(f"--f and --mask must both have {s} digits")
    rec = run_query(q, f)
    data = {"s": s, "f": str(f), "j": f.index, "mask": str(q), "question": mask_label(q.mask),
            "answer": rec.answer, "outcome": rec.outcome, "probability": str(rec.probability),
            "oracle_calls": rec.oracle_calls}
    if args.format == "json":
        _emit(args, _dumps({"meta": _meta(args), "data": data}))
    else:
        _emit(args, f"f={data['f']} (j={data['j']}) question {data['question']} = ?\n"
                    f"answer: {rec.answer}\n")
    return 0


def cmd_classical(args) -> int:
    try:
        g = mask_from_bits(args.design)
        f = BooleanFunction.from_bits(args.f) if args.f else None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    s = len(args.design)
    if f is not None and f.s != s:
        raise UsageError("--design and --f must have the same length")
    answerable = [mask_to_bits(c, s) for c in classical_answerable(g, s)]
    data = {"s": s, "design": args.design, "answerable_masks": answerable}
    if f is not None:
        data["f"] = str(f)
        data["answer"] = classical_query(g, f)
    if args.format == "json":
        _emit(args, _dumps({"meta": _meta(args), "data": data}))
    else:
        out = [f"design {args.design} answers masks: {', '.join(answerable) or 'none'}"]
        if f is not None:
            out.append(f"answer: {data['answer']}")
        _emit(args, "\n".join(out) + "\n")
    return 0


def _level_dim(args) -> int:
    if args.dim is not None:
        _positive("dim", args.dim)
        return args.dim
    _positive("s", args.s)
    return TheoryLevel(args.s).D


def cmd_info(args) -> int:
    D = _level_dim(args)
    _positive("trials", args.trials)
    try:
        params = InfoMeasure.shannon_limit(args.k) if args.shannon else InfoMeasure(args.alpha, args.k)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    stream = rngmod.make_stream(args.seed)
    state_rng, scan_rng = stream.spawn(2)
    n = state_rng.standard_normal(D)
    n *= args.radius / np.linalg.norm(n)
    res = invariance_scan(n, params, args.trials, scan_rng)
    data = {"D": D, "alpha": params.alpha, "k": params.norm, "shannon": params.shannon,
            "state_norm_sq": float(n @ n), "base_info": res.base_info,
            "max_deviation": res.max_deviation,
            "canonical_info": total_info(n, ComplementaryFrame.canonical(D), params)}
    if args.format == "json":
        _emit(args, _dumps({"meta": _meta(args), "data": data}))
    else:
        _emit(args, "".join(f"{k}: {v!r}\n" for k, v in sorted(data.items())))
    return 0


def cmd_dimwit(args) -> int:
    _positive("dim", args.dim)
    _positive("samples", args.samples)
    _positive("bins", args.bins, 2)
    _positive("axes", args.axes)
    if args.axes >= args.dim:
        raise UsageError("--axes must be smaller than --dim")
    if args.radius <= 0:
        raise UsageError("--radius must be positive")
    sampler = BallSampler(args.dim, args.radius, rngmod.make_stream(args.seed))
    proj = sample_projections(sampler, np.eye(args.dim)[:args.axes], args.samples)
    h = histogram(proj, args.radius, args.bins)
    meta = _meta(args)
    meta.update(D=args.dim, R=args.radius, d=args.axes, samples=args.samples, sampler=SAMPLER_ID)
    fit = fit_dimension(h).to_dict() if args.fit and args.axes == 1 else None
    if args.format == "json":
        data = {"edges": h.edges.tolist(), "counts": h.counts.tolist()}
        if args.axes == 1:
            data["ks_distance"] = ks_distance(proj, args.dim, args.radius)
        if fit:
            data["fit"] = fit
        _emit(args, _dumps({"meta": meta, "data": data}))
        return 0
    if args.axes != 1:
        raise UsageError("CSV output needs --axes 1; use --format json")
    if args.output:
        out = Path(args.output)
        _emit(args, h.to_csv())
        Path(f"{out}.meta.json").write_text(_dumps(meta))
        if fit:
            Path(f"{out}.fit.json").write_text(_dumps(fit))
    else:
        tail = {"meta": meta}
        if fit:
            tail["fit"] = fit
        sys.stdout.write(h.to_csv() + "\n" + _dumps(tail))
    return 0


def cmd_fit(args) -> int:
    try:
        text = Path(args.from_file).read_text()
        h = MeanHistogram.from_csv(text)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read histogram from {args.from_file}: {exc}") from None
    try:
        fit = fit_dimension(h, args.radius)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    doc = {"meta": _meta(args), "data": fit.to_dict()} if args.format == "json" else fit.to_dict()
    _emit(args, _dumps(doc))
    return 0


def cmd_purity(args) -> int:
    _positive("s", args.s, 2)
    _positive("steps", args.steps)
    level = TheoryLevel(args.s)
    D = level.D
    emb = qubit_embedding(level, (0, 1, 2))
    stream = rngmod.make_stream(args.seed)
    state_rng, rot_rng = stream.spawn(2)
    v = state_rng.standard_normal(3)
    n0 = emb.inject(v / np.linalg.norm(v))
    if args.mode == "block":
        R = emb.random_block(rot_rng)
    elif args.mode == "planar":
        if D < 4:
            raise UsageError("planar mode needs an axis outside the qubit triple (s >= 3)")
        R = planar_rotation(D, 2, 3, args.theta)
    else:
        R = random_rotation(D, rot_rng)
    trace = purity_drift(level, n0, R, args.steps, emb)
    if args.format == "json":
        _emit(args, _dumps({"meta": _meta(args), "data": {"projected_length": trace.tolist()}}))
    else:
        lines = ["step,projected_length"] + [f"{i + 1},{x!r}" for i, x in enumerate(trace.tolist())]
        _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_halfdisc(args) -> int:
    if args.samples < 10_000:
        raise UsageError("--samples must be >= 10000")
    _positive("bins", args.bins)
    res = disc_halfdisc_demo(args.samples, rngmod.make_stream(args.seed), args.bins, args.control)
    data = {"single_axis_distance": res.single_axis_distance,
            "two_axis_distance": res.two_axis_distance}
    if args.format == "json":
        _emit(args, _dumps({"meta": _meta(args), "data": data}))
    else:
        _emit(args, "".join(f"{k}: {v!r}\n" for k, v in data.items()))
    return 0


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="liminfo", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"liminfo {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["csv", "json", "text"], default=None)
    common.add_argument("--output", "-o", default=None, help="write the primary output here")
    common.add_argument("--seed", type=int, default=None, help="64-bit seed (default 0)")
    common.add_argument("--strict", action="store_true", help="refuse randomized runs without --seed")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("table", parents=[common], help="build or verify a complementarity table")
    t.add_argument("--s", type=int)
    t.add_argument("--n", type=int, default=1)
    t.add_argument("--verify", action="store_true")
    t.add_argument("--from", dest="from_file")
    t.add_argument("--max-items", type=int, default=1 << 15)
    t.set_defaults(func=cmd_table)

    q = sub.add_parser("query", parents=[common], help="single-query protocol")
    q.add_argument("--s", type=int)
    q.add_argument("--f", required=True, help="box contents, f(0) leftmost, e.g. 101")
    q.add_argument("--mask", required=True, help="parity mask, position 0 leftmost, e.g. 111")
    q.set_defaults(func=cmd_query)

    c = sub.add_parser("classical", parents=[common], help="classical-bit baseline")
    c.add_argument("--design", "--g", dest="design", required=True, help="flip design, position 0 leftmost")
    c.add_argument("--f")
    c.set_defaults(func=cmd_classical)

    i = sub.add_parser("info", parents=[common], help="information measure invariance scan")
    i.add_argument("--s", type=int, default=2)
    i.add_argument("--dim", type=int)
    i.add_argument("--alpha", type=float, default=2.0)
    i.add_argument("--k", type=float)
    i.add_argument("--shannon", action="store_true")
    i.add_argument("--trials", type=int, default=100)
    i.add_argument("--radius", type=float, default=1.0, help="state norm")
    i.set_defaults(func=cmd_info)

    d = sub.add_parser("dimwit", parents=[common], help="sample the dimension witness histogram")
    d.add_argument("--dim", type=int, required=True)
    d.add_argument("--samples", type=int, default=100_000)
    d.add_argument("--bins", type=int, default=DEFAULT_BINS)
    d.add_argument("--radius", "--r", dest="radius", type=float, default=1.0)
    d.add_argument("--axes", type=int, default=1, help="number of orthogonal measurement axes")
    d.add_argument("--fit", action="store_true")
    d.set_defaults(func=cmd_dimwit)

    f = sub.add_parser("fit", parents=[common], help="fit D to a histogram CSV")
    f.add_argument("--from", dest="from_file", required=True)
    f.add_argument("--radius", "--r", dest="radius", type=float)
    f.set_defaults(func=cmd_fit)

    u = sub.add_parser("purity", parents=[common], help="purity drift of the projected qubit")
    u.add_argument("--s", type=int, default=3)
    u.add_argument("--steps", type=int, default=100)
    u.add_argument("--theta", type=float, default=0.1)
    u.add_argument("--mode", choices=["planar", "block", "random"], default="planar")
    u.set_defaults(func=cmd_purity)

    h = sub.add_parser("halfdisc", parents=[common], help="disc versus half-disc demonstration")
    h.add_argument("--samples", type=int, default=100_000)
    h.add_argument("--bins", type=int, default=2)
    h.add_argument("--control", action="store_true", help="compare two discs instead")
    h.set_defaults(func=cmd_halfdisc)
    return p


DEFAULT_FORMAT = {"table": "text", "query": "text", "classical": "text", "info": "text",
                  "dimwit": "csv", "fit": "json", "purity": "csv", "halfdisc": "text"}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = DEFAULT_FORMAT[args.command]
    try:
        if args.seed is None:
            if args.strict and args.command in STOCHASTIC:
                raise UsageError(f"{args.command} is randomized; --strict requires --seed")
            args.seed = 0
        if not 0 <= args.seed < 1 << 64:
            raise UsageError("--seed must be a 64-bit unsigned integer")
        return args.func(args)
    except UsageError as exc:
        parser.exit(2, f"liminfo {args.command}: error: {exc}\n")
