"""Command line interface: ``welded-milnor {compute,fuzz,compare,close,longitudes}``.

Exit codes: 0 success, 2 unparseable input, 3 invalid input (bad diagram,
base points, rmax or mismatched component counts), 4 invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from .gauss import DiagramError, GaussCodeError, from_json, normalize_base_points, parse_based, serialize_diagram, to_json
from .milnor import (
    format_sequence,
    is_non_repeated,
    longitude_words,
    mu_bar_table,
    mu_reduced,
    mu_table,
    sv_equivalent,
    table_records,
)
from .moves import check_walk, fuzz_mode, parse_classes, replay_trace
from .stringlink import closure, is_string_link_text, parse_string_link

EXIT_OK, EXIT_PARSE, EXIT_INVALID, EXIT_VIOLATION = 0, 2, 3, 4
MAX_RMAX = 6


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _read(path, code):
    if code is not None:
        return code
    if path is None:
        raise CliError("no input: give a file path or --code", EXIT_PARSE)
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_PARSE) from None


def load(text: str, base: str | None = None):
    """Parse text, JSON or string-link input into ``(diagram, base_points)``."""
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise GaussCodeError(f"invalid JSON: {exc.msg}", exc.pos) from None
        d, p = from_json(obj)
        if obj.get("kind") == "stringlink":
            p = (0,) * d.n
    elif is_string_link_text(text):
        d, p = closure(parse_string_link(text))
    else:
        d, p = parse_based(text)
    if base is not None:
        try:
            values = [int(k) for k in base.split(",")]
        except ValueError:
            raise GaussCodeError(f"bad --base value {base!r}") from None
        p = normalize_base_points(d, values)
    return d, p


def _rmax(args, n):
    rmax = args.rmax if args.rmax is not None else max(2, min(n + 1, 4))
    if rmax < 2:
        raise CliError(f"rmax must be >= 2, got {rmax}", EXIT_INVALID)
    if rmax > MAX_RMAX and not args.allow_large:
        raise CliError(f"rmax {rmax} > {MAX_RMAX} needs --allow-large", EXIT_INVALID)
    return rmax


def _emit(obj):
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def cmd_compute(args):
    d, p = load(_read(args.path, args.code), args.base)
    rmax = _rmax(args, d.n)
    table = mu_table(d, p, rmax)
    records = table_records(table, d.n, non_repeated=args.non_repeated)
    if args.nonzero:
        records = [r for r in records if r["mu"] or r["delta"] or r["mu_bar"]]
    extra = {}
    if args.longitudes:
        extra["longitudes"] = longitude_words(d, p)
    if args.reduced_check:
        bad = [s for s in table if is_non_repeated(s) and mu_reduced(d, p, s) != table[s]]
        extra["reduced_check"] = "ok" if not bad else [format_sequence(s, d.n) for s in bad]
        if bad:
            print(f"reduced-map check failed on {extra['reduced_check']}", file=sys.stderr)
    if args.format == "table":
        for i, w in enumerate(extra.get("longitudes", []), start=1):
            print(f"l{i} = {w}" if w else f"l{i} = 1")
        print(f"{'sequence':>10} {'mu':>6} {'delta':>6} {'mu_bar':>6}")
        for r in records:
            print(f"{r['sequence']:>10} {r['mu']:>6} {r['delta']:>6} {r['mu_bar']:>6}")
        if "reduced_check" in extra:
            print(f"reduced check: {extra['reduced_check']}")
    elif extra:
        _emit({**extra, "table": records})
    else:
        _emit(records)
    return EXIT_VIOLATION if extra.get("reduced_check", "ok") != "ok" else EXIT_OK


def _one_walk(job):
    d, p, seed, steps, classes, rmax, non_repeated, cap = job
    return check_walk(d, p, seed, steps, classes, rmax, non_repeated, cap=cap)


def cmd_fuzz(args):
    classes = parse_classes(args.classes)
    if not classes:
        raise CliError("--classes is empty", EXIT_INVALID)
    if args.replay:
        return _replay(args, classes)
    d, p = load(_read(args.path, args.code), args.base)
    rmax = _rmax(args, d.n) if args.rmax is not None else 3
    jobs = [(d, p, args.seed + k, args.steps, classes, rmax, args.non_repeated, args.cap) for k in range(args.walks)]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_one_walk, jobs))
    else:
        results = [_one_walk(job) for job in jobs]
    ok = all(r.ok for r in results)
    reports = []
    for r in results:
        rep = r.report()
        if not r.ok:
            rep["trace"] = r.trace
        reports.append(rep)
    _emit({"ok": ok, "mode": fuzz_mode(classes, args.non_repeated), "walks": reports})
    if not ok:
        bad = next(r for r in results if not r.ok)
        print(f"invariant violated at step {bad.failed_step} for sequence {bad.sequence}", file=sys.stderr)
        if args.trace_out:
            with open(args.trace_out, "w", encoding="utf-8") as fh:
                fh.write(bad.trace)
        return EXIT_VIOLATION
    return EXIT_OK


def _replay(args, classes):
    from .moves import invariant_snapshot

    states = replay_trace(_read(args.replay, None))
    rmax = args.rmax if args.rmax is not None else 3
    mode = fuzz_mode(classes, args.non_repeated)
    reference = invariant_snapshot(states[0][0], states[0][1], rmax, mode)
    for step, (d, p, _) in enumerate(states[1:], start=1):
        if invariant_snapshot(d, p, rmax, mode) != reference:
            _emit({"ok": False, "mode": mode, "failed_step": step, "final": serialize_diagram(d, p)})
            return EXIT_VIOLATION
    _emit({"ok": True, "mode": mode, "steps": len(states) - 1, "final": serialize_diagram(*states[-1][:2])})
    return EXIT_OK


def cmd_compare(args):
    texts = [_read(path, None) for path in args.paths] + list(args.code or [])
    if len(texts) != 2:
        raise CliError(f"compare needs exactly two inputs, got {len(texts)}", EXIT_PARSE)
    (d1, p1), (d2, p2) = load(texts[0], args.base_a), load(texts[1], args.base_b)
    if d1.n != d2.n:
        raise CliError(f"component counts differ: {d1.n} vs {d2.n}", EXIT_INVALID)
    if args.mode == "sv":
        same, witness = sv_equivalent(d1, p1, d2, p2)
        out = {"mode": "sv", "equivalent": same}
    else:
        rmax = _rmax(args, d1.n)
        b1, b2 = mu_bar_table(mu_table(d1, p1, rmax)), mu_bar_table(mu_table(d2, p2, rmax))
        diff = [s for s in sorted(b1, key=lambda s: (len(s), s)) if b1[s] != b2[s]]
        same, witness = not diff, (diff[0] if diff else None)
        out = {"mode": "mubar", "rmax": rmax, "equivalent": same}
    out["witness"] = None if witness is None else format_sequence(witness, d1.n)
    _emit(out)
    return EXIT_OK


def cmd_close(args):
    text = _read(args.path, args.code)
    if not is_string_link_text(text):
        raise CliError("close expects a string link (first line 'stringlink')", EXIT_PARSE)
    d, p = closure(parse_string_link(text))
    if args.format == "json":
        _emit(to_json(d, p))
    else:
        print(serialize_diagram(d, p))
    return EXIT_OK


def cmd_longitudes(args):
    d, p = load(_read(args.path, args.code), args.base)
    words = longitude_words(d, p)
    if args.format == "json":
        _emit(words)
    else:
        for w in words:
            print(w)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="welded-milnor", description="Milnor invariants of welded links.")
    sub = parser.add_subparsers(dest="command", required=True)

    def inputs(sp, base=True):
        sp.add_argument("path", nargs="?", help="input file ('-' for stdin)")
        sp.add_argument("--code", help="inline Gauss code")
        if base:
            sp.add_argument("--base", help="comma-separated base-point gaps, overriding '@k' annotations")

    def rmax_flags(sp):
        sp.add_argument("--rmax", type=int, help="longest sequence length (default min(n+1, 4))")
        sp.add_argument("--allow-large", action="store_true", help=f"permit rmax > {MAX_RMAX}")

    sp = sub.add_parser("compute", help="table of mu, delta and mu-bar")
    inputs(sp)
    rmax_flags(sp)
    sp.add_argument("--format", choices=("json", "table"), default="json")
    sp.add_argument("--non-repeated", action="store_true", help="only sequences with distinct indices")
    sp.add_argument("--nonzero", action="store_true", help="drop all-zero records")
    sp.add_argument("--longitudes", action="store_true", help="also print the preferred longitudes")
    sp.add_argument("--reduced-check", action="store_true", help="cross-check non-repeated mu with X_k = 0")
    sp.set_defaults(func=cmd_compute)

    sp = sub.add_parser("fuzz", help="random move walks checking invariance")
    inputs(sp)
    rmax_flags(sp)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--steps", type=int, default=1000)
    sp.add_argument("--classes", default="wbar", help="comma list of wbar, base, sv")
    sp.add_argument("--non-repeated", action="store_true")
    sp.add_argument("--walks", type=int, default=1)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--cap", type=int, default=40, help="maximum crossing count")
    sp.add_argument("--trace-out", help="write the failing trace here")
    sp.add_argument("--replay", help="re-run a saved trace instead of a random walk")
    sp.set_defaults(func=cmd_fuzz)

    sp = sub.add_parser("compare", help="sv-equivalence or mu-bar comparison of two inputs")
    sp.add_argument("paths", nargs="*")
    sp.add_argument("--code", action="append", help="inline Gauss code (repeatable)")
    sp.add_argument("--base-a")
    sp.add_argument("--base-b")
    sp.add_argument("--mode", choices=("sv", "mubar"), default="sv")
    rmax_flags(sp)
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("close", help="close a string link to a based link diagram")
    inputs(sp, base=False)
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_close)

    sp = sub.add_parser("longitudes", help="print the preferred longitudes")
    inputs(sp)
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_longitudes)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except GaussCodeError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (DiagramError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
