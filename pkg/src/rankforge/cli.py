"""Command-line front end: ``rankforge {freq,showdown,rank,certify,iterate,agree}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Dict, List, Optional, Sequence, Tuple

from .closed_form import MIN_VALID_R, OutOfValidityError, freq_closed
from .enumerator import DEFAULT_CEILING, EnumerationCeilingError, enumerate_inclusive, enumerate_showdown
from .hands import CLASSES, MIN_RANKS, HandClass, Ranking
from .ranking import (
    NoConvergenceError,
    agreement_sweep,
    certify_stability,
    discrepancies,
    frequency_ranking,
    iterate_showdown,
    scan_breakpoints,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_MISMATCH = 3
EXIT_UNCERTIFIED = 4
EXIT_NOT_FOUND = 5


class UsageError(Exception):
    pass


# ---- parsing helpers ----------------------------------------------------

def parse_span(text: str) -> Tuple[int, int]:
    try:
        a, b = text.split("..")
        lo, hi = int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}") from None
    if hi < lo:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def parse_classes(text: str) -> List[HandClass]:
    try:
        return [HandClass.parse(x) for x in text.split(",") if x.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def parse_ranking_text(text: str) -> Ranking:
    """One class per line, lowest rank first; ``A=B`` on a line declares a tie."""
    levels = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            levels.append(tuple(HandClass.parse(x) for x in line.split("=")))
    return Ranking(tuple(levels))


def format_ranking_text(ranking: Ranking) -> str:
    return "".join("=".join(h.value for h in lv) + "\n" for lv in ranking.levels)


def load_ranking(path: str) -> Ranking:
    with open(path) as fh:
        return parse_ranking_text(fh.read())


def _check_r(r: int) -> int:
    if r < MIN_RANKS:
        raise UsageError(f"r must be at least {MIN_RANKS} (got {r}); smaller decks make some hand types impossible")
    return r


# ---- rendering ----------------------------------------------------------

def dump_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def render_rows(rows: Sequence[Tuple[str, str]], fmt: str, header=("class", "count"), extra: Optional[dict] = None) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()
    width = max(len(header[0]), *(len(a) for a, _ in rows))
    cwidth = max(len(header[1]), *(len(b) for _, b in rows))
    lines = [f"{header[0]:<{width}}  {header[1]:>{cwidth}}"]
    lines += [f"{a:<{width}}  {b:>{cwidth}}" for a, b in rows]
    for k, v in (extra or {}).items():
        lines.append(f"{k}: {v}")
    return "\n".join(lines) + "\n"


def ranking_to_list(ranking: Ranking) -> List[str]:
    return ["=".join(h.value for h in lv) for lv in ranking.levels]


def ranking_lines(ranking: Ranking) -> List[str]:
    """Top (rarest) first, ties annotated."""
    out = []
    for lv in reversed(ranking.levels):
        names = "=".join(h.value for h in lv)
        out.append(names + ("   (tie)" if len(lv) > 1 else ""))
    return out


# ---- commands -----------------------------------------------------------

def _sweep_opts(args) -> dict:
    return dict(
        threads=args.threads,
        suit_canonical=args.suit_canonical,
        progress_interval=args.progress,
        long_run=args.long_run,
        ceiling=DEFAULT_CEILING,
    )


def cmd_freq(args, out) -> int:
    r = _check_r(args.ranks)
    classes = args.classes or list(CLASSES)
    closed: Dict[HandClass, int] = {}
    enum: Dict[HandClass, int] = {}
    if args.method in ("closed", "both"):
        invalid = [h for h in classes if r < MIN_VALID_R[h]]
        if invalid and args.method == "closed":
            names = ", ".join(f"{h} (r >= {MIN_VALID_R[h]})" for h in invalid)
            raise UsageError(f"closed forms are not valid at r={r} for {names}; use --method enum")
        closed = {h: freq_closed(h, r) for h in classes if h not in invalid}
    if args.method in ("enum", "both"):
        table = enumerate_inclusive(r, **_sweep_opts(args))
        enum = {h: table.counts[h] for h in classes}

    counts = enum if enum else closed
    mismatches = [h for h in closed if enum and closed[h] != enum[h]]
    payload = {"r": r, "mode": "inclusive", "method": args.method, "counts": {h.value: str(counts[h]) for h in classes}}
    extra = {}
    if args.method == "both":
        payload["agreement"] = not mismatches
        payload["compared"] = [h.value for h in closed]
        extra["agreement"] = "confirmed" if not mismatches else "MISMATCH " + ",".join(map(str, mismatches))
    if args.format == "json":
        out.write(dump_json(payload))
    else:
        out.write(render_rows([(h.value, str(counts[h])) for h in classes], args.format, extra=extra if args.format == "table" else None))
    if mismatches:
        for h in mismatches:
            print(f"mismatch for {h}: closed={closed[h]} enum={enum[h]}", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def _base_ranking(args, r: int) -> Ranking:
    if args.ranking:
        return load_ranking(args.ranking)
    return frequency_ranking(r, **_sweep_opts(args))


def cmd_showdown(args, out) -> int:
    r = _check_r(args.ranks)
    table = enumerate_showdown(r, _base_ranking(args, r), **_sweep_opts(args))
    if args.format == "json":
        out.write(dump_json(table.to_dict()))
    else:
        rows = [(h.value, str(c)) for h, c in table.rows()]
        extra = {"total": str(table.total), "ranking": " < ".join(ranking_to_list(table.ranking_used))}
        out.write(render_rows(rows, args.format, extra=extra if args.format == "table" else None))
    return EXIT_OK


def cmd_rank(args, out) -> int:
    if args.scan:
        lo, hi = args.scan
        _check_r(lo)
        report = scan_breakpoints(lo, hi, **_sweep_opts(args))
        segs = [
            {"r_low": s.r_low, "r_high": s.r_high, "ranking": ranking_to_list(s.ranking)}
            for s in report.segments
        ]
        if args.format == "json":
            out.write(dump_json({"segments": segs}))
        elif args.format == "csv":
            rows = [(f"{s['r_low']}", f"{s['r_high']}", " ".join(s["ranking"])) for s in segs]
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(("r_low", "r_high", "ranking_low_to_high"))
            w.writerows(rows)
            out.write(buf.getvalue())
        else:
            for s in report.segments:
                span = str(s.r_low) if s.r_low == s.r_high else f"{s.r_low}-{s.r_high}"
                out.write(f"{span:>9}  {s.ranking}\n")
            out.write(f"segment starts: {', '.join(map(str, report.starts))}\n")
        return EXIT_OK

    r = _check_r(args.ranks)
    ranking = frequency_ranking(r, **_sweep_opts(args))
    if args.format == "json":
        out.write(dump_json({"r": r, "ranking": ranking_to_list(ranking), "ties": [[h.value for h in t] for t in ranking.ties]}))
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("level", "classes"))
        w.writerows((i, "=".join(h.value for h in lv)) for i, lv in enumerate(ranking.levels))
        out.write(buf.getvalue())
    else:
        out.write(f"frequency ranking, r={r} (highest first)\n")
        out.write("".join(f"  {line}\n" for line in ranking_lines(ranking)))
    return EXIT_OK


def _cert_dict(p) -> dict:
    c = p.certificate
    return {
        "lower": p.lower.value,
        "upper": p.upper.value,
        "certified": p.certified,
        "criterion": c.criterion,
        "witness": c.witness,
    }


def cmd_certify(args, out) -> int:
    pairs = None
    if args.pair:
        if len(args.pair) != 2:
            raise UsageError("--pair takes exactly two classes, e.g. --pair FL,1P")
        pairs = [tuple(args.pair)]
    report = certify_stability(args.from_r, pairs)
    fail = report.failure
    if args.format == "json":
        out.write(dump_json({
            "from": args.from_r,
            "certified": report.certified,
            "ranking": ranking_to_list(report.ranking),
            "pairs": [_cert_dict(p) for p in report.pairs],
            "hc_checks": [_cert_dict(p) for p in report.hc_checks],
            "failure": None if fail is None else _cert_dict(fail),
        }))
    else:
        out.write(f"frequency ranking at r={args.from_r}: {report.ranking}\n")
        for p in report.pairs:
            c = p.certificate
            status = f"ok ({c.criterion})" if p.certified else f"FAILED, sign changes at r={c.witness}"
            out.write(f"  {p.lower.value} more frequent than {p.upper.value}: {status}\n")
        if report.hc_checks:
            ok = all(p.certified for p in report.hc_checks)
            out.write(f"  HC strictly most frequent: {'ok' if ok else 'FAILED'}\n")
        if fail is None:
            out.write(f"certified: ranking is stable for all r >= {args.from_r}\n")
        else:
            out.write(f"not certified: {fail.lower.value}/{fail.upper.value} changes order at r={fail.certificate.witness}\n")
    return EXIT_OK if report.certified else EXIT_UNCERTIFIED


def _iteration_dict(res, base) -> dict:
    first = res.trajectory[1]
    return {
        "r": res.r,
        "kind": res.kind,
        "period": res.period,
        "steps": len(res.trajectory) - 1,
        "attractor": [ranking_to_list(x) for x in res.rankings],
        "first_step_changes": [[a.value, b.value] for a, b in discrepancies(base, first)],
        "first_step_non_hc_unchanged": not discrepancies(base, first, include_hc=False),
    }


def cmd_iterate(args, out) -> int:
    if args.scan:
        lo, hi = args.scan
        rs = range(_check_r(lo), hi + 1)
    else:
        rs = [_check_r(args.ranks)]
    reports = []
    code = EXIT_OK
    for r in rs:
        base = _base_ranking(args, r)
        try:
            res = iterate_showdown(r, base, args.max_iter, **_sweep_opts(args))
        except NoConvergenceError as e:
            reports.append({"r": r, "kind": "none", "steps": len(e.trajectory) - 1})
            code = EXIT_NOT_FOUND
            continue
        reports.append(_iteration_dict(res, base))
    if args.format == "json":
        out.write(dump_json(reports if args.scan else reports[0]))
        return code
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("r", "kind", "period", "steps"))
        w.writerows((d["r"], d["kind"], d.get("period", ""), d["steps"]) for d in reports)
        out.write(buf.getvalue())
        return code
    for d in reports:
        if d["kind"] == "none":
            out.write(f"r={d['r']}: no fixpoint or cycle within {d['steps']} steps\n")
            continue
        label = "fixpoint" if d["kind"] == "fixpoint" else f"{d['period']}-cycle"
        out.write(f"r={d['r']}: {label} after {d['steps']} step(s)\n")
        changes = d["first_step_changes"]
        if not changes:
            out.write("  first step: unchanged\n")
        else:
            pairs = ", ".join("/".join(p) for p in changes)
            note = " (HC position only)" if d["first_step_non_hc_unchanged"] else ""
            out.write(f"  first step reorders: {pairs}{note}\n")
        for x in d["attractor"]:
            out.write(f"  {' < '.join(x)}\n")
    return code


def cmd_agree(args, out) -> int:
    lo = _check_r(args.r_min)
    rows = list(agreement_sweep(args.include_hc, args.max, lo, **_sweep_opts(args)))
    found = next((row.r for row in rows if row.agrees), None)
    if found is not None:
        rows = [row for row in rows if row.r <= found]
    if args.format == "json":
        out.write(dump_json({
            "include_hc": args.include_hc,
            "min_r": found,
            "rows": [
                {"r": row.r, "agrees": row.agrees, "discrepancies": [[a.value, b.value] for a, b in row.discrepancies]}
                for row in rows
            ],
        }))
    else:
        for row in rows:
            d = ", ".join(f"{a}/{b}" for a, b in row.discrepancies) or "-"
            out.write(f"r={row.r:<3} {'agree' if row.agrees else 'differ'}  {d}\n")
        out.write(f"smallest agreeing r: {found if found is not None else 'not found'}\n")
    return EXIT_OK if found is not None else EXIT_NOT_FOUND


# ---- argument parser ----------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: $RANKFORGE_THREADS, else CPU count)")
    common.add_argument("--format", choices=("table", "json", "csv"), default="table")
    common.add_argument("--long-run", action="store_true",
                        help=f"allow enumeration above r={DEFAULT_CEILING}")
    common.add_argument("--suit-canonical", action="store_true",
                        help="sweep one hand per suit-relabelling orbit (same counts, ~15x faster)")
    common.add_argument("--progress", type=float, default=10.0, metavar="SECONDS",
                        help="progress report interval on stderr (default: 10)")

    p = argparse.ArgumentParser(prog="rankforge", description="Exact poker hand frequencies and rankings for r-rank decks.")
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("freq", parents=[common], help="inclusive hand-class counts")
    f.add_argument("--ranks", type=int, required=True)
    f.add_argument("--method", choices=("closed", "enum", "both"), default="closed")
    f.add_argument("--classes", type=parse_classes, default=None, help="comma-separated subset, e.g. FL,SF")
    f.set_defaults(func=cmd_freq)

    s = sub.add_parser("showdown", parents=[common], help="showdown counts under a ranking")
    s.add_argument("--ranks", type=int, required=True)
    s.add_argument("--ranking", metavar="FILE", help="ranking file (default: frequency ranking)")
    s.set_defaults(func=cmd_showdown)

    rk = sub.add_parser("rank", parents=[common], help="frequency ranking or breakpoint scan")
    g = rk.add_mutually_exclusive_group(required=True)
    g.add_argument("--ranks", type=int)
    g.add_argument("--scan", type=parse_span, metavar="A..B")
    rk.set_defaults(func=cmd_rank)

    c = sub.add_parser("certify", parents=[common], help="certify the ranking is stable from r on")
    c.add_argument("--from", dest="from_r", type=int, required=True)
    c.add_argument("--pair", type=parse_classes, metavar="X,Y")
    c.set_defaults(func=cmd_certify)

    it = sub.add_parser("iterate", parents=[common], help="iterate showdown rankings to a fixpoint or cycle")
    g = it.add_mutually_exclusive_group(required=True)
    g.add_argument("--ranks", type=int)
    g.add_argument("--scan", type=parse_span, metavar="A..B")
    it.add_argument("--ranking", metavar="FILE", help="starting ranking (default: frequency ranking)")
    it.add_argument("--max-iter", type=int, default=32)
    it.set_defaults(func=cmd_iterate)

    a = sub.add_parser("agree", parents=[common], help="smallest r where showdown and frequency rankings agree")
    a.add_argument("--max", type=int, required=True)
    a.add_argument("--min", dest="r_min", type=int, default=MIN_RANKS)
    a.add_argument("--include-hc", action="store_true")
    a.set_defaults(func=cmd_agree)
    return p


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except (UsageError, OutOfValidityError, EnumerationCeilingError, ValueError, OSError) as e:
        print(f"rankforge: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
