"""Command-line entry point: `bands`, `butterfly` and `verify`.

Exit codes: 0 ok, 1 a verification failed, 2 bad usage or input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .bandscan import TOUCH_TOL, spectrum_bands
from .bandtype import band_labels
from .contfrac import PRESETS, alpha_expansion, parse_alpha
from .errors import SturmSpecError, ZeroCoupling
from .ids import dry_tmp_verify
from .suites import ALL_CHECKS

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
PRESET_DEPTH = 6


def fmt(x: float) -> str:
    return "%.12g" % x


def cf_text(digits: Sequence[int]) -> str:
    return " ".join(map(str, digits))


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class AlphaChoice:
    digits: tuple[int, ...]
    depth: int


def alpha_from_args(args) -> AlphaChoice:
    if args.cf is not None:
        digits = parse_alpha("cf:" + args.cf)
    elif args.rat is not None:
        digits = parse_alpha("rat:" + args.rat)
    elif args.preset is not None:
        digits = parse_alpha(args.preset)
    else:
        raise UsageError("one of --cf, --rat, --preset is required")
    depth = args.depth
    if depth is None:
        depth = PRESET_DEPTH if args.preset is not None else len(digits)
    if not 0 <= depth <= len(digits):
        raise UsageError(f"--depth must lie in 0..{len(digits)}")
    return AlphaChoice(digits, depth)


def parse_v_grid(text: str) -> np.ndarray:
    try:
        a, b, n = text.split(":")
        a, b, n = float(a), float(b), int(n)
    except ValueError as exc:
        raise UsageError(f"--V-grid expects a:b:n, got {text!r}") from exc
    if n < 0:
        raise UsageError("--V-grid needs n >= 0")
    return np.linspace(a, b, n)


def write_out(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


# -- bands -----------------------------------------------------------------------


def band_rows(digits: Sequence[int], k: int, V: float, exact: bool) -> list[dict]:
    c = alpha_expansion(digits, k)
    bs = spectrum_bands(c, V, "exact" if exact else "auto")
    labels = band_labels(c, V)
    return [b.record(V, lab) for b, lab in zip(bs, labels)]


def cmd_bands(args) -> int:
    if args.V == 0:
        raise ZeroCoupling("--V 0 collapses every spectrum to [-2, 2]")
    choice = alpha_from_args(args)
    c = alpha_expansion(choice.digits, choice.depth)
    rows = band_rows(choice.digits, choice.depth, args.V, args.exact)
    disjoint = spectrum_bands(c, args.V, "exact" if args.exact else "auto").disjoint(args.tol)
    fmt_name = args.format or "json"
    if fmt_name == "json":
        payload = {
            "cf": list(c.digits),
            "V": float(fmt(args.V)),
            "disjoint": disjoint,
            "bands": [
                {
                    "index": r["index"],
                    "left": float(fmt(r["left"])),
                    "right": float(fmt(r["right"])),
                    "type": r["type"],
                }
                for r in rows
            ],
        }
        text = json.dumps(payload, indent=2) + "\n"
    elif fmt_name == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["cf", "V", "index", "left", "right", "type"])
        for r in rows:
            w.writerow([cf_text(c.digits), fmt(args.V), r["index"], fmt(r["left"]), fmt(r["right"]), r["type"] or ""])
        text = buf.getvalue()
    else:
        raise UsageError("bands supports --format json or csv")
    write_out(text, args.out)
    return EXIT_OK


# -- butterfly -------------------------------------------------------------------


def butterfly_rows(digits: Sequence[int], depth: int, grid: Sequence[float], workers: int = 4) -> list[tuple]:
    """(cf, V, left, right, type) for every level 0..depth and every V, in grid order."""

    def one_v(V: float) -> list[tuple]:
        out = []
        for k in range(depth + 1):
            for r in band_rows(digits, k, V, exact=False):
                out.append((cf_text(alpha_expansion(digits, k).digits), V, r["left"], r["right"], r["type"] or ""))
        return out

    if any(V == 0 for V in grid):
        raise ZeroCoupling("the V grid contains 0")
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        chunks = list(pool.map(one_v, [float(V) for V in grid]))
    return [row for chunk in chunks for row in chunk]


COLORS = {"A": "#1f6fb4", "B": "#d0342c", "": "#888888"}


def butterfly_svg(rows: list[tuple], width: int = 800, height: int = 600) -> str:
    """Bands as thin horizontal rectangles, energy across and V upward."""
    if not rows:
        return ""
    Vs = sorted({r[1] for r in rows})
    lo = min(r[2] for r in rows)
    hi = max(r[3] for r in rows)
    span = hi - lo or 1.0
    row_h = height / len(Vs)
    y_of = {V: height - (i + 1) * row_h for i, V in enumerate(Vs)}
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]
    for _, V, left, right, typ in rows:
        x = (left - lo) / span * width
        w = max((right - left) / span * width, 0.5)
        parts.append(
            f'<rect x="{fmt(x)}" y="{fmt(y_of[V])}" width="{fmt(w)}" height="{fmt(max(row_h, 0.5))}" fill="{COLORS[typ]}"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def cmd_butterfly(args) -> int:
    choice = alpha_from_args(args)
    grid = parse_v_grid(args.V_grid)
    rows = butterfly_rows(choice.digits, choice.depth, grid, args.workers)
    fmt_name = args.format or ("svg" if args.out and args.out.endswith(".svg") else "csv")
    if fmt_name == "csv":
        if not rows:
            text = ""
        else:
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["cf", "V", "left", "right", "type"])
            for cf, V, left, right, typ in rows:
                w.writerow([cf, fmt(V), fmt(left), fmt(right), typ])
            text = buf.getvalue()
    elif fmt_name == "svg":
        text = butterfly_svg(rows)
    else:
        raise UsageError("butterfly supports --format csv or svg")
    write_out(text, args.out)
    return EXIT_OK


# -- verify ----------------------------------------------------------------------


def cmd_verify(args) -> int:
    if args.suite == "dry-tmp" and (args.V or args.k is not None or args.L is not None):
        return verify_dry_tmp(args.V or [1.0, 5.0], 10 if args.k is None else args.k, 5 if args.L is None else args.L)
    names = list(ALL_CHECKS) if args.suite == "all" else [args.suite]
    ok = True
    for name in names:
        for check in ALL_CHECKS[name]:
            result = check()
            print(result.line(), flush=True)
            ok &= result.passed
    return EXIT_OK if ok else EXIT_FAIL


def verify_dry_tmp(Vs: Sequence[float], k: int, L: int, digits: Sequence[int] = (1,) * 40) -> int:
    ok = True
    small = []
    for V in Vs:
        v = dry_tmp_verify(digits, k, V, L)
        extra = f" missing {list(v.missing)}" if v.missing else ""
        print(f"V={fmt(V)} k={k} L={L}: {v.status}, {len(v.report.gaps)} gaps, {v.unmatched} unmatched{extra}")
        ok &= v.status == "pass"
        small.append({l for l in v.report.labels if abs(l) <= L})
    if len(small) > 1:
        same = all(s == small[0] for s in small)
        print(f"labels |l|<={L} identical across V: {same}")
        ok &= same
    print("pass" if ok else "fail")
    return EXIT_OK if ok else EXIT_FAIL


# -- parser ----------------------------------------------------------------------


def add_alpha(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--cf", help="alpha digits c1,c2,... (e.g. 1,1,1)")
    g.add_argument("--rat", help="rational alpha p/q in (0, 1]")
    g.add_argument("--preset", choices=sorted(PRESETS), help="named alpha")
    p.add_argument("--depth", type=int, help="approximant level k (default: all digits, or 6 for presets)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sturmspec", description="Spectra of Sturmian Hamiltonians and their periodic approximants.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bands", help="bands of one approximant with their A/B types")
    add_alpha(p)
    p.add_argument("--V", type=float, required=True, help="coupling")
    p.add_argument("--exact", action="store_true", help="isolate edges with exact Sturm chains")
    p.add_argument("--tol", type=float, default=TOUCH_TOL, help="gap below which two bands count as touching")
    p.add_argument("--format", choices=["json", "csv"])
    p.add_argument("--out")
    p.set_defaults(func=cmd_bands)

    p = sub.add_parser("butterfly", help="bands of levels 0..depth over a grid of couplings")
    add_alpha(p)
    p.add_argument("--V-grid", dest="V_grid", required=True, help="a:b:n, n evenly spaced couplings")
    p.add_argument("--workers", type=int, default=4)
    p.add_argument("--format", choices=["csv", "svg"])
    p.add_argument("--out")
    p.set_defaults(func=cmd_butterfly)

    p = sub.add_parser("verify", help="run acceptance checks")
    p.add_argument("suite", choices=["all", *ALL_CHECKS])
    p.add_argument("--V", type=float, action="append", help="dry-tmp: coupling (repeatable)")
    p.add_argument("--k", type=int, help="dry-tmp: level")
    p.add_argument("--L", type=int, help="dry-tmp: largest |l| that must appear")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, SturmSpecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
