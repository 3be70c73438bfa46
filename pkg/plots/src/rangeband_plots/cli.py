"""Command-line wrapper: render a result CSV to a figure directory."""

from __future__ import annotations

import argparse
import sys
import warnings

from .figures import FigureSpec, render_figures


def _parse_pairs(items, what):
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key or not value:
            raise ValueError(f"bad {what} {item!r}, expected KEY=VALUE")
        out[key] = value
    return out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="rangeband-plots",
        description="Render benchmark CSV tables to regret-versus-scale panels.",
    )
    parser.add_argument("--in", dest="inp", required=True, help="input result CSV")
    parser.add_argument("--out", dest="out", required=True, help="figure directory")
    parser.add_argument(
        "--panel",
        action="append",
        default=[],
        metavar="FAMILY=PANEL",
        help="merge a policy family into a named panel (repeatable)",
    )
    parser.add_argument(
        "--ylim",
        action="append",
        default=[],
        metavar="PANEL=LO:HI",
        help="fix a panel's y-range (repeatable)",
    )
    args = parser.parse_args(argv)

    try:
        grouping = _parse_pairs(args.panel, "--panel")
        ylims = {}
        for panel, spec in _parse_pairs(args.ylim, "--ylim").items():
            lo, sep, hi = spec.partition(":")
            if not sep:
                raise ValueError(f"bad --ylim {panel}={spec!r}, expected LO:HI")
            ylims[panel] = (float(lo), float(hi))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    spec = FigureSpec(csv_path=args.inp, out_dir=args.out,
                      grouping=grouping, ylims=ylims)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            written = render_figures(spec)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for notice in caught:
        print(f"warning: {notice.message}", file=sys.stderr)
    for path in written:
        print(f"wrote {path}")
    return 0 if written else 1


if __name__ == "__main__":
    sys.exit(main())
