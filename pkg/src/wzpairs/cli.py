"""Command-line front end: ``wzpairs <command> ...``.

Exit codes: 0 success, 1 verification failed, 2 parse or usage error,
3 no solution found, 4 numeric insufficiency.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from fractions import Fraction
from pathlib import Path

from .ansatz import DEFAULT_GRID, Family, search
from .catalog import (TOOL_VERSION, CatalogEntry, SchemaError, builtin_catalog, export_table, get_entry, linked_entry,
                      load_pairs, pair_to_dict, print_pair, report_records, save_pairs)
from .dsl import ParseError, format_rational, parse_term, print_term
from .hyperterm import NotHypergeometric, PoleEncountered, shift_quotient
from .numbers import DivisionByZero, InsufficientPrecision, as_fraction
from .verify import Divergent, match_pi, sum_series, verify_pair

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_NO_SOLUTION, EXIT_NUMERIC = 0, 1, 2, 3, 4
NUMERIC_STATUSES = {"InsufficientPrecision", "Divergent"}


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def _rational_list(text: str) -> list[Fraction]:
    return [_rational(t) for t in text.split(",") if t.strip()]


def parse_grid(text: str):
    """``default``, one list for every slot (``-1,0,1/2``) or ``j1=-1,0;j2=1`` per slot."""
    text = text.strip()
    if text in ("", "default"):
        return DEFAULT_GRID
    if "=" not in text:
        return _rational_list(text)
    grid = {}
    for part in text.split(";"):
        if not part.strip():
            continue
        slot, _, values = part.partition("=")
        slot = slot.strip()
        if not slot.startswith("j") or not slot[1:].isdigit():
            raise argparse.ArgumentTypeError(f"bad grid slot {slot!r}")
        grid[slot] = _rational_list(values)
    return grid


def _target(text: str, s) -> CatalogEntry:
    """A catalog id, or ``z=..,a=..,b=..,c2=..`` inline."""
    if "=" not in text:
        return get_entry(text)
    fields = dict(part.split("=", 1) for part in text.split(","))
    try:
        z, a, b = Fraction(fields["z"]), int(fields["a"]), int(fields["b"])
        c2 = Fraction(fields.get("c2", "1"))
    except (KeyError, ValueError) as exc:
        raise UsageError(f"bad target {text!r}: {exc}") from None
    return CatalogEntry("target", as_fraction(s), z, a, b, c2, f"z={format_rational(z)} * 1")


def _load_subject(ref: str):
    """(pair, entry) for a catalog id or a pair file; entry is None for files."""
    if Path(ref).is_file():
        pairs = load_pairs(ref)
        if len(pairs) != 1:
            raise UsageError(f"{ref} holds {len(pairs)} pairs; expected exactly one")
        return pairs[0], None
    entry = get_entry(ref)
    return entry.series_pair(), entry


def _verify_subject(ref: str, err):
    """Table rows are verified through the generalized formula they specialize."""
    pair, entry = _load_subject(ref)
    if entry is not None and not entry.has_pair:
        linked = linked_entry(entry)
        if linked is not None:
            err.write(f"{entry.id}: verifying the WZ pair of {linked.id} (its k = 0 case)\n")
            return linked.pair(), linked
    return pair, entry


def _emit(obj, as_json: bool, out):
    if as_json:
        json.dump(obj, out, indent=2, sort_keys=True)
        out.write("\n")
    else:
        out.write(obj if obj.endswith("\n") else obj + "\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="wzpairs", description="WZ-pair discovery and verification for 1/pi series")
    p.add_argument("--version", action="version", version=TOOL_VERSION)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("parse", help="print the canonical form of a term")
    c.add_argument("term")

    c = sub.add_parser("quotient", help="print a factored shift quotient")
    c.add_argument("term")
    c.add_argument("--var", choices=("n", "k"), default="n")

    c = sub.add_parser("discover", help="search a j-grid for WZ pairs")
    c.add_argument("--family", required=True, choices=("bin1", "bin2", "bin3"))
    c.add_argument("--target", required=True, help="catalog id or z=..,a=..,b=..,c2=..")
    c.add_argument("--grid", type=parse_grid, default=DEFAULT_GRID)
    c.add_argument("--s", type=_rational, help="series parameter s (default: the target's)")
    c.add_argument("--t", type=_rational, default=None, help="t of the k-raised part (default 1/2)")
    c.add_argument("--d-variant", choices=("pair", "half", "quartic"), default="pair")
    c.add_argument("--degree", type=int, default=1)
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--precision", type=int, default=30)
    c.add_argument("--out", help="write found pairs here (default: stdout)")

    c = sub.add_parser("verify", help="run every check on a pair")
    c.add_argument("subject", help="catalog id or pair JSON file")
    c.add_argument("--entry", help="catalog id supplying the right-hand side for a pair file")
    c.add_argument("--precision", type=int, default=40)
    c.add_argument("--ks", type=lambda s: [int(x) for x in s.split(",")], default=[0, 1, 2, 3])
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--json", action="store_true")

    c = sub.add_parser("sum", help="sum the n-series at fixed k")
    c.add_argument("subject", help="catalog id or pair JSON file")
    c.add_argument("--k", type=_rational, default=Fraction(0))
    c.add_argument("--precision", type=int, default=40)
    c.add_argument("--json", action="store_true")

    c = sub.add_parser("catalog", help="list or export the built-in catalog")
    g = c.add_mutually_exclusive_group()
    g.add_argument("--list", action="store_true")
    g.add_argument("--export", metavar="PATH", help="table text, or wzpair-1 JSON when PATH ends in .json")
    c.add_argument("--json", action="store_true")
    return p


def _cmd_parse(a, out, err) -> int:
    out.write(print_term(parse_term(a.term)) + "\n")
    return EXIT_OK


def _cmd_quotient(a, out, err) -> int:
    out.write(str(shift_quotient(parse_term(a.term), a.var)) + "\n")
    return EXIT_OK


def _cmd_discover(a, out, err) -> int:
    if a.degree < 0 or a.jobs < 1:
        raise UsageError("--degree must be >= 0 and --jobs >= 1")
    probe = get_entry(a.target) if "=" not in a.target else None
    s = a.s if a.s is not None else (probe.s if probe else None)
    if s is None:
        raise UsageError("--s is required with an inline target")
    target = probe or _target(a.target, s)
    t = a.t if a.t is not None else Fraction(1, 2)
    family = Family(a.family, s, t, a.d_variant)
    results = search(family, target, a.grid, a.degree, a.jobs, a.precision)
    counts = Counter(c.status for c in results)
    err.write(f"{len(results)} candidates: " + ", ".join(f"{k}={v}" for k, v in sorted(counts.items())) + "\n")
    pairs = [c.pair for c in results if c.status == "found"]
    if a.out:
        save_pairs(pairs, a.out)
    else:
        _emit({"version": "wzpair-1", "pairs": [pair_to_dict(p) for p in pairs]}, True, out)
    return EXIT_OK if pairs else EXIT_NO_SOLUTION


def _exit_for(records) -> int:
    bad = [r for r in records if not r.ok()]
    if not bad:
        return EXIT_OK
    if all(r.status in NUMERIC_STATUSES for r in bad):
        return EXIT_NUMERIC
    return EXIT_FAILED


def _cmd_verify(a, out, err) -> int:
    pair, entry = _verify_subject(a.subject, err)
    if a.entry:
        entry = get_entry(a.entry)
    records = verify_pair(pair, entry, a.precision, a.ks, seed=a.seed)
    if a.json:
        recs = report_records(pair.id or a.subject, records)
        _emit({"version": TOOL_VERSION, "records": [r.to_dict() for r in recs]}, True, out)
    else:
        out.write(print_pair(pair) + "\n\n")
        width = max(len(r.name) for r in records)
        for r in records:
            extra = r.witness or ""
            if r.name.startswith("match_pi") and r.ok():
                extra = f"(pi*V/rho)^2 = {r.bounds['c_squared']}  |delta| ~ {abs(r.bounds['delta']):.1e}"
            elif r.name == "limit_constant" and r.ok() and r.bounds:
                extra = f"c^2 = {r.bounds['c_squared']}"
            out.write(f"{r.name.ljust(width)}  {r.status:<14} {extra}".rstrip() + "\n")
    return _exit_for(records)


def _cmd_sum(a, out, err) -> int:
    pair, entry = _load_subject(a.subject)
    res = sum_series(pair, a.k, a.precision)
    match = None
    if entry is not None and a.k.denominator == 1 and a.k >= 0:
        match = match_pi(res, entry, int(a.k))
    if a.json:
        doc = {"k": format_rational(res.k), "value": res.value.to_decimal(a.precision),
               "tail_bound": float(res.tail_bound), "terms_used": res.terms_used, "accelerated": res.accelerated,
               "precision": res.precision, "note": res.note}
        if match is not None:
            doc["match"] = {"status": match.status, "c_squared": format_rational(match.c_squared),
                            "delta": float(match.delta.center())}
        _emit(doc, True, out)
    else:
        out.write(f"V(k={format_rational(res.k)}) = {res}\n")
        if match is not None:
            out.write(str(match) + "\n")
    return EXIT_OK if match is None or match.matched else EXIT_FAILED


def _cmd_catalog(a, out, err) -> int:
    entries = builtin_catalog()
    if a.export:
        if a.export.endswith(".json"):
            save_pairs([e.pair() for e in entries if e.has_pair], a.export)
        else:
            Path(a.export).write_text(export_table(entries))
        err.write(f"wrote {a.export}\n")
        return EXIT_OK
    if a.json:
        _emit([{"id": e.id, "s": format_rational(e.s), "z": format_rational(e.z), "a": e.a, "b": e.b,
                "c_squared": format_rational(e.c_squared), "B": e.B_dsl, "notes": e.notes} for e in entries],
              True, out)
    else:
        out.write(export_table(entries))
    return EXIT_OK


_COMMANDS = {"parse": _cmd_parse, "quotient": _cmd_quotient, "discover": _cmd_discover, "verify": _cmd_verify,
             "sum": _cmd_sum, "catalog": _cmd_catalog}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return _COMMANDS[args.command](args, out, err)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except (UsageError, ParseError, SchemaError, KeyError, argparse.ArgumentTypeError) as exc:
        err.write(f"error: {exc.args[0] if isinstance(exc, KeyError) else exc}\n")
        return EXIT_USAGE
    except (NotHypergeometric, PoleEncountered, DivisionByZero) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_FAILED
    except (InsufficientPrecision, Divergent) as exc:
        err.write(f"numeric: {exc}\n")
        return EXIT_NUMERIC


def main() -> None:
    sys.exit(run())
