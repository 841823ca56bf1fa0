"""Built-in series fixtures and JSON persistence for WZ pairs and reports."""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

from .ansatz import Family
from .dsl import format_rational, parse_rational_function, parse_term, print_rational_function, print_term
from .numbers import InsufficientPrecision, as_fraction
from .polyalg import Poly2
from .verify import WZPair, match_pi, sum_series

SCHEMA_VERSION = "wzpair-1"
TOOL_VERSION = "0.1.0"
F = Fraction


class SchemaError(ValueError):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    s: Fraction
    z: Fraction
    a: int
    b: int
    c_squared: Fraction
    B_dsl: str
    c_sign: int = 1
    rhs_geom: Fraction = F(1)
    rhs_t: Fraction | None = None
    R: tuple[Poly2, Poly2] | None = None
    S: tuple[Poly2, Poly2] | None = None
    y: Fraction | None = None
    notes: str = ""
    c_squared_candidates: tuple[Fraction, ...] = ()
    # (shape, s, t, {slot: value}) reproducing B inside a search family
    origin: tuple | None = field(default=None, compare=False)

    @property
    def term(self):
        return parse_term(self.B_dsl)

    @property
    def has_pair(self) -> bool:
        return self.R is not None and self.S is not None and self.y is not None

    def pair(self) -> WZPair:
        if not self.has_pair:
            raise ValueError(f"{self.id} carries no WZ pair")
        return WZPair(self.term, self.y, self.R, self.S, provenance=f"catalog:{self.id}", id=self.id)

    def series_pair(self) -> WZPair:
        """The entry as a summable object: the full pair, or the plain series with S = 0."""
        if self.has_pair:
            return self.pair()
        R = (Poly2({(0, 0): self.a, (1, 0): self.b}), Poly2.one())
        return WZPair(self.term, 1, R, (Poly2.zero(), Poly2.one()), provenance=f"catalog:{self.id}", id=self.id)

    def family(self) -> tuple[Family, dict] | None:
        if self.origin is None:
            return None
        shape, s, t, j = self.origin
        return Family(shape, as_fraction(s), as_fraction(t)), {k: as_fraction(v) for k, v in j.items()}

    def c_text(self) -> str:
        return ("-" if self.c_sign < 0 else "") + f"sqrt({format_rational(self.c_squared)})"


def resolve_c_squared(entry: CatalogEntry, k: int = 0, precision: int = 40) -> dict[Fraction, str]:
    """Status of every candidate c^2 against the high-precision sum."""
    s = sum_series(entry.series_pair(), k, precision)
    out = {}
    for c2 in entry.c_squared_candidates or (entry.c_squared,):
        try:
            out[c2] = match_pi(s, entry, k, c_squared=c2).status
        except InsufficientPrecision:
            out[c2] = "InsufficientPrecision"
    return out


def _ramanujan_term(z: str, s: Fraction) -> str:
    s = as_fraction(s)
    parts = {F(1, 2): 1}
    for x in (s, 1 - s):
        parts[x] = parts.get(x, 0) + 1
    num = "*".join(f"poch({format_rational(x)};n)" + (f"^{e}" if e > 1 else "") for x, e in sorted(parts.items()))
    return f"z={z} * {num} / poch(1;n)^3"


def _d(t: str) -> str:
    u = 1 - F(t)
    return f"poch({t};k)*poch({format_rational(u)};k)/poch(1;k)^2"


def _rf(text: str) -> tuple[Poly2, Poly2]:
    return parse_rational_function(text)


_TABLE_I = [
    (F(1, 2), "-1", 1, 4, F(4), "c = 2"),
    (F(1, 2), "-1/8", 1, 6, F(8), "c = 2 sqrt(2)"),
    (F(1, 4), "-1/4", 3, 20, F(64), "c = 8"),
    (F(1, 4), "-1/48", 3, 28, F(256, 3), "c = 16/sqrt(3)"),
    (F(1, 2), "1/4", 1, 6, F(16), "c = 4"),
    (F(1, 2), "1/64", 5, 42, F(256), "c = 16"),
    (F(1, 4), "1/9", 1, 8, F(12),
     "table prints c = 2/sqrt(3) (c^2 = 4/3); the companion generalized formula and the sum give c = 2 sqrt(3)"),
    (F(1, 6), "-27/512", 15, 154, F(2048), "c = 32 sqrt(2)"),
]

_TABLE_II = [
    (F(1, 3), "1/2", 1, 6, F(27), "c = 3 sqrt(3)"),
    (F(1, 3), "-9/16", 1, 5, F(16, 3), "c = 4/sqrt(3)"),
    (F(1, 3), "-1/16", 7, 51, F(432), "c = 12 sqrt(3)"),
]

_N_BIN_A = "poch(1/2-k;n)*poch(1/2+k;n)*poch(1/2+3k;n) / (poch(1;n)*poch(1+k;n)*poch(1+2k;n))"
_N_QUARTER = "poch(1/4+3k/2;n)*poch(3/4+3k/2;n)"
_N_WIDE_DEN = "(poch(1/2+k/2;n)*poch(1+k/2;n)*poch(1+k;n)*poch(1;n))"

# id, z, s, a, b, c^2, geom, t, n-part, y, R, S, origin, notes, candidates
_GENERALIZED = [
    ("morefor1", "-1", F(1, 2), 1, 4, F(4), F(1, 4), "1/4",
     "poch(1/2-k;n)^2*poch(1/2;n) / (poch(1+k;n)^2*poch(1;n))", F(4),
     "4n+1", "(8*n^3-24*n*k^2-4*n^2-16*n*k-2*n)/(4*n^2-8*n*k+4*k^2-4*n+4*k+1)",
     ("bin1", "1/2", "1/4", {"j1": -1, "j2": -1, "j3": 0, "j4": 1, "j5": 1}), "", ()),
    ("morefor2", "1/4", F(1, 2), 1, 6, F(16), F(16, 27), "1/6", _N_BIN_A, F(27, 16),
     "6n+6k+1", "(20*n^3+64*n^2*k+44*n*k^2+20*n^2+24*n*k+n)/(2*n^2+2*n*k-4*k^2+n-4*k-1)",
     ("bin1", "1/2", "1/6", {"j1": -1, "j2": 1, "j3": 3, "j4": 1, "j5": 2}), "", ()),
    ("morefor3", "-1/8", F(1, 2), 1, 6, F(8), F(32, 27), "1/6", _N_BIN_A, F(27, 32),
     "6n+6k+1", "(12*n^3+32*n^2*k+20*n*k^2+12*n^2+8*n*k-n)/(2*n^2+2*n*k-4*k^2+n-4*k-1)",
     ("bin1", "1/2", "1/6", {"j1": -1, "j2": 1, "j3": 3, "j4": 1, "j5": 2}), "", ()),
    ("morefor4", "-1/4", F(1, 4), 3, 20, F(64), F(16, 27), "1/6",
     f"poch(1/2+k;n)*{_N_QUARTER} / (poch(1+k;n)^2*poch(1;n))", F(27, 16),
     "20n+18k+3", "(-32*n^3-128*n^2*k-88*n*k^2-48*n^2-48*n*k-2*n)/(4*k^2+4*k+1)",
     ("bin1", "1/4", "1/6", {"j1": 1, "j2": "3/2", "j4": 1, "j5": 1}), "", ()),
    ("morefor5", "1/9", F(1, 4), 1, 8, F(12), F(1), "1/6",
     f"poch(1/2;n)*{_N_QUARTER} / (poch(1+k;n)^2*poch(1;n))", F(1),
     "8n+6k+1", "(-16/3*n^2+8/3*n)/(2*k+1)",
     ("bin1", "1/4", "1/6", {"j1": 0, "j2": "3/2", "j4": 1, "j5": 1}),
     "formula prints c = 2 sqrt(3); the matching table row prints 2/sqrt(3); the sum selects c^2 = 12",
     (F(4, 3), F(12))),
    ("morefor6", "1/2", F(1, 3), 1, 6, F(27), F(1), "1/3",
     "poch(1/2+k;n)*poch(1/3;n)*poch(2/3;n) / (poch(1+k;n)*poch(1+2k;n)*poch(1;n))", F(1),
     "6n+6k+1", "(12*n^2+12*n*k+8*n)/(n+2*k+1)",
     ("bin1", "1/3", "1/3", {"j1": 1, "j2": 0, "j4": 1, "j5": 2}), "", ()),
    ("morefor7", "1/64", F(1, 2), 5, 42, F(256), F(1), "1/4",
     f"poch(1/2-k;n)*poch(1/2;n)*poch(1/2+k;n)*poch(1/2+2k;n) / {_N_WIDE_DEN}", F(1),
     "((42n+5)(2n+1)+k(84n+24k+26))/(2n+k+1)", "(96*n^2-16*n)/(2*n-2*k-1)",
     ("bin2", "1/2", "1/4", {"j1": -1, "j2": 0, "j3": 1, "j4": "1/2", "j5": 1, "j6": 2, "j7": "1/2"}), "", ()),
    ("morefor8", "-1/16", F(1, 3), 7, 51, F(432), F(1), "1/4",
     f"poch(1/2;n)*poch(1/2+2k;n)*poch(1/3+k;n)*poch(2/3+k;n) / {_N_WIDE_DEN}", F(1),
     "((51n+7)(2n+1)+k(114n+36k+37))/(2n+k+1)", "-9n(6n^2+30nk+13n-7k-3)/((3k+1)(3k+2))",
     ("bin2", "1/3", "1/4", {"j1": 0, "j2": 1, "j4": "1/2", "j5": 1, "j6": 2, "j7": "1/2"}), "", ()),
    ("morefor9", "-9/16", F(1, 3), 1, 5, F(16, 3), F(4), "1/6",
     "poch(1/2-k;n)*poch(1/2+3k;n)*poch(1/3+k;n)*poch(2/3+k;n) / (poch(1/2;n)*poch(1;n)*poch(1+k;n)*poch(1+3k;n))",
     F(1, 4), "((5n+1)(2n+1)+k(16n+6k+7))/(2n+1)",
     "(8*n^4+56*n^3*k+120*n^2*k^2+72*n*k^3+24*n^3+96*n^2*k+72*n*k^2+158/9*n^2+50/3*n*k-2/9*n)"
     "/(2*n^3+10*n^2*k+6*n*k^2-18*k^3+5*n^2+6*n*k-27*k^2+n-13*k-2)",
     ("bin2", "1/3", "1/6", {"j1": -1, "j2": 1, "j4": 1, "j5": 3, "j6": 3, "j7": 0}), "", ()),
    ("morefor10", "-1/48", F(1, 4), 3, 28, F(256, 3), F(1), "1/6",
     "poch(1/2-k;n)*poch(1/2+3k;n)*poch(1/4;n)*poch(3/4;n) / (poch(1/2;n)*poch(1;n)*poch(1+k;n)^2)", F(1),
     "((28n+3)(2n+1)+k(40n+18))/(2n+1)", "(512/9*n^2-128/9*n)/(2*n-2*k-1)",
     ("bin2", "1/4", "1/6", {"j1": -1, "j2": 0, "j4": 1, "j5": 1, "j6": 3, "j7": 0}),
     "formula prints c = 16 sqrt(3) (c^2 = 768); the table row prints 16/sqrt(3); the sum selects c^2 = 256/3",
     (F(768), F(256, 3))),
    ("morefor11", "-27/512", F(1, 6), 15, 154, F(2048), F(32, 27), "1/6",
     f"poch(1/2-k;n)*poch(1/2+k;n)*poch(1/6+k;n)*poch(5/6+k;n) / {_N_WIDE_DEN}", F(27, 32),
     "((154n+15)(2n+1)+k(352n+108k+108))/(2n+k+1)", "(416*n^2+160*n*k-16*n)/(2*n-2*k-1)",
     ("bin2", "1/6", "1/6", {"j1": -1, "j2": 1, "j4": "1/2", "j5": 1, "j6": 1, "j7": "1/2"}), "", ()),
    ("solution1", "-1/16", F(1, 3), 7, 51, F(432), F(1), "1/3",
     f"poch(1/2-k;n)*poch(1/2+k;n)*poch(1/3;n)*poch(2/3;n) / {_N_WIDE_DEN}", F(1),
     "((51n+7)(2n+1)+k(90n+24k+28))/(2n+k+1)", "16n(6n-3k-2)/(2n-2k-1)",
     ("bin2", "1/3", "1/3", {"j1": -1, "j2": 0, "j4": "1/2", "j5": 1, "j6": 1, "j7": "1/2"}),
     "worked example; the k -> oo limit is not a central binomial series", ()),
    ("solution2", "-1/16", F(1, 3), 7, 51, F(432), F(1), "1/4",
     f"poch(1/2;n)*poch(1/2+2k;n)*poch(1/3+k;n)*poch(2/3+k;n) / {_N_WIDE_DEN}", F(1),
     "((51n+7)(2n+1)+k(114n+36k+37))/(2n+k+1)", "-9n(6n^2+30nk+13n-7k-3)/((3k+1)(3k+2))",
     ("bin2", "1/3", "1/4", {"j1": 0, "j2": 1, "j4": "1/2", "j5": 1, "j6": 2, "j7": "1/2"}),
     "second worked example; constant also reachable as k -> oo", ()),
]


def _table_entries(rows, prefix) -> list[CatalogEntry]:
    out = []
    for s, z, a, b, c2, note in rows:
        cands = (F(4, 3), F(12)) if z == "1/9" else ()
        out.append(CatalogEntry(f"{prefix}-z{z}", s, F(z), a, b, c2, _ramanujan_term(z, s), notes=note,
                                c_squared_candidates=cands))
    return out


def builtin_catalog() -> list[CatalogEntry]:
    entries = _table_entries(_TABLE_I, "tableI") + _table_entries(_TABLE_II, "tableII")
    for (eid, z, s, a, b, c2, geom, t, npart, y, R, S, origin, notes, cands) in _GENERALIZED:
        # npart is "num / den"; splice the k-raised part into the numerator product
        num, den = npart.split(" / ")
        dsl = f"z={z} * {num}*{_d(t)} / {den}"
        entries.append(CatalogEntry(eid, s, F(z), a, b, c2, print_term(parse_term(dsl)), rhs_geom=geom, rhs_t=F(t),
                                    R=_rf(R), S=_rf(S), y=y, notes=notes, c_squared_candidates=cands,
                                    origin=origin))
    return entries


def linked_entry(entry: CatalogEntry, catalog=None) -> CatalogEntry | None:
    """The generalized formula whose k = 0 case is this table row."""
    if entry.has_pair:
        return entry
    for e in catalog or builtin_catalog():
        if e.has_pair and (e.s, e.z, e.a, e.b) == (entry.s, entry.z, entry.a, entry.b):
            return e
    return None


def get_entry(entry_id: str, catalog=None) -> CatalogEntry:
    for e in catalog or builtin_catalog():
        if e.id == entry_id:
            return e
    raise KeyError(f"no catalog entry {entry_id!r}")


def export_table(entries=None) -> str:
    rows = [("id", "s", "z", "a", "b", "c^2", "rhs", "pair")]
    for e in entries or builtin_catalog():
        rhs = "1" if e.rhs_t is None else f"({format_rational(e.rhs_geom)})^k (1)_k^2/(({e.rhs_t})_k ({1 - e.rhs_t})_k)"
        rows.append((e.id, format_rational(e.s), format_rational(e.z), str(e.a), str(e.b),
                     format_rational(e.c_squared), rhs, "yes" if e.has_pair else "-"))
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# JSON


def pair_to_dict(p: WZPair) -> dict:
    return {
        "version": SCHEMA_VERSION,
        "id": p.id,
        "z": format_rational(p.z),
        "y": format_rational(p.y),
        "B": print_term(p.B),
        "R_num": str(p.R[0]),
        "R_den": str(p.R[1]),
        "S_num": str(p.S[0]),
        "S_den": str(p.S[1]),
        "provenance": p.provenance,
    }


def pair_from_dict(d: dict) -> WZPair:
    if d.get("version") != SCHEMA_VERSION:
        raise SchemaError(f"unsupported pair schema {d.get('version')!r}")
    try:
        B = parse_term(d["B"])
        if B.z != as_fraction(d["z"]):
            raise SchemaError(f"z={d['z']} disagrees with the term's z={B.z}")
        R = (_poly(d["R_num"]), _poly(d["R_den"]))
        S = (_poly(d["S_num"]), _poly(d["S_den"]))
        return WZPair(B, as_fraction(d["y"]), R, S, provenance=d.get("provenance", ""), id=d.get("id", ""))
    except KeyError as exc:
        raise SchemaError(f"missing field {exc}") from None
    except (ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(str(exc)) from None


def _poly(text: str) -> Poly2:
    num, den = parse_rational_function(text)
    if den != Poly2.one():
        raise SchemaError(f"{text!r} is not a polynomial")
    return num


def save_pairs(pairs, path) -> None:
    """Atomic write of {"version": ..., "pairs": [...]}."""
    doc = {"version": SCHEMA_VERSION, "pairs": [pair_to_dict(p) for p in pairs]}
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=path.name, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    os.replace(tmp, path)


def load_pairs(path) -> list[WZPair]:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or doc.get("version") != SCHEMA_VERSION or not isinstance(doc.get("pairs"), list):
        raise SchemaError(f"expected a {SCHEMA_VERSION} document")
    # parse everything first so a bad record never yields a partial result
    return [pair_from_dict(d) for d in doc["pairs"]]


@dataclass(frozen=True)
class ReportRecord:
    entry_id: str
    check: str
    status: str
    payload: dict
    tool_version: str = TOOL_VERSION
    timestamp: str = ""

    def to_dict(self) -> dict:
        return {"entry_id": self.entry_id, "check": self.check, "status": self.status, "payload": self.payload,
                "tool_version": self.tool_version, "timestamp": self.timestamp}

    @classmethod
    def from_dict(cls, d: dict) -> ReportRecord:
        return cls(d["entry_id"], d["check"], d["status"], d["payload"], d["tool_version"], d["timestamp"])


def report_records(entry_id: str, checks, timestamp: str | None = None) -> list[ReportRecord]:
    ts = timestamp if timestamp is not None else datetime.now(timezone.utc).isoformat(timespec="seconds")
    out = []
    for c in checks:
        payload = dict(c.bounds)
        if c.witness is not None:
            payload["witness"] = c.witness
        out.append(ReportRecord(entry_id, c.name, c.status, payload, TOOL_VERSION, ts))
    return out


def print_pair(p: WZPair) -> str:
    return (f"B = {print_term(p.B)}\ny = {format_rational(p.y)}\nR = {print_rational_function(*p.R)}\n"
            f"S = {print_rational_function(*p.S)}")
