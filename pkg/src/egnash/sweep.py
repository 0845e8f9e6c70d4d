"""Sweeps of the common payoff ratio R over (0, inf).

With a common payoff matrix the classification of every pure profile only
depends on R, and it can only change where R * N_C = N_D for some vertex,
i.e. at R = (d_v - k) / k. Between consecutive breakpoints the counts are
constant, so one sample per open interval plus every breakpoint itself
covers the whole axis.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .equilibria import EnumerationGuardError, lambda_table, verdict_codes
from .game import EgnInstance, PayoffMatrix
from .graph import ENUMERATION_GUARD, Graph

MODES = ("exact-thresholds", "degree-ratios")
GAME_CLASSES = ("coordination", "anti-coordination")


@dataclass(frozen=True)
class BreakpointSet:
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.values or self.values[0] != 0:
            raise ValueError("breakpoint set must start at 0")
        if any(a >= b for a, b in zip(self.values, self.values[1:])):
            raise ValueError("breakpoints must be strictly ascending")

    @classmethod
    def of(cls, values) -> "BreakpointSet":
        return cls(tuple(sorted({Fraction(0)} | {Fraction(v) for v in values})))

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class SweepRecord:
    kind: str  # "interval" or "breakpoint"
    lo: Fraction
    hi: Fraction | None  # None for the unbounded interval
    sample: Fraction
    sne_count: int
    ne_count: int

    @property
    def label(self) -> str:
        if self.kind == "breakpoint":
            return str(self.lo)
        return f"({self.lo},{'inf' if self.hi is None else self.hi})"


@dataclass(frozen=True)
class SweepReport:
    game_class: str
    breakpoints: BreakpointSet
    records: tuple[SweepRecord, ...]

    @property
    def unbounded(self) -> SweepRecord:
        return self.records[-1]

    def record_at(self, r) -> SweepRecord:
        """The record whose interval or breakpoint contains R = r > 0."""
        r = Fraction(r)
        for rec in self.records:
            if rec.kind == "breakpoint" and rec.lo == r:
                return rec
            if rec.kind == "interval" and rec.lo < r and (rec.hi is None or r < rec.hi):
                return rec
        raise ValueError(f"R = {r} is not covered by the sweep")


def breakpoints(g: Graph, mode: str = "exact-thresholds") -> BreakpointSet:
    degs = [int(d) for d in g.degrees]
    if mode == "degree-ratios":
        vals = {Fraction(a, b) for a in degs for b in degs if b > 0}
    elif mode == "exact-thresholds":
        vals = {Fraction(k, d - k) for d in set(degs) for k in range(1, d)}
    else:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    return BreakpointSet.of(vals)


def canonical_payoff(r, game_class: str) -> PayoffMatrix:
    """[[R, 0], [0, 1]] for coordination, [[-R, 0], [0, -1]] for anti-coordination."""
    r = float(r)
    if game_class == "coordination":
        return PayoffMatrix(r, 0.0, 0.0, 1.0)
    if game_class == "anti-coordination":
        return PayoffMatrix(-r, 0.0, 0.0, -1.0)
    raise ValueError(f"game class must be one of {GAME_CLASSES}, got {game_class!r}")


def _counts(g: Graph, game_class: str, r: Fraction, indices: np.ndarray) -> tuple[int, int]:
    inst = EgnInstance.uniform(g, canonical_payoff(r, game_class))
    codes = verdict_codes(lambda_table(inst, indices))
    return int(np.sum(codes == 0)), int(np.sum(codes <= 1))


def sweep_sne_counts(
    g: Graph,
    game_class: str,
    bp: BreakpointSet | None = None,
    guard: int = ENUMERATION_GUARD,
) -> SweepReport:
    """Count SNE and NE over every interval and breakpoint of ``bp``.

    Open intervals are sampled at their exact midpoint; the last, unbounded
    interval at (largest breakpoint + 1). R = 0 itself is never sampled.
    """
    if game_class not in GAME_CLASSES:
        raise ValueError(f"game class must be one of {GAME_CLASSES}, got {game_class!r}")
    if g.n > guard:
        raise EnumerationGuardError(
            f"graph has {g.n} vertices; sweeps enumerate all 2^n profiles and are "
            f"limited to {guard} vertices"
        )
    if bp is None:
        bp = breakpoints(g)
    indices = np.arange(1 << g.n, dtype=np.int64)
    vals = bp.values
    records = []
    for i, lo in enumerate(vals):
        if i > 0:
            records.append(SweepRecord("breakpoint", lo, lo, lo, *_counts(g, game_class, lo, indices)))
        if i + 1 < len(vals):
            hi = vals[i + 1]
            mid = (lo + hi) / 2
            records.append(SweepRecord("interval", lo, hi, mid, *_counts(g, game_class, mid, indices)))
    last = vals[-1]
    records.append(SweepRecord("interval", last, None, last + 1, *_counts(g, game_class, last + 1, indices)))
    return SweepReport(game_class, bp, tuple(records))


def render_sweep(report: SweepReport, fmt: str = "csv") -> str:
    header = ["kind", "r_label", "r_sample", "sne_count", "ne_count"]
    rows = [
        [rec.kind, rec.label, repr(float(rec.sample)), str(rec.sne_count), str(rec.ne_count)]
        for rec in report.records
    ]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()
    if fmt == "text":
        widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
        lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in [header] + rows]
        return "\n".join(lines) + "\n"
    raise ValueError(f"format must be 'csv' or 'text', got {fmt!r}")
