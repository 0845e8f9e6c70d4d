import csv
import io
import random
from fractions import Fraction as F

import numpy as np
import pytest

from egnash.equilibria import PureProfile, Verdict, lambda_table, verdict_codes
from egnash.game import EgnInstance
from egnash.graph import enumerate_independent_dominating_sets, from_edge_list
from egnash.sweep import (
    BreakpointSet,
    breakpoints,
    canonical_payoff,
    render_sweep,
    sweep_sne_counts,
)

from randgen import connected_graph
from test_equilibria import definition_verdict

REFERENCE_CH = [F(0), F(1, 4), F(1, 3), F(1, 2), F(2, 3), F(1), F(3, 2), F(2), F(3), F(4)]


def codes_at(g, kind, r):
    inst = EgnInstance.uniform(g, canonical_payoff(r, kind))
    return verdict_codes(lambda_table(inst, np.arange(1 << g.n)))


class TestBreakpoints:
    def test_k2(self, k2):
        assert list(breakpoints(k2, "degree-ratios")) == [0, 1]

    def test_p3_degree_ratios(self, p3):
        # all ordered pairs of degrees (1, 2, 1)
        expected = sorted({F(0)} | {F(a, b) for a in (1, 2, 1) for b in (1, 2, 1)})
        assert list(breakpoints(p3, "degree-ratios")) == expected == [0, F(1, 2), 1, 2]

    def test_p3_exact(self, p3):
        assert list(breakpoints(p3)) == [0, 1]

    def test_er8_exact_thresholds_reproduce_published_set(self, er8):
        assert list(breakpoints(er8.graph, "exact-thresholds")) == REFERENCE_CH

    def test_er8_degree_ratios_differ(self, er8):
        ratios = list(breakpoints(er8.graph, "degree-ratios"))
        assert ratios != REFERENCE_CH
        assert F(5, 4) in ratios

    def test_bad_mode(self, p3):
        with pytest.raises(ValueError):
            breakpoints(p3, "grid")

    def test_breakpoint_set_invariants(self):
        with pytest.raises(ValueError):
            BreakpointSet((F(1),))
        with pytest.raises(ValueError):
            BreakpointSet((F(0), F(2), F(1)))
        assert BreakpointSet.of([2, F(1, 2), 2]).values == (0, F(1, 2), 2)


class TestSweep:
    def test_p3_anti_interval(self, p3):
        rep = sweep_sne_counts(p3, "anti-coordination", breakpoints(p3, "degree-ratios"))
        rec = rep.record_at(F(3, 2))
        assert (rec.lo, rec.hi, rec.sample) == (1, 2, F(3, 2))
        inst = EgnInstance.uniform(p3, canonical_payoff(1.5, "anti-coordination"))
        sne = [i for i in range(8) if definition_verdict(inst, PureProfile(3, i)) is Verdict.SNE]
        assert sne == [0b010, 0b101]
        assert rec.sne_count == len(sne) == 2

    def test_p3_coordination_large_ratio(self, p3):
        rep = sweep_sne_counts(p3, "coordination", breakpoints(p3, "degree-ratios"))
        assert rep.unbounded.lo == 2 and rep.unbounded.hi is None
        inst = EgnInstance.uniform(p3, canonical_payoff(3, "coordination"))
        sne = [i for i in range(8) if definition_verdict(inst, PureProfile(3, i)) is Verdict.SNE]
        assert sne == [0, 7]
        assert rep.unbounded.sne_count == 2

    def test_unbounded_interval_counts_ids(self):
        rng = random.Random(20)
        for _ in range(30):
            g = connected_graph(rng, rng.randint(2, 10))
            rep = sweep_sne_counts(g, "anti-coordination", breakpoints(g))
            assert rep.unbounded.lo == max(g.degrees) - 1
            assert rep.unbounded.sne_count == len(enumerate_independent_dominating_sets(g))

    def test_degree_ratios_can_miss_a_change(self, er8):
        g = er8.graph
        bp = breakpoints(g, "degree-ratios")
        assert bp.values[1] == F(3, 5)
        inside = [F(1, 8), F(5, 12)]  # both in the open interval (0, 3/5)
        counts = [int(np.sum(codes_at(g, "anti-coordination", r) == 0)) for r in inside]
        assert counts == [9, 8]

    def test_piecewise_constant(self):
        rng = random.Random(21)
        for _ in range(25):
            g = connected_graph(rng, rng.randint(2, 10))
            kind = rng.choice(["coordination", "anti-coordination"])
            vals = list(breakpoints(g)) + [None]
            for lo, hi in zip(vals, vals[1:]):
                top = hi if hi is not None else lo + 10
                samples = [lo + (top - lo) * F(k, 4) for k in (1, 2, 3)]
                first = codes_at(g, kind, samples[0])
                for r in samples[1:]:
                    assert np.array_equal(codes_at(g, kind, r), first)

    def test_fine_grid_finds_no_hidden_change(self):
        rng = random.Random(22)
        for _ in range(10):
            g = connected_graph(rng, rng.randint(2, 9))
            bp = list(breakpoints(g))
            kind = rng.choice(["coordination", "anti-coordination"])
            rep = sweep_sne_counts(g, kind, BreakpointSet(tuple(bp)))
            for step in range(1, int(max(g.degrees)) * 100 + 1):
                r = F(step, 100)
                rec = rep.record_at(r)
                if rec.kind == "interval":
                    assert int(np.sum(codes_at(g, kind, r) == 0)) == rec.sne_count

    def test_sne_not_above_ne(self, er8):
        for kind in ("coordination", "anti-coordination"):
            for rec in sweep_sne_counts(er8.graph, kind).records:
                assert 0 <= rec.sne_count <= rec.ne_count

    def test_guard(self):
        with pytest.raises(ValueError, match="limited"):
            sweep_sne_counts(from_edge_list(12, [(1, 2)]), "coordination", guard=10)

    def test_bad_class(self, p3):
        with pytest.raises(ValueError):
            sweep_sne_counts(p3, "chicken")


class TestRender:
    def test_p3_rows(self, p3):
        rep = sweep_sne_counts(p3, "anti-coordination", BreakpointSet.of([F(1, 2), 1, 2]))
        rows = list(csv.DictReader(io.StringIO(render_sweep(rep))))
        assert len(rows) == 7
        assert [r["kind"] for r in rows].count("breakpoint") == 3
        assert [r["r_label"] for r in rows] == ["(0,1/2)", "1/2", "(1/2,1)", "1", "(1,2)", "2", "(2,inf)"]
        for r in rows:
            assert int(r["sne_count"]) >= 0 and int(r["ne_count"]) >= 0

    def test_single_unbounded_row(self, p3):
        rep = sweep_sne_counts(p3, "coordination", BreakpointSet.of([]))
        rows = list(csv.DictReader(io.StringIO(render_sweep(rep))))
        assert len(rows) == 1 and rows[0]["r_label"] == "(0,inf)" and float(rows[0]["r_sample"]) == 1.0

    def test_text(self, p3):
        text = render_sweep(sweep_sne_counts(p3, "coordination"), "text")
        assert text.splitlines()[0].split() == ["kind", "r_label", "r_sample", "sne_count", "ne_count"]
        with pytest.raises(ValueError):
            render_sweep(sweep_sne_counts(p3, "coordination"), "xml")
