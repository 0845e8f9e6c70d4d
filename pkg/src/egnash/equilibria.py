"""Classification of pure steady states as strict Nash / Nash / neither.

At a pure profile the Jacobian of the replicator flow is diagonal, and its
entry for vertex v is

    lambda_v = (1 - 2 x_v) * (sigma_C * N_C - sigma_D * N_D)

with N_C / N_D the numbers of cooperating / defecting neighbours. The
profile is a strict NE iff every lambda_v < 0 and a NE iff every
lambda_v <= 0. For coordination and anti-coordination vertices this sign
test is the ratio threshold comparison between N_D and R * N_C; we keep
the product form so that sigma_D = 0 needs no special case.

Profiles are indexed by integers with bit ``v - 1`` holding x_v.
"""

from __future__ import annotations

import csv
import enum
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .game import EPS, EgnInstance, GameClass, classify_game, network_payoff, ratio
from .graph import ENUMERATION_GUARD, enumerate_independent_dominating_sets, set_to_mask

CHUNK = 1 << 16
LOCAL_FORCING_LIMIT = 20


class EnumerationGuardError(ValueError):
    pass


class Verdict(enum.Enum):
    SNE = "SNE"
    NE_ONLY = "NE-only"
    NOT_NE = "NotNE"

    @property
    def is_ne(self) -> bool:
        return self is not Verdict.NOT_NE


_VERDICT_CODES = (Verdict.SNE, Verdict.NE_ONLY, Verdict.NOT_NE)


class IdsEquivalence(enum.Enum):
    COOPERATOR_IDS = "cooperator-ids"
    DEFECTOR_IDS = "defector-ids"
    INAPPLICABLE = "inapplicable"


@dataclass(frozen=True)
class PureProfile:
    n: int
    index: int

    def __post_init__(self):
        if not 0 <= self.index < (1 << self.n):
            raise ValueError(f"profile index {self.index} out of range for {self.n} players")

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "PureProfile":
        index = 0
        for i, b in enumerate(bits):
            if b not in (0, 1):
                raise ValueError(f"profile entries must be 0 or 1, got {b!r}")
            index |= int(b) << i
        return cls(len(bits), index)

    @classmethod
    def from_bitstring(cls, s: str) -> "PureProfile":
        """Parse '1100...' with player 1 leftmost."""
        s = s.strip()
        if not s or set(s) - {"0", "1"}:
            raise ValueError(f"profile must be a string of 0/1 characters, got {s!r}")
        return cls.from_bits([int(c) for c in s])

    @classmethod
    def from_cooperators(cls, n: int, cooperators: Iterable[int]) -> "PureProfile":
        return cls(n, set_to_mask(cooperators))

    @classmethod
    def full_cooperation(cls, n: int) -> "PureProfile":
        return cls(n, (1 << n) - 1)

    @classmethod
    def full_defection(cls, n: int) -> "PureProfile":
        return cls(n, 0)

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple(self.index >> i & 1 for i in range(self.n))

    def __getitem__(self, v: int) -> int:
        """Strategy of vertex v (1-based)."""
        return self.index >> (v - 1) & 1

    @property
    def bitstring(self) -> str:
        return "".join(map(str, self.bits))

    @property
    def cooperators(self) -> frozenset:
        return frozenset(v for v in range(1, self.n + 1) if self[v])

    @property
    def defectors(self) -> frozenset:
        return frozenset(v for v in range(1, self.n + 1) if not self[v])

    def as_state(self) -> np.ndarray:
        return np.array(self.bits, dtype=float)

    def __str__(self):
        return self.bitstring


@dataclass(frozen=True)
class NeighborCounts:
    n_c: int
    n_d: int


@dataclass(frozen=True)
class VertexReport:
    vertex: int
    strategy: int
    lam: float
    condition: str
    inequality: str
    status: str  # "strict", "weak" or "violated"


@dataclass(frozen=True)
class ProfileClassification:
    profile: PureProfile
    verdict: Verdict
    vertices: tuple[VertexReport, ...]

    @property
    def witness(self) -> VertexReport | None:
        """First vertex that prevents a stronger verdict, if any."""
        want = {Verdict.NOT_NE: "violated", Verdict.NE_ONLY: "weak"}.get(self.verdict)
        for r in self.vertices:
            if r.status == want:
                return r
        return None

    def to_dict(self) -> dict:
        return {
            "profile": self.profile.bitstring,
            "index": self.profile.index,
            "verdict": self.verdict.value,
            "vertices": [
                {
                    "vertex": r.vertex,
                    "strategy": "C" if r.strategy else "D",
                    "lambda": r.lam,
                    "condition": r.condition,
                    "inequality": r.inequality,
                    "status": r.status,
                }
                for r in self.vertices
            ],
        }


@dataclass(frozen=True)
class JacobianMatrix:
    entries: np.ndarray
    k: np.ndarray

    @property
    def diagonal(self) -> np.ndarray:
        return np.diag(self.entries)


def _status(value: float) -> str:
    if value < -EPS:
        return "strict"
    if value <= EPS:
        return "weak"
    return "violated"


def _verdict(statuses: Iterable[str]) -> Verdict:
    statuses = set(statuses)
    if "violated" in statuses:
        return Verdict.NOT_NE
    if "weak" in statuses:
        return Verdict.NE_ONLY
    return Verdict.SNE


def _condition(game_class: GameClass, strategy: int, strict: bool) -> tuple[str, str]:
    rel = "<" if strict else "<="
    if game_class is GameClass.COORDINATION:
        if strategy:
            return "coordination-cooperate", f"N_D {rel} R*N_C"
        return "coordination-defect", f"N_C {rel} N_D/R"
    if game_class is GameClass.ANTI_COORDINATION:
        if strategy:
            return "anti-coordination-cooperate", f"N_C {rel} N_D/R"
        return "anti-coordination-defect", f"N_D {rel} R*N_C"
    return "lambda-sign", f"lambda {rel} 0"


def _report(inst: EgnInstance, v: int, strategy: int, lam: float) -> VertexReport:
    status = _status(lam)
    cond, ineq = _condition(classify_game(inst.payoff(v)), strategy, status == "strict")
    return VertexReport(v, strategy, float(lam), cond, ineq, status)


def neighbor_counts(inst: EgnInstance, v: int, p: PureProfile) -> NeighborCounts:
    n_c = sum(p[w] for w in inst.graph.neighbors(v))
    return NeighborCounts(n_c, inst.graph.degree(v) - n_c)


def lambda_v(inst: EgnInstance, v: int, p: PureProfile) -> float:
    """Diagonal Jacobian entry of vertex v at the pure profile p."""
    counts = neighbor_counts(inst, v, p)
    b = inst.payoff(v)
    return (1 - 2 * p[v]) * (b.sigma_c * counts.n_c - b.sigma_d * counts.n_d)


def classify_pure(inst: EgnInstance, p: PureProfile) -> ProfileClassification:
    _check_profile(inst, p)
    reports = tuple(_report(inst, v, p[v], lambda_v(inst, v, p)) for v in inst.graph.vertices)
    return ProfileClassification(p, _verdict(r.status for r in reports), reports)


def best_response_oracle(inst: EgnInstance, p: PureProfile) -> ProfileClassification:
    """Classify p straight from the (strict) Nash definition.

    A vertex's payoff is affine in its own frequency, so comparing the
    current pure strategy with the other one decides both best response
    and its uniqueness. The reported value is the payoff gained by
    switching.
    """
    _check_profile(inst, p)
    x = p.as_state()
    reports = []
    for v in inst.graph.vertices:
        stay = network_payoff(inst, v, x)
        y = x.copy()
        y[v - 1] = 1.0 - y[v - 1]
        switch = network_payoff(inst, v, y)
        gain = switch - stay
        reports.append(VertexReport(v, p[v], gain, "best-response", "switch gain < 0", _status(gain)))
    return ProfileClassification(p, _verdict(r.status for r in reports), tuple(reports))


def jacobian_at(inst: EgnInstance, x) -> JacobianMatrix:
    x = np.asarray(x, dtype=float)
    if x.shape != (inst.n,) or np.any(x < 0) or np.any(x > 1):
        raise ValueError(f"state must be a length-{inst.n} vector in [0, 1]")
    a = inst.graph.adjacency.astype(float)
    sc, sd = inst.sigma_c, inst.sigma_d
    k = sc * (a @ x) - sd * (a @ (1.0 - x))
    entries = (x * (1.0 - x) * (sc + sd))[:, None] * a
    np.fill_diagonal(entries, (1.0 - 2.0 * x) * k)
    return JacobianMatrix(entries, k)


def jacobian_verdict(inst: EgnInstance, p: PureProfile) -> Verdict:
    """Verdict from the signs of the Jacobian diagonal at p."""
    return _verdict(_status(d) for d in jacobian_at(inst, p.as_state()).diagonal)


def _check_profile(inst: EgnInstance, p: PureProfile) -> None:
    if p.n != inst.n:
        raise ValueError(f"profile has {p.n} players, instance has {inst.n}")


# -- necessary conditions used for pruning ---------------------------------


def prune_corollary2(inst: EgnInstance, p: PureProfile) -> bool:
    """False if some coordination vertex disagrees with every neighbour.

    Such a profile is never a NE. Isolated vertices are skipped: with no
    neighbours their lambda is 0 and they never break the NE property.
    """
    for v in inst.graph.vertices:
        if classify_game(inst.payoff(v)) is not GameClass.COORDINATION:
            continue
        nbrs = inst.graph.neighbors(v)
        if nbrs and all(p[w] != p[v] for w in nbrs):
            return False
    return True


def prune_corollary3(inst: EgnInstance, p: PureProfile) -> bool:
    """False if some anti-coordination vertex agrees with every neighbour."""
    for v in inst.graph.vertices:
        if classify_game(inst.payoff(v)) is not GameClass.ANTI_COORDINATION:
            continue
        nbrs = inst.graph.neighbors(v)
        if nbrs and all(p[w] == p[v] for w in nbrs):
            return False
    return True


def unique_sne_condition(inst: EgnInstance) -> bool | None:
    """Whether full cooperation and full defection are provably the only SNE.

    Applies to connected graphs (n >= 2) where every vertex shares one
    coordination payoff matrix; returns True iff R > d_v - 1 for all v.
    None means the criterion is inapplicable.
    """
    b = inst.common_payoff()
    if b is None or classify_game(b) is not GameClass.COORDINATION:
        return None
    if inst.n < 2 or not inst.graph.is_connected():
        return None
    r = ratio(b)
    return bool(all(r - (d - 1) > EPS for d in inst.graph.degrees))


def ids_equivalence(inst: EgnInstance) -> IdsEquivalence:
    """Which independent-dominating-set characterisation of the SNE holds.

    Requires every vertex to be anti-coordination and to have at least one
    neighbour (an isolated vertex has lambda = 0 in every profile, so no
    SNE exists even though it belongs to every dominating set). When both
    hypotheses hold (e.g. every degree is 1) the cooperator side is reported.
    """
    if any(c is not GameClass.ANTI_COORDINATION for c in inst.game_classes()):
        return IdsEquivalence.INAPPLICABLE
    degrees = inst.graph.degrees
    if np.any(degrees == 0):
        return IdsEquivalence.INAPPLICABLE
    rs = [ratio(b) for b in inst.payoffs]
    if all(r - (d - 1) > EPS for r, d in zip(rs, degrees)):
        return IdsEquivalence.COOPERATOR_IDS
    if all(1.0 / r - (d - 1) > EPS for r, d in zip(rs, degrees)):
        return IdsEquivalence.DEFECTOR_IDS
    return IdsEquivalence.INAPPLICABLE


def forced_agreement_groups(inst: EgnInstance, strict: bool = True) -> list[frozenset]:
    """Partition vertices into groups that agree in every (strict) NE.

    An edge (u, v) joins u and v when no assignment of their closed
    neighbourhoods lets u and v disagree while both satisfy their own
    equilibrium condition. Because lambda_u and lambda_v only depend on
    those neighbourhoods, the test is a sound necessary condition; leaves
    of coordination vertices are the simplest forced case. Edges whose
    joint neighbourhood exceeds ``LOCAL_FORCING_LIMIT`` vertices are
    left unforced.
    """
    n = inst.n
    adj = inst.graph.adjacency
    deg = inst.graph.degrees
    sc, sd = inst.sigma_c, inst.sigma_d
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for u, v in inst.graph.edges:
        u, v = u - 1, v - 1
        local = np.flatnonzero(adj[u] | adj[v])
        local = np.union1d(local, [u, v])
        k = len(local)
        if k > LOCAL_FORCING_LIMIT:
            continue
        bits = (np.arange(1 << k)[:, None] >> np.arange(k)) & 1
        ok = np.ones(1 << k, dtype=bool)
        for w in (u, v):
            cols = np.isin(local, np.flatnonzero(adj[w]))
            nc = bits[:, cols].sum(axis=1)
            xw = bits[:, np.searchsorted(local, w)]
            lam = (1 - 2 * xw) * (sc[w] * nc - sd[w] * (deg[w] - nc))
            ok &= lam < -EPS if strict else lam <= EPS
        disagree = bits[:, np.searchsorted(local, u)] != bits[:, np.searchsorted(local, v)]
        if not np.any(ok & disagree):
            parent[find(u)] = find(v)

    groups: dict[int, set] = {}
    for i in range(n):
        groups.setdefault(find(i), set()).add(i + 1)
    return sorted((frozenset(g) for g in groups.values()), key=min)


def group_candidates(inst: EgnInstance, strict: bool = True) -> list[PureProfile]:
    """Profiles that are constant on every forced agreement group."""
    masks = [set_to_mask(g) for g in forced_agreement_groups(inst, strict)]
    out = []
    for choice in range(1 << len(masks)):
        idx = 0
        for j, m in enumerate(masks):
            if choice >> j & 1:
                idx |= m
        out.append(idx)
    return [PureProfile(inst.n, i) for i in sorted(out)]


# -- vectorised enumeration --------------------------------------------------


def _bits(indices: np.ndarray, n: int) -> np.ndarray:
    return (indices[:, None] >> np.arange(n, dtype=np.int64)) & 1


def lambda_table(inst: EgnInstance, indices) -> np.ndarray:
    """lambda_v for every listed profile index, shape (len(indices), n)."""
    indices = np.asarray(indices, dtype=np.int64)
    x = _bits(indices, inst.n)
    n_c = x @ inst.graph.adjacency
    n_d = inst.graph.degrees - n_c
    return (1 - 2 * x) * (inst.sigma_c * n_c - inst.sigma_d * n_d)


def verdict_codes(lam: np.ndarray) -> np.ndarray:
    """0 = SNE, 1 = NE-only, 2 = NotNE per row of a lambda table."""
    codes = np.full(lam.shape[0], 2, dtype=np.int8)
    codes[np.all(lam <= EPS, axis=1)] = 1
    codes[np.all(lam < -EPS, axis=1)] = 0
    return codes


def _corollary_mask(inst: EgnInstance, indices: np.ndarray) -> np.ndarray:
    """True where a profile survives the disagreement/agreement filters."""
    x = _bits(indices, inst.n)
    n_c = x @ inst.graph.adjacency
    deg = inst.graph.degrees
    classes = inst.game_classes()
    coord = np.array([c is GameClass.COORDINATION for c in classes]) & (deg > 0)
    anti = np.array([c is GameClass.ANTI_COORDINATION for c in classes]) & (deg > 0)
    all_differ = np.where(x == 1, n_c == 0, n_c == deg)
    all_agree = np.where(x == 1, n_c == deg, n_c == 0)
    bad = np.any(all_differ & coord, axis=1) | np.any(all_agree & anti, axis=1)
    return ~bad


_FILTERS = {"sne": (0,), "ne": (0, 1), "all": (0, 1, 2)}


def _scan(inst: EgnInstance, indices: np.ndarray, keep: tuple) -> tuple[np.ndarray, np.ndarray]:
    lam = lambda_table(inst, indices)
    codes = verdict_codes(lam)
    sel = np.isin(codes, keep)
    return indices[sel], lam[sel]


def _scan_range(args):
    inst, start, stop, keep = args
    return _scan(inst, np.arange(start, stop, dtype=np.int64), keep)


def pruned_candidates(inst: EgnInstance, flt: str) -> np.ndarray:
    """Profile indices that can still match ``flt`` after the necessary-condition filters."""
    strict = flt == "sne"
    if strict:
        if unique_sne_condition(inst):
            return np.array([0, (1 << inst.n) - 1], dtype=np.int64)
        ids = ids_equivalence(inst)
        if ids is not IdsEquivalence.INAPPLICABLE:
            full = (1 << inst.n) - 1
            masks = [set_to_mask(s) for s in enumerate_independent_dominating_sets(inst.graph)]
            if ids is IdsEquivalence.DEFECTOR_IDS:
                masks = [full ^ m for m in masks]
            return np.array(sorted(masks), dtype=np.int64)
    cands = np.array([p.index for p in group_candidates(inst, strict)], dtype=np.int64)
    return cands[_corollary_mask(inst, cands)]


def _check_guard(inst: EgnInstance, guard: int) -> None:
    if inst.n > guard:
        raise EnumerationGuardError(
            f"instance has {inst.n} players (2^{inst.n} pure profiles); exhaustive "
            f"enumeration is limited to {guard} players"
        )


def enumerate_indices(
    inst: EgnInstance,
    flt: str = "sne",
    prune: bool = False,
    jobs: int = 1,
    guard: int = ENUMERATION_GUARD,
) -> tuple[np.ndarray, np.ndarray]:
    """Indices of matching profiles (ascending) and their lambda rows."""
    if flt not in _FILTERS:
        raise ValueError(f"filter must be one of {sorted(_FILTERS)}, got {flt!r}")
    _check_guard(inst, guard)
    keep = _FILTERS[flt]
    if prune and flt != "all":
        return _scan(inst, pruned_candidates(inst, flt), keep)
    total = 1 << inst.n
    tasks = [(inst, s, min(s + CHUNK, total), keep) for s in range(0, total, CHUNK)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_scan_range, tasks))
    else:
        parts = [_scan_range(t) for t in tasks]
    idx = np.concatenate([p[0] for p in parts])
    lam = np.concatenate([p[1] for p in parts]).reshape(len(idx), inst.n)
    return idx, lam


def enumerate_classified(
    inst: EgnInstance,
    flt: str = "sne",
    prune: bool = False,
    jobs: int = 1,
    guard: int = ENUMERATION_GUARD,
) -> list[tuple[PureProfile, ProfileClassification]]:
    """All pure profiles whose verdict matches ``flt`` ('sne', 'ne' or 'all').

    With ``prune`` the search is restricted to profiles passing the
    necessary conditions; the result is identical either way.
    """
    idx, lam = enumerate_indices(inst, flt, prune, jobs, guard)
    out = []
    for i, row in zip(idx.tolist(), lam):
        p = PureProfile(inst.n, i)
        reports = tuple(_report(inst, v, p[v], row[v - 1]) for v in inst.graph.vertices)
        out.append((p, ProfileClassification(p, _verdict(r.status for r in reports), reports)))
    return out


def count_verdicts(inst: EgnInstance, guard: int = ENUMERATION_GUARD) -> dict[Verdict, int]:
    _check_guard(inst, guard)
    counts = np.zeros(3, dtype=np.int64)
    total = 1 << inst.n
    for s in range(0, total, CHUNK):
        lam = lambda_table(inst, np.arange(s, min(s + CHUNK, total), dtype=np.int64))
        counts += np.bincount(verdict_codes(lam), minlength=3)
    return {v: int(c) for v, c in zip(_VERDICT_CODES, counts)}


def classifications_csv(rows: Iterable[tuple[PureProfile, ProfileClassification]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "bitstring", "verdict"])
    for p, c in rows:
        w.writerow([p.index, p.bitstring, c.verdict.value])
    return buf.getvalue()
