"""Payoff matrices and the networked replicator model.

A vertex's payoff matrix is indexed ``[[b_CC, b_CD], [b_DC, b_DD]]``; rows
are the vertex's own strategy, columns the opponent's. Strategy 1 is
cooperate, 0 is defect, and a state ``x`` gives every vertex's cooperation
frequency.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .graph import Graph, GraphError, from_edge_list

EPS = 1e-9


class InstanceError(ValueError):
    """Raised when an instance description is malformed."""


class GameClass(enum.Enum):
    COORDINATION = "coordination"
    ANTI_COORDINATION = "anti-coordination"
    DEGENERATE = "degenerate"
    MIXED_SIGN = "mixed-sign"


@dataclass(frozen=True)
class PayoffMatrix:
    b_cc: float
    b_cd: float
    b_dc: float
    b_dd: float

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]]) -> "PayoffMatrix":
        if len(rows) != 2 or any(len(r) != 2 for r in rows):
            raise InstanceError(f"payoff matrix must be 2x2, got {rows!r}")
        (cc, cd), (dc, dd) = rows
        vals = []
        for x in (cc, cd, dc, dd):
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise InstanceError(f"payoff entry {x!r} is not a number")
            if not np.isfinite(x):
                raise InstanceError(f"payoff entry {x!r} is not finite")
            vals.append(float(x))
        return cls(*vals)

    def rows(self) -> list[list[float]]:
        return [[self.b_cc, self.b_cd], [self.b_dc, self.b_dd]]

    @property
    def sigma_c(self) -> float:
        return self.b_cc - self.b_dc

    @property
    def sigma_d(self) -> float:
        return self.b_dd - self.b_cd


def sigma(b: PayoffMatrix) -> tuple[float, float]:
    """Return ``(sigma_C, sigma_D)``."""
    return b.sigma_c, b.sigma_d


def ratio(b: PayoffMatrix) -> float | None:
    """``sigma_C / sigma_D``, or None when sigma_D is zero."""
    if abs(b.sigma_d) <= EPS:
        return None
    return b.sigma_c / b.sigma_d


def _sign(x: float) -> int:
    if x > EPS:
        return 1
    if x < -EPS:
        return -1
    return 0


def classify_game(b: PayoffMatrix) -> GameClass:
    sc, sd = _sign(b.sigma_c), _sign(b.sigma_d)
    if sc == 0 or sd == 0:
        return GameClass.DEGENERATE
    if sc > 0 and sd > 0:
        return GameClass.COORDINATION
    if sc < 0 and sd < 0:
        return GameClass.ANTI_COORDINATION
    return GameClass.MIXED_SIGN


def pairwise_payoff(b: PayoffMatrix, x_v: float, x_w: float) -> float:
    """Payoff of a v-player at frequency x_v against a w-player at x_w."""
    return (
        (b.b_cc - b.b_dc + b.b_dd - b.b_cd) * x_v * x_w
        - (b.b_dd - b.b_cd) * x_v
        + b.b_dc * x_w
        + b.b_dd * (1 - x_w)
    )


@dataclass(frozen=True)
class EgnInstance:
    """A graph with one payoff matrix per vertex (``payoffs[v - 1]``)."""

    graph: Graph
    payoffs: tuple[PayoffMatrix, ...]

    def __post_init__(self):
        if len(self.payoffs) != self.graph.n:
            raise InstanceError(
                f"{len(self.payoffs)} payoff matrices for {self.graph.n} vertices"
            )
        for name, vals in (
            ("_sigma_c", [b.sigma_c for b in self.payoffs]),
            ("_sigma_d", [b.sigma_d for b in self.payoffs]),
        ):
            arr = np.array(vals, dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @classmethod
    def uniform(cls, graph: Graph, b: PayoffMatrix) -> "EgnInstance":
        return cls(graph, (b,) * graph.n)

    @classmethod
    def with_overrides(
        cls, graph: Graph, default: PayoffMatrix, overrides: Mapping[int, PayoffMatrix]
    ) -> "EgnInstance":
        payoffs = [default] * graph.n
        for v, b in overrides.items():
            if not 1 <= v <= graph.n:
                raise InstanceError(f"payoff override for vertex {v} outside 1..{graph.n}")
            payoffs[v - 1] = b
        return cls(graph, tuple(payoffs))

    @property
    def n(self) -> int:
        return self.graph.n

    def payoff(self, v: int) -> PayoffMatrix:
        return self.payoffs[v - 1]

    @property
    def sigma_c(self) -> np.ndarray:
        return self._sigma_c

    @property
    def sigma_d(self) -> np.ndarray:
        return self._sigma_d

    def game_classes(self) -> list[GameClass]:
        return [classify_game(b) for b in self.payoffs]

    def common_payoff(self) -> PayoffMatrix | None:
        first = self.payoffs[0]
        return first if all(b == first for b in self.payoffs) else None


def _check_state(inst: EgnInstance, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (inst.n,):
        raise ValueError(f"state has shape {x.shape}, expected ({inst.n},)")
    if np.any(x < 0) or np.any(x > 1):
        raise ValueError("state components must lie in [0, 1]")
    return x


def network_payoff(inst: EgnInstance, v: int, x) -> float:
    """Total payoff of vertex v against all of its neighbours."""
    x = _check_state(inst, x)
    b = inst.payoff(v)
    return float(
        sum(pairwise_payoff(b, x[v - 1], x[w - 1]) for w in inst.graph.neighbors(v))
    )


def growth(inst: EgnInstance, v: int, x) -> float:
    """f_v(x), the derivative of vertex v's network payoff in its own x_v."""
    x = _check_state(inst, x)
    b = inst.payoff(v)
    coop_nbrs = float(inst.graph.adjacency[v - 1] @ x)
    return (b.sigma_c + b.sigma_d) * coop_nbrs - b.sigma_d * inst.graph.degree(v)


# -- instance file -----------------------------------------------------------

_TOP_KEYS = {"graph", "payoffs"}
_GRAPH_KEYS = {"n", "edges"}
_PAYOFF_KEYS = {"default", "overrides"}


def _reject_unknown(obj, allowed: set, where: str) -> None:
    if not isinstance(obj, dict):
        raise InstanceError(f"{where}: expected an object")
    extra = set(obj) - allowed
    if extra:
        raise InstanceError(f"{where}: unknown key(s) {sorted(extra)}")
    missing = {k for k in allowed if k != "overrides"} - set(obj)
    if missing:
        raise InstanceError(f"{where}: missing key(s) {sorted(missing)}")


def instance_from_dict(data) -> EgnInstance:
    _reject_unknown(data, _TOP_KEYS, "instance")
    g = data["graph"]
    _reject_unknown(g, _GRAPH_KEYS, "graph")
    n = g["n"]
    if isinstance(n, bool) or not isinstance(n, int):
        raise InstanceError(f"graph.n: expected integer, got {n!r}")
    if not isinstance(g["edges"], list):
        raise InstanceError("graph.edges: expected a list of [u, v] pairs")
    for i, e in enumerate(g["edges"]):
        if not isinstance(e, list) or not all(
            isinstance(x, int) and not isinstance(x, bool) for x in e
        ):
            raise InstanceError(f"graph.edges[{i}]: expected [u, v] integers, got {e!r}")
    try:
        graph = from_edge_list(n, g["edges"])
    except GraphError as exc:
        raise InstanceError(f"graph: {exc}") from None

    p = data["payoffs"]
    _reject_unknown(p, _PAYOFF_KEYS, "payoffs")
    try:
        default = PayoffMatrix.from_rows(p["default"])
    except (InstanceError, TypeError, ValueError) as exc:
        raise InstanceError(f"payoffs.default: {exc}") from None
    overrides = {}
    raw = p.get("overrides", {})
    if not isinstance(raw, dict):
        raise InstanceError("payoffs.overrides: expected an object keyed by vertex")
    for key, rows in raw.items():
        try:
            v = int(key)
        except ValueError:
            raise InstanceError(f"payoffs.overrides: key {key!r} is not a vertex number") from None
        try:
            overrides[v] = PayoffMatrix.from_rows(rows)
        except (InstanceError, TypeError, ValueError) as exc:
            raise InstanceError(f"payoffs.overrides[{key!r}]: {exc}") from None
    return EgnInstance.with_overrides(graph, default, overrides)


def instance_to_dict(inst: EgnInstance) -> dict:
    """Serialise, choosing the most common matrix as the default."""
    counts: dict[PayoffMatrix, int] = {}
    for b in inst.payoffs:
        counts[b] = counts.get(b, 0) + 1
    default = max(counts, key=lambda b: counts[b])
    overrides = {
        str(v): b.rows() for v, b in enumerate(inst.payoffs, start=1) if b != default
    }
    payoffs = {"default": default.rows()}
    if overrides:
        payoffs["overrides"] = overrides
    return {
        "graph": {"n": inst.n, "edges": [list(e) for e in inst.graph.edges]},
        "payoffs": payoffs,
    }


def load_instance(path) -> EgnInstance:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise InstanceError(f"{path}: line {exc.lineno} col {exc.colno}: {exc.msg}") from None
    try:
        return instance_from_dict(data)
    except InstanceError as exc:
        raise InstanceError(f"{path}: {exc}") from None
