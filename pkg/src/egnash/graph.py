"""Undirected simple graphs, the graph families used in the case studies,
and independent / dominating set predicates.

Vertices are numbered 1..n everywhere in the public API. Internally the
adjacency matrix is 0-based and vertex sets are bitmasks with bit ``v - 1``
standing for vertex ``v``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

ENUMERATION_GUARD = 30
ER_MAX_RESAMPLES = 1000


class GraphError(ValueError):
    """Raised for malformed graph input."""


VertexSet = frozenset  # frozenset[int] of 1-based vertices


@dataclass(frozen=True)
class Graph:
    """Immutable undirected simple graph on vertices 1..n.

    ``edges`` holds each edge once as ``(u, v)`` with ``u < v``, sorted.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    adjacency: np.ndarray = field(init=False, repr=False, compare=False)
    degrees: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        adj = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges:
            adj[u - 1, v - 1] = adj[v - 1, u - 1] = 1
        adj.flags.writeable = False
        deg = adj.sum(axis=1)
        deg.flags.writeable = False
        object.__setattr__(self, "adjacency", adj)
        object.__setattr__(self, "degrees", deg)

    def degree(self, v: int) -> int:
        return int(self.degrees[v - 1])

    def neighbors(self, v: int) -> list[int]:
        return [int(w) + 1 for w in np.flatnonzero(self.adjacency[v - 1])]

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    @property
    def neighbor_masks(self) -> list[int]:
        """Bitmask of the neighbourhood of each vertex, 0-based list."""
        masks = [0] * self.n
        for u, v in self.edges:
            masks[u - 1] |= 1 << (v - 1)
            masks[v - 1] |= 1 << (u - 1)
        return masks

    def is_connected(self) -> bool:
        if self.n == 0:
            return False
        masks = self.neighbor_masks
        seen = 1
        frontier = 1
        while frontier:
            reach = 0
            m = frontier
            while m:
                low = m & -m
                reach |= masks[low.bit_length() - 1]
                m ^= low
            frontier = reach & ~seen
            seen |= frontier
        return seen == (1 << self.n) - 1


def from_edge_list(n: int, edges: Iterable[Sequence[int]]) -> Graph:
    """Build a graph from 1-based vertex pairs; duplicate edges collapse."""
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 1:
        raise GraphError(f"vertex count must be a positive integer, got {n!r}")
    canon = set()
    for i, edge in enumerate(edges):
        if len(edge) != 2:
            raise GraphError(f"edge #{i + 1} {tuple(edge)!r}: expected a vertex pair")
        u, v = (int(x) for x in edge)
        for x in (u, v):
            if not 1 <= x <= n:
                raise GraphError(f"edge #{i + 1} ({u}, {v}): vertex {x} outside 1..{n}")
        if u == v:
            raise GraphError(f"edge #{i + 1} ({u}, {v}): self-loop not allowed")
        canon.add((min(u, v), max(u, v)))
    return Graph(int(n), tuple(sorted(canon)))


def path(n: int) -> Graph:
    return from_edge_list(n, [(i, i + 1) for i in range(1, n)])


def caterpillar(stalk_len: int, branch_counts: Sequence[int]) -> Graph:
    """Caterpillar C_L(b_1, ..., b_L).

    Stalk vertices 1..L form a path. Leaves are numbered from L+1 onwards,
    in stalk order: all leaves of stalk vertex 1, then those of vertex 2, ...
    """
    if stalk_len < 1:
        raise GraphError("stalk length must be positive")
    if len(branch_counts) != stalk_len:
        raise GraphError(
            f"branch_counts has {len(branch_counts)} entries, expected {stalk_len}"
        )
    if any(b < 0 for b in branch_counts):
        raise GraphError("branch counts must be non-negative")
    edges = [(i, i + 1) for i in range(1, stalk_len)]
    nxt = stalk_len + 1
    for i, b in enumerate(branch_counts, start=1):
        for _ in range(b):
            edges.append((i, nxt))
            nxt += 1
    return from_edge_list(nxt - 1, edges)


def star(n: int) -> Graph:
    """Star on n vertices with centre 1."""
    if n < 2:
        raise GraphError(f"star needs at least 2 vertices, got {n}")
    return from_edge_list(n, [(1, v) for v in range(2, n + 1)])


def erdos_renyi(n: int, avg_degree: float, seed: int) -> Graph:
    """Connected G(n, p) sample with p = avg_degree / (n - 1).

    Draws are repeated with the same seeded generator until the sample is
    connected, at most ``ER_MAX_RESAMPLES`` times.
    """
    if n < 1:
        raise GraphError("vertex count must be positive")
    if not 0 < avg_degree < n and not (n == 1 and avg_degree == 0):
        raise GraphError(f"average degree must lie in (0, {n}), got {avg_degree}")
    if n == 1:
        return from_edge_list(1, [])
    p = avg_degree / (n - 1)
    rng = random.Random(seed)
    pairs = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    for _ in range(ER_MAX_RESAMPLES):
        g = from_edge_list(n, [e for e in pairs if rng.random() < p])
        if g.is_connected():
            return g
    raise GraphError(
        f"no connected G({n}, p={p:.4g}) sample in {ER_MAX_RESAMPLES} draws; "
        "increase avg_degree"
    )


def set_to_mask(s: Iterable[int]) -> int:
    mask = 0
    for v in s:
        mask |= 1 << (v - 1)
    return mask


def mask_to_set(mask: int) -> frozenset:
    out = []
    v = 1
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return frozenset(out)


def _check_subset(g: Graph, s: Iterable[int]) -> int:
    mask = set_to_mask(s)
    if mask >> g.n:
        raise GraphError(f"vertex set {sorted(s)} not contained in 1..{g.n}")
    return mask


def is_independent(g: Graph, s: Iterable[int]) -> bool:
    mask = _check_subset(g, s)
    return all(not (mask >> (u - 1) & 1 and mask >> (v - 1) & 1) for u, v in g.edges)


def is_dominating(g: Graph, s: Iterable[int]) -> bool:
    mask = _check_subset(g, s)
    masks = g.neighbor_masks
    for v in range(g.n):
        if not mask >> v & 1 and not masks[v] & mask:
            return False
    return True


def enumerate_independent_dominating_sets(
    g: Graph, guard: int = ENUMERATION_GUARD
) -> list[frozenset]:
    """All independent dominating sets, ascending by bitmask.

    Backtracks over vertices 1..n, including a vertex only if none of its
    neighbours is included, and abandoning a branch as soon as some fully
    decided vertex can no longer be dominated.
    """
    if g.n > guard:
        raise GraphError(
            f"graph has {g.n} vertices; independent dominating set enumeration is "
            f"limited to {guard} (pass a larger guard explicitly if you mean it)"
        )
    n = g.n
    nbr = g.neighbor_masks
    closed = [nbr[v] | (1 << v) for v in range(n)]
    # last vertex index whose decision can still dominate v
    last_chance = [max([v] + [w for w in range(n) if nbr[v] >> w & 1]) for v in range(n)]
    check_at: list[list[int]] = [[] for _ in range(n)]
    for v in range(n):
        check_at[last_chance[v]].append(v)

    found: list[int] = []

    def rec(i: int, chosen: int, blocked: int) -> None:
        if i == n:
            found.append(chosen)
            return
        bit = 1 << i
        options = []
        if not blocked & bit:
            options.append((chosen | bit, blocked | nbr[i]))
        options.append((chosen, blocked))
        for c, b in options:
            if all(closed[v] & c for v in check_at[i]):
                rec(i + 1, c, b)

    rec(0, 0, 0)
    found.sort()
    return [mask_to_set(m) for m in found]


def parse_edge_list(text: str) -> Graph:
    """Parse the edge-list text format.

    First meaningful line is ``n <count>``; each further line is a 1-based
    ``u v`` pair. ``#`` starts a comment.
    """
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if n is None:
            if len(tokens) != 2 or tokens[0] != "n":
                raise GraphError(f"line {lineno}: expected header 'n <count>', got {line!r}")
            try:
                n = int(tokens[1])
            except ValueError:
                raise GraphError(f"line {lineno}: vertex count {tokens[1]!r} is not an integer")
            continue
        if len(tokens) != 2:
            raise GraphError(
                f"line {lineno}: expected 'u v' (weighted or directed edges are not supported), got {line!r}"
            )
        try:
            edges.append((int(tokens[0]), int(tokens[1])))
        except ValueError:
            raise GraphError(f"line {lineno}: non-integer vertex in {line!r}")
    if n is None:
        raise GraphError("missing 'n <count>' header")
    try:
        return from_edge_list(n, edges)
    except GraphError as exc:
        raise GraphError(f"edge list: {exc}") from None


def format_edge_list(g: Graph) -> str:
    lines = [f"n {g.n}"] + [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"
