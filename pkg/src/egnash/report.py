"""DOT rendering of profiles and access to the bundled instance files."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .equilibria import PureProfile
from .graph import Graph

COOPERATOR_COLOR = "yellow"
DEFECTOR_COLOR = "red"
BUNDLED = ("caterpillar.json", "er8.json", "er8.edges")


def to_dot(g: Graph, p: PureProfile, name: str = "egn") -> str:
    """Undirected DOT graph, cooperators filled yellow and defectors red."""
    if p.n != g.n:
        raise ValueError(f"profile has {p.n} players, graph has {g.n} vertices")
    lines = [f"graph {name} {{", "  node [style=filled, shape=circle];"]
    for v in g.vertices:
        color = COOPERATOR_COLOR if p[v] else DEFECTOR_COLOR
        lines.append(f'  {v} [label="{v}", fillcolor={color}];')
    lines += [f"  {u} -- {v};" for u, v in g.edges]
    lines.append("}")
    return "\n".join(lines) + "\n"


def bundled_path(name: str) -> Path:
    """Filesystem path of a bundled data file, e.g. ``caterpillar.json``."""
    if name not in BUNDLED:
        raise FileNotFoundError(f"no bundled file {name!r}; available: {', '.join(BUNDLED)}")
    return Path(str(resources.files("egnash") / "data" / name))
