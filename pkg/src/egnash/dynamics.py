"""Fixed-step RK4 integration of the networked replicator flow

    dx_v/dt = x_v (1 - x_v) f_v(x).

Used to corroborate equilibrium classifications numerically: strict NE
should attract nearby interior states, profiles with a positive lambda_v
should repel them.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .equilibria import PureProfile
from .game import EgnInstance

CLAMP_LIMIT = 1e-9


class IntegrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class TrajectoryConfig:
    dt: float = 0.01
    t_end: float = 200.0
    convergence_tol: float = 1e-6
    record_stride: int = 100

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.t_end < self.dt:
            raise ValueError("t_end must be at least dt")
        if not self.convergence_tol > 0:
            raise ValueError("convergence_tol must be positive")
        if self.record_stride < 1:
            raise ValueError("record_stride must be >= 1")

    @property
    def steps(self) -> int:
        return int(round(self.t_end / self.dt))


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (records, n)
    converged_to: PureProfile | None
    max_clamp: float = 0.0
    terminal_rhs_norm: float = field(default=0.0, repr=False)

    @property
    def terminal(self) -> np.ndarray:
        return self.states[-1]

    @property
    def valid(self) -> bool:
        """Clamping to [0, 1] never moved a component by CLAMP_LIMIT or more."""
        return self.max_clamp < CLAMP_LIMIT

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t"] + [f"x_{v}" for v in range(1, self.states.shape[1] + 1)])
        for t, x in zip(self.times, self.states):
            w.writerow([repr(float(t))] + [repr(float(c)) for c in x])
        return buf.getvalue()


def rhs(inst: EgnInstance, x: np.ndarray) -> np.ndarray:
    """Vector field; ``x`` may carry leading batch dimensions."""
    x = np.asarray(x, dtype=float)
    sc, sd = inst.sigma_c, inst.sigma_d
    f = (sc + sd) * (x @ inst.graph.adjacency) - sd * inst.graph.degrees
    return x * (1.0 - x) * f


def rk4_step(inst: EgnInstance, x: np.ndarray, dt: float) -> np.ndarray:
    k1 = rhs(inst, x)
    k2 = rhs(inst, x + 0.5 * dt * k1)
    k3 = rhs(inst, x + 0.5 * dt * k2)
    k4 = rhs(inst, x + dt * k3)
    return x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _converged(inst: EgnInstance, x: np.ndarray, tol: float) -> PureProfile | None:
    corner = np.round(x)
    if np.max(np.abs(x - corner)) < tol and np.max(np.abs(rhs(inst, x))) < tol:
        return PureProfile.from_bits([int(c) for c in corner])
    return None


def _run(inst: EgnInstance, x0: np.ndarray, cfg: TrajectoryConfig, record: bool):
    # same arithmetic as rk4_step, with the coefficients hoisted out of the loop
    adj = inst.graph.adjacency.astype(float)
    s = inst.sigma_c + inst.sigma_d
    c = inst.sigma_d * inst.graph.degrees
    dt, half = cfg.dt, 0.5 * cfg.dt

    def vf(z):
        return z * (1.0 - z) * (s * (z @ adj) - c)

    x = np.array(x0, dtype=float)
    times, states = [0.0], [x.copy()]
    max_clamp = 0.0
    steps = cfg.steps
    for i in range(1, steps + 1):
        with np.errstate(over="ignore", invalid="ignore"):  # caught just below
            k1 = vf(x)
            k2 = vf(x + half * k1)
            k3 = vf(x + half * k2)
            k4 = vf(x + dt * k3)
            y = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(y)):
            raise IntegrationError(f"non-finite state at step {i} (t = {i * cfg.dt:g})")
        x = np.clip(y, 0.0, 1.0)
        clamp = float(np.max(np.abs(x - y)))
        if clamp > max_clamp:
            max_clamp = clamp
        if record and (i % cfg.record_stride == 0 or i == steps):
            times.append(i * cfg.dt)
            states.append(x.copy())
    return x, np.array(times), np.array(states), max_clamp


def integrate(inst: EgnInstance, x0, cfg: TrajectoryConfig | None = None) -> Trajectory:
    cfg = cfg or TrajectoryConfig()
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (inst.n,) or np.any(x0 < 0) or np.any(x0 > 1):
        raise ValueError(f"initial state must be a length-{inst.n} vector in [0, 1]")
    x, times, states, max_clamp = _run(inst, x0, cfg, record=True)
    return Trajectory(
        times,
        states,
        _converged(inst, x, cfg.convergence_tol),
        max_clamp,
        float(np.max(np.abs(rhs(inst, x)))),
    )


def perturb_inward(p: PureProfile, delta: float, coords=None) -> np.ndarray:
    """Move the listed (1-based) coordinates of p, or all of them, delta into the cube."""
    x = p.as_state()
    idx = np.arange(p.n) if coords is None else np.asarray(list(coords)) - 1
    x[idx] = np.where(x[idx] == 1.0, 1.0 - delta, delta)
    return x


def integrate_terminal(inst: EgnInstance, x0, cfg: TrajectoryConfig | None = None) -> np.ndarray:
    """Terminal states for a batch of starts, shape (batch, n); nothing is recorded."""
    cfg = cfg or TrajectoryConfig()
    x0 = np.atleast_2d(np.asarray(x0, dtype=float))
    if x0.shape[1] != inst.n or np.any(x0 < 0) or np.any(x0 > 1):
        raise ValueError(f"initial states must be rows of length {inst.n} in [0, 1]")
    x, _, _, max_clamp = _run(inst, x0, cfg, record=False)
    if max_clamp >= CLAMP_LIMIT:
        raise IntegrationError(f"clamping moved a component by {max_clamp:.3g}")
    return x


@dataclass(frozen=True)
class BasinReport:
    counts: dict  # PureProfile -> int, ascending by index
    nonconverged: int

    def to_dict(self) -> dict:
        out = {p.bitstring: c for p, c in self.counts.items()}
        out["nonconverged"] = self.nonconverged
        return out


def basin_probe(
    inst: EgnInstance, samples: int, seed: int, cfg: TrajectoryConfig | None = None
) -> BasinReport:
    """Tally the pure limits reached from seeded uniform interior starts.

    All samples are integrated together as one batch.
    """
    if samples <= 0:
        raise ValueError("samples must be positive")
    cfg = cfg or TrajectoryConfig()
    rng = np.random.default_rng(seed)
    x0 = rng.uniform(0.0, 1.0, size=(samples, inst.n))
    x, _, _, _ = _run(inst, x0, cfg, record=False)
    tally: dict[int, int] = {}
    nonconverged = 0
    for row in x:
        p = _converged(inst, row, cfg.convergence_tol)
        if p is None:
            nonconverged += 1
        else:
            tally[p.index] = tally.get(p.index, 0) + 1
    counts = {PureProfile(inst.n, i): tally[i] for i in sorted(tally)}
    return BasinReport(counts, nonconverged)
