"""Fixed-step integration of contact dynamics with monitor channels.

Classical RK4 (or explicit Euler) applied to the first-order form of the
dynamics: the Herglotz field (dq = v, W a = b, dz = L) on the Lagrangian
side, the contact Hamiltonian field on the Darboux side.  Steps are fixed so
runs are bit-for-bit reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "IntegratorConfig",
    "Trajectory",
    "IntegrationError",
    "integrate_lagrangian",
    "integrate_hamiltonian",
]


class IntegrationError(RuntimeError):
    """Integration aborted; ``partial`` holds the trajectory up to the failure."""

    def __init__(self, message: str, partial: "Trajectory | None" = None):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class IntegratorConfig:
    step: float
    t_final: float
    method: str = "rk4"
    monitors: dict = field(default_factory=dict)  # name -> quantity

    def __post_init__(self):
        if self.method not in ("rk4", "euler"):
            raise ValueError(f"method must be 'rk4' or 'euler', got {self.method!r}")
        if not (self.step > 0):
            raise ValueError("step must be positive")
        if not (self.t_final > 0):
            raise ValueError("t_final must be positive")
        if self.step > self.t_final:
            raise ValueError("step must not exceed t_final")
        steps = self.t_final / self.step
        if abs(steps - round(steps)) > 1e-9 * max(1.0, steps):
            raise ValueError(
                f"t_final={self.t_final} is not a whole number of steps of {self.step}"
            )

    @property
    def steps(self) -> int:
        return int(round(self.t_final / self.step))


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled states with named monitor series."""

    times: np.ndarray
    states: np.ndarray  # (steps+1, dim)
    monitors: dict  # name -> (steps+1,) array
    chart: tuple[str, ...]

    def __len__(self) -> int:
        return self.states.shape[0]

    @property
    def step(self) -> float:
        return float(self.times[1] - self.times[0])

    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def monitor(self, name: str) -> np.ndarray:
        return self.monitors[name]


def _truncate(times, states, monitors, chart, upto: int) -> Trajectory:
    return Trajectory(
        times[: upto + 1],
        states[: upto + 1],
        {name: series[: upto + 1] for name, series in monitors.items()},
        chart,
    )


def _integrate(system, u0: np.ndarray, cfg: IntegratorConfig, monitors: dict) -> Trajectory:
    dim = system.dim
    u0 = np.asarray(u0, dtype=float)
    if u0.shape != (dim,):
        raise ValueError(f"initial state has shape {u0.shape}, expected ({dim},)")
    steps = cfg.steps
    h = cfg.step
    times = np.arange(steps + 1) * h
    states = np.empty((steps + 1, dim))
    series = {name: np.empty(steps + 1) for name in monitors}

    def record(k: int, u: np.ndarray) -> None:
        states[k] = u
        for name, quantity in monitors.items():
            series[name][k] = quantity.value_at(u)

    rhs = system.dynamics
    u = u0.copy()
    try:
        record(0, u)
    except ArithmeticError as exc:
        raise IntegrationError(f"cannot evaluate at the initial state: {exc}") from exc
    for k in range(steps):
        try:
            if cfg.method == "rk4":
                k1 = rhs(u)
                k2 = rhs(u + (0.5 * h) * k1)
                k3 = rhs(u + (0.5 * h) * k2)
                k4 = rhs(u + h * k3)
                u = u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            else:
                u = u + h * rhs(u)
            if not np.all(np.isfinite(u)):
                raise IntegrationError(
                    f"state became non-finite at t={times[k + 1]:g} (step {k + 1}): {u}",
                    partial=_truncate(times, states, series, system.chart, k),
                )
            record(k + 1, u)
        except ArithmeticError as exc:
            raise IntegrationError(
                f"dynamics evaluation failed at t={times[k]:g} (step {k + 1}): {exc}",
                partial=_truncate(times, states, series, system.chart, k),
            ) from exc
    return Trajectory(times, states, series, system.chart)


def integrate_lagrangian(sys, ic, cfg: IntegratorConfig) -> Trajectory:
    """Integrate the Herglotz dynamics from a bundle point (q, v, z).

    The energy E_L is always recorded as a monitor channel alongside any
    user-supplied monitors.
    """
    monitors = dict(cfg.monitors)
    name, quantity = sys.default_monitor()
    monitors.setdefault(name, quantity)
    u0 = ic.to_array() if hasattr(ic, "to_array") else np.asarray(ic, dtype=float)
    return _integrate(sys, u0, cfg, monitors)


def integrate_hamiltonian(sys, ic, cfg: IntegratorConfig) -> Trajectory:
    """Integrate the contact Hamiltonian flow from a Darboux point (q, p, z)."""
    monitors = dict(cfg.monitors)
    name, quantity = sys.default_monitor()
    monitors.setdefault(name, quantity)
    u0 = ic.to_array() if hasattr(ic, "to_array") else np.asarray(ic, dtype=float)
    return _integrate(sys, u0, cfg, monitors)
