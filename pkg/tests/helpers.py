"""Shared helpers for the test suite: random systems and finite-difference oracles."""

from __future__ import annotations

import numpy as np

from contactmech.contact_core import HamiltonianSystem
from contactmech.expr import ScalarField, hamiltonian_chart, lagrangian_chart
from contactmech.lagrangian import LagrangianSystem


def random_polynomial_source(rng, names, degree=3, terms=5, scale=1.0) -> str:
    """A random polynomial of total degree <= degree over the given names."""
    parts = []
    for _ in range(terms):
        deg = int(rng.integers(1, degree + 1))
        factors = [str(names[int(k)]) for k in rng.integers(0, len(names), size=deg)]
        coef = scale * rng.uniform(-1.0, 1.0)
        parts.append("*".join([f"{coef:.6f}"] + factors))
    return " + ".join(parts)


def random_hamiltonian(rng, n, degree=3, terms=5) -> HamiltonianSystem:
    chart = hamiltonian_chart(n)
    src = random_polynomial_source(rng, chart, degree, terms)
    return HamiltonianSystem(n, ScalarField.from_source(src, chart))


def random_lagrangian(rng, n, degree=3, terms=5) -> LagrangianSystem:
    """Random regular Lagrangian: unit kinetic term plus a small random cubic."""
    chart = lagrangian_chart(n)
    kinetic = " + ".join(f"qd{i}^2" for i in range(1, n + 1))
    tail = random_polynomial_source(rng, chart, degree, terms, scale=0.3)
    src = f"0.5*({kinetic}) + {tail}"
    return LagrangianSystem(n, ScalarField.from_source(src, chart))


def free_particle(n=1, gamma=0.2) -> LagrangianSystem:
    kinetic = " + ".join(f"qd{i}^2" for i in range(1, n + 1))
    src = f"0.5*({kinetic}) - gamma*z"
    field = ScalarField.from_source(src, lagrangian_chart(n), {"gamma": gamma})
    return LagrangianSystem(n, field)


def damped_oscillator(n=2, omega=1.0, gamma=0.1) -> LagrangianSystem:
    kinetic = " + ".join(f"qd{i}^2" for i in range(1, n + 1))
    potential = " + ".join(f"q{i}^2" for i in range(1, n + 1))
    src = f"0.5*({kinetic}) - 0.5*omega^2*({potential}) - gamma*z"
    field = ScalarField.from_source(
        src, lagrangian_chart(n), {"omega": omega, "gamma": gamma}
    )
    return LagrangianSystem(n, field)


def fd_gradient(fn, u, h=1e-5) -> np.ndarray:
    """Central-difference gradient of a scalar function of a vector."""
    u = np.asarray(u, dtype=float)
    out = np.empty(u.shape[0])
    for k in range(u.shape[0]):
        up, um = u.copy(), u.copy()
        up[k] += h
        um[k] -= h
        out[k] = (fn(up) - fn(um)) / (2 * h)
    return out


def fd_hessian(fn, u, h=4e-5) -> np.ndarray:
    """Hessian by cross differences of function values.

    The default step balances O(h^2) truncation against the eps/h^2 roundoff
    for values up to ~50 and fourth derivatives up to ~1e5.
    """
    u = np.asarray(u, dtype=float)
    m = u.shape[0]

    def at(i, si, j, sj):
        w = u.copy()
        w[i] += si * h
        w[j] += sj * h
        return fn(w)

    out = np.empty((m, m))
    for i in range(m):
        for j in range(m):
            out[i, j] = (at(i, 1, j, 1) - at(i, 1, j, -1) - at(i, -1, j, 1) + at(i, -1, j, -1)) / (
                4 * h * h
            )
    return out
