"""Vertical and complete lifts of vector fields on Q and on Q x R to TQ x R.

A field Y = Y^i(q) d/dq^i on Q lifts to

    vertical:  Y^V = Y^i d/dv^i
    complete:  Y^C = Y^i d/dq^i + v^j (dY^i/dq^j) d/dv^i

extended to TQ x R with zero z-component.  A field
Y = Y^i(q, z) d/dq^i + Z(z) d/dz on Q x R lifts to

    restricted complete:  Y^C = Y^i d/dq^i + v^j (dY^i/dq^j) d/dv^i + Z d/dz

provided its complete lift is tangent to {dz/dt = 0}, which holds exactly
when Z does not depend on the positions; that condition is enforced at
construction.  The vertical lift of such a field is the vertical lift of its
projection to Q.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .contact_core import TangentValue
from .expr import ScalarField, free_variables, lagrangian_chart, parse, position_names

__all__ = [
    "VectorFieldQ",
    "VectorFieldQR",
    "vertical_lift_Q",
    "complete_lift_Q",
    "vertical_lift_QR",
    "complete_lift_QR",
    "CompleteLiftField",
    "VerticalLiftField",
    "VerticalMomentumQuantity",
]


@dataclass(frozen=True)
class VectorFieldQ:
    """Y = Y^i(q) d/dq^i on the configuration space."""

    n: int
    components: tuple[ScalarField, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        expected = position_names(self.n)
        if len(self.components) != self.n:
            raise ValueError(f"expected {self.n} components, got {len(self.components)}")
        for c in self.components:
            if tuple(c.chart) != expected:
                raise ValueError(f"component chart {c.chart} must be {expected}")

    @classmethod
    def from_expressions(cls, n: int, sources, parameters=None) -> "VectorFieldQ":
        params = dict(parameters or {})
        chart = position_names(n)
        return cls(n, tuple(ScalarField.from_source(s, chart, params) for s in sources))

    @property
    def z_dependent(self) -> bool:
        return False

    def base_point(self, u: np.ndarray) -> np.ndarray:
        return u[: self.n]

    def z_component_value(self, u) -> float:
        return 0.0

    def z_component_rate(self, u) -> float:
        return 0.0


@dataclass(frozen=True)
class VectorFieldQR:
    """Y = Y^i(q, z) d/dq^i + Z(z) d/dz on Q x R.

    The z-component may depend on z only; a position-dependent Z would make
    the complete lift leave TQ x R, so it is rejected here.
    """

    n: int
    components: tuple[ScalarField, ...]
    z_component: ScalarField

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        expected = position_names(self.n) + ("z",)
        if len(self.components) != self.n:
            raise ValueError(f"expected {self.n} components, got {len(self.components)}")
        for c in self.components:
            if tuple(c.chart) != expected:
                raise ValueError(f"component chart {c.chart} must be {expected}")
        if tuple(self.z_component.chart) != ("z",):
            raise ValueError("the z component must be a field over the chart ('z',)")
        stray = free_variables(self.z_component.ast) - {"z"} - set(self.z_component.parameters)
        if stray:
            raise ValueError(
                f"the z component may depend only on z, found {sorted(stray)}"
            )

    @classmethod
    def from_expressions(cls, n, q_sources, z_source, parameters=None) -> "VectorFieldQR":
        params = dict(parameters or {})
        chart = position_names(n) + ("z",)
        comps = tuple(ScalarField.from_source(s, chart, params) for s in q_sources)
        z_ast = parse(z_source)
        stray = free_variables(z_ast) - {"z"} - set(params)
        if stray:
            raise ValueError(
                f"the z component may depend only on z, found {sorted(stray)}"
            )
        z_field = ScalarField(z_ast, ("z",), params, z_source)
        return cls(n, comps, z_field)

    @property
    def z_dependent(self) -> bool:
        return True

    def base_point(self, u: np.ndarray) -> np.ndarray:
        return np.concatenate([u[: self.n], u[-1:]])

    def z_component_value(self, u) -> float:
        return self.z_component.value_at(u[-1:])

    def z_component_rate(self, u) -> float:
        _, grad = self.z_component.value_and_gradient_at(u[-1:])
        return float(grad[0])


def _component_data(Y, u: np.ndarray):
    """Values, q-Jacobian, and z-derivatives of the Y^i at the base point."""
    base = Y.base_point(u)
    jets = [c.jet_at(base) for c in Y.components]
    n = Y.n
    values = np.array([j.value for j in jets])
    jac_q = np.array([j.gradient[:n] for j in jets])
    dz = np.array([j.gradient[n] for j in jets]) if Y.z_dependent else np.zeros(n)
    return jets, values, jac_q, dz


def _as_array(x) -> np.ndarray:
    return x.to_array() if hasattr(x, "to_array") else np.asarray(x, dtype=float)


# -- pointwise lift evaluators ------------------------------------------------


def vertical_lift_Q(Y: VectorFieldQ, x) -> TangentValue:
    """Y^V = Y^i d/dv^i at a bundle point."""
    u = _as_array(x)
    _, values, _, _ = _component_data(Y, u)
    return TangentValue(np.zeros(Y.n), values, 0.0)


def complete_lift_Q(Y: VectorFieldQ, x) -> TangentValue:
    """Y^C = Y^i d/dq^i + v^j (dY^i/dq^j) d/dv^i at a bundle point."""
    u = _as_array(x)
    _, values, jac_q, _ = _component_data(Y, u)
    v = u[Y.n : 2 * Y.n]
    return TangentValue(values, jac_q @ v, 0.0)


def vertical_lift_QR(Y: VectorFieldQR, x) -> TangentValue:
    """The vertical lift of the projection of Y to Q."""
    u = _as_array(x)
    _, values, _, _ = _component_data(Y, u)
    return TangentValue(np.zeros(Y.n), values, 0.0)


def complete_lift_QR(Y: VectorFieldQR, x) -> TangentValue:
    """The restriction of the complete lift of Y to TQ x R."""
    u = _as_array(x)
    _, values, jac_q, _ = _component_data(Y, u)
    v = u[Y.n : 2 * Y.n]
    return TangentValue(values, jac_q @ v, Y.z_component_value(u))


# -- lifts as ambient vector fields on (q, v, z) -------------------------------


@dataclass(frozen=True)
class CompleteLiftField:
    """The (restricted) complete lift as a differentiable ambient field."""

    base: object  # VectorFieldQ or VectorFieldQR

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def chart(self):
        return lagrangian_chart(self.base.n)

    def value(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        n = self.base.n
        _, values, jac_q, _ = _component_data(self.base, u)
        out = np.empty(2 * n + 1)
        out[:n] = values
        out[n : 2 * n] = jac_q @ u[n : 2 * n]
        out[-1] = self.base.z_component_value(u)
        return out

    def value_and_jacobian(self, u):
        u = np.asarray(u, dtype=float)
        n = self.base.n
        dim = 2 * n + 1
        jets, values, jac_q, dz = _component_data(self.base, u)
        v = u[n : 2 * n]
        val = np.empty(dim)
        val[:n] = values
        val[n : 2 * n] = jac_q @ v
        val[-1] = self.base.z_component_value(u)
        J = np.zeros((dim, dim))
        J[:n, :n] = jac_q
        J[:n, -1] = dz
        for i in range(n):
            H = jets[i].hessian
            J[n + i, :n] = v @ H[:n, :n]
            J[n + i, n : 2 * n] = jac_q[i]
            if self.base.z_dependent:
                J[n + i, -1] = v @ H[:n, n]
        J[-1, -1] = self.base.z_component_rate(u)
        return val, J


@dataclass(frozen=True)
class VerticalLiftField:
    """The vertical lift as a differentiable ambient field."""

    base: object

    @property
    def chart(self):
        return lagrangian_chart(self.base.n)

    def value(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        n = self.base.n
        _, values, _, _ = _component_data(self.base, u)
        out = np.zeros(2 * n + 1)
        out[n : 2 * n] = values
        return out

    def value_and_jacobian(self, u):
        u = np.asarray(u, dtype=float)
        n = self.base.n
        dim = 2 * n + 1
        _, values, jac_q, dz = _component_data(self.base, u)
        val = np.zeros(dim)
        val[n : 2 * n] = values
        J = np.zeros((dim, dim))
        J[n : 2 * n, :n] = jac_q
        J[n : 2 * n, -1] = dz
        return val, J


@dataclass(frozen=True)
class VerticalMomentumQuantity:
    """The quantity Y^V(L) - Z on (q, v, z), built directly from Y and L.

    For a field on Q the z-component vanishes and this is Y^V(L), the
    dissipated quantity of an infinitesimal symmetry.  It equals
    -eta_L(Y^C) by the lift identities, but is assembled independently of
    the contact form so the two routes can be compared in tests.
    """

    system: object  # LagrangianSystem
    base: object  # VectorFieldQ or VectorFieldQR

    def __post_init__(self):
        if self.system.n != self.base.n:
            raise ValueError("system and field dimensions differ")

    @property
    def chart(self):
        return self.system.chart

    def value_at(self, u) -> float:
        u = np.asarray(u, dtype=float)
        n = self.base.n
        _, values, _, _ = _component_data(self.base, u)
        p = self.system.jet(u).gradient[n : 2 * n]
        return float(values @ p - self.base.z_component_value(u))

    def value_and_gradient_at(self, u):
        u = np.asarray(u, dtype=float)
        n = self.base.n
        jets, values, jac_q, dz = _component_data(self.base, u)
        L = self.system.jet(u)
        p = L.gradient[n : 2 * n]
        value = float(values @ p - self.base.z_component_value(u))
        grad = values @ L.hessian[n : 2 * n, :]
        grad[:n] += jac_q.T @ p
        grad[-1] += dz @ p
        grad[-1] -= self.base.z_component_rate(u)
        return value, grad
