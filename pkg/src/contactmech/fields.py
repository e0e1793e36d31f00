"""Vector fields and derived scalar quantities over a coordinate chart.

A vector field exposes ``value(u)`` and ``value_and_jacobian(u)`` on raw
coordinate vectors; a scalar quantity exposes ``value_at(u)`` and
``value_and_gradient_at(u)``.  Expression-backed :class:`~contactmech.expr.ScalarField`
objects already satisfy the quantity interface; the classes here cover
quantities that have no closed-form expression tree (pairings with the
contact form, quotients, lifted momenta).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ad import DomainError
from .expr import ScalarField

__all__ = [
    "AmbientVectorField",
    "ConstantVectorField",
    "VectorFieldSum",
    "DynamicsVectorField",
    "lie_bracket_value",
    "EtaPairingQuantity",
    "QuotientQuantity",
    "ProductQuantity",
    "LinearCombinationQuantity",
]


# -- vector fields -----------------------------------------------------------


@dataclass(frozen=True)
class AmbientVectorField:
    """A vector field given componentwise by scalar fields on one chart."""

    components: tuple[ScalarField, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if not self.components:
            raise ValueError("a vector field needs at least one component")
        chart = self.components[0].chart
        if any(c.chart != chart for c in self.components):
            raise ValueError("all components must share one chart")
        if len(self.components) != len(chart):
            raise ValueError(
                f"{len(self.components)} components for a {len(chart)}-dimensional chart"
            )

    @classmethod
    def from_sources(cls, sources, chart, parameters=None) -> "AmbientVectorField":
        params = dict(parameters or {})
        return cls(tuple(ScalarField.from_source(s, chart, params) for s in sources))

    @property
    def chart(self):
        return self.components[0].chart

    def value(self, u) -> np.ndarray:
        return np.array([c.value_at(u) for c in self.components])

    def value_and_jacobian(self, u):
        jets = [c.jet_at(u) for c in self.components]
        vals = np.array([j.value for j in jets])
        jac = np.array([j.gradient for j in jets])
        return vals, jac


@dataclass(frozen=True)
class ConstantVectorField:
    vector: np.ndarray
    chart: tuple[str, ...]

    def __post_init__(self):
        vec = np.asarray(self.vector, dtype=float)
        if vec.shape != (len(self.chart),):
            raise ValueError("constant vector length must match the chart")
        object.__setattr__(self, "vector", vec)
        object.__setattr__(self, "chart", tuple(self.chart))

    def value(self, u) -> np.ndarray:
        return self.vector

    def value_and_jacobian(self, u):
        dim = len(self.chart)
        return self.vector, np.zeros((dim, dim))


@dataclass(frozen=True)
class VectorFieldSum:
    """A real linear combination of vector fields on a shared chart."""

    terms: tuple  # of (coefficient, vector field)

    def __post_init__(self):
        terms = tuple((float(c), f) for c, f in self.terms)
        if not terms:
            raise ValueError("empty linear combination")
        chart = terms[0][1].chart
        if any(f.chart != chart for _, f in terms):
            raise ValueError("all summands must share one chart")
        object.__setattr__(self, "terms", terms)

    @property
    def chart(self):
        return self.terms[0][1].chart

    def value(self, u) -> np.ndarray:
        total = self.terms[0][0] * self.terms[0][1].value(u)
        for c, f in self.terms[1:]:
            total = total + c * f.value(u)
        return total

    def value_and_jacobian(self, u):
        val, jac = self.terms[0][1].value_and_jacobian(u)
        val, jac = self.terms[0][0] * val, self.terms[0][0] * jac
        for c, f in self.terms[1:]:
            v, j = f.value_and_jacobian(u)
            val = val + c * v
            jac = jac + c * j
        return val, jac


@dataclass(frozen=True)
class DynamicsVectorField:
    """The dynamics vector field of a contact system, as a field object."""

    system: object

    @property
    def chart(self):
        return self.system.chart

    def value(self, u) -> np.ndarray:
        return self.system.dynamics(u)

    def value_and_jacobian(self, u):
        return self.system.dynamics_jacobian(u)


def lie_bracket_value(X, Y, u) -> np.ndarray:
    """[X, Y] at u, componentwise X(Y^k) - Y(X^k)."""
    if X.chart != Y.chart:
        raise ValueError("lie bracket requires fields on the same chart")
    xval, xjac = X.value_and_jacobian(u)
    yval, yjac = Y.value_and_jacobian(u)
    return yjac @ xval - xjac @ yval


# -- derived scalar quantities -----------------------------------------------


@dataclass(frozen=True)
class EtaPairingQuantity:
    """The function u -> eta(X)(u) for the contact form of ``geometry``."""

    geometry: object
    vector_field: object

    @property
    def chart(self):
        return self.vector_field.chart

    def value_at(self, u) -> float:
        return float(self.geometry.eta(u) @ self.vector_field.value(u))

    def value_and_gradient_at(self, u):
        eta = self.geometry.eta(u)
        deta = self.geometry.eta_jacobian(u)
        val, jac = self.vector_field.value_and_jacobian(u)
        return float(eta @ val), deta @ val + jac.T @ eta


@dataclass(frozen=True)
class QuotientQuantity:
    """num/den; evaluation where den vanishes is a domain error."""

    num: object
    den: object

    @property
    def chart(self):
        return self.num.chart

    def _den_value(self, value: float) -> float:
        if value == 0.0:
            raise DomainError("quotient denominator vanishes at the evaluation point")
        return value

    def value_at(self, u) -> float:
        return self.num.value_at(u) / self._den_value(self.den.value_at(u))

    def value_and_gradient_at(self, u):
        fv, fg = self.num.value_and_gradient_at(u)
        hv, hg = self.den.value_and_gradient_at(u)
        self._den_value(hv)
        q = fv / hv
        return q, (fg - q * hg) / hv


@dataclass(frozen=True)
class ProductQuantity:
    left: object
    right: object

    @property
    def chart(self):
        return self.left.chart

    def value_at(self, u) -> float:
        return self.left.value_at(u) * self.right.value_at(u)

    def value_and_gradient_at(self, u):
        av, ag = self.left.value_and_gradient_at(u)
        bv, bg = self.right.value_and_gradient_at(u)
        return av * bv, av * bg + bv * ag


@dataclass(frozen=True)
class LinearCombinationQuantity:
    terms: tuple  # of (coefficient, quantity)
    constant: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple((float(c), q) for c, q in self.terms))
        if not self.terms:
            raise ValueError("empty linear combination")

    @property
    def chart(self):
        return self.terms[0][1].chart

    def value_at(self, u) -> float:
        return self.constant + sum(c * q.value_at(u) for c, q in self.terms)

    def value_and_gradient_at(self, u):
        total = self.constant
        grad = None
        for c, q in self.terms:
            v, g = q.value_and_gradient_at(u)
            total += c * v
            grad = c * g if grad is None else grad + c * g
        return total, grad


