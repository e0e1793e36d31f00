"""Deterministic sample-point generation for residual checks.

Boxes default to [-1, 1]^dim.  Points that a check cannot use (degenerate
velocity Hessian, vanishing denominator, evaluation outside a function's
domain) are resampled by rejection.
"""

from __future__ import annotations

import numpy as np

__all__ = ["sample_states", "rejection_sample", "regular_states"]

REJECT_BELOW = 1e-3


def sample_states(seed, count: int, dim: int, box=(-1.0, 1.0)) -> np.ndarray:
    """A (count, dim) matrix of uniform samples from the box."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    lo, hi = box
    return rng.uniform(lo, hi, size=(count, dim))


def rejection_sample(seed, count: int, dim: int, accept, box=(-1.0, 1.0), max_tries: int = 200) -> np.ndarray:
    """Sample until ``accept(u)`` holds for ``count`` points.

    ``accept`` may raise ArithmeticError to reject a point (domain errors
    count as rejection).
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    lo, hi = box
    rows = []
    for _ in range(max_tries):
        for u in rng.uniform(lo, hi, size=(count, dim)):
            try:
                ok = accept(u)
            except ArithmeticError:
                ok = False
            if ok:
                rows.append(u)
                if len(rows) == count:
                    return np.array(rows)
    raise ValueError(
        f"could not draw {count} acceptable sample points in {max_tries} rounds"
    )


def regular_states(sys, seed, count: int, box=(-1.0, 1.0), min_det: float = REJECT_BELOW) -> np.ndarray:
    """Sample states where the system's velocity Hessian is safely invertible."""

    def accept(u):
        return abs(np.linalg.det(sys.velocity_hessian(u))) >= min_det

    return rejection_sample(seed, count, sys.dim, accept, box)
