"""Moment blocks from quadrature on the resolvent, and the eigenvalue count
estimate from a Gaussian probe block.

The expensive part is one LU factorization per quadrature node, built once
and reused across refinement iterations; each moment evaluation costs exactly
q triangular solves regardless of how many moment orders are requested.
"""

import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .dense_core import SingularMatrixError, as_dense, lu_factor, lu_solve

TWO_PI_I = 2.0j * math.pi

# absolute slack subtracted before the ceiling so that a trace that is zero
# up to quadrature noise yields a count of 0, not 1
_CEIL_GUARD = 1e-8


class SingularNodeError(ValueError):
    """A shifted matrix z_j B - A was exactly singular (eigenvalue on the
    contour, or touching it to machine precision)."""

    def __init__(self, node_index, node):
        super().__init__(
            f"shifted matrix is singular at quadrature node {node_index} "
            f"(z = {node}); the contour passes through an eigenvalue"
        )
        self.node_index = node_index
        self.node = node


@dataclass
class ShiftedSolveCache:
    """LU factorizations of z_j B - A for every node of a fixed rule."""

    rule: object
    factorizations: list
    n: int
    solve_count: int = 0

    def solve(self, j, rhs):
        self.solve_count += 1
        return lu_solve(self.factorizations[j], rhs)


@dataclass
class MomentStack:
    blocks: list = field(repr=False)

    @property
    def g(self):
        return len(self.blocks)

    @property
    def h(self):
        return self.blocks[0].shape[1]

    @property
    def stacked(self):
        return np.concatenate(self.blocks, axis=1)


def build_cache(a, b, rule):
    """Factor z_j B - A for every quadrature node."""
    a = as_dense(a)
    b = as_dense(b)
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise ValueError(f"need a square pair, got {a.shape} and {b.shape}")
    facts = []
    for j, z in enumerate(rule.nodes):
        try:
            facts.append(lu_factor(z * b - a))
        except SingularMatrixError as exc:
            raise SingularNodeError(j, z) from exc
    return ShiftedSolveCache(rule, facts, a.shape[0])


def compute_moments(cache, b, y, g):
    """Moment blocks U_k = (1 / 2 pi i) sum_j w_j z_j^k X_j for k < g, where
    (z_j B - A) X_j = B Y. The q solves are shared by all g moments."""
    if g < 1:
        raise ValueError(f"need g >= 1 moments, got {g}")
    b = as_dense(b)
    y = as_dense(y)
    if y.shape[0] != cache.n:
        raise ValueError(f"probe block has {y.shape[0]} rows, n = {cache.n}")
    rhs = b @ y
    blocks = [np.zeros_like(y) for _ in range(g)]
    for j in range(len(cache.rule.nodes)):
        xj = cache.solve(j, rhs)
        z = cache.rule.nodes[j]
        coef = cache.rule.weights[j] / TWO_PI_I
        for k in range(g):
            blocks[k] += coef * xj
            coef = coef * z
    return MomentStack(blocks)


class CountEstimate(NamedTuple):
    s0: int
    sample: np.ndarray
    raw: float


def trace_count(y, u0):
    """Count estimate from an already-computed zeroth moment: the ceiling of
    trace(Y* U_0) / h, with a tiny guard so a zero-up-to-noise trace gives 0.
    The imaginary part should vanish in expectation; a large one is a sign of
    quadrature trouble and triggers a warning."""
    h = y.shape[1]
    tr = np.trace(y.conj().T @ u0)
    if abs(tr.imag) > 0.1 * h:
        warnings.warn(
            f"count estimate has large imaginary part {tr.imag / h:.3g} per "
            "probe column; the quadrature may be inaccurate here, or the "
            "eigenbasis strongly non-normal",
            stacklevel=2,
        )
    raw = tr.real / h
    return max(0, math.ceil(raw - _CEIL_GUARD)), raw


def estimate_count(cache, b, h0, seed, sample=None):
    """Stochastic estimate of the number of eigenvalues inside the contour.

    Draws a real standard-normal n x h0 probe (or uses ``sample``), computes
    its zeroth moment by quadrature and returns the trace estimate together
    with the probe for reuse.
    """
    if h0 < 1:
        raise ValueError(f"need h0 >= 1 probe columns, got {h0}")
    if sample is None:
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        sample = rng.standard_normal((cache.n, h0))
    y = as_dense(sample)
    u0 = compute_moments(cache, b, y, 1).blocks[0]
    s0, raw = trace_count(y, u0)
    return CountEstimate(s0, y, raw)
