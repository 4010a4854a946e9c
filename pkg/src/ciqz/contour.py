"""Circular target regions and quadrature rules on them.

The contour is parametrized as z(theta) = center + radius * exp(i theta) on
[0, 2pi); weights absorb the dz/dtheta factor, so
(1 / 2 pi i) * sum_j w_j f(z_j) directly approximates the contour integral
(1 / 2 pi i) * integral of f over the circle.
"""

import math
from dataclasses import dataclass, field

import numpy as np

GAUSS_LEGENDRE = "gauss-legendre"
TRAPEZOIDAL = "trapezoidal"
SCHEMES = (GAUSS_LEGENDRE, TRAPEZOIDAL)


@dataclass(frozen=True)
class Circle:
    center: complex
    radius: float

    def __post_init__(self):
        if not (self.radius > 0.0):
            raise ValueError(f"radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    scheme: str = GAUSS_LEGENDRE

    @property
    def q(self):
        return len(self.nodes)


def gauss_legendre_nodes(q, tol=1e-15, max_iter=100):
    """Nodes and weights of the q-point Gauss-Legendre rule on [-1, 1].

    Newton iteration on P_q evaluated by the three-term recurrence, started
    from the Chebyshev-like guess; standard and dependency-free.
    """
    if q < 1:
        raise ValueError(f"need q >= 1 quadrature points, got {q}")
    k = np.arange(q)
    x = np.cos(math.pi * (k + 0.75) / (q + 0.5))
    for _ in range(max_iter):
        p0 = np.ones_like(x)
        p1 = x.copy()
        if q == 1:
            pq, pq1 = p1, p0
        else:
            for deg in range(2, q + 1):
                p0, p1 = p1, ((2 * deg - 1) * x * p1 - (deg - 1) * p0) / deg
            pq, pq1 = p1, p0
        dpq = q * (x * pq - pq1) / (x * x - 1.0)
        dx = pq / dpq
        x = x - dx
        if np.max(np.abs(dx)) < tol:
            break
    # one recurrence pass at the converged nodes for the weights
    p0 = np.ones_like(x)
    p1 = x.copy()
    if q == 1:
        pq, pq1 = p1, p0
    else:
        for deg in range(2, q + 1):
            p0, p1 = p1, ((2 * deg - 1) * x * p1 - (deg - 1) * p0) / deg
        pq, pq1 = p1, p0
    dpq = q * (x * pq - pq1) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dpq * dpq)
    order = np.argsort(x)
    return x[order], w[order]


def nodes_weights(circle, q, scheme=GAUSS_LEGENDRE):
    """Quadrature rule on the circle with the dz/dtheta factor folded into
    the weights. Gauss-Legendre maps [-1, 1] affinely onto [0, 2pi];
    trapezoidal uses theta_j = 2 pi j / q with equal parametric weights."""
    if q < 1:
        raise ValueError(f"need q >= 1 quadrature points, got {q}")
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}, expected one of {SCHEMES}")
    if scheme == TRAPEZOIDAL:
        theta = 2.0 * math.pi * np.arange(q) / q
        wtheta = np.full(q, 2.0 * math.pi / q)
    else:
        x, w = gauss_legendre_nodes(q)
        theta = math.pi * (x + 1.0)
        wtheta = math.pi * w
    ring = np.exp(1j * theta)
    nodes = circle.center + circle.radius * ring
    weights = wtheta * 1j * circle.radius * ring
    return QuadratureRule(nodes, weights, scheme)


def is_inside(circle, lam):
    """Strict interior test; boundary points and the infinite flag (None)
    count as outside."""
    if lam is None:
        return False
    lam = complex(lam)
    if not (math.isfinite(lam.real) and math.isfinite(lam.imag)):
        return False
    return abs(lam - circle.center) < circle.radius
