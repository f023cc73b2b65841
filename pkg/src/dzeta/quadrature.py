"""Vertical-line contour quadrature.

All contours in this package are straight lines Re z = p with 0 < p < 1,
traversed downward (from p+i*inf to p-i*inf).  The line is parametrized as
z = p + i*tan(theta), which maps it to the finite interval (-pi/2, pi/2);
tails |f| ~ |t|^a with a < -1 become integrable endpoint singularities,
flattened by a further power substitution and integrated with tanh-sinh
panels.  Interior panels are doubled geometrically away from t = 0, with the
innermost panel width matched to the integrand's concentration scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp

from .errors import QuadratureError
from .kernel import PrecisionContext


@dataclass(frozen=True)
class ContourSpec:
    """Abscissa, truncation, node budget and scheme of one line quadrature."""

    p: float = 0.5
    T: float | None = None  # interior/endpoint-panel split height; None = auto
    nodes: int = 128
    scheme: str = "gauss-legendre"  # interior panels; endpoints always tanh-sinh

    def __post_init__(self):
        if not 0 < self.p < 1:
            raise ValueError("p must lie in (0, 1)")
        if self.T is not None and self.T < 2:
            raise ValueError("T must be >= 2")
        if self.nodes < 64:
            raise ValueError("nodes must be >= 64")
        if self.scheme not in ("gauss-legendre", "tanh-sinh"):
            raise ValueError(f"unknown scheme {self.scheme!r}")

    @property
    def maxdegree(self) -> int:
        return max(4, int(math.log2(self.nodes / 3)) + 1)


def _interior_heights(h: float, T: float) -> list[float]:
    """0 < h < 2h < 4h < ... <= T, the |t| panel boundaries."""
    out = [h]
    while out[-1] * 2 < T:
        out.append(out[-1] * 2)
    out.append(T)
    return out


def vertical_line_integral(
    ctx: PrecisionContext,
    f,
    spec: ContourSpec,
    cluster: float | None = None,
    rel_tol: float | None = None,
    tail_power: float = -4.0,
):
    """integral_{p+i inf}^{p-i inf} f(z) dz with an error estimate.

    tail_power is (an upper bound on) the exponent a in |f(p+it)| = O(|t|^a);
    it must be < -1 for convergence and controls the endpoint flattening.
    cluster sets the innermost panel width to ~cluster^(-1/2) for integrands
    concentrated near the real axis.  Returns (value, err); err sums the
    per-panel refinement estimates.
    """
    if tail_power >= -1:
        raise QuadratureError(f"tail exponent {tail_power} >= -1: divergent contour")
    p = mp.mpf(spec.p)

    def g(theta):
        th = mp.mpf(theta)
        c = mp.cos(th)
        return f(p + mp.mpc(0, 1) * mp.tan(th)) / c ** 2

    tol = mp.mpf(rel_tol if rel_tol is not None else ctx.target_tol)
    h = min(1.0, 1.0 / math.sqrt(cluster)) if cluster and cluster > 1 else 1.0
    T = float(spec.T) if spec.T is not None else max(4.0, 2 * h)

    theta_T = mp.atan(T)
    heights = _interior_heights(h, T)[:-1]
    bounds = [-theta_T]
    bounds += [-mp.atan(t) for t in reversed(heights)]
    bounds.append(mp.mpf(0))
    bounds += [mp.atan(t) for t in heights]
    bounds.append(theta_T)

    total = mp.mpc(0)
    err = mp.mpf(0)
    for a, b in zip(bounds, bounds[1:]):
        val, e = mp.quad(
            g, [a, b], method=spec.scheme, maxdegree=spec.maxdegree, error=True
        )
        total += val
        err += e

    # Endpoint panels in the shifted variable u = pi/2 -+ theta (so that
    # cos(theta) = sin(u) stays accurate down to u ~ 2^-prec), flattened by
    # u = v^k against the algebraic endpoint singularity u^(-1-tail_power-1).
    strength = -1.0 - tail_power  # g ~ u^(strength - 1) near u = 0
    k = 1 if strength >= 2 else min(64, max(1, math.ceil(2.0 / strength)))
    u1 = mp.pi / 2 - theta_T
    v1 = mp.root(u1, k) if k > 1 else u1
    for sign in (+1, -1):

        def g_end(v, sign=sign, k=k):
            u = mp.mpf(v) ** k
            su = mp.sin(u)
            val = f(p + mp.mpc(0, sign) * mp.cos(u) / su) / su ** 2
            if k > 1:
                val *= k * mp.mpf(v) ** (k - 1)
            return val

        val, e = mp.quad(
            g_end, [0, v1], method="tanh-sinh", maxdegree=spec.maxdegree, error=True
        )
        total += val
        err += e
    if abs(total) > 0 and err > 1e6 * tol * abs(total):
        raise QuadratureError(
            f"quadrature error estimate {mp.nstr(err, 5)} exceeds tolerance"
        )
    # downward traversal: dz = i dt, t from +inf to -inf
    return -mp.mpc(0, 1) * total, err
