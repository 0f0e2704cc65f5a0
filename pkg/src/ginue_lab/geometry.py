"""Spectral geometry of atomic deformation measures.

Everything here works with the four edge parameters of a probe point z0
against a finite atomic measure sum(c_a * delta(z - a)):

    P00 = sum c/|a - z0|^2        (support indicator: boundary is P00 = 1)
    P0  = sum c (a - z0)/|a - z0|^4
    P1  = sum c/|a - z0|^4
    P2  = sum c (a - z0)^2/|a - z0|^6,   chi = P2/P1

P0 is also (half) the complex gradient of P00, which is what makes the
level-set tracer and the critical-point refinement cheap: critical edge
points (P00 = 1, P0 = 0) are exactly the singular points of the boundary.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import AtomCollisionError, MeasureError, SolveError, TraceError

__all__ = [
    "SpectralMeasure",
    "EdgeParams",
    "PointClass",
    "compute_params",
    "classify",
    "solve_t0",
    "find_boundary_seed",
    "trace_boundary",
    "find_critical_points",
]

_ATOM_EPS = 1e-14


@dataclass(frozen=True)
class SpectralMeasure:
    """Finite atomic probability measure: atoms[(location, weight), ...]."""

    atoms: tuple

    def __post_init__(self):
        atoms = tuple((complex(a), float(c)) for a, c in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        if not atoms:
            raise MeasureError("measure needs at least one atom")
        weights = np.array([c for _, c in atoms])
        if np.any(weights <= 0):
            raise MeasureError("atom weights must be positive")
        if abs(weights.sum() - 1.0) > 1e-12:
            raise MeasureError(f"atom weights must sum to 1, got {weights.sum()!r}")
        locs = [a for a, _ in atoms]
        for i in range(len(locs)):
            for j in range(i + 1, len(locs)):
                if abs(locs[i] - locs[j]) <= _ATOM_EPS:
                    raise MeasureError(f"atom locations must be distinct, got {locs[i]} twice")

    @property
    def locations(self) -> np.ndarray:
        return np.array([a for a, _ in self.atoms], dtype=complex)

    @property
    def weights(self) -> np.ndarray:
        return np.array([c for _, c in self.atoms], dtype=float)

    @classmethod
    def symmetric_pair(cls, a: complex) -> "SpectralMeasure":
        """Two atoms at +-a with weight 1/2 each."""
        return cls(((complex(a), 0.5), (-complex(a), 0.5)))

    def shifted(self, b: complex) -> "SpectralMeasure":
        """Measure with every atom translated by b."""
        return SpectralMeasure(tuple((a + b, c) for a, c in self.atoms))


@dataclass(frozen=True)
class EdgeParams:
    z0: complex
    p00: float
    p0: complex
    p1: float
    p2: complex
    chi: complex


class PointClass(enum.Enum):
    BULK = "Bulk"
    REGULAR_EDGE = "RegularEdge"
    CRITICAL_EDGE = "CriticalEdge"
    EXTERIOR = "Exterior"


def _diffs(measure: SpectralMeasure, z0: complex):
    d = measure.locations - z0
    r2 = np.abs(d) ** 2
    if np.any(np.sqrt(r2) < _ATOM_EPS):
        raise AtomCollisionError(f"probe point {z0} coincides with an atom")
    return d, r2, measure.weights


def compute_params(measure: SpectralMeasure, z0: complex) -> EdgeParams:
    """Exact finite sums for (P00, P0, P1, P2, chi) at z0."""
    z0 = complex(z0)
    d, r2, c = _diffs(measure, z0)
    p00 = float(np.sum(c / r2))
    p0 = complex(np.sum(c * d / r2**2))
    p1 = float(np.sum(c / r2**2))
    p2 = complex(np.sum(c * d**2 / r2**3))
    return EdgeParams(z0=z0, p00=p00, p0=p0, p1=p1, p2=p2, chi=p2 / p1)


def classify(measure: SpectralMeasure, z0: complex, tol: float = 1e-8) -> PointClass:
    """Bulk / RegularEdge / CriticalEdge / Exterior at probe z0."""
    p = compute_params(measure, z0)
    if p.p00 > 1.0 + tol:
        return PointClass.BULK
    if p.p00 < 1.0 - tol:
        return PointClass.EXTERIOR
    if abs(p.p0) > tol:
        return PointClass.REGULAR_EDGE
    return PointClass.CRITICAL_EDGE


def solve_t0(measure: SpectralMeasure, z0: complex, tau: float) -> float:
    """Unique t0 >= 0 with sum c/(|a - z0|^2 + t0) = 1/tau, by bisection."""
    if tau <= 0:
        raise SolveError("tau must be positive")
    _, r2, c = _diffs(measure, complex(z0))

    def g(t):
        return float(np.sum(c / (r2 + t)) - 1.0 / tau)

    g0 = g(0.0)
    if g0 < -1e-12:
        raise SolveError(
            f"sum c/|a-z0|^2 = {g0 + 1.0 / tau:.6g} is below 1/tau = {1.0 / tau:.6g}; "
            "no nonnegative solution"
        )
    if g0 <= 0.0:
        return 0.0
    hi = 1.0
    while g(hi) > 0.0:
        hi *= 2.0
        if hi > 1e300:
            raise SolveError("bisection bracket for t0 did not close")
    lo = 0.0
    # g is strictly decreasing; bisect until the residual is pinned
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if abs(g(mid)) < 1e-12:
            return mid
        if g(mid) > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-300:
            break
    t0 = 0.5 * (lo + hi)
    if abs(g(t0)) >= 1e-12:
        raise SolveError(f"t0 bisection stalled at residual {g(t0):.3g}")
    return t0


# ---------------------------------------------------------------------------
# boundary tracing


def _p00_grad(measure, z):
    """(P00(z) - 1, complex gradient of P00 at z).  grad P00 = 2*P0(z)."""
    d, r2, c = _diffs(measure, z)
    p00 = float(np.sum(c / r2))
    p0 = complex(np.sum(c * d / r2**2))
    return p00 - 1.0, 2.0 * p0


def _correct_to_level(measure, z, max_step, tol=1e-13, iters=60):
    """Newton iterations on P00 = 1 along the gradient direction."""
    z = complex(z)
    start = z
    for _ in range(iters):
        f, g = _p00_grad(measure, z)
        if abs(f) < tol:
            return z
        g2 = abs(g) ** 2
        if g2 < 1e-18:  # near a pinch point the gradient vanishes
            return z
        dz = -f * g / g2
        if abs(dz) > max_step:
            dz *= max_step / abs(dz)
        z = z + dz
        if abs(z - start) > 4 * max_step:
            break
    return z


def find_boundary_seed(measure: SpectralMeasure, from_point: complex,
                       direction: complex = 1.0 + 0.0j, step: float = 0.01) -> complex:
    """March radially from a bulk point until P00 crosses 1, then bisect.

    ``from_point`` is typically an atom; the march starts just off it where
    P00 is far above 1.
    """
    direction = complex(direction) / abs(complex(direction))
    scale = 1.0 + float(np.max(np.abs(measure.locations)))
    t_lo = 1e-9 * scale
    t = t_lo

    def f(tt):
        return _p00_grad(measure, from_point + tt * direction)[0]

    while f(t) > 0.0:
        t_lo = t
        t += step
        if t > 50.0 * scale:
            raise SolveError("radial march found no P00 = 1 crossing")
    t_hi = t
    for _ in range(200):
        mid = 0.5 * (t_lo + t_hi)
        if f(mid) > 0.0:
            t_lo = mid
        else:
            t_hi = mid
        if t_hi - t_lo < 1e-15 * scale:
            break
    z = from_point + 0.5 * (t_lo + t_hi) * direction
    return _correct_to_level(measure, z, max_step=step)


def trace_boundary(measure: SpectralMeasure, seed: complex, step: float,
                   max_points: int = 50000) -> np.ndarray:
    """Trace the closed level curve P00 = 1 through ``seed``.

    Predictor along the tangent (the gradient rotated by 90 degrees),
    corrector by Newton on P00 - 1 in the gradient direction.  Returns the
    polyline as a complex array; the last point is within ``step`` of the
    first when the trace closed.
    """
    if step <= 0:
        raise TraceError("step must be positive")
    z = _correct_to_level(measure, complex(seed), max_step=step)
    f0, g0 = _p00_grad(measure, z)
    if abs(f0) > 1e-6:
        raise TraceError(f"seed is not within reach of the level set (P00-1 = {f0:.3g})")
    if abs(g0) < 1e-18:
        raise TraceError("cannot start a trace at a singular boundary point")
    tangent = 1j * g0 / abs(g0)
    pts = [z]
    start = z
    for _ in range(max_points):
        pred = z + step * tangent
        znew = _correct_to_level(measure, pred, max_step=step)
        if abs(znew - z) > 2.0 * step:
            # corrector wandered; retry with a shorter predictor
            ok = False
            sub = step
            for _ in range(6):
                sub *= 0.5
                znew = _correct_to_level(measure, z + sub * tangent, max_step=sub)
                if abs(znew - z) <= 2.0 * step:
                    ok = True
                    break
            if not ok:
                raise TraceError("corrector diverged", partial=np.array(pts))
        _, g = _p00_grad(measure, znew)
        if abs(g) >= 1e-18:
            new_tangent = 1j * g / abs(g)
            if (new_tangent.conjugate() * tangent).real < 0:
                new_tangent = -new_tangent
            tangent = new_tangent
        pts.append(znew)
        z = znew
        if len(pts) > 3 and abs(z - start) < step:
            return np.array(pts)
    raise TraceError("trace did not close within the point budget", partial=np.array(pts))


def _hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    d = np.abs(a[:, None] - b[None, :])
    return max(float(d.min(axis=1).max()), float(d.min(axis=0).max()))


def boundary_components(measure: SpectralMeasure, step: float = 0.01):
    """All distinct boundary components, seeded radially from every atom."""
    comps = []
    for a in measure.locations:
        seed = find_boundary_seed(measure, a, step=step)
        trace = trace_boundary(measure, seed, step)
        if any(_hausdorff(trace, c) < step for c in comps):
            continue
        comps.append(trace)
    return comps


def _refine_critical(measure, z, step, iters=40):
    """Gauss-Newton on (P00 - 1, Re P0, Im P0) with analytic Jacobian."""
    z = complex(z)
    for _ in range(iters):
        d, r2, c = _diffs(measure, z)
        p00 = float(np.sum(c / r2))
        p0 = complex(np.sum(c * d / r2**2))
        p1 = float(np.sum(c / r2**2))
        p2 = complex(np.sum(c * d**2 / r2**3))
        res = np.array([p00 - 1.0, p0.real, p0.imag])
        if np.linalg.norm(res) < 1e-15:
            break
        # Wirtinger: dP00/dzbar = P0, dP0/dz = P1, dP0/dzbar = 2*P2
        dx_p0 = p1 + 2.0 * p2
        dy_p0 = 1j * (p1 - 2.0 * p2)
        jac = np.array(
            [
                [2.0 * p0.real, 2.0 * p0.imag],
                [dx_p0.real, dy_p0.real],
                [dx_p0.imag, dy_p0.imag],
            ]
        )
        delta, *_ = np.linalg.lstsq(jac, -res, rcond=None)
        dz = complex(delta[0], delta[1])
        if abs(dz) > 5.0 * step:
            dz *= 5.0 * step / abs(dz)
        z = z + dz
        if abs(dz) < 1e-16:
            break
    return z


def find_critical_points(measure: SpectralMeasure, step: float = 0.005,
                         tol: float = 1e-8):
    """All boundary points with P0 = 0, each returned with its EdgeParams.

    Traces every boundary component, locates the local minima of |P0| along
    each polyline, refines them by Gauss-Newton on (P00 - 1, P0), and keeps
    refined points satisfying |P00 - 1| <= tol and |P0| <= tol.
    """
    scale = 1.0 + float(np.max(np.abs(measure.locations)))
    found = []
    for comp in boundary_components(measure, step=step):
        d = measure.locations[None, :] - comp[:, None]
        r2 = np.abs(d) ** 2
        absp0 = np.abs(np.sum(measure.weights[None, :] * d / r2**2, axis=1))
        n = len(comp)
        for i in range(n):
            if absp0[i] <= absp0[(i - 1) % n] and absp0[i] <= absp0[(i + 1) % n]:
                z = _refine_critical(measure, comp[i], step)
                try:
                    p = compute_params(measure, z)
                except AtomCollisionError:
                    continue
                if abs(p.p00 - 1.0) <= tol and abs(p.p0) <= tol:
                    if not any(abs(z - w) < 1e-6 * scale for w, _ in found):
                        found.append((z, p))
    return found
