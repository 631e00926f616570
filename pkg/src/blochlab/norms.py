"""Integral means, weighted-space norms, Bloch seminorms, boundary profiles.

Radial integrals are taken in the gap variable ``x = 1 - r`` on dyadic
bands ``[2**-(k+1), 2**-k]`` with Gauss-Legendre nodes inside each band,
plus a final band ``[0, 2**-K]`` on which the algebraic endpoint factor
``x**(gamma-1)`` is removed by the substitution ``x = h v**(1/gamma)``.
Dyadic bands equidistribute the mass of the boundary singularity that the
weight contributes, and band-by-band contributions expose divergent
integrands: a norm whose deepest three band contributions stop decaying is
reported as nonconvergent instead of being silently truncated.

Suprema over the disk are taken on a standard sample set (dyadic radii
plus geometric midpoints, equispaced angles) with one local golden-section
refinement pass for the global Bloch seminorm.  Boundary behaviour is
recorded as a ``BoundaryProfile``: nested suprema over the regions past an
increasing sequence of thresholds, together with the per-band suprema that
divergence detection fits its log-log slope to.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .disk_functions import DiskFunction, DomainError
from .weights import SpaceSpec

__all__ = [
    "RadialGrid",
    "DEFAULT_GRID",
    "NonConvergentError",
    "BoundaryProfile",
    "TRIGGER_Z",
    "TRIGGER_PHI",
    "boundary_profile",
    "sample_radii",
    "sample_points",
    "profile_thresholds",
    "integral_mean",
    "bergman_type_norm",
    "derivative_form_norm",
    "direct_area_integral",
    "unit_norm_mass",
    "bloch_seminorm",
    "bloch_norm",
    "little_bloch_profile",
    "is_little_bloch",
    "sw_integral_check",
    "pointwise_growth_envelope",
    "derivative_growth_envelope",
]

TRIGGER_Z = "abs_z"
TRIGGER_PHI = "abs_phi_z"

_DECAY_SLACK = 1e-12
_FLOOR = 1e-300


@dataclass(frozen=True)
class RadialGrid:
    """Resolution parameters shared by quadrature and sup searches.

    ``depth`` is the dyadic depth K (bands down to gap ``2**-K``),
    ``angular_nodes`` the number of equispaced angles (a power of two),
    ``panel_order`` the Gauss-Legendre order per radial band.
    """

    depth: int = 16
    angular_nodes: int = 512
    panel_order: int = 12

    def __post_init__(self):
        if self.depth < 4:
            raise ValueError("depth must be at least 4")
        m = self.angular_nodes
        if m < 64 or m & (m - 1):
            raise ValueError("angular_nodes must be a power of two, at least 64")
        if self.panel_order < 8:
            raise ValueError("panel_order must be at least 8")


DEFAULT_GRID = RadialGrid()


class NonConvergentError(ArithmeticError):
    """Radial band contributions stopped decaying; the integral is not
    resolved (divergent, or convergent only beyond this grid depth)."""

    def __init__(self, message: str, contributions=None):
        super().__init__(message)
        self.contributions = contributions


@lru_cache(maxsize=None)
def _gauss(order: int):
    nodes, wts = np.polynomial.legendre.leggauss(order)
    nodes.setflags(write=False)
    wts.setflags(write=False)
    return nodes, wts


@lru_cache(maxsize=None)
def _radial_rule(depth: int, order: int, gamma: float):
    """Nodes and weights in ``x`` for ``int_0^1 F(x) dx`` with
    ``F(x) = x**(gamma-1) * (slowly varying)``.

    Returns ``(x, w, band)`` where ``band`` is the dyadic band index and
    ``depth`` labels the desingularized tail band.
    """
    g, gw = _gauss(order)
    xs, ws, bands = [], [], []
    for k in range(depth):
        hi, lo = 0.5**k, 0.5 ** (k + 1)
        mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
        xs.append(mid + half * g)
        ws.append(half * gw)
        bands.append(np.full(order, k, dtype=np.intp))
    h = 0.5**depth
    v = 0.5 * (g + 1.0)
    x_tail = h * v ** (1.0 / gamma)
    w_tail = (h / gamma) * (0.5 * gw) * v ** (1.0 / gamma - 1.0)
    xs.append(x_tail)
    ws.append(w_tail)
    bands.append(np.full(order, depth, dtype=np.intp))
    x = np.concatenate(xs)
    w = np.concatenate(ws)
    band = np.concatenate(bands)
    for arr in (x, w, band):
        arr.setflags(write=False)
    return x, w, band


@lru_cache(maxsize=None)
def sample_radii(depth: int) -> np.ndarray:
    """Dyadic radii ``1 - 2**-k`` and geometric midpoints, ascending from 0."""
    k = np.arange(depth + 1)
    radii = np.unique(np.concatenate([1.0 - 0.5**k, 1.0 - 0.75 * 0.5**k]))
    radii.setflags(write=False)
    return radii


@lru_cache(maxsize=None)
def _unit_circle(m: int) -> np.ndarray:
    ring = np.exp(2j * np.pi * np.arange(m) / m)
    ring.setflags(write=False)
    return ring


@lru_cache(maxsize=None)
def sample_points(depth: int, angular_nodes: int):
    """Sample circles for sup searches: ``(radii, Z)`` with ``Z[i, j]``."""
    r = sample_radii(depth)
    z = r[:, None] * _unit_circle(angular_nodes)[None, :]
    z.setflags(write=False)
    return r, z


@lru_cache(maxsize=None)
def profile_thresholds(depth: int) -> np.ndarray:
    """Boundary thresholds ``1 - 2**-k`` for ``k = 1 .. depth``."""
    d = 1.0 - 0.5 ** np.arange(1, depth + 1)
    d.setflags(write=False)
    return d


def one_minus_sq(r: np.ndarray) -> np.ndarray:
    """``1 - r**2`` computed as ``(1-r)(1+r)`` to keep boundary precision."""
    return (1.0 - r) * (1.0 + r)


# ---------------------------------------------------------------------------
# integral means and norms


def integral_mean(f: DiskFunction, p: float, radius: float, angular_nodes: int = 512) -> float:
    """p-th integral mean of ``f`` on the circle of the given radius.

    The trapezoid rule on equispaced angles is spectrally accurate for
    these smooth periodic integrands.
    """
    if not 0.0 <= radius < 1.0:
        raise DomainError("radius must lie in [0, 1)")
    if p <= 0.0:
        raise ValueError("p must be positive")
    z = radius * _unit_circle(angular_nodes)
    return float(np.mean(np.abs(f.eval(z)) ** p) ** (1.0 / p))


def _decay_checked_total(F: np.ndarray, w: np.ndarray, band: np.ndarray, depth: int, label: str):
    contrib = np.bincount(band, weights=w * F, minlength=depth + 1)
    body = contrib[:depth]
    peak = body.max(initial=0.0)
    if peak > _FLOOR and body[-1] > 1e-14 * peak:
        s1, s2, s3 = body[-3], body[-2], body[-1]
        if s2 > s1 * (1.0 + _DECAY_SLACK) or s3 > s2 * (1.0 + _DECAY_SLACK):
            raise NonConvergentError(
                f"{label}: deepest radial band contributions do not decay "
                f"({s1:.3e}, {s2:.3e}, {s3:.3e})",
                contributions=contrib,
            )
    return float(contrib.sum()), contrib


def _angular_power_mean(values: np.ndarray, p: float) -> np.ndarray:
    return np.mean(np.abs(values) ** p, axis=1)


def _weight_power_over_gap(space: SpaceSpec, x: np.ndarray) -> np.ndarray:
    """``w(1-x)**p / x`` evaluated stably through the gap variable."""
    gamma = space.weight.alpha * space.p
    out = x ** (gamma - 1.0)
    if space.weight.log_exponent != 0.0:
        out = out * (1.0 - np.log(x)) ** (space.weight.log_exponent * space.p)
    return out


def bergman_type_norm(f: DiskFunction, space: SpaceSpec, grid: RadialGrid = DEFAULT_GRID) -> float:
    """Canonical norm ``(int_0^1 M_p^p(f, r) w(r)^p / (1-r) r dr)**(1/p)``.

    Raises ``NonConvergentError`` when the deepest band contributions stop
    decaying, which happens exactly when the integrand's boundary growth is
    not resolved at this depth.
    """
    gamma = space.weight.alpha * space.p
    x, w, band = _radial_rule(grid.depth, grid.panel_order, gamma)
    r = 1.0 - x
    z = r[:, None] * _unit_circle(grid.angular_nodes)[None, :]
    mpp = _angular_power_mean(f.eval(z), space.p)
    F = mpp * _weight_power_over_gap(space, x) * r
    total, _ = _decay_checked_total(F, w, band, grid.depth, "bergman_type_norm")
    return float(total ** (1.0 / space.p))


@lru_cache(maxsize=None)
def unit_norm_mass(space: SpaceSpec, grid: RadialGrid = DEFAULT_GRID) -> float:
    """``int_0^1 w(r)^p/(1-r) r dr``, the p-th power of the norm of 1."""
    gamma = space.weight.alpha * space.p
    x, w, band = _radial_rule(grid.depth, grid.panel_order, gamma)
    F = _weight_power_over_gap(space, x) * (1.0 - x)
    return float(np.sum(w * F))


def derivative_form_norm(f: DiskFunction, space: SpaceSpec, grid: RadialGrid = DEFAULT_GRID) -> float:
    """Derivative-based norm equivalent to :func:`bergman_type_norm`.

    ``(c0 |f(0)|^p + int_D |f'|^p (1-|z|^2)^p w^p/(1-|z|) dA)**(1/p)`` with
    normalized area measure.  The point-evaluation term is calibrated with
    ``c0 = unit_norm_mass`` so the two norm forms agree exactly on constant
    functions.
    """
    gamma = space.weight.alpha * space.p
    x, w, band = _radial_rule(grid.depth, grid.panel_order, gamma)
    r = 1.0 - x
    z = r[:, None] * _unit_circle(grid.angular_nodes)[None, :]
    mpp = _angular_power_mean(f.deriv(z), space.p)
    F = mpp * (x * (2.0 - x)) ** space.p * _weight_power_over_gap(space, x) * 2.0 * r
    total, _ = _decay_checked_total(F, w, band, grid.depth, "derivative_form_norm")
    head = unit_norm_mass(space, grid) * abs(f.eval(0.0)) ** space.p
    return float((head + total) ** (1.0 / space.p))


def direct_area_integral(f: DiskFunction, space: SpaceSpec, grid: RadialGrid = DEFAULT_GRID) -> float:
    """``int_D |f|^p w(|z|)^p / (1-|z|) dA`` with normalized area measure.

    For radial data this equals twice the p-th power of the canonical
    norm; the factor is asserted in the test suite.
    """
    gamma = space.weight.alpha * space.p
    x, w, band = _radial_rule(grid.depth, grid.panel_order, gamma)
    r = 1.0 - x
    z = r[:, None] * _unit_circle(grid.angular_nodes)[None, :]
    mpp = _angular_power_mean(f.eval(z), space.p)
    F = mpp * _weight_power_over_gap(space, x) * 2.0 * r
    total, _ = _decay_checked_total(F, w, band, grid.depth, "direct_area_integral")
    return float(total)


# ---------------------------------------------------------------------------
# sup searches


_INV_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


def _golden_max(fn, lo: float, hi: float, iters: int = 64) -> float:
    a, b = float(lo), float(hi)
    if not b > a:
        return fn(0.5 * (a + b))
    c = b - _INV_GOLDEN * (b - a)
    d = a + _INV_GOLDEN * (b - a)
    fc, fd = fn(c), fn(d)
    best = max(fc, fd)
    for _ in range(iters):
        if fc < fd:
            a, c, fc = c, d, fd
            d = a + _INV_GOLDEN * (b - a)
            fd = fn(d)
        else:
            b, d, fd = d, c, fc
            c = b - _INV_GOLDEN * (b - a)
            fc = fn(c)
        best = max(best, fc, fd)
    return best


def bloch_seminorm(f: DiskFunction, grid: RadialGrid = DEFAULT_GRID) -> float:
    """``sup (1-|z|^2) |f'(z)|`` over the sample set, with one local
    golden-section refinement in radius and then in angle."""
    radii, z = sample_points(grid.depth, grid.angular_nodes)
    g = one_minus_sq(radii)[:, None] * np.abs(f.deriv(z))
    i, j = np.unravel_index(int(np.argmax(g)), g.shape)
    grid_best = float(g[i, j])
    theta = 2.0 * np.pi * j / grid.angular_nodes

    def radial(rr: float) -> float:
        return (1.0 - rr * rr) * abs(f.deriv(rr * np.exp(1j * theta)))

    lo = radii[i - 1] if i >= 1 else 0.0
    hi = radii[i + 1] if i + 1 < radii.size else 0.5 * (1.0 + radii[i])
    best = max(grid_best, _golden_max(radial, lo, hi))

    span = 2.0 * np.pi / grid.angular_nodes
    r_best = radii[i]

    def angular(th: float) -> float:
        return (1.0 - r_best * r_best) * abs(f.deriv(r_best * np.exp(1j * th)))

    best = max(best, _golden_max(angular, theta - span, theta + span))
    return best


def bloch_norm(f: DiskFunction, grid: RadialGrid = DEFAULT_GRID) -> float:
    """``|f(0)| + sup (1-|z|^2)|f'(z)|``."""
    return abs(f.eval(0.0)) + bloch_seminorm(f, grid)


# ---------------------------------------------------------------------------
# boundary profiles


@dataclass
class BoundaryProfile:
    """Nested suprema of a quantity over shrinking boundary regions.

    ``values[k]`` is the sample supremum over the region where the trigger
    modulus exceeds ``thresholds[k]``; by construction it is nonincreasing
    wherever the region is nonempty.  ``band_values[k]`` is the supremum
    over the band between consecutive thresholds, with ``band_moduli[k]``
    the trigger modulus at which it was attained; the pairs are the signal
    for log-log slope fits (for a divergent quantity the nested values sit
    at the deepest sampled circle while the band values climb).  Empty
    regions are flagged, not zero-filled.
    """

    trigger: str
    thresholds: np.ndarray
    values: np.ndarray
    band_values: np.ndarray
    band_moduli: np.ndarray
    empty: np.ndarray

    def __post_init__(self):
        finite = np.nonzero(~self.empty)[0]
        vals = self.values[finite]
        if vals.size > 1 and np.any(np.diff(vals) > 0.0):
            raise AssertionError("nested suprema must be nonincreasing")

    @property
    def nonempty_values(self) -> np.ndarray:
        return self.values[~self.empty]

    def to_dict(self) -> dict:
        def cell(v):
            return None if not np.isfinite(v) else float(v)

        return {
            "trigger": self.trigger,
            "thresholds": [float(d) for d in self.thresholds],
            "values": [cell(v) for v in self.values],
            "band_values": [cell(v) for v in self.band_values],
            "band_moduli": [cell(v) for v in self.band_moduli],
            "empty": [bool(e) for e in self.empty],
        }


def boundary_profile(
    quantity: np.ndarray,
    trigger_modulus: np.ndarray,
    depth: int,
    trigger: str = TRIGGER_Z,
) -> BoundaryProfile:
    """Build the nested-suprema record from flat sample arrays."""
    q = np.asarray(quantity, dtype=float).ravel()
    mod = np.asarray(trigger_modulus, dtype=float).ravel()
    if q.shape != mod.shape:
        raise ValueError("quantity and trigger modulus must align")
    delta = profile_thresholds(depth)
    band_idx = np.searchsorted(delta, mod, side="left") - 1
    band_vals = np.full(depth, np.nan)
    band_mods = np.full(depth, np.nan)
    for k in range(depth):
        sel = np.nonzero(band_idx == k)[0]
        if sel.size:
            j = sel[np.argmax(q[sel])]
            band_vals[k] = q[j]
            band_mods[k] = mod[j]

    values = np.full(depth, np.nan)
    empty = np.ones(depth, dtype=bool)
    running = -np.inf
    for k in range(depth - 1, -1, -1):
        if np.isfinite(band_vals[k]):
            running = max(running, band_vals[k])
        if np.isfinite(running):
            values[k] = running
            empty[k] = False
    return BoundaryProfile(trigger, delta.copy(), values, band_vals, band_mods, empty)


def little_bloch_profile(f: DiskFunction, grid: RadialGrid = DEFAULT_GRID) -> BoundaryProfile:
    """Boundary profile of ``(1-|z|^2)|f'(z)|``, the little-Bloch tail."""
    radii, z = sample_points(grid.depth, grid.angular_nodes)
    g = one_minus_sq(radii)[:, None] * np.abs(f.deriv(z))
    mod = np.broadcast_to(radii[:, None], g.shape)
    return boundary_profile(g, mod, grid.depth, TRIGGER_Z)


LITTLE_BLOCH_REL = 1e-3
LITTLE_BLOCH_ABS = 1e-9


def is_little_bloch(profile: BoundaryProfile, seminorm: float) -> bool:
    """Tail rule: the deepest nested value sits below a relative threshold
    and the last three values do not increase."""
    vals = profile.nonempty_values
    if vals.size == 0:
        return True
    if vals.size < 3:
        return bool(vals[-1] < max(LITTLE_BLOCH_REL * seminorm, LITTLE_BLOCH_ABS))
    tail_ok = vals[-3] >= vals[-2] >= vals[-1]
    return bool(tail_ok and vals[-1] < max(LITTLE_BLOCH_REL * seminorm, LITTLE_BLOCH_ABS))


# ---------------------------------------------------------------------------
# the endpoint integral inequality


def sw_integral_check(beta: float, m: float, rho: float, grid: RadialGrid = DEFAULT_GRID):
    """Evaluate ``int_0^1 (1-r)^beta / (1-rho r)^m dr`` and the reference
    bound ``(1-rho)^(1+beta-m)``.

    Requires ``beta > -1`` and ``m > 1 + beta``.  The dyadic band depth is
    extended past the transition scale ``1-rho`` so the kernel's interior
    layer is always resolved.  Returns ``(numeric, bound_rhs)``.
    """
    beta, m, rho = float(beta), float(m), float(rho)
    if beta <= -1.0:
        raise DomainError("beta must exceed -1")
    if m <= 1.0 + beta:
        raise DomainError("m must exceed 1 + beta")
    if not 0.0 < rho < 1.0:
        raise DomainError("rho must lie in (0, 1)")
    depth = max(grid.depth, int(np.ceil(np.log2(1.0 / (1.0 - rho)))) + 12)
    x, w, band = _radial_rule(depth, grid.panel_order, beta + 1.0)
    F = x**beta * ((1.0 - rho) + rho * x) ** (-m)
    numeric = float(np.sum(w * F))
    bound = float((1.0 - rho) ** (1.0 + beta - m))
    return numeric, bound


# ---------------------------------------------------------------------------
# growth envelopes


def pointwise_growth_envelope(f: DiskFunction, space: SpaceSpec, grid: RadialGrid = DEFAULT_GRID) -> float:
    """``sup |f(z)| w(|z|) (1-|z|^2)**(1/p)`` over the sample set."""
    radii, z = sample_points(grid.depth, grid.angular_nodes)
    scale = space.weight(radii) * one_minus_sq(radii) ** (1.0 / space.p)
    return float(np.max(scale[:, None] * np.abs(f.eval(z))))


def derivative_growth_envelope(f: DiskFunction, space: SpaceSpec, grid: RadialGrid = DEFAULT_GRID) -> float:
    """``sup |f'(z)| w(|z|) (1-|z|^2)**(1/p + 1)`` over the sample set."""
    radii, z = sample_points(grid.depth, grid.angular_nodes)
    scale = space.weight(radii) * one_minus_sq(radii) ** (1.0 / space.p + 1.0)
    return float(np.max(scale[:, None] * np.abs(f.deriv(z))))
