"""Brute-force corroboration of the classifier verdicts.

Two explicit kernel families act as boundary test functions: a
normalized kernel whose norms stay uniformly bounded over the base
point sweep, and a pinned kernel difference that vanishes at a chosen
image point while its derivative matches the derivative growth envelope
there.  Applying the operator to these families yields numerical lower
bounds on the operator norm; whether those bounds stabilize or keep
growing as the family chases the boundary is the oracle's verdict, kept
deliberately independent of the criterion quotients.  Disagreement with
the classifier is reported, never auto-resolved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .disk_functions import (
    ComposedWithSelfMap,
    DiskFunction,
    DomainError,
    FractionalKernel,
    PowerSeries,
    Product,
    Scaled,
)
from .norms import (
    DEFAULT_GRID,
    RadialGrid,
    _gauss,
    _radial_rule,
    _weight_power_over_gap,
    bergman_type_norm,
    bloch_norm,
    bloch_seminorm,
)
from .criteria import SymbolPair
from .weights import SpaceSpec

__all__ = [
    "boundary_test_function",
    "vanishing_test_function",
    "operator_apply",
    "TestFamily",
    "kernel_family_norm",
    "operator_lower_bound",
    "LowerBoundTrend",
    "lower_bound_trend",
    "CompactnessProbe",
    "compactness_probe",
    "chain_constant",
    "boundary_chase_point",
]

TREND_STABLE = "stable"
TREND_DIVERGENT = "divergent"
TREND_AMBIGUOUS = "ambiguous"


def _bloch_norm_probed(g: DiskFunction, grid: RadialGrid, probe_z: complex) -> float:
    """``|g(0)| + B(g)`` where the seminorm is the sample-grid supremum
    sharpened by the value at a known probe point.

    ``(1-|z|^2)|g'(z)|`` at any single point is a valid lower bound for
    the supremum; probing where the chase landed keeps the bound honest
    when the peak is narrower than the angular resolution.
    """
    semi = bloch_seminorm(g, grid)
    pz = complex(probe_z)
    semi = max(semi, (1.0 - abs(pz) ** 2) * abs(g.deriv(pz)))
    return abs(g.eval(0.0)) + semi


def boundary_test_function(w: complex, space: SpaceSpec) -> FractionalKernel:
    """Normalized kernel with base point ``w``:

    ``(1-|w|^2)**(t+1) / (w(|w|) (1 - conj(w) z)**(1/p + t + 1))``

    using the weight's stored witness ``t``.  Norms stay uniformly bounded
    as ``|w|`` sweeps to the boundary, which is what makes the family a
    usable operator-norm probe.
    """
    w = complex(w)
    if abs(w) >= 1.0:
        raise DomainError("base point must lie in the open unit disk")
    t = space.weight.t
    gap = 1.0 - abs(w) ** 2
    scale = gap ** (t + 1.0) / space.weight(abs(w))
    return FractionalKernel(w, 1.0 / space.p + t + 1.0, scale)


def vanishing_test_function(image_point: complex, space: SpaceSpec) -> DiskFunction:
    """Kernel difference that vanishes at ``image_point`` while its
    derivative there equals
    ``conj(q) / (w(|q|) (1-|q|^2)**(1 + 1/p))`` for ``q = image_point``.

    Algebraically the difference of the two kernels with exponents
    ``1/p+t+2`` and ``1/p+t+1`` factors as ``s (conj(q) z - |q|^2)``
    times the steeper kernel; the factored form is used so the vanishing
    at the base point survives floating point even when the kernel terms
    themselves are huge.
    """
    q = complex(image_point)
    if abs(q) >= 1.0:
        raise DomainError("image point must lie in the open unit disk")
    t = space.weight.t
    gap = 1.0 - (np.conj(q) * q).real
    wq = space.weight(abs(q))
    if q == 0.0:
        # both kernels collapse to the same constant; the difference is 0
        return Scaled(0.0, FractionalKernel(0.0, 1.0 / space.p + t + 1.0, 1.0 / wq))
    pinch = PowerSeries([-q, 1.0])  # z - q, exactly zero at the base point
    steep = FractionalKernel(q, 1.0 / space.p + t + 2.0, np.conj(q) * gap ** (t + 1.0) / wq)
    return Product(pinch, steep)


def operator_apply(sym: SymbolPair, f: DiskFunction) -> DiskFunction:
    """``u * (f o phi)`` as a disk function with closed-form derivative."""
    return Product(sym.u, ComposedWithSelfMap(f, sym.phi))


@dataclass(eq=False)
class TestFamily:
    """A finite family of probe functions in a fixed space."""

    __test__ = False  # not a pytest class, despite the name

    kind: str  # "kernel" | "vanishing" | "monomials" | "custom"
    parameters: tuple
    space: SpaceSpec
    functions: tuple = ()

    def members(self) -> tuple:
        if self.kind == "kernel":
            return tuple(boundary_test_function(w, self.space) for w in self.parameters)
        if self.kind == "vanishing":
            return tuple(vanishing_test_function(q, self.space) for q in self.parameters)
        if self.kind == "monomials":
            out = []
            for n in self.parameters:
                coeffs = np.zeros(int(n) + 1, dtype=complex)
                coeffs[int(n)] = 1.0
                out.append(PowerSeries(coeffs))
            return tuple(out)
        if self.kind == "custom":
            return self.functions
        raise ValueError(f"unknown family kind {self.kind!r}")


def kernel_family_norm(base_modulus: float, space: SpaceSpec, grid: RadialGrid = DEFAULT_GRID) -> float:
    """Norm of the normalized boundary kernel with ``|base| = base_modulus``.

    The norm depends on the base point only through its modulus, and the
    angular integrand ``|1 - s e^(i theta)|**(-p q)`` has a single peak at
    ``theta = 0`` whose width shrinks with the boundary gap; equispaced
    angles alias it badly once the gap falls below the angular spacing.
    This routine therefore integrates the angle on dyadic panels clustered
    at the peak (Gauss-Legendre inside each), which stays accurate for
    base points far deeper than the uniform grid could resolve.  Radial
    treatment matches the generic norm quadrature.
    """
    s_mod = float(base_modulus)
    if not 0.0 <= s_mod < 1.0:
        raise DomainError("base modulus must lie in [0, 1)")
    t = space.weight.t
    gap_w = 1.0 - s_mod**2
    scale = gap_w ** (t + 1.0) / space.weight(s_mod)
    pq = space.p * (1.0 / space.p + t + 1.0)

    depth = max(grid.depth, int(np.ceil(np.log2(1.0 / max(1.0 - s_mod, 1e-300)))) + 8)
    x, w, _ = _radial_rule(depth, grid.panel_order, space.weight.alpha * space.p)
    r = 1.0 - x
    s = r * s_mod

    # dyadic angular panels [pi 2^-(j+1), pi 2^-j] down past the peak width
    j_max = int(np.ceil(np.log2(np.pi / max(1.0 - s.max(), 1e-300)))) + 6
    g, gw = _gauss(grid.panel_order)
    theta_nodes, theta_wts = [], []
    for j in range(j_max):
        hi, lo = np.pi * 0.5**j, np.pi * 0.5 ** (j + 1)
        mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
        theta_nodes.append(mid + half * g)
        theta_wts.append(half * gw)
    flat = np.pi * 0.5**j_max
    theta_nodes.append(0.5 * flat * (g + 1.0))
    theta_wts.append(0.5 * flat * gw)
    theta = np.concatenate(theta_nodes)
    tw = np.concatenate(theta_wts)

    # |1 - s e^{i theta}|^2 without boundary cancellation
    dist_sq = (1.0 - s[:, None]) ** 2 + 4.0 * s[:, None] * np.sin(0.5 * theta[None, :]) ** 2
    mean = (dist_sq ** (-0.5 * pq) @ tw) / np.pi
    F = mean * _weight_power_over_gap(space, x) * r
    return float(scale * np.sum(w * F) ** (1.0 / space.p))


def operator_lower_bound(
    sym: SymbolPair,
    space: SpaceSpec,
    family: TestFamily,
    grid: RadialGrid = DEFAULT_GRID,
    norm_grid: RadialGrid | None = None,
) -> float:
    """``max_f ||u (f o phi)||_B / ||f||`` over the family: a numerical
    lower bound for the operator norm."""
    norm_grid = norm_grid or grid
    best = 0.0
    for f in family.members():
        denom = bergman_type_norm(f, space, norm_grid)
        if denom == 0.0:
            continue
        best = max(best, bloch_norm(operator_apply(sym, f), grid) / denom)
    return best


def boundary_chase_point(phi, depth: int, angular_nodes: int = 256) -> complex:
    """Point on the circle of radius ``1 - 2**-depth`` where ``|phi|`` is
    largest (angular grid argmax followed by a golden-section pass)."""
    r = 1.0 - 0.5**depth
    theta = 2.0 * np.pi * np.arange(angular_nodes) / angular_nodes
    z = r * np.exp(1j * theta)
    mods = np.abs(phi.eval(z))
    j = int(np.argmax(mods))

    def along(th: float) -> float:
        return abs(phi.eval(r * np.exp(1j * th)))

    span = 2.0 * np.pi / angular_nodes
    lo, hi = theta[j] - span, theta[j] + span
    best_th = theta[j]
    best = mods[j]
    # golden pass on the angle, then keep the better of grid and refined
    a, b = lo, hi
    inv = (np.sqrt(5.0) - 1.0) / 2.0
    c, d = b - inv * (b - a), a + inv * (b - a)
    fc, fd = along(c), along(d)
    for _ in range(48):
        if fc < fd:
            a, c, fc = c, d, fd
            d = a + inv * (b - a)
            fd = along(d)
        else:
            b, d, fd = d, c, fc
            c = b - inv * (b - a)
            fc = along(c)
        for th, val in ((c, fc), (d, fd)):
            if val > best:
                best, best_th = val, th
    return r * np.exp(1j * best_th)


@dataclass
class LowerBoundTrend:
    depths: tuple
    values: tuple
    classification: str
    chase_depths: tuple = ()
    member_ratios: tuple = ()

    def to_dict(self) -> dict:
        return {
            "depths": [int(d) for d in self.depths],
            "values": [float(v) for v in self.values],
            "classification": self.classification,
            "chase_depths": [int(k) for k in self.chase_depths],
            "member_ratios": [float(v) for v in self.member_ratios],
        }


def lower_bound_trend(
    sym: SymbolPair,
    space: SpaceSpec,
    grid: RadialGrid = DEFAULT_GRID,
    depths: tuple = (6, 9, 12),
) -> LowerBoundTrend:
    """Lower bounds from kernel families chasing the boundary of the image.

    Base points are ``phi`` evaluated at per-circle argmax points of
    ``|phi|``; the family deepens with ``depths`` and the bound either
    stabilizes (bounded evidence) or keeps climbing (unbounded evidence).
    """
    depths = tuple(sorted(int(d) for d in depths))
    max_depth = depths[-1]
    ks = tuple(range(2, max_depth + 1))
    ratios = []
    for k in ks:
        z_star = boundary_chase_point(sym.phi, k, grid.angular_nodes)
        w = complex(sym.phi.eval(z_star))
        f = boundary_test_function(w, space)
        denom = kernel_family_norm(abs(w), space, grid)
        if denom == 0.0:
            ratios.append(0.0)
            continue
        ratios.append(_bloch_norm_probed(operator_apply(sym, f), grid, z_star) / denom)
    ratios = tuple(ratios)
    values = tuple(max(ratios[: d - 1], default=0.0) for d in depths)
    classification = _classify_trend(values)
    return LowerBoundTrend(depths, values, classification, ks, ratios)


def _classify_trend(values) -> str:
    v = list(values)
    if len(v) < 3 or max(v) == 0.0:
        return TREND_STABLE if max(v, default=0.0) == 0.0 else TREND_AMBIGUOUS
    r1 = v[-2] / v[-3] if v[-3] > 0 else np.inf
    r2 = v[-1] / v[-2] if v[-2] > 0 else np.inf
    if r1 > 1.2 and r2 > 1.2:
        return TREND_DIVERGENT
    if r2 <= 1.05:
        return TREND_STABLE
    return TREND_AMBIGUOUS


@dataclass
class CompactnessProbe:
    kind: str  # "vacuous" | "probe"
    depths: tuple
    kernel_values: tuple
    vanishing_values: tuple
    trend: str

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "depths": [int(k) for k in self.depths],
            "kernel_values": [float(v) for v in self.kernel_values],
            "vanishing_values": [float(v) for v in self.vanishing_values],
            "trend": self.trend,
        }


def _sequence_trend(values) -> str:
    v = np.asarray(values, dtype=float)
    if v.size == 0 or np.all(v == 0.0):
        return "zero"
    peak = float(v.max())
    if v[-1] < max(0.05 * peak, 1e-9) and v.size >= 3 and v[-3] >= v[-2] >= v[-1]:
        return "decaying"
    if float(v[-3:].min()) >= 0.25 * peak:
        return "bounded_away"
    return "ambiguous"


def compactness_probe(
    sym: SymbolPair,
    space: SpaceSpec,
    grid: RadialGrid = DEFAULT_GRID,
    max_depth: int = 12,
) -> CompactnessProbe:
    """Apply the operator to boundary-chasing probe sequences and report
    the size trend of the image Bloch norms.

    With no boundary-approaching sequence available (structural sup bound
    below 1) the probe is vacuous.  A decaying trend corroborates
    compactness, a trend bounded away from zero corroborates the
    opposite; both are evidence, not proof.
    """
    if sym.phi.sup_norm_estimate < 1.0:
        return CompactnessProbe("vacuous", (), (), (), "vacuous")
    ks = tuple(range(2, max_depth + 1))
    f_vals, g_vals = [], []
    for k in ks:
        z_star = boundary_chase_point(sym.phi, k, grid.angular_nodes)
        w = complex(sym.phi.eval(z_star))
        f_vals.append(_bloch_norm_probed(operator_apply(sym, boundary_test_function(w, space)), grid, z_star))
        g_vals.append(_bloch_norm_probed(operator_apply(sym, vanishing_test_function(w, space)), grid, z_star))
    tf, tg = _sequence_trend(f_vals), _sequence_trend(g_vals)
    if tf == "zero" and tg == "zero":
        trend = "zero"
    elif "bounded_away" in (tf, tg):
        trend = "bounded_away"
    elif tf in ("decaying", "zero") and tg in ("decaying", "zero"):
        trend = "decaying"
    else:
        trend = "ambiguous"
    return CompactnessProbe("probe", ks, tuple(f_vals), tuple(g_vals), trend)


def chain_constant(
    sym: SymbolPair,
    space: SpaceSpec,
    functions,
    grid: RadialGrid,
    sup_multiplier: float,
    sup_composition: float,
) -> float | None:
    """Empirical constant in ``B(u (f o phi)) <= C (S1 + S2) ||f||`` over a
    battery of functions, given finite criterion suprema ``S1, S2``."""
    total = sup_multiplier + sup_composition
    if not np.isfinite(total) or total == 0.0:
        return None
    best = 0.0
    for f in functions:
        denom = bergman_type_norm(f, space, grid) * total
        if denom == 0.0:
            continue
        best = max(best, bloch_seminorm(operator_apply(sym, f), grid) / denom)
    return best
