"""Criterion quantities and classifiers for the weighted composition
operator ``f -> u * (f o phi)`` mapping into the Bloch spaces.

Two quantities drive everything, evaluated pointwise on the disk with the
space weight ``w`` and exponent ``p``:

* multiplier quotient   ``(1-|z|^2) |u'(z)| / (w(|phi(z)|) (1-|phi(z)|^2)**(1/p))``
* composition quotient  ``(1-|z|^2) |u(z) phi'(z)| / (w(|phi(z)|) (1-|phi(z)|^2)**(1+1/p))``

Boundedness into the Bloch space holds iff both have finite supremum;
compactness (given boundedness) iff both tend to zero as ``|phi(z)| -> 1``;
the little-Bloch variants replace the trigger by ``|z| -> 1`` and add tail
conditions on ``u`` itself.  Verdicts are tri-state: a dead zone between
the divergence and stabilization tests is reported as Inconclusive rather
than guessed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .disk_functions import DiskFunction, SelfMap
from .norms import (
    DEFAULT_GRID,
    TRIGGER_PHI,
    TRIGGER_Z,
    BoundaryProfile,
    RadialGrid,
    bloch_seminorm,
    boundary_profile,
    is_little_bloch,
    little_bloch_profile,
    one_minus_sq,
    profile_thresholds,
    sample_points,
)
from .weights import SpaceSpec

__all__ = [
    "SymbolPair",
    "Status",
    "Verdict",
    "PreconditionUnmetError",
    "MULTIPLIER_QUANTITY",
    "COMPOSITION_QUANTITY",
    "multiplier_quotient",
    "composition_quotient",
    "criterion_profile",
    "BoundednessResult",
    "CompactnessResult",
    "LittleBlochBoundedness",
    "LittleBlochCompactness",
    "EquivalenceProbe",
    "classify_bounded_into_bloch",
    "classify_compact_into_bloch",
    "classify_bounded_into_little_bloch",
    "classify_compact_into_little_bloch",
    "little_bloch_verdict",
    "derivative_limit_probe",
    "composition_limit_probe",
    "bergman_specialization_ratio",
]

SLOPE_FAIL = 0.05
SLOPE_HOLD = 0.01
STABLE_REL = 0.02
LIMIT_REL = 1e-3
LIMIT_ABS = 1e-9

MULTIPLIER_QUANTITY = "u_prime"
COMPOSITION_QUANTITY = "u_phi_prime"

_PHI_CLIP = 1.0 - 1e-16  # guards double rounding of |phi| at extreme radii


class PreconditionUnmetError(RuntimeError):
    """A compactness classifier was invoked without a boundedness verdict."""


@dataclass(frozen=True, eq=False)
class SymbolPair:
    """Multiplier ``u`` and self-map ``phi`` inducing ``f -> u (f o phi)``."""

    u: DiskFunction
    phi: SelfMap


class Status(str, Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class Verdict:
    quantity: str
    status: Status
    sup_estimate: float
    divergence_slope: float | None
    profile: BoundaryProfile | None
    notes: str = ""

    def to_dict(self) -> dict:
        sup = "Divergent" if math.isinf(self.sup_estimate) else float(self.sup_estimate)
        return {
            "quantity": self.quantity,
            "status": self.status.value,
            "sup_estimate": sup,
            "divergence_slope": None if self.divergence_slope is None else float(self.divergence_slope),
            "profile": None if self.profile is None else self.profile.to_dict(),
            "notes": self.notes,
        }


# ---------------------------------------------------------------------------
# pointwise quantities


def _denominator(space: SpaceSpec, phi_mod: np.ndarray, power: float) -> np.ndarray:
    return space.weight(phi_mod) * one_minus_sq(phi_mod) ** power


def multiplier_quotient(z, sym: SymbolPair, space: SpaceSpec):
    """``(1-|z|^2)|u'| / (w(|phi|)(1-|phi|^2)**(1/p))`` at ``z``."""
    du = np.abs(sym.u.deriv(z))
    pm = np.minimum(np.abs(np.asarray(sym.phi.eval(z))), _PHI_CLIP)
    num = one_minus_sq(np.abs(np.asarray(z, dtype=complex))) * du
    out = num / _denominator(space, pm, 1.0 / space.p)
    return float(out) if np.ndim(z) == 0 else out


def composition_quotient(z, sym: SymbolPair, space: SpaceSpec):
    """``(1-|z|^2)|u phi'| / (w(|phi|)(1-|phi|^2)**(1+1/p))`` at ``z``."""
    prod = np.abs(np.asarray(sym.u.eval(z)) * np.asarray(sym.phi.deriv(z)))
    pm = np.minimum(np.abs(np.asarray(sym.phi.eval(z))), _PHI_CLIP)
    num = one_minus_sq(np.abs(np.asarray(z, dtype=complex))) * prod
    out = num / _denominator(space, pm, 1.0 + 1.0 / space.p)
    return float(out) if np.ndim(z) == 0 else out


@dataclass
class _SymbolSamples:
    """Both quotients and the plain numerators over the sample circles."""

    abs_z: np.ndarray
    abs_phi: np.ndarray
    multiplier: np.ndarray
    composition: np.ndarray
    plain_multiplier: np.ndarray  # (1-|z|^2)|u'|
    plain_composition: np.ndarray  # (1-|z|^2)|u phi'|

    def quantity(self, name: str) -> np.ndarray:
        return {MULTIPLIER_QUANTITY: self.multiplier, COMPOSITION_QUANTITY: self.composition}[name]

    def modulus(self, trigger: str) -> np.ndarray:
        return self.abs_z if trigger == TRIGGER_Z else self.abs_phi


def _symbol_samples(sym: SymbolPair, space: SpaceSpec, grid: RadialGrid) -> _SymbolSamples:
    radii, z = sample_points(grid.depth, grid.angular_nodes)
    omr2 = one_minus_sq(radii)[:, None]
    du = np.abs(sym.u.deriv(z))
    uv = sym.u.eval(z)
    pv = sym.phi.eval(z)
    dp = sym.phi.deriv(z)
    pm = np.minimum(np.abs(pv), _PHI_CLIP)
    wgt = space.weight(pm)
    gap = one_minus_sq(pm)
    plain_mult = omr2 * du
    plain_comp = omr2 * np.abs(uv * dp)
    q_mult = plain_mult / (wgt * gap ** (1.0 / space.p))
    q_comp = plain_comp / (wgt * gap ** (1.0 + 1.0 / space.p))
    abs_z = np.broadcast_to(radii[:, None], z.shape)
    return _SymbolSamples(
        abs_z=abs_z.ravel(),
        abs_phi=pm.ravel(),
        multiplier=q_mult.ravel(),
        composition=q_comp.ravel(),
        plain_multiplier=plain_mult.ravel(),
        plain_composition=plain_comp.ravel(),
    )


def criterion_profile(
    quantity: str,
    sym: SymbolPair,
    space: SpaceSpec,
    trigger: str = TRIGGER_Z,
    grid: RadialGrid = DEFAULT_GRID,
) -> BoundaryProfile:
    """Boundary profile of the chosen quotient, triggered by ``|z|`` or
    ``|phi(z)|``.  Regions the image never reaches come back flagged empty."""
    samples = _symbol_samples(sym, space, grid)
    return boundary_profile(samples.quantity(quantity), samples.modulus(trigger), grid.depth, trigger)


# ---------------------------------------------------------------------------
# verdict rules


def _band_slope(profile: BoundaryProfile) -> float | None:
    """Log-log slope of the deepest band suprema against ``1/(1-modulus)``,
    the modulus being the one at which each band supremum was attained.

    Uses up to the last four bands with finite positive values; at least
    three are required for a trustworthy fit.
    """
    finite = np.nonzero(
        np.isfinite(profile.band_values)
        & (profile.band_values > 0.0)
        & (profile.band_moduli < 1.0)
    )[0]
    if finite.size < 3:
        return None
    idx = finite[-4:]
    x = np.log(1.0 / (1.0 - profile.band_moduli[idx]))
    y = np.log(profile.band_values[idx])
    if np.ptp(x) < 1e-9:
        return None
    return float(np.polyfit(x, y, 1)[0])


def _band_growing(profile: BoundaryProfile) -> bool:
    finite = np.nonzero(np.isfinite(profile.band_values) & (profile.band_values > 0.0))[0]
    if finite.size < 3:
        return False
    idx = finite[-4:]
    return bool(profile.band_values[idx[-1]] > profile.band_values[idx[0]])


def _sup_type_verdict(
    name: str,
    profile: BoundaryProfile,
    quantity: np.ndarray,
    modulus: np.ndarray,
    depth: int,
) -> Verdict:
    """Finite-sup test: fail on a sustained positive log-log slope, hold
    when the slope is flat-or-negative and the running supremum has
    stabilized away from the deepest bands."""
    global_sup = float(quantity.max(initial=0.0))
    if global_sup == 0.0:
        return Verdict(name, Status.HOLDS, 0.0, None, profile, "quantity vanishes identically")
    slope = _band_slope(profile)
    inner_cut = profile_thresholds(depth)[depth - 4]
    inner = quantity[modulus <= inner_cut]
    inner_sup = float(inner.max(initial=0.0))
    stabilized = global_sup <= inner_sup * (1.0 + STABLE_REL)
    if slope is not None and slope > SLOPE_FAIL and _band_growing(profile):
        return Verdict(
            name, Status.FAILS, math.inf, slope, profile,
            f"band suprema grow with slope {slope:.3f}; sample sup {global_sup:.6g}",
        )
    if (slope is None or slope < SLOPE_HOLD) and stabilized:
        return Verdict(name, Status.HOLDS, global_sup, slope, profile, "")
    return Verdict(
        name, Status.INCONCLUSIVE, global_sup, slope, profile,
        "neither sustained divergence nor stabilized supremum at this depth",
    )


def _limit_type_verdict(name: str, profile: BoundaryProfile, vacuous: bool = False) -> Verdict:
    """Limit-to-zero test mirroring the little-Bloch tail rule."""
    if vacuous:
        return Verdict(
            name, Status.HOLDS, 0.0, None, profile,
            "vacuous: the image stays inside a compact sub-disk",
        )
    vals = profile.nonempty_values
    if vals.size == 0:
        return Verdict(
            name, Status.HOLDS, 0.0, None, profile,
            "no samples past the first threshold; condition vacuous at this resolution",
        )
    if np.all(vals == 0.0):
        return Verdict(name, Status.HOLDS, 0.0, None, profile, "quantity vanishes on the region")
    v0, vk = float(vals[0]), float(vals[-1])
    tail_ok = vals.size >= 3 and vals[-3] >= vals[-2] >= vals[-1]
    slope = _band_slope(profile)
    notes = ""
    if bool(profile.empty[-1]):
        notes = "deepest regions unsampled at this resolution"
    if tail_ok and vk < max(LIMIT_REL * v0, LIMIT_ABS):
        return Verdict(name, Status.HOLDS, vk, slope, profile, notes)
    if slope is not None and slope > SLOPE_FAIL and _band_growing(profile):
        return Verdict(
            name, Status.FAILS, math.inf, slope, profile,
            f"band suprema grow with slope {slope:.3f}; limit cannot be zero",
        )
    return Verdict(
        name, Status.INCONCLUSIVE, vk, slope, profile,
        (notes + "; " if notes else "") + "tail neither decays below threshold nor diverges",
    )


def _tri(verdicts) -> bool | None:
    if any(v.status is Status.FAILS for v in verdicts):
        return False
    if all(v.status is Status.HOLDS for v in verdicts):
        return True
    return None


# ---------------------------------------------------------------------------
# classifiers


@dataclass
class BoundednessResult:
    multiplier: Verdict
    composition: Verdict

    @property
    def overall(self) -> bool:
        return _tri((self.multiplier, self.composition)) is True

    @property
    def decided(self) -> bool:
        return _tri((self.multiplier, self.composition)) is not None

    def to_dict(self) -> dict:
        return {
            "overall": self.overall,
            "decided": self.decided,
            "verdicts": [self.multiplier.to_dict(), self.composition.to_dict()],
        }


def classify_bounded_into_bloch(
    sym: SymbolPair, space: SpaceSpec, grid: RadialGrid = DEFAULT_GRID
) -> BoundednessResult:
    """Finite-sup verdicts for both criterion quotients over the disk."""
    samples = _symbol_samples(sym, space, grid)
    verdicts = []
    for name in (MULTIPLIER_QUANTITY, COMPOSITION_QUANTITY):
        q = samples.quantity(name)
        prof = boundary_profile(q, samples.abs_z, grid.depth, TRIGGER_Z)
        verdicts.append(_sup_type_verdict(name, prof, q, samples.abs_z, grid.depth))
    return BoundednessResult(*verdicts)


@dataclass
class CompactnessResult:
    multiplier: Verdict
    composition: Verdict
    vacuous: bool

    @property
    def overall(self) -> bool:
        return _tri((self.multiplier, self.composition)) is True

    @property
    def decided(self) -> bool:
        return _tri((self.multiplier, self.composition)) is not None

    def to_dict(self) -> dict:
        return {
            "overall": self.overall,
            "decided": self.decided,
            "vacuous": self.vacuous,
            "verdicts": [self.multiplier.to_dict(), self.composition.to_dict()],
        }


def classify_compact_into_bloch(
    sym: SymbolPair,
    space: SpaceSpec,
    grid: RadialGrid = DEFAULT_GRID,
    bounded: BoundednessResult | None = None,
    force_boundary: bool = False,
) -> CompactnessResult:
    """Limit-to-zero verdicts triggered by ``|phi(z)| -> 1``.

    Requires a positive boundedness verdict (the characterization assumes
    it) and short-circuits to a vacuous pass when the structural bound
    keeps the image inside a compact sub-disk, unless ``force_boundary``
    asks for the profile analysis anyway.
    """
    if bounded is None:
        bounded = classify_bounded_into_bloch(sym, space, grid)
    if not bounded.overall:
        raise PreconditionUnmetError(
            "compactness classification requires a bounded operator; got "
            f"multiplier={bounded.multiplier.status.value}, "
            f"composition={bounded.composition.status.value}"
        )
    vacuous = sym.phi.sup_norm_estimate < 1.0
    if vacuous and not force_boundary:
        mk = _limit_type_verdict(MULTIPLIER_QUANTITY, _empty_phi_profile(grid), vacuous=True)
        ck = _limit_type_verdict(COMPOSITION_QUANTITY, _empty_phi_profile(grid), vacuous=True)
        return CompactnessResult(mk, ck, True)
    samples = _symbol_samples(sym, space, grid)
    verdicts = []
    for name in (MULTIPLIER_QUANTITY, COMPOSITION_QUANTITY):
        prof = boundary_profile(samples.quantity(name), samples.abs_phi, grid.depth, TRIGGER_PHI)
        verdicts.append(_limit_type_verdict(name, prof))
    return CompactnessResult(verdicts[0], verdicts[1], vacuous)


def _empty_phi_profile(grid: RadialGrid) -> BoundaryProfile:
    depth = grid.depth
    return BoundaryProfile(
        TRIGGER_PHI,
        profile_thresholds(depth).copy(),
        np.full(depth, np.nan),
        np.full(depth, np.nan),
        np.full(depth, np.nan),
        np.ones(depth, dtype=bool),
    )


def little_bloch_verdict(f: DiskFunction, grid: RadialGrid = DEFAULT_GRID, name: str = "bloch_tail") -> Verdict:
    """Tri-state little-Bloch classification of a single function."""
    prof = little_bloch_profile(f, grid)
    semi = bloch_seminorm(f, grid)
    if is_little_bloch(prof, semi):
        vals = prof.nonempty_values
        tail = float(vals[-1]) if vals.size else 0.0
        return Verdict(name, Status.HOLDS, tail, _band_slope(prof), prof, f"seminorm {semi:.6g}")
    slope = _band_slope(prof)
    if slope is not None and slope > SLOPE_FAIL and _band_growing(prof):
        return Verdict(name, Status.FAILS, math.inf, slope, prof, "derivative growth accelerates at the boundary")
    vals = prof.nonempty_values
    tail = float(vals[-1]) if vals.size else 0.0
    return Verdict(
        name, Status.INCONCLUSIVE, tail, slope, prof,
        f"tail {tail:.3g} above threshold at this depth (seminorm {semi:.6g}); may decay further",
    )


@dataclass
class LittleBlochBoundedness:
    into_bloch: BoundednessResult
    multiplier_tail: Verdict  # u itself has a vanishing Bloch tail
    product_tail: Verdict  # (1-|z|^2)|u phi'| -> 0

    @property
    def overall(self) -> bool:
        return self.into_bloch.overall and _tri((self.multiplier_tail, self.product_tail)) is True

    @property
    def decided(self) -> bool:
        return self.into_bloch.decided and _tri((self.multiplier_tail, self.product_tail)) is not None

    def to_dict(self) -> dict:
        return {
            "overall": self.overall,
            "decided": self.decided,
            "into_bloch": self.into_bloch.to_dict(),
            "verdicts": [self.multiplier_tail.to_dict(), self.product_tail.to_dict()],
        }


def classify_bounded_into_little_bloch(
    sym: SymbolPair,
    space: SpaceSpec,
    grid: RadialGrid = DEFAULT_GRID,
    bounded: BoundednessResult | None = None,
) -> LittleBlochBoundedness:
    """Boundedness into the little Bloch space: bounded into Bloch, the
    multiplier has a vanishing Bloch tail, and ``(1-|z|^2)|u phi'| -> 0``."""
    if bounded is None:
        bounded = classify_bounded_into_bloch(sym, space, grid)
    u_tail = little_bloch_verdict(sym.u, grid, name="u_bloch_tail")
    samples = _symbol_samples(sym, space, grid)
    prof = boundary_profile(samples.plain_composition, samples.abs_z, grid.depth, TRIGGER_Z)
    prod_tail = _limit_type_verdict("u_phi_prime_plain", prof)
    return LittleBlochBoundedness(bounded, u_tail, prod_tail)


@dataclass
class LittleBlochCompactness:
    multiplier: Verdict
    composition: Verdict

    @property
    def overall(self) -> bool:
        return _tri((self.multiplier, self.composition)) is True

    @property
    def decided(self) -> bool:
        return _tri((self.multiplier, self.composition)) is not None

    def to_dict(self) -> dict:
        return {
            "overall": self.overall,
            "decided": self.decided,
            "verdicts": [self.multiplier.to_dict(), self.composition.to_dict()],
        }


def classify_compact_into_little_bloch(
    sym: SymbolPair, space: SpaceSpec, grid: RadialGrid = DEFAULT_GRID
) -> LittleBlochCompactness:
    """Both criterion quotients must vanish as ``|z| -> 1`` (no boundedness
    hypothesis enters this characterization)."""
    samples = _symbol_samples(sym, space, grid)
    verdicts = []
    for name in (MULTIPLIER_QUANTITY, COMPOSITION_QUANTITY):
        prof = boundary_profile(samples.quantity(name), samples.abs_z, grid.depth, TRIGGER_Z)
        verdicts.append(_limit_type_verdict(name, prof))
    return LittleBlochCompactness(verdicts[0], verdicts[1])


# ---------------------------------------------------------------------------
# limit-equivalence probes


@dataclass
class EquivalenceProbe:
    name: str
    lhs: Verdict
    rhs: tuple[Verdict, ...]

    @property
    def lhs_holds(self) -> bool | None:
        return _tri((self.lhs,))

    @property
    def rhs_holds(self) -> bool | None:
        return _tri(self.rhs)

    @property
    def decided(self) -> bool:
        return self.lhs_holds is not None and self.rhs_holds is not None

    @property
    def agree(self) -> bool | None:
        if not self.decided:
            return None
        return self.lhs_holds == self.rhs_holds

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "decided": self.decided,
            "agree": self.agree,
            "lhs": self.lhs.to_dict(),
            "rhs": [v.to_dict() for v in self.rhs],
        }


def derivative_limit_probe(
    sym: SymbolPair, space: SpaceSpec, grid: RadialGrid = DEFAULT_GRID
) -> EquivalenceProbe:
    """Dual evaluation of the multiplier-quotient limit equivalence:
    vanishing as ``|z| -> 1`` against vanishing as ``|phi(z)| -> 1``
    jointly with a vanishing Bloch tail for ``u``."""
    samples = _symbol_samples(sym, space, grid)
    lhs_prof = boundary_profile(samples.multiplier, samples.abs_z, grid.depth, TRIGGER_Z)
    lhs = _limit_type_verdict(MULTIPLIER_QUANTITY, lhs_prof)
    vacuous = sym.phi.sup_norm_estimate < 1.0
    if vacuous:
        rhs_quot = _limit_type_verdict(MULTIPLIER_QUANTITY, _empty_phi_profile(grid), vacuous=True)
    else:
        rhs_prof = boundary_profile(samples.multiplier, samples.abs_phi, grid.depth, TRIGGER_PHI)
        rhs_quot = _limit_type_verdict(MULTIPLIER_QUANTITY, rhs_prof)
    u_tail = little_bloch_verdict(sym.u, grid, name="u_bloch_tail")
    return EquivalenceProbe("derivative_limit", lhs, (rhs_quot, u_tail))


def composition_limit_probe(
    sym: SymbolPair, space: SpaceSpec, grid: RadialGrid = DEFAULT_GRID
) -> EquivalenceProbe:
    """Dual evaluation of the composition-quotient limit equivalence:
    vanishing as ``|z| -> 1`` against vanishing as ``|phi(z)| -> 1``
    jointly with ``(1-|z|^2)|u phi'| -> 0``."""
    samples = _symbol_samples(sym, space, grid)
    lhs_prof = boundary_profile(samples.composition, samples.abs_z, grid.depth, TRIGGER_Z)
    lhs = _limit_type_verdict(COMPOSITION_QUANTITY, lhs_prof)
    vacuous = sym.phi.sup_norm_estimate < 1.0
    if vacuous:
        rhs_quot = _limit_type_verdict(COMPOSITION_QUANTITY, _empty_phi_profile(grid), vacuous=True)
    else:
        rhs_prof = boundary_profile(samples.composition, samples.abs_phi, grid.depth, TRIGGER_PHI)
        rhs_quot = _limit_type_verdict(COMPOSITION_QUANTITY, rhs_prof)
    plain_prof = boundary_profile(samples.plain_composition, samples.abs_z, grid.depth, TRIGGER_Z)
    plain = _limit_type_verdict("u_phi_prime_plain", plain_prof)
    return EquivalenceProbe("composition_limit", lhs, (rhs_quot, plain))


# ---------------------------------------------------------------------------
# Bergman-space specialization cross-check


def bergman_specialization_ratio(z, sym: SymbolPair, p: float):
    """Ratio of the general composition quotient (with the Bergman weight
    ``(1-r)**(1/p)``) to the special Bergman form with denominator
    ``(1-|phi|^2)**(1+2/p)``.  Algebraically it equals
    ``(1+|phi(z)|)**(1/p)``; where the shared numerator vanishes the
    analytic value of the ratio is returned.
    """
    space = SpaceSpec.bergman(p)
    q2 = composition_quotient(z, sym, space)
    pm = np.minimum(np.abs(np.asarray(sym.phi.eval(z))), _PHI_CLIP)
    num = one_minus_sq(np.abs(np.asarray(z, dtype=complex))) * np.abs(
        np.asarray(sym.u.eval(z)) * np.asarray(sym.phi.deriv(z))
    )
    special = num / one_minus_sq(pm) ** (1.0 + 2.0 / p)
    analytic = (1.0 + pm) ** (1.0 / p)
    out = np.where(special > 0.0, np.asarray(q2) / np.where(special > 0.0, special, 1.0), analytic)
    return float(out) if np.ndim(z) == 0 else out
