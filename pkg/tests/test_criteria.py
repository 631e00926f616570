import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blochlab import (
    Affine,
    BlaschkeFactor,
    ComposedWithSelfMap,
    CompositionMap,
    MonomialPower,
    PowerSeries,
    PreconditionUnmetError,
    Scaled,
    Status,
    SymbolPair,
    bergman_specialization_ratio,
    classify_bounded_into_bloch,
    classify_bounded_into_little_bloch,
    classify_compact_into_bloch,
    classify_compact_into_little_bloch,
    composition_limit_probe,
    composition_quotient,
    constant,
    criterion_profile,
    derivative_limit_probe,
    identity_map,
    little_bloch_profile,
    is_little_bloch,
    multiplier_quotient,
    rotation,
    truncated_log_series,
)
from blochlab.norms import TRIGGER_PHI, TRIGGER_Z, bloch_seminorm
from blochlab.oracle import operator_apply


def half_scale():
    return SymbolPair(constant(1), MonomialPower(1, 0.5))


def identity_sym():
    return SymbolPair(constant(1), identity_map())


class TestQuotients:
    def test_constant_multiplier_kills_first_quotient(self, a2):
        sym = half_scale()
        for z in (0.0, 0.5j, 0.9):
            assert multiplier_quotient(z, sym, a2) == 0.0

    def test_first_quotient_at_origin(self, a2):
        sym = SymbolPair(PowerSeries([0, 1]), MonomialPower(1, 0.5))
        assert multiplier_quotient(0.0, sym, a2) == pytest.approx(1.0)

    def test_first_quotient_hand_value(self, a2):
        sym = SymbolPair(PowerSeries([0, 1]), MonomialPower(1, 0.5))
        expected = 0.36 / (np.sqrt(0.6) * np.sqrt(0.84))
        assert multiplier_quotient(0.8, sym, a2) == pytest.approx(expected, rel=1e-6)

    def test_second_quotient_at_origin_for_identity(self, a2):
        assert composition_quotient(0.0, identity_sym(), a2) == pytest.approx(1.0)

    def test_zero_multiplier(self, a2):
        sym = SymbolPair(constant(0), identity_map())
        assert composition_quotient(0.7j, sym, a2) == 0.0

    @given(
        c=st.complex_numbers(min_magnitude=1e-2, max_magnitude=5.0,
                             allow_nan=False, allow_infinity=False),
        r=st.floats(0.0, 0.9),
        ang=st.floats(0.0, 2 * np.pi),
    )
    @settings(max_examples=40, deadline=None)
    def test_scaling_equivariance(self, a2, c, r, ang):
        z = r * np.exp(1j * ang)
        u = PowerSeries([0.3, 1.0, -0.5j])
        phi = BlaschkeFactor(0.3)
        base = SymbolPair(u, phi)
        scaled = SymbolPair(Scaled(c, u), phi)
        for quot in (multiplier_quotient, composition_quotient):
            assert quot(z, scaled, a2) == pytest.approx(abs(c) * quot(z, base, a2), rel=1e-12)


class TestProfiles:
    def test_vacuously_empty_regions_for_strict_map(self, a2, fast_grid):
        prof = criterion_profile("u_phi_prime", half_scale(), a2, TRIGGER_PHI, fast_grid)
        assert prof.empty.all()

    def test_divergence_shows_in_band_values(self, a2, grid):
        prof = criterion_profile("u_phi_prime", identity_sym(), a2, TRIGGER_Z, grid)
        bands = prof.band_values[np.isfinite(prof.band_values)]
        assert np.all(np.diff(bands[-6:]) > 0)
        vals = prof.nonempty_values
        assert np.all(np.diff(vals) <= 0)

    def test_decay_for_strict_map(self, a2, grid):
        prof = criterion_profile("u_phi_prime", half_scale(), a2, TRIGGER_Z, grid)
        vals = prof.nonempty_values
        assert vals[-1] < 1e-3 * vals[0]

    def test_rotation_invariance_of_profiles(self, a2, grid):
        theta = 0.37
        u = PowerSeries([0.5, 1.0, 0.25j])
        phi = BlaschkeFactor(0.45)
        base = SymbolPair(u, phi)
        conj_phi = CompositionMap(rotation(-theta), CompositionMap(phi, rotation(theta)))
        conj = SymbolPair(ComposedWithSelfMap(u, rotation(theta)), conj_phi)
        for name in ("u_prime", "u_phi_prime"):
            p0 = criterion_profile(name, base, a2, TRIGGER_Z, grid)
            p1 = criterion_profile(name, conj, a2, TRIGGER_Z, grid)
            v0, v1 = p0.nonempty_values, p1.nonempty_values
            assert v1 == pytest.approx(v0, rel=1e-2)


class TestBoundedness:
    def test_half_scale_bounded(self, a2, grid):
        outcome = classify_bounded_into_bloch(half_scale(), a2, grid)
        assert outcome.overall and outcome.decided
        assert math.isfinite(outcome.composition.sup_estimate)

    def test_identity_unbounded_through_composition_term(self, a2, grid):
        outcome = classify_bounded_into_bloch(identity_sym(), a2, grid)
        assert not outcome.overall and outcome.decided
        assert outcome.composition.status is Status.FAILS
        assert math.isinf(outcome.composition.sup_estimate)
        assert outcome.composition.divergence_slope == pytest.approx(1.0, rel=0.2)

    def test_zero_operator(self, a2, grid):
        sym = SymbolPair(constant(0), identity_map())
        outcome = classify_bounded_into_bloch(sym, a2, grid)
        assert outcome.overall
        assert outcome.multiplier.sup_estimate == 0.0
        assert outcome.composition.sup_estimate == 0.0

    def test_verdict_serialization_roundtrip(self, a2, grid):
        entry = classify_bounded_into_bloch(identity_sym(), a2, grid).to_dict()
        assert entry["verdicts"][1]["sup_estimate"] == "Divergent"
        assert entry["overall"] is False

    def test_status_invariant_under_multiplier_scaling(self, a2, fast_grid):
        for base in (half_scale(), identity_sym()):
            reference = classify_bounded_into_bloch(base, a2, fast_grid)
            for c in (2.0, 0.01j, -5.0 + 3.0j):
                scaled = SymbolPair(Scaled(c, base.u), base.phi)
                outcome = classify_bounded_into_bloch(scaled, a2, fast_grid)
                assert outcome.multiplier.status is reference.multiplier.status
                assert outcome.composition.status is reference.composition.status


class TestCompactness:
    def test_half_scale_vacuous(self, a2, grid):
        outcome = classify_compact_into_bloch(half_scale(), a2, grid)
        assert outcome.overall and outcome.vacuous

    def test_refuses_unbounded_operator(self, a2, grid):
        with pytest.raises(PreconditionUnmetError):
            classify_compact_into_bloch(identity_sym(), a2, grid)

    def test_force_boundary_still_holds_for_strict_map(self, a2, grid):
        outcome = classify_compact_into_bloch(half_scale(), a2, grid, force_boundary=True)
        assert outcome.overall

    def test_zero_operator_compact(self, a2, grid):
        sym = SymbolPair(constant(0), MonomialPower(1, 0.5))
        assert classify_compact_into_bloch(sym, a2, grid).overall

    def test_vacuous_rule_is_structural(self, a2, grid):
        # any bounded pair with a strict structural bound is compact by fiat
        sym = SymbolPair(PowerSeries([1, 1]), Affine(0.3, 0.4))
        bounded = classify_bounded_into_bloch(sym, a2, grid)
        assert bounded.overall
        outcome = classify_compact_into_bloch(sym, a2, grid, bounded=bounded)
        assert outcome.vacuous and outcome.overall


class TestLittleBloch:
    def test_half_scale_bounded_into_little_bloch(self, a2, grid):
        outcome = classify_bounded_into_little_bloch(half_scale(), a2, grid)
        assert outcome.overall
        assert outcome.multiplier_tail.status is Status.HOLDS
        assert outcome.product_tail.status is Status.HOLDS

    def test_constant_target_map(self, a2, grid):
        sym = SymbolPair(PowerSeries([0, 1]), Affine(0.0, 0.0))
        assert classify_bounded_into_little_bloch(sym, a2, grid).overall

    def test_polynomial_multiplier_with_boundary_mass(self, a2, grid):
        sym = SymbolPair(truncated_log_series(32), MonomialPower(1, 0.5))
        outcome = classify_bounded_into_little_bloch(sym, a2, grid)
        assert outcome.multiplier_tail.status is Status.HOLDS

    def test_half_scale_compact_into_little_bloch(self, a2, grid):
        assert classify_compact_into_little_bloch(half_scale(), a2, grid).overall

    def test_zero_compact_into_little_bloch(self, a2, grid):
        sym = SymbolPair(constant(0), identity_map())
        assert classify_compact_into_little_bloch(sym, a2, grid).overall

    def test_identity_fails_compact_into_little_bloch(self, a2, grid):
        outcome = classify_compact_into_little_bloch(identity_sym(), a2, grid)
        assert not outcome.overall
        assert outcome.composition.status is Status.FAILS

    def test_operator_images_inherit_vanishing_tails(self, a2, grid):
        # when the little-Bloch boundedness verdict holds, the images of the
        # two simplest inputs must themselves have vanishing Bloch tails
        for sym in (half_scale(), SymbolPair(PowerSeries([0, 1]), Affine(0.0, 0.0))):
            outcome = classify_bounded_into_little_bloch(sym, a2, grid)
            assert outcome.overall
            for f in (constant(1), PowerSeries([0, 1])):
                image = operator_apply(sym, f)
                prof = little_bloch_profile(image, grid)
                assert is_little_bloch(prof, bloch_seminorm(image, grid))


class TestLimitProbes:
    def test_half_scale_probes_agree(self, a2, grid):
        for probe in (derivative_limit_probe(half_scale(), a2, grid),
                      composition_limit_probe(half_scale(), a2, grid)):
            assert probe.decided and probe.agree

    def test_identity_composition_probe_agrees_on_failure(self, a2, grid):
        probe = composition_limit_probe(identity_sym(), a2, grid)
        assert probe.decided
        assert probe.lhs_holds is False and probe.rhs_holds is False
        assert probe.agree

    def test_zero_multiplier_probes(self, a2, grid):
        sym = SymbolPair(constant(0), identity_map())
        for probe in (derivative_limit_probe(sym, a2, grid),
                      composition_limit_probe(sym, a2, grid)):
            assert probe.decided and probe.agree


class TestBergmanSpecialization:
    def test_ratio_is_one_when_image_passes_origin(self, a2):
        sym = SymbolPair(PowerSeries([1, 1]), Affine(0.0, 0.0))
        assert bergman_specialization_ratio(0.3, sym, 2.0) == pytest.approx(1.0)

    def test_ratio_closed_form_for_constant_map(self):
        sym = SymbolPair(PowerSeries([1, 1]), Affine(0.5, 0.3))
        z = 0.2 + 0.1j
        mod = abs(sym.phi.eval(z))
        assert bergman_specialization_ratio(z, sym, 2.0) == pytest.approx(np.sqrt(1 + mod))

    @pytest.mark.parametrize("p", [0.5, 1.0, 2.0, 3.0])
    def test_ratio_range(self, p, grid):
        from blochlab.norms import sample_points

        sym = SymbolPair(PowerSeries([0.4, 1.0]), BlaschkeFactor(0.35 - 0.2j))
        _, z = sample_points(12, 128)
        ratio = bergman_specialization_ratio(z, sym, p)
        assert np.all(ratio >= 1.0 - 1e-12)
        assert np.all(ratio <= 2.0 ** (1.0 / p) + 1e-12)
