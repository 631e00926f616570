import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blochlab import (
    FractionalKernel,
    MonomialPower,
    PowerSeries,
    RadialGrid,
    SpaceSpec,
    SymbolPair,
    bergman_type_norm,
    bloch_seminorm,
    boundary_test_function,
    compactness_probe,
    constant,
    identity_map,
    lower_bound_trend,
    operator_apply,
    operator_lower_bound,
    vanishing_test_function,
)
from blochlab.norms import sample_points
from blochlab.oracle import TestFamily, chain_constant, kernel_family_norm
from blochlab.criteria import classify_bounded_into_bloch


class TestBoundaryKernels:
    def test_central_base_degenerates_to_constant(self, a2):
        f = boundary_test_function(0.0, a2)
        for z in (0.0, 0.4j, -0.6):
            assert f.eval(z) == pytest.approx(1.0)

    def test_parameters_fold_in_the_witness(self, a2):
        f = boundary_test_function(0.5, a2)
        assert isinstance(f, FractionalKernel)
        assert f.exponent == pytest.approx(0.5 + 0.75 + 1.0)
        assert f.scale == pytest.approx(0.75**1.75 / np.sqrt(0.5))

    def test_norm_sweep_uniformly_bounded(self, a2, grid):
        mods = [0.0, 0.5, 0.9, 0.99, 1 - 2**-8, 1 - 2**-10, 1 - 2**-12]
        norms = [kernel_family_norm(m, a2, grid) for m in mods]
        assert max(norms) / min(norms) <= 10.0
        tail = norms[-3:]
        # approach to the boundary limit, not unbounded growth
        assert tail[2] <= tail[1] * 1.02 and tail[1] <= tail[0] * 1.02

    def test_fast_path_matches_generic_quadrature(self, a2):
        # same integral through two independent angular treatments
        for mod, angular in ((0.5, 512), (0.9, 512), (1 - 2**-8, 8192)):
            generic = bergman_type_norm(
                boundary_test_function(mod, a2), a2, RadialGrid(16, angular, 12)
            )
            assert kernel_family_norm(mod, a2) == pytest.approx(generic, rel=1e-7)

    def test_norm_depends_only_on_base_modulus(self, a2, grid):
        a = bergman_type_norm(boundary_test_function(0.7, a2), a2, grid)
        b = bergman_type_norm(boundary_test_function(0.7j, a2), a2, grid)
        assert a == pytest.approx(b, rel=1e-12)


class TestVanishingKernels:
    @pytest.mark.parametrize("mod", [0.0, 0.5, 0.9, 0.99, 1 - 2**-8, 1 - 2**-12])
    def test_identities_at_base_point(self, a2, mod):
        for ang in (0.0, 1.3, 3.7):
            q = mod * np.exp(1j * ang)
            g = vanishing_test_function(q, a2)
            assert abs(g.eval(q)) <= 1e-10
            expected = np.conj(q) / (a2.weight(abs(q)) * (1 - abs(q) ** 2) ** 1.5)
            if expected == 0:
                assert abs(g.deriv(q)) <= 1e-10
            else:
                assert abs(g.deriv(q) - expected) <= 1e-10 * abs(expected)

    def test_norms_bounded_over_sweep(self, a2, grid):
        mods = [0.5, 0.9, 1 - 2**-8]
        norms = [bergman_type_norm(vanishing_test_function(m, a2), a2, grid) for m in mods]
        assert max(norms) <= 10 * max(min(norms), 0.1)


class TestOperatorApply:
    def test_identity_operator(self, grid):
        sym = SymbolPair(constant(1), identity_map())
        f = PowerSeries([0.5, -1j, 2])
        g = operator_apply(sym, f)
        _, z = sample_points(10, 128)
        assert np.max(np.abs(g.eval(z) - f.eval(z))) <= 1e-14

    def test_zero_multiplier(self):
        sym = SymbolPair(constant(0), identity_map())
        g = operator_apply(sym, PowerSeries([1, 1]))
        assert g.eval(0.3 + 0.2j) == 0.0

    def test_monomial_composition(self, grid):
        # u = z, phi = z^2 applied to z gives z^3
        sym = SymbolPair(PowerSeries([0, 1]), MonomialPower(2))
        g = operator_apply(sym, PowerSeries([0, 1]))
        assert g.eval(0.5j) == pytest.approx((0.5j) ** 3)
        assert bloch_seminorm(g, grid) == pytest.approx(0.75, rel=1e-9)

    @given(
        a=st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False),
        r=st.floats(0.0, 0.9),
        ang=st.floats(0.0, 2 * np.pi),
    )
    @settings(max_examples=40, deadline=None)
    def test_linearity(self, a, r, ang):
        z = r * np.exp(1j * ang)
        sym = SymbolPair(PowerSeries([0.5, 1]), MonomialPower(2, 0.9))
        f, g = PowerSeries([1, 2, 3]), FractionalKernel(0.4, 1.5)
        lhs = operator_apply(sym, a * f + g).eval(z)
        rhs = a * operator_apply(sym, f).eval(z) + operator_apply(sym, g).eval(z)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


class TestLowerBounds:
    def test_zero_multiplier_gives_zero(self, a2, fast_grid):
        sym = SymbolPair(constant(0), identity_map())
        family = TestFamily("monomials", (0, 1, 2), a2)
        assert operator_lower_bound(sym, a2, family, fast_grid) == 0.0

    def test_stable_trend_for_strict_map(self, a2, fast_grid):
        sym = SymbolPair(constant(1), MonomialPower(1, 0.5))
        trend = lower_bound_trend(sym, a2, fast_grid)
        assert trend.classification == "stable"
        assert trend.values[-1] <= 1.05 * trend.values[-2]

    def test_divergent_trend_for_identity(self, a2, fast_grid):
        trend = lower_bound_trend(SymbolPair(constant(1), identity_map()), a2, fast_grid)
        assert trend.classification == "divergent"
        assert trend.values[0] < trend.values[1] < trend.values[2]

    def test_custom_family(self, a2, fast_grid):
        sym = SymbolPair(constant(1), MonomialPower(1, 0.5))
        family = TestFamily("custom", (), a2, functions=(constant(1), PowerSeries([0, 1])))
        assert operator_lower_bound(sym, a2, family, fast_grid) > 0


class TestCompactnessProbe:
    def test_vacuous_for_strict_map(self, a2, fast_grid):
        probe = compactness_probe(SymbolPair(constant(1), MonomialPower(1, 0.5)), a2, fast_grid)
        assert probe.kind == "vacuous"
        assert probe.trend == "vacuous"

    def test_zero_multiplier(self, a2, fast_grid):
        probe = compactness_probe(SymbolPair(constant(0), identity_map()), a2, fast_grid)
        assert probe.kind == "probe"
        assert probe.trend == "zero"

    def test_identity_probe_bounded_away(self, a2, fast_grid):
        probe = compactness_probe(SymbolPair(constant(1), identity_map()), a2, fast_grid)
        assert probe.trend == "bounded_away"
        assert min(probe.vanishing_values[-3:]) > 0.1 * max(probe.vanishing_values)


class TestChainConstant:
    def test_finite_on_bounded_pair(self, a2, fast_grid):
        sym = SymbolPair(PowerSeries([0.5, 1]), MonomialPower(1, 0.5))
        outcome = classify_bounded_into_bloch(sym, a2, fast_grid)
        assert outcome.overall
        functions = [constant(1), PowerSeries([0, 1]), boundary_test_function(0.5, a2)]
        c = chain_constant(
            sym, a2, functions, fast_grid,
            outcome.multiplier.sup_estimate, outcome.composition.sup_estimate,
        )
        assert c is not None and 0 < c < 50

    def test_skipped_when_sups_divergent(self, a2, fast_grid):
        sym = SymbolPair(constant(1), identity_map())
        c = chain_constant(sym, a2, [constant(1)], fast_grid, float("inf"), 1.0)
        assert c is None
