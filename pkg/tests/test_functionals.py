"""Tests for characteristic functionals, samplers, the determinant
functional and the ground-state potential map."""

import cmath
import math

import numpy as np
import pytest
from scipy import integrate

from pointgas import functionals as fn
from pointgas import specfun as sf

BOX1 = fn.Box((1.0,))

# f = pi on [0, 0.5): the field integral is exactly -1
F_PI_HALF = fn.TestFunction(
    ({"shape": "indicator", "center": (0.25,), "width": 0.5, "amplitude": math.pi},))
F_ZERO = fn.TestFunction(())
# moderate phase, same support: A = 0.5*(e^{1.2i} - 1)
F_PHASE = fn.TestFunction(
    ({"shape": "indicator", "center": (0.25,), "width": 0.5, "amplitude": 1.2},))
A_PHASE = 0.5 * (cmath.exp(1.2j) - 1.0)


def unit_measure(rho=1.0):
    return fn.IntensityMeasure(BOX1, rho)


class TestBox:
    def test_basic(self):
        b = fn.Box((2.0, 0.5))
        assert b.dim == 2
        assert b.volume == 1.0

    def test_scalar_side(self):
        assert fn.Box((3.0,)).volume == 3.0

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            fn.Box((1.0, 0.0))
        with pytest.raises(ValueError):
            fn.Box((-1.0,))


class TestIntensityMeasure:
    def test_mass(self):
        assert unit_measure(2.0).mass == 2.0

    def test_mass_cap(self):
        with pytest.raises(ValueError):
            fn.IntensityMeasure(fn.Box((30.0,)), 2.0)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            fn.IntensityMeasure(BOX1, -0.5)


class TestTestFunction:
    def test_indicator_half_open(self):
        pts = np.array([[0.0], [0.25], [0.4999999], [0.5], [0.7]])
        vals = F_PI_HALF(pts)
        assert vals[0] == math.pi
        assert vals[2] == math.pi
        assert vals[3] == 0.0  # right edge excluded
        assert vals[4] == 0.0

    def test_gaussian_value(self):
        f = fn.TestFunction(({"shape": "gaussian", "center": (0.5,), "width": 0.2,
                              "amplitude": 2.0},))
        got = f(np.array([[0.7]]))[0]
        assert got == pytest.approx(2.0 * math.exp(-0.04 / 0.08), rel=1e-14)

    def test_cosine_value(self):
        f = fn.TestFunction(({"shape": "cosine", "center": (0.0,), "width": 1.0,
                              "amplitude": 0.3},))
        got = f(np.array([[0.25]]))[0]
        assert got == pytest.approx(0.3 * math.cos(math.pi / 2.0), abs=1e-15)

    def test_sum_of_terms(self):
        f = fn.TestFunction((
            {"shape": "indicator", "center": (0.25,), "width": 0.5, "amplitude": 1.0},
            {"shape": "indicator", "center": (0.4,), "width": 0.4, "amplitude": 0.5},
        ))
        assert f(np.array([[0.3]]))[0] == 1.5
        assert f(np.array([[0.1]]))[0] == 1.0

    def test_empty_is_zero(self):
        assert np.all(F_ZERO(np.array([[0.3], [0.9]])) == 0.0)

    def test_rejects_bad_terms(self):
        with pytest.raises(ValueError):
            fn.TestFunction(({"shape": "triangle", "center": (0.5,), "width": 0.1},))
        with pytest.raises(ValueError):
            fn.TestFunction(({"shape": "gaussian", "center": (0.5,), "width": 0.0},))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            F_PI_HALF(np.zeros((3, 2)))


class TestPointConfiguration:
    def test_pairing(self):
        cfg = fn.PointConfiguration(np.array([[0.1], [0.3], [0.8]]))
        assert cfg.pairing(F_PI_HALF) == pytest.approx(2.0 * math.pi)

    def test_empty(self):
        cfg = fn.PointConfiguration(np.empty((0, 1)))
        assert len(cfg) == 0
        assert cfg.pairing(F_PI_HALF) == 0.0

    def test_flat_input_reshaped(self):
        cfg = fn.PointConfiguration(np.array([0.1, 0.2]))
        assert cfg.points.shape == (2, 1)


class TestMixingMeasure:
    def test_constructors(self):
        assert fn.MixingMeasure.dirac(2.0).kind == "dirac"
        assert fn.MixingMeasure.exponential(1.0).kind == "exponential"
        assert fn.MixingMeasure.lognormal(0.4).kind == "lognormal"
        assert fn.MixingMeasure.fractional(0.5).kind == "fractional"

    def test_discrete_weights_must_normalize(self):
        with pytest.raises(ValueError):
            fn.MixingMeasure.discrete((1.0, 2.0), (0.5, 0.6))

    def test_rejects_bad_params(self):
        with pytest.raises(ValueError):
            fn.MixingMeasure.dirac(0.0)
        with pytest.raises(ValueError):
            fn.MixingMeasure.fractional(1.0)
        with pytest.raises(ValueError):
            fn.MixingMeasure("cauchy", ())


class TestFieldIntegral:
    def test_indicator_exact(self):
        a = fn.field_integral(F_PI_HALF, BOX1)
        assert a.real == pytest.approx(-1.0, abs=1e-14)
        assert abs(a.imag) < 1e-15

    def test_overlapping_indicators_exact_vs_quadrature(self):
        terms = (
            {"shape": "indicator", "center": (0.3,), "width": 0.4, "amplitude": 0.7},
            {"shape": "indicator", "center": (0.5,), "width": 0.5, "amplitude": -0.4},
        )
        exact = fn.field_integral(fn.TestFunction(terms), BOX1)
        # a zero-amplitude gaussian forces the generic quadrature path
        forced = fn.field_integral(
            fn.TestFunction(terms + ({"shape": "gaussian", "center": (0.5,),
                                      "width": 0.1, "amplitude": 0.0},)), BOX1)
        assert abs(exact - forced) < 1e-9

    def test_indicator_2d(self):
        box = fn.Box((1.0, 2.0))
        f = fn.TestFunction(({"shape": "indicator", "center": (0.25, 1.0),
                              "width": 0.5, "amplitude": 0.9},))
        # support [0, 0.5) x [0.75, 1.25): area 0.25
        expected = 0.25 * (cmath.exp(0.9j) - 1.0)
        assert abs(fn.field_integral(f, box) - expected) < 1e-13

    def test_gaussian_vs_dense_simpson(self):
        f = fn.TestFunction(({"shape": "gaussian", "center": (0.4,), "width": 0.12,
                              "amplitude": 1.3},))
        got = fn.field_integral(f, BOX1)
        x = np.linspace(0.0, 1.0, 20001)
        vals = np.exp(1j * f(x[:, None])) - 1.0
        ref = integrate.simpson(vals, x=x)
        assert abs(got - ref) < 1e-9

    def test_zero_function(self):
        assert fn.field_integral(F_ZERO, BOX1) == 0.0j


class TestCharPoisson:
    def test_zero_function(self):
        assert fn.char_poisson(F_ZERO, unit_measure(2.0)) == 1.0 + 0.0j

    def test_indicator_closed_form(self):
        got = fn.char_poisson(F_PI_HALF, unit_measure(2.0))
        assert abs(got - math.exp(-2.0)) < 1e-12

    def test_modulus_bounded(self):
        got = fn.char_poisson(F_PHASE, unit_measure(2.0))
        assert abs(got) <= 1.0 + 1e-12


class TestCharFiniteNV:
    def test_zero_function(self):
        assert fn.char_finite_NV(F_ZERO, 5, BOX1) == 1.0 + 0.0j

    def test_exact_cancellation(self):
        # inner integral 0.5 e^{i pi} + 0.5 = 0
        for n in (1, 3, 17):
            assert abs(fn.char_finite_NV(F_PI_HALF, n, BOX1)) < 1e-15

    def test_rejects_bad_n(self):
        with pytest.raises(ValueError):
            fn.char_finite_NV(F_PI_HALF, 0, BOX1)

    def test_error_halves_with_n(self):
        f = fn.TestFunction(({"shape": "indicator", "center": (0.25,), "width": 0.5,
                              "amplitude": 0.3},))
        ref = fn.char_poisson(f, fn.IntensityMeasure(BOX1, 2.0))
        errs = []
        for n in (2 ** 10, 2 ** 11, 2 ** 12):
            box = fn.Box((n / 2.0,))
            errs.append(abs(fn.char_finite_NV(f, n, box) - ref))
        for big, small in zip(errs, errs[1:]):
            assert 0.4 <= small / big <= 0.6


class TestCharCompound:
    def test_dirac_matches_poisson(self):
        for f in (F_PI_HALF, F_PHASE):
            got = fn.char_compound(f, unit_measure(), fn.MixingMeasure.dirac(2.0))
            ref = fn.char_poisson(f, unit_measure(2.0))
            assert abs(got - ref) < 1e-12

    def test_exponential_closed_form(self):
        got = fn.char_compound(F_PI_HALF, unit_measure(), fn.MixingMeasure.exponential(1.0))
        assert abs(got - 0.5) < 1e-14

    def test_exponential_vs_quadrature_mixture(self):
        # independent route: integrate the exponential density directly
        rho_bar = 0.8
        got = fn.char_compound(F_PHASE, unit_measure(), fn.MixingMeasure.exponential(rho_bar))

        def g(rho, part):
            val = cmath.exp(-rho / rho_bar + rho * A_PHASE) / rho_bar
            return val.real if part == 0 else val.imag

        ref = complex(integrate.quad(g, 0.0, 80.0 * rho_bar, args=(0,), limit=300)[0],
                      integrate.quad(g, 0.0, 80.0 * rho_bar, args=(1,), limit=300)[0])
        assert abs(got - ref) < 1e-8

    def test_fractional_matches_mittag_leffler(self):
        got = fn.char_compound(F_PI_HALF, unit_measure(), fn.MixingMeasure.fractional(0.5))
        ref = math.e * math.erfc(1.0)  # E_{1/2}(-1)
        assert abs(got - ref) < 1e-6

    def test_discrete_hand_sum(self):
        xi = fn.MixingMeasure.discrete((0.5, 2.0), (0.3, 0.7))
        got = fn.char_compound(F_PHASE, unit_measure(), xi)
        ref = 0.3 * cmath.exp(0.5 * A_PHASE) + 0.7 * cmath.exp(2.0 * A_PHASE)
        assert abs(got - ref) < 1e-14

    def test_lognormal_vs_direct_quadrature(self):
        sigma = 0.8
        got = fn.char_compound(F_PHASE, unit_measure(), fn.MixingMeasure.lognormal(sigma))

        def g(u, part):
            rho = math.exp(sigma * sigma + math.sqrt(2.0) * sigma * u)
            val = cmath.exp(-u * u + rho * A_PHASE)
            return val.real if part == 0 else val.imag

        ref = complex(integrate.quad(g, -12.0, 12.0, args=(0,), limit=300)[0],
                      integrate.quad(g, -12.0, 12.0, args=(1,), limit=300)[0])
        ref /= math.sqrt(math.pi)
        assert abs(got - ref) < 1e-9

    def test_requires_unit_intensity(self):
        with pytest.raises(ValueError):
            fn.char_compound(F_PI_HALF, unit_measure(2.0), fn.MixingMeasure.dirac(1.0))


class TestCharFractional:
    def test_alpha_one_is_poisson(self):
        for f in (F_PI_HALF, F_PHASE):
            got = fn.char_fractional(f, unit_measure(2.0), 1.0)
            ref = fn.char_poisson(f, unit_measure(2.0))
            assert abs(got - ref) < 1e-12

    def test_zero_function(self):
        assert fn.char_fractional(F_ZERO, unit_measure(2.0), 0.5) == 1.0 + 0.0j

    def test_real_argument_matches_evaluator(self):
        got = fn.char_fractional(F_PI_HALF, unit_measure(2.0), 0.5)
        ref = sf.mittag_leffler(0.5, -2.0)
        assert got.imag == 0.0
        assert abs(got.real - ref) < 1e-10
        assert 0.0 < got.real < 1.0

    @pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
    def test_series_matches_mixture(self, alpha):
        got = fn.char_fractional(F_PHASE, unit_measure(2.0), alpha)
        taus, w = sf.mixing_quadrature(alpha)
        ref = complex((w * np.exp(taus * 2.0 * A_PHASE)).sum())
        assert abs(got - ref) < 1e-9

    def test_wide_argument_uses_high_precision(self):
        got = fn.char_fractional(F_PHASE, unit_measure(8.0), 0.5)
        taus, w = sf.mixing_quadrature(0.5)
        ref = complex((w * np.exp(taus * 8.0 * A_PHASE)).sum())
        assert abs(got - ref) < 1e-9

    def test_domain_cap(self):
        with pytest.raises(ValueError):
            fn.char_fractional(F_PI_HALF, unit_measure(31.0), 0.5)

    def test_infeasible_series_rejected(self):
        with pytest.raises(fn.QuadratureError):
            fn.char_fractional(F_PHASE, unit_measure(24.0), 0.25)

    def test_rejects_bad_alpha(self):
        with pytest.raises(ValueError):
            fn.char_fractional(F_PI_HALF, unit_measure(), 1.5)


class TestFunctionalBounds:
    def test_randomized_modulus_and_normalization(self):
        # |L(f)| <= 1 and L(0) = 1 across all four functionals, 100 cases
        rng = np.random.default_rng(2024)
        shapes = ("indicator", "gaussian", "cosine")
        for case in range(100):
            terms = []
            for _ in range(int(rng.integers(1, 4))):
                terms.append({
                    "shape": shapes[int(rng.integers(0, 3))],
                    "center": (float(rng.uniform(0.2, 0.8)),),
                    "width": float(rng.uniform(0.08, 0.5)),
                    "amplitude": float(rng.uniform(-2.0, 2.0)),
                })
            f = fn.TestFunction(tuple(terms))
            vals = [
                fn.char_poisson(f, unit_measure(1.5)),
                fn.char_finite_NV(f, 7, BOX1),
                fn.char_compound(f, unit_measure(), fn.MixingMeasure.exponential(0.7)),
                fn.char_fractional(f, unit_measure(1.5), 0.6),
            ]
            for v in vals:
                assert abs(v) <= 1.0 + 1e-10, f"case {case}: |L| = {abs(v)}"
        assert fn.char_poisson(F_ZERO, unit_measure(1.5)) == 1.0 + 0.0j
        assert fn.char_finite_NV(F_ZERO, 7, BOX1) == 1.0 + 0.0j
        assert fn.char_compound(F_ZERO, unit_measure(),
                                fn.MixingMeasure.exponential(0.7)) == 1.0 + 0.0j
        assert fn.char_fractional(F_ZERO, unit_measure(1.5), 0.6) == 1.0 + 0.0j


class TestWeightsFractional:
    def test_poisson_limit(self):
        p = fn.weights_fractional(1.0, 2.0, 20)
        n = np.arange(21)
        ref = np.exp(-2.0) * 2.0 ** n / np.array([math.factorial(k) for k in n])
        np.testing.assert_allclose(p, ref, rtol=1e-12)

    def test_p0_is_mittag_leffler(self):
        p = fn.weights_fractional(0.5, 1.0, 5)
        assert abs(p[0] - math.e * math.erfc(1.0)) < 1e-10

    @pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
    @pytest.mark.parametrize("m", [0.5, 2.0, 10.0])
    def test_sums_to_one(self, alpha, m):
        p = fn.weights_fractional(alpha, m, 200)
        assert np.all(p >= 0.0)
        assert np.all(np.cumsum(p) <= 1.0 + 1e-12)
        assert abs(p.sum() - 1.0) < 1e-10

    def test_zero_mass(self):
        p = fn.weights_fractional(0.5, 0.0, 4)
        assert p[0] == 1.0
        assert np.all(p[1:] == 0.0)

    def test_rejects_bad_domain(self):
        with pytest.raises(ValueError):
            fn.weights_fractional(0.5, 51.0, 10)
        with pytest.raises(ValueError):
            fn.weights_fractional(0.0, 1.0, 10)
        with pytest.raises(ValueError):
            fn.weights_fractional(0.5, 1.0, -1)


class TestSamplers:
    def test_poisson_deterministic(self):
        a = fn.sample_poisson_config(unit_measure(3.0), np.random.default_rng(5))
        b = fn.sample_poisson_config(unit_measure(3.0), np.random.default_rng(5))
        np.testing.assert_array_equal(a.points, b.points)

    def test_zero_mass_empty(self):
        cfg = fn.sample_poisson_config(fn.IntensityMeasure(BOX1, 0.0),
                                       np.random.default_rng(0))
        assert len(cfg) == 0

    def test_points_inside_box(self):
        box = fn.Box((2.0, 0.5))
        mu = fn.IntensityMeasure(box, 5.0)
        rng = np.random.default_rng(1)
        for _ in range(50):
            pts = fn.sample_poisson_config(mu, rng).points
            if len(pts):
                assert np.all(pts >= 0.0)
                assert np.all(pts < np.array(box.sides))

    def test_poisson_mean_count(self):
        rng = np.random.default_rng(10)
        mu = fn.IntensityMeasure(BOX1, 5.0)
        counts = np.array([len(fn.sample_poisson_config(mu, rng)) for _ in range(20000)])
        se = counts.std(ddof=1) / math.sqrt(counts.size)
        assert abs(counts.mean() - 5.0) <= 3.0 * se

    def test_fractional_mean_count(self):
        # E[count] = m * E[tau] = m / Gamma(1 + alpha)
        rng = np.random.default_rng(11)
        mu = fn.IntensityMeasure(BOX1, 3.0)
        counts = np.array([len(fn.sample_fractional_config(mu, 0.5, rng))
                           for _ in range(20000)])
        se = counts.std(ddof=1) / math.sqrt(counts.size)
        assert abs(counts.mean() - 3.0 / math.gamma(1.5)) <= 3.0 * se

    def test_fractional_rejects_alpha_one(self):
        with pytest.raises(ValueError):
            fn.sample_fractional_config(unit_measure(), 1.0, np.random.default_rng(0))


class TestMcChar:
    def test_zero_function_exact(self):
        est, se = fn.mc_char(F_ZERO, lambda r: fn.sample_poisson_config(unit_measure(2.0), r),
                             500, np.random.default_rng(1))
        assert est == 1.0 + 0.0j
        assert se == 0.0

    def test_needs_samples(self):
        with pytest.raises(ValueError):
            fn.mc_char(F_ZERO, lambda r: fn.sample_poisson_config(unit_measure(), r),
                       99, np.random.default_rng(1))

    def test_deterministic(self):
        sampler = lambda r: fn.sample_poisson_config(unit_measure(2.0), r)
        a = fn.mc_char(F_PHASE, sampler, 3000, np.random.default_rng(7))
        b = fn.mc_char(F_PHASE, sampler, 3000, np.random.default_rng(7))
        assert a == b

    def test_matches_closed_form(self):
        mu = unit_measure(2.0)
        est, se = fn.mc_char(F_PHASE, lambda r: fn.sample_poisson_config(mu, r),
                             20000, np.random.default_rng(42))
        assert abs(est - fn.char_poisson(F_PHASE, mu)) <= 3.0 * se

    def test_fractional_matches_series(self):
        mu = unit_measure(2.0)
        est, se = fn.mc_char(F_PHASE, lambda r: fn.sample_fractional_config(mu, 0.5, r),
                             20000, np.random.default_rng(43))
        assert abs(est - fn.char_fractional(F_PHASE, mu, 0.5)) <= 3.0 * se


class TestGirardFunctional:
    def test_zero_function(self):
        p = fn.GirardParams(1.0, 32, 10.0, 1.0)
        assert fn.girard_functional(F_ZERO, p) == 1.0 + 0.0j

    def test_zero_temperature_limit(self):
        # at beta = 200 only the zero mode is occupied: (1 - rho_bar*A)^{-1} = 0.5
        p = fn.GirardParams(1.0, 32, 200.0, 1.0)
        got = fn.girard_functional(F_PI_HALF, p)
        assert abs(got - 0.5) < 1e-3

    def test_ordering_conventions_agree(self):
        p = fn.GirardParams(1.0, 32, 200.0, 1.0)
        right = fn.girard_functional(F_PI_HALF, p, ordering="occupation_right")
        left = fn.girard_functional(F_PI_HALF, p, ordering="occupation_left")
        assert abs(right - left) < 1e-12

    def test_truncation_converged(self):
        v32 = fn.girard_functional(F_PI_HALF, fn.GirardParams(1.0, 32, 10.0, 1.0))
        v64 = fn.girard_functional(F_PI_HALF, fn.GirardParams(1.0, 64, 10.0, 1.0))
        assert abs(v64 - v32) < 1e-6

    def test_truncation_converged_wide_circle(self):
        f = fn.TestFunction(({"shape": "gaussian", "center": (10.0,), "width": 1.5,
                              "amplitude": 0.9},))
        v32 = fn.girard_functional(f, fn.GirardParams(20.0, 32, 2.0, 0.5))
        v64 = fn.girard_functional(f, fn.GirardParams(20.0, 64, 2.0, 0.5))
        assert abs(v64 - v32) < 1e-8
        assert abs(v32) <= 1.0 + 1e-10

    def test_zero_mode_occupation_matched(self):
        # the chemical potential pins the k = 0 occupation at rho_bar * L
        p = fn.GirardParams(4.0, 8, 3.0, 1.5)
        occ0 = 1.0 / math.expm1(p.beta * (0.0 - p.mu_chem))
        assert occ0 == pytest.approx(6.0, rel=1e-12)

    def test_rejects_bad_ordering(self):
        with pytest.raises(ValueError):
            fn.girard_functional(F_ZERO, fn.GirardParams(1.0, 32, 10.0, 1.0),
                                 ordering="sideways")

    def test_params_validation(self):
        with pytest.raises(ValueError):
            fn.GirardParams(0.0, 32, 10.0, 1.0)
        with pytest.raises(ValueError):
            fn.GirardParams(1.0, 0, 10.0, 1.0)


class TestGroundStatePotential:
    def test_harmonic_two_particle_formula(self):
        # V(x1, x2) = 8 w^2 (x1 - x2)^2 - 4 w
        gs = fn.GroundStateField(2, "harmonic", omega=1.3)
        grid = np.linspace(-0.4, 0.4, 21)
        v = fn.ground_state_potential(gs, grid)
        x1, x2 = np.meshgrid(grid, grid, indexing="ij")
        ref = 8.0 * 1.3 ** 2 * (x1 - x2) ** 2 - 4.0 * 1.3
        np.testing.assert_allclose(v, ref, atol=1e-12)

    def test_constant_custom_gives_zero(self):
        gs = fn.GroundStateField(2, "custom", w_values=np.full((11, 11), 2.5))
        v = fn.ground_state_potential(gs, np.linspace(0.0, 1.0, 11))
        assert np.abs(v).max() < 1e-12

    def test_custom_matches_analytic_interior(self):
        grid = np.linspace(-0.3, 0.3, 101)
        x1, x2 = np.meshgrid(grid, grid, indexing="ij")
        gs = fn.GroundStateField(2, "custom", w_values=(x1 - x2) ** 2)
        v = fn.ground_state_potential(gs, grid)
        ref = 8.0 * (x1 - x2) ** 2 - 4.0
        assert np.abs((v - ref)[3:-3, 3:-3]).max() < 1e-9

    def test_harmonic_residual(self):
        gs = fn.GroundStateField(2, "harmonic", omega=1.0)
        r = fn.residual_check(gs, np.linspace(-0.3, 0.3, 101))
        assert r < 1e-4

    @pytest.mark.parametrize("lam", [-1.0, -2.0])
    def test_calogero_residual(self, lam):
        gs = fn.GroundStateField(2, "calogero", omega=0.5, lam=lam)
        r = fn.residual_check(gs, np.linspace(-1.0, 1.0, 501))
        assert r < 1e-4

    def test_calogero_separated_axes(self):
        # axes that never meet the coincidence set
        gs = fn.GroundStateField(2, "calogero", omega=0.5, lam=-1.0)
        axes = (np.linspace(0.5, 1.1, 101), np.linspace(-1.1, -0.5, 101))
        assert fn.residual_check(gs, axes) < 1e-4

    def test_three_particle_laplacian_constant(self):
        # harmonic: -Lap W = -2 w N (N-1) shows up as V at coincident points
        gs = fn.GroundStateField(3, "harmonic", omega=0.7)
        grid = np.linspace(-0.2, 0.2, 9)
        v = fn.ground_state_potential(gs, grid)
        mid = len(grid) // 2
        assert v[mid, mid, mid] == pytest.approx(-2.0 * 0.7 * 3 * 2, rel=1e-12)

    def test_grid_too_coarse(self):
        gs = fn.GroundStateField(2, "harmonic")
        with pytest.raises(ValueError):
            fn.ground_state_potential(gs, np.linspace(0.0, 1.0, 4))

    def test_custom_shape_mismatch(self):
        gs = fn.GroundStateField(2, "custom", w_values=np.zeros((5, 6)))
        with pytest.raises(ValueError):
            fn.ground_state_potential(gs, np.linspace(0.0, 1.0, 5))

    def test_residual_requires_uniform_axes(self):
        gs = fn.GroundStateField(2, "harmonic")
        axes = (np.array([0.0, 0.1, 0.3, 0.6, 1.0]), np.linspace(0.0, 1.0, 5))
        with pytest.raises(ValueError):
            fn.residual_check(gs, axes)

    def test_custom_needs_values(self):
        with pytest.raises(ValueError):
            fn.GroundStateField(2, "custom")
