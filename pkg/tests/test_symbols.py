import cmath
import math

import numpy as np
import pytest

from fock_toeplitz.errors import ClassificationError, DomainError, PreconditionError
from fock_toeplitz.special_functions import QuadratureSpec, gaussian_weighted_integral
from fock_toeplitz.symbols import (
    RadialProfile,
    SymbolSpec,
    decompose,
    dpoly_norm_estimate,
    evaluate,
    fit_growth,
    polar_l2_norm,
    sample_polar,
)


def radial(profile, name="sym"):
    return SymbolSpec.from_modes({0: profile}, name=name)


RE_Z = SymbolSpec.from_modes(
    {1: RadialProfile.polynomial([0.0, 0.5]), -1: RadialProfile.polynomial([0.0, 0.5])},
    name="re_z",
)


class TestRadialProfile:
    def test_monomial_vectorised(self):
        p = RadialProfile.monomial(2.0)
        assert p(3.0) == 9.0
        np.testing.assert_allclose(p(np.array([1.0, 2.0])), [1.0, 4.0])

    def test_monomial_rejects_negative_power(self):
        with pytest.raises(DomainError):
            RadialProfile.monomial(-1.0)

    def test_polynomial_growth_metadata(self):
        p = RadialProfile.polynomial([1.0, 0.0, 2.0])
        assert p.growth_exponent == 2.0
        r = np.linspace(0.1, 50.0, 50)
        assert np.all(np.abs(p(r)) <= p.growth_constant * (1.0 + r) ** p.growth_exponent)

    def test_polynomial_trims_zero_tail(self):
        assert RadialProfile.polynomial([0.0, 1.0, 0.0]).growth_exponent == 1.0
        assert RadialProfile.polynomial([0.0]).is_zero

    def test_callable_bound_enforced(self):
        with pytest.raises(DomainError):
            RadialProfile.from_callable(
                lambda r: np.exp(np.asarray(r, dtype=float)),
                growth_exponent=2.0,
                growth_constant=1.0,
            )

    def test_callable_accepts_valid_declaration(self):
        p = RadialProfile.from_callable(
            lambda r: np.exp(-np.asarray(r, dtype=float)),
            growth_exponent=0.0,
            growth_constant=1.0,
        )
        assert p(0.5) == pytest.approx(math.exp(-0.5))

    def test_conjugate(self):
        p = RadialProfile.polynomial([1.0 + 2.0j])
        assert p.conjugate()(1.0) == pytest.approx(1.0 - 2.0j)

    def test_scaled(self):
        p = RadialProfile.monomial(1.0).scaled(0.5)
        assert p(2.0) == pytest.approx(1.0)

    def test_from_samples_interpolates(self):
        r = np.linspace(0.1, 10.0, 60)
        p = RadialProfile.from_samples(r, r**2)
        assert p(r[17]) == pytest.approx(r[17] ** 2, rel=1e-12)
        assert p(5.05) == pytest.approx(5.05**2, rel=1e-6)

    def test_from_samples_needs_monotone_radii(self):
        with pytest.raises(PreconditionError):
            RadialProfile.from_samples([1.0, 0.5, 2.0, 3.0], [1.0, 2.0, 3.0, 4.0])


class TestSymbolSpec:
    def test_drops_zero_modes(self):
        spec = SymbolSpec.from_modes({0: RadialProfile.monomial(1.0), 2: RadialProfile.zero()})
        assert spec.mode_indices == (0,)
        assert spec.is_radial

    def test_radiality(self):
        assert radial(RadialProfile.monomial(2.0)).is_radial
        assert not RE_Z.is_radial

    def test_conjugate_flips_modes(self):
        spec = SymbolSpec.from_modes({1: RadialProfile.polynomial([0.0, 1.0j])})
        conj = spec.conjugate()
        assert conj.mode_indices == (-1,)
        z = 1.3 * cmath.exp(0.7j)
        assert evaluate(conj, z) == pytest.approx(evaluate(spec, z).conjugate(), rel=1e-13)


class TestEvaluate:
    def test_radial_example(self):
        spec = radial(RadialProfile.monomial(2.0))
        assert evaluate(spec, 2.0j) == pytest.approx(4.0)

    def test_re_z(self):
        for r, theta in [(1.0, 0.3), (2.5, -1.2), (0.7, 3.0)]:
            z = r * cmath.exp(1j * theta)
            assert evaluate(RE_Z, z) == pytest.approx(z.real, abs=1e-13)

    def test_z_squared_mode(self):
        spec = SymbolSpec.from_modes({2: RadialProfile.monomial(2.0)})
        value = evaluate(spec, cmath.exp(1j * math.pi / 4.0))
        assert value == pytest.approx(1.0j, abs=1e-14)

    def test_origin_radial_only(self):
        spec = radial(RadialProfile.polynomial([3.0, 1.0]))
        assert evaluate(spec, 0.0) == pytest.approx(3.0)

    def test_origin_rejects_nonvanishing_angular_mode(self):
        spec = SymbolSpec.from_modes({1: RadialProfile.monomial(0.0)})
        with pytest.raises(DomainError):
            evaluate(spec, 0.0)

    def test_origin_allows_vanishing_angular_mode(self):
        spec = SymbolSpec.from_modes({1: RadialProfile.monomial(1.0)})
        assert evaluate(spec, 0.0) == 0.0


class TestDecompose:
    def test_re_z_modes(self):
        radii = np.linspace(0.05, 6.0, 40)
        samples = sample_polar(RE_Z, radii, 16)
        spec = decompose(radii, samples, j_max=2)
        assert spec.mode_indices == (-1, 1)
        np.testing.assert_allclose(spec.mode(1)(radii), radii / 2.0, atol=1e-12)

    def test_radial_symbol_single_mode(self):
        radii = np.linspace(0.05, 6.0, 40)
        source = radial(
            RadialProfile.from_callable(
                lambda r: np.exp(-np.asarray(r, dtype=float)),
                growth_exponent=0.0,
                growth_constant=1.0,
            )
        )
        spec = decompose(radii, sample_polar(source, radii, 12), j_max=3)
        assert spec.mode_indices == (0,)
        assert spec.is_radial
        np.testing.assert_allclose(spec.mode(0)(radii), np.exp(-radii), atol=1e-12)

    def test_z_squared(self):
        radii = np.linspace(0.05, 4.0, 30)
        source = SymbolSpec.from_modes({2: RadialProfile.monomial(2.0)})
        spec = decompose(radii, sample_polar(source, radii, 10), j_max=3)
        assert spec.mode_indices == (2,)
        np.testing.assert_allclose(spec.mode(2)(radii), radii**2, atol=1e-10)

    def test_round_trip_random_trig_polynomials(self):
        rng = np.random.default_rng(20240817)
        radii = np.linspace(0.05, 8.0, 120)
        for _ in range(5):
            modes = {}
            for j in range(-4, 5):
                if rng.random() < 0.5:
                    continue
                coeffs = rng.normal(size=3) + 1j * rng.normal(size=3)
                modes[j] = RadialProfile.polynomial(list(coeffs))
            if not modes:
                modes[0] = RadialProfile.monomial(1.0)
            source = SymbolSpec.from_modes(modes)
            samples = sample_polar(source, radii, 14)
            spec = decompose(radii, samples, j_max=4)
            reconstruction = sample_polar(spec, radii, 14)
            assert np.max(np.abs(reconstruction - samples)) <= 1e-10

    def test_aliasing_precondition(self):
        radii = np.linspace(0.1, 3.0, 10)
        samples = np.ones((10, 3), dtype=complex)
        with pytest.raises(PreconditionError, match="M = 3"):
            decompose(radii, samples, j_max=2)

    def test_drop_floor_removes_noise_modes(self):
        radii = np.linspace(0.05, 5.0, 30)
        base = radial(RadialProfile.monomial(2.0))
        samples = sample_polar(base, radii, 12)
        samples[:, 3] += 1e-14  # angular noise far below the floor
        spec = decompose(radii, samples, j_max=3, drop_floor=1e-10)
        assert spec.mode_indices == (0,)

    def test_parseval_identity(self):
        # sum_j int |v_j|^2 r^(2s+1) e^(-r^2) dr = ||u||^2 / 2, both by quadrature
        spec = SymbolSpec.from_modes(
            {
                0: RadialProfile.polynomial([1.0, 0.5]),
                1: RadialProfile.monomial(1.0),
                -2: RadialProfile.polynomial([0.0, 0.0, 0.25]),
            }
        )
        quad = QuadratureSpec.for_exponent(16.0)
        for s in (0.0, 1.0, 2.3):
            lhs = 0.0
            for j, profile in spec.mode_items:
                lhs += gaussian_weighted_integral(
                    lambda r, p=profile: np.abs(p(r)) ** 2,
                    2.0 * s + 2.0,
                    quad,
                    growth_exponent=2.0 * profile.growth_exponent,
                ).real
            # independent 2D polar evaluation of the squared norm
            nodes, weights = np.polynomial.legendre.leggauss(400)
            r = 0.5 * 10.0 * (nodes + 1.0)
            w = 0.5 * 10.0 * weights
            values = sample_polar(spec, r, 32)
            mean_sq = np.mean(np.abs(values) ** 2, axis=1)
            norm_sq = 2.0 * float(np.sum(w * mean_sq * r ** (2.0 * s + 1.0) * np.exp(-(r**2))))
            assert lhs == pytest.approx(norm_sq / 2.0, rel=1e-6)


class TestDpolyNormEstimate:
    def test_constant(self):
        assert dpoly_norm_estimate(radial(RadialProfile.monomial(0.0)), 0.0, 0.0, [1.0, 2.0]) == 1.0

    def test_weight_grows_with_radius(self):
        grid = np.linspace(0.5, 9.0, 40)
        value = dpoly_norm_estimate(radial(RadialProfile.monomial(0.0)), 1.0, 0.0, grid)
        assert value == pytest.approx(10.0, rel=1e-12)

    def test_gaussian_weight_maximum(self):
        # max of r^2 e^(-r^2/4) is 4/e at r = 2; dense grid-search oracle
        dense = np.linspace(0.01, 12.0, 200_001)
        oracle = float(np.max(dense**2 * np.exp(-dense**2 / 4.0)))
        assert oracle == pytest.approx(4.0 * math.exp(-1.0), rel=1e-8)
        grid = np.linspace(0.05, 10.0, 4000)
        value = dpoly_norm_estimate(radial(RadialProfile.monomial(2.0)), 0.0, 0.25, grid)
        assert value == pytest.approx(4.0 * math.exp(-1.0), rel=1e-5)

    def test_rejects_bad_inputs(self):
        with pytest.raises(DomainError):
            dpoly_norm_estimate(RE_Z, 0.0, -1.0, [1.0])
        with pytest.raises(DomainError):
            dpoly_norm_estimate(RE_Z, 0.0, 0.0, [])


class TestFitGrowth:
    GRID = np.linspace(0.5, 50.0, 200)

    def test_constant(self):
        constant, exponent = fit_growth(radial(RadialProfile.monomial(0.0)), self.GRID)
        assert exponent == 0.0
        assert constant == pytest.approx(1.1, rel=1e-9)

    def test_cubic(self):
        _, exponent = fit_growth(radial(RadialProfile.monomial(3.0)), self.GRID)
        assert exponent == 3.0

    def test_bound_holds_with_headroom(self):
        spec = radial(RadialProfile.polynomial([1.0, 0.0, 2.0]))
        constant, exponent = fit_growth(spec, self.GRID)
        values = np.abs(np.asarray(spec.mode(0)(self.GRID)))
        assert np.all(values <= constant * (1.0 + self.GRID) ** exponent)

    def test_super_polynomial_rejected(self):
        blowup = RadialProfile.from_callable(
            lambda r: np.exp(np.asarray(r, dtype=float)),
            growth_exponent=0.0,
            growth_constant=math.exp(50.0) * 1.01,
        )
        with pytest.raises(ClassificationError):
            fit_growth(radial(blowup), self.GRID)


class TestPolarL2Norm:
    @pytest.mark.parametrize("s", [0.0, 1.0, 2.3])
    def test_constant_symbol_norm(self, s):
        # ||1||_{L^2(G_s)} = sqrt(Gamma(s+1))
        radii = np.linspace(1e-4, 10.0, 20_000)
        samples = np.ones((radii.size, 8), dtype=complex)
        expected = math.sqrt(math.exp(math.lgamma(s + 1.0)))
        assert polar_l2_norm(radii, samples, s) == pytest.approx(expected, rel=1e-6)
