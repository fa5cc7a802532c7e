import math

import numpy as np
import pytest

from hermitex.errors import BlockMismatch, DegenerateSamples, DimMismatch, ZeroWindow
from hermitex.functions import gaussian, hermite_function, zero
from hermitex.hermite import HermiteExpansion, SampledFunction, random_expansion, synthesize
from hermitex.transforms import (PhaseGrid, a_space_growth_check, apply_U, bargmann,
                                 bargmann_identity_check, fourier, fourier_quadrature,
                                 modulate, partial_fourier, stft_direct, stft_tensor_route,
                                 tensor_field, translate)


def test_fourier_multiplier():
    F = HermiteExpansion.basis((2, 3))
    assert fourier(F)[(2, 3)] == pytest.approx((-1j) ** 5)


@pytest.mark.parametrize("n", [0, 1, 5, 12, 20])
def test_quadrature_fourier_eigenfunctions(n):
    xi = np.linspace(-5, 5, 41)
    got = fourier_quadrature(hermite_function((n,)), xi)
    assert np.max(np.abs(got - (-1j) ** n * synthesize(HermiteExpansion.basis((n,)), xi))) < 1e-8


def test_fourier_of_gaussian_closed_form():
    xi = np.linspace(-4, 4, 17)
    # F[e^{-x^2}](xi) = 2^{-1/2} e^{-xi^2/4}
    got = fourier_quadrature(gaussian(1.0), xi)
    assert np.allclose(got, np.exp(-xi ** 2 / 4) / math.sqrt(2), atol=1e-14)


def test_partial_fourier_blocks_compose(rng):
    F = random_expansion(rng, 3, 5, complex_values=True)
    both = partial_fourier(partial_fourier(F, 0, (1, 2)), 1, (1, 2))
    assert np.allclose(both.coeffs, fourier(F).coeffs, atol=1e-15)
    with pytest.raises(BlockMismatch):
        partial_fourier(F, 2, (1, 2))


def test_U_has_order_six(rng):
    G = SampledFunction(2, lambda p: np.exp(-(p[:, 0] - 0.3) ** 2 - 2 * (p[:, 1] + 0.7) ** 2) * (1 + p[:, 0]))
    pts = rng.uniform(-2, 2, (30, 2))
    U3 = apply_U(apply_U(apply_U(G)))
    assert np.allclose(U3(pts), G(-pts), atol=1e-15)
    assert not np.allclose(U3(pts), G(pts))
    U6 = apply_U(apply_U(apply_U(U3)))
    assert np.allclose(U6(pts), G(pts), atol=1e-15)
    with pytest.raises(DimMismatch):
        apply_U(gaussian(1.0, 3))


def test_translate_modulate():
    f = gaussian(1.0)
    assert translate(f, 1.5)(1.5) == pytest.approx(1.0)
    assert modulate(f, 2.0)(0.5) == pytest.approx(np.exp(-0.25) * np.exp(-1j))


@pytest.mark.parametrize("pair", [((0,), (0,)), ((2,), (0,)), ((1,), (1,))])
def test_stft_routes_agree(pair):
    f, phi = (hermite_function(a) for a in pair)
    grid = PhaseGrid.uniform(32, 4.0)
    d = stft_direct(f, phi, grid).values
    t = stft_tensor_route(f, phi, grid).values
    assert np.max(np.abs(d - t)) < 1e-7
    h = stft_tensor_route(f, phi, PhaseGrid.uniform(8, 3.0), method="hermite").values
    assert np.max(np.abs(h - stft_direct(f, phi, PhaseGrid.uniform(8, 3.0)).values)) < 1e-7


def test_stft_gaussian_closed_form():
    grid = PhaseGrid.uniform(32, 4.0)
    V = stft_direct(hermite_function((0,)), hermite_function((0,)), grid).values
    X, XI = np.meshgrid(grid.x_axis, grid.xi_axis, indexing="ij")
    ref = np.exp(-(X ** 2 + XI ** 2) / 4) / math.sqrt(2 * math.pi)
    assert np.max(np.abs(np.abs(V) - ref)) < 1e-7


def test_stft_zero_window():
    grid = PhaseGrid.uniform(4, 1.0)
    with pytest.raises(ZeroWindow):
        stft_direct(gaussian(1.0), zero(), grid)
    with pytest.raises(ZeroWindow):
        stft_tensor_route(gaussian(1.0), HermiteExpansion.zeros(1, 3), grid)


def test_phase_grid_validation():
    with pytest.raises(ValueError):
        PhaseGrid(np.array([0.0, 1.0, 3.0]), np.array([0.0]))
    with pytest.raises(ValueError):
        PhaseGrid(np.array([1.0, 0.0]), np.array([0.0]))


def test_bargmann_of_hermite_is_monomial(rng):
    z = rng.uniform(-1.4, 1.4, 10) + 1j * rng.uniform(-1.4, 1.4, 10)
    for n in range(6):
        B = bargmann(hermite_function((n,)), z).values
        assert np.max(np.abs(B - z ** n / math.sqrt(math.factorial(n)))) < 1e-7


def test_bargmann_d2_product(rng):
    z = rng.normal(size=(5, 2)) + 1j * rng.normal(size=(5, 2))
    B = bargmann(HermiteExpansion.basis((1, 2)), z).values
    ref = z[:, 0] * z[:, 1] ** 2 / math.sqrt(2)
    assert np.allclose(B, ref, atol=1e-10)


def test_bargmann_identities_exact_forms(rng):
    z = rng.uniform(-1.4, 1.4, 10) + 1j * rng.uniform(-1.4, 1.4, 10)
    for f in (hermite_function((0,)), hermite_function((1,))):
        for x0, xi0 in [(1.0, -0.5), (-2.0, 2.0)]:
            e = bargmann_identity_check(f, x0, xi0, z, form="exact")
            assert e.translation < 1e-8 and e.modulation < 1e-8


def test_bargmann_identities_printed_forms_do_not_hold(rng):
    # the commonly quoted normalisation with sqrt(2) x0 shifts is inconsistent with this kernel
    z = rng.uniform(-1.4, 1.4, 10) + 1j * rng.uniform(-1.4, 1.4, 10)
    e = bargmann_identity_check(hermite_function((0,)), 1.0, 1.0, z, form="printed")
    assert e.translation > 1e-3 and e.modulation > 1e-3
    with pytest.raises(ValueError):
        bargmann_identity_check(hermite_function((0,)), 1.0, 1.0, z, form="other")


def _radial_samples(f, radii, angles=8):
    rho = np.repeat(radii, angles)
    th = np.tile(np.linspace(0, 2 * np.pi, angles, endpoint=False), len(radii))
    return bargmann(f, rho * np.exp(1j * th))


def test_growth_check_classes():
    radii = np.linspace(0.3, 4.0, 15)
    poly = _radial_samples(hermite_function((3,)), radii)
    assert a_space_growth_check(poly, 0.5, "roumieu").holds
    assert a_space_growth_check(poly, 0.5, "beurling").holds
    gauss = _radial_samples(gaussian(0.2), radii)
    fit = a_space_growth_check(gauss, 0.5, "roumieu")
    # B[e^{-a x^2}](z) grows like exp(c |z|^2) with c = (1 - 2a) / (2 (1 + 2a))
    assert fit.class_rate == pytest.approx(0.6 / 2.8, rel=1e-6)
    assert fit.holds
    assert not a_space_growth_check(gauss, 0.5, "beurling").holds


def test_growth_check_degenerate():
    with pytest.raises(DegenerateSamples):
        a_space_growth_check(_radial_samples(hermite_function((0,)), np.linspace(1, 2, 5)), 0.5)
    with pytest.raises(DegenerateSamples):
        a_space_growth_check(_radial_samples(zero(), np.linspace(0.1, 4, 5)), 0.5)


def test_fourier_fourth_power_and_parseval(rng):
    F = random_expansion(rng, 2, 6, complex_values=True)
    F4 = fourier(fourier(fourier(fourier(F))))
    assert np.array_equal(F4.coeffs, F.coeffs)
    assert np.sum(np.abs(fourier(F).coeffs) ** 2) == pytest.approx(np.sum(np.abs(F.coeffs) ** 2), rel=1e-15)


def test_U_coordinate_readoff():
    X = SampledFunction(2, lambda p: p[:, 0])
    Y = SampledFunction(2, lambda p: p[:, 1])
    assert apply_U(X)([0.4, 1.7]) == pytest.approx(1.7)
    assert apply_U(Y)([0.4, 1.7]) == pytest.approx(1.3)


def test_stft_odd_integrand_vanishes():
    grid = PhaseGrid(np.array([0.0]), np.array([0.0]))
    assert abs(stft_direct(hermite_function((1,)), hermite_function((0,)), grid).values[0, 0]) < 1e-15
    V = stft_direct(hermite_function((0,)), hermite_function((0,)), grid).values[0, 0]
    assert V == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-14)
