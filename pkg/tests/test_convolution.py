import math

import numpy as np
import pytest

from hermitex.convolution import (MeshLadder, convergence_rate, convolution_reference, convolve,
                                  residual_seminorm, riemann_convolution)
from hermitex.errors import DegenerateFit, DimMismatch, TailNotNegligible
from hermitex.functions import gaussian, hermite_function
from hermitex.hermite import HermiteExpansion, random_expansion

H0 = HermiteExpansion.basis((0,))


def test_reference_closed_forms():
    x = np.linspace(-3, 3, 13)
    # h_0 * h_0 = exp(-x^2/4); e^{-x^2} * e^{-x^2} = sqrt(pi/2) e^{-x^2/2}
    assert np.allclose(convolution_reference(H0, H0, x), np.exp(-x ** 2 / 4), atol=1e-14)
    got = convolution_reference(gaussian(1.0), gaussian(1.0), x)
    assert np.allclose(got, math.sqrt(math.pi / 2) * np.exp(-x ** 2 / 2), atol=1e-14)


def test_reference_d2():
    pts = np.array([[0.0, 0.0], [1.0, -0.5]])
    got = convolution_reference(gaussian(1.0, 2), gaussian(1.0, 2), pts)
    ref = (math.pi / 2) * np.exp(-np.sum(pts ** 2, axis=1) / 2)
    assert np.allclose(got, ref, atol=1e-13)


def test_riemann_sum_matches_reference():
    x = np.linspace(-2, 2, 9)
    r = riemann_convolution(H0, H0, 0.3, x)
    assert np.allclose(r, np.exp(-x ** 2 / 4), atol=1e-13)


def test_riemann_sum_is_spectrally_accurate():
    # Poisson summation: the error of the lattice sum decays like exp(-pi^2 / eps^2)
    x = np.array([0.0, 0.7])
    ref = np.exp(-x ** 2 / 4)
    errs = [np.max(np.abs(riemann_convolution(H0, H0, e, x) - ref)) for e in (1.6, 1.2, 0.8)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-6 < errs[0]


def test_tail_guard():
    with pytest.raises(TailNotNegligible):
        riemann_convolution(H0, H0, 0.1, 0.0, lattice_radius=3.0)
    with pytest.raises(DimMismatch):
        riemann_convolution(H0, HermiteExpansion.basis((0, 0)), 0.1, 0.0)
    with pytest.raises(ValueError):
        riemann_convolution(H0, H0, 0.0, 0.0)


def test_mesh_ladder_validation():
    assert MeshLadder((0.2, 0.1)).epsilons == (0.2, 0.1)
    with pytest.raises(ValueError):
        MeshLadder((0.1, 0.2))
    with pytest.raises(ValueError):
        MeshLadder((0.2, -0.1))


@pytest.mark.parametrize("seed", range(3))
def test_associativity(seed):
    rng = np.random.default_rng(seed)
    f, phi, psi = (random_expansion(rng, 1, 4) for _ in range(3))
    x = rng.uniform(-3, 3, 10)
    a = convolution_reference(convolve(f, phi), psi, x)
    b = convolution_reference(f, convolve(phi, psi), x)
    assert np.max(np.abs(a - b)) < 1e-8


def test_residual_seminorm_at_noise_floor():
    r = residual_seminorm(H0, H0, 0.2, (1, 1), N=20)
    assert r < 1e-12


def test_convergence_rate_degenerate_on_fine_ladder():
    with pytest.raises(DegenerateFit) as info:
        convergence_rate(H0, H0, MeshLadder((0.2, 0.1, 0.05, 0.025)), N=20)
    assert not info.value.report.used.any()


def test_convergence_rate_coarse_ladder_is_superlinear():
    rep = convergence_rate(hermite_function((0,)), H0, (1.2, 1.0, 0.8, 0.6), N=20)
    assert rep.used[:3].all()
    assert rep.slope > 5


def test_repeated_mesh_size_is_degenerate():
    with pytest.raises(DegenerateFit):
        convergence_rate(H0, H0, (0.9, 0.9, 0.9, 0.9), N=20)
    with pytest.raises(ValueError):
        convergence_rate(H0, H0, (0.9, 0.8, 0.7), N=20)


def test_riemann_sum_commutes():
    phi, psi = random_expansion(np.random.default_rng(1), 1, 4), HermiteExpansion.basis((2,))
    x = np.linspace(-2, 2, 5)
    gap = np.max(np.abs(riemann_convolution(phi, psi, 0.025, x) - riemann_convolution(psi, phi, 0.025, x)))
    assert gap < 1e-6


def test_zero_and_odd_cases():
    from hermitex.functions import zero
    assert riemann_convolution(H0, zero(), 0.1, 0.3) == 0
    assert abs(convolution_reference(H0, HermiteExpansion.basis((1,)), 0.0)) < 1e-15
    assert abs(riemann_convolution(H0, H0, 0.05, 0.0) - 1) < 1e-3
