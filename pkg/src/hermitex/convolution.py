"""Lattice (Riemann-sum) convolution and its convergence diagnostics."""
import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import DegenerateFit, DimMismatch, TailNotNegligible
from .hermite import HermiteExpansion, SampledFunction, analyze, as_points, synthesize
from .multiindex import AnisotropicOrder, graded_enumerate, log_factorial_power
from .quadrature import gauss_hermite_rule, tensor_grid

DEFAULT_RADIUS = 12.0
REFERENCE_ACCURACY = 1e-10
REFERENCE_NODES = 160


def _sampled(f):
    if isinstance(f, HermiteExpansion):
        return SampledFunction(f.dim, lambda p, F=f: synthesize(F, p), name="expansion")
    return f


def _turning_point(f):
    return math.sqrt(2 * f.degree + 1) if isinstance(f, HermiteExpansion) else 0.0


@dataclass(frozen=True)
class MeshLadder:
    epsilons: tuple
    lattice_radius: float = None

    def __post_init__(self):
        eps = tuple(float(e) for e in self.epsilons)
        if any(e <= 0 for e in eps):
            raise ValueError("mesh sizes must be positive")
        if any(b >= a for a, b in zip(eps, eps[1:])):
            raise ValueError("mesh sizes must be strictly decreasing")
        object.__setattr__(self, "epsilons", eps)


def riemann_convolution(phi, psi, eps, x_points, lattice_radius=None, tol=1e-13):
    """``sum_k phi(x - eps k) psi(eps k) eps^d`` over ``|eps k|_inf <= lattice_radius``.

    Raises :class:`TailNotNegligible` when a summand on the lattice boundary
    exceeds ``tol``.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if lattice_radius is None:
        lattice_radius = DEFAULT_RADIUS + max(_turning_point(phi), _turning_point(psi))
    phi, psi = _sampled(phi), _sampled(psi)
    if phi.dim != psi.dim:
        raise DimMismatch(f"dims {phi.dim} and {psi.dim}")
    d = phi.dim
    pts, single = as_points(x_points, d)
    K = int(math.floor(lattice_radius / eps))
    ks = np.arange(-K, K + 1)
    lattice = np.array(list(product(ks, repeat=d)), dtype=float).reshape(-1, d) * eps
    psi_vals = psi(lattice)
    diff = pts[:, None, :] - lattice[None, :, :]
    phi_vals = phi(diff.reshape(-1, d)).reshape(len(pts), len(lattice))
    terms = phi_vals * psi_vals[None, :]
    edge = np.any(np.abs(np.abs(lattice) - K * eps) < 0.5 * eps, axis=1)
    tail = float(np.max(np.abs(terms[:, edge]))) if edge.any() else 0.0
    if tail > tol:
        raise TailNotNegligible(f"boundary summand {tail:.3e} > {tol:.1e} at radius {lattice_radius}")
    out = terms.sum(axis=1) * eps ** d
    return out[0] if single else out


def convolution_reference(phi, psi, x_points, n_quad=REFERENCE_NODES):
    """``int phi(x - y) psi(y) dy`` by Gauss-Hermite with the Gaussian factor folded into the weights."""
    phi, psi = _sampled(phi), _sampled(psi)
    if phi.dim != psi.dim:
        raise DimMismatch(f"dims {phi.dim} and {psi.dim}")
    d = phi.dim
    pts, single = as_points(x_points, d)
    y, w = tensor_grid(gauss_hermite_rule(n_quad), d)
    diff = pts[:, None, :] - y[None, :, :]
    vals = phi(diff.reshape(-1, d)).reshape(len(pts), len(y))
    out = vals @ (w * psi(y))
    return out[0] if single else out


def convolve(phi, psi, n_quad=REFERENCE_NODES):
    """``phi * psi`` as a sampled function backed by :func:`convolution_reference`."""
    phi, psi = _sampled(phi), _sampled(psi)
    return SampledFunction(phi.dim, lambda p: convolution_reference(phi, psi, p, n_quad),
                           name=f"({phi.name}*{psi.name})")


def _derivative_expansion(phi, beta, N):
    from .spaces import _derivative, _expansion_of
    return _derivative(_expansion_of(phi, N, None, 1e-15), beta)


def _index_pairs(index_set, d):
    if isinstance(index_set, tuple) and len(index_set) == 2 and all(np.ndim(v) == 0 for v in index_set):
        a_max, b_max = index_set
        return [(a, b) for b in graded_enumerate(d, b_max) for a in graded_enumerate(d, a_max)]
    return [(tuple(a), tuple(b)) for a, b in index_set]


def residual_seminorm(phi, psi, eps, index_set=(0, 0), h=1.0, s=0.5, sigma=0.5, grid=None,
                      N=40, lattice_radius=None):
    """``sup |x^alpha D^beta (phi*psi - riemann_sum)| / (h^{|alpha+beta|} alpha!^s beta!^sigma)``.

    ``index_set`` is ``(alpha_max, beta_max)`` or an explicit list of
    ``(alpha, beta)`` pairs. ``D^beta`` falls on ``phi`` only, through the
    ladder relations on its degree-``N`` expansion.
    """
    d = phi.dim
    pairs = _index_pairs(index_set, d)
    s_ord = AnisotropicOrder.isotropic(s, d)
    sig_ord = AnisotropicOrder.isotropic(sigma, d)
    if grid is None:
        L = math.sqrt(2 * N + 1) + 4.0
        ax = np.linspace(-L, L, 401 if d == 1 else 61)
        pts = np.stack([g.ravel() for g in np.meshgrid(*([ax] * d), indexing="ij")], axis=1)
    else:
        pts = as_points(grid, d)[0]
    if lattice_radius is None:
        lattice_radius = DEFAULT_RADIUS + math.sqrt(2 * N + 1)
    cache = {}
    best = 0.0
    for alpha, beta in pairs:
        if beta not in cache:
            phib = phi if sum(beta) == 0 else _derivative_expansion(phi, beta, N)
            cache[beta] = (convolution_reference(phib, psi, pts)
                           - riemann_convolution(phib, psi, eps, pts, lattice_radius))
        diff = cache[beta]
        mono = np.prod(pts ** np.asarray(alpha, dtype=float), axis=1)
        sup = float(np.max(np.abs(mono * diff)))
        if sup == 0.0:
            continue
        logw = ((sum(alpha) + sum(beta)) * math.log(h) + log_factorial_power(alpha, s_ord)
                + log_factorial_power(beta, sig_ord))
        best = max(best, math.exp(math.log(sup) - logw))
    return best


@dataclass
class ResidualReport:
    epsilons: np.ndarray
    residuals: np.ndarray
    used: np.ndarray
    slope: float
    constant: float
    floor: float

    @property
    def ratio_spread(self):
        """max/min of ``residual / eps`` over the fitted points."""
        r = self.residuals[self.used] / self.epsilons[self.used]
        return float(r.max() / r.min()) if r.size else math.nan


def convergence_rate(phi, psi, ladder, index_set=(0, 0), h=1.0, s=0.5, sigma=0.5, grid=None,
                     N=40, floor=10 * REFERENCE_ACCURACY):
    """Least-squares slope of ``log residual`` against ``log eps`` along ``ladder``.

    Points whose residual is below ``floor`` are excluded. Raises
    :class:`DegenerateFit` (with the partial report on ``.report``) when fewer
    than two distinct mesh sizes remain.
    """
    eps = np.asarray(ladder.epsilons if isinstance(ladder, MeshLadder) else ladder, dtype=float)
    radius = ladder.lattice_radius if isinstance(ladder, MeshLadder) else None
    if eps.size < 4:
        raise ValueError("need at least four ladder points")
    res = np.array([residual_seminorm(phi, psi, e, index_set, h, s, sigma, grid, N, radius)
                    for e in eps])
    used = res >= floor
    report = ResidualReport(eps, res, used, math.nan, math.nan, floor)
    if np.unique(eps[used]).size < 2:
        err = DegenerateFit(
            f"only {int(np.unique(eps[used]).size)} distinct mesh sizes above the noise floor "
            f"{floor:.1e}; residuals {np.array2string(res, precision=3)}")
        err.report = report
        raise err
    slope, _ = np.polyfit(np.log(eps[used]), np.log(res[used]), 1)
    report.slope = float(slope)
    report.constant = float(np.max(res[used] / eps[used]))
    return report
