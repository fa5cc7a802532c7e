"""Fourier-side operations: diagonal Fourier transforms on expansions, STFT by
direct quadrature and through the sheared tensor product, and the Bargmann
transform with its translation/modulation identities.

Fourier convention: ``(F f)(xi) = (2 pi)^{-d/2} int f(x) exp(-i <x, xi>) dx``.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import BlockMismatch, DegenerateSamples, DimMismatch, ZeroWindow
from .hermite import HermiteExpansion, SampledFunction, analyze, as_points, degree_grid, synthesize
from .quadrature import gauss_hermite_rule, tensor_grid

DEFAULT_NODES = 128


def _as_sampled(f):
    if isinstance(f, HermiteExpansion):
        return SampledFunction(f.dim, lambda p, F=f: synthesize(F, p), name="expansion")
    return f


def fourier(F):
    """Full Fourier transform of an expansion: ``c_alpha -> (-i)^{|alpha|} c_alpha``."""
    k = degree_grid(F.dim, F.degree)
    return HermiteExpansion(F.dim, F.degree, F.coeffs * (-1j) ** (k % 4))


def partial_fourier(F, block, block_dims):
    """Fourier transform in the coordinates of block ``block`` (0-based) only."""
    block_dims = tuple(int(b) for b in block_dims)
    if sum(block_dims) != F.dim or not 0 <= block < len(block_dims):
        raise BlockMismatch(f"blocks {block_dims} / block {block} for dim {F.dim}")
    start = sum(block_dims[:block])
    idx = np.indices((F.degree + 1,) * F.dim)
    k = idx[start:start + block_dims[block]].sum(axis=0)
    return HermiteExpansion(F.dim, F.degree, F.coeffs * (-1j) ** (k % 4))


def fourier_quadrature(f, xi, n_quad=DEFAULT_NODES):
    """``(2 pi)^{-1/2} int f(y) exp(-i y xi) dy`` by Gauss-Hermite (1-d oracle)."""
    f = _as_sampled(f)
    if f.dim != 1:
        raise DimMismatch("fourier_quadrature is one-dimensional")
    rule = gauss_hermite_rule(n_quad)
    amp = (rule.scaled_weights * f(rule.nodes))[None, :]
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    return kernels.phase_sum(amp, rule.nodes, xi)[0] / math.sqrt(2 * math.pi)


def translate(f, x0):
    """``y -> f(y - x0)``."""
    f = _as_sampled(f)
    x0 = np.broadcast_to(np.asarray(x0, dtype=float), (f.dim,))
    return SampledFunction(f.dim, lambda p: f(p - x0), name=f"translate({f.name})")


def modulate(f, xi0):
    """``y -> f(y) exp(-i <y, xi0>)``."""
    f = _as_sampled(f)
    xi0 = np.broadcast_to(np.asarray(xi0, dtype=float), (f.dim,))
    return SampledFunction(f.dim, lambda p: f(p) * np.exp(-1j * (p @ xi0)),
                           name=f"modulate({f.name})")


def apply_U(F):
    """``F(x, y) -> F(y, y - x)`` for a field on ``R^d x R^d``."""
    if F.dim % 2:
        raise DimMismatch(f"U needs two equal blocks, got dim {F.dim}")
    d = F.dim // 2

    def ev(p):
        x, y = p[:, :d], p[:, d:]
        return F(np.hstack([y, y - x]))

    return SampledFunction(F.dim, ev, name=f"U({F.name})")


def tensor_field(f, g):
    """``(x, y) -> f(x) g(y)`` as a sampled function."""
    f, g = _as_sampled(f), _as_sampled(g)
    d1 = f.dim
    return SampledFunction(d1 + g.dim, lambda p: f(p[:, :d1]) * g(p[:, d1:]),
                           name=f"{f.name}(x){g.name}")


def conj_field(f):
    f = _as_sampled(f)
    return SampledFunction(f.dim, lambda p: np.conj(f(p)), name=f"conj({f.name})")


@dataclass
class PhaseGrid:
    """Uniform ``(x, xi)`` lattice with a value table ``values[i, j] ~ (x_i, xi_j)``."""

    x_axis: np.ndarray
    xi_axis: np.ndarray
    values: np.ndarray = None

    def __post_init__(self):
        for ax in (self.x_axis, self.xi_axis):
            ax = np.asarray(ax, dtype=float)
            if ax.ndim != 1 or ax.size < 1:
                raise ValueError("axes must be nonempty 1-d arrays")
            if ax.size > 1:
                step = np.diff(ax)
                if np.any(step <= 0) or not np.allclose(step, step[0], rtol=1e-9, atol=0):
                    raise ValueError("axes must be strictly increasing and uniform")
        self.x_axis = np.asarray(self.x_axis, dtype=float)
        self.xi_axis = np.asarray(self.xi_axis, dtype=float)

    @classmethod
    def uniform(cls, n, extent, n_xi=None, extent_xi=None):
        n_xi = n if n_xi is None else n_xi
        extent_xi = extent if extent_xi is None else extent_xi
        return cls(np.linspace(-extent, extent, n), np.linspace(-extent_xi, extent_xi, n_xi))

    def with_values(self, values):
        return PhaseGrid(self.x_axis, self.xi_axis, values)


def _check_window(phi, nodes):
    if isinstance(phi, HermiteExpansion):
        if not np.any(phi.coeffs):
            raise ZeroWindow("window expansion is identically zero")
        return
    if not np.any(np.abs(phi(nodes)) > 0):
        raise ZeroWindow("window vanishes on every quadrature node")


def stft_direct(f, phi, grid, n_quad=DEFAULT_NODES):
    """``V_phi f(x, xi) = (2 pi)^{-1/2} int f(y) conj(phi(y - x)) exp(-i y xi) dy`` (1-d)."""
    f, phi_s = _as_sampled(f), _as_sampled(phi)
    if f.dim != 1 or phi_s.dim != 1:
        raise DimMismatch("STFT grids are tabulated for d = 1")
    rule = gauss_hermite_rule(n_quad)
    y = rule.nodes
    _check_window(phi, y)
    shifted = y[None, :] - grid.x_axis[:, None]
    win = np.conj(phi_s(shifted.ravel())).reshape(shifted.shape)
    amp = (rule.scaled_weights * f(y))[None, :] * win
    vals = kernels.phase_sum(amp, y, grid.xi_axis) / math.sqrt(2 * math.pi)
    return grid.with_values(vals)


def stft_tensor_route(f, phi, grid, n_quad=DEFAULT_NODES, method="quadrature", degree=48):
    """STFT as the partial Fourier transform in ``y`` of ``U(f (x) conj(phi))``.

    ``method='quadrature'`` integrates each ``x``-slice against ``exp(-i y xi)``;
    ``method='hermite'`` expands each slice in Hermite functions of ``y`` and
    applies the diagonal Fourier multiplier ``(-i)^n`` before resynthesis.
    """
    f, phi_s = _as_sampled(f), _as_sampled(phi)
    if f.dim != 1 or phi_s.dim != 1:
        raise DimMismatch("STFT grids are tabulated for d = 1")
    rule = gauss_hermite_rule(n_quad)
    _check_window(phi, rule.nodes)
    G = apply_U(tensor_field(f, conj_field(phi_s)))
    xs = grid.x_axis
    if method == "quadrature":
        y = rule.nodes
        pts = np.column_stack([np.repeat(xs, y.size), np.tile(y, xs.size)])
        amp = G(pts).reshape(xs.size, y.size) * rule.scaled_weights
        vals = kernels.phase_sum(amp, y, grid.xi_axis) / math.sqrt(2 * math.pi)
    elif method == "hermite":
        vals = np.empty((xs.size, grid.xi_axis.size), dtype=np.complex128)
        for i, x in enumerate(xs):
            slice_ = SampledFunction(1, lambda p, x=x: G(np.column_stack([np.full(len(p), x), p[:, 0]])))
            vals[i] = synthesize(fourier(analyze(slice_, degree, n_quad, tol=None)), grid.xi_axis)
    else:
        raise ValueError(f"unknown method {method!r}")
    return grid.with_values(vals)


@dataclass
class BargmannSamples:
    z_points: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.z_points = np.asarray(self.z_points, dtype=np.complex128)
        self.values = np.asarray(self.values, dtype=np.complex128)
        if len(self.z_points) != len(self.values):
            raise ValueError("z_points and values differ in length")


def _as_zpoints(z, dim):
    z = np.asarray(z, dtype=np.complex128)
    if dim == 1:
        return z.reshape(-1, 1)
    if z.ndim == 1 and z.size == dim:
        return z.reshape(1, dim)
    if z.ndim != 2 or z.shape[1] != dim:
        raise DimMismatch(f"z points of shape {z.shape} for dim {dim}")
    return z


def bargmann(f, z_points, n_quad=None):
    """``pi^{-d/4} int f(y) exp(-(<z,z> + |y|^2)/2 + sqrt(2) <z,y>) dy`` by Gauss-Hermite.

    ``<z, y>`` is bilinear. The default node count is ``2N + 16`` for expansions
    of degree ``N`` and 96 otherwise.
    """
    if n_quad is None:
        n_quad = 2 * f.degree + 16 if isinstance(f, HermiteExpansion) else 96
    fs = _as_sampled(f)
    d = fs.dim
    z = _as_zpoints(z_points, d)
    rule = gauss_hermite_rule(n_quad)
    y, w = tensor_grid(rule, d)
    fy = fs(y) * w
    zz = np.sum(z * z, axis=1)
    expo = (-0.5 * (zz[:, None] + np.sum(y * y, axis=1)[None, :])
            + math.sqrt(2.0) * (z @ y.T))
    vals = (np.exp(expo) @ fy) * math.pi ** (-d / 4)
    return BargmannSamples(z if d > 1 else z[:, 0], vals)


@dataclass
class IdentityErrors:
    translation: float
    modulation: float


def _rel(lhs, rhs):
    scale = np.max(np.abs(lhs))
    if scale == 0:
        return float(np.max(np.abs(rhs)))
    return float(np.max(np.abs(lhs - rhs)) / scale)


def bargmann_identity_check(f, x0, xi0, z_points, form="printed", n_quad=None):
    """Both sides of the translation and modulation identities, by independent quadrature.

    ``form='printed'`` uses
    ``B(f(.-x0))(z) = exp(sqrt2 <z,x0> + |x0|^2/2) Bf(z + sqrt2 x0)`` and
    ``B(f e^{-i<.,xi0>})(z) = exp(-sqrt2 i <z,xi0> + |xi0|^2/2) Bf(z + i sqrt2 xi0)``.
    ``form='exact'`` uses the forms that follow from the kernel:
    ``exp(<z,x0>/sqrt2 - |x0|^2/4) Bf(z - x0/sqrt2)`` and
    ``exp(-i <z,xi0>/sqrt2 - |xi0|^2/4) Bf(z - i xi0/sqrt2)``.

    Errors are ``max|lhs - rhs| / max|lhs|`` over the sample points.
    """
    fs = _as_sampled(f)
    d = fs.dim
    z = _as_zpoints(z_points, d)
    x0 = np.broadcast_to(np.asarray(x0, dtype=float), (d,))
    xi0 = np.broadcast_to(np.asarray(xi0, dtype=float), (d,))
    if n_quad is None:
        n_quad = 2 * f.degree + 48 if isinstance(f, HermiteExpansion) else 128
    s2 = math.sqrt(2.0)
    lhs_t = bargmann(translate(fs, x0), z, n_quad).values
    lhs_m = bargmann(modulate(fs, xi0), z, n_quad).values
    if form == "printed":
        rhs_t = np.exp(s2 * (z @ x0) + 0.5 * (x0 @ x0)) * bargmann(fs, z + s2 * x0, n_quad).values
        rhs_m = (np.exp(-s2 * 1j * (z @ xi0) + 0.5 * (xi0 @ xi0))
                 * bargmann(fs, z + 1j * s2 * xi0, n_quad).values)
    elif form == "exact":
        rhs_t = np.exp((z @ x0) / s2 - 0.25 * (x0 @ x0)) * bargmann(fs, z - x0 / s2, n_quad).values
        rhs_m = (np.exp(-1j * (z @ xi0) / s2 - 0.25 * (xi0 @ xi0))
                 * bargmann(fs, z - 1j * xi0 / s2, n_quad).values)
    else:
        raise ValueError(f"unknown identity form {form!r}")
    return IdentityErrors(_rel(lhs_t, rhs_t), _rel(lhs_m, rhs_m))


@dataclass
class GrowthFit:
    law: str
    power: float        # coefficient of log|z| in the class fit
    rate: float         # coefficient of |z|^2 in the free fit
    class_rate: float   # coefficient of the class law g_s(|z|)
    intercept: float
    holds: bool


def _class_law(s):
    from .spaces import Flat
    if isinstance(s, Flat):
        p = 2 * s.sigma / (s.sigma + 1)
        return f"|z|^{p:g}", lambda rho: rho ** p
    s = float(s)
    if s == 0.5:
        return "|z|^2", lambda rho: rho ** 2
    if 0 < s < 0.5:
        q = 1.0 / (1.0 - 2.0 * s)
        return f"log<z>^{q:g}", lambda rho: np.log(np.sqrt(1 + rho ** 2)) ** q
    raise ValueError(f"no Bargmann growth class for order {s}")


def a_space_growth_check(samples, s, regularity="roumieu", noise_floor=1e-14, slack=0.05):
    """Fit the radial growth of a Bargmann transform against the class law for ``s``.

    The upper envelope ``max |F|`` over samples sharing a radius is fitted as
    ``a + p log|z| + c g_s(|z|)`` with ``g_s`` the class law. The fit must explain
    the envelope up to a factor ``e``. Roumieu type then needs ``c`` finite (and
    ``c < 1/2`` for ``g = |z|^2``); Beurling type needs ``c <= slack``.
    """
    z = np.asarray(samples.z_points)
    rho = np.sqrt(np.sum(np.abs(z.reshape(len(samples.values), -1)) ** 2, axis=1))
    mag = np.abs(samples.values)
    if not np.any(mag > noise_floor):
        raise DegenerateSamples("all |F| below the noise floor")
    keep = (mag > noise_floor) & (rho > 0)
    rho, mag = rho[keep], mag[keep]
    if rho.size == 0 or rho.max() / rho.min() < 10.0:
        raise DegenerateSamples("sample radii must span at least one decade")
    key = np.round(rho, 9)
    radii = np.unique(key)
    if radii.size < 4:
        raise DegenerateSamples("need at least four distinct radii")
    env = np.array([np.log(mag[key == r].max()) for r in radii])
    logr = np.log(radii)
    free, *_ = np.linalg.lstsq(np.column_stack([np.ones_like(radii), logr, radii ** 2]), env,
                               rcond=None)
    law, g = _class_law(s)
    B = np.column_stack([np.ones_like(radii), logr, g(radii)])
    cls, *_ = np.linalg.lstsq(B, env, rcond=None)
    class_rate = float(cls[2])
    explained = bool(np.all(env <= B @ cls + 1.0))
    if regularity == "beurling":
        holds = explained and class_rate <= slack
    else:
        holds = explained and (class_rate < 0.5 if law == "|z|^2" else math.isfinite(class_rate))
    return GrowthFit(law, float(cls[1]), float(free[2]), class_rate, float(cls[0]), bool(holds))
