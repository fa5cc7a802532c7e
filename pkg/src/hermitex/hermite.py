"""Hermite functions, expansions, and analysis/synthesis by quadrature.

Expansions keep a dense coefficient box of shape ``(N+1,)*d``; entries with
``|alpha| > N`` are always zero. The box makes tensor products and pairings
plain array contractions.
"""
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import kernels
from .errors import DegreeCap, DimMismatch, QuadratureUnderResolved
from .multiindex import as_multiindex, graded_enumerate
from .quadrature import gauss_hermite_rule

EVAL_DEGREE_CAP = 512
DEFAULT_TOL = 1e-12
DEFAULT_DEGREE = 32


def degree_grid(dim, N):
    """Array of total degrees ``|alpha|`` over the ``(N+1,)*dim`` box."""
    return np.indices((N + 1,) * dim).sum(axis=0)


class HermiteExpansion:
    """Finite Hermite series ``sum_{|alpha| <= N} c_alpha h_alpha`` on R^d."""

    __slots__ = ("dim", "degree", "coeffs")

    def __init__(self, dim, degree, coeffs=None):
        dim, degree = int(dim), int(degree)
        if dim < 1 or degree < 0:
            raise ValueError("need dim >= 1 and degree >= 0")
        shape = (degree + 1,) * dim
        if coeffs is None:
            arr = np.zeros(shape, dtype=np.complex128)
        else:
            arr = np.array(coeffs, dtype=np.complex128)
            if arr.shape != shape:
                raise DimMismatch(f"coefficient box {arr.shape} != {shape}")
        arr[degree_grid(dim, degree) > degree] = 0
        arr.setflags(write=False)
        self.dim = dim
        self.degree = degree
        self.coeffs = arr

    @classmethod
    def from_dict(cls, dim, degree, mapping):
        arr = np.zeros((degree + 1,) * dim, dtype=np.complex128)
        for alpha, value in mapping.items():
            alpha = as_multiindex(alpha)
            if len(alpha) != dim:
                raise DimMismatch(f"index {alpha} in dimension {dim}")
            if sum(alpha) > degree:
                raise DegreeCap(f"index {alpha} exceeds degree {degree}")
            arr[alpha] += value
        return cls(dim, degree, arr)

    @classmethod
    def basis(cls, alpha, degree=None):
        alpha = as_multiindex(alpha)
        return cls.from_dict(len(alpha), sum(alpha) if degree is None else degree, {alpha: 1.0})

    @classmethod
    def zeros(cls, dim, degree):
        return cls(dim, degree)

    def __getitem__(self, alpha):
        alpha = as_multiindex(alpha)
        if len(alpha) != self.dim:
            raise DimMismatch(f"index {alpha} in dimension {self.dim}")
        if sum(alpha) > self.degree:
            return 0j
        return complex(self.coeffs[alpha])

    def items(self):
        """``(alpha, c_alpha)`` pairs in graded lexicographic order."""
        for alpha in graded_enumerate(self.dim, self.degree):
            yield alpha, complex(self.coeffs[alpha])

    def to_dict(self, drop_zeros=True):
        return {a: c for a, c in self.items() if c != 0 or not drop_zeros}

    def with_degree(self, N):
        """Zero-pad or truncate to total degree ``N``."""
        arr = np.zeros((N + 1,) * self.dim, dtype=np.complex128)
        m = min(N, self.degree) + 1
        sl = (slice(0, m),) * self.dim
        arr[sl] = self.coeffs[sl]
        return HermiteExpansion(self.dim, N, arr)

    def conjugate(self):
        """Expansion of the complex conjugate function (the basis is real)."""
        return HermiteExpansion(self.dim, self.degree, self.coeffs.conj())

    def degree_maxima(self):
        """``m_k = max_{|alpha| = k} |c_alpha|`` for ``k = 0..N``."""
        k = degree_grid(self.dim, self.degree)
        mag = np.abs(self.coeffs)
        return np.array([mag[k == j].max() for j in range(self.degree + 1)])

    def _binary(self, other, op):
        if not isinstance(other, HermiteExpansion):
            return NotImplemented
        if other.dim != self.dim:
            raise DimMismatch(f"dims {self.dim} and {other.dim}")
        N = max(self.degree, other.degree)
        return HermiteExpansion(self.dim, N, op(self.with_degree(N).coeffs, other.with_degree(N).coeffs))

    def __add__(self, other):
        return self._binary(other, np.add)

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __mul__(self, scalar):
        if isinstance(scalar, HermiteExpansion):
            return NotImplemented
        return HermiteExpansion(self.dim, self.degree, self.coeffs * complex(scalar))

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __repr__(self):
        nz = int(np.count_nonzero(self.coeffs))
        return f"HermiteExpansion(dim={self.dim}, degree={self.degree}, nonzero={nz})"

    def __call__(self, x):
        return synthesize(self, x)


@dataclass(frozen=True)
class SampledFunction:
    """Vectorised scalar field on R^d used as quadrature input.

    ``evaluator`` maps an ``(m, d)`` array of points to ``m`` complex values.
    ``decay_hint`` optionally records an exponential decay rate.
    """

    dim: int
    evaluator: Callable[[np.ndarray], np.ndarray]
    decay_hint: Optional[float] = None
    name: str = field(default="", compare=False)

    def __call__(self, x):
        pts, single = as_points(x, self.dim)
        vals = np.asarray(self.evaluator(pts), dtype=np.complex128).reshape(len(pts))
        return vals[0] if single else vals


def as_points(x, dim):
    """Coerce ``x`` to an ``(m, dim)`` float array; flag a single point."""
    arr = np.asarray(x, dtype=np.float64)
    if dim == 1:
        if arr.ndim > 2 or (arr.ndim == 2 and arr.shape[1] != 1):
            raise DimMismatch(f"points of shape {arr.shape} for dim 1")
        return arr.reshape(-1, 1), arr.ndim == 0
    if arr.ndim == 1:
        if arr.size != dim:
            raise DimMismatch(f"point of length {arr.size} for dim {dim}")
        return arr.reshape(1, dim), True
    if arr.ndim != 2 or arr.shape[1] != dim:
        raise DimMismatch(f"points of shape {arr.shape} for dim {dim}")
    return arr, False


def hermite_eval(alpha, x):
    """``h_alpha(x) = prod_j h_{alpha_j}(x_j)`` via the normalised recurrence."""
    alpha = as_multiindex(alpha)
    if max(alpha) > EVAL_DEGREE_CAP:
        raise DegreeCap(f"per-axis degree {max(alpha)} exceeds {EVAL_DEGREE_CAP}")
    pts, single = as_points(x, len(alpha))
    out = np.ones(len(pts))
    for j, a in enumerate(alpha):
        out *= kernels.hermite_table(a, pts[:, j])[a]
    return out[0] if single else out


def synthesize(F, x):
    """Evaluate ``sum_alpha c_alpha h_alpha`` at one point or an ``(m, d)`` batch."""
    pts, single = as_points(x, F.dim)
    if F.dim == 1 and (pts.size == 0 or np.max(np.abs(pts)) <= kernels.CLENSHAW_XMAX):
        vals = kernels.clenshaw(F.coeffs, pts[:, 0])
    else:
        tables = [kernels.hermite_table(F.degree, pts[:, j]) for j in range(F.dim)]
        letters = "abcdefgh"[:F.dim]
        spec = letters + "," + ",".join(f"{c}p" for c in letters) + "->p"
        vals = np.einsum(spec, F.coeffs, *tables, optimize=True)
    return vals[0] if single else vals


def analyze(f, N=DEFAULT_DEGREE, n_quad=None, tol=DEFAULT_TOL):
    """Hermite coefficients ``(f, h_alpha)`` for ``|alpha| <= N`` by tensor Gauss-Hermite.

    ``n_quad`` nodes per axis must be at least ``N + 1``; the default is
    ``2N + 16``. Warns with :class:`QuadratureUnderResolved` when the top-degree
    coefficients exceed ``tol``.
    """
    if n_quad is None:
        n_quad = 2 * N + 16
    if n_quad < N + 1:
        raise ValueError(f"n_quad={n_quad} cannot resolve degree {N}; need >= {N + 1}")
    d = f.dim
    rule = gauss_hermite_rule(n_quad)
    grids = np.meshgrid(*([rule.nodes] * d), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    vals = f(pts).reshape((n_quad,) * d)
    M = kernels.hermite_table(N, rule.nodes) * rule.scaled_weights
    for j in range(d):
        vals = np.moveaxis(np.tensordot(M, vals, axes=(1, j)), 0, j)
    F = HermiteExpansion(d, N, vals)
    if tol is not None and N > 0:
        top = F.degree_maxima()[-1]
        if top > tol:
            warnings.warn(f"degree-{N} coefficients reach {top:.3e} > tol {tol:.1e}",
                          QuadratureUnderResolved, stacklevel=2)
    return F


def apply_ladder(F, axis, kind):
    """``x_j * F`` (``kind='multiply_by_x'``) or ``d/dx_j F`` (``'differentiate'``).

    Uses ``x h_n = sqrt((n+1)/2) h_{n+1} + sqrt(n/2) h_{n-1}`` and
    ``h_n' = sqrt(n/2) h_{n-1} - sqrt((n+1)/2) h_{n+1}``; the result has degree ``N+1``.
    """
    if not 0 <= axis < F.dim:
        raise DimMismatch(f"axis {axis} for dim {F.dim}")
    if kind not in ("multiply_by_x", "differentiate"):
        raise ValueError(f"unknown ladder kind {kind!r}")
    N = F.degree + 1
    if N > EVAL_DEGREE_CAP:
        raise DegreeCap(f"degree {N} exceeds {EVAL_DEGREE_CAP}")
    c = np.moveaxis(F.with_degree(N).coeffs, axis, 0)
    m = np.arange(N + 1, dtype=np.float64).reshape((-1,) + (1,) * (F.dim - 1))
    lower = np.zeros_like(c)   # contribution of c_{m-1}
    upper = np.zeros_like(c)   # contribution of c_{m+1}
    lower[1:] = c[:-1]
    upper[:-1] = c[1:]
    down = np.sqrt(m / 2.0) * lower
    up = np.sqrt((m + 1.0) / 2.0) * upper
    out = down + up if kind == "multiply_by_x" else up - down
    return HermiteExpansion(F.dim, N, np.moveaxis(out, 0, axis))


def apply_oscillator(F, power=1):
    """``(|x|^2 - Laplacian)^power F``; diagonal with eigenvalue ``2|alpha| + d``."""
    eig = (2.0 * degree_grid(F.dim, F.degree) + F.dim) ** int(power)
    return HermiteExpansion(F.dim, F.degree, F.coeffs * eig)


def random_expansion(rng, dim, degree, scale=None, complex_values=False):
    """Expansion with uniform(-1, 1) coefficients times ``scale(|alpha|)``."""
    shape = (degree + 1,) * dim
    c = rng.uniform(-1.0, 1.0, shape)
    if complex_values:
        c = c + 1j * rng.uniform(-1.0, 1.0, shape)
    if scale is not None:
        k = degree_grid(dim, degree)
        c = c * np.vectorize(scale, otypes=[float])(k)
    return HermiteExpansion(dim, degree, c)
