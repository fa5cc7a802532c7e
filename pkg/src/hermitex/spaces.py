"""Pilipovic weights and norms, coefficient-decay classification, and
Gelfand-Shilov seminorm / decay diagnostics."""
import math
import warnings
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import InsufficientDecay
from .hermite import (DEFAULT_TOL, HermiteExpansion, SampledFunction, analyze, apply_ladder,
                      apply_oscillator, as_points, degree_grid, synthesize)
from .multiindex import (AnisotropicOrder, as_multiindex, graded_enumerate, log_factorial,
                         log_factorial_power, min_log_factorial, split)

# coefficients below this are treated as quadrature noise in fits
FIT_FLOOR = 1e-14
REAL_ORDER_GRID = tuple(round(0.1 + 0.05 * i, 2) for i in range(39))  # 0.10 .. 2.00
FLAT_SIGMA_GRID = (0.5, 1.0, 2.0)


@dataclass(frozen=True)
class Flat:
    """The extended order ``flat_sigma``, sitting between ``s < 1/2`` and ``s >= 1/2``."""

    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("flat order needs sigma > 0")

    def __str__(self):
        return f"flat({self.sigma:g})"


Order = Union[float, Flat]


def order_key(order):
    """Sort key realising ``s1 < flat_sigma < s2`` for ``s1 < 1/2 <= s2``."""
    if isinstance(order, Flat):
        return (1, order.sigma)
    return (0, float(order)) if order < 0.5 else (2, float(order))


def format_order(order):
    return str(order) if isinstance(order, Flat) else f"{float(order):g}"


def parse_order(text):
    text = str(text).strip().lower()
    if text.startswith("flat(") and text.endswith(")"):
        return Flat(float(text[5:-1]))
    return float(text)


@dataclass(frozen=True)
class SpaceSpec:
    order: Order
    r: float
    regularity: str = "roumieu"
    side: str = "function"

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError("radius r must be positive")
        if self.regularity not in ("roumieu", "beurling"):
            raise ValueError(f"unknown regularity {self.regularity!r}")
        if self.side not in ("function", "distribution"):
            raise ValueError(f"unknown side {self.side!r}")
        if not isinstance(self.order, Flat) and self.order < 0:
            raise ValueError("order must be >= 0 or Flat(sigma)")


def log_weight(spec, alpha, dual=False):
    """``log`` of the weight ``theta_{r,s}(alpha)`` (or its dual when ``dual``)."""
    alpha = as_multiindex(alpha)
    sign = 1.0 if dual else -1.0
    if isinstance(spec.order, Flat):
        return sum(alpha) * math.log(spec.r) + sign * log_factorial(alpha) / (2 * spec.order.sigma)
    if spec.order == 0:
        raise ValueError("order 0 has no weight; it denotes finite expansions")
    return sign * spec.r * sum(alpha) ** (1.0 / (2 * spec.order))


def weight(spec, alpha):
    """``exp(-r|alpha|^{1/(2s)})``, or ``r^{|alpha|} alpha!^{-1/(2 sigma)}`` for ``Flat(sigma)``."""
    return math.exp(log_weight(spec, alpha))


def dual_weight(spec, alpha):
    """``exp(r|alpha|^{1/(2s)})``, or ``r^{|alpha|} alpha!^{1/(2 sigma)}`` for ``Flat(sigma)``."""
    return math.exp(log_weight(spec, alpha, dual=True))


def _log_weight_box(spec, dim, N, dual):
    idx = np.indices((N + 1,) * dim).reshape(dim, -1).T
    vals = np.array([log_weight(spec, a, dual) for a in map(tuple, idx)])
    return vals.reshape((N + 1,) * dim)


def pil_norm(F, spec):
    """``sup_alpha |c_alpha| / theta(alpha)``; uses the dual weight for ``side='distribution'``."""
    mag = np.abs(F.coeffs)
    mask = (degree_grid(F.dim, F.degree) <= F.degree) & (mag > 0)
    if not mask.any():
        return 0.0
    lw = _log_weight_box(spec, F.dim, F.degree, spec.side == "distribution")
    return float(np.exp(np.max(np.log(mag[mask]) - lw[mask])))


def norm_0N(F, N):
    """``max_{|alpha| <= N} |c_alpha|``."""
    m = F.degree_maxima()
    return float(m[:min(N, F.degree) + 1].max())


@dataclass
class ClassificationReport:
    best_order: Order
    fitted_radius: float
    residual: float
    verdict: str
    side: str = "function"
    insufficient_decay: bool = False
    annotations: list = field(default_factory=list)


def _annotations(order, verdict):
    if verdict == "finite-expansion":
        return ["finite Hermite expansion: member of H_0 (Hermite polynomials class)"]
    if isinstance(order, Flat) or order < 0.5:
        return ["order below 1/2: Pilipovic class is nontrivial while the Gelfand-Shilov space of the same order is {0}"]
    out = ["Roumieu Pilipovic class coincides with the Gelfand-Shilov space S_s"]
    if order > 0.5:
        out.append("Beurling Pilipovic class coincides with Sigma_s")
    return out


def _fit(features, y):
    A = np.column_stack([np.ones_like(y), features])
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    res = y - A @ coef
    return coef, float(np.sqrt(np.mean(res * res)))


def classify(F, tolerance=DEFAULT_TOL):
    """Fit the degree maxima ``m_k`` against the candidate decay laws.

    Real orders are fitted as ``log m_k = a - r k^{1/(2s)}`` and flat orders as
    ``log m_k = a + k log r -+ L(k)/(2 sigma)`` with ``L(k)`` the smallest
    ``log alpha!`` of degree ``k``. The law with the smallest RMS residual wins;
    a negative fitted ``r`` (growth) marks the distribution side.
    """
    m = F.degree_maxima()
    k = np.arange(F.degree + 1)
    significant = int(np.count_nonzero(m >= tolerance))
    use = np.isfinite(m) & (m > FIT_FLOOR)
    finite = significant < 8
    if use.sum() < 3:
        verdict = "finite-expansion"
        return ClassificationReport(0.0, 0.0, 0.0, verdict, annotations=_annotations(0.0, verdict))

    kk, y = k[use].astype(float), np.log(m[use])
    L = np.array([min_log_factorial(int(j), F.dim) for j in k[use]])
    best = None
    for s in REAL_ORDER_GRID:
        coef, res = _fit(-kk ** (1.0 / (2 * s)), y)
        r = coef[1]
        cand = (res, s, abs(r), "function" if r >= 0 else "distribution")
        if best is None or res < best[0] - 1e-12:
            best = cand
    for sigma in FLAT_SIGMA_GRID:
        for side, sgn in (("function", 1.0), ("distribution", -1.0)):
            coef, res = _fit(kk, y + sgn * L / (2 * sigma))
            if res < best[0] - 1e-12:
                best = (res, Flat(sigma), math.exp(coef[1]), side)
    res, order, radius, side = best
    insufficient = side == "distribution" and not isinstance(order, Flat) and order == REAL_ORDER_GRID[0]
    if insufficient:
        warnings.warn("coefficients grow at least as fast as the steepest candidate law",
                      InsufficientDecay, stacklevel=2)
    if finite:
        verdict = "finite-expansion"
    else:
        verdict = "function-class" if side == "function" else "distribution-class"
    return ClassificationReport(order, float(radius), float(res), verdict, side, insufficient,
                                _annotations(order, verdict))


# ---------------------------------------------------------------------------
# Gelfand-Shilov diagnostics


def _as_order(s, dim):
    if isinstance(s, AnisotropicOrder):
        if s.dim != dim:
            raise ValueError(f"order blocks {s.block_dims} do not cover dim {dim}")
        return s
    if np.ndim(s) == 0:
        return AnisotropicOrder.isotropic(float(s), dim)
    raise TypeError("pass a scalar or an AnisotropicOrder")


def _expansion_of(f, N, n_quad, chop):
    if isinstance(f, HermiteExpansion):
        F = f
    else:
        F = analyze(f, N, n_quad, tol=None)
    mag = np.abs(F.coeffs)
    if chop and mag.max() > 0:
        F = HermiteExpansion(F.dim, F.degree, np.where(mag < chop * mag.max(), 0, F.coeffs))
    return F


def default_grid(dim, degree, points=None):
    """``[-L, L]^d`` with ``L = sqrt(2N+1) + 4``."""
    L = math.sqrt(2 * degree + 1) + 4.0
    if points is None:
        points = 401 if dim == 1 else (81 if dim == 2 else 31)
    return _box_grid(dim, L, points)


def _box_grid(dim, L, points):
    ax = np.linspace(-L, L, points)
    mesh = np.meshgrid(*([ax] * dim), indexing="ij")
    return np.stack([g.ravel() for g in mesh], axis=1)


def _resolve_grid(grid, dim, degree):
    if grid is None:
        return default_grid(dim, degree)
    if np.ndim(grid) == 0:
        return _box_grid(dim, float(grid), 401 if dim == 1 else 81)
    return as_points(grid, dim)[0]


def _derivative(F, beta):
    for axis, times in enumerate(beta):
        for _ in range(times):
            F = apply_ladder(F, axis, "differentiate")
    return F


def _multiply_x(F, alpha):
    for axis, times in enumerate(alpha):
        for _ in range(times):
            F = apply_ladder(F, axis, "multiply_by_x")
    return F


def gs_seminorm_estimate(f, s, sigma, h, alpha_max, beta_max, grid=None, N=48, n_quad=None,
                         chop=1e-15):
    """Truncated ``sup ||x^alpha d^beta f||_inf / (h^{|alpha|+|beta|} alpha!^s beta!^sigma)``.

    The supremum runs over ``|alpha| <= alpha_max``, ``|beta| <= beta_max`` and the
    grid points; derivatives and monomial factors act on the degree-``N``
    expansion of ``f`` through the ladder relations.
    """
    F = _expansion_of(f, N, n_quad, chop)
    d = F.dim
    s_ord, sig_ord = _as_order(s, d), _as_order(sigma, d)
    pts = _resolve_grid(grid, d, F.degree + alpha_max + beta_max)
    best = 0.0
    for beta in graded_enumerate(d, beta_max):
        Fb = _derivative(F, beta)
        lb = log_factorial_power(beta, sig_ord)
        for alpha in graded_enumerate(d, alpha_max):
            G = _multiply_x(Fb, alpha)
            sup = float(np.max(np.abs(synthesize(G, pts))))
            if sup == 0.0:
                continue
            logval = (math.log(sup) - (sum(alpha) + sum(beta)) * math.log(h)
                      - log_factorial_power(alpha, s_ord) - lb)
            best = max(best, math.exp(logval))
    return best


def gs_decay_check(f, s, sigma, h, r, orders, grid=None, cap=1e3, N=48, n_quad=None, chop=1e-15,
                   accuracy_floor=1e-12):
    """Check ``|d^alpha f(x)| <= C h^{|alpha|} alpha!^sigma exp(-r sum_j |x_j|^{1/s_j})``.

    ``orders`` is a maximal derivative degree or an iterable of multi-indices.
    Returns ``(holds, worst)`` where ``worst`` is the largest sampled value of the
    ratio and ``holds`` means ``worst <= cap``. Order-zero values come from ``f``
    itself when it is a :class:`SampledFunction`. Derivative values below the
    expansion's noise level (``accuracy_floor`` times their maximum, or the
    ladder-amplified top-degree coefficients) are dropped as unresolved.
    """
    d = f.dim
    s_ord, sig_ord = _as_order(s, d), _as_order(sigma, d)
    if np.ndim(orders) == 0:
        alphas = graded_enumerate(d, int(orders))
    else:
        alphas = [as_multiindex(a) for a in orders]
    F = None
    pts = None
    if grid is not None:
        pts = _resolve_grid(grid, d, 0)
    worst_log = -math.inf
    for alpha in alphas:
        if sum(alpha) == 0 and isinstance(f, SampledFunction):
            if pts is None:
                pts = default_grid(d, N)
            vals = f(pts)
        else:
            if F is None:
                F = _expansion_of(f, N, n_quad, chop)
            if pts is None:
                pts = default_grid(d, F.degree)
            vals = synthesize(_derivative(F, alpha), pts)
            # truncation noise: top-degree coefficients amplified by each ladder step
            m = F.degree_maxima()
            tail = 10.0 * m[-2:].max() * (2.0 * F.degree + 2.0) ** (sum(alpha) / 2.0)
            floor = max(accuracy_floor * np.max(np.abs(vals)), tail)
            vals = np.where(np.abs(vals) >= floor, vals, 0.0)
        expo = np.zeros(len(pts))
        for s_j, block in zip(s_ord.values, split(tuple(range(d)), s_ord.block_dims)):
            norm = np.sqrt(np.sum(pts[:, list(block)] ** 2, axis=1))
            expo += norm ** (1.0 / s_j)
        with np.errstate(divide="ignore"):
            logs = (np.log(np.abs(vals)) + r * expo - sum(alpha) * math.log(h)
                    - log_factorial_power(alpha, sig_ord))
        worst_log = max(worst_log, float(np.max(logs)))
    worst = math.exp(min(worst_log, 700.0)) if worst_log > -math.inf else 0.0
    if worst_log > 700.0:
        worst = math.inf
    return worst <= cap, worst


@dataclass
class GrowthExponent:
    two_s: float
    h: float
    intercept: float
    log_norms: np.ndarray
    consistent: bool


def oscillator_growth_check(f, s=None, N_max=20, degree=100, n_quad=None, grid=None, chop=1e-14):
    """Fit ``log ||H^N f||_inf = a + N log h + 2s log N!`` for ``N = 0..N_max``.

    Norms are evaluated in log space: the largest eigenvalue power is factored
    out before synthesis. ``consistent`` compares the fitted ``2s`` with the
    declared ``s`` (when given) allowing 0.2 slack.
    """
    F = _expansion_of(f, degree, n_quad, chop)
    pts = _resolve_grid(grid, F.dim, F.degree)
    lam_max = 2 * F.degree + F.dim
    log_norms = []
    for n in range(N_max + 1):
        scaled = apply_oscillator(F, n).coeffs / float(lam_max) ** n
        sup = float(np.max(np.abs(synthesize(HermiteExpansion(F.dim, F.degree, scaled), pts))))
        log_norms.append(math.log(sup) + n * math.log(lam_max))
    log_norms = np.array(log_norms)
    n = np.arange(N_max + 1, dtype=float)
    lf = np.array([math.lgamma(v + 1) for v in n])
    A = np.column_stack([np.ones_like(n), n, lf])
    coef, *_ = np.linalg.lstsq(A, log_norms, rcond=None)
    a, log_h, two_s = coef
    consistent = True if s is None else bool(two_s <= 2 * s + 0.2)
    return GrowthExponent(float(two_s), float(math.exp(log_h)), float(a), log_norms, consistent)
