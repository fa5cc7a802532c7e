"""Gauss-Hermite rules by tridiagonal eigensolve plus Newton polish."""
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .kernels import hermite_table


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights for ``int f(x) exp(-x^2) dx``.

    ``scaled_weights`` equal ``weights * exp(nodes**2)`` and integrate ``f(x) dx``
    directly; they stay representable when ``weights`` underflow.
    """

    nodes: np.ndarray
    weights: np.ndarray
    scaled_weights: np.ndarray

    @property
    def n(self):
        return self.nodes.size

    def integrate_weighted(self, values):
        """``int g(x) exp(-x^2) dx`` from samples ``g(nodes)``."""
        return np.dot(self.weights, values)

    def integrate(self, values):
        """``int f(x) dx`` from samples ``f(nodes)``."""
        return np.dot(self.scaled_weights, values)


@lru_cache(maxsize=64)
def _rule(n):
    if n == 1:
        x = np.zeros(1)
        ws = np.array([np.sqrt(np.pi)])
        return x, ws, ws.copy()
    k = np.arange(1, n, dtype=np.float64)
    x = eigh_tridiagonal(np.zeros(n), np.sqrt(k / 2.0), eigvals_only=True)
    for _ in range(3):
        h = hermite_table(n, x)
        # h_n' = sqrt(2n) h_{n-1} - x h_n; the Gaussian factor does not move roots
        dh = np.sqrt(2.0 * n) * h[n - 1] - x * h[n]
        x = x - h[n] / dh
    x = 0.5 * (x - x[::-1])
    h = hermite_table(n - 1, x)
    scaled = 1.0 / (n * h[n - 1] ** 2)
    scaled = 0.5 * (scaled + scaled[::-1])
    with np.errstate(under="ignore"):
        weights = scaled * np.exp(-x * x)
    return x, weights, scaled


def gauss_hermite_rule(n):
    """``n``-point Gauss-Hermite rule, exact for ``exp(-x^2) p(x)`` with ``deg p <= 2n - 1``."""
    if n < 1:
        raise ValueError("need at least one node")
    x, w, ws = _rule(int(n))
    return QuadratureRule(x.copy(), w.copy(), ws.copy())


def tensor_grid(rule, d):
    """Tensor-product nodes ``(n**d, d)`` and scaled weights ``(n**d,)``."""
    pts = np.array(list(product(rule.nodes, repeat=d))).reshape(-1, d)
    w = np.array(list(product(rule.scaled_weights, repeat=d))).reshape(-1, d)
    return pts, np.prod(w, axis=1)
