"""Tensor products, bilinear pairings and Fubini-type partial pairings.

Pairings are bilinear: ``<f, phi> = sum_alpha c_alpha(f) c_alpha(phi)`` with no
conjugation. Where a conjugate is wanted, conjugate the expansion first.
"""
from dataclasses import dataclass
from functools import reduce
from itertools import permutations

import numpy as np

from .errors import BadPermutation, DegreeCap, DimMismatch
from .hermite import HermiteExpansion

TENSOR_DEGREE_CAP = 64


def _common(a, b):
    m = min(a.degree, b.degree) + 1
    sl = (slice(0, m),) * a.dim
    return a.coeffs[sl], b.coeffs[sl]


def tensor(f1, f2, max_degree=TENSOR_DEGREE_CAP):
    """``f1 (x) f2`` on ``R^{d1+d2}``: ``c_(a1,a2) = c_a1(f1) c_a2(f2)``, degree ``N1+N2``."""
    N = f1.degree + f2.degree
    if N > max_degree:
        raise DegreeCap(f"tensor degree {N} exceeds cap {max_degree}")
    outer = np.multiply.outer(f1.coeffs, f2.coeffs)
    box = np.zeros((N + 1,) * (f1.dim + f2.dim), dtype=np.complex128)
    box[tuple(slice(0, n) for n in outer.shape)] = outer
    return HermiteExpansion(f1.dim + f2.dim, N, box)


def multilinear_tensor(factors, max_degree=TENSOR_DEGREE_CAP):
    if len(factors) < 2:
        raise ValueError("need at least two factors")
    return reduce(lambda a, b: tensor(a, b, max_degree), factors)


def pair(f, phi):
    """Bilinear pairing over the common index range."""
    if f.dim != phi.dim:
        raise DimMismatch(f"cannot pair dims {f.dim} and {phi.dim}")
    a, b = _common(f, phi)
    return complex(np.sum(a * b))


def partial_pair(f_inner, phi, slot="second"):
    """Pair ``f_inner`` against one block of ``phi``.

    ``slot='second'`` gives ``psi(x1) = <f_inner, phi(x1, .)>``; ``slot='first'``
    gives ``psi(x2) = <f_inner, phi(., x2)>``.
    """
    d_in = f_inner.dim
    d_out = phi.dim - d_in
    if d_out < 1:
        raise DimMismatch(f"inner dim {d_in} leaves nothing of dim {phi.dim}")
    if slot not in ("first", "second"):
        raise ValueError(f"slot must be 'first' or 'second', got {slot!r}")
    m = min(phi.degree, f_inner.degree) + 1
    inner = f_inner.coeffs[(slice(0, m),) * d_in]
    if slot == "second":
        sub = phi.coeffs[(slice(None),) * d_out + (slice(0, m),) * d_in]
        out = np.tensordot(sub, inner, axes=(list(range(d_out, phi.dim)), list(range(d_in))))
    else:
        sub = phi.coeffs[(slice(0, m),) * d_in + (slice(None),) * d_out]
        out = np.tensordot(inner, sub, axes=(list(range(d_in)), list(range(d_in))))
    return HermiteExpansion(d_out, phi.degree, out)


@dataclass
class FubiniResiduals:
    full: complex
    route_first: complex    # <f1, psi_2-route>: pair out f2 first
    route_second: complex   # <f2, psi_1-route>: pair out f1 first
    residuals: tuple

    @property
    def worst(self):
        return max(self.residuals)


def fubini_check(f1, f2, phi):
    """Compare ``<f1 (x) f2, phi>`` with both iterated pairings.

    Residuals are ``(|full - <f1, psi1>|, |full - <f2, psi2>|, |<f1, psi1> - <f2, psi2>|)``
    where ``psi1 = <f2, phi(x1, .)>`` and ``psi2 = <f1, phi(., x2)>``.
    """
    if f1.dim + f2.dim != phi.dim:
        raise DimMismatch(f"factor dims {f1.dim}+{f2.dim} != {phi.dim}")
    full = pair(tensor(f1, f2, max_degree=f1.degree + f2.degree), phi)
    psi1 = partial_pair(f2, phi, "second")
    psi2 = partial_pair(f1, phi, "first")
    a = pair(f1, psi1)
    b = pair(f2, psi2)
    return FubiniResiduals(full, a, b, (abs(full - a), abs(full - b), abs(a - b)))


def _check_permutation(tau, n):
    tau = tuple(int(t) for t in tau)
    if sorted(tau) != list(range(n)):
        raise BadPermutation(f"{tau} is not a permutation of 0..{n - 1}")
    return tau


def iterated_partial_pair(factors, phi, tau):
    """``<f, phi>`` by pairing out blocks in the order ``tau[n-1], ..., tau[1]``, then ``tau[0]``.

    ``tau`` is 0-based. The blocks of ``phi`` are first reordered so that slot
    ``j`` holds variable block ``tau[j]``.
    """
    n = len(factors)
    tau = _check_permutation(tau, n)
    dims = [f.dim for f in factors]
    if sum(dims) != phi.dim:
        raise DimMismatch(f"block dims {dims} do not sum to {phi.dim}")
    starts = np.cumsum([0] + dims)
    axes = [ax for j in tau for ax in range(starts[j], starts[j + 1])]
    cur = HermiteExpansion(phi.dim, phi.degree, np.transpose(phi.coeffs, axes))
    for j in range(n - 1, 0, -1):
        cur = partial_pair(factors[tau[j]], cur, "second")
    return pair(factors[tau[0]], cur)


def all_orders(factors, phi):
    """``iterated_partial_pair`` for every permutation, keyed by ``tau``."""
    return {tau: iterated_partial_pair(factors, phi, tau)
            for tau in permutations(range(len(factors)))}
