"""Multi-index arithmetic and anisotropic factorial powers.

Multi-indices are plain tuples of nonnegative ints. Coefficient tables are
stored in graded lexicographic order: by total degree first, then
lexicographically ascending on the entries.
"""
from dataclasses import dataclass
from itertools import product
from math import comb, exp, lgamma

import numpy as np

from .errors import BlockMismatch


def as_multiindex(alpha):
    """Normalise ``alpha`` (int or iterable) to a tuple of nonnegative ints."""
    if isinstance(alpha, (int, np.integer)):
        alpha = (int(alpha),)
    out = tuple(int(a) for a in alpha)
    if any(a < 0 for a in out):
        raise ValueError(f"multi-index entries must be nonnegative: {out}")
    return out


def degree(alpha):
    return sum(alpha)


def graded_enumerate(d, N):
    """All ``alpha`` in N^d with ``|alpha| <= N``, in graded lex order.

    >>> graded_enumerate(2, 1)
    [(0, 0), (0, 1), (1, 0)]
    """
    if d < 1 or N < 0:
        raise ValueError("need d >= 1 and N >= 0")
    out = []
    for k in range(N + 1):
        out.extend(_compositions(k, d))
    return out


def _compositions(k, d):
    # lexicographically ascending compositions of k into d parts
    if d == 1:
        return [(k,)]
    res = []
    for first in range(k + 1):
        for rest in _compositions(k - first, d - 1):
            res.append((first,) + rest)
    return res


def count_graded(d, N):
    return comb(N + d, d)


def brute_force_indices(d, N):
    """Set of all ``alpha`` with ``|alpha| <= N`` by filtering the full box."""
    return {a for a in product(range(N + 1), repeat=d) if sum(a) <= N}


@dataclass(frozen=True)
class AnisotropicOrder:
    """Per-block exponents ``s_j`` for a coordinate split ``d = d_1 + ... + d_n``."""

    values: tuple
    block_dims: tuple

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        dims = tuple(int(b) for b in self.block_dims)
        if len(values) != len(dims):
            raise BlockMismatch("one exponent per block required")
        if any(v <= 0 for v in values):
            raise ValueError("exponents must be positive")
        if any(b < 1 for b in dims):
            raise ValueError("block dimensions must be positive")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "block_dims", dims)

    @classmethod
    def isotropic(cls, s, d):
        return cls((s,), (d,))

    @property
    def dim(self):
        return sum(self.block_dims)


def split(alpha, block_dims):
    """Cut ``alpha`` into consecutive blocks of the given lengths."""
    alpha = tuple(alpha)
    if sum(block_dims) != len(alpha) or any(b < 0 for b in block_dims):
        raise BlockMismatch(f"cannot split length-{len(alpha)} index into blocks {tuple(block_dims)}")
    out, start = [], 0
    for b in block_dims:
        out.append(alpha[start:start + b])
        start += b
    return out


def merge(blocks):
    out = ()
    for b in blocks:
        out += tuple(b)
    return out


def log_factorial(alpha):
    """``log(alpha!)`` with ``alpha! = prod_j alpha_j!``."""
    return sum(lgamma(a + 1) for a in alpha)


def log_factorial_power(alpha, order):
    alpha = tuple(alpha)
    if len(alpha) != order.dim:
        raise BlockMismatch(f"index of length {len(alpha)} does not match blocks {order.block_dims}")
    return sum(s * log_factorial(block)
               for s, block in zip(order.values, split(alpha, order.block_dims)))


def factorial_power(alpha, order):
    """``prod_j (alpha_j!)^{s_j}`` evaluated through log-gamma."""
    return exp(log_factorial_power(alpha, order))


def min_log_factorial(k, d):
    """Smallest ``log(alpha!)`` over ``|alpha| = k`` in N^d (balanced split)."""
    q, r = divmod(k, d)
    return r * lgamma(q + 2) + (d - r) * lgamma(q + 1)
