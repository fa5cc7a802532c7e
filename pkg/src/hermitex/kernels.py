"""Hot inner loops, each with a numba and a numpy implementation.

The public names (``hermite_table``, ``clenshaw``, ``phase_sum``) dispatch on
``hermitex._accel.USE_NUMBA``; the ``*_numba`` and ``*_numpy`` variants stay
importable so the two paths can be compared directly.
"""
import math

import numpy as np

from ._accel import njit, pick

PI_QUARTER = math.pi ** -0.25
# rescale the recurrence once values leave [1e-150, 1e150]
_BIG = 1e150
_LOG_BIG = math.log(_BIG)
# largest |x| for which the unscaled Clenshaw sum stays finite up to degree 512
CLENSHAW_XMAX = 26.0


def _recurrence_coeffs(nmax):
    n = np.arange(max(nmax, 1), dtype=np.float64)
    return np.sqrt(2.0 / (n + 1.0)), np.sqrt(n / (n + 1.0))


def _hermite_table_loop(nmax, x, a, b):
    # row-major sweep: the scaled recurrence state lives in per-point arrays and the
    # Gaussian factor exp(log_scale) is refreshed only when a rescale happens
    m = x.shape[0]
    out = np.empty((nmax + 1, m))
    prev = np.zeros(m)
    cur = np.full(m, PI_QUARTER)
    log_scale = np.empty(m)
    fac = np.empty(m)
    for p in range(m):
        log_scale[p] = -0.5 * x[p] * x[p]
        fac[p] = math.exp(log_scale[p])
        out[0, p] = cur[p] * fac[p]
    for n in range(nmax):
        an = a[n]
        bn = b[n]
        for p in range(m):
            c = x[p] * an * cur[p] - bn * prev[p]
            prev[p] = cur[p]
            if abs(c) > _BIG:
                c /= _BIG
                prev[p] /= _BIG
                log_scale[p] += _LOG_BIG
                fac[p] = math.exp(log_scale[p])
            cur[p] = c
            if fac[p] > 0.0 or c == 0.0:
                out[n + 1, p] = c * fac[p]
            else:
                out[n + 1, p] = math.copysign(math.exp(math.log(abs(c)) + log_scale[p]), c)
    return out


_hermite_table_nb = njit(_hermite_table_loop)


def hermite_table_numba(nmax, x):
    x = np.ascontiguousarray(x, dtype=np.float64).ravel()
    a, b = _recurrence_coeffs(nmax)
    return _hermite_table_nb(int(nmax), x, a, b)


def hermite_table_numpy(nmax, x):
    x = np.asarray(x, dtype=np.float64).ravel()
    a, b = _recurrence_coeffs(nmax)
    out = np.empty((nmax + 1, x.size))
    log_scale = -0.5 * x * x
    fac = np.exp(log_scale)
    prev = np.zeros_like(x)
    cur = np.full_like(x, PI_QUARTER)
    out[0] = cur * fac
    deep = fac == 0.0
    with np.errstate(divide="ignore", over="ignore", under="ignore"):
        for n in range(nmax):
            prev, cur = cur, x * a[n] * cur - b[n] * prev
            big = np.abs(cur) > _BIG
            if big.any():
                cur = np.where(big, cur / _BIG, cur)
                prev = np.where(big, prev / _BIG, prev)
                log_scale = np.where(big, log_scale + _LOG_BIG, log_scale)
                fac = np.exp(log_scale)
                deep = fac == 0.0
            row = cur * fac
            if deep.any():
                row[deep] = np.sign(cur[deep]) * np.exp(np.log(np.abs(cur[deep])) + log_scale[deep])
            out[n + 1] = row
    return out


def _clenshaw_loop(cr, ci, x, a, b):
    # real and imaginary parts run as two real recurrences; b is padded so b[nmax + 1] = 0
    nmax = cr.shape[0] - 1
    m = x.shape[0]
    out = np.empty(m, dtype=np.complex128)
    for p in range(m):
        xv = x[p]
        r1 = 0.0
        r2 = 0.0
        i1 = 0.0
        i2 = 0.0
        for k in range(nmax, -1, -1):
            t = a[k] * xv
            bk = b[k + 1]
            rk = cr[k] + t * r1 - bk * r2
            ik = ci[k] + t * i1 - bk * i2
            r2 = r1
            r1 = rk
            i2 = i1
            i1 = ik
        g = PI_QUARTER * math.exp(-0.5 * xv * xv)
        out[p] = g * r1 + 1j * (g * i1)
    return out


_clenshaw_nb = njit(_clenshaw_loop)


def _clenshaw_coeffs(nmax):
    k = np.arange(nmax + 2, dtype=np.float64)
    return np.sqrt(2.0 / (k + 1.0)), np.sqrt(k / (k + 1.0))


def clenshaw_numba(c, x):
    """Evaluate ``sum_n c[n] h_n(x)`` by backward recurrence (1-d)."""
    c = np.ascontiguousarray(c, dtype=np.complex128)
    x = np.ascontiguousarray(x, dtype=np.float64).ravel()
    a, b = _clenshaw_coeffs(c.size - 1)
    b[-1] = 0.0
    return _clenshaw_nb(np.ascontiguousarray(c.real), np.ascontiguousarray(c.imag), x, a, b)


def clenshaw_numpy(c, x):
    c = np.asarray(c, dtype=np.complex128)
    x = np.asarray(x, dtype=np.float64).ravel()
    nmax = c.size - 1
    a, b = _clenshaw_coeffs(nmax)
    y1 = np.zeros(x.shape, dtype=np.complex128)
    y2 = np.zeros_like(y1)
    for k in range(nmax, -1, -1):
        bk = b[k + 1] if k + 1 <= nmax else 0.0
        y1, y2 = c[k] + a[k] * x * y1 - bk * y2, y1
    return PI_QUARTER * np.exp(-0.5 * x * x) * y1


def _phase_sum_loop(amp, y, xi):
    J = y.shape[0]
    Q = xi.shape[0]
    E = np.empty((J, Q), dtype=np.complex128)
    for j in range(J):
        for q in range(Q):
            ph = -y[j] * xi[q]
            E[j, q] = math.cos(ph) + 1j * math.sin(ph)
    return np.dot(amp, E)


_phase_sum_nb = njit(_phase_sum_loop)


def phase_sum_numba(amp, y, xi):
    """``out[p, q] = sum_j amp[p, j] * exp(-1j * y[j] * xi[q])``."""
    amp = np.ascontiguousarray(amp, dtype=np.complex128)
    return _phase_sum_nb(amp, np.ascontiguousarray(y, dtype=np.float64),
                         np.ascontiguousarray(xi, dtype=np.float64))


def phase_sum_numpy(amp, y, xi):
    amp = np.asarray(amp, dtype=np.complex128)
    return amp @ np.exp(-1j * np.outer(np.asarray(y, float), np.asarray(xi, float)))


hermite_table = pick(hermite_table_numba, hermite_table_numpy)
clenshaw = pick(clenshaw_numba, clenshaw_numpy)
phase_sum = pick(phase_sum_numba, phase_sum_numpy)
