"""Built-in sampled functions and the textual function-spec catalog."""
import csv

import numpy as np

from .errors import UnknownFunctionSpec
from .hermite import HermiteExpansion, SampledFunction, hermite_eval, synthesize
from .multiindex import as_multiindex


def hermite_function(alpha):
    alpha = as_multiindex(alpha)
    return SampledFunction(len(alpha), lambda p: hermite_eval(alpha, p), decay_hint=0.5,
                           name=f"hermite:{','.join(map(str, alpha))}")


def gaussian(a=1.0, dim=1):
    """``exp(-a |x|^2)``."""
    a = float(a)
    return SampledFunction(dim, lambda p: np.exp(-a * np.sum(p * p, axis=1)), decay_hint=a,
                           name=f"gaussian:{a:g}")


def cauchy(dim=1):
    """``(1 + |x|^2)^{-1}``; decays only polynomially."""
    return SampledFunction(dim, lambda p: 1.0 / (1.0 + np.sum(p * p, axis=1)),
                           name="rational:cauchy")


def zero(dim=1):
    return SampledFunction(dim, lambda p: np.zeros(len(p)), name="zero")


def from_expansion(F):
    return SampledFunction(F.dim, lambda p: synthesize(F, p), name="expansion")


def from_table(path):
    """1-d samples from a CSV with columns ``x,re[,im]``; zero outside the table."""
    xs, vals = [], []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip().startswith("#"):
                continue
            try:
                x = float(row[0])
            except ValueError:
                continue  # header
            re = float(row[1])
            im = float(row[2]) if len(row) > 2 else 0.0
            xs.append(x)
            vals.append(complex(re, im))
    order = np.argsort(xs)
    xs = np.asarray(xs)[order]
    vals = np.asarray(vals)[order]

    def ev(p):
        t = p[:, 0]
        return (np.interp(t, xs, vals.real, left=0.0, right=0.0)
                + 1j * np.interp(t, xs, vals.imag, left=0.0, right=0.0))

    return SampledFunction(1, ev, name=f"table:{path}")


def parse_function_spec(spec, dim=1):
    """Parse ``hermite:a[,b..]``, ``gaussian:a``, ``rational:cauchy``, ``table:path``,
    ``file:path.hexp`` or ``zero``."""
    kind, _, arg = spec.partition(":")
    kind = kind.strip().lower()
    try:
        if kind == "hermite":
            return hermite_function(tuple(int(t) for t in arg.split(",")))
        if kind == "gaussian":
            return gaussian(float(arg) if arg else 1.0, dim)
        if kind == "rational" and arg == "cauchy":
            return cauchy(dim)
        if kind == "zero":
            return zero(dim)
        if kind == "table":
            return from_table(arg)
        if kind == "file":
            from .fileio import read_expansion
            return from_expansion(read_expansion(arg))
    except (ValueError, OSError) as exc:
        raise UnknownFunctionSpec(f"cannot build {spec!r}: {exc}") from exc
    raise UnknownFunctionSpec(f"unknown function spec {spec!r}")


def parse_expansion_spec(spec, degree=None, n_quad=None, dim=1):
    """Like :func:`parse_function_spec` but returns a :class:`HermiteExpansion`.

    ``hermite:`` and ``file:`` specs are exact; anything else is analysed at
    ``degree``.
    """
    kind, _, arg = spec.partition(":")
    if kind == "hermite":
        try:
            alpha = tuple(int(t) for t in arg.split(","))
        except ValueError as exc:
            raise UnknownFunctionSpec(f"bad hermite index in {spec!r}") from exc
        return HermiteExpansion.basis(alpha, degree if degree is not None and degree >= sum(alpha) else None)
    if kind == "file":
        from .fileio import read_expansion
        return read_expansion(arg)
    from .hermite import analyze
    f = parse_function_spec(spec, dim)
    return analyze(f, 32 if degree is None else degree, n_quad, tol=None)
