"""Acceptance criteria 1-9, one test each, with a PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` (lines appear in the terminal
summary) or directly as ``python3 tests/test_acceptance.py``.
"""
import math
import sys
import tempfile
import warnings
from itertools import permutations
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))
from conftest import ACCEPTANCE_LINES  # noqa: E402

from hermitex import cli  # noqa: E402
from hermitex.convolution import (MeshLadder, convergence_rate, convolution_reference,  # noqa: E402
                                  convolve)
from hermitex.errors import DegenerateFit  # noqa: E402
from hermitex.fileio import read_expansion, write_expansion  # noqa: E402
from hermitex.functions import gaussian, hermite_function  # noqa: E402
from hermitex.hermite import (HermiteExpansion, analyze, apply_oscillator,  # noqa: E402
                              random_expansion, synthesize)
from hermitex.multiindex import graded_enumerate  # noqa: E402
from hermitex.spaces import Flat, classify, oscillator_growth_check  # noqa: E402
from hermitex.tensor import (all_orders, fubini_check, multilinear_tensor, pair,  # noqa: E402
                             tensor)
from hermitex.transforms import (PhaseGrid, bargmann, bargmann_identity_check,  # noqa: E402
                                 fourier_quadrature, stft_direct, stft_tensor_route)

pytestmark = pytest.mark.acceptance

SEED = 0x5EED
LADDER = (0.2, 0.1, 0.05, 0.025)


def report(tag, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {tag}: {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    return ok


# 1 ---------------------------------------------------------------------------

def test_c1_orthonormality_and_eigenstructure():
    delta = 0.0
    for d in (1, 2):
        for beta in graded_enumerate(d, 10):
            F = analyze(hermite_function(beta), N=10, tol=None)
            target = np.zeros_like(F.coeffs)
            target[beta] = 1
            delta = max(delta, float(np.max(np.abs(F.coeffs - target))))
    xi = np.linspace(-6, 6, 61)
    four = 0.0
    for n in range(21):
        got = fourier_quadrature(hermite_function((n,)), xi)
        ref = (-1j) ** n * synthesize(HermiteExpansion.basis((n,)), xi)
        four = max(four, float(np.max(np.abs(got - ref))))
    exact = all(apply_oscillator(HermiteExpansion.basis(a, 10))[a] == 2 * sum(a) + d
                for d in (1, 2, 3) for a in graded_enumerate(d, 10 if d < 3 else 6))
    ok = delta < 1e-10 and four < 1e-8 and exact
    assert report("C1 orthonormality/eigenstructure", ok,
                  f"max |analyze(h_b)[a] - delta| = {delta:.2e} (tol 1e-10); "
                  f"max |F h_n - (-i)^n h_n| = {four:.2e} (tol 1e-8); "
                  f"oscillator eigenvalues 2|a|+d exact: {exact}")


# 2 ---------------------------------------------------------------------------

def test_c2_tensor_factorization():
    worst = 0.0
    for seed in range(50):
        rng = np.random.default_rng(SEED + seed)
        d1, d2 = (int(v) for v in rng.integers(1, 3, 2))
        n1, n2 = (int(v) for v in rng.integers(0, 9, 2))
        f1 = random_expansion(rng, d1, n1, complex_values=True)
        f2 = random_expansion(rng, d2, n2, complex_values=True)
        p1 = random_expansion(rng, d1, int(rng.integers(0, 9)), complex_values=True)
        p2 = random_expansion(rng, d2, int(rng.integers(0, 9)), complex_values=True)
        lhs = pair(tensor(f1, f2), tensor(p1, p2))
        rhs = pair(f1, p1) * pair(f2, p2)
        worst = max(worst, abs(lhs - rhs) / max(abs(rhs), 1e-300))
    ok = worst < 1e-12
    assert report("C2 tensor factorization", ok,
                  f"max relative |<f1(x)f2, p1(x)p2> - <f1,p1><f2,p2>| = {worst:.2e} "
                  f"over 50 seeds (tol 1e-12)")


# 3 ---------------------------------------------------------------------------

def test_c3_fubini_and_permutations():
    rng = np.random.default_rng(SEED)
    N = 12
    dual = lambda k: math.exp(k)      # distribution-scale bound exp(|a|), order 1/2, radius 1
    decay = lambda k: math.exp(-k)    # test-function decay of the same class
    worst = np.zeros(3)
    for _ in range(50):
        f1 = random_expansion(rng, 1, N, dual, complex_values=True)
        f2 = random_expansion(rng, 1, N, dual, complex_values=True)
        phi = random_expansion(rng, 2, N, decay, complex_values=True)
        worst = np.maximum(worst, fubini_check(f1, f2, phi).residuals)
    perm = 0.0
    for _ in range(10):
        fs = [random_expansion(rng, 1, 4, complex_values=True) for _ in range(3)]
        phi = random_expansion(rng, 3, 12, complex_values=True)
        full = pair(multilinear_tensor(fs), phi)
        vals = all_orders(fs, phi)
        assert len(vals) == len(list(permutations(range(3))))
        perm = max(perm, max(abs(v - full) for v in vals.values()))
    ok = bool(np.max(worst) < 1e-10 and perm < 1e-12)
    assert report("C3 Fubini + permutation invariance", ok,
                  f"residuals (full-first, full-second, first-second) = "
                  f"({worst[0]:.2e}, {worst[1]:.2e}, {worst[2]:.2e}) (tol 1e-10); "
                  f"max S3 deviation = {perm:.2e} (tol 1e-12)")


# 4 ---------------------------------------------------------------------------

def test_c4_stft_routes():
    grid = PhaseGrid.uniform(32, 4.0)
    dev = {}
    for a, b in [(0, 0), (2, 0), (1, 1)]:
        f, phi = hermite_function((a,)), hermite_function((b,))
        dev[(a, b)] = float(np.max(np.abs(stft_direct(f, phi, grid).values
                                          - stft_tensor_route(f, phi, grid).values)))
    V = stft_direct(hermite_function((0,)), hermite_function((0,)), grid).values
    X, XI = np.meshgrid(grid.x_axis, grid.xi_axis, indexing="ij")
    closed = float(np.max(np.abs(np.abs(V) - np.exp(-(X ** 2 + XI ** 2) / 4) / math.sqrt(2 * math.pi))))
    ok = max(dev.values()) < 1e-7 and closed < 1e-7
    parts = ", ".join(f"(h{a},h{b}) {v:.2e}" for (a, b), v in dev.items())
    assert report("C4 STFT route equality", ok,
                  f"max grid deviation {parts} (tol 1e-7); Gaussian closed-form modulus "
                  f"deviation {closed:.2e} (tol 1e-7)")


# 5 ---------------------------------------------------------------------------

def test_c5_riemann_sum_rate():
    lines = []
    ok = True
    for name, f in [("h_0", HermiteExpansion.basis((0,))), ("exp(-x^2)", gaussian(1.0))]:
        try:
            rr = convergence_rate(f, f, MeshLadder(LADDER), index_set=(2, 2), N=40)
        except DegenerateFit as exc:
            res = exc.report.residuals
            ok = False
            lines.append(f"{name}: no fit, residuals {np.array2string(res, precision=2)} all below "
                         f"the 1e-9 reference floor (lattice sums of Gaussians converge like "
                         f"exp(-pi^2/eps^2), not eps)")
            continue
        spread = rr.ratio_spread
        good = 0.9 <= rr.slope <= 1.1 and spread < 3
        ok = ok and good
        lines.append(f"{name}: slope {rr.slope:.3f} (band [0.9, 1.1]), residual/eps spread "
                     f"{spread:.2f} (< 3)")
    assert report("C5 Riemann-sum rate", ok, "; ".join(lines))


# 6 ---------------------------------------------------------------------------

def _z_points(rng, n=10, radius=2.0):
    return radius * np.sqrt(rng.uniform(0, 1, n)) * np.exp(2j * math.pi * rng.uniform(0, 1, n))


SHIFTS = [(x0, xi0) for x0 in (-2.0, -1.0, 0.5, 2.0) for xi0 in (-2.0, 0.0, 1.0, 2.0)]


def test_c6a_bargmann_identities_as_quoted():
    z = _z_points(np.random.default_rng(SEED))
    worst_t = worst_m = 0.0
    for f in (hermite_function((0,)), hermite_function((1,))):
        for x0, xi0 in SHIFTS:
            e = bargmann_identity_check(f, x0, xi0, z, form="printed")
            worst_t, worst_m = max(worst_t, e.translation), max(worst_m, e.modulation)
    ok = worst_t < 1e-8 and worst_m < 1e-8
    assert report("C6a Bargmann translation/modulation identities (quoted form)", ok,
                  f"max relative error translation {worst_t:.2e}, modulation {worst_m:.2e} "
                  f"(tol 1e-8)")


def test_c6b_bargmann_monomials():
    rng = np.random.default_rng(SEED + 1)
    z = _z_points(rng)
    worst = 0.0
    for n in range(8):
        B = bargmann(hermite_function((n,)), z).values
        worst = max(worst, float(np.max(np.abs(B - z ** n / math.sqrt(math.factorial(n))))))
    zz = np.column_stack([_z_points(rng), _z_points(rng)])
    for alpha in [(1, 0), (2, 3), (0, 4)]:
        B = bargmann(HermiteExpansion.basis(alpha), zz).values
        ref = np.prod(zz ** np.array(alpha), axis=1) / math.sqrt(
            math.factorial(alpha[0]) * math.factorial(alpha[1]))
        worst = max(worst, float(np.max(np.abs(B - ref))))
    ok = worst < 1e-7
    assert report("C6b Bargmann of h_a equals z^a/sqrt(a!)", ok,
                  f"max deviation {worst:.2e} at 10 random |z| <= 2 (tol 1e-7)")


def test_c6c_bargmann_identities_kernel_consistent_form():
    # supplementary: the identities with the shifts implied by the kernel
    z = _z_points(np.random.default_rng(SEED))
    worst = 0.0
    for f in (hermite_function((0,)), hermite_function((1,))):
        for x0, xi0 in SHIFTS:
            e = bargmann_identity_check(f, x0, xi0, z, form="exact")
            worst = max(worst, e.translation, e.modulation)
    ok = worst < 1e-8
    assert report("C6c (supplementary) identities with kernel-consistent shifts", ok,
                  f"max relative error {worst:.2e} (tol 1e-8)")


# 7 ---------------------------------------------------------------------------

def test_c7_classification():
    k = np.arange(41.0)
    worst = 0.0
    for s in (0.25, 0.5, 1.0):
        for r in (0.5, 1.0, 2.0):
            rep = classify(HermiteExpansion(1, 40, np.exp(-r * k ** (1 / (2 * s)))))
            got = rep.best_order
            err = math.inf if isinstance(got, Flat) else abs(got - s) / s
            worst = max(worst, err)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        G = analyze(gaussian(1.0), N=40)
    gs = classify(G).best_order
    two_s = oscillator_growth_check(gaussian(1.0)).two_s
    ok = worst <= 0.1 and not isinstance(gs, Flat) and 0.45 <= gs <= 0.55 and 0.8 <= two_s <= 1.2
    assert report("C7 classification recovery", ok,
                  f"max relative error in s over 3x3 synthetic grid {worst:.3f} (tol 0.10); "
                  f"exp(-x^2) classified s = {gs} (band [0.45, 0.55]); "
                  f"oscillator growth 2s = {two_s:.3f} (band [0.8, 1.2])")


# 8 ---------------------------------------------------------------------------

def test_c8_associativity():
    worst = 0.0
    for seed in range(5):
        rng = np.random.default_rng(SEED + seed)
        f, phi, psi = (random_expansion(rng, 1, int(rng.integers(0, 5))) for _ in range(3))
        x = rng.uniform(-3, 3, 10)
        a = convolution_reference(convolve(f, phi), psi, x)
        b = convolution_reference(f, convolve(phi, psi), x)
        worst = max(worst, float(np.max(np.abs(a - b))))
    ok = worst < 1e-8
    assert report("C8 convolution associativity", ok,
                  f"max |(f*phi)*psi - f*(phi*psi)| = {worst:.2e} at 10 points x 5 seeds (tol 1e-8)")


# 9 ---------------------------------------------------------------------------

CLI_RUNS = [
    ["analyze", "--func", "gaussian:1", "--degree", "40"],
    ["classify", "--func", "gaussian:1", "--degree", "40"],
    ["tensor", "--random", "1,2", "--degree", "6"],
    ["fubini", "--random", "20", "--dist-scale"],
    ["stft-check"],
    ["bargmann-check"],
    ["conv-rate", "--degree", "20"],
    ["seminorm", "--func", "gaussian:1"],
]


def test_c9_cli_determinism():
    same = {}
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        for argv in CLI_RUNS:
            texts = []
            for run in ("a", "b"):
                out = tmp / f"{argv[0]}-{run}.rep"
                cli.main([*argv, "--out", str(out)])
                texts.append(out.read_bytes())
            same[argv[0]] = texts[0] == texts[1]
        rng = np.random.default_rng(SEED)
        exact = 0
        for i in range(100):
            F = random_expansion(rng, int(rng.integers(1, 4)), int(rng.integers(0, 7)),
                                 complex_values=True) * 10.0 ** rng.uniform(-200, 200)
            write_expansion(F, tmp / "x.hexp")
            exact += np.array_equal(read_expansion(tmp / "x.hexp").coeffs, F.coeffs)
    ok = all(same.values()) and exact == 100
    bad = [k for k, v in same.items() if not v]
    assert report("C9 CLI determinism", ok,
                  f"{len(same) - len(bad)}/{len(same)} command reports byte-identical"
                  f"{' (differ: ' + ', '.join(bad) + ')' if bad else ''}; "
                  f"{exact}/100 expansion files round-trip bit-exact")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_c") and callable(fn):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
