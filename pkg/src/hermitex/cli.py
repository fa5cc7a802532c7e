"""Command-line driver: ``hermitex <command> [options]``.

Every command builds a :class:`~hermitex.fileio.Report`, prints it (or writes
it to ``--out``) and exits 0 on pass, 2 on a tolerance failure and 1 on a usage
error. Plot data goes next to the report as ``<stem>.csv``.
"""
import argparse
import math
import os
import sys
import warnings
from pathlib import Path

import numpy as np

from . import convolution, fileio, spaces, tensor, transforms
from .errors import (DegenerateFit, DegenerateSamples, DegreeCap, DimMismatch, HermitexError,
                     QuadratureUnderResolved, TailNotNegligible)
from .functions import parse_expansion_spec, parse_function_spec
from .hermite import DEFAULT_DEGREE, EVAL_DEGREE_CAP, analyze, random_expansion

DEFAULT_SEED = 0x5EED
MAX_DIM = 3
EXIT_PASS, EXIT_USAGE, EXIT_FAIL = 0, 1, 2

# errors that describe a numerical outcome rather than bad input
_OUTCOME_ERRORS = (DegenerateFit, DegenerateSamples, TailNotNegligible)

DEFAULT_TOLS = {
    "analyze": 1e-12,
    "classify": 1e-12,
    "tensor": 1e-12,
    "fubini": 1e-10,
    "stft-check": 1e-7,
    "bargmann-check": 1e-8,
    "conv-rate": 1e-9,
    "seminorm": 1e-12,
}


class UsageError(HermitexError, ValueError):
    code = "USAGE"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: USAGE: {message}\n")
        raise SystemExit(EXIT_USAGE)


def degree_cap():
    raw = os.environ.get("HERMITEX_MAX_DEGREE")
    if raw is None:
        return EVAL_DEGREE_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise UsageError(f"HERMITEX_MAX_DEGREE={raw!r} is not an integer") from None
    if cap < 0:
        raise UsageError("HERMITEX_MAX_DEGREE must be non-negative")
    return cap


def _check_degree(N):
    cap = degree_cap()
    if N < 0:
        raise UsageError(f"degree {N} must be non-negative")
    if N > cap:
        raise DegreeCap(f"degree {N} exceeds HERMITEX_MAX_DEGREE={cap}")
    return N


def _check_dim(d):
    if not 1 <= d <= MAX_DIM:
        raise DimMismatch(f"dimension {d} outside 1..{MAX_DIM}")
    return d


def _floats(text):
    return [float(t) for t in text.split(",") if t.strip()]


def _stem(out):
    p = Path(out)
    return p.with_suffix("") if p.suffix else p


# ---------------------------------------------------------------------------
# commands fill the report and return (passed, artifacts); artifacts(stem) writes plot data


def cmd_analyze(args, rep):
    d = _check_dim(args.dim)
    N = _check_degree(args.degree)
    f = parse_function_spec(args.func, d)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", QuadratureUnderResolved)
        F = analyze(f, N, args.quad_nodes, tol=args.tol)
    under = any(issubclass(w.category, QuadratureUnderResolved) for w in caught)
    m = F.degree_maxima()
    rep.update("inputs", func=args.func, dim=d, degree=N,
               quad_nodes=args.quad_nodes if args.quad_nodes else 2 * N + 16)
    rep.update("results", nonzero=int(np.count_nonzero(np.abs(F.coeffs) > args.tol)),
               top_degree_max=float(m[-1]), under_resolved=under)
    rep.update("verdict", status="pass")
    rows = [(k, float(v)) for k, v in enumerate(m)]

    def artifacts(stem):
        fileio.write_expansion(F, args.expansion or f"{stem}.hexp")
        fileio.write_csv(f"{stem}.csv", ["degree", "max_abs_coeff"], rows)
    return True, artifacts


def _load_expansion(args):
    if args.input:
        return fileio.read_expansion(args.input)
    if not args.func:
        raise UsageError("give --input FILE or --func SPEC")
    N = _check_degree(args.degree)
    return parse_expansion_spec(args.func, N, args.quad_nodes, _check_dim(args.dim))


def cmd_classify(args, rep):
    F = _load_expansion(args)
    _check_degree(F.degree)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        cr = spaces.classify(F, args.tol)
    rep.update("inputs", source=args.input or args.func, dim=F.dim, degree=F.degree)
    m = F.degree_maxima()
    rep.update("results", significant_degrees=int(np.count_nonzero(m >= args.tol)))
    rep.update("fit", best_order=spaces.format_order(cr.best_order), fitted_radius=cr.fitted_radius,
               residual=cr.residual, side=cr.side, insufficient_decay=cr.insufficient_decay)
    rep.update("verdict", status="pass", classification=cr.verdict,
               annotations="; ".join(cr.annotations))
    rows = [(k, float(v)) for k, v in enumerate(m)]
    return True, lambda stem: fileio.write_csv(f"{stem}.csv", ["degree", "max_abs_coeff"], rows)


def _dist_scale(flag):
    # coefficients bounded by the dual weight exp(|alpha|) of order 1/2, radius 1
    return (lambda k: math.exp(k)) if flag else None


def _test_scale(flag):
    # matching test-function decay exp(-|alpha|)
    return (lambda k: math.exp(-k)) if flag else None


def cmd_tensor(args, rep):
    rng = np.random.default_rng(args.seed)
    N = _check_degree(args.degree)
    if args.random:
        dims = [_check_dim(int(t)) for t in args.random.split(",")]
        factors = [random_expansion(rng, d, N, _dist_scale(args.dist_scale)) for d in dims]
        source = f"random:{args.random}"
    elif args.inputs:
        factors = [parse_expansion_spec(s, N, args.quad_nodes) for s in args.inputs]
        source = " ".join(args.inputs)
    else:
        raise UsageError("give --inputs SPEC SPEC [...] or --random d1,d2[,..]")
    if len(factors) < 2:
        raise UsageError("need at least two factors")
    _check_dim(sum(f.dim for f in factors))
    T = tensor.multilinear_tensor(factors, max_degree=min(degree_cap(), tensor.TENSOR_DEGREE_CAP))
    # factorization against seeded product test functions
    phis = [random_expansion(rng, f.dim, f.degree) for f in factors]
    full = tensor.pair(T, tensor.multilinear_tensor(phis, max_degree=tensor.TENSOR_DEGREE_CAP))
    prod = np.prod([tensor.pair(f, p) for f, p in zip(factors, phis)])
    rel = abs(full - prod) / max(abs(prod), 1e-300)
    passed = rel <= args.tol
    rep.update("inputs", source=source, degree=N, dist_scale=args.dist_scale)
    rep.update("results", dim=T.dim, tensor_degree=T.degree,
               nonzero=int(np.count_nonzero(T.coeffs)), pairing_full=full, pairing_product=prod)
    rep.update("fit", factorization_rel_error=float(rel))
    rep.update("verdict", status="pass" if passed else "fail")
    rows = [(k, float(v)) for k, v in enumerate(T.degree_maxima())]

    def artifacts(stem):
        fileio.write_expansion(T, args.expansion or f"{stem}.hexp")
        fileio.write_csv(f"{stem}.csv", ["degree", "max_abs_coeff"], rows)
    return passed, artifacts


def cmd_fubini(args, rep):
    rng = np.random.default_rng(args.seed)
    N = _check_degree(args.degree)
    if args.random:
        trials = []
        scale = _dist_scale(args.dist_scale)
        for _ in range(args.random):
            f1 = random_expansion(rng, 1, N, scale)
            f2 = random_expansion(rng, 1, N, scale)
            phi = random_expansion(rng, 2, N, _test_scale(args.dist_scale))
            trials.append((f1, f2, phi))
        source = f"random:{args.random}"
    elif args.f1 and args.f2 and args.phi:
        f1 = parse_expansion_spec(args.f1, None, args.quad_nodes)
        f2 = parse_expansion_spec(args.f2, None, args.quad_nodes)
        phi = parse_expansion_spec(args.phi, None, args.quad_nodes, dim=f1.dim + f2.dim)
        trials = [(f1, f2, phi)]
        source = f"{args.f1} {args.f2} {args.phi}"
    else:
        raise UsageError("give --f1 --f2 --phi or --random COUNT")
    rows, worst = [], np.zeros(3)
    for i, (f1, f2, phi) in enumerate(trials):
        _check_dim(phi.dim)
        fr = tensor.fubini_check(f1, f2, phi)
        worst = np.maximum(worst, fr.residuals)
        rows.append((i, *map(float, fr.residuals)))
    passed = bool(np.max(worst) < args.tol)
    rep.update("inputs", source=source, degree=N, dist_scale=args.dist_scale, trials=len(trials))
    rep.update("results", residual_full_vs_first=float(worst[0]),
               residual_full_vs_second=float(worst[1]), residual_first_vs_second=float(worst[2]))
    if len(trials) == 1:
        rep.update("results", pairing=fr.full)
    rep.update("verdict", status="pass" if passed else "fail")
    return passed, lambda stem: fileio.write_csv(
        f"{stem}.csv", ["trial", "full_vs_first", "full_vs_second", "first_vs_second"], rows)


def _closed_form_gaussian(grid):
    X, XI = np.meshgrid(grid.x_axis, grid.xi_axis, indexing="ij")
    return np.exp(-(X ** 2 + XI ** 2) / 4) / math.sqrt(2 * math.pi)


def cmd_stft_check(args, rep):
    f = parse_function_spec(args.f, 1)
    phi = parse_function_spec(args.window, 1)
    n_quad = args.quad_nodes or transforms.DEFAULT_NODES
    grid = transforms.PhaseGrid.uniform(args.grid_points, args.extent)
    direct = transforms.stft_direct(f, phi, grid, n_quad)
    route = transforms.stft_tensor_route(f, phi, grid, n_quad, method=args.method)
    dev = float(np.max(np.abs(direct.values - route.values)))
    rep.update("inputs", f=args.f, window=args.window, grid_points=args.grid_points,
               extent=args.extent, method=args.method, quad_nodes=n_quad)
    rep.update("results", max_route_deviation=dev)
    passed = dev < args.tol
    if args.f == args.window == "hermite:0":
        cf = float(np.max(np.abs(np.abs(direct.values) - _closed_form_gaussian(grid))))
        rep.update("results", closed_form_deviation=cf)
        passed = passed and cf < args.tol
    rep.update("verdict", status="pass" if passed else "fail")
    rows = [(float(x), float(xi), float(abs(direct.values[i, j])), float(abs(route.values[i, j])))
            for i, x in enumerate(grid.x_axis) for j, xi in enumerate(grid.xi_axis)]
    return passed, lambda stem: fileio.write_csv(
        f"{stem}.csv", ["x", "xi", "abs_direct", "abs_tensor_route"], rows)


def cmd_bargmann_check(args, rep):
    f = parse_function_spec(args.f, 1)
    rng = np.random.default_rng(args.seed)
    rad = args.z_radius * np.sqrt(rng.uniform(0, 1, args.z_count))
    z = rad * np.exp(2j * math.pi * rng.uniform(0, 1, args.z_count))
    err = transforms.bargmann_identity_check(f, args.x0, args.xi0, z, args.form, args.quad_nodes)
    rep.update("inputs", f=args.f, x0=args.x0, xi0=args.xi0, form=args.form,
               z_radius=args.z_radius, z_count=args.z_count)
    rep.update("results", translation_rel_error=err.translation, modulation_rel_error=err.modulation)
    passed = max(err.translation, err.modulation) < args.tol
    vals = transforms.bargmann(f, z, args.quad_nodes).values
    kind, _, arg = args.f.partition(":")
    if kind == "hermite" and "," not in arg:
        n = int(arg)
        oracle = z ** n / math.sqrt(math.factorial(n))
        mono = float(np.max(np.abs(vals - oracle)))
        rep.update("results", monomial_deviation=mono)
        passed = passed and mono < args.tol
    rep.update("verdict", status="pass" if passed else "fail")
    rows = [(float(zz.real), float(zz.imag), float(v.real), float(v.imag)) for zz, v in zip(z, vals)]
    return passed, lambda stem: fileio.write_csv(
        f"{stem}.csv", ["z_re", "z_im", "bargmann_re", "bargmann_im"], rows)


def cmd_conv_rate(args, rep):
    phi = parse_function_spec(args.phi, 1)
    psi = parse_function_spec(args.psi, 1)
    ladder = convolution.MeshLadder(tuple(_floats(args.ladder)))
    N = _check_degree(args.degree)
    rep.update("inputs", phi=args.phi, psi=args.psi, ladder=list(ladder.epsilons),
               alpha_max=args.alpha_max, beta_max=args.beta_max, h=args.h, s=args.s,
               sigma=args.sigma, degree=N, noise_floor=args.tol)
    try:
        rr = convolution.convergence_rate(phi, psi, ladder, (args.alpha_max, args.beta_max),
                                          args.h, args.s, args.sigma, None, N, floor=args.tol)
    except DegenerateFit as exc:
        rr = exc.report
        rep.update("results", residuals=list(rr.residuals), used=list(rr.used))
        rep.update("fit", slope="nan", constant="nan", ratio_spread="nan")
        rep.update("verdict", status="fail", code=exc.code, message=str(exc))
        passed = False
    else:
        spread = rr.ratio_spread
        rep.update("results", residuals=list(rr.residuals), used=list(rr.used))
        rep.update("fit", slope=rr.slope, constant=rr.constant, ratio_spread=spread)
        passed = bool(args.slope_min <= rr.slope <= args.slope_max and spread < args.spread_max)
        rep.update("verdict", status="pass" if passed else "fail")
    rows = [(float(e), float(r), int(u)) for e, r, u in zip(rr.epsilons, rr.residuals, rr.used)]
    return passed, lambda stem: fileio.write_csv(f"{stem}.csv", ["eps", "residual", "used"], rows)


def cmd_seminorm(args, rep):
    d = _check_dim(args.dim)
    N = _check_degree(args.degree)
    f = parse_function_spec(args.func, d)
    val = spaces.gs_seminorm_estimate(f, args.s, args.sigma, args.h, args.alpha_max, args.beta_max,
                                      N=N, n_quad=args.quad_nodes)
    rep.update("inputs", func=args.func, dim=d, s=args.s, sigma=args.sigma, h=args.h,
               alpha_max=args.alpha_max, beta_max=args.beta_max, degree=N)
    rep.update("results", seminorm=val)
    passed = math.isfinite(val) and (args.bound is None or val <= args.bound)
    if args.bound is not None:
        rep.update("inputs", bound=args.bound)
    rep.update("verdict", status="pass" if passed else "fail")
    return passed, None


COMMANDS = {
    "analyze": cmd_analyze,
    "classify": cmd_classify,
    "tensor": cmd_tensor,
    "fubini": cmd_fubini,
    "stft-check": cmd_stft_check,
    "bargmann-check": cmd_bargmann_check,
    "conv-rate": cmd_conv_rate,
    "seminorm": cmd_seminorm,
}


def _globals(parser, suppress):
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--tol", type=float, default=default(None),
                        help="pass/fail tolerance (per-command default)")
    parser.add_argument("--seed", type=lambda t: int(t, 0), default=default(DEFAULT_SEED),
                        help="seed for randomized suites (default 0x5EED)")
    parser.add_argument("--out", default=default(None), help="report path; plot data goes to <stem>.csv")
    parser.add_argument("--quad-nodes", type=int, default=default(None),
                        help="Gauss-Hermite nodes per axis")


def build_parser():
    p = _Parser(prog="hermitex", description="Hermite-expansion experiments.")
    _globals(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _Parser(add_help=False)
    _globals(common, suppress=True)

    a = sub.add_parser("analyze", parents=[common], help="Hermite coefficients of a function")
    a.add_argument("--func", required=True)
    a.add_argument("--dim", type=int, default=1)
    a.add_argument("--degree", type=int, default=DEFAULT_DEGREE)
    a.add_argument("--expansion", help="expansion file path (default <stem>.hexp)")

    c = sub.add_parser("classify", parents=[common], help="fit coefficient decay")
    c.add_argument("--input")
    c.add_argument("--func")
    c.add_argument("--dim", type=int, default=1)
    c.add_argument("--degree", type=int, default=DEFAULT_DEGREE)

    t = sub.add_parser("tensor", parents=[common], help="tensor product of expansions")
    t.add_argument("--inputs", nargs="+")
    t.add_argument("--random", help="comma-separated factor dims for seeded random factors")
    t.add_argument("--degree", type=int, default=4)
    t.add_argument("--dist-scale", action="store_true")
    t.add_argument("--expansion")

    f = sub.add_parser("fubini", parents=[common], help="iterated versus full pairings")
    f.add_argument("--f1")
    f.add_argument("--f2")
    f.add_argument("--phi")
    f.add_argument("--random", type=int, help="number of seeded random trials")
    f.add_argument("--degree", type=int, default=12)
    f.add_argument("--dist-scale", action="store_true")

    s = sub.add_parser("stft-check", parents=[common], help="direct versus tensor-route STFT")
    s.add_argument("--f", default="hermite:0")
    s.add_argument("--window", default="hermite:0")
    s.add_argument("--grid-points", type=int, default=32)
    s.add_argument("--extent", type=float, default=4.0)
    s.add_argument("--method", choices=("quadrature", "hermite"), default="quadrature")

    b = sub.add_parser("bargmann-check", parents=[common], help="Bargmann translation/modulation")
    b.add_argument("--f", default="hermite:0")
    b.add_argument("--x0", type=float, default=1.0)
    b.add_argument("--xi0", type=float, default=1.0)
    b.add_argument("--form", choices=("printed", "exact"), default="printed")
    b.add_argument("--z-radius", type=float, default=2.0)
    b.add_argument("--z-count", type=int, default=10)

    r = sub.add_parser("conv-rate", parents=[common], help="Riemann-sum convergence rate")
    r.add_argument("--phi", default="hermite:0")
    r.add_argument("--psi", default="hermite:0")
    r.add_argument("--ladder", default="0.2,0.1,0.05,0.025")
    r.add_argument("--alpha-max", type=int, default=0)
    r.add_argument("--beta-max", type=int, default=0)
    r.add_argument("--h", type=float, default=1.0)
    r.add_argument("--s", type=float, default=0.5)
    r.add_argument("--sigma", type=float, default=0.5)
    r.add_argument("--degree", type=int, default=40)
    r.add_argument("--slope-min", type=float, default=0.9)
    r.add_argument("--slope-max", type=float, default=1.1)
    r.add_argument("--spread-max", type=float, default=3.0)

    m = sub.add_parser("seminorm", parents=[common], help="Gelfand-Shilov seminorm estimate")
    m.add_argument("--func", required=True)
    m.add_argument("--dim", type=int, default=1)
    m.add_argument("--s", type=float, default=0.5)
    m.add_argument("--sigma", type=float, default=0.5)
    m.add_argument("--h", type=float, default=1.0)
    m.add_argument("--alpha-max", type=int, default=4)
    m.add_argument("--beta-max", type=int, default=4)
    m.add_argument("--degree", type=int, default=48)
    m.add_argument("--bound", type=float)
    return p


def _emit(rep, out):
    text = rep.dumps()
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.tol is None:
        args.tol = DEFAULT_TOLS[args.command]
    rep = fileio.Report(args.command)
    rep.update("inputs", seed=args.seed, tol=args.tol)
    try:
        if args.tol <= 0:
            raise UsageError("--tol must be positive")
        if args.quad_nodes is not None and args.quad_nodes < 1:
            raise UsageError("--quad-nodes must be positive")
        passed, artifacts = COMMANDS[args.command](args, rep)
    except _OUTCOME_ERRORS as exc:
        rep.update("verdict", status="fail", code=exc.code, message=str(exc))
        _emit(rep, args.out)
        sys.stderr.write(f"hermitex: {exc.code}: {exc}\n")
        return EXIT_FAIL
    except (HermitexError, ValueError, OSError) as exc:
        code = getattr(exc, "code", "BAD_ARGUMENT")
        rep.update("verdict", status="error", code=code, message=str(exc))
        _emit(rep, args.out)
        sys.stderr.write(f"hermitex: {code}: {exc}\n")
        return EXIT_USAGE
    _emit(rep, args.out)
    if args.out and artifacts is not None:
        artifacts(_stem(args.out))
    return EXIT_PASS if passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
