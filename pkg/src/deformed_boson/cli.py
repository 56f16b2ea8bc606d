"""Command-line front end: ``deformed-boson <subcommand> SPEC [options]``.

Exit codes: 0 success, 1 invariant or verification failure, 2 input error.
Structured reports are JSON on stdout; numeric arrays are CSV.  Defaults
are echoed in every JSON report and, for CSV output, on stderr.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .classical import ClassicalFunction, classical_hamiltonian, commutator_order_check, quantize_bracket
from .deformation import DEFAULT_LEVEL_CAP, DeformationSpec, build_ladder_table, scale_coefficients
from .eigenstate import EigenElement, generator
from .equivalence import bosonisation_map, build_map, transform_generators
from .errors import DeformedBosonError, DegenerateDeformationError
from .phase_space import (
    DEFAULT_POINTS,
    DEFAULT_WIDTH_FACTOR,
    DensitySpec,
    PhaseGrid,
    eval_omega,
    evolution_trace,
    fmt,
    write_evolution_csv,
    write_field_csv,
    write_observables_csv,
)
from .verify import run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

DEFAULTS = {
    "level_cap": DEFAULT_LEVEL_CAP,
    "grid_half_width": f"{DEFAULT_WIDTH_FACTOR:g}*sqrt(hbar)",
    "grid_points": DEFAULT_POINTS,
}


class InputError(Exception):
    """Bad command-line input; maps to exit code 2."""


def _load_json(path):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from exc


def load_spec(path):
    return DeformationSpec.from_dict(_load_json(path))


def _emit_json(obj, out):
    json.dump(obj, out, indent=2, sort_keys=False)
    out.write("\n")


def _defaults_note(err):
    err.write("# defaults: " + ", ".join(f"{k}={v}" for k, v in DEFAULTS.items()) + "\n")


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise InputError(f"expected comma-separated numbers, got {text!r}") from exc


# subcommands ---------------------------------------------------------------------

def run_spectrum(args, out, err):
    spec = load_spec(args.spec)
    D = spec.level_cap
    k = D - 1 if args.levels is None else args.levels
    if not 0 <= k <= D:
        raise InputError(f"--levels must lie in [0, {D}], got {k}")
    table = build_ladder_table(spec)
    _defaults_note(err)
    for j in range(1, k + 1):
        if not table.F[j] > 0:
            err.write(f"F({j})={fmt(table.F[j])}: degenerate\n")
    out.write("n,F,E,f\n")
    for n in range(k + 1):
        E = fmt(table.E[n]) if n < D else ""
        f = fmt(table.f[n]) if n < D else ""
        out.write(f"{n},{fmt(table.F[n])},{E},{f}\n")
    return EXIT_OK


def run_verify(args, out, err):
    spec = load_spec(args.spec)
    try:
        report = run_suite(spec, args.dim, args.mode, seed=args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    report = {"defaults": DEFAULTS, **report}
    _emit_json(report, out)
    for c in report["checks"]:
        if not c["passed"]:
            err.write(f"FAIL {c['name']}: {c['detail'] or 'residual ' + str(c['residual'])}\n")
    return EXIT_OK if report["passed"] else EXIT_FAIL


def run_transform(args, out, err):
    spec = load_spec(args.spec)
    if args.dim is not None:
        spec = spec.with_level_cap(args.dim)
    src = build_ladder_table(spec)
    if args.target:
        tgt_spec = load_spec(args.target).with_level_cap(spec.level_cap)
        m = build_map(src, build_ladder_table(tgt_spec))
    else:
        m = bosonisation_map(src)
    report = {"defaults": DEFAULTS, "dim": m.dim, "map": m.to_dict()}
    try:
        A, Ad = transform_generators(m)
    except DegenerateDeformationError as exc:
        report["error"] = str(exc)
        _emit_json(report, out)
        err.write(f"{exc}\n")
        return EXIT_FAIL
    D = m.dim
    C = (A @ Ad - Ad @ A)[: D - 1, : D - 1]
    f = np.array([float(v) for v in src.f[: D - 1]])
    report["commutator_residual"] = float(np.max(np.abs(C - np.diag(f))))
    if args.matrices:
        report["A"] = A.tolist()
        report["A_plus"] = Ad.tolist()
    _emit_json(report, out)
    return EXIT_OK


def run_evolve(args, out, err):
    spec = load_spec(args.spec)
    data = _load_json(args.rho)
    if isinstance(data, dict) and "dim" in data:
        dim = int(data["dim"])
    elif isinstance(data, dict) and "re" in data:
        dim = len(data["re"])
    else:
        raise InputError("density file needs 'dim' or a 're' matrix")
    table = build_ladder_table(spec.with_level_cap(dim))
    rho = DensitySpec.from_dict(data, table)
    if args.steps < 1:
        raise InputError("--steps must be positive")
    times = np.linspace(args.t0, args.t1, args.steps + 1)
    obs = {
        "trace": EigenElement.identity(table),
        "N": generator("N", table),
        "H": generator("H", table),
    }
    coeff_rows, obs_rows = evolution_trace(rho, times, obs)
    _defaults_note(err)
    if args.coeffs:
        with open(args.coeffs, "w", encoding="utf-8", newline="") as fh:
            write_evolution_csv(coeff_rows, fh)
    write_observables_csv(obs_rows, out)
    return EXIT_OK


def run_wigner(args, out, err):
    spec = load_spec(args.spec)
    hbar = float(spec.hbar)
    L = args.half_width if args.half_width is not None else DEFAULT_WIDTH_FACTOR * math.sqrt(hbar)
    try:
        grid = PhaseGrid(L, args.points)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if args.n < 0 or args.m < 0:
        raise InputError("levels must be nonnegative")
    _defaults_note(err)
    field = eval_omega(args.n, args.m, grid, hbar)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            write_field_csv(field, fh)
    else:
        write_field_csv(field, out)
    return EXIT_OK


def _classical_F(spec, poly):
    if poly is not None:
        return ClassicalFunction.polynomial(_floats(poly))
    if spec.kind == "series":
        spec = scale_coefficients(spec)
    return classical_hamiltonian(spec)


def run_classical(args, out, err):
    spec = load_spec(args.spec)
    F = _classical_F(spec, args.poly)
    try:
        report = commutator_order_check(F, args.h0, _floats(args.hbars))
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _emit_json({"defaults": DEFAULTS, "H0": args.h0, **report}, out)
    return EXIT_OK


def run_quantize(args, out, err):
    spec = load_spec(args.spec)
    if args.poly is not None:
        theta = ClassicalFunction.polynomial(_floats(args.poly))
    else:
        theta = _classical_F(spec, None).derivative()
    hbar = float(spec.hbar) if args.hbar is None else args.hbar
    try:
        integral, expansion = quantize_bracket(theta, args.h0, hbar)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _emit_json(
        {
            "defaults": DEFAULTS,
            "H0": args.h0,
            "hbar": hbar,
            "integral": integral,
            "expansion": expansion,
            "difference": integral - expansion,
        },
        out,
    )
    return EXIT_OK


# parser --------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="deformed-boson", description="Deformed boson algebras on a truncated Fock space.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("spec", help="deformation-spec JSON file ('-' for stdin)")
        sp.set_defaults(func=func)
        return sp

    sp = add("spectrum", run_spectrum, "CSV table n,F,E,f")
    sp.add_argument("--levels", type=int, default=None, help="last level k (default level_cap-1)")

    sp = add("verify", run_verify, "run the invariant suite; JSON report")
    sp.add_argument("--dim", type=int, default=None, help="level cap D (default from spec)")
    sp.add_argument("--mode", choices=("float", "rational"), default="float")
    sp.add_argument("--seed", type=int, default=0, help="seed of the random test elements")

    sp = add("transform", run_transform, "equivalence map onto a target (default: bosonisation)")
    sp.add_argument("--target", default=None, help="target spec JSON (default: standard boson)")
    sp.add_argument("--dim", type=int, default=None)
    sp.add_argument("--matrices", action="store_true", help="include the generator images")

    sp = add("evolve", run_evolve, "time evolution of a density; CSV t,observable,value")
    sp.add_argument("--rho", required=True, help="density JSON: {'re': [[..]], 'im': [[..]]}")
    sp.add_argument("--t0", type=float, default=0.0)
    sp.add_argument("--t1", type=float, default=10.0)
    sp.add_argument("--steps", type=int, default=100)
    sp.add_argument("--coeffs", default=None, help="also write coefficients CSV t,n,m,re,im here")

    sp = add("wigner", run_wigner, "sample Omega_nm; CSV q,p,re,im")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--half-width", type=float, default=None)
    sp.add_argument("--points", type=int, default=DEFAULT_POINTS)
    sp.add_argument("--out", default=None)

    sp = add("classical", run_classical, "order of the commutator expansion; JSON slope report")
    sp.add_argument("--poly", default=None, help="coefficients of F(x), overriding the spec")
    sp.add_argument("--h0", type=float, default=1.0)
    sp.add_argument("--hbars", default="0.1,0.01,0.001")

    sp = add("quantize", run_quantize, "quantisation rule integral vs expansion; JSON")
    sp.add_argument("--poly", default=None, help="coefficients of theta(x), overriding F' of the spec")
    sp.add_argument("--h0", type=float, default=1.0)
    sp.add_argument("--hbar", type=float, default=None, help="default: hbar of the spec")
    return p


def main(argv=None, out=None, err=None):
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args, out, err)
    except (InputError, DeformedBosonError, ValueError) as exc:
        if isinstance(exc, DegenerateDeformationError):
            err.write(f"error: {exc}\n")
            return EXIT_FAIL
        err.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
