"""Invariant suite tying all modules together.

Each check returns a :class:`CheckResult`; :func:`run_suite` collects them
into a JSON-ready report.  Checks run either in float arithmetic or in
exact rational arithmetic (unnormalised eigenstate coordinates).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .aso import (
    ASOElement,
    bullet_deformed,
    bullet_undeformed,
    safe_window,
    sigma,
    sigma_coeffs,
    sigma_inverse,
)
from .deformation import build_ladder_table
from .eigenstate import EigenElement, generator, pi_matrix, sigma_hom, star
from .equivalence import bosonisation_map, transform_generators
from .errors import DegenerateDeformationError, TruncationError
from .hopf import MAX_TENSOR_DIM, DeformedCoproduct, coproduct_weyl, product_window, window_residual

FLOAT_TOL = 1e-10
COMMUTATOR_TOL = 1e-12
MAX_DIM_FLOAT = 64
MAX_DIM_RATIONAL = 16
SIGMA_WINDOW = 8


@dataclass
class CheckResult:
    name: str
    passed: bool
    residual: float | None = None
    tolerance: float | None = None
    window: int | None = None
    detail: str = ""
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        d = asdict(self)
        if not d["extra"]:
            del d["extra"]
        return d


def _residual(vals):
    return float(max((abs(v) for v in vals), default=0.0))


def _random_sparse(table, rng, n_terms, unnormalised=False):
    """Sparse element with small Gaussian-integer amplitudes (exact in floats)."""
    D = table.dim
    coeffs = {}
    for _ in range(n_terms):
        key = (int(rng.integers(D)), int(rng.integers(D)))
        coeffs[key] = complex(int(rng.integers(-3, 4)), int(rng.integers(-3, 4)))
    return EigenElement(coeffs, table, unnormalised)


def check_star_associativity(table, rng, trials=20):
    """``(x*y)*z == x*(y*z)`` and ``pi(x*y) == pi(x) pi(y)`` exactly."""
    worst = 0.0
    for _ in range(trials):
        x, y, z = (_random_sparse(table, rng, 2 * table.dim) for _ in range(3))
        worst = max(worst, star(star(x, y), z).max_abs_diff(star(x, star(y, z))))
        worst = max(worst, float(np.max(np.abs(pi_matrix(star(x, y)) - pi_matrix(x) @ pi_matrix(y)))))
    return CheckResult("star_associativity", worst == 0.0, worst, 0.0)


def commutator_deviation(table):
    """``max_n |pi([A, A+])_nn - f(n)|`` plus off-diagonal mass, ``n <= D - 2``.

    Exact tables are evaluated in unnormalised coordinates, where all
    generator coefficients are rational, and mapped back exactly.
    """
    D = table.dim
    if table.exact and table.first_degenerate_level() is None:
        c = sigma_hom("A A⁺ - A⁺ A", table, unnormalised=True).restrict(D - 2)
        vals = [c.coeffs.get((n, n), 0) * table.F_fact[n] - table.f[n] for n in range(D - 1)]
        vals += [v for (n, m), v in c.coeffs.items() if n != m]
        return float(_residual(vals))
    if table.exact:
        table = build_ladder_table(table.source)
    M = pi_matrix(sigma_hom("A A⁺ - A⁺ A", table)).real[: D - 1, : D - 1]
    return float(np.max(np.abs(M - np.diag([float(v) for v in table.f[: D - 1]]))))


def check_commutator(table):
    """Exact tables use the absolute tolerance; float tables scale it by ``max |f|``."""
    r = commutator_deviation(table)
    tol = COMMUTATOR_TOL
    if not table.exact:
        tol *= max(1.0, max(abs(float(v)) for v in table.f))
    return CheckResult("commutator_identity", r < tol, r, tol, table.dim - 2)


def round_trip_errors(table, window=SIGMA_WINDOW):
    """Round-trip errors of ``sigma`` on the window ``n, m <= window``.

    Returns ``(eig_err, mono_err, kappa)``: the error of
    ``sigma(sigma_inverse(Omega_nm))``, the error of
    ``sigma_inverse(sigma(A+^n A^m))`` (both restricted to the window) and
    the condition magnitude ``kappa``, the largest absolute-value sum of the
    terms cancelling in the first round trip.
    """
    unnorm = table.exact
    co = sigma_coeffs(table, unnorm)
    eig_err = mono_err = 0.0
    kappa = 1.0
    for n in range(window + 1):
        for m in range(window + 1):
            x = EigenElement.basis(n, m, table, unnormalised=unnorm)
            y = sigma(sigma_inverse(x), unnormalised=unnorm).restrict(window)
            eig_err = max(eig_err, float(y.max_abs_diff(x)))
            mono = ASOElement.monomial(n, m, table)
            back = sigma_inverse(sigma(mono, unnormalised=unnorm)).restrict(window)
            mono_err = max(mono_err, float(back.max_abs_diff(mono)))
            if not unnorm:
                for j in range(1, window + 1 - max(n, m)):
                    s = sum(abs(co.D_coeff(n, m, k) * co.C(n + k, m + k, j - k)) for k in range(j + 1))
                    kappa = max(kappa, s)
    return eig_err, mono_err, kappa


def check_sigma_round_trip(table, window=None):
    D = table.dim
    if window is None:
        window = min(SIGMA_WINDOW, safe_window(D))
    try:
        eig_err, mono_err, kappa = round_trip_errors(table, window)
    except DegenerateDeformationError as exc:
        return CheckResult(
            "sigma_round_trip", False, None, None, window,
            f"degenerate at level {exc.level}", {"degenerate_level": exc.level},
        )
    if table.exact:
        tol = 0.0
        ok = eig_err == 0 and mono_err == 0
    else:
        tol = FLOAT_TOL * max(1.0, kappa)
        ok = eig_err < tol and mono_err < tol
    return CheckResult(
        "sigma_round_trip", ok, max(eig_err, mono_err), tol, window,
        extra={"eigen_error": eig_err, "monomial_error": mono_err, "kappa": kappa},
    )


def bullet_consistency(table, max_degree=3):
    """Largest deviation checked by :func:`check_bullet`.

    Standard tables: ``bullet_deformed`` against ``bullet_undeformed`` on
    all monomial pairs of degree ``<= max_degree``.  Other tables: the
    relation ``A . A+ - A+ . A = sigma_inverse(sum f(i) Omega_ii)``.
    """
    D = table.dim
    window = safe_window(D)
    if table.is_standard:
        monos = [(n, m) for n in range(max_degree + 1) for m in range(max_degree + 1 - n)]
        worst = 0.0
        for (a, b), (c, d) in itertools.product(monos, repeat=2):
            x = ASOElement.monomial(a, b, table)
            y = ASOElement.monomial(c, d, table)
            ref = bullet_undeformed(x, y).restrict(window)
            worst = max(worst, float(bullet_deformed(x, y, window).max_abs_diff(ref)))
        return worst, window
    A = ASOElement.monomial(0, 1, table)
    Ad = ASOElement.monomial(1, 0, table)
    lhs = bullet_deformed(A, Ad, window) - bullet_deformed(Ad, A, window)
    diag = EigenElement({(i, i): table.f[i] for i in range(D)}, table)
    if table.exact:
        diag = EigenElement({(i, i): table.f[i] / table.F_fact[i] for i in range(D)}, table, True)
    ref = sigma_inverse(diag).restrict(window)
    return float(lhs.max_abs_diff(ref)), window


def check_bullet(table):
    try:
        r, window = bullet_consistency(table)
    except DegenerateDeformationError as exc:
        return CheckResult("bullet_consistency", False, None, None, None, f"degenerate at level {exc.level}")
    except TruncationError as exc:
        return CheckResult("bullet_consistency", False, None, None, None, str(exc))
    tol = 0.0 if table.exact else FLOAT_TOL
    ok = r == 0 if table.exact else r < tol
    return CheckResult("bullet_consistency", ok, r, tol, window)


def bosonisation_deviation(table):
    """Residuals of the bosonised generators against the source ones."""
    m = bosonisation_map(table)
    A, Ad = transform_generators(m)
    D = table.dim
    gen_err = max(
        float(np.max(np.abs(A - pi_matrix(generator("A", table)).real))),
        float(np.max(np.abs(Ad - pi_matrix(generator("A_plus", table)).real))),
    )
    C = (A @ Ad - Ad @ A)[: D - 1, : D - 1]
    f = np.array([float(v) for v in table.f[: D - 1]])
    comm_err = float(np.max(np.abs(C - np.diag(f))))
    return gen_err, comm_err, float(max(1.0, np.max(np.abs(f))))


def check_bosonisation(table):
    try:
        gen_err, comm_err, scale = bosonisation_deviation(table)
    except DegenerateDeformationError as exc:
        return CheckResult("bosonisation", False, None, None, None, f"not invertible: defect at level {exc.level}")
    tol = COMMUTATOR_TOL * scale
    return CheckResult(
        "bosonisation", gen_err < tol and comm_err < tol, max(gen_err, comm_err), tol, table.dim - 2,
        extra={"generator_error": gen_err, "commutator_error": comm_err},
    )


def check_coproduct(table):
    """Weyl relation for ``Delta_weyl`` and homomorphism of the transported coproduct.

    Runs on the leading ``min(D, 6)`` levels.
    """
    D = min(table.dim, 6, MAX_TENSOR_DIM)
    spec = table.source.with_level_cap(D)
    small = build_ladder_table(spec)
    try:
        dc = DeformedCoproduct(bosonisation_map(small))
    except DegenerateDeformationError as exc:
        return CheckResult("coproduct_homomorphism", False, None, None, None, f"not invertible: defect at level {exc.level}")
    std = dc.map.target
    dA, dAd = coproduct_weyl("A", std), coproduct_weyl("A_plus", std)
    weyl = window_residual(dA @ dAd - dAd @ dA, float(std.hbar) * np.eye(D * D), product_window(D))
    res = dc.homomorphism_residuals()
    scale = max(1.0, max(abs(float(v)) for v in small.F))
    tol = FLOAT_TOL * scale
    worst = max(weyl, max(res.values()))
    return CheckResult(
        "coproduct_homomorphism", worst < tol, worst, tol, D,
        extra={"weyl_commutator": weyl, **res},
    )


def run_suite(spec, dim=None, mode="float", seed=0):
    """Run every check for ``spec`` truncated to ``dim`` levels.

    Parameters
    ----------
    mode : {"float", "rational"}
        Rational mode uses exact Fraction tables for the algebraic checks.
    """
    if mode not in ("float", "rational"):
        raise ValueError(f"mode must be 'float' or 'rational', got {mode!r}")
    if dim is None:
        dim = spec.level_cap
    if spec.kind == "table":
        dim = min(dim, len(spec.values))
    cap = MAX_DIM_FLOAT if mode == "float" else MAX_DIM_RATIONAL
    if not 2 <= dim <= cap:
        raise ValueError(f"dim must lie in [2, {cap}] for {mode} mode, got {dim}")
    spec = spec.with_level_cap(dim)
    exact = mode == "rational"
    table = build_ladder_table(spec, exact=exact)
    ftable = build_ladder_table(spec)
    rng = np.random.default_rng(seed)
    checks = [
        check_star_associativity(ftable, rng),
        check_commutator(table),
        check_sigma_round_trip(table),
        check_bullet(table),
        check_bosonisation(ftable),
        check_coproduct(ftable),
    ]
    defect = ftable.first_degenerate_level()
    return {
        "spec": spec.to_dict(),
        "dim": dim,
        "mode": mode,
        "first_degenerate_level": defect,
        "checks": [c.to_dict() for c in checks],
        "passed": all(c.passed for c in checks),
    }

