"""Classical limit: Hamiltonians ``F(H0)``, weighted Poisson brackets,
commutator-order checks and the quantisation rule.

Two different ``F`` objects appear here and are kept apart on purpose:
the discrete ladder sum ``LadderTable.F`` and the continuum antiderivative
``F(x) = integral_0^x f(s) ds`` of the hbar-scaled series.
:func:`discrete_continuum_report` measures how far apart they are.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from scipy import integrate

from .deformation import build_ladder_table
from .errors import UnsupportedKindError

FD_STEP = 1e-5
EXACT_THRESHOLD = 1e-14


class ClassicalFunction:
    """Real function of one variable, polynomial or callable.

    Parameters
    ----------
    coeffs : sequence, optional
        Polynomial coefficients ``c0, c1, ...`` (exact derivatives).
    func : callable, optional
        Black-box function; derivatives by central differences at relative
        step ``1e-5``.
    """

    __slots__ = ("coeffs", "func")

    def __init__(self, coeffs=None, func=None):
        if (coeffs is None) == (func is None):
            raise ValueError("give exactly one of coeffs or func")
        self.coeffs = None if coeffs is None else tuple(coeffs)
        self.func = func

    @classmethod
    def polynomial(cls, coeffs):
        return cls(coeffs=coeffs)

    @classmethod
    def monomial(cls, k, c=1):
        return cls(coeffs=[0] * k + [c])

    @property
    def is_polynomial(self):
        return self.coeffs is not None

    def __repr__(self):
        if self.is_polynomial:
            return f"ClassicalFunction(coeffs={list(self.coeffs)})"
        return f"ClassicalFunction(func={self.func!r})"

    def __call__(self, x):
        if self.is_polynomial:
            acc = 0 * x
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc
        return self.func(x)

    def derivative(self, k=1):
        """``k``-th derivative; exact for polynomials."""
        if k == 0:
            return self
        if self.is_polynomial:
            c = list(self.coeffs)
            for _ in range(k):
                c = [i * c[i] for i in range(1, len(c))] or [0]
            return ClassicalFunction(coeffs=c)
        g = self.func

        def d(x, g=g):
            h = FD_STEP * max(1.0, abs(x))
            return (g(x + h) - g(x - h)) / (2 * h)

        return ClassicalFunction(func=d).derivative(k - 1)

    def antiderivative(self):
        """Antiderivative vanishing at 0 (polynomials only)."""
        if not self.is_polynomial:
            raise UnsupportedKindError("antiderivative needs a polynomial")
        return ClassicalFunction(coeffs=[0] + [c / (i + 1) if not isinstance(c, int) else Fraction(c, i + 1)
                                               for i, c in enumerate(self.coeffs)])


def classical_hamiltonian(spec):
    """Continuum ladder function ``F(x) = integral_0^x f(s) ds``.

    ``spec`` is a series spec whose coefficients already carry the
    ``q_n -> q_n hbar**n`` scaling.  The standard boson is accepted and gives
    the harmonic oscillator ``F(x) = x``.
    """
    if spec.kind == "standard":
        return ClassicalFunction(coeffs=[0, 1])
    if spec.kind != "series":
        raise UnsupportedKindError(f"classical Hamiltonian needs a series spec, got {spec.kind!r}")
    return ClassicalFunction(coeffs=[float(c) for c in spec.coeffs]).antiderivative()


# polynomials in (a, a+) ------------------------------------------------------------

class PhasePolynomial:
    """Polynomial ``sum c_ij a**i a+**j`` in the complex coordinates.

    ``a = (q + ip)/sqrt(2)`` and ``a+ = (q - ip)/sqrt(2)``, so ``a a+ = H0``.
    Coefficients may be ints, Fractions, floats or complex numbers.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: v for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def a(cls):
        return cls({(1, 0): 1})

    @classmethod
    def a_plus(cls):
        return cls({(0, 1): 1})

    @classmethod
    def H0(cls):
        return cls({(1, 1): 1})

    @classmethod
    def constant(cls, c):
        return cls({(0, 0): c})

    @classmethod
    def from_H0(cls, f):
        """Substitute ``H0 = a a+`` into a polynomial :class:`ClassicalFunction`."""
        if not f.is_polynomial:
            raise UnsupportedKindError("weight must be a polynomial in H0 for an exact bracket")
        return cls({(k, k): c for k, c in enumerate(f.coeffs)})

    def __repr__(self):
        return f"PhasePolynomial({self.terms})"

    def __eq__(self, other):
        if isinstance(other, (int, float, complex, Fraction)):
            other = PhasePolynomial.constant(other)
        return isinstance(other, PhasePolynomial) and self.terms == other.terms

    __hash__ = None

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return PhasePolynomial(out)

    def __neg__(self):
        return PhasePolynomial({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, PhasePolynomial):
            return PhasePolynomial({k: other * v for k, v in self.terms.items()})
        out = {}
        for (i, j), u in self.terms.items():
            for (k, l), v in other.terms.items():
                key = (i + k, j + l)
                out[key] = out.get(key, 0) + u * v
        return PhasePolynomial(out)

    __rmul__ = __mul__

    def d_a(self):
        return PhasePolynomial({(i - 1, j): i * c for (i, j), c in self.terms.items() if i})

    def d_a_plus(self):
        return PhasePolynomial({(i, j - 1): j * c for (i, j), c in self.terms.items() if j})

    def __call__(self, q, p):
        a = (q + 1j * p) / math.sqrt(2.0)
        ad = (q - 1j * p) / math.sqrt(2.0)
        return sum(complex(c) * a**i * ad**j for (i, j), c in self.terms.items())

    @property
    def is_zero(self):
        return not self.terms


def poisson_bracket(f, g, weight=None):
    """Weighted bracket ``w(H0) (d_a f d_a+ g - d_a+ f d_a g)``.

    In the complex coordinates the canonical bracket is normalised so that
    ``{a, a+} = 1``.  ``weight`` is a :class:`ClassicalFunction` of ``H0``;
    a polynomial weight gives an exact :class:`PhasePolynomial`, a callable
    weight gives a function of ``(q, p)``.
    """
    if not isinstance(f, PhasePolynomial) or not isinstance(g, PhasePolynomial):
        raise UnsupportedKindError("poisson_bracket needs polynomial arguments")
    core = f.d_a() * g.d_a_plus() - f.d_a_plus() * g.d_a()
    if weight is None:
        return core
    if weight.is_polynomial:
        return PhasePolynomial.from_H0(weight) * core
    return lambda q, p: weight(0.5 * (q * q + p * p)) * core(q, p)


def jacobi_residual(f, g, h, weight=None):
    """Cyclic sum ``{f,{g,h}} + {g,{h,f}} + {h,{f,g}}`` for a polynomial weight."""
    b = lambda x, y: poisson_bracket(x, y, weight)
    return b(f, b(g, h)) + b(g, b(h, f)) + b(h, b(f, g))


# order checks -----------------------------------------------------------------

def commutator_residual(F, H0, hbar):
    """``|F(H0 + hbar/2) - F(H0 - hbar/2) - hbar F'(H0)|``.

    For polynomials the odd Taylor terms of order ``>= 3`` are summed
    directly, which avoids the cancellation of the naive difference.
    """
    if F.is_polynomial:
        deg = len(F.coeffs) - 1
        acc = 0.0
        for k in range(3, deg + 1, 2):
            acc += 2.0 * float(F.derivative(k)(H0)) * (hbar / 2.0) ** k / math.factorial(k)
        return abs(acc)
    return abs(F(H0 + hbar / 2) - F(H0 - hbar / 2) - hbar * F.derivative()(H0))


def loglog_slope(xs, ys):
    """Least-squares slope of ``log y`` against ``log x``."""
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def commutator_order_check(F, H0, hbars):
    """Order in ``hbar`` of the commutator expansion residual.

    Returns ``{"slope": s, "residuals": [[hbar, r], ...]}``, or
    ``{"slope": "exact", ...}`` when every residual is below ``1e-14``.
    """
    hbars = [float(h) for h in hbars]
    if any(h < 1e-4 for h in hbars):
        raise ValueError("hbar values must be >= 1e-4")
    if any(b >= a for a, b in zip(hbars, hbars[1:])):
        raise ValueError("hbar values must be strictly decreasing")
    res = [commutator_residual(F, H0, h) for h in hbars]
    report = {"residuals": [[h, float(r)] for h, r in zip(hbars, res)]}
    if all(r < EXACT_THRESHOLD for r in res):
        report["slope"] = "exact"
    else:
        report["slope"] = loglog_slope(hbars, res)
    return report


def quantize_bracket(theta, H0, hbar):
    """Quantisation rule ``[a, a+] = integral_{H0-hbar/2}^{H0+hbar/2} theta``.

    Returns ``(integral, expansion)`` with the integral from adaptive
    Gauss-Kronrod quadrature and ``expansion = hbar theta(H0) +
    hbar**3 theta''(H0) / 24``; they differ at order ``hbar**5``.
    """
    lo, hi = H0 - hbar / 2, H0 + hbar / 2

    def value(x):
        try:
            v = float(theta(x))
        except (ArithmeticError, ValueError) as exc:
            raise ValueError(f"theta cannot be evaluated at {x}: {exc}") from exc
        if not math.isfinite(v):
            raise ValueError(f"theta is not finite at {x}")
        return v

    for x in (lo, H0, hi):
        value(x)
    integral, _ = integrate.quad(value, lo, hi, epsabs=1e-14, epsrel=1e-13, limit=200)
    expansion = hbar * float(theta(H0)) + hbar**3 * float(theta.derivative(2)(H0)) / 24.0
    return integral, expansion


def quantization_order_check(theta, H0, hbars):
    """Slope of ``|integral - expansion|`` against ``hbar``."""
    res = []
    for h in hbars:
        i, e = quantize_bracket(theta, H0, h)
        res.append(abs(i - e))
    return {"slope": loglog_slope(hbars, res), "residuals": [[float(h), float(r)] for h, r in zip(hbars, res)]}


def discrete_continuum_report(spec):
    """Compare the ladder sum ``F(n)`` with the continuum ``F(x)`` at integers.

    Returns ``{"max_deviation", "max_df", "C"}`` where ``C`` is the ratio of
    the largest deviation over ``n <= D`` to ``max |f'|`` on ``[0, D]``.
    """
    table = build_ladder_table(spec)
    Fc = classical_hamiltonian(spec)
    D = table.dim
    dev = max(abs(float(table.F[n]) - float(Fc(n))) for n in range(D + 1))
    fprime = Fc.derivative(2)
    xs = np.linspace(0.0, D, 4 * D + 1)
    max_df = float(np.max(np.abs([float(fprime(x)) for x in xs])))
    return {
        "max_deviation": dev,
        "max_df": max_df,
        "C": dev / max_df if max_df > 0 else (0.0 if dev == 0 else math.inf),
    }
