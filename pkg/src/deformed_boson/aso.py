"""Anti-standard-ordered monomials ``A+^n * A^m`` and the bullet products.

``sigma`` sends a monomial to the eigenstate basis,

    sigma(A+^n A^m) = sum_i C(n, m, i) Omega_{n+i, m+i},
    C(n, m, i) = sqrt(F!(n+i) F!(m+i)) / F!(i),

and ``sigma_inverse`` undoes it with the triangular coefficients

    D(n, m, 0) = 1 / C(n, m, 0)
    D(n, m, k) = -C(n+k, m+k, 0)**-1 * sum_{i<k} C(n+i, m+i, k-i) D(n, m, i).

The deformed bullet product is the transport of the star product,
``x . y = sigma_inverse(sigma(x) * sigma(y))``.
"""
from __future__ import annotations

import math
import threading

from . import kernels
from .eigenstate import EigenElement, star
from .errors import DegenerateDeformationError, IncompatibleError, SpecError, TruncationError, UnsupportedKindError


def safe_window(dim, margin=None):
    """Largest level index guaranteed free of truncation error.

    ``margin`` defaults to ``dim // 2``.
    """
    if margin is None:
        margin = dim // 2
    if not 0 <= margin < dim:
        raise ValueError(f"margin must lie in [0, {dim}), got {margin}")
    return dim - margin


class ASOElement:
    """Finite linear combination of monomials ``A+^n * A^m``.

    Parameters
    ----------
    coeffs : mapping
        ``{(n, m): amplitude}`` with ``n`` the creation power and ``m`` the
        annihilation power.
    table : LadderTable
    max_degree : int, optional
        Cap on ``n + m``; defaults to ``2 * (D - 1)``.
    """

    __slots__ = ("coeffs", "table", "max_degree")

    def __init__(self, coeffs, table, max_degree=None):
        if max_degree is None:
            max_degree = 2 * (table.dim - 1)
        clean = {}
        for (n, m), c in dict(coeffs).items():
            if n < 0 or m < 0:
                raise IndexError(f"negative power ({n}, {m})")
            if n + m > max_degree:
                raise ValueError(f"monomial ({n}, {m}) exceeds max_degree {max_degree}")
            if c != 0:
                clean[(int(n), int(m))] = c
        self.coeffs = clean
        self.table = table
        self.max_degree = max_degree

    @classmethod
    def monomial(cls, n, m, table, coeff=1, max_degree=None):
        return cls({(n, m): coeff}, table, max_degree)

    @classmethod
    def unit(cls, table):
        return cls({(0, 0): 1}, table)

    def __repr__(self):
        terms = " + ".join(f"({c})A+^{n}A^{m}" for (n, m), c in sorted(self.coeffs.items()))
        return f"ASOElement({terms or '0'})"

    def _check(self, other):
        if not isinstance(other, ASOElement):
            raise TypeError(f"expected ASOElement, got {type(other).__name__}")
        if self.table != other.table:
            raise IncompatibleError("ASO elements belong to different ladder tables")

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return ASOElement(out, self.table, max(self.max_degree, other.max_degree))

    def __neg__(self):
        return ASOElement({k: -c for k, c in self.coeffs.items()}, self.table, self.max_degree)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, ASOElement):
            return NotImplemented
        return ASOElement({k: scalar * c for k, c in self.coeffs.items()}, self.table, self.max_degree)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, ASOElement):
            return NotImplemented
        return self.table == other.table and self.coeffs == other.coeffs

    __hash__ = None

    def max_abs_diff(self, other):
        self._check(other)
        keys = set(self.coeffs) | set(other.coeffs)
        return max((abs(self.coeffs.get(k, 0) - other.coeffs.get(k, 0)) for k in keys), default=0.0)

    def restrict(self, window):
        return ASOElement(
            {(n, m): c for (n, m), c in self.coeffs.items() if n <= window and m <= window},
            self.table,
            self.max_degree,
        )

    @property
    def degree(self):
        return max((n + m for n, m in self.coeffs), default=0)

    def to_dict(self):
        terms = []
        for (n, m), c in sorted(self.coeffs.items()):
            c = complex(c)
            terms.append({"np": n, "nm": m, "re": c.real, "im": c.imag})
        return {"terms": terms}

    @classmethod
    def from_dict(cls, data, table):
        if not isinstance(data, dict) or set(data) != {"terms"}:
            raise SpecError("ASO element JSON must have exactly 'terms'")
        coeffs = {}
        for t in data["terms"]:
            if set(t) - {"np", "nm", "re", "im"}:
                raise SpecError(f"unknown term fields {sorted(set(t) - {'np', 'nm', 're', 'im'})}")
            key = (int(t["np"]), int(t["nm"]))
            coeffs[key] = coeffs.get(key, 0) + complex(t.get("re", 0.0), t.get("im", 0.0))
        return cls(coeffs, table)


def _require_nondegenerate(table):
    level = table.first_degenerate_level()
    if level is not None:
        v = table.F[level]
        if v == 0:
            raise DegenerateDeformationError(level)
        raise DegenerateDeformationError(level, f"degenerate deformation: F({level}) = {v} is not positive")


class SigmaCoeffs:
    """Coefficients ``C(n, m, i)`` and memoised ``D(n, m, k)`` for one table.

    In normalised coordinates ``C`` is evaluated as
    ``R[n, i] * R[m, i]`` with ``R[a, i] = sqrt(F(i+1) ... F(i+a))``, which
    avoids the quotient of factorials.  In unnormalised (``U_nm``)
    coordinates ``C(n, m, i) = 1 / F!(i)``; everything is then rational for
    Fraction tables.

    The ``D`` cache is filled at most once per instance under a lock, so
    concurrent lookups see either nothing or the complete table.
    """

    def __init__(self, table, unnormalised=False):
        self.table = table
        self.unnormalised = unnormalised
        self._lock = threading.Lock()
        self._D_table = None
        self._d_memo = {}
        if not unnormalised:
            self._R = kernels.ladder_products(table.sqrt_F())

    def C(self, n, m, i):
        D = self.table.dim
        if n + i > D or m + i > D:
            raise IndexError(f"C({n}, {m}, {i}) needs levels beyond {D}")
        if self.unnormalised:
            Ff = self.table.F_fact[i]
            if Ff == 0:
                _require_nondegenerate(self.table)
            return 1 / Ff
        # python floats overflow to inf silently; numpy scalars would warn
        return float(self._R[n, i]) * float(self._R[m, i])

    def D_coeff(self, n, m, k):
        D = self.table.dim
        if n + k >= D or m + k >= D:
            raise IndexError(f"D({n}, {m}, {k}) needs levels beyond {D - 1}")
        if self.unnormalised:
            return self._d_unnormalised(n, m, k)
        if self._D_table is None:
            with self._lock:
                if self._D_table is None:
                    _require_nondegenerate(self.table)
                    self._D_table = kernels.sigma_inverse_table(self.table.sqrt_F())
        return float(self._D_table[n, m, k])

    def _d_unnormalised(self, n, m, k):
        # C(n+i, m+i, k-i) is independent of (n, m) here, hence so is D.
        memo = self._d_memo
        if k in memo:
            return memo[k]
        with self._lock:
            if not memo:
                _require_nondegenerate(self.table)
                memo[0] = 1 / self.C(n, m, 0)
            for kk in range(len(memo), k + 1):
                acc = 0
                for i in range(kk):
                    acc = acc + self.C(n + i, m + i, kk - i) * memo[i]
                memo[kk] = -acc / self.C(n + kk, m + kk, 0)
        return memo[k]


_coeff_cache = {}
_coeff_lock = threading.Lock()


def sigma_coeffs(table, unnormalised=False):
    """Shared :class:`SigmaCoeffs` instance for ``table``."""
    key = (id(table), unnormalised)
    with _coeff_lock:
        entry = _coeff_cache.get(key)
        if entry is None or entry.table is not table:
            entry = SigmaCoeffs(table, unnormalised)
            _coeff_cache[key] = entry
    return entry


def sigma(x, unnormalised=None):
    """Basis change from ASO monomials to eigenstates (truncated at ``D``).

    ``unnormalised`` defaults to ``x.table.exact``: exact tables produce
    ``U_nm`` coordinates with rational coefficients.
    """
    table = x.table
    if unnormalised is None:
        unnormalised = table.exact
    co = sigma_coeffs(table, unnormalised)
    D = table.dim
    out = {}
    for (n, m), c in x.coeffs.items():
        for i in range(D - max(n, m)):
            key = (n + i, m + i)
            out[key] = out.get(key, 0) + c * co.C(n, m, i)
    return EigenElement(out, table, unnormalised)


def sigma_inverse(x):
    """Basis change from eigenstates back to ASO monomials.

    Raises
    ------
    DegenerateDeformationError
        If some ladder level ``F(j)``, ``1 <= j <= D``, is not positive.
    """
    table = x.table
    co = sigma_coeffs(table, x.unnormalised)
    _require_nondegenerate(table)
    D = table.dim
    out = {}
    for (n, m), c in x.coeffs.items():
        for k in range(D - max(n, m)):
            key = (n + k, m + k)
            out[key] = out.get(key, 0) + c * co.D_coeff(n, m, k)
    return ASOElement(out, table)


def bullet_undeformed(x, y):
    """Bullet product of the undeformed Weyl algebra on ASO symbols.

    On monomials,
    ``(A+^n A^m) . (A+^r A^s) = sum_k hbar^k k! C(m,k) C(r,k) A+^(n+r-k) A^(m+s-k)``,
    i.e. every annihilator of the left factor is contracted with every
    creator of the right factor.  Terms above ``max_degree`` are dropped.
    """
    x._check(y)
    table = x.table
    if not table.is_standard:
        raise UnsupportedKindError("bullet_undeformed needs the standard boson; use bullet_deformed")
    hbar = table.f[0]
    cap = max(x.max_degree, y.max_degree)
    out = {}
    for (n, m), c in x.coeffs.items():
        for (r, s), d in y.coeffs.items():
            hk = 1
            for k in range(min(m, r) + 1):
                if k:
                    hk = hk * hbar
                key = (n + r - k, m + s - k)
                if key[0] + key[1] > cap:
                    continue
                w = math.factorial(k) * math.comb(m, k) * math.comb(r, k)
                out[key] = out.get(key, 0) + c * d * hk * w
    return ASOElement(out, table, cap)


def bullet_deformed(x, y, window=None):
    """Deformed bullet product ``sigma_inverse(sigma(x) * sigma(y))``.

    Only monomials with both powers ``<= window`` are returned; those are
    free of truncation error provided the inputs satisfy the checks below.
    ``window`` defaults to :func:`safe_window`.

    Raises
    ------
    TruncationError
        If the exact product could reach beyond ``window`` or the
        intermediate star product would leave the truncated space.
    DegenerateDeformationError
        If the ladder function vanishes at some level.
    """
    x._check(y)
    table = x.table
    D = table.dim
    _require_nondegenerate(table)
    if window is None:
        window = safe_window(D)
    nx = max((n for n, _ in x.coeffs), default=0)
    mx = max((m for _, m in x.coeffs), default=0)
    ny = max((n for n, _ in y.coeffs), default=0)
    my = max((m for _, m in y.coeffs), default=0)
    if nx + ny > window or mx + my > window:
        raise TruncationError(
            f"product powers up to ({nx + ny}, {mx + my}) exceed window {window}"
        )
    if window + mx > D - 1 or window + ny > D - 1:
        raise TruncationError(f"window {window} too large for level cap {D} with these factors")
    prod = star(sigma(x), sigma(y)).restrict(window)
    return sigma_inverse(prod).restrict(window)
