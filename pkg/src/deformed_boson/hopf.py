"""Coproducts on the truncated tensor square ``V (x) V``, ``dim V = D``.

Tensor operators are dense ``D**2 x D**2`` arrays; basis state ``(i, j)``
sits at index ``i * D + j``.  Three structures are provided:

* the Hopf structure of the Heisenberg algebra ``h(1)`` with the
  non-canonical ``Delta(N)`` that restores ``hbar Delta(N) = Delta(A+) Delta(A)``;
* the Weyl coproduct ``Delta(A) = (A (x) 1 + 1 (x) A) / sqrt(2)``, which keeps
  ``[Delta(A), Delta(A+)] = hbar``;
* a deformed coproduct obtained by transporting the Weyl one through the
  bosonisation ``A = K(N) a``: ``Delta_q(A) = K(Delta N) Delta(a)``.

Truncation corrupts states near the top level, so every identity is checked
on an explicit window of basis states.
"""
from __future__ import annotations

import math

import numpy as np

from .aso import ASOElement, bullet_undeformed
from .eigenstate import generator, generator_name, pi_matrix
from .equivalence import bosonisation_map
from .errors import DegenerateDeformationError, UnsupportedKindError

MAX_TENSOR_DIM = 8
_HOPF_GENERATORS = ("E", "A", "A_plus", "N")


def _check_dim(D):
    if D > MAX_TENSOR_DIM:
        raise ValueError(f"tensor operations are limited to D <= {MAX_TENSOR_DIM}, got {D}")


def _require_standard(table):
    if not table.is_standard:
        raise UnsupportedKindError("this coproduct is defined on the standard boson only")
    _check_dim(table.dim)


def _mode(which, table):
    """Single-mode generator matrix; ``N`` is the number operator itself."""
    return pi_matrix(generator(which, table)).real


def _hopf_name(which):
    name = generator_name(which)
    if name not in _HOPF_GENERATORS:
        raise ValueError(f"coproduct defined for {_HOPF_GENERATORS}, got {which!r}")
    return name


def kron(X, Y):
    return np.kron(X, Y)


def product_window(D, margin=1):
    """Indices of states ``(i, j)`` with ``i, j <= D - 1 - margin``."""
    return np.array([i * D + j for i in range(D - margin) for j in range(D - margin)], dtype=int)


def total_window(D, margin=1):
    """Indices of states ``(i, j)`` with ``i + j <= D - 1 - margin``."""
    return np.array([i * D + j for i in range(D) for j in range(D) if i + j <= D - 1 - margin], dtype=int)


def window_residual(X, Y, idx):
    """``max |X - Y|`` on the block of rows and columns ``idx``."""
    diff = (np.asarray(X) - np.asarray(Y))[np.ix_(idx, idx)]
    return float(np.max(np.abs(diff))) if diff.size else 0.0


# h(1) Hopf structure ------------------------------------------------------------

def _h1_terms(name, hbar):
    """``Delta_h1(name)`` as a list of ``(coefficient, left, right)`` letters."""
    if name == "E":
        return [(1.0, "E", "E")]
    if name in ("A", "A_plus"):
        return [(1.0, name, "E"), (1.0, "E", name)]
    return [
        (1.0, "N", "E"),
        (1.0, "E", "N"),
        (1.0 / hbar, "A", "A_plus"),
        (1.0 / hbar, "A_plus", "A"),
    ]


def coproduct_h1(which, table):
    """Coproduct of ``h(1)`` on a generator, as a tensor operator.

    ``Delta(1) = 1 (x) 1``, ``Delta(A) = A (x) 1 + 1 (x) A`` (same for
    ``A+``), and ``Delta(N) = N (x) 1 + 1 (x) N + (A (x) A+ + A+ (x) A) / hbar``.
    """
    _require_standard(table)
    name = _hopf_name(which)
    mats = {g: _mode(g, table) for g in _HOPF_GENERATORS}
    return sum(c * kron(mats[x], mats[y]) for c, x, y in _h1_terms(name, float(table.hbar)))


def counit(which):
    """Counit of ``h(1)``: ``1`` on the unit, ``0`` on ``A``, ``A+`` and ``N``."""
    return 1.0 if _hopf_name(which) == "E" else 0.0


def counit_monomial(n, m):
    """Counit of ``A+^n A^m`` by multiplicative extension."""
    return 1.0 if n == 0 and m == 0 else 0.0


def antipode(which, table):
    """Antipode on a generator: ``S(x) = -x`` and ``S(1) = 1``."""
    name = _hopf_name(which)
    M = _mode(name, table)
    return M if name == "E" else -M


def antipode_word(letters, table):
    """Anti-homomorphic extension ``S(x1 ... xk) = S(xk) ... S(x1)``."""
    D = table.dim
    out = np.eye(D)
    for letter in reversed(letters):
        out = out @ antipode(letter, table)
    return out


def antipode_axiom_residual(which, table):
    """``max |m(S (x) id) Delta(x) - eps(x) 1|`` on levels ``< D - 1``.

    Zero for ``E``, ``A`` and ``A+``.  For ``N`` the rule ``S(N) = -N`` is
    not compatible with the non-canonical ``Delta(N)``: the sum is
    ``-(A A+ + A+ A) / hbar`` and the residual measures that gap.
    """
    _require_standard(table)
    name = _hopf_name(which)
    D = table.dim
    mats = {g: _mode(g, table) for g in _HOPF_GENERATORS}
    acc = np.zeros((D, D))
    for c, x, y in _h1_terms(name, float(table.hbar)):
        acc = acc + c * antipode(x, table) @ mats[y]
    diff = (acc - counit(name) * np.eye(D))[: D - 1, : D - 1]
    return float(np.max(np.abs(diff)))


def coassociativity_residual(which, table):
    """``max |(Delta (x) id) Delta(x) - (id (x) Delta) Delta(x)|`` on ``D**3`` states.

    Both sides are expanded letter by letter from :func:`_h1_terms` and
    assembled as triple Kronecker products, so no truncated product is ever
    formed and the identity holds without a window.
    """
    _require_standard(table)
    name = _hopf_name(which)
    hbar = float(table.hbar)
    mats = {g: _mode(g, table) for g in _HOPF_GENERATORS}

    def triple(terms):
        return sum(c * np.kron(np.kron(mats[x], mats[y]), mats[z]) for c, x, y, z in terms)

    left, right = [], []
    for c, x, y in _h1_terms(name, hbar):
        left += [(c * c1, x1, y1, y) for c1, x1, y1 in _h1_terms(x, hbar)]
        right += [(c * c2, x, x2, y2) for c2, x2, y2 in _h1_terms(y, hbar)]
    return float(np.max(np.abs(triple(left) - triple(right))))


# Weyl coproduct ------------------------------------------------------------------

def coproduct_weyl(which, table):
    """Weyl coproduct ``Delta(A) = (A (x) 1 + 1 (x) A) / sqrt(2)``.

    ``Delta(N)`` is fixed by ``hbar Delta(N) = Delta(A+) Delta(A)``.
    """
    _require_standard(table)
    name = _hopf_name(which)
    D = table.dim
    I = np.eye(D)
    if name == "E":
        return np.eye(D * D)
    if name == "N":
        return coproduct_weyl("A_plus", table) @ coproduct_weyl("A", table) / float(table.hbar)
    M = _mode(name, table)
    return (kron(M, I) + kron(I, M)) / math.sqrt(2.0)


def coproduct_weyl_aso(x):
    """Weyl coproduct of an ASO element, ``A+^n A^m -> Delta(A+)^n Delta(A)^m``."""
    table = x.table
    Da = coproduct_weyl("A", table)
    Dad = coproduct_weyl("A_plus", table)
    D2 = table.dim**2
    out = np.zeros((D2, D2))
    for (n, m), c in x.coeffs.items():
        out = out + c * np.linalg.matrix_power(Dad, n) @ np.linalg.matrix_power(Da, m)
    return out


def weyl_homomorphism_residual(x, y):
    """Compare ``Delta(x . y)`` with ``Delta(x) Delta(y)`` on the safe window.

    ``x . y`` is reduced to anti-standard order with the undeformed bullet
    product, so the check exercises the Weyl relation and not just matrix
    associativity.  The window keeps states whose total number leaves room
    for the raising steps of both factors.
    """
    D = x.table.dim
    prod = bullet_undeformed(x, y)
    lhs = coproduct_weyl_aso(prod)
    rhs = coproduct_weyl_aso(x) @ coproduct_weyl_aso(y)
    margin = max(prod.degree, x.degree + y.degree, 1)
    return window_residual(lhs, rhs, total_window(D, margin))


# transported deformed coproduct --------------------------------------------------

def _spectral_function(M, D, values):
    """``g(M)`` for the number-preserving ``M = Delta(N)`` on complete blocks.

    ``Delta(N)`` maps the block of total number ``T = i + j`` to itself and
    has integer spectrum ``0 .. T`` there.  Blocks with ``T <= D - 1`` are
    complete; higher blocks are truncated and receive the identity.
    ``values[k]`` is ``g(k)``.  The result is assembled as
    ``1 + V diag(g - 1) V^H`` so that ``g = 1`` gives exactly the identity.
    """
    out = np.eye(D * D)
    for T in range(D):
        idx = np.array([i * D + (T - i) for i in range(T + 1)], dtype=int)
        w, V = np.linalg.eigh(M[np.ix_(idx, idx)])
        k = np.rint(w).astype(int)
        g = np.array([values[j] for j in k]) - 1.0
        out[np.ix_(idx, idx)] += (V * g) @ V.conj().T
    return out


class DeformedCoproduct:
    """Transport of the Weyl coproduct through a bosonisation map.

    Parameters
    ----------
    eq_map : EquivalenceMap
        Map from the deformed algebra onto the standard boson.

    Attributes
    ----------
    A, A_plus, N, E : ndarray
        ``Delta_q`` of the generators on ``V (x) V``.
    """

    def __init__(self, eq_map):
        if not eq_map.invertible:
            j = eq_map.first_defect
            raise DegenerateDeformationError(j, f"bosonisation map is not invertible: defect at level {j}")
        std = eq_map.target
        if not std.is_standard:
            raise UnsupportedKindError("deformed coproduct needs a map onto the standard boson")
        _check_dim(std.dim)
        D = std.dim
        self.map = eq_map
        self.dim = D
        Da = coproduct_weyl("A", std)
        Dad = coproduct_weyl("A_plus", std)
        self.N = coproduct_weyl("N", std)
        self.E = np.eye(D * D)
        self.K = _spectral_function(self.N, D, list(eq_map.K_values))
        self.A = self.K @ Da
        self.A_plus = Dad @ self.K

    def __call__(self, which):
        return getattr(self, _hopf_name(which))

    def function_of_N(self, values):
        """``g(Delta N)`` with ``values[k] = g(k)`` for ``k < D``."""
        return _spectral_function(self.N, self.dim, values)

    def homomorphism_residuals(self, margin=2):
        """Residuals of the defining relations on the window ``T <= D - 1 - margin``.

        For degree-2 words the images must satisfy
        ``A A+ = F(N + 1)``, ``A+ A = F(N)``, ``[A, A+] = f(N)``,
        ``A N = (N + 1) A`` and ``A+ N = (N - 1) A+``.
        """
        D = self.dim
        src = self.map.source
        F = [float(v) for v in src.F]
        f = [float(v) for v in src.f]
        idx = total_window(D, margin)
        I = self.E
        FN1 = self.function_of_N([F[k + 1] for k in range(D)])
        FN = self.function_of_N([F[k] for k in range(D)])
        fN = self.function_of_N([f[k] for k in range(D)])
        A, Ad, N = self.A, self.A_plus, self.N
        return {
            "A A+ = F(N+1)": window_residual(A @ Ad, FN1, idx),
            "A+ A = F(N)": window_residual(Ad @ A, FN, idx),
            "[A, A+] = f(N)": window_residual(A @ Ad - Ad @ A, fN, idx),
            "A N = (N+1) A": window_residual(A @ N, (N + I) @ A, idx),
            "A+ N = (N-1) A+": window_residual(Ad @ N, (N - I) @ Ad, idx),
        }


def coproduct_deformed(which, eq_map):
    """Transported deformed coproduct of a generator.

    ``Delta_q(A) = K(Delta N) Delta(a)``, ``Delta_q(A+) = Delta(a+) K(Delta N)``,
    ``Delta_q(N) = Delta(N)``, with ``Delta`` the Weyl coproduct of the
    standard boson and ``K`` the bosonisation function.

    Raises
    ------
    DegenerateDeformationError
        If ``eq_map`` is not invertible.
    """
    return DeformedCoproduct(eq_map)(which)


def deformed_coproduct_for(table):
    """Convenience: :class:`DeformedCoproduct` of the bosonisation of ``table``."""
    return DeformedCoproduct(bosonisation_map(table))


def counit_obstruction_check(table_or_hbar):
    """Show that a homomorphic counit must vanish on ``A`` and ``A+``.

    A counit with ``eps(1) = 1`` that is multiplicative on the Weyl product
    obeys ``eps(A) = eps(1 . A) = eps(1) eps(A)`` and maps the commutator
    ``[A, A+] = hbar`` to ``[eps(A), eps(A+)] = 0`` (scalars commute).  The
    contradiction ``0 != hbar eps(1)`` holds for every ``hbar > 0``.

    Parameters
    ----------
    table_or_hbar : LadderTable or float
        A plain number allows the formal commutative limit ``hbar = 0``.
    """
    hbar = float(table_or_hbar) if isinstance(table_or_hbar, (int, float)) else float(table_or_hbar.hbar)
    eps_A = eps_Ad = 0.0
    lhs = eps_A * eps_Ad - eps_Ad * eps_A
    rhs = hbar * 1.0
    return {
        "hbar": hbar,
        "eps_unit": 1.0,
        "commutator_of_images": lhs,
        "required": rhs,
        "obstruction": lhs != rhs,
    }
