"""Bimodular eigenstate basis ``Omega_nm`` truncated to ``D`` levels.

In this basis the deformed star product does not depend on the deformation
at all: ``Omega_nm * Omega_n'm' = delta(m, n') Omega_nm'``.  The deformation
only enters through the generators, whose coefficients are built from the
ladder table.

Elements can also be stored in the *unnormalised* basis
``U_nm = A+^n * Omega_00 * A^m = sqrt(F!(n) F!(m)) Omega_nm``.  There the
product rule reads ``U_nm * U_n'm' = delta(m, n') F!(m) U_nm'`` and every
generator has rational coefficients, which is what the exact (Fraction)
arithmetic mode relies on.
"""
from __future__ import annotations

import math
import re
from collections import defaultdict

import numpy as np

from .errors import DegenerateDeformationError, IncompatibleError, SpecError

GENERATORS = ("E", "A", "A_plus", "N", "H")

_ALIASES = {
    "E": "E",
    "1": "E",
    "A": "A",
    "A_plus": "A_plus",
    "A+": "A_plus",
    "A⁺": "A_plus",
    "A^+": "A_plus",
    "Ad": "A_plus",
    "N": "N",
    "H": "H",
}


def generator_name(which):
    try:
        return _ALIASES[which]
    except KeyError:
        raise ValueError(f"unknown generator {which!r}; expected one of {GENERATORS}") from None


def _is_zero(c):
    return c == 0


class EigenElement:
    """Finite linear combination of eigenstates ``Omega_nm``.

    Parameters
    ----------
    coeffs : mapping
        ``{(n, m): amplitude}``; zero amplitudes are dropped.  Amplitudes may
        be any number type (float, complex, int, Fraction).
    table : LadderTable
        Ladder data of the deformation; fixes the level cap ``D``.
    unnormalised : bool
        Coefficients refer to ``U_nm`` instead of ``Omega_nm``.
    """

    __slots__ = ("coeffs", "table", "unnormalised")

    def __init__(self, coeffs, table, unnormalised=False):
        D = table.dim
        clean = {}
        for (n, m), c in dict(coeffs).items():
            if not (0 <= n < D and 0 <= m < D):
                raise IndexError(f"index ({n}, {m}) outside level cap {D}")
            if not _is_zero(c):
                clean[(int(n), int(m))] = c
        self.coeffs = clean
        self.table = table
        self.unnormalised = unnormalised

    # constructors ---------------------------------------------------------
    @classmethod
    def basis(cls, n, m, table, coeff=1, unnormalised=False):
        return cls({(n, m): coeff}, table, unnormalised)

    @classmethod
    def zero(cls, table, unnormalised=False):
        return cls({}, table, unnormalised)

    @classmethod
    def identity(cls, table, unnormalised=False):
        """The truncated resolution of the identity ``I = sum_n Omega_nn``."""
        if unnormalised:
            return cls({(n, n): 1 / table.F_fact[n] for n in range(table.dim)}, table, True)
        return cls({(n, n): 1 for n in range(table.dim)}, table)

    @property
    def dim(self):
        return self.table.dim

    def __repr__(self):
        tag = "U" if self.unnormalised else "Omega"
        terms = " + ".join(f"({c}){tag}_{n},{m}" for (n, m), c in sorted(self.coeffs.items()))
        return f"EigenElement({terms or '0'}, dim={self.dim})"

    # arithmetic -----------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, EigenElement):
            raise TypeError(f"expected EigenElement, got {type(other).__name__}")
        if self.unnormalised != other.unnormalised:
            raise IncompatibleError("cannot mix normalised and unnormalised eigenstate coordinates")
        if self.dim != other.dim or self.table != other.table:
            raise IncompatibleError("eigen elements belong to different ladder tables")

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return EigenElement(out, self.table, self.unnormalised)

    def __neg__(self):
        return EigenElement({k: -c for k, c in self.coeffs.items()}, self.table, self.unnormalised)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, EigenElement):
            return NotImplemented
        return EigenElement({k: scalar * c for k, c in self.coeffs.items()}, self.table, self.unnormalised)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, EigenElement):
            return NotImplemented
        return (
            self.unnormalised == other.unnormalised
            and self.table == other.table
            and self.coeffs == other.coeffs
        )

    __hash__ = None

    def max_abs_diff(self, other):
        self._check(other)
        keys = set(self.coeffs) | set(other.coeffs)
        return max((abs(self.coeffs.get(k, 0) - other.coeffs.get(k, 0)) for k in keys), default=0.0)

    def restrict(self, window):
        """Drop every term with an index above ``window``."""
        return EigenElement(
            {(n, m): c for (n, m), c in self.coeffs.items() if n <= window and m <= window},
            self.table,
            self.unnormalised,
        )

    # conversions ------------------------------------------------------------
    def normalised(self):
        """Coordinates in the ``Omega_nm`` basis (floats)."""
        if not self.unnormalised:
            return self
        alpha = self.table.alpha()
        return EigenElement(
            {(n, m): c * alpha[n] * alpha[m] for (n, m), c in self.coeffs.items()}, self.table
        )

    def to_unnormalised(self):
        if self.unnormalised:
            return self
        alpha = self.table.alpha()
        return EigenElement(
            {(n, m): c / (alpha[n] * alpha[m]) for (n, m), c in self.coeffs.items()}, self.table, True
        )

    def to_dict(self):
        el = self.normalised()
        terms = []
        for (n, m), c in sorted(el.coeffs.items()):
            c = complex(c)
            terms.append({"n": n, "m": m, "re": c.real, "im": c.imag})
        return {"dim": self.dim, "terms": terms}

    @classmethod
    def from_dict(cls, data, table):
        if not isinstance(data, dict) or set(data) - {"dim", "terms"}:
            raise SpecError("eigen element JSON must have exactly 'dim' and 'terms'")
        if data.get("dim") != table.dim:
            raise IncompatibleError(f"element dim {data.get('dim')} does not match level cap {table.dim}")
        coeffs = {}
        for t in data["terms"]:
            if set(t) - {"n", "m", "re", "im"}:
                raise SpecError(f"unknown term fields {sorted(set(t) - {'n', 'm', 're', 'im'})}")
            key = (int(t["n"]), int(t["m"]))
            coeffs[key] = coeffs.get(key, 0) + complex(t.get("re", 0.0), t.get("im", 0.0))
        return cls(coeffs, table)


def star(x, y):
    """Star product; in coefficient space this is the matrix product."""
    x._check(y)
    rows = defaultdict(list)
    for (n, m), c in y.coeffs.items():
        rows[n].append((m, c))
    out = {}
    F_fact = x.table.F_fact
    for (n, m), c in x.coeffs.items():
        w = F_fact[m] if x.unnormalised else None
        for k, d in rows.get(m, ()):
            v = c * d if w is None else c * d * w
            out[(n, k)] = out.get((n, k), 0) + v
    return EigenElement(out, x.table, x.unnormalised)


def conjugate(x):
    """Complex conjugation ``Omega_nm -> Omega_mn`` (antilinear)."""
    return EigenElement(
        {(m, n): c.conjugate() for (n, m), c in x.coeffs.items()}, x.table, x.unnormalised
    )


def inner_product(x, y):
    """Sesquilinear pairing with ``<Omega_nm, Omega_n'm'> = delta delta``."""
    x._check(y)
    total = 0
    F_fact = x.table.F_fact
    for k, c in x.coeffs.items():
        d = y.coeffs.get(k)
        if d is not None:
            v = c.conjugate() * d
            if x.unnormalised:
                v = v * F_fact[k[0]] * F_fact[k[1]]
            total = total + v
    return total


def _root(table, j):
    v = table.F[j]
    if v < 0:
        raise DegenerateDeformationError(j, f"degenerate deformation: F({j}) = {v} < 0")
    return math.sqrt(v)


def generator(which, table, unnormalised=False):
    """Eigenstate image of a generator, truncated to ``D`` levels.

    ``E -> sum Omega_nn``, ``A -> sum sqrt(F(n+1)) Omega_n,n+1``,
    ``A+ -> sum sqrt(F(n+1)) Omega_n+1,n``, ``N -> sum n Omega_nn`` and
    ``H -> sum E(n) Omega_nn``.  With ``unnormalised=True`` the result is
    expressed in ``U_nm`` coordinates, where the ladder coefficients become
    ``1/F!(n)`` and stay exact for Fraction tables.
    """
    name = generator_name(which)
    D = table.dim
    F, Ff = table.F, table.F_fact
    coeffs = {}
    if name in ("E", "N", "H"):
        for n in range(D):
            v = {"E": 1, "N": n, "H": table.E[n]}[name]
            coeffs[(n, n)] = v / Ff[n] if unnormalised else v
    else:
        for n in range(D - 1):
            if unnormalised:
                if F[n + 1] == 0:
                    continue
                v = 1 / Ff[n]
            else:
                v = _root(table, n + 1)
            key = (n, n + 1) if name == "A" else (n + 1, n)
            coeffs[key] = v
    return EigenElement(coeffs, table, unnormalised)


def apply_ladder(side, which, x):
    """Act with a generator on the left or the right of ``x`` using the ladder rules.

    Left:  ``A Omega_nm = sqrt(F(n)) Omega_n-1,m``,
    ``A+ Omega_nm = sqrt(F(n+1)) Omega_n+1,m``, ``N Omega_nm = n Omega_nm``.
    Right: ``Omega_nm A = sqrt(F(m+1)) Omega_n,m+1``,
    ``Omega_nm A+ = sqrt(F(m)) Omega_n,m-1``, ``Omega_nm N = m Omega_nm``.
    Terms pushed past the level cap are dropped.
    """
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    if x.unnormalised:
        raise IncompatibleError("ladder rules are stated in normalised coordinates")
    name = generator_name(which)
    table = x.table
    D = table.dim
    out = {}

    def put(key, v):
        if 0 <= key[0] < D and 0 <= key[1] < D and v != 0:
            out[key] = out.get(key, 0) + v

    for (n, m), c in x.coeffs.items():
        k = n if side == "left" else m
        if name == "E":
            put((n, m), c)
        elif name == "N":
            put((n, m), k * c)
        elif name == "H":
            put((n, m), table.E[k] * c)
        elif side == "left" and name == "A":
            if n > 0:
                put((n - 1, m), _root(table, n) * c)
        elif side == "left":
            if n + 1 < D:
                put((n + 1, m), _root(table, n + 1) * c)
        elif name == "A":
            if m + 1 < D:
                put((n, m + 1), _root(table, m + 1) * c)
        elif m > 0:
            put((n, m - 1), _root(table, m) * c)
    return EigenElement(out, table)


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][-+]?\d+)?|\.\d+(?:[eE][-+]?\d+)?)"
    r"|(?P<gen>A⁺|A\^\+|Ad|A_plus|A|N|E|H)"
    r"|(?P<op>[-+−*·]))"
)


def parse_word(text):
    """Parse a polynomial word such as ``"A A⁺ - A⁺ A"`` or ``"2 N + 1"``.

    Creation is written ``A⁺``, ``A^+``, ``Ad`` or ``A_plus``; a bare ``+``
    is always addition.  Returns a list of ``(coefficient, letters)``.
    """
    pos, terms = 0, []
    sign, coef, letters, started = 1, 1, [], False
    text = text.strip()
    if not text:
        raise ValueError("empty word")

    def flush():
        if not started:
            raise ValueError(f"dangling operator in word {text!r}")
        terms.append((sign * coef, tuple(letters)))

    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if mt is None or mt.end() == pos:
            raise ValueError(f"cannot parse word {text!r} at position {pos}")
        pos = mt.end()
        if mt.group("num") is not None:
            tok = mt.group("num")
            coef *= int(tok) if tok.isdigit() else float(tok)
            started = True
        elif mt.group("gen") is not None:
            letters.append(generator_name(mt.group("gen")))
            started = True
        else:
            op = mt.group("op")
            if op in "*·":
                continue
            if started:
                flush()
            sign = -1 if op in "-−" else 1
            coef, letters, started = 1, [], False
    flush()
    return terms


def sigma_hom(word, table, unnormalised=False):
    """Evaluate ``Sigma(u) = I * u * I`` for a polynomial word in the generators.

    ``word`` is either a string accepted by :func:`parse_word` or a sequence
    of ``(coefficient, letters)`` pairs.  Products are formed left to right
    with :func:`star`; no reordering is attempted.
    """
    terms = parse_word(word) if isinstance(word, str) else list(word)
    ident = EigenElement.identity(table, unnormalised)
    gens = {}
    total = EigenElement.zero(table, unnormalised)
    for coef, letters in terms:
        acc = ident
        for letter in letters:
            name = generator_name(letter)
            if name not in gens:
                gens[name] = generator(name, table, unnormalised)
            acc = star(acc, gens[name])
        total = total + coef * star(acc, ident)
    return total


def pi_matrix(x, dtype=complex):
    """Matrix image ``pi(Omega_nm) = e(n, m)`` as a dense ``D x D`` array.

    Unnormalised elements are converted first.  ``dtype=object`` keeps the
    coefficients as they are (e.g. Fractions).
    """
    if x.unnormalised and dtype is not object:
        x = x.normalised()
    M = np.zeros((x.dim, x.dim), dtype=dtype)
    if dtype is object:
        M[:] = 0
    for (n, m), c in x.coeffs.items():
        M[n, m] = c
    return M


def from_matrix(M, table):
    """Inverse of :func:`pi_matrix`."""
    M = np.asarray(M)
    if M.shape != (table.dim, table.dim):
        raise IncompatibleError(f"matrix shape {M.shape} does not match level cap {table.dim}")
    return EigenElement({(n, m): M[n, m] for n, m in zip(*np.nonzero(M))}, table)
