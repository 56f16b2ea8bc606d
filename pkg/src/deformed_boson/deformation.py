"""Deformation functions ``f(N)`` and the ladder tables derived from them.

A deformed boson algebra is fixed by the commutator ``[A, A+] = f(N)``.
Everything downstream only needs the values of ``f`` on the levels
``0 .. level_cap - 1`` together with the cumulative ladder function

    F(n)  = f(0) + f(1) + ... + f(n-1),      F(0) = 0
    F!(n) = F(1) F(2) ... F(n),              F!(0) = 1

and the spectrum ``E(n) = (F(n+1) + F(n)) / 2``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from numbers import Real

from .errors import LevelCapError, SpecError, UnsupportedKindError

KINDS = ("standard", "q", "qp", "series", "table")
DEFAULT_LEVEL_CAP = 32

_JSON_FIELDS = {
    "standard": set(),
    "q": {"q"},
    "qp": {"q", "p"},
    "series": {"coeffs"},
    "table": {"values"},
}


def as_rational(x):
    """Convert a real parameter to a :class:`~fractions.Fraction`.

    Floats are read through their shortest decimal representation, so the
    JSON literal ``0.1`` becomes ``1/10`` rather than the binary expansion.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise SpecError(f"non-finite parameter {x!r}")
        return Fraction(repr(x))
    return Fraction(x)


@dataclass(frozen=True)
class DeformationSpec:
    """Specification of a deformation ``f`` together with ``hbar``.

    Use the named constructors (:meth:`standard`, :meth:`q_symmetric`,
    :meth:`qp`, :meth:`series`, :meth:`table`) or :meth:`from_dict`.

    Attributes
    ----------
    kind : str
        One of ``"standard"``, ``"q"``, ``"qp"``, ``"series"``, ``"table"``.
    hbar : float
        Positive action unit.
    level_cap : int
        Number of Fock levels ``D`` held by every truncated object.
    q, p : float or None
        Preset parameters.
    coeffs : tuple of float
        Polynomial coefficients ``q0, q1, ...`` for ``kind="series"``.
    values : tuple of float
        Explicit values ``f(0), f(1), ...`` for ``kind="table"``.
    """

    kind: str
    hbar: float = 1.0
    level_cap: int = DEFAULT_LEVEL_CAP
    q: float | None = None
    p: float | None = None
    coeffs: tuple = field(default=())
    values: tuple = field(default=())

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SpecError(f"unknown deformation kind {self.kind!r}")
        if not isinstance(self.hbar, Real) or not (self.hbar > 0) or not math.isfinite(self.hbar):
            raise SpecError(f"hbar must be a positive real, got {self.hbar!r}")
        if isinstance(self.level_cap, bool) or not isinstance(self.level_cap, int) or self.level_cap < 1:
            raise SpecError(f"level_cap must be a positive integer, got {self.level_cap!r}")
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        object.__setattr__(self, "values", tuple(self.values))
        for name in ("coeffs", "values"):
            for v in getattr(self, name):
                if not isinstance(v, Real) or not math.isfinite(v):
                    raise SpecError(f"{name} must be finite reals, got {v!r}")
        if self.kind == "q":
            if self.q is None or not self.q > 0 or self.q == 1:
                raise SpecError("q-symmetric deformation needs a positive q != 1")
        elif self.kind == "qp":
            if self.q is None or self.p is None or not (self.q > 0 and self.p > 0):
                raise SpecError("qp deformation needs positive q and p")
            if self.q == self.p:
                raise SpecError("qp deformation needs q != p")
        elif self.kind == "series":
            if not self.coeffs:
                raise SpecError("series deformation needs at least one coefficient")
        elif self.kind == "table":
            if not self.values:
                raise SpecError("table deformation needs at least one value")
            if len(self.values) < self.level_cap:
                raise SpecError(
                    f"table holds {len(self.values)} values but level_cap is {self.level_cap}"
                )

    # named constructors -------------------------------------------------
    @classmethod
    def standard(cls, hbar=1.0, level_cap=DEFAULT_LEVEL_CAP):
        return cls("standard", hbar=hbar, level_cap=level_cap)

    @classmethod
    def q_symmetric(cls, q, hbar=1.0, level_cap=DEFAULT_LEVEL_CAP):
        return cls("q", hbar=hbar, level_cap=level_cap, q=q)

    @classmethod
    def qp(cls, q, p, hbar=1.0, level_cap=DEFAULT_LEVEL_CAP):
        return cls("qp", hbar=hbar, level_cap=level_cap, q=q, p=p)

    @classmethod
    def series(cls, coeffs, hbar=1.0, level_cap=DEFAULT_LEVEL_CAP):
        return cls("series", hbar=hbar, level_cap=level_cap, coeffs=tuple(coeffs))

    @classmethod
    def table(cls, values, hbar=1.0, level_cap=None):
        values = tuple(values)
        if level_cap is None:
            level_cap = len(values)
        return cls("table", hbar=hbar, level_cap=level_cap, values=values)

    def with_level_cap(self, level_cap):
        return replace(self, level_cap=level_cap)

    # JSON ---------------------------------------------------------------
    @classmethod
    def from_dict(cls, data):
        """Build a spec from a JSON document; unknown fields are rejected."""
        if not isinstance(data, dict):
            raise SpecError("deformation spec must be a JSON object")
        kind = data.get("kind")
        if kind not in _JSON_FIELDS:
            raise SpecError(f"unknown deformation kind {kind!r}")
        allowed = {"hbar", "kind", "level_cap"} | _JSON_FIELDS[kind]
        unknown = set(data) - allowed
        if unknown:
            raise SpecError(f"unknown fields for kind {kind!r}: {sorted(unknown)}")
        missing = _JSON_FIELDS[kind] - set(data)
        if missing:
            raise SpecError(f"missing fields for kind {kind!r}: {sorted(missing)}")
        hbar = data.get("hbar", 1.0)
        if kind == "table":
            return cls.table(data["values"], hbar=hbar, level_cap=data.get("level_cap"))
        kwargs = {"hbar": hbar, "level_cap": data.get("level_cap", DEFAULT_LEVEL_CAP)}
        if kind == "q":
            kwargs["q"] = data["q"]
        elif kind == "qp":
            kwargs["q"], kwargs["p"] = data["q"], data["p"]
        elif kind == "series":
            kwargs["coeffs"] = tuple(data["coeffs"])
        return cls(kind, **kwargs)

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(data)

    def to_dict(self):
        out = {"hbar": self.hbar, "kind": self.kind, "level_cap": self.level_cap}
        if self.kind == "q":
            out["q"] = self.q
        elif self.kind == "qp":
            out["q"], out["p"] = self.q, self.p
        elif self.kind == "series":
            out["coeffs"] = list(self.coeffs)
        elif self.kind == "table":
            out["values"] = list(self.values)
        return out


def _preset_F(spec, n, exact):
    """Closed-form ladder function of the q and qp presets."""
    if exact:
        hbar, q = as_rational(spec.hbar), as_rational(spec.q)
        p = as_rational(spec.p) if spec.kind == "qp" else 1 / q
    else:
        hbar, q = spec.hbar, spec.q
        p = spec.p if spec.kind == "qp" else 1.0 / q
    return hbar * (q**n - p**n) / (q - p)


def eval_f(spec, n, exact=False):
    """Value of the deformation function ``f(n)``.

    Parameters
    ----------
    spec : DeformationSpec
    n : int
        Level, ``0 <= n < spec.level_cap``.
    exact : bool
        Return a :class:`~fractions.Fraction` instead of a float.
    """
    if not isinstance(n, int) or n < 0:
        raise LevelCapError(f"level must be a nonnegative integer, got {n!r}")
    if n >= spec.level_cap:
        raise LevelCapError(f"level {n} is beyond level_cap {spec.level_cap}")
    kind = spec.kind
    if kind == "standard":
        return as_rational(spec.hbar) if exact else float(spec.hbar)
    if kind in ("q", "qp"):
        return _preset_F(spec, n + 1, exact) - _preset_F(spec, n, exact)
    if kind == "series":
        coeffs = [as_rational(c) for c in spec.coeffs] if exact else [float(c) for c in spec.coeffs]
        acc = 0 if exact else 0.0
        for c in reversed(coeffs):
            acc = acc * n + c
        return acc
    v = spec.values[n]
    return as_rational(v) if exact else float(v)


def _finite(v):
    return isinstance(v, Fraction) or math.isfinite(v)


@dataclass(frozen=True)
class LadderTable:
    """Cached ladder data of a deformation up to its level cap ``D``.

    Attributes
    ----------
    f : tuple
        ``f(0) .. f(D-1)``.
    F : tuple
        ``F(0) .. F(D)``.
    F_fact : tuple
        ``F!(0) .. F!(D)``.
    E : tuple
        Spectrum ``E(0) .. E(D-1)``.
    source : DeformationSpec
    exact : bool
        Entries are Fractions rather than floats.
    """

    f: tuple
    F: tuple
    F_fact: tuple
    E: tuple
    source: DeformationSpec
    exact: bool = False

    @property
    def dim(self):
        return self.source.level_cap

    @property
    def hbar(self):
        return as_rational(self.source.hbar) if self.exact else float(self.source.hbar)

    @property
    def is_standard(self):
        """True when ``f`` is constant, i.e. the undeformed boson at ``hbar = f(0)``."""
        return all(v == self.f[0] for v in self.f)

    def degenerate_levels(self):
        """Levels ``j >= 1`` with ``F(j) <= 0`` or non-finite."""
        return [j for j in range(1, len(self.F)) if not (self.F[j] > 0 and _finite(self.F[j]))]

    def first_degenerate_level(self):
        levels = self.degenerate_levels()
        return levels[0] if levels else None

    def sqrt_F(self):
        """``sqrt(F(j))`` as floats; negative levels raise."""
        from .errors import DegenerateDeformationError

        out = []
        for j, v in enumerate(self.F):
            if v < 0:
                raise DegenerateDeformationError(j, f"degenerate deformation: F({j}) = {v} < 0")
            out.append(math.sqrt(v))
        return out

    def alpha(self):
        """Normalisation ``sqrt(F!(n))`` relating ``A+^n * Omega_00 * A^m`` to ``Omega_nm``."""
        root = self.sqrt_F()
        out = [1.0]
        for j in range(1, len(root)):
            out.append(out[-1] * root[j])
        return out


@lru_cache(maxsize=256)
def build_ladder_table(spec, exact=False):
    """Tabulate ``f``, ``F``, ``F!`` and ``E`` for ``spec``.

    Deterministic and cached; the returned table is immutable.
    """
    D = spec.level_cap
    f = tuple(eval_f(spec, n, exact) for n in range(D))
    zero, one = (Fraction(0), Fraction(1)) if exact else (0.0, 1.0)
    F = [zero]
    for v in f:
        F.append(F[-1] + v)
    F_fact = [one]
    for j in range(1, D + 1):
        F_fact.append(F_fact[-1] * F[j])
    half = Fraction(1, 2) if exact else 0.5
    E = tuple((F[n + 1] + F[n]) * half for n in range(D))
    return LadderTable(f=f, F=tuple(F), F_fact=tuple(F_fact), E=E, source=spec, exact=exact)


def scale_coefficients(spec):
    """Apply the classical-limit substitution ``q_n -> q_n * hbar**n``."""
    if spec.kind != "series":
        raise UnsupportedKindError(f"coefficient scaling needs a series spec, got {spec.kind!r}")
    h = spec.hbar
    return replace(spec, coeffs=tuple(c * h**n for n, c in enumerate(spec.coeffs)))
