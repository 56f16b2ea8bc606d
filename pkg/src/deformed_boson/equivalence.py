"""Non-linear equivalence maps between deformations.

Two deformations ``A`` and ``B`` on the same Fock space are related by

    A = K(N) B,    A+ = B+ K(N),    K(n)**2 = F_A(n+1) / F_B(n+1),

which leaves ``N`` untouched.  Taking ``B`` to be the standard boson gives
the bosonisation of ``A``.  The map is only invertible while every ratio is
strictly positive and finite; the first level where that fails is recorded
instead of raising.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .deformation import DeformationSpec, build_ladder_table
from .eigenstate import generator, pi_matrix
from .errors import DegenerateDeformationError, IncompatibleError


def _rational(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return Fraction(v)


@dataclass(frozen=True)
class EquivalenceMap:
    """Equivalence ``K`` from a source algebra onto a target algebra.

    Attributes
    ----------
    source, target : LadderTable
    K_squared : tuple
        ``F_A(n+1) / F_B(n+1)`` for ``0 <= n < D`` as exact Fractions (the
        float ladder values are binary rationals, so no rounding occurs);
        ``None`` where the ratio is undefined.
    first_defect : int or None
        First ladder level ``j = n + 1`` at which ``F_A(j)`` or ``F_B(j)``
        is not strictly positive and finite.
    """

    source: object
    target: object
    K_squared: tuple
    first_defect: int | None

    @property
    def dim(self):
        return self.source.dim

    @property
    def invertible(self):
        return self.first_defect is None

    @property
    def K_values(self):
        """``K(n) = sqrt(K_squared(n))`` as floats; NaN where undefined."""
        return np.array([math.sqrt(k) if k is not None and k >= 0 else math.nan for k in self.K_squared])

    def to_dict(self):
        K = [None if math.isnan(v) else float(v) for v in self.K_values]
        return {"invertible": self.invertible, "first_defect": self.first_defect, "K": K}


def _check_pair(src, tgt):
    if src.dim != tgt.dim:
        raise IncompatibleError(f"level caps differ: {src.dim} vs {tgt.dim}")
    if Fraction(src.source.hbar) != Fraction(tgt.source.hbar):
        raise IncompatibleError(f"hbar differs: {src.source.hbar} vs {tgt.source.hbar}")


def build_map(src, tgt):
    """Equivalence map from ``src`` onto ``tgt`` with defect diagnostics.

    Raises
    ------
    IncompatibleError
        If the level caps or the values of ``hbar`` differ.
    """
    _check_pair(src, tgt)
    K2, defect = [], None
    for n in range(src.dim):
        a, b = _rational(src.F[n + 1]), _rational(tgt.F[n + 1])
        if a is None or b is None or a <= 0 or b <= 0:
            K2.append(None)
            if defect is None:
                defect = n + 1
        else:
            K2.append(a / b)
    return EquivalenceMap(src, tgt, tuple(K2), defect)


def compose(first, second):
    """Map ``A -> C`` from ``A -> B`` and ``B -> C`` by pointwise product."""
    if first.target != second.source:
        raise IncompatibleError("maps do not chain: first.target != second.source")
    K2 = tuple(
        None if a is None or b is None else a * b for a, b in zip(first.K_squared, second.K_squared)
    )
    defects = [d for d in (first.first_defect, second.first_defect) if d is not None]
    return EquivalenceMap(first.source, second.target, K2, min(defects) if defects else None)


def inverse(m):
    """Map ``B -> A`` with ``K_squared`` inverted pointwise."""
    K2 = tuple(None if k is None else 1 / k for k in m.K_squared)
    return EquivalenceMap(m.target, m.source, K2, m.first_defect)


def standard_table_like(table):
    """Standard boson table with the same ``hbar``, level cap and arithmetic."""
    spec = DeformationSpec.standard(hbar=table.source.hbar, level_cap=table.dim)
    return build_ladder_table(spec, exact=table.exact)


def bosonisation_map(table):
    """Equivalence of ``table`` onto the standard boson at the same ``hbar``."""
    return build_map(table, standard_table_like(table))


def _require_invertible(m):
    if not m.invertible:
        j = m.first_defect
        raise DegenerateDeformationError(j, f"equivalence map is not invertible: defect at level {j}")


def transform_generators(m):
    """Images ``(K(N) B, B+ K(N))`` of the target generators.

    The returned ``D x D`` matrices reproduce the source generators
    ``A`` and ``A+``; their commutator is ``diag f_A`` below the top level.

    Raises
    ------
    DegenerateDeformationError
        If the map is not invertible; the level is ``m.first_defect``.
    """
    _require_invertible(m)
    B = pi_matrix(generator("A", m.target)).real
    Bd = pi_matrix(generator("A_plus", m.target)).real
    K = np.diag(m.K_values)
    return K @ B, Bd @ K


def transform_hamiltonian(m):
    """``(A A+ + A+ A) / 2`` built from the transformed generators.

    Equals ``diag E_A`` on levels ``< D - 1``; the top entry is truncated.
    """
    A, Ad = transform_generators(m)
    return 0.5 * (A @ Ad + Ad @ A)
