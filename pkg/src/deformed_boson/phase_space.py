"""Phase-space realisation: Wigner fields, quadrature, density evolution.

The left-right eigenstates of the oscillator are the Wigner functions of the
Fock dyads ``|n><m|``.  With ``a = (q + ip)/sqrt(2)`` and
``r**2 = (q**2 + p**2)/hbar``, for ``n >= m``

    Omega_nm(q, p) = 2 (-1)**m sqrt(m!/n!) (sqrt(2/hbar)(q - ip))**(n-m)
                     exp(-r**2) L_m^(n-m)(2 r**2),

and ``Omega_mn = conj(Omega_nm)``.  They are orthonormal for the pairing
``(2 pi hbar)**-1 * integral conj(x) y dq dp``.  Deformed states reuse these
profiles; the deformation only enters through coefficients and spectra.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .eigenstate import EigenElement, pi_matrix
from .errors import IncompatibleError, SpecError

DEFAULT_POINTS = 512
DEFAULT_WIDTH_FACTOR = 8.0


def fmt(x):
    """Fixed 17-significant-digit float formatting used by every writer."""
    return format(float(x), ".17g")


@dataclass(frozen=True)
class PhaseGrid:
    """Square grid ``[-L, L]**2`` with ``M`` points per axis."""

    half_width: float
    points: int

    def __post_init__(self):
        if not self.half_width > 0:
            raise ValueError(f"half_width must be positive, got {self.half_width}")
        if self.points < 2:
            raise ValueError(f"need at least 2 points per axis, got {self.points}")

    @classmethod
    def default(cls, hbar, points=DEFAULT_POINTS):
        """Grid with ``L = 8 sqrt(hbar)`` and ``M = 512``."""
        return cls(DEFAULT_WIDTH_FACTOR * math.sqrt(hbar), points)

    @property
    def spacing(self):
        return 2.0 * self.half_width / (self.points - 1)

    @property
    def axis(self):
        return np.linspace(-self.half_width, self.half_width, self.points)


@dataclass(frozen=True, eq=False)
class WignerField:
    """Samples of a phase-space function; rows index ``q``, columns ``p``."""

    samples: np.ndarray
    grid: PhaseGrid
    hbar: float

    def conj(self):
        return WignerField(np.conj(self.samples), self.grid, self.hbar)

    def __add__(self, other):
        _check_fields(self, other)
        return WignerField(self.samples + other.samples, self.grid, self.hbar)

    def __mul__(self, scalar):
        return WignerField(scalar * self.samples, self.grid, self.hbar)

    __rmul__ = __mul__


def _check_fields(x, y):
    if x.grid != y.grid or x.hbar != y.hbar:
        raise IncompatibleError("fields live on different grids or at different hbar")


def eval_omega(n, m, grid, hbar):
    """Sample ``Omega_nm`` on ``grid``."""
    if n < 0 or m < 0:
        raise ValueError(f"levels must be nonnegative, got ({n}, {m})")
    ax = grid.axis
    return WignerField(kernels.omega_field(n, m, ax, ax, float(hbar)), grid, float(hbar))


def quadrature_ip(x, y):
    """Trapezoidal ``(2 pi hbar)**-1 * sum conj(x) y h**2``."""
    _check_fields(x, y)
    return kernels.trapz_inner(x.samples, y.samples, x.grid.spacing) / (2.0 * math.pi * x.hbar)


def field_of(x, grid, hbar=None):
    """Phase-space profile ``sum c_nm Omega_nm`` of an eigen element."""
    if hbar is None:
        hbar = float(x.table.hbar)
    x = x.normalised()
    acc = np.zeros((grid.points, grid.points), dtype=complex)
    for (n, m), c in sorted(x.coeffs.items()):
        acc += complex(c) * eval_omega(n, m, grid, hbar).samples
    return WignerField(acc, grid, float(hbar))


# densities ---------------------------------------------------------------------

class DensitySpec:
    """Density ``rho = sum c_nm Omega_nm`` with Hermitian, unit-trace ``c``.

    Parameters
    ----------
    c : array_like
        ``D x D`` complex coefficients.
    table : LadderTable
    tol : float
        Tolerance of the Hermiticity and trace checks.
    """

    __slots__ = ("c", "table")

    def __init__(self, c, table, tol=1e-12):
        c = np.array(c, dtype=complex)
        D = table.dim
        if c.shape != (D, D):
            raise IncompatibleError(f"density shape {c.shape} does not match level cap {D}")
        if not np.all(np.isfinite(c)):
            raise SpecError("density coefficients must be finite")
        scale = max(1.0, float(np.max(np.abs(c))))
        if np.max(np.abs(c - c.conj().T)) > tol * scale:
            raise SpecError("density coefficients are not Hermitian")
        if abs(np.trace(c) - 1.0) > tol * scale * D:
            raise SpecError(f"density trace is {np.trace(c)}, expected 1")
        self.c = c
        self.table = table

    @classmethod
    def from_state(cls, psi, table):
        """Pure density ``omega * conj(omega)`` of ``omega = sum psi_n Omega_n0``."""
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()), table)

    @classmethod
    def basis(cls, n, table):
        c = np.zeros((table.dim, table.dim), dtype=complex)
        c[n, n] = 1.0
        return cls(c, table)

    def to_element(self):
        return EigenElement({(n, m): self.c[n, m] for n, m in zip(*np.nonzero(self.c))}, self.table)

    def to_dict(self):
        return {
            "dim": self.table.dim,
            "re": self.c.real.tolist(),
            "im": self.c.imag.tolist(),
        }

    @classmethod
    def from_dict(cls, data, table):
        """Read ``{"re": [[..]], "im": [[..]]}`` or an eigen-element document."""
        if not isinstance(data, dict):
            raise SpecError("density document must be a JSON object")
        if "terms" in data:
            el = EigenElement.from_dict(data, table)
            return cls(pi_matrix(el), table)
        unknown = set(data) - {"dim", "re", "im"}
        if unknown:
            raise SpecError(f"unknown density fields {sorted(unknown)}")
        if "re" not in data:
            raise SpecError("density document needs 're'")
        re_part = np.asarray(data["re"], dtype=float)
        im_part = np.asarray(data.get("im", np.zeros_like(re_part)), dtype=float)
        if re_part.shape != im_part.shape:
            raise SpecError("density 're' and 'im' shapes differ")
        return cls(re_part + 1j * im_part, table)


def random_density(table, rng, rank=None):
    """Random Hermitian positive density of unit trace."""
    D = table.dim
    rank = D if rank is None else rank
    G = rng.standard_normal((D, rank)) + 1j * rng.standard_normal((D, rank))
    c = G @ G.conj().T
    c = 0.5 * (c + c.conj().T)
    return DensitySpec(c / np.trace(c).real, table)


def frequencies(table):
    """``omega_nm = (F(m+1) + F(m) - F(n+1) - F(n)) / 2 = E(m) - E(n)``."""
    E = np.array([float(v) for v in table.E])
    return E[None, :] - E[:, None]


def evolve_density(rho, t):
    """``c_nm(t) = c_nm(0) exp(i t omega_nm)``.

    Phases are computed on the upper triangle and mirrored by conjugation,
    so the evolved coefficients stay exactly Hermitian.
    """
    w = frequencies(rho.table)
    phase = np.exp(1j * t * w)
    lower = np.tril_indices_from(phase, -1)
    phase[lower] = np.conj(phase.T[lower])
    np.fill_diagonal(phase, 1.0)
    out = DensitySpec.__new__(DensitySpec)
    out.c = rho.c * phase
    out.table = rho.table
    return out


def expectation(obs, rho):
    """``<O> = sum O_mn c_nm = Tr(O c)`` via the orthogonality relations."""
    if obs.dim != rho.table.dim:
        raise IncompatibleError(f"observable dim {obs.dim} != density dim {rho.table.dim}")
    O = pi_matrix(obs)
    return complex(np.sum(O.T * rho.c))


def expectation_quadrature(obs, rho, grid=None):
    """Cross-check of :func:`expectation` by phase-space quadrature (``D <= 6``)."""
    D = rho.table.dim
    if D > 6:
        raise ValueError(f"quadrature cross-check is limited to D <= 6, got {D}")
    hbar = float(rho.table.hbar)
    grid = grid or PhaseGrid.default(hbar)
    O = field_of(obs, grid, hbar)
    R = field_of(rho.to_element(), grid, hbar)
    return quadrature_ip(O.conj(), R)


# CSV writers ---------------------------------------------------------------------

def write_field_csv(field, fh):
    """Rows ``q,p,re,im`` in row-major order."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["q", "p", "re", "im"])
    ax = field.grid.axis
    for i, q in enumerate(ax):
        for j, p in enumerate(ax):
            v = field.samples[i, j]
            w.writerow([fmt(q), fmt(p), fmt(v.real), fmt(v.imag)])


def evolution_trace(rho0, times, observables):
    """Evolve ``rho0`` and collect coefficients and observables.

    Returns ``(coeff_rows, obs_rows)`` with rows ``(t, n, m, c)`` and
    ``(t, name, value)``.
    """
    coeff_rows, obs_rows = [], []
    for t in times:
        rho = evolve_density(rho0, t)
        for n, m in zip(*np.nonzero(rho.c)):
            coeff_rows.append((t, int(n), int(m), rho.c[n, m]))
        for name, obs in observables.items():
            obs_rows.append((t, name, expectation(obs, rho).real))
    return coeff_rows, obs_rows


def write_evolution_csv(coeff_rows, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["t", "n", "m", "re", "im"])
    for t, n, m, c in coeff_rows:
        w.writerow([fmt(t), n, m, fmt(c.real), fmt(c.imag)])


def write_observables_csv(obs_rows, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["t", "observable", "value"])
    for t, name, v in obs_rows:
        w.writerow([fmt(t), name, fmt(v)])
