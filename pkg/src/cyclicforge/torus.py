"""Flat torus C/(Z + tau Z) discretization with periodic difference operators.

Grid coordinates are (s, t) in [0,1)^2 with z = s + tau*t; index axis 0 is s,
axis 1 is t.  Derivatives d/dz, d/dzbar and the coordinate Laplacian
d/dz d/dzbar are built from centered stencils of order 2 or 4.  The
Laplacian uses compact second-derivative stencils so that its only periodic
kernel is the constants (needed by the Newton solver downstream).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

__all__ = [
    "BadModulus",
    "DiscreteOperators",
    "FlatTorus",
    "GridSection",
    "SingularMetric",
    "make_torus",
    "section_norms",
]


class BadModulus(ValueError):
    pass


class SingularMetric(ValueError):
    pass


@dataclass(frozen=True)
class FlatTorus:
    """Uniform N x M grid on the torus with lattice Z + tau Z."""

    tau: complex
    N: int
    M: int

    def __post_init__(self):
        if self.tau.imag <= 0:
            raise BadModulus(f"lattice modulus must have positive imaginary part, got {self.tau}")
        if self.N < 8 or self.M < 8:
            raise BadModulus("grid resolution must be at least 8 in each direction")

    @property
    def hs(self) -> float:
        return 1.0 / self.N

    @property
    def ht(self) -> float:
        return 1.0 / self.M

    @property
    def cell_area(self) -> float:
        """Euclidean area of one grid cell; the unit cell has area Im(tau)."""
        return self.tau.imag / (self.N * self.M)

    def coords(self) -> tuple[np.ndarray, np.ndarray]:
        s = np.arange(self.N) / self.N
        t = np.arange(self.M) / self.M
        return np.meshgrid(s, t, indexing="ij")

    def z(self) -> np.ndarray:
        s, t = self.coords()
        return s + self.tau * t

    def refine(self, factor: int = 2) -> "FlatTorus":
        return FlatTorus(self.tau, self.N * factor, self.M * factor)


@dataclass
class GridSection:
    """Field of scalars or matrices sampled on the torus grid.

    ``values`` has shape (N, M) for scalars or (N, M, k, l) for matrix
    fields; ``value_space`` tags the intended fiber ("scalar", "vector",
    "ad", "group", "metric", or a grade tag like "grade1").
    """

    torus: FlatTorus
    values: np.ndarray
    value_space: str = "scalar"

    def __post_init__(self):
        self.values = np.asarray(self.values)
        if self.values.shape[:2] != (self.torus.N, self.torus.M):
            raise ValueError(f"values shape {self.values.shape} does not match grid {(self.torus.N, self.torus.M)}")

    def map(self, fn: Callable[[np.ndarray], np.ndarray]) -> "GridSection":
        return GridSection(self.torus, fn(self.values), self.value_space)


def make_torus(tau: complex, N: int, M: int | None = None) -> FlatTorus:
    return FlatTorus(complex(tau), int(N), int(N if M is None else M))


def _roll(f: np.ndarray, shift: int, axis: int) -> np.ndarray:
    return np.roll(f, -shift, axis=axis)


@dataclass(frozen=True)
class DiscreteOperators:
    """Centered periodic difference operators on a flat torus grid."""

    torus: FlatTorus
    order: int = 2

    def __post_init__(self):
        if self.order not in (2, 4):
            raise ValueError("stencil order must be 2 or 4")

    # -- real-direction stencils --------------------------------------------------

    def d_axis(self, f: np.ndarray, axis: int) -> np.ndarray:
        h = self.torus.hs if axis == 0 else self.torus.ht
        if self.order == 2:
            return (_roll(f, 1, axis) - _roll(f, -1, axis)) / (2 * h)
        return (-_roll(f, 2, axis) + 8 * _roll(f, 1, axis) - 8 * _roll(f, -1, axis) + _roll(f, -2, axis)) / (12 * h)

    def d2_axis(self, f: np.ndarray, axis: int) -> np.ndarray:
        h = self.torus.hs if axis == 0 else self.torus.ht
        if self.order == 2:
            return (_roll(f, 1, axis) - 2 * f + _roll(f, -1, axis)) / h**2
        return (
            -_roll(f, 2, axis) + 16 * _roll(f, 1, axis) - 30 * f + 16 * _roll(f, -1, axis) - _roll(f, -2, axis)
        ) / (12 * h**2)

    def d_s(self, f: np.ndarray) -> np.ndarray:
        return self.d_axis(f, 0)

    def d_t(self, f: np.ndarray) -> np.ndarray:
        return self.d_axis(f, 1)

    # -- complex operators ----------------------------------------------------------

    @property
    def _dz_coeff(self) -> tuple[complex, complex]:
        """Coefficients (c_s, c_t) with d/dz = c_s d/ds + c_t d/dt for z = s + tau t."""
        tau = self.torus.tau
        den = tau - np.conj(tau)
        return -np.conj(tau) / den, 1.0 / den

    def d_z(self, f: np.ndarray) -> np.ndarray:
        cs, ct = self._dz_coeff
        return cs * self.d_s(f) + ct * self.d_t(f)

    def d_zbar(self, f: np.ndarray) -> np.ndarray:
        cs, ct = self._dz_coeff
        return np.conj(cs) * self.d_s(f) + np.conj(ct) * self.d_t(f)

    def laplacian_z(self, f: np.ndarray) -> np.ndarray:
        """Compact discretization of d/dz d/dzbar.

        Expanding in (s, t): dz dzbar = [d_tt + |tau|^2 d_ss - 2 Re(tau) d_st]
        / (4 Im(tau)^2), with compact one-dimensional second derivatives and
        the mixed term as a product of centered first derivatives.
        """
        tau = self.torus.tau
        mixed = self.d_axis(self.d_axis(f, 0), 1)
        val = self.d2_axis(f, 1) + abs(tau) ** 2 * self.d2_axis(f, 0) - 2 * tau.real * mixed
        return val / (4 * tau.imag**2)

    def apply(self, name: str, sec: GridSection) -> GridSection:
        fn = {"dz": self.d_z, "dzbar": self.d_zbar, "laplacian": self.laplacian_z}[name]
        return GridSection(sec.torus, fn(sec.values), sec.value_space)

    # -- quadrature -------------------------------------------------------------------

    def integrate(self, f: np.ndarray) -> complex:
        """Trapezoidal (= midpoint) quadrature over the unit cell."""
        return np.sum(f, axis=(0, 1)) * self.torus.cell_area


def _pointwise_norm(values: np.ndarray, value_space: str, metric: np.ndarray | None) -> np.ndarray:
    """Pointwise h-norm of a section.

    For adjoint-valued sections the metric enters through conjugation,
    |x|^2 = tr((H^-1 x^* H) x); for vector sections |v|^2 = v^* H v; scalars
    use |f| e^{u} weighting when a scalar metric is supplied.
    """
    if values.ndim == 2:
        if metric is None:
            return np.abs(values)
        return np.abs(values) * np.sqrt(np.abs(metric))
    if values.ndim == 3:  # vectors
        if metric is None:
            return np.linalg.norm(values, axis=-1)
        mv = np.einsum("...ij,...j->...i", metric, values)
        return np.sqrt(np.abs(np.einsum("...i,...i->...", np.conj(values), mv)))
    if metric is None:
        return np.linalg.norm(values, axis=(-2, -1))
    hinv = np.linalg.inv(metric)
    xdag = np.einsum("...ij,...kj,...kl->...il", hinv, np.conj(values), metric)
    return np.sqrt(np.abs(np.einsum("...ij,...ji->...", xdag, values)))


def section_norms(sec: GridSection, metric: GridSection | None = None, ps: tuple[int, ...] = (2,)) -> dict:
    """Pointwise norm field plus L^p and sup aggregates under cell quadrature."""
    mvals = None
    if metric is not None:
        mvals = metric.values
        if mvals.ndim == 4:
            w = np.linalg.eigvalsh(mvals)
            if np.min(w) <= 1e-14:
                raise SingularMetric(f"metric eigenvalue {np.min(w)} at or below 1e-14")
        elif np.min(np.abs(mvals)) <= 1e-14:
            raise SingularMetric("scalar metric vanishes")
    field = _pointwise_norm(sec.values, sec.value_space, mvals)
    area = sec.torus.cell_area
    out = {"field": field, "sup": float(np.max(field))}
    for p in ps:
        out[f"l{p}"] = float((np.sum(field**p) * area) ** (1.0 / p))
    return out
