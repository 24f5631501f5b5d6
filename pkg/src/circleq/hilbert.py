"""Truncated Hilbert space of a particle on the circle with a twisted
boundary condition phi(pi) = e^{2 pi i alpha} phi(-pi).

The momentum operator then has the pure point spectrum hbar (n + alpha),
n integer, with plane-wave eigenfunctions e^{i (n + alpha) theta} / sqrt(2 pi).
States are kept as coefficient vectors over the lattice n in [-N, N];
position-space data lives on a quadrature grid (sharp position states are
distributions and get no finite-norm representation here).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .specfun import TWO_PI, QuadratureGrid

_SQRT_2PI = math.sqrt(TWO_PI)


class ResolutionError(ValueError):
    """A grid or basis truncation is too coarse for the requested result."""


def wrap_angle(theta):
    """Map an angle (scalar or array) into the chart [-pi, pi)."""
    return (theta + math.pi) % TWO_PI - math.pi


def default_cutoff(localization: float, degree: int = 0) -> int:
    """Lattice half-width that comfortably holds fiducial-derived states.

    Coefficients decay like I_n(localization), super-exponentially past
    n ~ localization; the margin absorbs potential-induced shifts of
    bandwidth ``degree``.
    """
    return int(math.ceil(8.0 * max(localization, 1.0))) + degree + 8


@dataclass(frozen=True)
class TwistedBasis:
    """Momentum lattice n in [-N, N] for twist alpha and scale hbar."""

    alpha: float
    hbar: float
    cutoff_n: int

    def __post_init__(self):
        if self.hbar <= 0.0:
            raise ValueError(f"hbar must be > 0, got {self.hbar}")
        if self.cutoff_n < 1:
            raise ValueError(f"cutoff_n must be >= 1, got {self.cutoff_n}")
        # the representation depends on alpha only mod 1
        object.__setattr__(self, "alpha", float(self.alpha) % 1.0)

    @property
    def dimension(self) -> int:
        return 2 * self.cutoff_n + 1

    def n_values(self) -> np.ndarray:
        return np.arange(-self.cutoff_n, self.cutoff_n + 1)

    def momenta(self) -> np.ndarray:
        """All eigenvalues hbar (n + alpha) in lattice order."""
        return self.hbar * (self.n_values() + self.alpha)


def momentum_eigenvalue(basis: TwistedBasis, n: int) -> float:
    """Eigenvalue hbar (n + alpha) of momentum slot n."""
    if abs(n) > basis.cutoff_n:
        raise ValueError(f"slot {n} outside lattice [-{basis.cutoff_n}, {basis.cutoff_n}]")
    return basis.hbar * (n + basis.alpha)


@dataclass(eq=False)
class MomentumState:
    """Coefficient vector c_n over a twisted momentum lattice."""

    basis: TwistedBasis
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex)
        if self.coeffs.shape != (self.basis.dimension,):
            raise ValueError(
                f"expected {self.basis.dimension} coefficients, got {self.coeffs.shape}"
            )

    def norm_sq(self) -> float:
        return float(np.vdot(self.coeffs, self.coeffs).real)

    def normalized(self) -> "MomentumState":
        return MomentumState(self.basis, self.coeffs / math.sqrt(self.norm_sq()))

    def inner(self, other: "MomentumState") -> complex:
        return complex(np.vdot(self.coeffs, other.coeffs))


@dataclass(eq=False)
class PositionWavefunction:
    """Samples psi(theta_j) on a quadrature grid."""

    grid: QuadratureGrid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != self.grid.nodes.shape:
            raise ValueError("sample count does not match the grid")

    def norm_sq(self) -> float:
        return float(self.grid.weight * np.vdot(self.values, self.values).real)


def synthesize(state: MomentumState, grid: QuadratureGrid) -> PositionWavefunction:
    """psi(theta_j) = sum_n c_n e^{i (n + alpha) theta_j} / sqrt(2 pi)."""
    k = state.basis.n_values() + state.basis.alpha
    phases = np.exp(1j * np.outer(grid.nodes, k))
    return PositionWavefunction(grid, phases @ state.coeffs / _SQRT_2PI)


def analyze(psi: PositionWavefunction, basis: TwistedBasis) -> MomentumState:
    """Project grid samples onto the twisted basis.

    c_n is the trapezoidal evaluation of
    integral e^{-i (n + alpha) theta} psi(theta) / sqrt(2 pi) d theta, which
    is exact for band-limited psi once the grid resolves 2 (N + 1) modes.
    """
    if psi.grid.node_count < 2 * (basis.cutoff_n + 1):
        raise ResolutionError(
            f"grid with {psi.grid.node_count} nodes cannot resolve "
            f"cutoff {basis.cutoff_n}; need at least {2 * (basis.cutoff_n + 1)}"
        )
    k = basis.n_values() + basis.alpha
    kernel = np.exp(-1j * np.outer(k, psi.grid.nodes))
    coeffs = psi.grid.weight * (kernel @ psi.values) / _SQRT_2PI
    return MomentumState(basis, coeffs)


def check_boundary_phase(psi, alpha: float | None = None) -> float:
    """Defect |psi(pi) - e^{2 pi i alpha} psi(-pi)| of the twisted boundary
    condition; 0 means the state lies in the twisted domain.

    ``psi`` is either a MomentumState, whose synthesized Fourier series is
    evaluated exactly at the endpoints (alpha taken from its basis), or a
    callable of the angle together with an explicit ``alpha``.
    """
    if isinstance(psi, MomentumState):
        alpha = psi.basis.alpha
        k = psi.basis.n_values() + alpha
        at_plus = np.sum(psi.coeffs * np.exp(1j * math.pi * k)) / _SQRT_2PI
        at_minus = np.sum(psi.coeffs * np.exp(-1j * math.pi * k)) / _SQRT_2PI
    else:
        if alpha is None:
            raise ValueError("alpha is required when psi is a callable")
        at_plus = psi(math.pi)
        at_minus = psi(-math.pi)
    return float(abs(at_plus - np.exp(2j * math.pi * alpha) * at_minus))


def apply_shift(state: MomentumState, k: int) -> tuple[MomentumState, float]:
    """Rigid lattice shift c'_n = c_{n-k} realizing e^{i k Q}.

    Coefficients pushed past the lattice edge are dropped; the dropped
    squared norm is returned alongside the shifted state.
    """
    dim = state.basis.dimension
    kept = max(dim - abs(k), 0)
    new = np.zeros(dim, dtype=complex)
    if k >= 0:
        new[dim - kept:] = state.coeffs[:kept]
        dropped = state.coeffs[kept:]
    else:
        new[:kept] = state.coeffs[dim - kept:]
        dropped = state.coeffs[: dim - kept]
    lost = float(np.vdot(dropped, dropped).real)
    return MomentumState(state.basis, new), lost
