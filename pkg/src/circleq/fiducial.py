"""The reference (fiducial) state from which all circle coherent states
are generated by phase-space displacement.

The profile is the von-Mises-like wave function

    eta(theta) = N exp[(r/hbar)(cos theta - 1) + i alpha theta],
    N = [2 pi e^{-2r/hbar} I_0(2r/hbar)]^{-1/2},

normalized to 1 on [-pi, pi).  It is concentrated around theta = 0 with
angular width ~ sqrt(hbar/r), sits in the alpha-twisted domain, and is
"physically centered": <Q> = 0 and <P> = hbar alpha.  Its momentum
coefficients are sqrt(2 pi) N e^{-r/hbar} I_n(r/hbar), so everything here
reduces to scaled Bessel evaluations plus quadrature cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .specfun import (
    TWO_PI,
    QuadratureGrid,
    bessel_i_ratio_sequence,
    bessel_i_scaled,
    bessel_i_scaled_sequence,
    integrate_periodic,
)
from .hilbert import MomentumState, TwistedBasis, default_cutoff

_SQRT_2PI = math.sqrt(TWO_PI)


@dataclass(frozen=True)
class FiducialSpec:
    """Concentration r (action units), twist alpha, and hbar."""

    r: float
    alpha: float = 0.0
    hbar: float = 1.0

    def __post_init__(self):
        if self.r < 0.0:
            raise ValueError(f"r must be >= 0, got {self.r}")
        if self.hbar <= 0.0:
            raise ValueError(f"hbar must be > 0, got {self.hbar}")
        object.__setattr__(self, "alpha", float(self.alpha) % 1.0)

    @property
    def localization(self) -> float:
        """Dimensionless concentration r/hbar; 0 is the uniform state."""
        return self.r / self.hbar


@dataclass(eq=False)
class FiducialMoments:
    mean_q: float
    mean_p: float
    var_p: float
    cos_moments: np.ndarray  # <cos nQ> for n = 0..max_harmonic


def normalization(spec: FiducialSpec) -> float:
    """Peak amplitude N = [2 pi e^{-2r/hbar} I_0(2r/hbar)]^{-1/2}.

    Uses the exponentially scaled Bessel value so the product never
    under- or overflows, whatever r/hbar.
    """
    return 1.0 / math.sqrt(TWO_PI * bessel_i_scaled(0, 2.0 * spec.localization))


def evaluate(spec: FiducialSpec, theta):
    """Wave function value N e^{(r/hbar)(cos theta - 1) + i alpha theta}."""
    theta = np.asarray(theta, dtype=float)
    z = spec.localization
    values = normalization(spec) * np.exp(z * (np.cos(theta) - 1.0) + 1j * spec.alpha * theta)
    return complex(values) if values.ndim == 0 else values


def default_basis(spec: FiducialSpec, degree: int = 0) -> TwistedBasis:
    """Basis wide enough that the lattice truncation is negligible."""
    return TwistedBasis(spec.alpha, spec.hbar, default_cutoff(spec.localization, degree))


def momentum_coefficients(spec: FiducialSpec, basis: TwistedBasis) -> MomentumState:
    """Lattice coefficients c_n = sqrt(2 pi) N e^{-r/hbar} I_n(r/hbar).

    Real, positive and even in n.  The closed form is validated against
    the quadrature projection in the test suite before being trusted as
    the production path.
    """
    if basis.alpha != spec.alpha or basis.hbar != spec.hbar:
        raise ValueError("basis and fiducial spec disagree on alpha or hbar")
    scaled = bessel_i_scaled_sequence(basis.cutoff_n, spec.localization)
    c = _SQRT_2PI * normalization(spec) * scaled[np.abs(basis.n_values())]
    return MomentumState(basis, c.astype(complex))


def attenuations(spec: FiducialSpec, max_harmonic: int) -> np.ndarray:
    """Moments <cos nQ> = I_n(2r/hbar)/I_0(2r/hbar) for n = 0..max_harmonic."""
    if max_harmonic < 0:
        raise ValueError("max_harmonic must be >= 0")
    z2 = 2.0 * spec.localization
    if z2 == 0.0:
        rho = np.zeros(max_harmonic + 1)
        rho[0] = 1.0
        return rho
    return bessel_i_ratio_sequence(max_harmonic, z2)


def moments(
    spec: FiducialSpec,
    max_harmonic: int = 0,
    grid: QuadratureGrid | None = None,
    basis: TwistedBasis | None = None,
) -> FiducialMoments:
    """Position mean by quadrature, momentum moments by lattice sums, and
    the potential-attenuation factors <cos nQ> by Bessel ratios."""
    if grid is None:
        grid = QuadratureGrid.make()
    if basis is None:
        basis = default_basis(spec)

    density = np.abs(evaluate(spec, grid.nodes)) ** 2
    integrand = grid.nodes * density
    # theta jumps from pi to -pi across the chart seam; the seam node takes
    # the two-sided average, which vanishes because |eta| is even
    integrand[0] = 0.0
    mean_q = float(integrate_periodic(integrand, grid).real)

    weights = momentum_coefficients(spec, basis).coeffs.real ** 2
    p_values = basis.momenta()
    mean_p = float(p_values @ weights)
    var_p = float((p_values * p_values) @ weights - mean_p**2)

    return FiducialMoments(
        mean_q=mean_q,
        mean_p=mean_p,
        var_p=max(var_p, 0.0),
        cos_moments=attenuations(spec, max_harmonic),
    )


@dataclass(eq=False)
class EnvelopeCheck:
    """Outcome of the two-sided Gaussian envelope test."""

    passed: bool
    failed_at: float | None
    upper_margin: float  # min over samples of log(K N^2 e^{-z theta^2}) - log|eta|^2
    lower_margin: float  # min over samples of log|eta|^2 - log(N^2 e^{-z theta^2})

    def __bool__(self) -> bool:
        return self.passed


def gaussian_bound_check(spec: FiducialSpec, samples: int = 10000) -> EnvelopeCheck:
    """Verify N^2 e^{-z theta^2} <= |eta|^2 <= K N^2 e^{-z theta^2} pointwise,
    z = r/hbar, with the explicit constant K = e^{z (pi^2 - 4)}.

    K is the analytic maximum of |eta|^2 over the Gaussian: the exponent
    gap z (2 cos theta - 2 + theta^2) is monotone away from 0 and peaks at
    theta = +/-pi with value z (pi^2 - 4).  The lower bound is
    cos theta - 1 >= -theta^2 / 2.  Both comparisons run in log space so
    no K is ever exponentiated.
    """
    if spec.r <= 0.0:
        raise ValueError("the envelope bound needs r > 0")
    if samples < 2:
        raise ValueError("need at least 2 sample points")
    z = spec.localization
    theta = -math.pi + TWO_PI * np.arange(samples) / samples
    gap = z * (2.0 * np.cos(theta) - 2.0 + theta * theta)
    upper = float(np.min(z * (math.pi**2 - 4.0) - gap))
    lower = float(np.min(gap))
    tol = 1e-12 * max(1.0, z)
    passed = upper >= -tol and lower >= -tol
    failed_at = None
    if not passed:
        worst = np.argmin(np.minimum(z * (math.pi**2 - 4.0) - gap, gap))
        failed_at = float(theta[worst])
    return EnvelopeCheck(passed, failed_at, upper, lower)
