"""Numerical toolkit for coherent-state (enhanced) quantization of a
particle on the circle: twisted momentum representations, the
Bessel-normalized fiducial state, circle coherent states with a verified
resolution of unity, the attenuated phase-space Hamiltonian, and
classical / enhanced / quantum dynamics side by side."""

from .specfun import (
    QuadratureGrid,
    bessel_i,
    bessel_i_ratio,
    bessel_i_scaled,
    integrate_periodic,
)
from .hilbert import (
    MomentumState,
    PositionWavefunction,
    ResolutionError,
    TwistedBasis,
    analyze,
    apply_shift,
    check_boundary_phase,
    default_cutoff,
    momentum_eigenvalue,
    synthesize,
    wrap_angle,
)
from .fiducial import (
    FiducialMoments,
    FiducialSpec,
    evaluate,
    gaussian_bound_check,
    moments,
    momentum_coefficients,
    normalization,
)
from .coherent import CoherentLabel, UnityReport, coherent_state, overlap, verify_unity
from .enhanced import (
    EnhancedHamiltonian,
    TrigPotential,
    canonical_shift,
    classical_hamiltonian,
    enhanced_hamiltonian,
    surface_term,
)
from .dynamics import (
    PhasePoint,
    Trajectory,
    action_along,
    alpha_invariance_check,
    evolve,
    winding_number,
)
from .qevolve import (
    ComparisonReport,
    ExpectationTrace,
    HamiltonianMatrix,
    build_hamiltonian,
    compare_restricted,
    evolve_quantum,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
