"""Circle coherent states |p, q> and the numerical resolution of unity.

A coherent state is produced from the fiducial state by a momentum boost
followed by a rigid rotation,

    |p, q> = e^{-i q P / hbar} e^{i p Q / hbar} |eta>,

with labels (p, q) on the cylinder R x [-pi, pi).  In the twisted lattice
the rotation is a pure phase e^{-i (n + alpha) q} while the boost mixes
slots through the band-limited projection kernel

    f_k(p) = sum_n c_n sinc(n - k + p/hbar),      sinc(x) = sin(pi x)/(pi x),

which is the exact value of the defining projection integral, evaluated
term by term against the fiducial coefficients c_n (a direct quadrature
of the same integral is kept in the tests as an independent oracle).

For p/hbar not an integer the boosted function leaves the twisted domain
(the boundary phase defect is nonzero) and its lattice tail decays only
like |f_k| ~ e^{-2r/hbar} / |k|.  The state is still in the Hilbert
space; the weight a basis of half-width N fails to capture scales like
e^{-4r/hbar} / N, which is the accuracy floor quoted on normalization
checks below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .specfun import TWO_PI
from .fiducial import FiducialSpec, momentum_coefficients, default_basis
from .hilbert import MomentumState, ResolutionError, TwistedBasis, wrap_angle

# out-of-basis spectral weight above this triggers a truncation diagnostic
EDGE_WEIGHT_LIMIT = 1e-8


@dataclass(frozen=True)
class CoherentLabel:
    """Phase-space label: momentum p (unrestricted) and angle q."""

    p: float
    q: float

    def __post_init__(self):
        object.__setattr__(self, "q", float(wrap_angle(self.q)))


def _boosted_coefficients(spec: FiducialSpec, p: float, out_slots: np.ndarray) -> np.ndarray:
    """Lattice coefficients of e^{i p Q / hbar} |eta> on the given slots."""
    support = default_basis(spec)
    c = momentum_coefficients(spec, support).coeffs.real
    n_src = support.n_values()
    shift = p / spec.hbar
    kernel = np.sinc(n_src[None, :] - out_slots[:, None] + shift)
    return kernel @ c


def coherent_state(
    label: CoherentLabel, spec: FiducialSpec, basis: TwistedBasis
) -> MomentumState:
    """Coefficients d_n = e^{-i (n + alpha) q} f_n(p) of |p, q>.

    Boost first, rotation second; the rotation phase multiplies the
    boosted coefficients exactly, so d_n(p, q) = e^{-i (n+alpha) q} d_n(p, 0)
    holds by construction.  Raises ResolutionError when the basis is too
    narrow to hold the boosted state.
    """
    if basis.alpha != spec.alpha or basis.hbar != spec.hbar:
        raise ValueError("basis and fiducial spec disagree on alpha or hbar")
    f = _boosted_coefficients(spec, label.p, basis.n_values())
    deficit = 1.0 - float(f @ f)
    if deficit > EDGE_WEIGHT_LIMIT:
        raise ResolutionError(
            f"boosted state leaks {deficit:.3e} of its weight outside the "
            f"lattice |n| <= {basis.cutoff_n}; enlarge the cutoff"
        )
    phases = np.exp(-1j * (basis.n_values() + basis.alpha) * label.q)
    return MomentumState(basis, phases * f)


def overlap(
    a: CoherentLabel, b: CoherentLabel, spec: FiducialSpec, basis: TwistedBasis
) -> complex:
    """Inner product <a|b> = sum_n conj(d_n(a)) d_n(b)."""
    return coherent_state(a, spec, basis).inner(coherent_state(b, spec, basis))


@dataclass(eq=False)
class UnityReport:
    """Defects of the phase-space integral of |p,q><p,q| dp dq / (2 pi hbar)
    against the identity, on a momentum window |p| <= p_cutoff."""

    p_cutoff: float
    diag_defect: float
    offdiag_defect: float
    quadrature_meta: dict = field(default_factory=dict)
    diag_entries: np.ndarray | None = None
    ns: np.ndarray | None = None


def _gauss_legendre(p_cutoff: float, hbar: float, p_nodes: int):
    # integrand oscillates with unit wavelength in p/hbar; scale the node
    # count with the window so the rule stays resolved at every cutoff
    count = max(p_nodes, int(math.ceil(3.5 * p_cutoff / hbar)) + 32)
    x, w = np.polynomial.legendre.leggauss(count)
    return p_cutoff * x, p_cutoff * w, count


def verify_unity(
    spec: FiducialSpec,
    basis: TwistedBasis,
    p_cutoff: float,
    p_nodes: int = 64,
    full_2d: bool = False,
    q_nodes: int | None = None,
) -> UnityReport:
    """Measure how far the truncated coherent-state integral sits from
    the identity on the lattice.

    The angle integral of e^{-i (m - n) q} is 2 pi delta_mn, so by default
    only the diagonal survives and a single Gauss-Legendre sweep over the
    momentum window remains; the diagonal entries then increase
    monotonically toward 1 with the cutoff.  With ``full_2d`` the entire
    matrix is assembled from a literal two-dimensional quadrature (slow,
    but it measures the off-diagonal defect instead of asserting it).

    The sweep touches no shared mutable state, so independent calls may
    run concurrently.
    """
    if p_cutoff <= 0.0:
        raise ValueError("p_cutoff must be > 0")
    if p_nodes < 64:
        raise ValueError("p_nodes must be >= 64")

    slots = basis.n_values()
    p_values, p_weights, p_count = _gauss_legendre(p_cutoff, spec.hbar, p_nodes)
    support = default_basis(spec)
    c = momentum_coefficients(spec, support).coeffs.real
    shifts = p_values / spec.hbar
    # f[i, k] = f_k(p_i) via one kernel tensor; no state mutation anywhere
    kernel = np.sinc(
        support.n_values()[None, None, :] - slots[None, :, None] + shifts[:, None, None]
    )
    f = kernel @ c

    meta = {"p_nodes": p_count, "mode": "analytic-q"}
    if not full_2d:
        diag = (p_weights / spec.hbar) @ (f * f)
        diag_defect = float(np.max(np.abs(diag - 1.0)))
        # off-diagonal entries vanish identically under the analytic
        # angle integral
        offdiag_defect = 0.0
    else:
        if q_nodes is None:
            q_nodes = max(64, 4 * basis.cutoff_n + 4)
        q_values = -math.pi + TWO_PI * np.arange(q_nodes) / q_nodes
        meta = {"p_nodes": p_count, "mode": "full-2d", "q_nodes": q_nodes}
        rot = np.exp(-1j * np.outer(q_values, slots + basis.alpha))  # (q, dim)
        matrix = np.zeros((len(slots), len(slots)), dtype=complex)
        q_weight = TWO_PI / q_nodes
        for i in range(p_count):
            d = rot * f[i]  # states d_n(p_i, q_j) for every q_j
            matrix += (p_weights[i] * q_weight) * (d.conj().T @ d)
        matrix /= TWO_PI * spec.hbar
        diag = np.diag(matrix).real
        diag_defect = float(np.max(np.abs(diag - 1.0)))
        off = matrix - np.diag(np.diag(matrix))
        offdiag_defect = float(np.max(np.abs(off)))

    return UnityReport(
        p_cutoff=float(p_cutoff),
        diag_defect=diag_defect,
        offdiag_defect=offdiag_defect,
        quadrature_meta=meta,
        diag_entries=np.asarray(diag, dtype=float),
        ns=slots.copy(),
    )
