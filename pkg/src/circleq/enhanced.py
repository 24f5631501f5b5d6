"""Coherent-state expectation of the quantum Hamiltonian as a function on
phase space, next to its bare classical limit.

For H = P^2 + V(e^{iQ}, e^{-iQ}) with a trigonometric potential (mass
convention 1/(2 mu) = 1), the expectation in |p, q> collapses to closed
form: the kinetic part is (p + hbar alpha)^2 plus the constant momentum
variance of the fiducial state, and each potential harmonic is attenuated
by rho_n = I_n(2r/hbar)/I_0(2r/hbar):

    H_cs(p, q) = (p + hbar alpha)^2 + var_p
                 + a_0 + sum_n rho_n [a_n cos nq + b_n sin nq].

rho_n -> 1 as r/hbar -> infinity, so after the canonical momentum shift
p -> p - hbar alpha this tends to the classical p^2 + V(q); the residual
is O(hbar/r) harmonic by harmonic.  The constant var_p shifts energies,
not dynamics, and is kept visible so the quantum-vs-classical bookkeeping
stays auditable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fiducial import FiducialSpec, moments


@dataclass(frozen=True, eq=False)
class TrigPotential:
    """V(q) = a0 + sum_{n=1}^{m} [a_n cos nq + b_n sin nq]."""

    a0: float = 0.0
    a: tuple = ()
    b: tuple = ()

    def __post_init__(self):
        a = tuple(float(x) for x in self.a)
        b = tuple(float(x) for x in self.b)
        if len(b) < len(a):
            b = b + (0.0,) * (len(a) - len(b))
        elif len(a) < len(b):
            a = a + (0.0,) * (len(b) - len(a))
        if not all(map(math.isfinite, (self.a0, *a, *b))):
            raise ValueError("potential coefficients must be finite")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def degree(self) -> int:
        return len(self.a)

    def value(self, q):
        total = self.a0 * np.ones_like(np.asarray(q, dtype=float))
        for n, (an, bn) in enumerate(zip(self.a, self.b), start=1):
            total = total + an * np.cos(n * q) + bn * np.sin(n * q)
        return total if total.ndim else float(total)

    def derivative(self, q):
        total = np.zeros_like(np.asarray(q, dtype=float))
        for n, (an, bn) in enumerate(zip(self.a, self.b), start=1):
            total = total + n * (-an * np.sin(n * q) + bn * np.cos(n * q))
        return total if total.ndim else float(total)

    def coefficient_scale(self) -> float:
        return abs(self.a0) + sum(abs(x) + abs(y) for x, y in zip(self.a, self.b))

    @classmethod
    def free(cls) -> "TrigPotential":
        return cls()

    @classmethod
    def pendulum(cls, a1: float = 1.0) -> "TrigPotential":
        return cls(a=(a1,))


@dataclass(eq=False)
class EnhancedHamiltonian:
    """Phase-space Hamiltonian data for one potential and fiducial state."""

    potential: TrigPotential
    spec: FiducialSpec
    kinetic_offset: float  # momentum variance of the fiducial state
    attenuation: np.ndarray  # rho_1..rho_m

    @classmethod
    def build(cls, potential: TrigPotential, spec: FiducialSpec) -> "EnhancedHamiltonian":
        mom = moments(spec, max_harmonic=potential.degree)
        return cls(
            potential=potential,
            spec=spec,
            kinetic_offset=mom.var_p,
            attenuation=np.asarray(mom.cos_moments[1:], dtype=float),
        )

    def effective_coefficients(self, attenuated: bool = True):
        """(a0, a_n, b_n) with harmonics attenuated or left bare."""
        a = np.asarray(self.potential.a, dtype=float)
        b = np.asarray(self.potential.b, dtype=float)
        if attenuated:
            a = self.attenuation * a
            b = self.attenuation * b
        return self.potential.a0, a, b

    def effective_potential(self, q, attenuated: bool = True):
        a0, a, b = self.effective_coefficients(attenuated)
        return TrigPotential(a0, tuple(a), tuple(b)).value(q)

    def effective_force(self, q, attenuated: bool = True):
        a0, a, b = self.effective_coefficients(attenuated)
        return -TrigPotential(a0, tuple(a), tuple(b)).derivative(q)


def enhanced_hamiltonian(model: EnhancedHamiltonian, p: float, q: float) -> float:
    """Coherent-state energy surface (p + hbar alpha)^2 + var_p + V_rho(q)."""
    shift = model.spec.hbar * model.spec.alpha
    return float((p + shift) ** 2 + model.kinetic_offset + model.effective_potential(q))


def classical_hamiltonian(potential: TrigPotential, p: float, q: float) -> float:
    """Bare classical energy p^2 + V(q)."""
    return float(p * p + potential.value(q))


def canonical_shift(p: float, spec: FiducialSpec) -> float:
    """Momentum relabeling p -> p - hbar alpha absorbing the twist.

    In the shifted variable the energy surface reads
    p^2 + var_p + V_rho(q), symmetric in p for every alpha.
    """
    return p - spec.hbar * spec.alpha


def surface_term(alpha: float, hbar: float, qdot: float) -> float:
    """Total-derivative power hbar alpha qdot split off the restricted action.

    Along a trajectory it integrates to hbar alpha (q(T) - q(0)) with the
    unwrapped angle, i.e. 2 pi hbar alpha per winding; it never enters the
    equations of motion.
    """
    return hbar * alpha * qdot
