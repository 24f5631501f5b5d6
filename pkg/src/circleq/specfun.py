"""Modified Bessel functions of integer order and periodic quadrature.

Everything else in the package sits on these two primitives: an
overflow-safe evaluation of I_n(z) (exponentially scaled for large
arguments) and the uniform trapezoidal rule on [-pi, pi), which is
spectrally accurate for smooth periodic integrands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi

# Power series below this argument, Miller backward recurrence above.
_SERIES_CUTOFF = 15.0
# exp(z) * I0e(z) stays below float range up to here; past it only the
# scaled value is representable.
_UNSCALED_LIMIT = 700.0


def _check_order_arg(order, z):
    if not isinstance(order, (int, np.integer)):
        raise ValueError(f"Bessel order must be an integer, got {order!r}")
    if order < 0:
        raise ValueError(f"Bessel order must be >= 0, got {order}")
    if z < 0.0:
        raise ValueError(f"Bessel argument must be >= 0, got {z}")


def _series_scaled(max_order: int, z: float) -> np.ndarray:
    """e^{-z} I_n(z) for n = 0..max_order by the ascending power series.

    All terms are positive, so there is no cancellation; the e^{-z}
    damping is folded into the leading term to keep everything in range.
    """
    out = np.zeros(max_order + 1)
    if z == 0.0:
        out[0] = 1.0
        return out
    half = 0.5 * z
    log_half = math.log(half)
    half_sq = half * half
    for n in range(max_order + 1):
        # leading term (z/2)^n / n! in log form; underflows harmlessly to 0
        # for orders far beyond the support of I_n(z)
        term = math.exp(n * log_half - math.lgamma(n + 1.0) - z)
        total = term
        for m in range(400):
            term *= half_sq / ((m + 1.0) * (m + n + 1.0))
            total += term
            if term <= 1e-18 * total:
                break
        out[n] = total
    return out


def _miller_scaled(max_order: int, z: float) -> np.ndarray:
    """e^{-z} I_n(z) for n = 0..max_order by backward (Miller) recurrence.

    The recurrence I_{k-1} = I_{k+1} + (2k/z) I_k is run downward from a
    start order far enough above both max_order and the turning point
    k ~ z that the arbitrary seed is damped below machine precision, and
    the result is normalized with I_0(z) + 2 sum_{k>=1} I_k(z) = e^z.
    """
    start = int(max(max_order, 1.2 * z + 12.0 * math.sqrt(z))) + 40
    b = np.zeros(start + 2)
    b[start] = 1.0
    for k in range(start, 0, -1):
        b[k - 1] = b[k + 1] + (2.0 * k / z) * b[k]
        if b[k - 1] > 1e250:
            b[k - 1:] *= 1e-250
    total = b[0] + 2.0 * b[1:].sum()
    return b[: max_order + 1] / total


def bessel_i_scaled_sequence(max_order: int, z: float) -> np.ndarray:
    """Array of exponentially scaled values e^{-z} I_n(z), n = 0..max_order."""
    _check_order_arg(max_order, z)
    if z < _SERIES_CUTOFF:
        return _series_scaled(max_order, z)
    return _miller_scaled(max_order, z)


def bessel_i_scaled(order: int, z: float) -> float:
    """Exponentially scaled modified Bessel function e^{-z} I_order(z)."""
    return float(bessel_i_scaled_sequence(order, z)[order])


def bessel_i(order: int, z: float) -> float:
    """Modified Bessel function of the first kind, I_order(z).

    Valid for 0 <= z <= 700; beyond that the unscaled value overflows a
    double and callers must switch to :func:`bessel_i_scaled`.
    """
    _check_order_arg(order, z)
    if z > _UNSCALED_LIMIT:
        raise OverflowError(
            f"I_{order}({z}) exceeds double range; use bessel_i_scaled"
        )
    return float(math.exp(z) * bessel_i_scaled(order, z))


def bessel_i_ratio_sequence(max_order: int, z: float) -> np.ndarray:
    """Ratios I_n(z)/I_0(z) for n = 0..max_order, stable at large z."""
    _check_order_arg(max_order, z)
    if z <= 0.0:
        raise ValueError(f"ratio requires z > 0, got {z}")
    seq = bessel_i_scaled_sequence(max_order, z)
    return seq / seq[0]


def bessel_i_ratio(order: int, z: float) -> float:
    """I_order(z)/I_0(z) in [0, 1], computed from scaled values only."""
    return float(bessel_i_ratio_sequence(order, z)[order])


@dataclass(frozen=True, eq=False)
class QuadratureGrid:
    """Uniform angular grid theta_j = -pi + 2 pi j / M, j = 0..M-1.

    The node at -pi sits on the chart seam; weight * node_count = 2 pi.
    """

    node_count: int
    nodes: np.ndarray
    weight: float

    @classmethod
    def make(cls, node_count: int = 512) -> "QuadratureGrid":
        if node_count < 16 or node_count % 2 != 0:
            raise ValueError(
                f"node_count must be even and >= 16, got {node_count}"
            )
        nodes = -math.pi + TWO_PI * np.arange(node_count) / node_count
        return cls(node_count=node_count, nodes=nodes, weight=TWO_PI / node_count)


def integrate_periodic(f, grid: QuadratureGrid):
    """Trapezoidal integral of f over [-pi, pi) on a uniform grid.

    ``f`` may be a callable of the node array or an array of samples.
    Exact (to roundoff) for trigonometric polynomials of degree < M/2 and
    geometrically convergent for analytic periodic integrands.  For
    integrands that jump at the chart seam theta = +/-pi the accuracy
    degrades; the error is then proportional to the seam jump.
    """
    values = f(grid.nodes) if callable(f) else np.asarray(f)
    if values.shape != grid.nodes.shape:
        values = np.broadcast_to(values, grid.nodes.shape)
    return grid.weight * values.sum()
