"""Bit-to-symbol maps for the rotation-keyed two-stream constellation.

One complex symbol carries two code bits.  The first bit selects antipodal
BPSK polarity; the second selects a rotation of the whole BPSK pair by a
quarter turn, so the transmitted point is one of four:

    ===========  =====  ==============
    (bit1, bit2)  angle  symbol
    ===========  =====  ==============
    (0, 0)        0      (+sqrt(Es), 0)
    (1, 0)        0      (-sqrt(Es), 0)
    (0, 1)        pi/2   (0, +sqrt(Es))
    (1, 1)        pi/2   (0, -sqrt(Es))
    ===========  =====  ==============

Pairing bit1=0 with the positive imaginary axis makes derotation by -pi/2
map the imaginary-axis pair back onto standard BPSK with no polarity flip.

Quarter-turn rotations are implemented as exact multiplications by the unit
constants 1, 1j, -1, -1j, which IEEE-754 evaluates without rounding; the
receiver's derotate-then-demap path is therefore bit-exact, not just
accurate to rounding.

LLR sign convention everywhere: positive LLR means bit 0 is more likely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

HALF_PI = math.pi / 2.0

_EXACT_PHASORS = (
    (0.0, 1.0 + 0.0j),
    (HALF_PI, 1.0j),
    (-HALF_PI, -1.0j),
    (math.pi, -1.0 + 0.0j),
    (-math.pi, -1.0 + 0.0j),
)


@dataclass(frozen=True)
class Constellation:
    """Ordered four-point signal set with common symbol energy."""

    points: np.ndarray
    es: float

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.complex128)
        if pts.shape != (4,):
            raise ValueError(f"expected 4 points, got shape {pts.shape}")
        if not self.es > 0:
            raise ValueError(f"es must be positive, got {self.es}")
        energy = np.abs(pts) ** 2
        if not np.allclose(energy, self.es, rtol=1e-12, atol=0.0):
            raise ValueError("all points must have energy es")
        object.__setattr__(self, "points", pts)

    @classmethod
    def quadrature_pair(cls, es: float = 1.0) -> "Constellation":
        """The canonical layout: +re, +im, -re, -im, each at energy es."""
        a = math.sqrt(es)
        return cls(points=np.array([a, 1j * a, -a, -1j * a]), es=es)

    @property
    def axis_labels(self) -> np.ndarray:
        """Second-stream bit carried by each point (0 = real axis pair)."""
        return np.array([0, 1, 0, 1], dtype=np.uint8)


def map_bpsk(bits, es: float = 1.0) -> np.ndarray:
    """Antipodal map: bit 0 -> +sqrt(es), bit 1 -> -sqrt(es), on the real axis."""
    if not es > 0:
        raise ValueError(f"es must be positive, got {es}")
    bits = np.asarray(bits)
    return (1.0 - 2.0 * bits.astype(np.float64)) * math.sqrt(es) + 0.0j


def beta_from_bits(bits) -> np.ndarray:
    """Rotation angle keyed by the second-stream bit: 0 -> 0, 1 -> pi/2."""
    return np.asarray(bits, dtype=np.float64) * HALF_PI


def _phasor(beta) -> np.ndarray:
    beta = np.asarray(beta, dtype=np.float64)
    out = np.exp(1j * beta)
    # Quarter-turn angles get the exactly representable unit constants.
    for angle, unit in _EXACT_PHASORS:
        out = np.where(beta == angle, unit, out)
    return out


def rotate(z, beta) -> np.ndarray:
    """Rotate complex samples by ``beta`` radians (scalar or per-sample array).

    Multiples of pi/2 are applied exactly (component swap/negate semantics);
    other angles use the unit phasor exp(1j*beta).
    """
    return np.asarray(z, dtype=np.complex128) * _phasor(beta)


def dmm_map(v1, v2, es: float = 1.0) -> np.ndarray:
    """Map one bit pair (or arrays of pairs) onto the four-point set."""
    return rotate(map_bpsk(v1, es), beta_from_bits(v2))


def demod_v2_hard(y, constellation: Constellation | None = None):
    """Hard decision on the axis bit: 1 iff the point is nearest the
    imaginary-axis pair.

    For the canonical layout this is ``|im(y)| > |re(y)|``; exact ties go to
    0.  With an explicit constellation the nearest point decides and ties go
    to the earliest point in the listed order.
    """
    y = np.asarray(y, dtype=np.complex128)
    if constellation is None:
        return (np.abs(y.imag) > np.abs(y.real)).astype(np.uint8)
    d2 = np.abs(y[..., None] - constellation.points) ** 2
    nearest = np.argmin(d2, axis=-1)
    return constellation.axis_labels[nearest]


def llr_v2(y, constellation: Constellation, sigma2: float) -> np.ndarray:
    """Soft axis-bit information: ln of the real-axis-pair likelihood over the
    imaginary-axis-pair likelihood under Gaussian noise.

    Evaluated with log-sum-exp so widely separated exponents cannot underflow
    to a 0/0.
    """
    if not sigma2 > 0:
        raise ValueError(f"sigma2 must be positive, got {sigma2}")
    y = np.asarray(y, dtype=np.complex128)
    pts = constellation.points
    labels = constellation.axis_labels
    # -|y - s_k|^2 / (2 sigma2), per point
    expo = -np.abs(y[..., None] - pts) ** 2 / (2.0 * sigma2)
    num = np.logaddexp.reduce(expo[..., labels == 0], axis=-1)
    den = np.logaddexp.reduce(expo[..., labels == 1], axis=-1)
    return num - den


def derotate_and_llr_v1(y, beta_hat, es: float, sigma2: float) -> np.ndarray:
    """Undo the estimated rotation and demap the polarity bit.

    After derotation the symbol is ordinary BPSK in the real dimension, so
    the per-bit information is ``2 sqrt(es) Re(y') / sigma2``.  Rotation
    preserves amplitudes, so no SNR is lost in this step.
    """
    if not sigma2 > 0:
        raise ValueError(f"sigma2 must be positive, got {sigma2}")
    y_back = rotate(y, np.negative(beta_hat))
    return 2.0 * math.sqrt(es) * y_back.real / sigma2
