"""Closed-form correlation functions used as oracles for the numeric engine.

Deliberately implemented with scalar stdlib arithmetic only (no numpy, no
dependence on the Fock-space code) so agreement between the two routes is a
genuine cross-check.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

__all__ = [
    "BellSettings",
    "q_joint",
    "q_single",
    "ch_closed_form",
    "pi_joint",
    "pi_joint_mixture",
    "b_closed_form",
]


def _check_finite(value: complex, name: str) -> complex:
    v = complex(value)
    if not (math.isfinite(v.real) and math.isfinite(v.imag)):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return v


@dataclass(frozen=True)
class BellSettings:
    """The two coherent displacements (alpha for mode a, beta for mode b).

    For equal magnitudes the pair is equivalently described by the intensity
    J = |alpha|^2 and half the phase difference phi, via beta = e^(2i phi) alpha.
    """

    alpha: complex
    beta: complex

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", _check_finite(self.alpha, "alpha"))
        object.__setattr__(self, "beta", _check_finite(self.beta, "beta"))

    @classmethod
    def from_intensity_phase(cls, intensity: float, phi: float) -> "BellSettings":
        if intensity < 0:
            raise ValueError(f"intensity must be >= 0, got {intensity}")
        alpha = complex(math.sqrt(intensity), 0.0)
        return cls(alpha=alpha, beta=cmath.exp(2j * phi) * alpha)

    @property
    def intensity(self) -> float:
        """J = |alpha|^2."""
        return abs(self.alpha) ** 2

    @property
    def half_phase(self) -> float:
        """Half the phase difference between beta and alpha (equal magnitudes only)."""
        if abs(abs(self.alpha) - abs(self.beta)) > 1e-9 * max(1.0, abs(self.alpha)):
            raise ValueError("half_phase is defined only for equal-magnitude displacements")
        if self.alpha == 0:
            return 0.0
        return cmath.phase(self.beta / self.alpha) / 2.0


def q_joint(alpha: complex, beta: complex) -> float:
    """Joint no-count probability |alpha-beta|^2 exp(-|alpha|^2-|beta|^2) / 2."""
    a = _check_finite(alpha, "alpha")
    b = _check_finite(beta, "beta")
    return 0.5 * abs(a - b) ** 2 * math.exp(-abs(a) ** 2 - abs(b) ** 2)


def q_single(alpha: complex) -> float:
    """Single-detector no-count probability (|alpha|^2 + 1) exp(-|alpha|^2) / 2."""
    a = _check_finite(alpha, "alpha")
    j = abs(a) ** 2
    return 0.5 * (j + 1.0) * math.exp(-j)


def ch_closed_form(intensity: float, phi: float) -> float:
    """CH combination at equal intensities: 1 - J e^-J + 2 J e^-2J sin^2(phi)."""
    j = float(intensity)
    if j < 0:
        raise ValueError(f"intensity must be >= 0, got {intensity}")
    return 1.0 - j * math.exp(-j) + 2.0 * j * math.exp(-2.0 * j) * math.sin(phi) ** 2


def pi_joint(alpha: complex, beta: complex) -> float:
    """Joint displaced-parity correlation (2|alpha-beta|^2 - 1) e^(-2|alpha|^2-2|beta|^2)."""
    a = _check_finite(alpha, "alpha")
    b = _check_finite(beta, "beta")
    return (2.0 * abs(a - b) ** 2 - 1.0) * math.exp(-2.0 * abs(a) ** 2 - 2.0 * abs(b) ** 2)


def pi_joint_mixture(alpha: complex, beta: complex) -> float:
    """Same correlation for the incoherent mixture: no interference cross term."""
    a = _check_finite(alpha, "alpha")
    b = _check_finite(beta, "beta")
    ja = abs(a) ** 2
    jb = abs(b) ** 2
    return (2.0 * ja + 2.0 * jb - 1.0) * math.exp(-2.0 * ja - 2.0 * jb)


def b_closed_form(intensity: float, phi: float) -> float:
    """CHSH-type combination at equal intensities:
    -1 + (4J - 2) e^-2J - (8J sin^2(phi) - 1) e^-4J."""
    j = float(intensity)
    if j < 0:
        raise ValueError(f"intensity must be >= 0, got {intensity}")
    return (
        -1.0
        + (4.0 * j - 2.0) * math.exp(-2.0 * j)
        - (8.0 * j * math.sin(phi) ** 2 - 1.0) * math.exp(-4.0 * j)
    )
