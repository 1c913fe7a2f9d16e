"""State constructors: the one-photon singlet-like state, its incoherent
counterpart, and truncated coherent states."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .fock import FockCutoff, TwoModeState, _frozen

__all__ = ["CoherentState", "singlet_state", "incoherent_mixture", "coherent_state"]

_SQRT_HALF = 1.0 / math.sqrt(2.0)


def singlet_state(cutoff: FockCutoff) -> TwoModeState:
    """(|1,0> - |0,1>)/sqrt(2): one photon shared coherently between the modes."""
    c = np.zeros((cutoff.dim, cutoff.dim), dtype=complex)
    c[1, 0] = _SQRT_HALF
    c[0, 1] = -_SQRT_HALF
    return TwoModeState.pure(c, cutoff)


def incoherent_mixture(cutoff: FockCutoff) -> TwoModeState:
    """Equal-weight incoherent mixture of |1,0> and |0,1| (no cross coherence)."""
    d = cutoff.dim
    rho = np.zeros((d * d, d * d), dtype=complex)
    i10 = 1 * d + 0
    i01 = 0 * d + 1
    rho[i10, i10] = 0.5
    rho[i01, i01] = 0.5
    return TwoModeState.mixed(rho, cutoff)


@dataclass(frozen=True)
class CoherentState:
    """Truncated single-mode coherent state, renormalized on the cutoff space.

    ``deficit`` is the probability mass lost to truncation before
    renormalization (1 - sum |c_n|^2 of the raw amplitudes).
    """

    amplitudes: np.ndarray
    deficit: float
    cutoff: FockCutoff

    def __post_init__(self) -> None:
        object.__setattr__(self, "amplitudes", _frozen(np.asarray(self.amplitudes, dtype=complex)))


def coherent_state(alpha: complex, cutoff: FockCutoff) -> CoherentState:
    """Amplitudes exp(-|a|^2/2) a^n / sqrt(n!) on the truncated basis."""
    alpha = complex(alpha)
    if not (math.isfinite(alpha.real) and math.isfinite(alpha.imag)):
        raise ValueError(f"coherent amplitude must be finite, got {alpha!r}")
    n = np.arange(cutoff.dim)
    if alpha == 0:
        amps = np.zeros(cutoff.dim, dtype=complex)
        amps[0] = 1.0
        return CoherentState(amps, 0.0, cutoff)
    x = abs(alpha) ** 2
    log_mag = n * math.log(abs(alpha)) - 0.5 * gammaln(n + 1.0) - 0.5 * x
    amps = np.exp(log_mag) * (alpha / abs(alpha)) ** n
    norm2 = float(np.sum(np.abs(amps) ** 2))
    deficit = max(0.0, 1.0 - norm2)
    return CoherentState(amps / math.sqrt(norm2), deficit, cutoff)
