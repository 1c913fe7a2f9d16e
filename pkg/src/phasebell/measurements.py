"""Measurement operators for displaced photon counting.

Two detector models are covered:

* yes/no detectors: the no-click element Q(alpha) = D|0><0|D^dag projects onto
  the displaced vacuum (equivalently onto the coherent state |alpha>), and the
  click element is its complement P(alpha) = 1 - Q(alpha), exact by
  construction so the pair is complete on the truncated space too;
* photon-number-resolving detectors: displaced even/odd projectors whose
  difference is the displaced parity observable.

The physical displacing apparatus (beam splitter of power transmission T fed
with a coherent ancilla gamma, then a yes/no detector) has the exact no-count
POVM element E0 = D(z) (1-T)^n D(z)^dag with z = sqrt((1-T)/T) gamma, obtained
by evaluating the normally ordered vacuum projector of the detected mode
c = sqrt(T) a - sqrt(1-T) b on the ancilla. The opposite reflection sign would
only flip the phase of z; this convention is fixed throughout. As T -> 1 with
sqrt(1-T) gamma = alpha held fixed, E0 -> Q(alpha).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .fock import (
    FockCutoff,
    ModeOperator,
    TwoModeOperator,
    displacement_matrix,
    identity_matrix,
    parity_matrix,
    tensor,
)

__all__ = [
    "DisplacementSetting",
    "ApparatusSetting",
    "noclick_povm",
    "click_povm",
    "parity_povm",
    "displaced_parity_observable",
    "finite_t_noclick_povm",
]


@dataclass(frozen=True)
class DisplacementSetting:
    """Coherent displacement applied before the detector."""

    alpha: complex

    def __post_init__(self) -> None:
        a = complex(self.alpha)
        if not (math.isfinite(a.real) and math.isfinite(a.imag)):
            raise ValueError(f"displacement must be finite, got {self.alpha!r}")
        object.__setattr__(self, "alpha", a)


@dataclass(frozen=True)
class ApparatusSetting:
    """Beam-splitter transmission T in (0, 1] and coherent ancilla amplitude."""

    transmission: float
    gamma: complex

    def __post_init__(self) -> None:
        if not (0.0 < self.transmission <= 1.0):
            raise ValueError(f"transmission must lie in (0, 1], got {self.transmission}")
        g = complex(self.gamma)
        if not (math.isfinite(g.real) and math.isfinite(g.imag)):
            raise ValueError(f"gamma must be finite, got {self.gamma!r}")
        object.__setattr__(self, "gamma", g)

    @property
    def displacement(self) -> complex:
        """Effective coherent displacement sqrt(1-T) gamma of the ideal limit."""
        return math.sqrt(1.0 - self.transmission) * self.gamma


def noclick_povm(setting: DisplacementSetting, cutoff: FockCutoff) -> ModeOperator:
    """Rank-one projector D|0><0|D^dag onto the displaced vacuum."""
    col = displacement_matrix(setting.alpha, cutoff).matrix[:, 0]
    return ModeOperator(np.outer(col, col.conj()), cutoff)


def click_povm(setting: DisplacementSetting, cutoff: FockCutoff) -> ModeOperator:
    """Complement 1 - Q(alpha); completeness holds exactly by construction."""
    return identity_matrix(cutoff) - noclick_povm(setting, cutoff)


def parity_povm(
    setting: DisplacementSetting, sign: Literal["even", "odd"], cutoff: FockCutoff
) -> ModeOperator:
    """Displaced projector onto even or odd photon number."""
    if sign not in ("even", "odd"):
        raise ValueError(f"sign must be 'even' or 'odd', got {sign!r}")
    n = np.arange(cutoff.dim)
    mask = (n % 2 == 0) if sign == "even" else (n % 2 == 1)
    D = displacement_matrix(setting.alpha, cutoff).matrix
    Dm = D[:, mask]
    return ModeOperator(Dm @ Dm.conj().T, cutoff)


def displaced_parity_observable(
    a_setting: DisplacementSetting,
    b_setting: DisplacementSetting,
    cutoff: FockCutoff,
    via: Literal["parity_split", "product_space"] = "parity_split",
) -> TwoModeOperator:
    """Joint +-1 observable of displaced photon-number parity on both modes.

    ``parity_split`` forms the per-mode difference of even and odd projectors
    and tensors them; ``product_space`` conjugates the two-mode parity by the
    product displacement in the full product space. The two agree within
    truncation tolerance and exist as separate routes for cross-checking.
    """
    if via == "parity_split":
        da = parity_povm(a_setting, "even", cutoff) - parity_povm(a_setting, "odd", cutoff)
        db = parity_povm(b_setting, "even", cutoff) - parity_povm(b_setting, "odd", cutoff)
        return tensor(da, db)
    if via == "product_space":
        D2 = tensor(
            displacement_matrix(a_setting.alpha, cutoff),
            displacement_matrix(b_setting.alpha, cutoff),
        )
        par2 = tensor(parity_matrix(cutoff), parity_matrix(cutoff))
        return D2 @ par2 @ D2.dagger()
    raise ValueError(f"unknown construction {via!r}")


def finite_t_noclick_povm(app: ApparatusSetting, cutoff: FockCutoff) -> ModeOperator:
    """Exact no-count POVM element E0 = D(z) (1-T)^n D(z)^dag, z = sqrt((1-T)/T) gamma."""
    T = app.transmission
    z = math.sqrt((1.0 - T) / T) * app.gamma
    attenuation = (1.0 - T) ** np.arange(cutoff.dim, dtype=float)
    if z == 0:
        return ModeOperator(np.diag(attenuation.astype(complex)), cutoff)
    D = displacement_matrix(z, cutoff).matrix
    return ModeOperator((D * attenuation) @ D.conj().T, cutoff)
