"""CH and CHSH-type combinations, parameter scans, and violation optimizers.

Both combinations use the four setting pairs {0, alpha} x {0, beta}. They can
be evaluated through the closed-form oracles (``model="analytic"``) or through
POVM expectations on the truncated Fock space (``model="numeric"``); the two
routes agreeing is one of the package's acceptance checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal

from . import analytic
from .analytic import BellSettings
from .fock import FockCutoff, default_cutoff, expectation_product, identity_matrix
from .measurements import DisplacementSetting, click_povm, noclick_povm, parity_povm
from .states import incoherent_mixture, singlet_state

__all__ = [
    "CHResult",
    "BResult",
    "OptimumReport",
    "VIOLATION_SLACK",
    "ch_combination",
    "chsh_combination",
    "scan",
    "optimize_violation",
]

# Bound crossings are flagged only beyond this slack, so exact boundary cases
# (e.g. CH = 1 at J = ln 2) never flip the flag on rounding noise.
VIOLATION_SLACK = 1e-12

Model = Literal["analytic", "numeric"]
Target = Literal["ch", "b"]
Source = Literal["singlet", "mixture"]

CH_LOCAL_UPPER = 1.0
CH_LOCAL_LOWER = 0.0
B_LOCAL_BOUND = 2.0


@dataclass(frozen=True)
class CHResult:
    """CH combination value with its six constituent probabilities."""

    value: float
    components: dict[str, float]
    violates_upper: bool
    violates_lower: bool
    settings: BellSettings
    basis: str


@dataclass(frozen=True)
class BResult:
    """CHSH-type combination value with its four parity correlations."""

    value: float
    components: dict[str, float]
    violates: bool
    settings: BellSettings
    source: str


@dataclass(frozen=True)
class OptimumReport:
    target: str
    j_star: float
    phi_star: float
    value_star: float
    evaluations: int
    grid_resolution: float


def _numeric_cutoff(settings: BellSettings, cutoff: FockCutoff | None) -> FockCutoff:
    if cutoff is not None:
        return cutoff
    return default_cutoff(max(abs(settings.alpha), abs(settings.beta)))


def _assemble_ch(p: dict[str, float]) -> float:
    return (
        p["single_a"]
        + p["single_b"]
        - p["joint_00"]
        - p["joint_a0"]
        - p["joint_0b"]
        + p["joint_ab"]
    )


def ch_combination(
    settings: BellSettings,
    model: Model = "analytic",
    basis: Literal["noclick", "click"] = "noclick",
    cutoff: FockCutoff | None = None,
) -> CHResult:
    """Clauser-Horne combination from no-count (or count) probabilities.

    The click basis uses the complementary probabilities; completeness algebra
    makes it equal to the no-click basis up to rounding.
    """
    if basis not in ("noclick", "click"):
        raise ValueError(f"basis must be 'noclick' or 'click', got {basis!r}")
    a, b = settings.alpha, settings.beta

    if model == "analytic":
        q = {
            "single_a": analytic.q_single(0),
            "single_b": analytic.q_single(0),
            "joint_00": analytic.q_joint(0, 0),
            "joint_a0": analytic.q_joint(a, 0),
            "joint_0b": analytic.q_joint(0, b),
            "joint_ab": analytic.q_joint(a, b),
        }
        if basis == "click":
            qa = analytic.q_single(a)
            qb = analytic.q_single(b)
            q0 = analytic.q_single(0)
            comps = {
                "single_a": 1.0 - q0,
                "single_b": 1.0 - q0,
                "joint_00": 1.0 - 2.0 * q0 + q["joint_00"],
                "joint_a0": 1.0 - qa - q0 + q["joint_a0"],
                "joint_0b": 1.0 - q0 - qb + q["joint_0b"],
                "joint_ab": 1.0 - qa - qb + q["joint_ab"],
            }
        else:
            comps = q
    elif model == "numeric":
        cut = _numeric_cutoff(settings, cutoff)
        state = singlet_state(cut)
        povm = noclick_povm if basis == "noclick" else click_povm
        op0 = povm(DisplacementSetting(0), cut)
        opa = povm(DisplacementSetting(a), cut)
        opb = povm(DisplacementSetting(b), cut)
        ident = identity_matrix(cut)
        comps = {
            "single_a": expectation_product(state, op0, ident).real,
            "single_b": expectation_product(state, ident, op0).real,
            "joint_00": expectation_product(state, op0, op0).real,
            "joint_a0": expectation_product(state, opa, op0).real,
            "joint_0b": expectation_product(state, op0, opb).real,
            "joint_ab": expectation_product(state, opa, opb).real,
        }
    else:
        raise ValueError(f"model must be 'analytic' or 'numeric', got {model!r}")

    value = _assemble_ch(comps)
    return CHResult(
        value=value,
        components=comps,
        violates_upper=value > CH_LOCAL_UPPER + VIOLATION_SLACK,
        violates_lower=value < CH_LOCAL_LOWER - VIOLATION_SLACK,
        settings=settings,
        basis=basis,
    )


def chsh_combination(
    settings: BellSettings,
    model: Model = "analytic",
    cutoff: FockCutoff | None = None,
    source: Source = "singlet",
) -> BResult:
    """Four-correlation combination Pi(0,0) + Pi(a,0) + Pi(0,b) - Pi(a,b)."""
    if source not in ("singlet", "mixture"):
        raise ValueError(f"source must be 'singlet' or 'mixture', got {source!r}")
    a, b = settings.alpha, settings.beta

    if model == "analytic":
        corr = analytic.pi_joint if source == "singlet" else analytic.pi_joint_mixture
        comps = {
            "pi_00": corr(0, 0),
            "pi_a0": corr(a, 0),
            "pi_0b": corr(0, b),
            "pi_ab": corr(a, b),
        }
    elif model == "numeric":
        cut = _numeric_cutoff(settings, cutoff)
        state = singlet_state(cut) if source == "singlet" else incoherent_mixture(cut)

        def parity_diff(amp: complex):
            s = DisplacementSetting(amp)
            return parity_povm(s, "even", cut) - parity_povm(s, "odd", cut)

        d0 = parity_diff(0)
        da = parity_diff(a)
        db = parity_diff(b)
        comps = {
            "pi_00": expectation_product(state, d0, d0).real,
            "pi_a0": expectation_product(state, da, d0).real,
            "pi_0b": expectation_product(state, d0, db).real,
            "pi_ab": expectation_product(state, da, db).real,
        }
    else:
        raise ValueError(f"model must be 'analytic' or 'numeric', got {model!r}")

    value = comps["pi_00"] + comps["pi_a0"] + comps["pi_0b"] - comps["pi_ab"]
    return BResult(
        value=value,
        components=comps,
        violates=abs(value) > B_LOCAL_BOUND + VIOLATION_SLACK,
        settings=settings,
        source=source,
    )


def evaluate_target(
    target: Target,
    intensity: float,
    phi: float,
    model: Model = "analytic",
    cutoff: FockCutoff | None = None,
    source: Source = "singlet",
) -> float:
    """Value of the chosen combination at (J, phi)."""
    settings = BellSettings.from_intensity_phase(intensity, phi)
    if target == "ch":
        if source != "singlet":
            raise ValueError("the CH combination is defined here for the singlet-like state only")
        return ch_combination(settings, model=model, cutoff=cutoff).value
    if target == "b":
        return chsh_combination(settings, model=model, cutoff=cutoff, source=source).value
    raise ValueError(f"target must be 'ch' or 'b', got {target!r}")


def _axis(lo: float, hi: float, steps: int, name: str) -> list[float]:
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi < lo:
        raise ValueError(f"invalid {name} range [{lo}, {hi}]")
    if lo == hi:
        if steps < 1:
            raise ValueError(f"{name} steps must be >= 1, got {steps}")
        return [lo] * steps
    if steps < 2:
        raise ValueError(f"{name} steps must be >= 2 for a non-degenerate range, got {steps}")
    h = (hi - lo) / (steps - 1)
    return [lo + i * h for i in range(steps)]


def scan(
    target: Target,
    j_range: tuple[float, float],
    phi_range: tuple[float, float],
    steps: int | tuple[int, int],
    model: Model = "analytic",
    cutoff: FockCutoff | None = None,
    source: Source = "singlet",
) -> list[tuple[float, float, float]]:
    """Evaluate the target on a (J, phi) grid; rows ordered J outer, phi inner."""
    j_steps, phi_steps = steps if isinstance(steps, tuple) else (steps, steps)
    js = _axis(j_range[0], j_range[1], j_steps, "J")
    phis = _axis(phi_range[0], phi_range[1], phi_steps, "phi")
    rows = []
    for j in js:
        for phi in phis:
            rows.append((j, phi, evaluate_target(target, j, phi, model, cutoff, source)))
    return rows


def _golden_section_max(
    f: Callable[[float], float], lo: float, hi: float, tol: float
) -> tuple[float, int]:
    """Argmax of f on [lo, hi] to bracket width tol; returns (x, evaluations)."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    evals = 2
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
        evals += 1
    return 0.5 * (a + b), evals


HALF_PI = math.pi / 2.0


def optimize_violation(
    target: Target,
    j_bounds: tuple[float, float],
    model: Model = "analytic",
    cutoff: FockCutoff | None = None,
    grid_resolution: float = 1e-4,
    refine_tol: float = 1e-10,
    search_phi: bool = False,
) -> OptimumReport:
    """Locate the strongest violation of the chosen combination over J.

    The phase is pinned at pi/2: both closed forms are affine in sin^2(phi)
    with coefficients (+2J e^-2J for CH, -8J e^-4J for B) whose signs make
    pi/2 extremal, so searching it would only add noise. ``search_phi=True``
    keeps a 2-D search available as a guard against convention errors.

    Dense grid at ``grid_resolution``, then golden-section refinement to
    ``refine_tol``. Exact value ties resolve to the smallest J.
    """
    lo, hi = float(j_bounds[0]), float(j_bounds[1])
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo < 0 or hi < lo:
        raise ValueError(f"invalid J bounds [{lo}, {hi}]")
    sign = 1.0 if target == "ch" else -1.0  # maximize CH, minimize B

    evals = 0

    def val(j: float, phi: float) -> float:
        nonlocal evals
        evals += 1
        return evaluate_target(target, j, phi, model, cutoff)

    def objective(j: float, phi: float) -> float:
        return sign * val(j, phi)

    if search_phi:
        phi_grid = [i * math.pi / 32.0 for i in range(33)]
    else:
        phi_grid = [HALF_PI]

    if lo == hi:
        best_phi = max(phi_grid, key=lambda p: objective(lo, p))
        return OptimumReport(target, lo, best_phi, val(lo, best_phi), evals, grid_resolution)

    n_pts = max(2, int(round((hi - lo) / grid_resolution)) + 1)
    h = (hi - lo) / (n_pts - 1)

    best = (-math.inf, lo, phi_grid[0])
    for phi in phi_grid:
        for i in range(n_pts):
            j = lo + i * h
            y = objective(j, phi)
            if y > best[0]:
                best = (y, j, phi)
    _, j0, phi0 = best

    bracket = (max(lo, j0 - h), min(hi, j0 + h))
    j_star, _ = _golden_section_max(lambda j: objective(j, phi0), bracket[0], bracket[1], refine_tol)
    phi_star = phi0
    if search_phi:
        phi_star, _ = _golden_section_max(
            lambda p: objective(j_star, p),
            max(0.0, phi0 - math.pi / 32.0),
            min(math.pi, phi0 + math.pi / 32.0),
            refine_tol,
        )
        j_star, _ = _golden_section_max(
            lambda j: objective(j, phi_star), bracket[0], bracket[1], refine_tol
        )
    return OptimumReport(target, j_star, phi_star, val(j_star, phi_star), evals, grid_resolution)
