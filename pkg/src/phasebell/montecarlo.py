"""Monte Carlo emulation of the counting experiment.

For each of the four setting pairs (0,0), (a,0), (0,b), (a,b) the exact
four-outcome joint distribution is computed from POVM expectations, then
sampled by inverse CDF. Random numbers come from counter-based Philox streams
keyed by (seed, setting index, shot block), with a fixed block size, so the
tallies are bit-identical regardless of how the blocks are scheduled across
threads.

Outcome ordering is fixed:

* CH mode: (no-click, no-click), (no-click, click), (click, no-click),
  (click, click);
* B mode: (+1, +1), (+1, -1), (-1, +1), (-1, -1) parity outcomes.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .analytic import BellSettings
from .fock import FockCutoff, TwoModeState, expectation_product, loss_channel
from .measurements import DisplacementSetting, click_povm, noclick_povm, parity_povm

__all__ = [
    "CountsRecord",
    "EstimateReport",
    "SETTING_PAIR_LABELS",
    "CH_OUTCOME_LABELS",
    "B_OUTCOME_LABELS",
    "outcome_probabilities",
    "sample_counts",
    "estimate",
]

SETTING_PAIR_LABELS = ("00", "a0", "0b", "ab")
CH_OUTCOME_LABELS = ("nn", "nc", "cn", "cc")
B_OUTCOME_LABELS = ("pp", "pm", "mp", "mm")

PROB_SUM_TOL = 1e-9
BLOCK_SHOTS = 1 << 16

Mode = Literal["ch", "b"]


@dataclass(frozen=True)
class CountsRecord:
    """Per-setting outcome tallies; tallies[pair, outcome] with the fixed orders above."""

    mode: str
    shots: int
    seed: int
    settings: BellSettings
    tallies: np.ndarray
    eta: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        t = np.asarray(self.tallies, dtype=np.int64)
        if t.shape != (4, 4):
            raise ValueError(f"tallies must be 4x4, got shape {t.shape}")
        if np.any(t < 0):
            raise ValueError("tallies must be nonnegative")
        sums = t.sum(axis=1)
        if np.any(sums != self.shots):
            raise ValueError(f"per-setting tallies {sums.tolist()} do not sum to shots {self.shots}")
        t.setflags(write=False)
        object.__setattr__(self, "tallies", t)


@dataclass(frozen=True)
class EstimateReport:
    value: float
    std_error: float
    shots_total: int
    settings: BellSettings
    mode: str


def _setting_pairs(settings: BellSettings) -> list[tuple[complex, complex]]:
    a, b = settings.alpha, settings.beta
    return [(0, 0), (a, 0), (0, b), (a, b)]


def outcome_probabilities(
    state: TwoModeState, settings: BellSettings, mode: Mode, cutoff: FockCutoff
) -> np.ndarray:
    """Exact (4 pairs x 4 outcomes) joint outcome distributions.

    Raises if a distribution fails to sum to 1 within tolerance, which signals
    a cutoff too small for the requested displacements.
    """
    if mode not in ("ch", "b"):
        raise ValueError(f"mode must be 'ch' or 'b', got {mode!r}")

    def detector_ops(amp: complex):
        s = DisplacementSetting(amp)
        if mode == "ch":
            return noclick_povm(s, cutoff), click_povm(s, cutoff)
        return parity_povm(s, "even", cutoff), parity_povm(s, "odd", cutoff)

    cache: dict[complex, tuple] = {}

    def ops(amp: complex):
        if amp not in cache:
            cache[amp] = detector_ops(amp)
        return cache[amp]

    probs = np.zeros((4, 4))
    for k, (x, y) in enumerate(_setting_pairs(settings)):
        a_pos, a_neg = ops(x)
        b_pos, b_neg = ops(y)
        row = np.array(
            [
                expectation_product(state, a_pos, b_pos).real,
                expectation_product(state, a_pos, b_neg).real,
                expectation_product(state, a_neg, b_pos).real,
                expectation_product(state, a_neg, b_neg).real,
            ]
        )
        total = row.sum()
        if abs(total - 1.0) > PROB_SUM_TOL:
            raise ValueError(
                f"outcome probabilities for setting pair {SETTING_PAIR_LABELS[k]} sum to "
                f"{total}, beyond {PROB_SUM_TOL}; increase the cutoff"
            )
        if row.min() < -PROB_SUM_TOL:
            raise ValueError(f"negative outcome probability {row.min()} at pair {SETTING_PAIR_LABELS[k]}")
        probs[k] = np.clip(row, 0.0, None) / np.clip(row, 0.0, None).sum()
    return probs


def _block_tally(seed: int, pair: int, block: int, n: int, cum: np.ndarray) -> np.ndarray:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(pair, block))
    gen = np.random.Generator(np.random.Philox(ss))
    u = gen.random(n)
    idx = np.minimum(np.searchsorted(cum, u, side="right"), 3)
    return np.bincount(idx, minlength=4).astype(np.int64)


def sample_counts(
    state: TwoModeState,
    settings: BellSettings,
    mode: Mode,
    shots: int,
    seed: int,
    cutoff: FockCutoff,
    eta: tuple[float, float] | None = None,
    threads: int = 1,
) -> CountsRecord:
    """Draw ``shots`` independent samples per setting pair from the exact distributions.

    Deterministic given (seed, settings, shots, cutoff, eta); thread count
    only affects scheduling, never the tallies.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    if seed < 0 or seed >= 2 ** 64:
        raise ValueError(f"seed must be a 64-bit nonnegative integer, got {seed}")
    if eta is not None:
        state = loss_channel(state, eta[0], eta[1])
    probs = outcome_probabilities(state, settings, mode, cutoff)
    cums = [np.cumsum(probs[k]) for k in range(4)]

    tasks = []
    for pair in range(4):
        n_blocks = math.ceil(shots / BLOCK_SHOTS)
        for block in range(n_blocks):
            n = min(BLOCK_SHOTS, shots - block * BLOCK_SHOTS)
            tasks.append((pair, block, n))

    tallies = np.zeros((4, 4), dtype=np.int64)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(
                pool.map(lambda t: _block_tally(seed, t[0], t[1], t[2], cums[t[0]]), tasks)
            )
        for (pair, _, _), tally in zip(tasks, results):
            tallies[pair] += tally
    else:
        for pair, block, n in tasks:
            tallies[pair] += _block_tally(seed, pair, block, n, cums[pair])

    return CountsRecord(
        mode=mode, shots=shots, seed=seed, settings=settings, tallies=tallies, eta=eta
    )


def estimate(counts: CountsRecord) -> EstimateReport:
    """Assemble the CH or B combination from empirical frequencies.

    Singles for the CH combination come from the detector marginals of the
    (0, 0) setting pair. The standard error treats the setting pairs as
    independent experiments and propagates binomial variances p(1-p)/shots
    per term in quadrature, matching how a counting experiment would report.
    """
    if counts.shots < 1:
        raise ValueError("counts record has no shots")
    shots = float(counts.shots)
    f = counts.tallies / shots

    if counts.mode == "ch":
        single_a = f[0, 0] + f[0, 1]
        single_b = f[0, 0] + f[0, 2]
        value = single_a + single_b - f[0, 0] - f[1, 0] - f[2, 0] + f[3, 0]
        terms = [single_a, single_b, f[0, 0], f[1, 0], f[2, 0], f[3, 0]]
        var = sum(p * (1.0 - p) / shots for p in terms)
    elif counts.mode == "b":
        pis = (counts.tallies[:, 0] - counts.tallies[:, 1] - counts.tallies[:, 2] + counts.tallies[:, 3]) / shots
        value = pis[0] + pis[1] + pis[2] - pis[3]
        var = sum(max(0.0, 1.0 - p * p) / shots for p in pis)
    else:
        raise ValueError(f"unknown mode {counts.mode!r}")

    return EstimateReport(
        value=float(value),
        std_error=math.sqrt(var),
        shots_total=4 * counts.shots,
        settings=counts.settings,
        mode=counts.mode,
    )
