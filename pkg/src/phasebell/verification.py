"""Self-check battery wiring the numeric engine against the closed-form oracles.

Each check is independent and returns a named pass/fail result; the CLI
``verify`` command prints them as a table and sets the exit code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import analytic
from .analytic import BellSettings
from .bell import ch_combination, chsh_combination
from .fock import (
    FockCutoff,
    displacement_matrix,
    expectation,
    expectation_product,
    identity_matrix,
    loss_channel,
    parity_matrix,
    unitary_block_dim,
)
from .measurements import (
    ApparatusSetting,
    DisplacementSetting,
    click_povm,
    displaced_parity_observable,
    finite_t_noclick_povm,
    noclick_povm,
    parity_povm,
)
from .states import coherent_state, incoherent_mixture, singlet_state

__all__ = ["CheckResult", "run_battery"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _random_settings(rng: np.random.Generator, n: int, radius: float) -> list[BellSettings]:
    out = []
    for _ in range(n):
        a = rng.uniform(0, radius) * np.exp(2j * np.pi * rng.uniform())
        b = rng.uniform(0, radius) * np.exp(2j * np.pi * rng.uniform())
        out.append(BellSettings(complex(a), complex(b)))
    return out


def run_battery(cutoff: FockCutoff | None = None, seed: int = 20240) -> list[CheckResult]:
    cut = cutoff if cutoff is not None else FockCutoff(32)
    rng = np.random.default_rng(seed)
    checks: list[CheckResult] = []

    def record(name: str, err: float, tol: float) -> None:
        checks.append(CheckResult(name, err <= tol, f"max deviation {err:.3e} (tol {tol:.0e})"))

    # displacement basics
    d0 = displacement_matrix(0, cut).matrix
    record("displacement: D(0) = identity", float(np.max(np.abs(d0 - np.eye(cut.dim)))), 0.0)
    d1 = displacement_matrix(1.0, cut).matrix
    record("displacement: <0|D(1)|0> = e^-1/2", abs(d1[0, 0] - math.exp(-0.5)), 1e-14)

    err = 0.0
    for a in (0.5, 1.0, 1.5 + 0.5j):
        D = displacement_matrix(a, cut).matrix
        G = D.conj().T @ D - np.eye(cut.dim)
        k = unitary_block_dim(cut, a)
        err = max(err, float(np.max(np.abs(G[:k, :k]))))
    record("displacement: unitary on guaranteed block", err, 1e-8)

    err = 0.0
    for a in (0.7, 1.2j):
        P = displacement_matrix(a, cut).matrix @ displacement_matrix(-a, cut).matrix
        k = unitary_block_dim(cut, a)
        err = max(err, float(np.max(np.abs((P - np.eye(cut.dim))[:k, :k]))))
    record("displacement: D(a) D(-a) = identity on block", err, 1e-8)

    par = parity_matrix(cut).matrix
    record("parity: involution", float(np.max(np.abs(par @ par - np.eye(cut.dim)))), 0.0)

    # POVM structure
    s1 = DisplacementSetting(0.8 - 0.3j)
    comp = noclick_povm(s1, cut).matrix + click_povm(s1, cut).matrix - np.eye(cut.dim)
    record("povm: click + noclick = identity", float(np.max(np.abs(comp))), 0.0)

    k = unitary_block_dim(cut, s1.alpha)
    pair_sum = parity_povm(s1, "even", cut).matrix + parity_povm(s1, "odd", cut).matrix
    record(
        "povm: even + odd = identity on block",
        float(np.max(np.abs((pair_sum - np.eye(cut.dim))[:k, :k]))),
        1e-10,
    )

    err = 0.0
    for op in (
        noclick_povm(s1, cut),
        parity_povm(s1, "even", cut),
        finite_t_noclick_povm(ApparatusSetting(0.99, 3.0), cut),
    ):
        ev = np.linalg.eigvalsh(op.matrix[:k, :k])
        err = max(err, float(max(-ev[0], ev[-1] - 1.0, 0.0)))
    record("povm: spectra within [0, 1] on block", err, 1e-9)

    # closed-form identities on the singlet-like state
    psi = singlet_state(cut)
    ident = identity_matrix(cut)
    err_q = err_coh = err_m = 0.0
    for st in _random_settings(rng, 10, 1.5):
        qa = noclick_povm(DisplacementSetting(st.alpha), cut)
        qb = noclick_povm(DisplacementSetting(st.beta), cut)
        joint = expectation_product(psi, qa, qb).real
        err_q = max(err_q, abs(joint - analytic.q_joint(st.alpha, st.beta)))
        ca = coherent_state(st.alpha, cut).amplitudes
        cb = coherent_state(st.beta, cut).amplitudes
        overlap = np.vdot(np.outer(ca, cb), psi.amplitudes)
        err_coh = max(err_coh, abs(joint - abs(overlap) ** 2))
        err_m = max(
            err_m,
            abs(expectation_product(psi, qa, ident).real - analytic.q_single(st.alpha)),
            abs(expectation_product(psi, ident, qb).real - analytic.q_single(st.beta)),
        )
    record("oracle: joint no-count matches closed form", err_q, 1e-9)
    record("oracle: joint no-count matches coherent overlap", err_coh, 1e-9)
    record("oracle: singles match closed form", err_m, 1e-9)

    err = 0.0
    for st in _random_settings(rng, 8, 1.4):
        pi_op = displaced_parity_observable(
            DisplacementSetting(st.alpha), DisplacementSetting(st.beta), cut
        )
        pi2 = displaced_parity_observable(
            DisplacementSetting(st.alpha), DisplacementSetting(st.beta), cut, via="product_space"
        )
        err = max(err, float(np.max(np.abs(pi_op.matrix - pi2.matrix))))
    record("parity observable: two constructions agree", err, 1e-9)

    err = 0.0
    for st in _random_settings(rng, 8, 1.4):
        pi_op = displaced_parity_observable(
            DisplacementSetting(st.alpha), DisplacementSetting(st.beta), cut
        )
        err = max(err, abs(expectation(psi, pi_op).real - analytic.pi_joint(st.alpha, st.beta)))
    record("parity observable: expectation matches closed form", err, 1e-8)

    # combinations: numeric vs analytic, and click vs no-click basis
    err_ch = err_b = err_basis = 0.0
    for j in np.linspace(0.0, 2.0, 9):
        for phi in np.linspace(0.0, np.pi, 7):
            st = BellSettings.from_intensity_phase(float(j), float(phi))
            ch_n = ch_combination(st, model="numeric", cutoff=cut)
            err_ch = max(err_ch, abs(ch_n.value - analytic.ch_closed_form(float(j), float(phi))))
            err_basis = max(
                err_basis,
                abs(ch_combination(st, model="numeric", basis="click", cutoff=cut).value - ch_n.value),
            )
            b_n = chsh_combination(st, model="numeric", cutoff=cut)
            err_b = max(err_b, abs(b_n.value - analytic.b_closed_form(float(j), float(phi))))
    record("combinations: numeric CH matches closed form", err_ch, 1e-8)
    record("combinations: numeric B matches closed form", err_b, 1e-8)
    record("combinations: click and no-click bases agree", err_basis, 1e-10)

    # mixture: correlation formula and bounded combination
    err = 0.0
    worst_b = 0.0
    for st in _random_settings(rng, 8, 1.4):
        num = chsh_combination(st, model="numeric", cutoff=cut, source="mixture")
        ana = chsh_combination(st, model="analytic", source="mixture")
        err = max(err, abs(num.value - ana.value))
        worst_b = max(worst_b, abs(ana.value))
    record("mixture: numeric matches in-text formula", err, 1e-8)
    checks.append(
        CheckResult(
            "mixture: no violation on sampled settings",
            worst_b <= 2.0 + 1e-12,
            f"max |B| = {worst_b:.6f} (bound 2)",
        )
    )

    # global phase invariance
    base = BellSettings(0.5 + 0.2j, -0.4 + 0.6j)
    rot = complex(np.exp(0.7j))
    rotated = BellSettings(rot * base.alpha, rot * base.beta)
    err = max(
        abs(
            ch_combination(base, model="numeric", cutoff=cut).value
            - ch_combination(rotated, model="numeric", cutoff=cut).value
        ),
        abs(
            chsh_combination(base, model="numeric", cutoff=cut).value
            - chsh_combination(rotated, model="numeric", cutoff=cut).value
        ),
    )
    record("invariance: global phase rotation", err, 1e-12)

    # apparatus limit at a cutoff large enough for the ancilla leakage
    cut_app = cut if cut.n_max >= 64 else FockCutoff(64)
    q_ref = noclick_povm(DisplacementSetting(1.0), cut_app).matrix
    k = unitary_block_dim(cut_app, 1.1)
    devs = []
    for T in (0.9, 0.99, 0.999):
        app = ApparatusSetting(T, 1.0 / math.sqrt(1.0 - T))
        e0 = finite_t_noclick_povm(app, cut_app).matrix
        devs.append(float(np.max(np.abs((e0 - q_ref)[:k, :k]))))
    ok = devs[0] > devs[1] > devs[2] and devs[2] < 0.01
    checks.append(
        CheckResult(
            "apparatus: displaced-vacuum limit converges",
            ok,
            "deviations " + ", ".join(f"{d:.2e}" for d in devs),
        )
    )

    # loss channel sanity
    st = singlet_state(cut)
    same = loss_channel(st, 1.0, 1.0)
    vac = loss_channel(st, 0.0, 0.0)
    vac_target = np.zeros((cut.dim ** 2, cut.dim ** 2))
    vac_target[0, 0] = 1.0
    vac_err = float(np.max(np.abs(vac.density - vac_target)))
    tr_err = abs(complex(np.trace(loss_channel(st, 0.63, 0.8).density)) - 1.0)
    ok = same is st and vac_err < 1e-12 and tr_err < 1e-12
    checks.append(
        CheckResult(
            "loss: identity at eta=1, vacuum at eta=0, trace preserved",
            ok,
            f"vacuum residue {vac_err:.2e}, trace error {tr_err:.2e}",
        )
    )

    return checks
