"""Phase-space Bell-test toolkit.

Simulates and verifies the photon-counting Bell experiment on a one-photon
two-mode entangled state: displaced no-click and parity POVMs on a truncated
Fock space, closed-form correlation oracles, CH/CHSH violation analysis, and
Monte Carlo emulation of the counting runs.
"""

from .analytic import (
    BellSettings,
    b_closed_form,
    ch_closed_form,
    pi_joint,
    pi_joint_mixture,
    q_joint,
    q_single,
)
from .bell import (
    BResult,
    CHResult,
    OptimumReport,
    ch_combination,
    chsh_combination,
    optimize_violation,
    scan,
)
from .fock import (
    FockCutoff,
    ModeOperator,
    TwoModeOperator,
    TwoModeState,
    default_cutoff,
    displacement_matrix,
    expectation,
    expectation_product,
    identity_matrix,
    loss_channel,
    number_matrix,
    parity_matrix,
    tensor,
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
from .montecarlo import CountsRecord, EstimateReport, estimate, outcome_probabilities, sample_counts
from .states import CoherentState, coherent_state, incoherent_mixture, singlet_state
from .verification import CheckResult, run_battery

__version__ = "0.1.0"

__all__ = [
    "BellSettings",
    "b_closed_form",
    "ch_closed_form",
    "pi_joint",
    "pi_joint_mixture",
    "q_joint",
    "q_single",
    "BResult",
    "CHResult",
    "OptimumReport",
    "ch_combination",
    "chsh_combination",
    "optimize_violation",
    "scan",
    "FockCutoff",
    "ModeOperator",
    "TwoModeOperator",
    "TwoModeState",
    "default_cutoff",
    "displacement_matrix",
    "expectation",
    "expectation_product",
    "identity_matrix",
    "loss_channel",
    "number_matrix",
    "parity_matrix",
    "tensor",
    "unitary_block_dim",
    "ApparatusSetting",
    "DisplacementSetting",
    "click_povm",
    "displaced_parity_observable",
    "finite_t_noclick_povm",
    "noclick_povm",
    "parity_povm",
    "CountsRecord",
    "EstimateReport",
    "estimate",
    "outcome_probabilities",
    "sample_counts",
    "CoherentState",
    "coherent_state",
    "incoherent_mixture",
    "singlet_state",
    "CheckResult",
    "run_battery",
    "__version__",
]
