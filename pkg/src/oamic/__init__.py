"""Simulation and verification toolkit for OAM modes in crosstalk channels.

Evolves density matrices under crosstalk/flip Kraus maps, computes the
channel invariants, reconstructs transmitted states from channel output,
reproduces closed-form turbulence output states, and implements
ancilla-free mode-spaced error rejection and correction codes.
"""

__version__ = "0.1.0"

from .analysis import GroupFit, IntensityRecord, analyze_intensities
from .channels import (
    KrausChannel,
    SpilloverSpec,
    apply_channel,
    build_flip_channel,
    build_ic_channel,
    embed_state,
)
from .codes import (
    CorrectionCode,
    RejectionCode,
    build_correction_code,
    build_rejection_code,
    correct,
    encode,
    measure_rejection,
    measure_syndrome,
    rejection_distribution,
    syndrome_distribution,
    transmit,
)
from .invariants import (
    InvariantValue,
    family_one,
    family_two,
    tan_phase_invariant,
    three_qubit_invariants,
    three_qubit_retrieval_invariants,
    werner_ratio_invariants,
)
from .kernels import BACKEND as KERNEL_BACKEND
from .linalg import (
    DensityMatrix,
    ModeBasis,
    WeylOperator,
    expectation,
    make_phase,
    make_shift,
    make_weyl,
    pure_state_fidelity,
    validate_density,
)
from .retrieval import (
    ReconstructedState,
    RetrievalProblem,
    check_condition,
    minimum_dimension,
    recover_three_qubit_params,
    recover_two_qubit_gamma,
    recover_werner_phi,
    retrieve_full_state,
)
from .turbulence import (
    ThreeQubitParams,
    TwoQubitParams,
    WernerParams,
    apply_werner_turbulence,
    three_qubit_output,
    two_qubit_output,
    werner_initial,
    werner_output,
)
