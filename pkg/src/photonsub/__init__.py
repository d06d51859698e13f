"""Photon-subtracted squeezed vacuum states under loss and dephasing.

Fock-space construction, exact decoherence maps, Wigner functions (closed
forms and a Fock-basis oracle) and the Mandel Q / A3 nonclassicality
witnesses.
"""

from ._backend import BACKEND
from .errors import (
    DegenerateStateError,
    NonHermitianError,
    PhotonSubError,
    StepSizeError,
    TailTooHeavyError,
    TruncationError,
)
from .fock import (
    Channel,
    DecayParams,
    DensityMatrix,
    amplitude_decay,
    evolve,
    from_pure,
    ode_evolve_oracle,
    phase_damping,
)
from .observables import (
    MomentSet,
    WitnessReport,
    a3_parameter,
    mandel_q,
    mandel_q_timeseries,
    moments,
    witness_report,
)
from .phase_space import (
    GridSpec,
    NegativityReport,
    WignerGrid,
    make_evaluator,
    negativity_analysis,
    sample_grid,
    wigner_decayed,
    wigner_from_density_matrix,
    wigner_phase_damped_longtime,
    wigner_squeezed_vacuum,
    wigner_subtracted_t0,
)
from .states import FockState, SqueezeParams, fock, photon_subtracted, squeezed_vacuum, vacuum

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Channel",
    "DecayParams",
    "DegenerateStateError",
    "DensityMatrix",
    "FockState",
    "GridSpec",
    "MomentSet",
    "NegativityReport",
    "NonHermitianError",
    "PhotonSubError",
    "SqueezeParams",
    "StepSizeError",
    "TailTooHeavyError",
    "TruncationError",
    "WignerGrid",
    "WitnessReport",
    "a3_parameter",
    "amplitude_decay",
    "evolve",
    "fock",
    "from_pure",
    "make_evaluator",
    "mandel_q",
    "mandel_q_timeseries",
    "moments",
    "negativity_analysis",
    "ode_evolve_oracle",
    "phase_damping",
    "photon_subtracted",
    "sample_grid",
    "squeezed_vacuum",
    "vacuum",
    "wigner_decayed",
    "wigner_from_density_matrix",
    "wigner_phase_damped_longtime",
    "wigner_squeezed_vacuum",
    "wigner_subtracted_t0",
    "witness_report",
]
