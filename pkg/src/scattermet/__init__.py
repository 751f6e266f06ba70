"""Multimode interferometer metrology with scattershot photon sources.

Three interferometer families with identical phase structure (a separable MZI
stack, a QFT-based uniform network, and a symmetrised network), their quantum
Fisher information in closed form and through a full Fock-space oracle, the
scattershot source statistics, and Monte Carlo walker ensembles comparing the
families at finite sample counts.
"""

__version__ = "0.1.0"

from .errors import (
    AcceptanceTooLow,
    DomainError,
    LimitPoint,
    NotOrthogonal,
    NumericalError,
    OddModeCount,
    ScattermetError,
    TooLarge,
    UnsupportedSize,
)
from .occupations import OccupationVector, parse_occupation
from .networks import (
    NetworkKind,
    NetworkSpec,
    expm_phase,
    family_unitary,
    generator,
    mzi_unitary,
    phase_layer,
    permutation_similarity_check,
    qft,
    separable_unitary,
    skew_hadamard,
    symmetric_sign_pattern,
    symmetric_unitary,
    symmetric_unitary_product,
    symmetrizer,
    uniform_unitary,
    uniform_unitary_product,
)
from .qfi import (
    average_qfi_exact,
    avg_qfi_separable_single_photons,
    cosecant_sum,
    family_qfi,
    kadv,
    pair_probability,
    qfi_separable,
    qfi_symmetric,
    qfi_uniform,
    region_bound,
)
from .fock import (
    FockBasis,
    MeasurementCurve,
    OracleQfi,
    amplitude_expansion,
    binary_measurement_fisher,
    distribution_fisher,
    family_of,
    measurement_curve,
    odd_skew_permanent_check,
    outcome_distribution,
    permanent,
    permanent_naive,
    permutation_qfi_invariance,
    phi_zero_limit_fisher,
    qfi_oracle,
    transition_amplitude,
)
from .sources import (
    SampleStats,
    SqueezerSource,
    chi_for_mean_photons,
    sample,
    sample_postselected_single,
    total_photon_pmf,
)
from .walkers import (
    EnsembleSummary,
    WalkerConfig,
    advantage_probability_analytic,
    delta_f,
    first_region_edge,
    region_label,
    run_ensemble,
)
from .decompose import (
    Rotation,
    SignFlip,
    decompose_orthogonal,
    reconstruct,
    reflectivity_report,
)
