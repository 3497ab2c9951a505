"""Two cavities coupled through a non-reciprocal mirror.

Closed-form Heisenberg dynamics of the PT-symmetric model
H = omega0 (a+a + b+b + 1) - (omega_ab a b+ + omega_ba a+ b), with
numerical oracles (sector matrix exponentials, RK4) to check them.
"""

from .fock import FockBasis, FockState, SectorView, build_basis, sector
from .operators import (
    BasisMismatchError,
    DomainError,
    ModelParams,
    OperatorMatrix,
    build_H,
    build_intercavity_ops,
    build_lowering_a,
    build_lowering_b,
    build_number_ops,
    build_raising,
    commutator,
    pt_conjugate,
)
from .dynamics import (
    HeisenbergCoeffs,
    SpectrumEntry,
    apply_HI,
    apply_ladder_t,
    eigenfrequencies,
    expected_photons,
    heisenberg_coeffs,
    photon_number_operator_t,
    small_time_amplitude,
    spectrum,
)
from .propagator import (
    Propagator,
    TimeSeries,
    build_propagator,
    evolve_observables,
    heisenberg_numeric,
    integrate_coefficient_ode,
    matrix_exponential,
    propagate_sector,
)
from .analysis import (
    AsymmetryReport,
    SymmetryClassification,
    VerificationReport,
    classify_symmetry,
    exchange_asymmetry,
    run_verification,
    rwa_breakdown_check,
    similarity_map,
)

__version__ = "0.1.0"
