"""Spectra, bound states and so(2,1) ladder steps for hypergeometric Natanzon potentials.

Units are hbar = 2m = 1, so H = -d^2/dr^2 + V(r).
"""

from .ladder import (
    LOWERING,
    LOWERING_PHASE,
    RAISING,
    RadialLadderOp,
    SatelliteChain,
    SatelliteStep,
    apply_ladder,
    ladder_coefficients,
    rm_satellite_AB,
    satellite_chain,
    satellite_level,
    satellite_params,
)
from .params import (
    AdmissibilityError,
    NatanzonParams,
    PotentialDomain,
    admissible,
    domain_of,
    eval_R,
    identify_pt2,
    identify_rm,
    preset_pt2,
    preset_rm,
    pt2_closed_form,
    rm_closed_form,
    tau_delta,
)
from .potential import potential_limits, potential_of_z, potential_value
from .spectrum import (
    Level,
    NoBoundState,
    abd_of_energy,
    enumerate_levels,
    irrep_alignment_check,
    solve_level,
)
from .susy import PartnerPotential, compare_potentials, compare_satellite_vs_susy, partner_fd_levels, susy_partner
from .verify import (
    ResidualReport,
    casimir_residual,
    fd_eigensolve,
    master_operator_residual,
    master_residual,
    schrodinger_residual,
)
from .wavefunction import (
    BoundState,
    TerminatingHyp,
    build_state,
    contiguous_residuals,
    hyp_eval,
    overlap,
    state_derivative,
)
from .zmap import ZMap, build_zmap, r_of_z, z_of_r

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityError",
    "BoundState",
    "LOWERING",
    "LOWERING_PHASE",
    "Level",
    "NatanzonParams",
    "NoBoundState",
    "PartnerPotential",
    "PotentialDomain",
    "RAISING",
    "RadialLadderOp",
    "ResidualReport",
    "SatelliteChain",
    "SatelliteStep",
    "TerminatingHyp",
    "ZMap",
    "abd_of_energy",
    "admissible",
    "apply_ladder",
    "build_state",
    "build_zmap",
    "casimir_residual",
    "compare_potentials",
    "compare_satellite_vs_susy",
    "contiguous_residuals",
    "domain_of",
    "enumerate_levels",
    "eval_R",
    "fd_eigensolve",
    "hyp_eval",
    "identify_pt2",
    "identify_rm",
    "irrep_alignment_check",
    "ladder_coefficients",
    "master_operator_residual",
    "master_residual",
    "overlap",
    "partner_fd_levels",
    "potential_limits",
    "potential_of_z",
    "potential_value",
    "preset_pt2",
    "preset_rm",
    "pt2_closed_form",
    "r_of_z",
    "rm_closed_form",
    "rm_satellite_AB",
    "satellite_chain",
    "satellite_level",
    "satellite_params",
    "schrodinger_residual",
    "solve_level",
    "state_derivative",
    "susy_partner",
    "tau_delta",
    "z_of_r",
]
