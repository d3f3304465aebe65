"""Thermal pair entanglement in dimerized spin-1/2 Heisenberg chains.

Exact diagonalization of XXX/XX chains with alternating strong/weak bonds
under axial or tilted magnetic fields, Wootters concurrence of bond pairs
in the Gibbs state, and sweep analysis of the field-driven staircase,
critical fields, and field-induced entanglement onset.
"""

from ._kernels import active_backend
from .errors import DimerspinError, NumericalInvariantError
from .hamiltonian import (ChainSpec, Pair, bond_strength, build_hamiltonian,
                          exchange_hamiltonian, pair_for)
from .hilbert import (N_MAX, SectorTable, build_sector_table,
                      magnetization_diagonal, pair_permutation,
                      single_site_pauli, site_mask, two_site_coupling)
from .spectral import (GibbsWeights, SpectralDecomposition, decompose,
                       decompose_sectored, gibbs_weights,
                       ground_state_magnetization, ground_state_weights,
                       magnetization_expectation, thermal_expectation,
                       thermal_weights)
from .entanglement import (WEIGHT_CUTOFF, ConcurrenceValue, TwoQubitState,
                           concurrence, pair_concurrence,
                           pair_density_tensor, reduce_to_pair)
from .sweep import (Axis, GridRequest, Plateau, PlateauReport, Step,
                    SweepGrid, TiltSummary, annotate_steps, critical_field,
                    detect_plateaus, entanglement_onset,
                    magnetization_jump_fields, open_chain_profile,
                    point_parameters, resolve_threads, run_sweep,
                    staircase_report, xx_tilt_comparison)

__version__ = "0.1.0"

__all__ = [
    "active_backend",
    "DimerspinError", "NumericalInvariantError",
    "ChainSpec", "Pair", "bond_strength", "build_hamiltonian",
    "exchange_hamiltonian", "pair_for",
    "N_MAX", "SectorTable", "build_sector_table", "magnetization_diagonal",
    "pair_permutation", "single_site_pauli", "site_mask",
    "two_site_coupling",
    "GibbsWeights", "SpectralDecomposition", "decompose",
    "decompose_sectored", "gibbs_weights", "ground_state_magnetization",
    "ground_state_weights", "magnetization_expectation",
    "thermal_expectation", "thermal_weights",
    "WEIGHT_CUTOFF", "ConcurrenceValue", "TwoQubitState", "concurrence",
    "pair_concurrence", "pair_density_tensor", "reduce_to_pair",
    "Axis", "GridRequest", "Plateau", "PlateauReport", "Step", "SweepGrid",
    "TiltSummary", "annotate_steps", "critical_field", "detect_plateaus",
    "entanglement_onset", "magnetization_jump_fields", "open_chain_profile",
    "point_parameters", "resolve_threads", "run_sweep", "staircase_report",
    "xx_tilt_comparison",
    "__version__",
]
