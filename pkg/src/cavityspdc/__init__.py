"""Design toolkit for two-crystal cavity-enhanced SPDC entangled-photon
sources: phase matching, SPDC bandwidths, cavity mode clustering, biphoton
fidelities, and finesse/linewidth budgeting, with parameter sweeps and
figure reproduction on top."""

from .biphoton import (AmplitudeComb, BellTarget, bell_fidelity, build_comb,
                       comb_mismatch, fidelity_from_ratio,
                       single_crystal_fidelity)
from .cavity import (CavitySpec, LossEntry, ar_face_ledger, effective_length,
                     finesse, fsr_hz, linewidth, loss_budget,
                     required_finesse)
from .errors import (DegenerateSlope, IncompatibleTarget, InvalidReflectivity,
                     MaterialFileError, NoPositivePeriod, NoRealRoot,
                     NumericError, OutOfValidityRange, ScenarioValidation,
                     ToolError, UnknownFigure, ValidationError)
from .materials import (Axis, DispersionModel, builtin_material,
                        builtin_material_names, load_material)
from .phasematch import (XI_HWHM, CrystalSpec, PmKind, PmType, SpdcProcess,
                         phase_mismatch, solve_poling_period, spdc_bandwidth,
                         spdc_bandwidth_scan, temperature_detuning_slope)
from .resonator import (PAIR_CRYSTAL_1, PAIR_CRYSTAL_2, ModeId, SourceConfig,
                        cluster_spacing_first_order,
                        cluster_spacing_second_order, crystal_process, fsr,
                        joint_cluster_spacing, mode_number,
                        temperature_sensitivity)

__version__ = "0.1.0"

from .design import design_query  # noqa: E402
from .figures import FIGURE_IDS, reproduce_figure  # noqa: E402
from .sweep import (Scenario, SourceSettings, SweepResult,  # noqa: E402
                    builtin_scenario, builtin_scenario_names, load_scenario,
                    loads_scenario, run_sweep)
