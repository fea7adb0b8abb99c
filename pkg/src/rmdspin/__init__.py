"""Classical spin-lattice dynamics under random multipolar drives."""

from rmdspin.analysis import (
    FitResult,
    ThermalizationResult,
    aggregate_tau,
    calibrate_energy,
    extract_tau,
    fit_exponential,
    fit_log_squared,
    fit_power_law,
    rondeau_lifetime,
    target_energy,
)
from rmdspin.drive import (
    BlockPair,
    DriveGenerator,
    DriveSpec,
    HamLabel,
    build_blocks,
    labels_to_string,
    thue_morse_label,
)
from rmdspin.dynamics import (
    EvolutionRecord,
    StepParams,
    Trajectory,
    apply_x_step,
    apply_z_step,
    evolve,
    evolve_twin,
    kappa,
)
from rmdspin.lattice import (
    SpinLattice,
    from_angles,
    init_neel,
    init_polarized,
    perturb_copy,
)
from rmdspin.observables import (
    ObservableSet,
    decorrelator,
    energy_x,
    energy_z,
    magnetization_z,
    measure,
    staggered_magnetization,
)

__version__ = "0.1.0"

__all__ = [
    "BlockPair",
    "DriveGenerator",
    "DriveSpec",
    "EvolutionRecord",
    "FitResult",
    "HamLabel",
    "ObservableSet",
    "SpinLattice",
    "StepParams",
    "ThermalizationResult",
    "Trajectory",
    "aggregate_tau",
    "apply_x_step",
    "apply_z_step",
    "build_blocks",
    "calibrate_energy",
    "decorrelator",
    "energy_x",
    "energy_z",
    "evolve",
    "evolve_twin",
    "extract_tau",
    "fit_exponential",
    "fit_log_squared",
    "fit_power_law",
    "from_angles",
    "init_neel",
    "init_polarized",
    "kappa",
    "labels_to_string",
    "magnetization_z",
    "measure",
    "perturb_copy",
    "rondeau_lifetime",
    "staggered_magnetization",
    "target_energy",
    "thue_morse_label",
]
