"""Multipoint-emitter spectral response, cascaded-network checks, and dynamics."""

from ._giantatom import (
    AtomSpec,
    CouplingLayout,
    DriveSpec,
    Environment,
    MirrorSpec,
    coupling_factor,
    evolve_populations,
    fit_layout,
    lamb_shift_hilbert,
    lamb_shift_renormalized,
    lamb_stark_shift_full,
    level_shift,
    mirror_lamb_correction,
    mirror_rate,
    network_rate_and_shift,
    normalize_config,
    preset_fig3,
    relaxation_rate,
    run_command,
    scenario_anharmonicity,
    scenario_inversion,
    scenario_multiphoton,
    spectrum_sweep,
    steady_populations,
    symmetric_lamb,
    symmetric_mirror_lamb,
    symmetric_mirror_rate,
    symmetric_rate,
)

__all__ = [
    "AtomSpec",
    "CouplingLayout",
    "DriveSpec",
    "Environment",
    "MirrorSpec",
    "coupling_factor",
    "evolve_populations",
    "fit_layout",
    "lamb_shift_hilbert",
    "lamb_shift_renormalized",
    "lamb_stark_shift_full",
    "level_shift",
    "mirror_lamb_correction",
    "mirror_rate",
    "network_rate_and_shift",
    "normalize_config",
    "preset_fig3",
    "relaxation_rate",
    "run_command",
    "scenario_anharmonicity",
    "scenario_inversion",
    "scenario_multiphoton",
    "spectrum_sweep",
    "steady_populations",
    "symmetric_lamb",
    "symmetric_mirror_lamb",
    "symmetric_mirror_rate",
    "symmetric_rate",
]
