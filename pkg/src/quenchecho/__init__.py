"""Quench-echo adiabaticity testing and uniformly adiabatic schedule
synthesis for the transverse-field Ising chain."""

__version__ = "0.1.0"

from .tfim import Chain, bogoliubov_angle, epsilon, gap, gap_minimum, mode_energy, wave_vectors
from .schedules import (
    Schedule,
    Segment,
    concat,
    echo,
    hold,
    kzm_schedule,
    linear,
    load_table,
    rc_schedule,
    reverse,
    save_table,
)
from .dynamics import (
    GROUND_STATE,
    IntegrationError,
    IntegratorConfig,
    ModeState,
    TrajectoryTrace,
    adiabatic_to_diabatic,
    diabatic_to_adiabatic,
    evolve_chain,
    evolve_mode,
    free_phase,
    lz_mode_evolve,
)
from .observables import (
    ObservableSet,
    kink_density,
    magnetization,
    observable_set,
    p_ground,
    residual_energy,
)
from .analytic import (
    LzAmplitudes,
    complex_gamma,
    fidelity_free_evolution,
    fidelity_intermediate,
    freezeout_time,
    lz_asymptotic,
)
from .adiabaticity import (
    EchoReport,
    NoBracketError,
    SweepTable,
    classify_regime,
    echo_test,
    min_adiabatic_tau,
    segmented_protocol,
    sweep_tau,
)
