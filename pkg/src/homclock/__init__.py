"""homclock: storage interferometry of frequency-bin photonic clocks under
gravitational time dilation.

Two vertically separated quantum memories hold the frequency components of a
2N-photon entangled state for a controllable time; the gravitationally
accumulated proper-time difference dephases the branches and modulates the
interference statistics at the output beam splitter.  The package provides
an exact sparse Fock-space engine, the closed-form detection models, and a
sweep/verification layer that holds the two against each other.
"""

from .engine import (
    ALL_MODELS,
    HeatmapCell,
    HeatmapSpec,
    SpectralLine,
    SweepRecord,
    SweepSpec,
    VerifyCase,
    VerifyReport,
    collapse_heatmap,
    default_markers,
    first_zero,
    hom_output_state,
    interferogram,
    linspace_grid,
    log_grid,
    mz_output_state,
    phase_sequence,
    pipeline_stage_state,
    spectral_components,
    verify,
)
from .fock import (
    N_MAX,
    CountDistribution,
    Location,
    ModeId,
    StateVector,
    apply_beam_splitter,
    apply_loss,
    apply_phase,
    build_hom_input,
    build_noon_input,
    outcome_distribution,
    parity_expectation,
    project_total_photon_number,
)
from .gravity import (
    SPEED_OF_LIGHT,
    STANDARD_GRAVITY,
    ClockConfig,
    GravityConfig,
    collapse_time,
    delta_inverse_redshift,
    hom_phase,
    inverse_redshift_offset,
    memory_phase,
    redshift_factor,
    redshift_offset,
    wavelength_to_angular,
)
from .models import (
    even_odd_probabilities,
    loss_survival,
    mz_coherence,
    p_all_same_port,
    p_kl,
    parity_signal,
)

__version__ = "0.1.0"
