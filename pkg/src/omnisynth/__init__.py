"""Omnidirectional synthesis from directional horn-antenna measurements."""

from .antenna import (
    HORN_73GHZ,
    NARROWBEAM_28GHZ,
    WIDEBEAM_28GHZ,
    AngularGrid,
    GainMap,
    HornPattern,
    beam_power_ratio_db,
    combine_patterns,
    hpbw_grid_pointings,
    integrated_beam_power,
    make_pattern,
    pattern_gain,
    ripple,
    solve_beamwidth_param,
)
from .channel import (
    ChannelRealization,
    GeneratorConfig,
    MultipathComponent,
    PointingSet,
    PowerDelayProfile,
    compute_pdp,
    directional_power,
    directional_power_matrix,
    generate_channel,
    generate_ensemble,
    omni_power,
)
from .errors import DegenerateDesignError, DegenerateResultError, DomainError, ParseError
from .pathloss import CiFit, FiFit, PathLossSample, fit_ci, fit_fi, fspl, predict, residuals
from .sweep import (
    DirectionalMeasurement,
    MeasurementTable,
    PlaneRatio,
    SweepPlan,
    SynthesisResult,
    combined_gain_offset_db,
    full_partition_plan,
    plan_sweep,
    run_sweep,
    strongest_plane_ratio,
    synthesize_omni,
)

__version__ = "0.1.0"
