"""Stochastic simulator of volatile resistive-switching (RRAM) cells,
multi-device synapses built from them, and a two-alternative forced-choice
decision network, with a Monte Carlo harness and a calibration pipeline.

The short-term memory of the system lives in the devices themselves: an ON
cell holds a dissolving filament whose expiry time is the hidden state. Pulse
streams integrate onto parallel synapses; the decaying ON counts are the
evidence traces; a sign comparator on the two synaptic currents makes the
choice at the end of the trial window.
"""

from .calibration import (
    ParamDeck,
    RetentionRecord,
    SwitchingFitDiagnostics,
    SwitchingRecord,
    default_deck,
    device_params,
    fit_retention,
    fit_switching_curve,
    interpolate_retention,
    read_deck,
    read_retention_csv,
    read_switching_csv,
    write_deck,
)
from .device import (
    OFF,
    DeviceParams,
    DeviceState,
    RetentionDistribution,
    SwitchingCurve,
    apply_pulse,
    read_current,
    relax,
    sample_retention,
    switching_probability,
)
from .errors import (
    ConfigError,
    DegenerateDataError,
    InsufficientDataError,
    TimeOrderError,
)
from .experiment import (
    AccuracyPoint,
    SweepGrid,
    estimate_accuracy,
    expected_on_count_no_decay,
    invert_p_on,
    run_trace_experiment,
    sweep,
    wilson_interval,
)
from .network import TrialResult, TwoAfcConfig, decide, run_trial
from .seeding import derive_seed, spawn_rng
from .stream import (
    PulseStream,
    StreamSpec,
    generate_periodic,
    generate_random,
    read_stream_csv,
    write_stream_csv,
)
from .synapse import Synapse, Trace

__version__ = "0.1.0"

__all__ = [
    "AccuracyPoint",
    "ConfigError",
    "DegenerateDataError",
    "DeviceParams",
    "DeviceState",
    "InsufficientDataError",
    "OFF",
    "ParamDeck",
    "PulseStream",
    "RetentionDistribution",
    "RetentionRecord",
    "StreamSpec",
    "SweepGrid",
    "SwitchingCurve",
    "SwitchingFitDiagnostics",
    "SwitchingRecord",
    "Synapse",
    "TimeOrderError",
    "Trace",
    "TrialResult",
    "TwoAfcConfig",
    "apply_pulse",
    "decide",
    "default_deck",
    "derive_seed",
    "device_params",
    "estimate_accuracy",
    "expected_on_count_no_decay",
    "fit_retention",
    "fit_switching_curve",
    "generate_periodic",
    "generate_random",
    "interpolate_retention",
    "invert_p_on",
    "read_current",
    "read_deck",
    "read_retention_csv",
    "read_stream_csv",
    "read_switching_csv",
    "relax",
    "run_trace_experiment",
    "run_trial",
    "sample_retention",
    "spawn_rng",
    "sweep",
    "switching_probability",
    "wilson_interval",
    "write_deck",
    "write_stream_csv",
]
