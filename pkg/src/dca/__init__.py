"""Dendritic cell algorithm for event-driven anomaly detection."""

from .cell import Context, DcConfig, DendriticCell, Presentation
from .experiment import (
    ConfusionMatrix,
    ExperimentConfig,
    Ordering,
    emit_report,
    load_config,
    order_items,
    run_experiment,
)
from .lymph import ClassLabel, PresentationLedger, UnseenAntigenError
from .pool import DcPool, PoolConfig, init_pool
from .signals import (
    DEFAULT_WEIGHTS,
    ChannelWeights,
    CytokineOutput,
    NormalizationMode,
    SignalVector,
    WeightMatrix,
    process_signals,
)
from .wbc import (
    LabeledEvent,
    RawRecord,
    SignalDerivationStats,
    compute_stats,
    derive_event,
    derive_events,
    parse_dataset,
    read_signal_stream,
    write_signal_stream,
)

__version__ = "0.1.0"
