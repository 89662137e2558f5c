"""Genuine tripartite EPR steering of three-qubit states under local noise and local filtering."""

from .channels import ChannelKind, Convention, KrausChannel, Topology, apply, apply_sequence, kraus
from .filters import FilterOutcome, FilterPOVM, ImpossibleOutcomeError, apply_filter
from .scan import Axis, DeltaReport, Pipeline, SweepSpec, ThresholdReport, delta_report, sweep, thresholds
from .states import gghz, ghz, one_param_w, w_state, wclass
from .steering import G1, G2, W1, W2, Scenario, SteeringInequality, evaluate, expectation, violation_range

__version__ = "0.1.0"

__all__ = [
    "G1", "G2", "W1", "W2",
    "Axis", "ChannelKind", "Convention", "DeltaReport", "FilterOutcome", "FilterPOVM",
    "ImpossibleOutcomeError", "KrausChannel", "Pipeline", "Scenario", "SteeringInequality",
    "SweepSpec", "ThresholdReport", "Topology",
    "apply", "apply_filter", "apply_sequence", "delta_report", "evaluate", "expectation",
    "gghz", "ghz", "kraus", "one_param_w", "sweep", "thresholds", "violation_range",
    "w_state", "wclass",
]
