"""Parameter sweeps, collapse/revival thresholds and filtering gains.

A :class:`Pipeline` fixes everything except the damping strength ``p``:
state -> optional filter (success branch) -> optional pre-channel -> channel
-> inequality. Thresholds are the values of ``p`` where the inequality
value changes sign.
"""

from __future__ import annotations

import math
import os
from collections.abc import Mapping
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import cached_property, lru_cache

import numpy as np

from . import roots
from .channels import DEFAULT_CONVENTION, ChannelKind, Convention, Topology, apply, kraus
from .filters import filtered_state
from .states import family_params, make_state
from .steering import evaluate, get_inequality

THRESHOLD_TOL = 5e-4
PRESCAN = 400
WORKERS_ENV = "TRISTEER_WORKERS"
_PARALLEL_MIN_POINTS = 5000


@dataclass(frozen=True)
class Pipeline:
    inequality: str
    family: str
    params: tuple[tuple[str, float], ...]
    channel: ChannelKind | None = None
    topology: Topology = Topology.ONE_SIDED
    filter: str | None = None
    # (kind, strength) applied before ``channel`` on the same parties
    pre_channel: tuple[ChannelKind, float] | None = None
    convention: Convention = DEFAULT_CONVENTION

    @classmethod
    def build(
        cls,
        inequality: str,
        family: str,
        params: Mapping[str, float],
        channel: ChannelKind | str | None = None,
        topology: Topology | int = 1,
        filter: str | None = None,
        pre_channel: tuple[ChannelKind | str, float] | None = None,
        convention: Convention | str = DEFAULT_CONVENTION,
    ) -> Pipeline:
        names = family_params(family)
        if set(params) != set(names):
            raise ValueError(f"family {family!r} takes parameters {names}, got {sorted(params)}")
        get_inequality(inequality)
        return cls(
            inequality=inequality.lower(),
            family=family,
            params=tuple((n, float(params[n])) for n in names),
            channel=None if channel is None else ChannelKind(channel),
            topology=Topology(topology),
            filter=filter,
            pre_channel=None if pre_channel is None else (ChannelKind(pre_channel[0]), float(pre_channel[1])),
            convention=Convention(convention),
        )

    @property
    def param_dict(self) -> dict[str, float]:
        return dict(self.params)

    def with_params(self, **params: float) -> Pipeline:
        merged = {**self.param_dict, **params}
        return replace(self, params=tuple((n, float(merged[n])) for n in family_params(self.family)))

    @property
    def scenario(self):
        return get_inequality(self.inequality).scenario

    @cached_property
    def prepared(self) -> tuple[np.ndarray, float]:
        """Initial state after optional filtering, with its success probability."""
        if self.filter is None:
            return make_state(self.family, self.param_dict), 1.0
        out = filtered_state(self.family, self.param_dict, self.scenario, self.filter)
        return out.state, out.success_probability

    def damped(self, p: float) -> np.ndarray:
        rho, _ = self.prepared
        if self.pre_channel is not None:
            kind, strength = self.pre_channel
            rho = apply(rho, kraus(kind, strength, self.convention), self.topology)
        if self.channel is not None:
            rho = apply(rho, kraus(self.channel, p, self.convention), self.topology)
        return rho

    def value(self, p: float = 0.0) -> float:
        return evaluate(get_inequality(self.inequality), self.damped(p))


@dataclass(frozen=True)
class Axis:
    """Inclusive grid ``start..stop`` with ``steps`` points (``steps == 1`` means just ``start``)."""

    start: float
    stop: float
    steps: int

    def __post_init__(self) -> None:
        if self.steps < 1:
            raise ValueError("an axis needs at least one point")
        if self.steps == 1 and self.start != self.stop:
            raise ValueError("a single-point axis must have start == stop")

    @classmethod
    def parse(cls, text: str) -> Axis:
        """``"min:max:steps"`` or a single number."""
        parts = text.split(":")
        try:
            if len(parts) == 1:
                x = float(parts[0])
                return cls(x, x, 1)
            if len(parts) == 3:
                return cls(float(parts[0]), float(parts[1]), int(parts[2]))
        except ValueError as exc:
            raise ValueError(f"bad axis {text!r}: {exc}") from None
        raise ValueError(f"bad axis {text!r}; expected min:max:steps")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)

    def __str__(self) -> str:
        return f"{self.start!r}:{self.stop!r}:{self.steps}"


@dataclass(frozen=True)
class SweepSpec:
    pipeline: Pipeline
    p_axis: Axis
    state_axis: tuple[str, Axis] | None = None

    def __post_init__(self) -> None:
        if self.state_axis is not None and self.state_axis[0] not in family_params(self.pipeline.family):
            raise ValueError(f"{self.state_axis[0]!r} is not a parameter of family {self.pipeline.family!r}")
        if not (0.0 <= self.p_axis.start <= 1.0 and 0.0 <= self.p_axis.stop <= 1.0):
            raise ValueError("damping axis must lie within [0, 1]")

    @property
    def state_name(self) -> str:
        return self.state_axis[0] if self.state_axis else family_params(self.pipeline.family)[0]

    def state_values(self) -> np.ndarray:
        if self.state_axis:
            return self.state_axis[1].values()
        return np.array([self.pipeline.param_dict[self.state_name]])


@dataclass(frozen=True)
class SweepRecord:
    state_param: float
    p: float
    value: float | None
    success_probability: float | None


def _sweep_row(spec: SweepSpec, x: float) -> list[SweepRecord]:
    pipe = spec.pipeline.with_params(**{spec.state_name: float(x)})
    ps = spec.p_axis.values()
    try:
        _, prob = pipe.prepared
    except ValueError:
        # filter or state undefined at this grid point
        return [SweepRecord(float(x), float(p), None, None) for p in ps]
    return [SweepRecord(float(x), float(p), pipe.value(float(p)), prob) for p in ps]


def default_workers() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError(f"{WORKERS_ENV} must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def sweep(spec: SweepSpec, workers: int | None = None) -> list[SweepRecord]:
    """Evaluate every grid point, ordered by (state-parameter index, p index)."""
    xs = spec.state_values()
    workers = default_workers() if workers is None else max(1, workers)
    n_points = len(xs) * spec.p_axis.steps
    if workers == 1 or len(xs) == 1 or n_points < _PARALLEL_MIN_POINTS:
        rows = [_sweep_row(spec, x) for x in xs]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(xs))) as pool:
            rows = list(pool.map(_sweep_row, [spec] * len(xs), xs))
    return [rec for row in rows for rec in row]


@dataclass(frozen=True)
class ThresholdReport:
    """Collapse and revival strengths; ``None`` where no crossing exists."""

    value_at_zero: float
    p_collapse: float | None = None
    collapse_width: float | None = None
    p_revival: float | None = None
    revival_width: float | None = None
    crossings: tuple[roots.Crossing, ...] = field(default=(), repr=False)

    @property
    def steerable(self) -> bool:
        return self.value_at_zero < 0.0

    @property
    def status(self) -> str:
        if not self.steerable:
            return "never steerable"
        if self.p_collapse is None:
            return "no collapse"
        if self.p_revival is None:
            return "collapse"
        return "collapse and revival"

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "value_at_zero": self.value_at_zero,
            "p_collapse": self.p_collapse,
            "collapse_width": self.collapse_width,
            "p_revival": self.p_revival,
            "revival_width": self.revival_width,
        }


@lru_cache(maxsize=1024)
def thresholds(pipeline: Pipeline, prescan: int = PRESCAN, tol: float = THRESHOLD_TOL) -> ThresholdReport:
    """Locate the first collapse and the following revival along ``p`` in [0, 1]."""
    if pipeline.channel is None:
        raise ValueError("thresholds need a damping channel")
    v0 = pipeline.value(0.0)
    if v0 >= 0.0:
        return ThresholdReport(v0)
    found = tuple(roots.scan_crossings(pipeline.value, 0.0, 1.0, prescan, tol))
    collapse = next((c for c in found if c.rising), None)
    if collapse is None:
        return ThresholdReport(v0, crossings=found)
    revival = next((c for c in found if not c.rising and c.x > collapse.x), None)
    return ThresholdReport(
        v0,
        collapse.x,
        collapse.width,
        None if revival is None else revival.x,
        None if revival is None else revival.width,
        crossings=found,
    )


@dataclass(frozen=True)
class DeltaReport:
    """Threshold gains target minus reference; negative ``delta_p_r`` means an earlier revival."""

    delta_p_c: float | None
    delta_p_r: float | None
    reference: ThresholdReport
    target: ThresholdReport

    def to_dict(self) -> dict:
        return {
            "delta_p_c": self.delta_p_c,
            "delta_p_r": self.delta_p_r,
            "reference": self.reference.to_dict(),
            "target": self.target.to_dict(),
        }


def _diff(a: float | None, b: float | None) -> float | None:
    return None if a is None or b is None else a - b


def delta_report(reference: Pipeline, target: Pipeline) -> DeltaReport:
    ref, tgt = thresholds(reference), thresholds(target)
    return DeltaReport(_diff(tgt.p_collapse, ref.p_collapse), _diff(tgt.p_revival, ref.p_revival), ref, tgt)


def filtering_gain(reference: Pipeline, strategy: str = "auto") -> DeltaReport:
    """Delta report of the filtered success branch against the unfiltered state."""
    return delta_report(replace(reference, filter=None), replace(reference, filter=strategy))


def format_number(x: float | None) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    return f"{x:.9g}"
