"""Local filtering (pre-processing) POVMs applied by the trusted parties.

A filter is a dichotomic qubit POVM ``{P0^dag P0, P1^dag P1}``; outcome 0 is
the success branch. Alice never filters. In the 2->1 scenario only Charlie
is trusted, so only Charlie may filter.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from .kernel import I2, dagger, tensor
from .states import make_state
from .steering import Scenario

ZERO_PROBABILITY = 1e-12
_SLACK = 1e-12

PARTY_INDEX = {"B": 1, "C": 2}


class ImpossibleOutcomeError(ValueError):
    """The requested outcome branch has (numerically) zero probability."""


@dataclass(frozen=True, eq=False)
class FilterPOVM:
    party: str
    success_op: np.ndarray
    failure_op: np.ndarray

    def __post_init__(self) -> None:
        if self.party not in PARTY_INDEX:
            raise ValueError(f"filters act on Bob or Charlie, got party {self.party!r}")

    def op(self, outcome: int) -> np.ndarray:
        if outcome not in (0, 1):
            raise ValueError(f"filter outcome must be 0 or 1, got {outcome}")
        return self.success_op if outcome == 0 else self.failure_op

    def effects(self) -> tuple[np.ndarray, np.ndarray]:
        return tuple(dagger(k) @ k for k in (self.success_op, self.failure_op))

    def completeness_error(self) -> float:
        g0, g1 = self.effects()
        return float(np.max(np.abs(g0 + g1 - I2)))


@dataclass(frozen=True, eq=False)
class FilterOutcome:
    state: np.ndarray
    success_probability: float


def _root(x: float, what: str) -> float:
    # clip rounding noise at the boundary of the validity domain
    if x < -_SLACK:
        raise ValueError(f"filter undefined: {what} = {x} < 0")
    return math.sqrt(max(x, 0.0))


def _diag(a: float, b: float) -> np.ndarray:
    return np.diag([a, b]).astype(complex)


def _tan_upto_one(theta: float) -> float:
    if not 0.0 < theta <= math.pi / 4 + _SLACK:
        raise ValueError(f"gGHZ filter needs 0 < theta <= pi/4, got {theta}")
    return min(math.tan(theta), 1.0)


def gghz_filter_two_party(theta: float) -> tuple[FilterPOVM, FilterPOVM]:
    """Equal participation: Bob and Charlie both apply diag(sqrt(tan theta), 1)."""
    t = _tan_upto_one(theta)
    p0 = _diag(math.sqrt(t), 1.0)
    p1 = _diag(_root(1.0 - t, "1 - tan(theta)"), 0.0)
    return FilterPOVM("B", p0, p1), FilterPOVM("C", p0.copy(), p1.copy())


def gghz_filter_one_party(theta: float, party: str = "C") -> FilterPOVM:
    """Single party participation: one of Bob/Charlie applies diag(tan theta, 1)."""
    t = _tan_upto_one(theta)
    return FilterPOVM(party, _diag(t, 1.0), _diag(_root(1.0 - t * t, "1 - tan^2(theta)"), 0.0))


def wclass_filter(c0: float, c1: float) -> tuple[FilterPOVM, FilterPOVM]:
    """Bob and Charlie rebalance c0|001> + c1|010> + c2|100> into the W state."""
    c2sq = 1.0 - c0 * c0 - c1 * c1
    if c0 <= 0.0 or c1 <= 0.0 or c2sq <= 0.0:
        raise ValueError(f"W-class filter needs c0, c1 > 0 and c0^2 + c1^2 < 1, got ({c0}, {c1})")
    c2 = math.sqrt(c2sq)
    bob = FilterPOVM(
        "B", _diag(c1 / c2, 1.0), _diag(_root((1.0 - c0 * c0 - 2 * c1 * c1) / c2sq, "1 - c0^2 - 2c1^2"), 0.0)
    )
    charlie = FilterPOVM(
        "C", _diag(c0 / c2, 1.0), _diag(_root((1.0 - 2 * c0 * c0 - c1 * c1) / c2sq, "1 - 2c0^2 - c1^2"), 0.0)
    )
    return bob, charlie


def one_param_w_filter(d0: float) -> FilterPOVM:
    """Charlie alone maps d0|001> + r(|010> + |100>) to the W state."""
    if not 0.0 < d0 < 1.0:
        raise ValueError(f"one-parameter W filter needs 0 < d0 < 1, got {d0}")
    ratio = 2.0 * d0 * d0 / (1.0 - d0 * d0)
    if ratio > 1.0 + _SLACK:
        raise ValueError(f"one-parameter W filter needs d0 <= 1/sqrt(3), got {d0}")
    return FilterPOVM("C", _diag(math.sqrt(min(ratio, 1.0)), 1.0), _diag(_root(1.0 - ratio, "1 - 2d0^2/(1-d0^2)"), 0.0))


def _lift(filters: Sequence[FilterPOVM], outcomes: Mapping[str, int]) -> np.ndarray:
    slots = [I2, I2, I2]
    for f in filters:
        slots[PARTY_INDEX[f.party]] = f.op(outcomes.get(f.party, 0))
    return tensor(*slots)


def _check_filters(filters: Sequence[FilterPOVM], scenario: Scenario | str | None) -> None:
    if not filters:
        raise ValueError("apply_filter needs at least one filter")
    parties = [f.party for f in filters]
    if len(set(parties)) != len(parties):
        raise ValueError(f"at most one filter per party, got {parties}")
    if scenario is not None and Scenario(scenario) is Scenario.TWO_TO_ONE and "B" in parties:
        raise ValueError("Bob is untrusted in the 2->1 scenario and cannot filter")


def apply_filter(
    rho: np.ndarray,
    filters: Sequence[FilterPOVM],
    outcomes: Mapping[str, int] | None = None,
    scenario: Scenario | str | None = None,
) -> FilterOutcome:
    """Post-select ``rho`` on the given outcomes (default: every filter succeeds)."""
    filters = list(filters)
    _check_filters(filters, scenario)
    outcomes = dict(outcomes or {})
    unknown = set(outcomes) - {f.party for f in filters}
    if unknown:
        raise ValueError(f"outcomes given for parties without a filter: {sorted(unknown)}")
    k = _lift(filters, outcomes)
    branch = k @ rho @ dagger(k)
    prob = float(np.real(np.trace(branch)))
    if prob <= ZERO_PROBABILITY:
        raise ImpossibleOutcomeError(f"outcome {outcomes or 'success'} has probability {prob:.3e}")
    return FilterOutcome(branch / prob, prob)


def branch_probabilities(rho: np.ndarray, filters: Sequence[FilterPOVM]) -> dict[tuple[int, ...], float]:
    """Probability of every joint outcome, keyed by outcome bits in filter order."""
    filters = list(filters)
    _check_filters(filters, None)
    probs = {}
    for bits in itertools.product((0, 1), repeat=len(filters)):
        k = _lift(filters, {f.party: b for f, b in zip(filters, bits)})
        probs[bits] = float(np.real(np.trace(k @ rho @ dagger(k))))
    return probs


# strategy names: "bc" both trusted parties, "b" / "c" a single party
STRATEGIES = ("auto", "bc", "b", "c")


def filters_for(family: str, params: Mapping[str, float], scenario: Scenario | str, strategy: str = "auto") -> list[FilterPOVM]:
    """The target-state filter for a family, respecting which parties are trusted.

    ``auto`` picks two-party filtering in 1->2 where available and Charlie
    alone otherwise.
    """
    scenario = Scenario(scenario)
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown filter strategy {strategy!r}; expected one of {STRATEGIES}")
    if strategy == "auto":
        if scenario is Scenario.TWO_TO_ONE or family == "w1p":
            strategy = "c"
        else:
            strategy = "bc"
    if scenario is Scenario.TWO_TO_ONE and strategy != "c":
        raise ValueError("only Charlie may filter in the 2->1 scenario")

    if family == "gghz":
        theta = params["theta"]
        if strategy == "bc":
            return list(gghz_filter_two_party(theta))
        return [gghz_filter_one_party(theta, strategy.upper())]
    if family == "wclass":
        if strategy != "bc":
            raise ValueError("no single-party dichotomic filter maps a W-class state to W")
        return list(wclass_filter(params["c0"], params["c1"]))
    if family == "w1p":
        d0 = params["d0"]
        if strategy == "c":
            return [one_param_w_filter(d0)]
        if strategy == "bc":
            return list(wclass_filter(d0, math.sqrt((1.0 - d0 * d0) / 2.0)))
        raise ValueError("Bob alone cannot map the one-parameter W-class state to W")
    raise ValueError(f"unknown state family {family!r}")


def filtered_state(family: str, params: Mapping[str, float], scenario: Scenario | str, strategy: str = "auto") -> FilterOutcome:
    """Success branch of the family's target filter."""
    rho = make_state(family, params)
    return apply_filter(rho, filters_for(family, params, scenario, strategy), scenario=scenario)
