"""Genuine tripartite steering inequalities G1, G2, W1 and W2.

Each term is a coefficient times a correlator over three slots (Alice, Bob,
Charlie). Untrusted parties contribute abstract observables ``A1..A3`` /
``B1..B3``; trusted parties contribute Pauli letters; ``I`` marks a silent
party. A measurement assignment maps abstract observables to Pauli axes
and defaults to 1 -> X, 2 -> Y, 3 -> Z. A negative value certifies genuine
steering in the inequality's scenario.
"""

from __future__ import annotations

import json
from collections.abc import Mapping
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Any

import numpy as np

from . import roots
from .kernel import pauli_string
from .states import make_state

IMAG_TOL = 1e-10

Term = tuple[float, tuple[str, str, str]]


class Scenario(str, Enum):
    ONE_TO_TWO = "1->2"
    TWO_TO_ONE = "2->1"


class ConsistencyError(RuntimeError):
    """A quantity that must be real came out with an imaginary part."""


DEFAULT_ASSIGNMENT: Mapping[str, str] = {
    "A1": "X", "A2": "Y", "A3": "Z",
    "B1": "X", "B2": "Y", "B3": "Z",
}

_SLOT_TOKENS = (
    {"I", "A1", "A2", "A3"},
    {"I", "X", "Y", "Z", "B1", "B2", "B3"},
    {"I", "X", "Y", "Z"},
)


@dataclass(frozen=True)
class SteeringInequality:
    name: str
    constant: float
    terms: tuple[Term, ...]
    scenario: Scenario

    def __post_init__(self) -> None:
        for _, ops in self.terms:
            if len(ops) != 3 or any(tok not in allowed for tok, allowed in zip(ops, _SLOT_TOKENS)):
                raise ValueError(f"{self.name}: invalid correlator {ops}")
            uses_b = any(tok.startswith("B") for tok in ops)
            if uses_b and self.scenario is Scenario.ONE_TO_TWO:
                raise ValueError(f"{self.name}: Bob is trusted in the 1->2 scenario")
            if ops[1] in {"X", "Y", "Z"} and self.scenario is Scenario.TWO_TO_ONE:
                raise ValueError(f"{self.name}: Bob is untrusted in the 2->1 scenario")

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "scenario": self.scenario.value,
            "constant": self.constant,
            "terms": [{"coefficient": c, "ops": list(ops)} for c, ops in self.terms],
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> SteeringInequality:
        terms = tuple((float(t["coefficient"]), tuple(t["ops"])) for t in data["terms"])
        return cls(data["name"], float(data["constant"]), terms, Scenario(data["scenario"]))

    def to_json(self, **kwargs: Any) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> SteeringInequality:
        return cls.from_dict(json.loads(text))


INEQUALITY_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "SteeringInequality",
    "type": "object",
    "required": ["name", "scenario", "constant", "terms"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "scenario": {"enum": ["1->2", "2->1"]},
        "constant": {"type": "number"},
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["coefficient", "ops"],
                "additionalProperties": False,
                "properties": {
                    "coefficient": {"type": "number"},
                    "ops": {
                        "type": "array",
                        "minItems": 3,
                        "maxItems": 3,
                        "prefixItems": [
                            {"enum": ["I", "A1", "A2", "A3"]},
                            {"enum": ["I", "X", "Y", "Z", "B1", "B2", "B3"]},
                            {"enum": ["I", "X", "Y", "Z"]},
                        ],
                    },
                },
            },
        },
    },
}


def _group(coefficient: float, *labels: str) -> list[Term]:
    return [(coefficient, tuple(label.split())) for label in labels]


THIRD = 1.0 / 3.0
ALPHA, BETA = 0.183, 0.258

G1 = SteeringInequality(
    "G1", 1.0,
    tuple(
        _group(0.1547, "I Z Z")
        + _group(-THIRD, "A3 Z I", "A3 I Z", "A1 X X")
        + _group(THIRD, "A1 Y Y", "A2 X Y", "A2 Y X")
    ),
    Scenario.ONE_TO_TWO,
)

G2 = SteeringInequality(
    "G2", 1.0,
    tuple(
        _group(-ALPHA, "A3 B3 I", "A3 I Z", "I B3 Z")
        + _group(-BETA, "A1 B1 X")
        + _group(BETA, "A1 B2 Y", "A2 B1 Y", "A2 B2 X")
    ),
    Scenario.TWO_TO_ONE,
)

W1 = SteeringInequality(
    "W1", 1.0,
    tuple(
        _group(0.4405, "I Z I", "I I Z")
        + _group(-0.0037, "I Z Z")
        + _group(-0.1570, "I X X", "I Y Y", "A3 X X", "A3 Y Y")
        + _group(0.2424, "A3 I I", "A3 Z Z")
        + _group(0.1848, "A3 Z I", "A3 I Z")
        + _group(
            -0.2533,
            "A1 X I", "A1 I X", "A2 Y I", "A2 I Y",
            "A1 X Z", "A1 Z X", "A2 Y Z", "A2 Z Y",
        )
    ),
    Scenario.ONE_TO_TWO,
)

W2 = SteeringInequality(
    "W2", 1.0,
    tuple(
        _group(0.2517, "A3 I I", "I B3 I")
        + _group(0.3520, "I I Z")
        + _group(-0.1112, "A1 I X", "A2 I Y", "I B1 X", "I B2 Y")
        + _group(0.1296, "A3 I Z", "I B3 Z")
        + _group(-0.1943, "A1 B1 I", "A2 B2 I")
        + _group(0.2277, "A3 B3 I")
        + _group(-0.1590, "A1 B1 Z", "A2 B2 Z")
        + _group(0.2228, "A3 B3 Z")
        + _group(-0.2298, "A1 B3 X", "A2 B3 Y", "A3 B1 X", "A3 B2 Y")
    ),
    Scenario.TWO_TO_ONE,
)

INEQUALITIES: dict[str, SteeringInequality] = {"g1": G1, "g2": G2, "w1": W1, "w2": W2}


def get_inequality(name: str) -> SteeringInequality:
    try:
        return INEQUALITIES[name.lower()]
    except KeyError:
        raise ValueError(f"unknown inequality {name!r}; expected one of {sorted(INEQUALITIES)}") from None


def _assignment_key(assignment: Mapping[str, str] | None) -> tuple[tuple[str, str], ...]:
    merged = dict(DEFAULT_ASSIGNMENT)
    if assignment:
        for key, axis in assignment.items():
            if key not in DEFAULT_ASSIGNMENT or axis not in {"X", "Y", "Z"}:
                raise ValueError(f"invalid measurement assignment {key}={axis}")
            merged[key] = axis
    return tuple(sorted(merged.items()))


def resolve(ops: tuple[str, str, str], assignment: Mapping[str, str] | None = None) -> str:
    """Concrete Pauli label, e.g. ``("A1", "X", "X") -> "XXX"``."""
    table = dict(_assignment_key(assignment))
    return "".join(table.get(tok, tok) for tok in ops)


def expectation(rho: np.ndarray, label: str) -> float:
    """tr(rho P) for a three-letter Pauli label ``P``."""
    if len(label) != 3:
        raise ValueError(f"expected a three-qubit Pauli label, got {label!r}")
    value = np.trace(rho @ pauli_string(label))
    if abs(value.imag) > IMAG_TOL:
        raise ConsistencyError(f"<{label}> has imaginary part {value.imag:.3e}")
    return float(value.real)


@lru_cache(maxsize=64)
def _observable(ineq: SteeringInequality, key: tuple[tuple[str, str], ...]) -> np.ndarray:
    table = dict(key)
    obs = np.zeros((8, 8), dtype=complex)
    for coefficient, ops in ineq.terms:
        obs += coefficient * pauli_string("".join(table.get(tok, tok) for tok in ops))
    obs.flags.writeable = False
    return obs


def observable(ineq: SteeringInequality, assignment: Mapping[str, str] | None = None) -> np.ndarray:
    """The Hermitian operator ``sum_k c_k P_k`` so that value = constant + tr(rho W)."""
    return _observable(ineq, _assignment_key(assignment))


def evaluate(ineq: SteeringInequality, rho: np.ndarray, assignment: Mapping[str, str] | None = None) -> float:
    value = np.sum(rho * observable(ineq, assignment).T)
    if abs(value.imag) > IMAG_TOL:
        raise ConsistencyError(f"{ineq.name} evaluated with imaginary part {value.imag:.3e}")
    return ineq.constant + float(value.real)


def evaluate_terms(ineq: SteeringInequality, rho: np.ndarray, assignment: Mapping[str, str] | None = None) -> float:
    """Term-by-term evaluation; slower than :func:`evaluate`, kept as a cross-check."""
    return ineq.constant + sum(c * expectation(rho, resolve(ops, assignment)) for c, ops in ineq.terms)


def violation_range(
    ineq: SteeringInequality,
    family: str,
    axis: str,
    lo: float,
    hi: float,
    tol: float = 1e-4,
    fixed: Mapping[str, float] | None = None,
    samples: int = 200,
    assignment: Mapping[str, str] | None = None,
) -> tuple[float, float] | None:
    """Sub-interval of ``[lo, hi]`` on which the inequality is violated.

    The state parameter ``axis`` is scanned on ``samples`` uniform points and
    each sign change is refined by bisection to ``tol``. Endpoints without a
    crossing are the scan bounds. Returns ``None`` when the sign never changes.
    If several violated stretches exist, the first is returned.
    """
    fixed = dict(fixed or {})

    def f(x: float) -> float:
        return evaluate(ineq, make_state(family, {**fixed, axis: x}), assignment)

    crossings = roots.scan_crossings(f, lo, hi, samples, tol)
    if not crossings:
        return None
    edges = [lo] + [c.x for c in crossings] + [hi]
    for a, b in zip(edges, edges[1:]):
        if f(0.5 * (a + b)) < 0.0:
            return (a, b)
    return None

