"""Local damping channels (AD, PF, BF, PD) acting on one, two or all three qubits.

Two Kraus conventions are available:

``"table"``
    The operator pairs exactly as tabulated, e.g. ``K0 = sqrt(1-p) X``,
    ``K1 = sqrt(p) I`` for the bit flip. Under this reading PF and BF flip
    the qubit with probability ``1 - p`` (a deterministic flip at ``p = 0``)
    and AD relaxes ``|1> -> |0>``.

``"effective"`` (default)
    The convention under which the reference collapse and revival thresholds
    are reproduced: PF and BF apply Z (resp. X) with probability ``p``, and
    AD relaxes ``|0> -> |1>`` (``K0 = diag(sqrt(1-p), 1)``,
    ``K1 = sqrt(p)|1><0|``). PD is identical in both conventions.

Every decohering party gets the same channel kind and strength.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum, IntEnum

import numpy as np

from .kernel import I2, X, Z, dagger, embed


class ChannelKind(str, Enum):
    AD = "ad"
    PF = "pf"
    BF = "bf"
    PD = "pd"


class Convention(str, Enum):
    EFFECTIVE = "effective"
    TABLE = "table"


DEFAULT_CONVENTION = Convention.EFFECTIVE


class Topology(IntEnum):
    """Which parties decohere: A; A and B; A, B and C."""

    ONE_SIDED = 1
    TWO_SIDED = 2
    THREE_SIDED = 3

    @property
    def parties(self) -> range:
        return range(int(self))


@dataclass(frozen=True, eq=False)
class KrausChannel:
    kind: ChannelKind
    p: float
    ops: tuple[np.ndarray, ...]
    convention: Convention = DEFAULT_CONVENTION

    def completeness_error(self) -> float:
        total = sum(dagger(k) @ k for k in self.ops)
        return float(np.max(np.abs(total - I2)))


def _diag(a: float, b: float) -> np.ndarray:
    return np.diag([a, b]).astype(complex)


def _table_ops(kind: ChannelKind, p: float) -> tuple[np.ndarray, np.ndarray]:
    s, q = math.sqrt(p), math.sqrt(1.0 - p)
    if kind is ChannelKind.AD:
        return _diag(1.0, q), np.array([[0, s], [0, 0]], dtype=complex)
    if kind is ChannelKind.PF:
        return _diag(q, -q), s * I2
    if kind is ChannelKind.BF:
        return q * X, s * I2
    return _diag(1.0, q), _diag(0.0, s)


def _effective_ops(kind: ChannelKind, p: float) -> tuple[np.ndarray, np.ndarray]:
    s, q = math.sqrt(p), math.sqrt(1.0 - p)
    if kind is ChannelKind.AD:
        return _diag(q, 1.0), np.array([[0, 0], [s, 0]], dtype=complex)
    if kind is ChannelKind.PF:
        return q * I2, s * Z
    if kind is ChannelKind.BF:
        return q * I2, s * X
    return _table_ops(kind, p)


def kraus(kind: ChannelKind | str, p: float, convention: Convention | str = DEFAULT_CONVENTION) -> KrausChannel:
    """Kraus pair ``(K0, K1)`` for a damping channel of strength ``0 <= p <= 1``."""
    kind = ChannelKind(kind)
    convention = Convention(convention)
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"decoherence strength must lie in [0, 1], got {p}")
    build = _table_ops if convention is Convention.TABLE else _effective_ops
    ops = tuple(build(kind, p))
    for k in ops:
        k.flags.writeable = False
    return KrausChannel(kind, p, ops, convention)


def apply(rho: np.ndarray, channel: KrausChannel, topology: Topology | int) -> np.ndarray:
    """Send the parties named by ``topology`` through independent copies of ``channel``."""
    topology = Topology(topology)
    for party in topology.parties:
        lifted = [embed(k, party) for k in channel.ops]
        rho = sum(k @ rho @ dagger(k) for k in lifted)
    return rho


def apply_sequence(rho: np.ndarray, steps: Sequence[tuple[KrausChannel, Topology | int]]) -> np.ndarray:
    """Apply ``(channel, topology)`` pairs left to right."""
    if not steps:
        raise ValueError("apply_sequence needs at least one (channel, topology) step")
    for channel, topology in steps:
        rho = apply(rho, channel, topology)
    return rho
