"""Pure three-qubit state families: generalised GHZ, W-class and one-parameter W-class.

Every constructor returns the 8x8 density matrix of a real, nonnegative
superposition. Basis index ``4a + 2b + c`` labels ``|abc>``.
"""

from __future__ import annotations

import math
from collections.abc import Mapping

import numpy as np

from .kernel import HERMITIAN_TOL, is_hermitian, is_psd

INV_SQRT3 = 1.0 / math.sqrt(3.0)


def projector(amplitudes: np.ndarray) -> np.ndarray:
    psi = np.asarray(amplitudes, dtype=complex)
    return np.outer(psi, psi.conj())


def gghz_ket(theta: float) -> np.ndarray:
    if not 0.0 < theta < math.pi / 2:
        raise ValueError(f"gGHZ angle must lie in (0, pi/2), got {theta}")
    psi = np.zeros(8)
    psi[0b000] = math.cos(theta)
    psi[0b111] = math.sin(theta)
    return psi


def wclass_ket(c0: float, c1: float) -> np.ndarray:
    if c0 <= 0.0 or c1 <= 0.0 or c0 * c0 + c1 * c1 >= 1.0:
        raise ValueError(f"W-class amplitudes need c0, c1 > 0 and c0^2 + c1^2 < 1, got ({c0}, {c1})")
    psi = np.zeros(8)
    psi[0b001] = c0
    psi[0b010] = c1
    psi[0b100] = math.sqrt(1.0 - c0 * c0 - c1 * c1)
    return psi


def one_param_w_ket(d0: float) -> np.ndarray:
    if not 0.0 < d0 < 1.0:
        raise ValueError(f"one-parameter W amplitude must lie in (0, 1), got {d0}")
    rest = math.sqrt((1.0 - d0 * d0) / 2.0)
    psi = np.zeros(8)
    psi[0b001] = d0
    psi[0b010] = rest
    psi[0b100] = rest
    return psi


def gghz(theta: float) -> np.ndarray:
    """cos(theta)|000> + sin(theta)|111>, for 0 < theta < pi/2."""
    return projector(gghz_ket(theta))


def wclass(c0: float, c1: float) -> np.ndarray:
    """c0|001> + c1|010> + sqrt(1 - c0^2 - c1^2)|100>."""
    return projector(wclass_ket(c0, c1))


def one_param_w(d0: float) -> np.ndarray:
    """d0|001> + sqrt((1 - d0^2)/2) (|010> + |100>)."""
    return projector(one_param_w_ket(d0))


def ghz() -> np.ndarray:
    return gghz(math.pi / 4)


def w_state() -> np.ndarray:
    return wclass(INV_SQRT3, INV_SQRT3)


# family name -> (constructor, ordered parameter names)
FAMILIES = {
    "gghz": (gghz, ("theta",)),
    "wclass": (wclass, ("c0", "c1")),
    "w1p": (one_param_w, ("d0",)),
}


def family_params(family: str) -> tuple[str, ...]:
    try:
        return FAMILIES[family][1]
    except KeyError:
        raise ValueError(f"unknown state family {family!r}; expected one of {sorted(FAMILIES)}") from None


def make_state(family: str, params: Mapping[str, float]) -> np.ndarray:
    names = family_params(family)
    missing = [n for n in names if n not in params]
    extra = [n for n in params if n not in names]
    if missing or extra:
        raise ValueError(f"family {family!r} takes parameters {names}; missing {missing}, unexpected {extra}")
    ctor = FAMILIES[family][0]
    return ctor(*(float(params[n]) for n in names))


def check_density(rho: np.ndarray, tol: float = HERMITIAN_TOL) -> None:
    """Raise ValueError unless ``rho`` is an 8x8 Hermitian, unit-trace, PSD matrix."""
    if rho.shape != (8, 8):
        raise ValueError(f"three-qubit density matrix must be 8x8, got {rho.shape}")
    if not is_hermitian(rho, tol):
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise ValueError(f"density matrix trace is {np.trace(rho).real}, expected 1")
    if not is_psd(rho, tol):
        raise ValueError("density matrix is not positive semidefinite")


def purity(rho: np.ndarray) -> float:
    return float(np.real(np.trace(rho @ rho)))


def fidelity_to_pure(rho: np.ndarray, target: np.ndarray) -> float:
    """<psi|rho|psi> where ``target`` is the projector |psi><psi|."""
    return float(np.real(np.trace(rho @ target)))
