"""Dense complex linear algebra for single-qubit operators and three-qubit states.

Matrices are plain numpy ``complex128`` arrays. Qubit order is fixed as
Alice (most significant) ⊗ Bob ⊗ Charlie (least significant).
"""

from __future__ import annotations

from functools import lru_cache, reduce

import numpy as np

HERMITIAN_TOL = 1e-10
ATOL = 1e-9
N_PARTIES = 3
PARTIES = ("A", "B", "C")


def _frozen(m) -> np.ndarray:
    a = np.array(m, dtype=complex)
    a.flags.writeable = False
    return a


I2 = _frozen(np.eye(2))
X = _frozen([[0, 1], [1, 0]])
Y = _frozen([[0, -1j], [1j, 0]])
Z = _frozen([[1, 0], [0, -1]])

PAULI = {"I": I2, "X": X, "Y": Y, "Z": Z}


def tensor(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product, leftmost factor on the most significant index."""
    if not ops:
        raise ValueError("tensor() needs at least one operand")
    return reduce(np.kron, ops)


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def _check_square(m: np.ndarray) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    _check_square(m)
    return bool(np.max(np.abs(m - dagger(m)), initial=0.0) <= tol)


def is_psd(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    """True iff every eigenvalue of the Hermitian matrix ``m`` is >= -tol.

    Raises ValueError for non-Hermitian input.
    """
    if not is_hermitian(m, tol):
        raise ValueError("is_psd requires a Hermitian matrix")
    herm = 0.5 * (m + dagger(m))
    return bool(np.linalg.eigvalsh(herm).min() >= -tol)


def embed(op: np.ndarray, party: int, n: int = N_PARTIES) -> np.ndarray:
    """Place a 2x2 operator on ``party`` with identities on all other qubits."""
    if not 0 <= party < n:
        raise ValueError(f"party index {party} out of range for {n} qubits")
    factors = [I2] * n
    factors[party] = op
    return tensor(*factors)


def sandwich(op: np.ndarray, rho: np.ndarray) -> np.ndarray:
    return op @ rho @ dagger(op)


@lru_cache(maxsize=None)
def pauli_string(label: str) -> np.ndarray:
    """Read-only operator for a label such as ``"XIZ"`` (one letter per qubit)."""
    try:
        op = tensor(*(PAULI[ch] for ch in label))
    except KeyError as exc:
        raise ValueError(f"invalid Pauli label {label!r}") from exc
    op.flags.writeable = False
    return op
