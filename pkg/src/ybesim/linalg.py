"""Small complex linear algebra for Jones vectors and 2x2 / tensor-embedded operators.

Operators are plain ``complex128`` numpy arrays of shape ``(d, d)``; basis order is
``{|V>, |H>}`` (index 0 is vertical polarization).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

OPERATOR_ATOL = 1e-10
NORM_ATOL = 1e-12

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


def as_operator(entries, *, unitary: bool = False) -> np.ndarray:
    """Validate and return ``entries`` as a square complex matrix.

    With ``unitary=True`` the matrix must also satisfy ``M^dagger M = I`` to
    within ``OPERATOR_ATOL`` elementwise.
    """
    m = np.array(entries, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimensionError(f"operator must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("operator has non-finite entries")
    if unitary and not is_unitary(m):
        raise ValueError("operator is not unitary")
    m.setflags(write=False)
    return m


def is_unitary(m: np.ndarray, atol: float = OPERATOR_ATOL) -> bool:
    m = np.asarray(m)
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) <= atol)


@dataclass(frozen=True)
class PolarizationState:
    """Normalized Jones vector ``amp_v |V> + amp_h |H>``."""

    amp_v: complex
    amp_h: complex

    def __post_init__(self):
        v, h = complex(self.amp_v), complex(self.amp_h)
        if not (np.isfinite(v) and np.isfinite(h)):
            raise ValueError("state amplitudes must be finite")
        norm = abs(v) ** 2 + abs(h) ** 2
        if abs(norm - 1.0) > NORM_ATOL:
            raise ValueError(f"state is not normalized (|psi|^2 = {norm!r})")
        object.__setattr__(self, "amp_v", v)
        object.__setattr__(self, "amp_h", h)

    @classmethod
    def from_amplitudes(cls, amp_v: complex, amp_h: complex) -> "PolarizationState":
        """Build a state from an arbitrary nonzero pair, rescaling it to unit norm."""
        vec = np.array([amp_v, amp_h], dtype=complex)
        norm = np.linalg.norm(vec)
        if not np.isfinite(norm) or norm == 0.0:
            raise ValueError("cannot normalize a zero or non-finite vector")
        vec = vec / norm
        return cls(vec[0], vec[1])

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.amp_v, self.amp_h], dtype=complex)

    def bloch(self) -> np.ndarray:
        """Bloch vector ``(s_x, s_y, s_z)`` with ``s_z = |amp_v|^2 - |amp_h|^2``."""
        cross = np.conj(self.amp_v) * self.amp_h
        return np.array(
            [2 * cross.real, 2 * cross.imag, abs(self.amp_v) ** 2 - abs(self.amp_h) ** 2]
        )


def mat_mul(*ops: np.ndarray) -> np.ndarray:
    """Product ``ops[0] @ ops[1] @ ...`` evaluated left to right."""
    if not ops:
        raise ValueError("mat_mul needs at least one operand")

    def _mul(a, b):
        a, b = np.asarray(a), np.asarray(b)
        if a.shape != b.shape:
            raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")
        return a @ b

    return reduce(_mul, ops)


def apply(m: np.ndarray, s: PolarizationState) -> PolarizationState:
    out = np.asarray(m) @ s.vector
    return PolarizationState(out[0], out[1])


def inner(s1: PolarizationState, s2: PolarizationState) -> complex:
    """Overlap ``<s1|s2>`` (conjugate-linear in ``s1``)."""
    return complex(np.vdot(s1.vector, s2.vector))


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def dist_up_to_phase(a: np.ndarray, b: np.ndarray) -> float:
    """Max-elementwise distance between ``a`` and ``e^{i phi} b``.

    The phase is fixed from the largest-magnitude entry of ``b``, which is adequate
    for unitary operands whose entries are bounded by one.
    """
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")
    k = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    if b[k] == 0:
        raise ValueError("reference operator is identically zero")
    ratio = a[k] / b[k]
    phase = ratio / abs(ratio) if ratio != 0 else 1.0
    return float(np.max(np.abs(a - phase * b)))


def max_abs(m: np.ndarray) -> float:
    """Max-elementwise norm."""
    return float(np.max(np.abs(m)))
