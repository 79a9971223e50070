"""Jones matrices of quarter- and half-wave plates and the plate trains realizing A, B.

Plate axes are measured from the vertical.  A sequence lists plates in the order
the photon meets them, so the first plate is the rightmost matrix factor.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .ybe import as_triple

_SQRT1_2 = 1 / math.sqrt(2)


class _Caseless(str, enum.Enum):
    @classmethod
    def _missing_(cls, value):
        for member in cls:
            if isinstance(value, str) and member.value.lower() == value.lower():
                return member
        return None


class PlateKind(_Caseless):
    QWP = "QWP"
    HWP = "HWP"


class Side(_Caseless):
    LHS = "lhs"
    RHS = "rhs"


def u_Q(axis: float) -> np.ndarray:
    c, s = math.cos(2 * axis), math.sin(2 * axis)
    return _SQRT1_2 * np.array([[1 - 1j * c, -1j * s], [-1j * s, 1 + 1j * c]])


def u_H(axis: float) -> np.ndarray:
    c, s = math.cos(2 * axis), math.sin(2 * axis)
    return -1j * np.array([[c, s], [s, -c]], dtype=complex)


@dataclass(frozen=True)
class WavePlate:
    kind: PlateKind
    axis: float

    def __post_init__(self):
        object.__setattr__(self, "kind", PlateKind(self.kind))
        if not math.isfinite(self.axis):
            raise ValueError("plate axis must be finite")

    def matrix(self) -> np.ndarray:
        return u_Q(self.axis) if self.kind is PlateKind.QWP else u_H(self.axis)


@dataclass(frozen=True)
class WavePlateSequence:
    elements: tuple[WavePlate, ...]

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __add__(self, other: "WavePlateSequence") -> "WavePlateSequence":
        """Concatenate: ``self`` is traversed first, then ``other``."""
        return WavePlateSequence(self.elements + other.elements)

    def to_text(self) -> str:
        """One plate per line: ``<kind> <axis in degrees, 4 decimals>``."""
        return "".join(f"{p.kind.value} {math.degrees(p.axis):.4f}\n" for p in self.elements)

    @classmethod
    def from_text(cls, text: str) -> "WavePlateSequence":
        plates = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                kind, axis = line.split()
                plates.append(WavePlate(PlateKind(kind), math.radians(float(axis))))
            except ValueError as exc:
                raise ValueError(f"line {lineno}: cannot parse plate {line!r}") from exc
        return cls(tuple(plates))


def _seq(plates: Iterable[tuple[PlateKind, float]]) -> WavePlateSequence:
    return WavePlateSequence(tuple(WavePlate(k, a) for k, a in plates))


def decompose_A(theta: float) -> WavePlateSequence:
    """``U_Q(pi/4) U_H(theta/2 - pi/4) U_Q(pi/4)``, exact with no leftover phase."""
    return _seq(
        [
            (PlateKind.QWP, math.pi / 4),
            (PlateKind.HWP, -math.pi / 4 + theta / 2),
            (PlateKind.QWP, math.pi / 4),
        ]
    )


def decompose_B(theta: float) -> WavePlateSequence:
    """``U_Q(pi/2) U_H(theta/2) U_Q(pi/2)``."""
    return _seq(
        [
            (PlateKind.QWP, math.pi / 2),
            (PlateKind.HWP, theta / 2),
            (PlateKind.QWP, math.pi / 2),
        ]
    )


def evaluate_sequence(seq: WavePlateSequence) -> np.ndarray:
    if len(seq) == 0:
        raise ValueError("cannot evaluate an empty plate sequence")
    m = np.eye(2, dtype=complex)
    for plate in seq:
        m = plate.matrix() @ m
    return m


def sequence_side(t: Sequence[float], side: Side | str) -> WavePlateSequence:
    """Nine-plate train for one side of the equation, in traversal order."""
    t = as_triple(t)
    side = Side(side)
    if side is Side.LHS:
        # A(t1) B(t2) A(t3): the photon meets A(t3) first
        return decompose_A(t.theta3) + decompose_B(t.theta2) + decompose_A(t.theta1)
    return decompose_B(t.theta1) + decompose_A(t.theta2) + decompose_B(t.theta3)

