"""Simulated bench: input states, both equation sides, C_YBE sweeps and scans,
and a photon-counting Monte Carlo with single-qubit tomography.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .linalg import PolarizationState, apply, inner
from .ybe import (
    angle_diff_mod_pi,
    as_triple,
    check_secant_pole,
    lhs,
    rhs,
    theta2_star_grid,
)

log = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 0.9995
SWEEP_STEP_DEG = 0.01
SCAN_STEP_DEG = 0.25
NECESSITY_TOL_DEG = 1.0

_S = 1 / math.sqrt(2)


class InputState(str, enum.Enum):
    V = "V"
    H = "H"
    D45 = "D45"
    CR = "CR"


_NAMED_STATES = {
    InputState.V: (1.0, 0.0),
    InputState.H: (0.0, 1.0),
    InputState.D45: (_S, _S),
    InputState.CR: (_S, 1j * _S),
}

# aliases used in prose and on the command line
_STATE_ALIASES = {
    "vertical": InputState.V,
    "horizontal": InputState.H,
    "diagonal45": InputState.D45,
    "circularr": InputState.CR,
}


def prepare_state(spec) -> PolarizationState:
    """Build an input state from a name (``V``, ``H``, ``D45``, ``CR``) or an amplitude pair.

    Explicit pairs are rescaled to unit norm, which absorbs rounding in amplitudes
    quoted to a few decimals.  Only the zero vector is rejected.
    """
    if isinstance(spec, PolarizationState):
        return spec
    if isinstance(spec, str):
        key = spec.strip()
        name = _STATE_ALIASES.get(key.lower())
        if name is None:
            try:
                name = InputState(key.upper())
            except ValueError:
                raise ValueError(f"unknown input state {spec!r}") from None
        return PolarizationState(*_NAMED_STATES[name])
    amp_v, amp_h = spec
    norm2 = abs(complex(amp_v)) ** 2 + abs(complex(amp_h)) ** 2
    if abs(norm2 - 1.0) > 1e-9:
        log.debug("renormalizing input state with |psi|^2 = %.12g", norm2)
    return PolarizationState.from_amplitudes(amp_v, amp_h)


@dataclass(frozen=True)
class ProbeSet:
    states: tuple[PolarizationState, ...]

    def __post_init__(self):
        states = tuple(prepare_state(s) for s in self.states)
        if not states:
            raise ValueError("probe set is empty")
        object.__setattr__(self, "states", states)

    @classmethod
    def default(cls) -> "ProbeSet":
        """``{|V>, |D45>, |CR>}``: three mutually unbiased directions."""
        return cls(tuple(prepare_state(n) for n in (InputState.V, InputState.D45, InputState.CR)))

    def __len__(self) -> int:
        return len(self.states)

    def as_array(self) -> np.ndarray:
        return np.array([s.vector for s in self.states])

    def is_certifying(self) -> bool:
        """True when two probes have non-collinear Bloch vectors.

        Unit fidelity on two such probes makes both eigenvectors of ``lhs^dagger rhs``
        without being orthogonal, which forces a multiple of the identity.
        """
        vecs = [s.bloch() for s in self.states]
        return any(
            np.linalg.norm(np.cross(a, b)) > 1e-6
            for i, a in enumerate(vecs)
            for b in vecs[i + 1:]
        )


def _probes(probes) -> ProbeSet:
    if probes is None:
        return ProbeSet.default()
    if isinstance(probes, ProbeSet):
        return probes
    if isinstance(probes, PolarizationState):
        return ProbeSet((probes,))
    return ProbeSet(tuple(probes))


def output_states(
    t: Sequence[float], state: PolarizationState
) -> tuple[PolarizationState, PolarizationState]:
    """States leaving the left- and right-hand plate trains."""
    t = as_triple(t)
    return apply(lhs(t), state), apply(rhs(t), state)


def fidelity_cybe(left: PolarizationState, right: PolarizationState) -> float:
    return min(abs(inner(left, right)), 1.0)


def probe_fidelities(t: Sequence[float], probes=None) -> np.ndarray:
    """C_YBE for every probe at a single triple."""
    return np.array(
        [fidelity_cybe(*output_states(t, p)) for p in _probes(probes).states]
    )


def angle_grid(step_deg: float, start_deg: float = 0.0, stop_deg: float = 180.0) -> np.ndarray:
    """Uniform grid in radians over ``[start, stop)`` with the given pitch in degrees."""
    if not step_deg > 0:
        raise ValueError("grid pitch must be positive")
    n = int(math.floor((stop_deg - start_deg) / step_deg + 1e-9))
    if (stop_deg - start_deg) / step_deg - n > 1e-9:
        n += 1
    return np.radians(start_deg + step_deg * np.arange(n))


@dataclass(frozen=True)
class SweepRecord:
    theta2: float
    fidelity_per_probe: tuple[float, ...]
    fidelity_min: float


def sweep_theta2(
    theta1: float, theta3: float, grid=None, probes=None
) -> list[SweepRecord]:
    """C_YBE as a function of the middle angle with the outer two held fixed.

    Raises:
        SecantPoleError: if ``(theta1, theta3)`` sits on the constraint pole.
    """
    check_secant_pole(theta1, theta3)
    grid = angle_grid(SWEEP_STEP_DEG) if grid is None else np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("sweep grid is empty")
    pset = _probes(probes)
    fid = kernels.fidelity_grid([theta1], grid, theta3, pset.as_array())[:, 0, :]
    fid = np.minimum(fid, 1.0)
    fmin = fid.min(axis=1)
    return [
        SweepRecord(float(t2), tuple(float(f) for f in row), float(m))
        for t2, row, m in zip(grid, fid, fmin)
    ]


@dataclass(frozen=True)
class ScanRecord:
    theta3: float
    theta1: float
    theta2_found: float
    theta2_predicted: float
    deviation_mod_pi: float


def _is_full_period(grid: np.ndarray) -> bool:
    if grid.size < 3:
        return False
    step = np.diff(grid)
    return bool(np.allclose(step, step[0], atol=1e-12) and abs(grid[-1] + step[0] - grid[0] - np.pi) < 1e-9)


def _row_peaks(f: np.ndarray, periodic: bool) -> np.ndarray:
    """Mask of local maxima along the last axis (first of a flat top wins).

    On a non-periodic grid the end points are never maxima: the true peak may lie
    outside the window.
    """
    if periodic:
        left, right = np.roll(f, 1, axis=-1), np.roll(f, -1, axis=-1)
    else:
        pad = np.full(f.shape[:-1] + (1,), np.inf)
        left = np.concatenate([pad, f[..., :-1]], axis=-1)
        right = np.concatenate([f[..., 1:], pad], axis=-1)
    return (f > left) & (f >= right)


def necessity_scan(
    theta3: float,
    theta2_grid=None,
    theta1_grid=None,
    threshold: float = DEFAULT_THRESHOLD,
    probes=None,
    peaks_only: bool = True,
) -> list[ScanRecord]:
    """Find every ``(theta1, theta2)`` with C_YBE above ``threshold`` at fixed ``theta3``.

    For each ``theta2`` row, ``theta1`` is tuned across its grid and the fidelity
    maxima that clear the threshold are kept; ``peaks_only=False`` keeps every grid
    point above the threshold instead.  Each survivor is compared with the
    predicted middle angle modulo pi.  The prediction is continued through the
    secant pole by its limit ``pi/2``.
    """
    if not 0.0 < threshold < 1.0:
        raise ValueError("threshold must lie in (0, 1)")
    t2 = angle_grid(SCAN_STEP_DEG) if theta2_grid is None else np.asarray(theta2_grid, dtype=float)
    t1 = angle_grid(SCAN_STEP_DEG) if theta1_grid is None else np.asarray(theta1_grid, dtype=float)
    if t1.size == 0 or t2.size == 0:
        raise ValueError("scan grids must be non-empty")
    pset = _probes(probes)
    if not pset.is_certifying():
        raise ValueError("necessity scan needs a certifying probe set")

    fmin = kernels.fidelity_grid(t1, t2, theta3, pset.as_array()).min(axis=-1)
    keep = fmin > threshold
    if peaks_only:
        keep &= _row_peaks(fmin, _is_full_period(t1))
    i2, i1 = np.nonzero(keep)
    pred = theta2_star_grid(t1, theta3)
    dev = angle_diff_mod_pi(t2[i2], pred[i1])
    return [
        ScanRecord(float(theta3), float(t1[j]), float(t2[i]), float(pred[j]), float(d))
        for i, j, d in zip(i2, i1, dev)
    ]


def implied_tolerance_deg(pitch_deg: float) -> float:
    """Default necessity tolerance for a scan pitch, in degrees.

    A row maximum is quantized to half a pitch in theta1, and the predicted curve
    climbs up to about five times faster than theta1; with half a pitch more from
    the theta2 grid that is about three pitches.  Never below one degree.
    """
    return max(NECESSITY_TOL_DEG, 4.0 * pitch_deg)


class NecessityViolation(RuntimeError):
    def __init__(self, violations: list[ScanRecord], tolerance: float):
        self.violations = violations
        self.tolerance = tolerance
        worst = max(r.deviation_mod_pi for r in violations)
        super().__init__(
            f"{len(violations)} scan survivors deviate from the predicted theta2 by more than "
            f"{math.degrees(tolerance):.4f} deg (worst {math.degrees(worst):.4f} deg)"
        )


def necessity_violations(
    records: Sequence[ScanRecord], tolerance: float = math.radians(NECESSITY_TOL_DEG)
) -> list[ScanRecord]:
    return [r for r in records if r.deviation_mod_pi > tolerance]


def check_necessity(
    records: Sequence[ScanRecord], tolerance: float = math.radians(NECESSITY_TOL_DEG)
) -> None:
    bad = necessity_violations(records, tolerance)
    if bad:
        raise NecessityViolation(bad, tolerance)


# --- photon counting -------------------------------------------------------


class MeasurementBasis(str, enum.Enum):
    HV = "HV"
    DIAG = "Diag"
    CIRC = "Circ"


# "+" outcome of each analyzer setting and the Bloch component it measures
_ANALYZER_PLUS = {
    MeasurementBasis.HV: (np.array([1.0, 0.0], dtype=complex), 2),
    MeasurementBasis.DIAG: (np.array([_S, _S], dtype=complex), 0),
    MeasurementBasis.CIRC: (np.array([_S, 1j * _S], dtype=complex), 1),
}


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def simulate_counts(
    state: PolarizationState, basis: MeasurementBasis | str, n: int, seed=None
) -> tuple[int, int]:
    """Binomial detector tallies ``(plus, minus)`` for ``n`` photons in one analyzer setting."""
    if n < 1:
        raise ValueError("need at least one photon")
    plus_vec, _ = _ANALYZER_PLUS[MeasurementBasis(basis)]
    p = min(max(abs(np.vdot(plus_vec, state.vector)) ** 2, 0.0), 1.0)
    k = int(_rng(seed).binomial(n, p))
    return k, n - k


def tomography_estimate(counts: Mapping) -> PolarizationState:
    """Linear-inversion estimate projected onto the pure states.

    ``counts`` maps each of the three bases to a ``(plus, minus)`` pair.  The
    returned state has a real, non-negative vertical amplitude.  A reconstructed
    Bloch vector of length zero carries no direction, and ``|V>`` is returned.
    """
    bloch = np.zeros(3)
    for basis in MeasurementBasis:
        try:
            plus, minus = counts[basis] if basis in counts else counts[basis.value]
        except KeyError:
            raise ValueError(f"missing counts for basis {basis.value}") from None
        total = plus + minus
        if total <= 0:
            raise ValueError(f"no counts recorded in basis {basis.value}")
        bloch[_ANALYZER_PLUS[basis][1]] = (plus - minus) / total
    r = np.linalg.norm(bloch)
    if r == 0.0:
        return PolarizationState(1.0, 0.0)
    sx, sy, sz = bloch / r
    amp_v = math.sqrt(max(0.0, (1 + sz) / 2))
    amp_h = math.sqrt(max(0.0, (1 - sz) / 2)) * complex(np.exp(1j * math.atan2(sy, sx)))
    return PolarizationState.from_amplitudes(amp_v, amp_h)


@dataclass(frozen=True)
class MonteCarloConfig:
    photons_per_basis: int
    seed: int = 0
    trials: int = 100

    def __post_init__(self):
        if self.photons_per_basis < 1:
            raise ValueError("photons_per_basis must be >= 1")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


@dataclass(frozen=True)
class McEstimate:
    fidelity_mean: float
    fidelity_std: float
    counts_summary: dict = field(default_factory=dict)
    fidelities: tuple[float, ...] = ()


def montecarlo_cybe(
    t: Sequence[float], state: PolarizationState, cfg: MonteCarloConfig
) -> McEstimate:
    """Repeat the counting experiment on both arms and summarize C_YBE over trials.

    Trial ``i`` draws from its own generator seeded by ``(cfg.seed, i)``, so the
    result does not depend on evaluation order.
    """
    left, right = output_states(t, state)
    n = cfg.photons_per_basis
    tallies = {
        arm: {b.value: [0, 0] for b in MeasurementBasis} for arm in ("lhs", "rhs")
    }
    fids = np.empty(cfg.trials)
    for i in range(cfg.trials):
        rng = np.random.default_rng([cfg.seed, i])
        est = []
        for arm, out in (("lhs", left), ("rhs", right)):
            counts = {}
            for basis in MeasurementBasis:
                counts[basis] = simulate_counts(out, basis, n, rng)
                tallies[arm][basis.value][0] += counts[basis][0]
                tallies[arm][basis.value][1] += counts[basis][1]
            est.append(tomography_estimate(counts))
        fids[i] = fidelity_cybe(*est)
    std = float(fids.std(ddof=1)) if cfg.trials > 1 else 0.0
    summary = {
        arm: {b: tuple(v) for b, v in per.items()} for arm, per in tallies.items()
    }
    return McEstimate(float(fids.mean()), std, summary, tuple(float(f) for f in fids))


__all__ = [
    "DEFAULT_THRESHOLD",
    "InputState",
    "McEstimate",
    "MeasurementBasis",
    "MonteCarloConfig",
    "NecessityViolation",
    "ProbeSet",
    "ScanRecord",
    "SweepRecord",
    "angle_grid",
    "check_necessity",
    "fidelity_cybe",
    "montecarlo_cybe",
    "necessity_scan",
    "implied_tolerance_deg",
    "necessity_violations",
    "output_states",
    "prepare_state",
    "probe_fidelities",
    "simulate_counts",
    "sweep_theta2",
    "tomography_estimate",
]
