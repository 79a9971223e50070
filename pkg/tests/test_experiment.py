import math

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import DEG, away_from_pole, state_vectors
from ybesim.experiment import (
    MeasurementBasis,
    MonteCarloConfig,
    NecessityViolation,
    ProbeSet,
    angle_grid,
    check_necessity,
    fidelity_cybe,
    montecarlo_cybe,
    necessity_scan,
    output_states,
    prepare_state,
    probe_fidelities,
    simulate_counts,
    sweep_theta2,
    tomography_estimate,
)
from ybesim.linalg import PolarizationState, dist_up_to_phase
from ybesim.ybe import SecantPoleError, angle_diff_mod_pi, lhs, rhs, theta2_star

S2 = 1 / math.sqrt(2)
V = PolarizationState(1, 0)
H = PolarizationState(0, 1)
FIG5 = (0.7071 - 0.5417j, -0.4545j)
MANIFOLD = (56 * DEG, theta2_star(56 * DEG, 23 * DEG), 23 * DEG)
OFF_MANIFOLD = (56 * DEG, 30 * DEG, 23 * DEG)


def exact_counts(state, n=1000):
    """Noise-free tallies: n times the Born probabilities."""
    out = {}
    for basis, plus in ((MeasurementBasis.HV, [1, 0]), (MeasurementBasis.DIAG, [S2, S2]),
                        (MeasurementBasis.CIRC, [S2, 1j * S2])):
        p = abs(np.vdot(plus, state.vector)) ** 2
        out[basis] = (n * p, n * (1 - p))
    return out


def trace_distance(a, b):
    return math.sqrt(max(0.0, 1 - abs(np.vdot(a.vector, b.vector)) ** 2))


# --- states and fidelity ----------------------------------------------------


def test_prepare_state_examples():
    assert prepare_state("V") == V
    assert prepare_state("Vertical") == V
    assert prepare_state("H") == H
    d = prepare_state("D45")
    assert (d.amp_v, d.amp_h) == pytest.approx((S2, S2))
    cr = prepare_state("CircularR")
    assert cr.amp_h == pytest.approx(1j * S2)


def test_prepare_state_paper_input_is_renormalized():
    raw_norm = math.sqrt(sum(abs(a) ** 2 for a in FIG5))
    assert raw_norm == pytest.approx(1.0, abs=1e-4)
    s = prepare_state(FIG5)
    assert np.linalg.norm(s.vector) == pytest.approx(1.0, abs=1e-15)
    assert s.amp_v == pytest.approx(FIG5[0] / raw_norm)


def test_prepare_state_errors():
    with pytest.raises(ValueError):
        prepare_state((0, 0))
    with pytest.raises(ValueError):
        prepare_state("diagonal-ish")


def test_output_states_examples():
    s = prepare_state("D45")
    left, right = output_states((0, 0, 0), s)
    assert left == s and right == s
    left, right = output_states((56 * DEG, 49.49 * DEG, 23 * DEG), V)
    assert fidelity_cybe(left, right) == pytest.approx(1, abs=5e-4)
    left, right = output_states((56 * DEG, 0, 23 * DEG), V)
    assert fidelity_cybe(left, right) < 1


def test_fidelity_examples():
    assert fidelity_cybe(V, V) == 1
    assert fidelity_cybe(V, H) == 0
    assert fidelity_cybe(V, PolarizationState(np.exp(0.7j), 0)) == pytest.approx(1)


def test_probe_set():
    assert ProbeSet.default().is_certifying()
    assert not ProbeSet((V, H)).is_certifying()
    assert not ProbeSet((V,)).is_certifying()
    with pytest.raises(ValueError):
        ProbeSet(())


def test_certificate_iff_operator_equality(rng):
    """fidelity_min == 1 over the default probes exactly when lhs == rhs up to phase."""
    agree = 0
    for k in range(1000):
        t1, t3 = rng.uniform(0, math.pi, 2)
        if not away_from_pole(t1, t3):
            continue
        t2 = theta2_star(t1, t3) if k % 2 == 0 else rng.uniform(0, math.pi)
        t = (t1, t2, t3)
        certified = probe_fidelities(t).min() > 1 - 1e-9
        equal = dist_up_to_phase(lhs(t), rhs(t)) < 1e-7
        assert certified == equal
        agree += certified
    assert 450 < agree < 550


# --- sweeps -------------------------------------------------------------------


def test_sweep_vertical_input_peak():
    recs = sweep_theta2(56 * DEG, 23 * DEG, probes=[V])
    assert len(recs) == 18000
    best = max(recs, key=lambda r: r.fidelity_min)
    assert math.degrees(best.theta2) == pytest.approx(49.49, abs=0.005 + 0.01)


def test_sweep_elliptical_input_peak():
    recs = sweep_theta2(56 * DEG, 23 * DEG, probes=[prepare_state(FIG5)])
    best = max(recs, key=lambda r: r.fidelity_min)
    assert math.degrees(best.theta2) == pytest.approx(49.49, abs=0.015)


def test_sweep_trivial():
    recs = sweep_theta2(0, 0, angle_grid(1.0))
    assert recs[0].theta2 == 0
    assert recs[0].fidelity_per_probe == pytest.approx((1, 1, 1), abs=1e-15)


def test_sweep_record_fields():
    recs = sweep_theta2(0.3, 0.4, angle_grid(10.0))
    for r in recs:
        assert len(r.fidelity_per_probe) == 3
        assert r.fidelity_min == min(r.fidelity_per_probe)
        assert all(0 <= f <= 1 + 1e-12 for f in r.fidelity_per_probe)


def test_sweep_rejects_pole_and_empty_grid():
    with pytest.raises(SecantPoleError):
        sweep_theta2(122 * DEG, 32 * DEG)
    with pytest.raises(ValueError):
        sweep_theta2(0.1, 0.2, [])


def test_sweep_maxima_track_prediction(rng):
    grid = angle_grid(0.01)
    step = 0.01 * DEG
    checked = 0
    while checked < 100:
        t1, t3 = rng.uniform(0, math.pi, 2)
        if not away_from_pole(t1, t3):
            continue
        recs = sweep_theta2(t1, t3, grid)
        best = max(recs, key=lambda r: r.fidelity_min)
        assert angle_diff_mod_pi(best.theta2, theta2_star(t1, t3)) <= step + 1e-12
        checked += 1


def test_horizontal_and_vertical_inputs_agree():
    a = sweep_theta2(56 * DEG, 23 * DEG, probes=[V])
    b = sweep_theta2(56 * DEG, 23 * DEG, probes=[H])
    fa = np.array([r.fidelity_min for r in a])
    fb = np.array([r.fidelity_min for r in b])
    assert np.max(np.abs(fa - fb)) < 1e-12


def test_angle_grid():
    g = angle_grid(0.25)
    assert g.size == 720 and g[0] == 0 and g[-1] == pytest.approx(179.75 * DEG)
    assert angle_grid(7.0).size == 26  # last point 175 deg
    with pytest.raises(ValueError):
        angle_grid(0)


# --- necessity scan ----------------------------------------------------------------


@pytest.mark.parametrize("theta3_deg", [32, 56, 146])
def test_scan_survivors_follow_prediction(theta3_deg):
    recs = necessity_scan(theta3_deg * DEG)
    assert len(recs) >= 700
    check_necessity(recs)
    assert max(r.deviation_mod_pi for r in recs) < 1 * DEG


def test_scan_origin_survives():
    recs = necessity_scan(0.0)
    hits = [r for r in recs if r.theta1 == 0]
    assert hits and abs(hits[0].theta2_found) < 1e-12


def test_scan_band_mode_is_superset():
    g = angle_grid(1.0)
    peaks = necessity_scan(32 * DEG, g, g)
    band = necessity_scan(32 * DEG, g, g, peaks_only=False)
    key = lambda r: (r.theta1, r.theta2_found)
    assert {key(r) for r in peaks} <= {key(r) for r in band}
    assert len(band) > len(peaks)


def test_scan_record_invariants():
    recs = necessity_scan(56 * DEG, angle_grid(2.0), angle_grid(2.0), peaks_only=False)
    for r in recs:
        assert 0 <= r.deviation_mod_pi <= math.pi / 2
        assert 0 <= r.theta2_predicted < math.pi


def test_scan_flags_violations():
    # a loose threshold lets the whole fidelity band through
    recs = necessity_scan(32 * DEG, threshold=0.9, peaks_only=False)
    with pytest.raises(NecessityViolation) as exc:
        check_necessity(recs)
    assert exc.value.violations


def test_scan_argument_errors():
    with pytest.raises(ValueError):
        necessity_scan(0.1, threshold=1.0)
    with pytest.raises(ValueError):
        necessity_scan(0.1, [], angle_grid(1.0))
    with pytest.raises(ValueError):
        necessity_scan(0.1, probes=[V])


def test_scan_partial_grid_is_not_wrapped():
    g = angle_grid(0.5, 40.0, 60.0)
    recs = necessity_scan(23 * DEG, angle_grid(0.5), g)
    assert all(40 * DEG - 1e-12 <= r.theta1 < 60 * DEG for r in recs)
    check_necessity(recs)


# --- counts, tomography, Monte Carlo ------------------------------------------------


def test_simulate_counts_examples():
    assert simulate_counts(V, "HV", 777, seed=1) == (777, 0)
    n = 10**6
    plus, minus = simulate_counts(prepare_state("D45"), MeasurementBasis.HV, n, seed=3)
    assert plus + minus == n
    assert abs(plus / n - 0.5) < 5 * 0.5 / 1000
    assert simulate_counts(prepare_state("CR"), "Circ", 500, seed=0) == (500, 0)


def test_simulate_counts_deterministic():
    s = prepare_state(FIG5)
    assert simulate_counts(s, "Diag", 1000, 42) == simulate_counts(s, "Diag", 1000, 42)
    with pytest.raises(ValueError):
        simulate_counts(s, "Diag", 0, 1)


def test_tomography_examples():
    assert tomography_estimate(exact_counts(V)) == V
    d = tomography_estimate(exact_counts(prepare_state("D45")))
    assert (d.amp_v, d.amp_h) == pytest.approx((S2, S2), abs=1e-12)
    with pytest.raises(ValueError):
        tomography_estimate({"HV": (0, 0), "Diag": (1, 0), "Circ": (1, 0)})
    with pytest.raises(ValueError):
        tomography_estimate({"HV": (1, 0)})


@settings(max_examples=50)
@given(state_vectors())
def test_tomography_recovers_state_up_to_phase(v):
    s = PolarizationState(*v)
    est = tomography_estimate(exact_counts(s))
    assert abs(abs(np.vdot(est.vector, s.vector)) - 1) < 1e-9
    assert est.amp_v.imag == 0 and est.amp_v.real >= 0


def test_tomography_noise_calibration(rng):
    n, runs = 10**5, 200
    good = 0
    for k in range(runs):
        truth = PolarizationState.from_amplitudes(*(rng.normal(size=2) + 1j * rng.normal(size=2)))
        gen = np.random.default_rng([7, k])
        counts = {b: simulate_counts(truth, b, n, gen) for b in MeasurementBasis}
        good += trace_distance(tomography_estimate(counts), truth) < 0.01
    assert good / runs >= 0.99


def test_montecarlo_on_manifold():
    est = montecarlo_cybe((56 * DEG, 49.49 * DEG, 23 * DEG), V, MonteCarloConfig(10**5, 1, 100))
    assert abs(est.fidelity_mean - 1) < 0.01
    assert 0 <= est.fidelity_mean <= 1 + 3 * est.fidelity_std
    assert est.counts_summary["lhs"]["HV"][0] + est.counts_summary["lhs"]["HV"][1] == 10**7


def test_montecarlo_single_photon_runs():
    est = montecarlo_cybe(MANIFOLD, V, MonteCarloConfig(1, 5, 50))
    assert all(0 <= f <= 1 for f in est.fidelities)


def test_montecarlo_deterministic():
    cfg = MonteCarloConfig(1000, 9, 20)
    assert montecarlo_cybe(OFF_MANIFOLD, V, cfg) == montecarlo_cybe(OFF_MANIFOLD, V, cfg)
    other = montecarlo_cybe(OFF_MANIFOLD, V, MonteCarloConfig(1000, 10, 20))
    assert other.fidelities != montecarlo_cybe(OFF_MANIFOLD, V, cfg).fidelities


def test_montecarlo_config_validation():
    for bad in ((0, 1, 1), (10, 1, 0), (10, -1, 1)):
        with pytest.raises(ValueError):
            MonteCarloConfig(*bad)


def _std(t, n, trials=200, seed=11):
    return montecarlo_cybe(t, V, MonteCarloConfig(n, seed, trials)).fidelity_std


def test_montecarlo_off_manifold_std_scales_as_inverse_sqrt_n():
    ratio = _std(OFF_MANIFOLD, 10**4) / _std(OFF_MANIFOLD, 10**6)
    assert 5 < ratio < 20
    ns = [10**3, 10**4, 10**5]
    slope = np.polyfit(np.log10(ns), np.log10([_std(OFF_MANIFOLD, n) for n in ns]), 1)[0]
    assert slope == pytest.approx(-0.5, abs=0.1)


def test_montecarlo_on_manifold_std_is_quadratic_in_noise():
    # at the fidelity maximum 1 - C is second order in the Bloch-vector noise
    ratio = _std(MANIFOLD, 10**4) / _std(MANIFOLD, 10**6)
    assert 50 < ratio < 200


def test_montecarlo_mean_converges_to_noiseless_value():
    noiseless = fidelity_cybe(*output_states(OFF_MANIFOLD, V))
    gaps = [
        abs(montecarlo_cybe(OFF_MANIFOLD, V, MonteCarloConfig(n, 3, 100)).fidelity_mean - noiseless)
        for n in (10**3, 10**6)
    ]
    assert gaps[1] < gaps[0]
    assert gaps[1] < 1e-4
