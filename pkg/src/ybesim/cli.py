"""Command-line interface.  Angles are degrees here and radians everywhere else."""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import csvio, kernels
from .experiment import (
    DEFAULT_THRESHOLD,
    SCAN_STEP_DEG,
    SWEEP_STEP_DEG,
    MonteCarloConfig,
    ProbeSet,
    angle_grid,
    implied_tolerance_deg,
    montecarlo_cybe,
    necessity_scan,
    necessity_violations,
    prepare_state,
    probe_fidelities,
    sweep_theta2,
)
from .linalg import dist_up_to_phase, max_abs
from .optics import evaluate_sequence, sequence_side
from .ybe import (
    AngleTriple,
    CompositionPoleError,
    SecantPoleError,
    braid_point_residual,
    tensor_lifted_braid_residual,
    constraint_residual,
    lhs,
    op_A,
    op_B,
    rhs,
    spectral_triple,
    theta2_star,
    wrap_pi,
)

EXIT_USAGE = 2
EXIT_VIOLATION = 3


def _finite(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"must be finite: {text!r}")
    return x


def _positive(text: str) -> float:
    x = _finite(text)
    if x <= 0:
        raise argparse.ArgumentTypeError(f"must be > 0: {text!r}")
    return x


def _unit_open(text: str) -> float:
    x = _finite(text)
    if not 0 < x < 1:
        raise argparse.ArgumentTypeError(f"must lie in (0, 1): {text!r}")
    return x


def _count(text: str) -> int:
    try:
        n = int(float(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1 or n != float(text):
        raise argparse.ArgumentTypeError(f"must be a positive integer: {text!r}")
    return n


def _seed(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {text!r}")
    return n


def _input_state(text: str):
    if "," in text:
        parts = text.split(",")
        if len(parts) != 4:
            raise argparse.ArgumentTypeError(f"expected 're,im,re,im', got {text!r}")
        vr, vi, hr, hi = (_finite(p) for p in parts)
        try:
            return prepare_state((complex(vr, vi), complex(hr, hi)))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    try:
        return prepare_state(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _triple(args) -> AngleTriple:
    return AngleTriple.from_degrees(args.theta1, args.theta2, args.theta3)


def _fmt_state(s) -> str:
    return f"({s.amp_v.real:+.4f}{s.amp_v.imag:+.4f}j, {s.amp_h.real:+.4f}{s.amp_h.imag:+.4f}j)"


def cmd_check(args) -> int:
    t = _triple(args)
    L, R = lhs(t), rhs(t)
    print(f"operator distance (elementwise): {max_abs(L - R):.3e}")
    print(f"operator distance (up to phase): {dist_up_to_phase(L, R):.3e}")
    print(f"constraint residual |r|: {abs(constraint_residual(t)):.3e}")
    probes = ProbeSet.default()
    if args.input is not None:
        probes = ProbeSet(probes.states + (args.input,))
    for k, (s, f) in enumerate(zip(probes.states, probe_fidelities(t, probes))):
        print(f"C_YBE probe{k} {_fmt_state(s)}: {f:.10f}")
    return 0


def cmd_solve(args) -> int:
    t2 = theta2_star(math.radians(args.theta1), math.radians(args.theta3))
    print(f"{math.degrees(t2):.2f}")
    return 0


def cmd_sweep(args) -> int:
    t1, t3 = math.radians(args.theta1), math.radians(args.theta3)
    probes = ProbeSet((args.input,)) if args.input is not None else ProbeSet.default()
    recs = sweep_theta2(t1, t3, angle_grid(args.grid), probes)
    csvio.write_text(args.out, csvio.format_sweep(t1, t3, recs))
    best = max(recs, key=lambda r: r.fidelity_min)
    print(f"wrote {len(recs)} rows to {args.out}")
    print(f"max C_YBE {best.fidelity_min:.10f} at theta2 = {math.degrees(best.theta2):.2f}")
    return 0


def cmd_scan(args) -> int:
    grid = angle_grid(args.grid)
    tol_deg = implied_tolerance_deg(args.grid) if args.tolerance is None else args.tolerance
    tol = math.radians(tol_deg)
    records, status = [], 0
    for t3_deg in args.theta3:
        recs = necessity_scan(
            math.radians(t3_deg), grid, grid, args.threshold, peaks_only=not args.all
        )
        bad = necessity_violations(recs, tol)
        worst = max((r.deviation_mod_pi for r in recs), default=0.0)
        print(
            f"theta3 = {t3_deg:.2f}: {len(recs)} survivors, worst deviation "
            f"{math.degrees(worst):.4f} deg, {len(bad)} violations"
        )
        if bad:
            status = EXIT_VIOLATION
        records.extend(recs)
    csvio.write_text(args.out, csvio.format_scan(records))
    print(f"wrote {len(records)} rows to {args.out}")
    if status:
        print("necessity violated", file=sys.stderr)
    return status


def cmd_spectral(args) -> int:
    t, x23 = spectral_triple(args.xu, args.xv, args.epsilon)
    d1, d2, d3 = (math.degrees(wrap_pi(a)) for a in t)
    print(f"x23 = {x23:.12g}")
    print(f"theta1 = {d1:.4f}  theta2 = {d2:.4f}  theta3 = {d3:.4f}")
    try:
        pred = math.degrees(theta2_star(t.theta1, t.theta3))
        print(f"theta2_star(theta1, theta3) = {pred:.4f}")
    except SecantPoleError:
        print("theta2_star(theta1, theta3) undefined (secant pole)")
    return 0


def cmd_braid(args) -> int:
    th = math.radians(args.theta)
    a, b = op_A(th), op_B(th)
    print(f"|ABA - BAB| = {braid_point_residual(th):.3e}")
    lifted = tensor_lifted_braid_residual(a, b)
    print(f"tensor-lifted residual = {lifted:.3e}")
    return 0


def cmd_mc(args) -> int:
    t = _triple(args)
    state = args.input if args.input is not None else prepare_state("V")
    rows = []
    for n in args.photons:
        cfg = MonteCarloConfig(n, args.seed, args.trials)
        est = montecarlo_cybe(t, state, cfg)
        rows.append((t, cfg, est))
        print(f"n = {n}: C_YBE = {est.fidelity_mean:.6f} +- {est.fidelity_std:.6f}")
    csvio.write_text(args.out, csvio.format_mc(rows))
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def cmd_bench_plates(args) -> int:
    t = _triple(args)
    seq = sequence_side(t, args.side)
    target = lhs(t) if args.side == "lhs" else rhs(t)
    sys.stdout.write(f"# {args.side.upper()} plates in traversal order (kind, axis deg)\n")
    sys.stdout.write(seq.to_text())
    sys.stdout.write(f"# |product - target| = {max_abs(evaluate_sequence(seq) - target):.3e}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ybesim",
        description="Simulate and check the 2-D Yang-Baxter equation in polarization optics.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s 0.1.0 ({kernels.BACKEND})")
    sub = p.add_subparsers(dest="command", required=True)

    def angles(sp, names, defaults=None):
        for name in names:
            sp.add_argument(
                f"--{name}", type=_finite, required=defaults is None,
                default=None if defaults is None else defaults[name],
                help=f"{name} in degrees",
            )

    sp = sub.add_parser("check", help="compare both sides at one triple")
    angles(sp, ["theta1", "theta2", "theta3"])
    sp.add_argument("--input", type=_input_state, help="extra probe: V, H, D45, CR or 're,im,re,im'")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("solve", help="print the middle angle satisfying the constraint")
    angles(sp, ["theta1", "theta3"])
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("sweep", help="C_YBE versus theta2 (writes sweep.csv)")
    angles(sp, ["theta1", "theta3"])
    sp.add_argument("--grid", type=_positive, default=SWEEP_STEP_DEG, help="pitch in degrees")
    sp.add_argument("--input", type=_input_state, help="single probe state; default is the 3-probe set")
    sp.add_argument("--out", type=Path, default=Path("sweep.csv"))
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("scan", help="necessity scan over (theta1, theta2) (writes scan.csv)")
    sp.add_argument("--theta3", type=_finite, nargs="+", required=True, help="one or more, degrees")
    sp.add_argument("--grid", type=_positive, default=SCAN_STEP_DEG, help="pitch in degrees")
    sp.add_argument("--threshold", type=_unit_open, default=DEFAULT_THRESHOLD)
    sp.add_argument("--tolerance", type=_positive, default=None,
                    help="allowed deviation from the predicted theta2, degrees "
                         "(default max(1, 4 * grid))")
    sp.add_argument("--all", action="store_true",
                    help="keep every grid point above threshold, not only row maxima")
    sp.add_argument("--out", type=Path, default=Path("scan.csv"))
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("spectral", help="map spectral parameters to angles")
    sp.add_argument("--xu", type=_finite, required=True, help="beta*u")
    sp.add_argument("--xv", type=_finite, required=True, help="beta*v")
    sp.add_argument("--epsilon", type=int, choices=(1, -1), default=1)
    sp.set_defaults(func=cmd_spectral)

    sp = sub.add_parser("braid", help="braid-relation residuals at one angle")
    sp.add_argument("--theta", type=_finite, default=45.0, help="degrees")
    sp.set_defaults(func=cmd_braid)

    sp = sub.add_parser("mc", help="photon-counting Monte Carlo of C_YBE (writes mc.csv)")
    angles(sp, ["theta1", "theta2", "theta3"])
    sp.add_argument("--photons", type=_count, nargs="+", default=[100000])
    sp.add_argument("--trials", type=_count, default=100)
    sp.add_argument("--seed", type=_seed, default=0)
    sp.add_argument("--input", type=_input_state, help="V, H, D45, CR or 're,im,re,im'")
    sp.add_argument("--out", type=Path, default=Path("mc.csv"))
    sp.set_defaults(func=cmd_mc)

    sp = sub.add_parser("bench-plates", help="list the wave plates realizing one side")
    angles(sp, ["theta1", "theta2", "theta3"])
    sp.add_argument("--side", choices=("lhs", "rhs"), default="lhs")
    sp.set_defaults(func=cmd_bench_plates)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SecantPoleError, CompositionPoleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
