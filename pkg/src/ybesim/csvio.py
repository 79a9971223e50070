"""CSV writers and readers for sweep, scan and Monte Carlo results.

Angles are written in degrees with four decimals; fidelities with twelve
significant digits.  Readers return plain row dicts of floats.
"""
from __future__ import annotations

import csv
import io
import math
from pathlib import Path
from typing import Iterable, Sequence

from .experiment import McEstimate, MonteCarloConfig, ScanRecord, SweepRecord

SCAN_FIELDS = ["theta3_deg", "theta1_deg", "theta2_found_deg", "theta2_pred_deg", "deviation_deg"]
MC_FIELDS = ["theta1_deg", "theta2_deg", "theta3_deg", "photons", "trials", "fid_mean", "fid_std"]


def _deg(rad: float) -> str:
    return f"{math.degrees(rad):.4f}"


def _fid(x: float) -> str:
    return f"{x:.12g}"


def sweep_fields(n_probes: int) -> list[str]:
    return (
        ["theta1_deg", "theta3_deg", "theta2_deg"]
        + [f"fid_probe{k}" for k in range(n_probes)]
        + ["fid_min"]
    )


def _dump(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def format_sweep(theta1: float, theta3: float, records: Sequence[SweepRecord]) -> str:
    n = len(records[0].fidelity_per_probe) if records else 0
    rows = (
        [_deg(theta1), _deg(theta3), _deg(r.theta2)]
        + [_fid(f) for f in r.fidelity_per_probe]
        + [_fid(r.fidelity_min)]
        for r in records
    )
    return _dump(sweep_fields(n), rows)


def format_scan(records: Sequence[ScanRecord]) -> str:
    rows = (
        [_deg(r.theta3), _deg(r.theta1), _deg(r.theta2_found), _deg(r.theta2_predicted),
         _deg(r.deviation_mod_pi)]
        for r in records
    )
    return _dump(SCAN_FIELDS, rows)


def format_mc(rows: Sequence[tuple[Sequence[float], MonteCarloConfig, McEstimate]]) -> str:
    """``rows`` holds ``(triple, config, estimate)`` for every photon number run."""
    out = (
        [_deg(t[0]), _deg(t[1]), _deg(t[2]), str(cfg.photons_per_basis), str(cfg.trials),
         _fid(est.fidelity_mean), _fid(est.fidelity_std)]
        for t, cfg, est in rows
    )
    return _dump(MC_FIELDS, out)


def write_text(path: str | Path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8", newline="")


def parse_csv(text: str) -> tuple[list[str], list[dict[str, float]]]:
    """Parse the text of one of the tool's CSV files into a header and float rows."""
    reader = csv.DictReader(io.StringIO(text))
    header = list(reader.fieldnames or [])
    rows = []
    for lineno, row in enumerate(reader, 2):
        try:
            rows.append({k: float(v) for k, v in row.items()})
        except (TypeError, ValueError) as exc:
            raise ValueError(f"line {lineno}: malformed row {row!r}") from exc
    return header, rows


def read_csv(path: str | Path) -> tuple[list[str], list[dict[str, float]]]:
    return parse_csv(Path(path).read_text(encoding="utf-8"))


def sweep_from_rows(rows: Sequence[dict[str, float]]) -> tuple[float, float, list[SweepRecord]]:
    """Rebuild sweep records (radians) from parsed rows."""
    if not rows:
        return math.nan, math.nan, []
    probe_keys = sorted(
        (k for k in rows[0] if k.startswith("fid_probe")), key=lambda k: int(k[9:])
    )
    recs = [
        SweepRecord(
            math.radians(r["theta2_deg"]),
            tuple(r[k] for k in probe_keys),
            r["fid_min"],
        )
        for r in rows
    ]
    return math.radians(rows[0]["theta1_deg"]), math.radians(rows[0]["theta3_deg"]), recs


def scan_from_rows(rows: Sequence[dict[str, float]]) -> list[ScanRecord]:
    return [
        ScanRecord(*(math.radians(r[k]) for k in SCAN_FIELDS))
        for r in rows
    ]


def mc_from_rows(rows: Sequence[dict[str, float]]):
    out = []
    for r in rows:
        t = tuple(math.radians(r[k]) for k in ("theta1_deg", "theta2_deg", "theta3_deg"))
        cfg = MonteCarloConfig(int(r["photons"]), 0, int(r["trials"]))
        out.append((t, cfg, McEstimate(r["fid_mean"], r["fid_std"])))
    return out
