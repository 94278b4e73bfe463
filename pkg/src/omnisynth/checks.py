"""Reference-value checks run by ``omnisynth verify``."""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import antenna as ant
from .fixtures import (
    TABLE1,
    delta_pr_from_records,
    table1_consistency_errors,
    table1_measurements,
    table2_consistency_errors,
)
from .pathloss import fspl
from .sweep import synthesize_omni


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


def _within(name, value, target, tol, unit=""):
    ok = abs(value - target) <= tol
    return Check(name, ok, f"{value:.4f}{unit} (expected {target}{unit} +- {tol})")


def three_pointing_peak_db(hpbw_deg=10.0, step=ant.DEFAULT_STEP_DEG) -> float:
    p = ant.make_pattern(0.0, hpbw_deg, hpbw_deg)
    pts = [(-hpbw_deg, 0.0), (0.0, 0.0), (hpbw_deg, 0.0)]
    return ant.combine_patterns(p, pts, ant.AngularGrid.around(p, pts, step=step)).peak_db()


def nine_pointing_peak_db(az_hpbw=10.0, el_hpbw=8.0, step=0.05) -> float:
    p = ant.make_pattern(0.0, az_hpbw, el_hpbw)
    pts = ant.hpbw_grid_pointings(p)
    return ant.combine_patterns(p, pts, ant.AngularGrid.around(p, pts, step=step)).peak_db()


def reference_constant_checks() -> list[Check]:
    nb, wb = ant.NARROWBEAM_28GHZ, ant.WIDEBEAM_28GHZ
    return [
        _within("beamwidth parameter for 10 deg HPBW", ant.solve_beamwidth_param(10.0), 5.06, 0.05),
        _within("3-pointing combined peak over boresight", three_pointing_peak_db(), 0.25, 0.1, " dB"),
        _within("3x3 combined peak over boresight", nine_pointing_peak_db(), 0.5, 0.15, " dB"),
        _within(
            "widebeam / narrowbeam integrated power",
            ant.beam_power_ratio_db(wb, nb),
            9.4,
            0.2,
            " dB",
        ),
        _within(
            "3x3 narrowbeam vs single widebeam",
            abs(ant.beam_power_ratio_db(nb, wb, 3.0, ant.hpbw_grid_pointings(nb))),
            0.08,
            0.05,
            " dB",
        ),
        _within("FSPL at 1 m, 28 GHz", fspl(1.0, 28.0), 61.4, 0.05, " dB"),
        _within("FSPL at 1 m, 73 GHz", fspl(1.0, 73.0), 69.7, 0.05, " dB"),
    ]


def fixture_checks() -> list[Check]:
    out = []
    bad1 = table1_consistency_errors()
    out.append(Check("Table I: Pr + PL = 79.1 dB and printed delta Pr", not bad1, "; ".join(bad1) or "8 rows ok"))
    recs = table1_measurements()
    deltas = delta_pr_from_records(recs)
    printed = [r.delta_pr_db for r in TABLE1]
    out.append(
        Check("Table I: delta Pr recomputed from records", deltas == printed, f"{deltas}")
    )
    plane_max = max(abs(r.delta_pr_db) for r in TABLE1 if r.all_azimuths)
    out.append(_within("Table I: largest whole-plane delta Pr", plane_max, 2.9, 1e-9, " dB"))
    worst = 0.0
    for i, row in enumerate(TABLE1):
        for k, pl in ((2 * i, row.pl_w_db), (2 * i + 1, row.pl_n_db)):
            res = synthesize_omni(recs[k : k + 1], noise_floor_dbm=-math.inf)
            worst = max(worst, abs(res.omni_path_loss_db - pl))
    out.append(
        Check(
            "Table I: gain removal (9.5 dB compensation) reproduces path loss",
            worst <= 0.05,
            f"max deviation {worst:.3f} dB",
        )
    )
    bad2 = table2_consistency_errors()
    out.append(Check("Table II: ratio vs ratio in dB", not bad2, "; ".join(bad2) or "20 rows ok"))
    return out


def run_all() -> list[Check]:
    return fixture_checks() + reference_constant_checks()
