"""Directional sweeps: planning, emulation over a channel, and omni synthesis.

The synthesized omnidirectional path loss is the transmit power minus the
sum, in mW, of every directional measurement with both antenna gains taken
out::

    PL = Pt - 10 log10( sum_q Pr_q / (G_T G_R) )

Below-floor measurements are kept (flagged) but add nothing to the sum.  The
floor is compared with the gain-removed power, so adding the same number of
dB to a gain and to the recorded power never changes a result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from typing import Iterable, Sequence

import numpy as np

from .antenna import HornPattern
from .channel import ChannelRealization, PointingSet, directional_power_matrix
from .errors import DegenerateResultError, DomainError
from .units import linear_to_db, wrap_azimuth

DEFAULT_NOISE_FLOOR_DBM = -100.0
# Powers within this many dB of the floor count as "at the floor"; covers the
# 6-decimal rounding of floor-level rows written to and read back from CSV.
FLOOR_TOL_DB = 1e-5


def nearest_divisor_step(hpbw_deg: float) -> int:
    """Divisor of 360 closest to ``hpbw_deg`` (ties go to the larger step).

    Real sweeps step by a whole number of degrees that tiles the circle, so
    10.9 deg becomes 10 and 7 deg becomes 8.
    """
    if not 0 < hpbw_deg < 360:
        raise DomainError(f"azimuth HPBW must lie in (0, 360), got {hpbw_deg}")
    divisors = [d for d in range(1, 361) if 360 % d == 0]
    return min(divisors, key=lambda d: (abs(d - hpbw_deg), -d))


@dataclass(frozen=True)
class RingGrid(PointingSet):
    """Pointings on azimuth rings, ring-major order.

    Ring ``r`` owns elevations in ``(ring_low[r], ring_high[r]]`` and its
    azimuth cells are ``step`` wide centred on multiples of ``step``.  Cell
    lookup is done by index arithmetic, so a path can never land in two cells.
    """

    az_step: float
    ring_el: np.ndarray
    ring_low: np.ndarray
    ring_high: np.ndarray

    @property
    def n_az(self) -> int:
        return int(round(360.0 / self.az_step))

    def cell_index(self, az_deg, el_deg) -> np.ndarray:
        """Flat pointing index of the cell holding each direction, -1 if none."""
        az = wrap_azimuth(az_deg)
        el = np.asarray(el_deg, dtype=float)
        j = np.ceil(az / self.az_step - 0.5).astype(np.int64) % self.n_az
        r = np.searchsorted(self.ring_high, el, side="left")
        ok = r < self.ring_el.size
        r_safe = np.minimum(r, self.ring_el.size - 1)
        ok &= el > self.ring_low[r_safe]
        return np.where(ok, r_safe * self.n_az + j, -1)

    def membership(self, az_deg, el_deg) -> np.ndarray:
        idx = self.cell_index(az_deg, el_deg)
        out = np.zeros((len(self), idx.size), dtype=bool)
        hit = idx >= 0
        out[idx[hit], np.nonzero(hit)[0]] = True
        return out


def ring_grid(
    az_hpbw_deg: float,
    el_planes_deg: Sequence[float] = (0.0,),
    full_sphere: bool = False,
    el_hpbw_deg: float | None = None,
) -> RingGrid:
    """Azimuth rings stepped by (about) one azimuth HPBW.

    With ``full_sphere`` the given planes are replaced by rings one
    elevation HPBW apart, centred on the horizon, whose cells tile
    [-90, 90] exactly.  Otherwise each listed plane gets a cell one
    elevation HPBW tall, trimmed at the midpoint to any closer neighbour.
    """
    step = nearest_divisor_step(az_hpbw_deg)
    el_hpbw = az_hpbw_deg if el_hpbw_deg is None else el_hpbw_deg
    if not el_hpbw > 0:
        raise DomainError("elevation HPBW must be positive")
    if full_sphere:
        kmax = max(0, math.ceil((90.0 - el_hpbw / 2) / el_hpbw))
        k = np.arange(-kmax, kmax + 1)
        ring_el = np.clip(k * el_hpbw, -90.0, 90.0)
        inner = (k[:-1] + 0.5) * el_hpbw
        ring_low = np.concatenate([[-np.inf], inner])
        ring_high = np.concatenate([inner, [90.0]])
    else:
        ring_el = np.array(sorted(set(float(p) for p in el_planes_deg)))
        if ring_el.size == 0:
            raise DomainError("need at least one elevation plane")
        if np.any(np.abs(ring_el) > 90):
            raise DomainError("elevation planes must lie in [-90, 90]")
        mids = (ring_el[1:] + ring_el[:-1]) / 2
        ring_low = ring_el - el_hpbw / 2
        ring_high = ring_el + el_hpbw / 2
        ring_low[1:] = np.maximum(ring_low[1:], mids)
        ring_high[:-1] = np.minimum(ring_high[:-1], mids)
    n_az = 360 // step
    az = np.tile(np.arange(n_az) * float(step), ring_el.size)
    el = np.repeat(ring_el, n_az)
    return RingGrid(
        az=az,
        el=el,
        az_half=np.full(az.size, step / 2.0),
        el_low=np.repeat(ring_low, n_az),
        el_high=np.repeat(ring_high, n_az),
        az_step=float(step),
        ring_el=ring_el,
        ring_low=ring_low,
        ring_high=ring_high,
    )


@dataclass(frozen=True)
class SweepPlan:
    tx: PointingSet
    rx: PointingSet
    az_step_deg: float
    el_planes_deg: tuple[float, ...]

    def __post_init__(self):
        for side in (self.tx, self.rx):
            pts = side.pointings
            if len(set(pts)) != len(pts):
                raise DomainError("pointings within a plan must be distinct")

    @property
    def tx_pointings(self):
        return self.tx.pointings

    @property
    def rx_pointings(self):
        return self.rx.pointings

    def __len__(self):
        return len(self.tx) * len(self.rx)


def plan_sweep(
    az_hpbw_deg: float,
    el_planes_deg: Sequence[float] = (0.0,),
    full_sphere: bool = False,
    el_hpbw_deg: float | None = None,
    tx: PointingSet | None = None,
) -> SweepPlan:
    """RX azimuth sweeps at HPBW steps on each elevation plane.

    The TX stays put, as in a typical campaign: by default one pointing at
    (0, 0) owning a one-HPBW cell of the same antenna type.
    """
    rx = ring_grid(az_hpbw_deg, el_planes_deg, full_sphere, el_hpbw_deg)
    if tx is None:
        el_hpbw = az_hpbw_deg if el_hpbw_deg is None else el_hpbw_deg
        tx = PointingSet(
            az=[0.0], el=[0.0], az_half=[az_hpbw_deg / 2], el_low=[-el_hpbw / 2], el_high=[el_hpbw / 2]
        )
    return SweepPlan(
        tx=tx,
        rx=rx,
        az_step_deg=rx.az_step,
        el_planes_deg=tuple(float(e) for e in rx.ring_el),
    )


def full_partition_plan(tx: HornPattern, rx: HornPattern) -> SweepPlan:
    """Both ends swept over the whole sphere in HPBW steps (non-overlapping cells)."""
    txg = ring_grid(tx.az_hpbw_deg, full_sphere=True, el_hpbw_deg=tx.el_hpbw_deg)
    rxg = ring_grid(rx.az_hpbw_deg, full_sphere=True, el_hpbw_deg=rx.el_hpbw_deg)
    return SweepPlan(txg, rxg, rxg.az_step, tuple(float(e) for e in rxg.ring_el))


@dataclass(frozen=True)
class DirectionalMeasurement:
    tx_az: float
    tx_el: float
    rx_az: float
    rx_el: float
    pr_dbm: float
    gt_dbi: float
    gr_dbi: float
    pt_dbm: float
    tr_separation_m: float
    below_floor: bool = False

    def __post_init__(self):
        for name in ("pr_dbm", "gt_dbi", "gr_dbi", "pt_dbm"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if not self.tr_separation_m > 0:
            raise DomainError("T-R separation must be positive")

    @property
    def gain_removed_dbm(self) -> float:
        return self.pr_dbm - self.gt_dbi - self.gr_dbi


_COLUMNS = (
    "tx_az",
    "tx_el",
    "rx_az",
    "rx_el",
    "pr_dbm",
    "gt_dbi",
    "gr_dbi",
    "pt_dbm",
    "tr_separation_m",
)


@dataclass(frozen=True, eq=False)
class MeasurementTable:
    """Column-wise list of :class:`DirectionalMeasurement`.

    Sweeps produce hundreds of thousands of pointing pairs; keeping them as
    arrays makes synthesis cheap.  Indexing and iteration yield ordinary
    :class:`DirectionalMeasurement` records.
    """

    tx_az: np.ndarray
    tx_el: np.ndarray
    rx_az: np.ndarray
    rx_el: np.ndarray
    pr_dbm: np.ndarray
    gt_dbi: np.ndarray
    gr_dbi: np.ndarray
    pt_dbm: np.ndarray
    tr_separation_m: np.ndarray
    below_floor: np.ndarray = field(default=None)

    def __post_init__(self):
        n = None
        for name in _COLUMNS:
            arr = np.atleast_1d(np.asarray(getattr(self, name), dtype=float))
            object.__setattr__(self, name, arr)
            n = arr.size if n is None else n
            if arr.size != n:
                raise DomainError("measurement columns differ in length")
        flag = self.below_floor
        flag = np.zeros(n, dtype=bool) if flag is None else np.atleast_1d(np.asarray(flag, bool))
        object.__setattr__(self, "below_floor", flag)
        for name in ("pr_dbm", "gt_dbi", "gr_dbi", "pt_dbm"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise DomainError(f"{name} must be finite")
        if not np.all(self.tr_separation_m > 0):
            raise DomainError("T-R separation must be positive")

    def __len__(self):
        return self.pr_dbm.size

    def __getitem__(self, i):
        if isinstance(i, (slice, np.ndarray, list)):
            return MeasurementTable(**{f.name: getattr(self, f.name)[i] for f in fields(self)})
        return DirectionalMeasurement(
            *(float(getattr(self, c)[i]) for c in _COLUMNS), below_floor=bool(self.below_floor[i])
        )

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    @property
    def gain_removed_dbm(self) -> np.ndarray:
        return self.pr_dbm - self.gt_dbi - self.gr_dbi

    @classmethod
    def from_records(cls, records: Iterable[DirectionalMeasurement]) -> "MeasurementTable":
        records = list(records)
        cols = {c: [getattr(r, c) for r in records] for c in _COLUMNS}
        return cls(**cols, below_floor=[r.below_floor for r in records])

    @classmethod
    def concat(cls, tables: Sequence["MeasurementTable"]) -> "MeasurementTable":
        return cls(**{f.name: np.concatenate([getattr(t, f.name) for t in tables]) for f in fields(cls)})


def as_table(measurements) -> MeasurementTable:
    if isinstance(measurements, MeasurementTable):
        return measurements
    return MeasurementTable.from_records(measurements)


def run_sweep(
    channel: ChannelRealization,
    tx: HornPattern,
    rx: HornPattern,
    plan: SweepPlan,
    pt_dbm: float,
    mode: str = "sector",
    noise_floor_dbm: float = DEFAULT_NOISE_FLOOR_DBM,
) -> MeasurementTable:
    """Emulate the plan over ``channel``: one measurement per (TX, RX) pointing pair.

    Rows are TX-major.  ``pr_dbm`` carries both antenna gains.  A pair whose
    gain-removed power is at or below ``noise_floor_dbm`` is flagged and
    recorded at the floor.
    """
    if len(channel) == 0:
        raise DomainError("channel has no multipath components")
    if not math.isfinite(noise_floor_dbm):
        raise DomainError("noise floor must be finite")
    p_mw = directional_power_matrix(channel, tx, rx, plan.tx, plan.rx, mode).ravel()
    gains = tx.boresight_gain_dbi + rx.boresight_gain_dbi
    pr = pt_dbm - channel.pt_dbm + linear_to_db(p_mw)
    low = ~(pr - gains > noise_floor_dbm + FLOOR_TOL_DB)
    pr = np.where(low, noise_floor_dbm + gains, pr)
    n_tx, n_rx = len(plan.tx), len(plan.rx)
    n = n_tx * n_rx
    return MeasurementTable(
        tx_az=np.repeat(plan.tx.az, n_rx),
        tx_el=np.repeat(plan.tx.el, n_rx),
        rx_az=np.tile(plan.rx.az, n_tx),
        rx_el=np.tile(plan.rx.el, n_tx),
        pr_dbm=pr,
        gt_dbi=np.full(n, tx.boresight_gain_dbi),
        gr_dbi=np.full(n, rx.boresight_gain_dbi),
        pt_dbm=np.full(n, float(pt_dbm)),
        tr_separation_m=np.full(n, channel.tr_separation_m),
        below_floor=low,
    )


@dataclass(frozen=True)
class SynthesisResult:
    omni_power_dbm: float
    omni_path_loss_db: float
    contributing_count: int
    pt_dbm: float
    rx_planes_deg: tuple[float, ...] = ()
    plane_spacing_deg: float | None = None

    def __post_init__(self):
        if abs(self.pt_dbm - self.omni_power_dbm - self.omni_path_loss_db) > 1e-9:
            raise DomainError("path loss inconsistent with transmit and omni powers")

    def report(self) -> dict:
        return {
            "omni_power_dbm": self.omni_power_dbm,
            "omni_path_loss_db": self.omni_path_loss_db,
            "contributing_count": self.contributing_count,
            "pt_dbm": self.pt_dbm,
            "rx_planes_deg": list(self.rx_planes_deg),
            "plane_spacing_deg": self.plane_spacing_deg,
        }


def _contributing(t: MeasurementTable, noise_floor_dbm: float) -> np.ndarray:
    return ~t.below_floor & (t.gain_removed_dbm > noise_floor_dbm + FLOOR_TOL_DB)


def synthesize_omni(
    measurements, noise_floor_dbm: float = DEFAULT_NOISE_FLOOR_DBM
) -> SynthesisResult:
    """Omnidirectional received power and path loss from directional measurements.

    Gain-removed powers are summed in mW with :func:`math.fsum`, so the
    result does not depend on measurement order.
    """
    t = as_table(measurements)
    if len(t) == 0:
        raise DomainError("no measurements to synthesize")
    pt = t.pt_dbm[0]
    if np.any(t.pt_dbm != pt):
        raise DomainError("measurements mix different transmit powers")
    use = _contributing(t, noise_floor_dbm)
    if not np.any(use):
        raise DegenerateResultError("every measurement is below the noise floor")
    total_mw = math.fsum(10.0 ** (t.gain_removed_dbm[use] / 10.0))
    if total_mw == 0.0:
        raise DegenerateResultError("synthesized power is zero")
    omni_dbm = 10.0 * math.log10(total_mw)
    planes = tuple(float(e) for e in np.unique(t.rx_el))
    spacing = float(np.min(np.diff(planes))) if len(planes) > 1 else None
    return SynthesisResult(
        omni_power_dbm=omni_dbm,
        omni_path_loss_db=float(pt) - omni_dbm,
        contributing_count=int(np.sum(use)),
        pt_dbm=float(pt),
        rx_planes_deg=planes,
        plane_spacing_deg=spacing,
    )


@dataclass(frozen=True)
class PlaneRatio:
    """Share of received power captured by the strongest RX elevation plane."""

    ratio: float
    ratio_db: float
    strongest_el_deg: float
    planes_used_deg: tuple[float, ...]
    plane_power_mw: dict

    def report(self) -> dict:
        return {
            "ratio": self.ratio,
            "ratio_db": self.ratio_db,
            "strongest_el_deg": self.strongest_el_deg,
            "planes_used_deg": list(self.planes_used_deg),
            "plane_power_mw": {f"{k:g}": v for k, v in self.plane_power_mw.items()},
        }


def plane_powers(measurements, noise_floor_dbm: float = DEFAULT_NOISE_FLOOR_DBM) -> dict:
    """Gain-removed mW summed over each RX elevation plane, keyed by elevation."""
    t = as_table(measurements)
    use = _contributing(t, noise_floor_dbm)
    mw = np.where(use, 10.0 ** (t.gain_removed_dbm / 10.0), 0.0)
    return {float(e): math.fsum(mw[t.rx_el == e]) for e in np.unique(t.rx_el)}


def strongest_plane_ratio(
    measurements, noise_floor_dbm: float = DEFAULT_NOISE_FLOOR_DBM
) -> PlaneRatio:
    """Strongest plane's power over itself plus its (up to two) neighbouring planes.

    Planes are neighbours in sorted elevation order.  A strongest plane at
    either end of the set has only one neighbour, and a single plane yields 1.
    """
    powers = plane_powers(measurements, noise_floor_dbm)
    if not powers:
        raise DomainError("no elevation planes")
    els = sorted(powers)
    p = [powers[e] for e in els]
    k = int(np.argmax(p))
    used = els[max(0, k - 1) : k + 2]
    denom = math.fsum(powers[e] for e in used)
    if denom == 0.0:
        raise DomainError("zero received power in the strongest and adjacent planes")
    ratio = p[k] / denom
    return PlaneRatio(
        ratio=ratio,
        ratio_db=10.0 * math.log10(ratio),
        strongest_el_deg=els[k],
        planes_used_deg=tuple(used),
        plane_power_mw=powers,
    )


def combined_gain_offset_db(
    pattern: HornPattern, grid: PointingSet, el_band=(-20.0, 20.0), step: float = 0.25
) -> float:
    """Mean gain, over a band of directions, of all pointings summed, relative to boresight.

    A weighted-mode sweep sees every path through the summed patterns of the
    whole grid rather than through one boresight gain; this is the average
    excess (a few tenths of a dB for HPBW spacing) to subtract afterwards.
    Directions are sampled over one azimuth cell of the grid's first pointing
    and the elevation band, where the summed pattern repeats.
    """
    half = float(grid.az_half[0])
    az = grid.az[0] - half + step * (np.arange(int(round(2 * half / step))) + 0.5)
    n_el = max(1, int(round((el_band[1] - el_band[0]) / step)))
    el = el_band[0] + (el_band[1] - el_band[0]) * (np.arange(n_el) + 0.5) / n_el
    A, E = np.meshgrid(wrap_azimuth(az), el, indexing="ij")
    w = grid.pattern_weights(pattern, A.ravel(), E.ravel()).sum(axis=0) / pattern.gain_linear
    return float(linear_to_db(w.mean()))
