"""Synthetic multipath channels and the powers a sounder would see in them.

Amplitudes are in sqrt(mW): ``amplitude**2`` is the power an isotropic
(0 dBi) receiver would collect from that path when the transmitter radiates
``pt_dbm`` through an isotropic antenna.  Resolvable paths add in power, so
phases and delays never enter a power sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .antenna import HornPattern, _cut
from .errors import DomainError
from .pathloss import fspl
from .units import azimuth_difference, dbm_to_mw

DEFAULT_BIN_NS = 2.5


@dataclass(frozen=True)
class MultipathComponent:
    amplitude: float
    phase_rad: float
    delay_ns: float
    aod_az_deg: float
    aod_el_deg: float
    aoa_az_deg: float
    aoa_el_deg: float

    def __post_init__(self):
        _check_components(
            np.array([self.amplitude]),
            np.array([self.delay_ns]),
            np.array([self.aod_az_deg, self.aoa_az_deg]),
            np.array([self.aod_el_deg, self.aoa_el_deg]),
            np.array([self.phase_rad]),
        )


def _check_components(amp, delay, az, el, phase):
    if np.any(~np.isfinite(amp)) or np.any(amp < 0):
        raise DomainError("amplitudes must be finite and >= 0")
    if np.any(~np.isfinite(delay)) or np.any(delay < 0):
        raise DomainError("delays must be finite and >= 0")
    if np.any(~((az >= 0) & (az < 360))):
        raise DomainError("azimuths must lie in [0, 360)")
    if np.any(~((el >= -90) & (el <= 90))):
        raise DomainError("elevations must lie in [-90, 90]")
    if np.any(~((phase >= 0) & (phase < 2 * math.pi))):
        raise DomainError("phases must lie in [0, 2*pi)")


_ARRAY_FIELDS = (
    "amplitude",
    "phase_rad",
    "delay_ns",
    "aod_az_deg",
    "aod_el_deg",
    "aoa_az_deg",
    "aoa_el_deg",
)


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """One TX-RX link: N multipath components stored column-wise."""

    amplitude: np.ndarray
    phase_rad: np.ndarray
    delay_ns: np.ndarray
    aod_az_deg: np.ndarray
    aod_el_deg: np.ndarray
    aoa_az_deg: np.ndarray
    aoa_el_deg: np.ndarray
    carrier_ghz: float
    tr_separation_m: float
    pt_dbm: float = 0.0

    def __post_init__(self):
        for name in _ARRAY_FIELDS:
            arr = np.array(getattr(self, name), dtype=float).ravel()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        n = self.amplitude.size
        if any(getattr(self, f).size != n for f in _ARRAY_FIELDS):
            raise DomainError("component columns differ in length")
        if not self.tr_separation_m > 0:
            raise DomainError(f"T-R separation must be positive, got {self.tr_separation_m}")
        if not self.carrier_ghz > 0:
            raise DomainError(f"carrier must be positive, got {self.carrier_ghz}")
        _check_components(
            self.amplitude,
            self.delay_ns,
            np.concatenate([self.aod_az_deg, self.aoa_az_deg]),
            np.concatenate([self.aod_el_deg, self.aoa_el_deg]),
            self.phase_rad,
        )

    def __len__(self):
        return self.amplitude.size

    def __eq__(self, other):
        if not isinstance(other, ChannelRealization):
            return NotImplemented
        return (
            all(np.array_equal(getattr(self, f), getattr(other, f)) for f in _ARRAY_FIELDS)
            and self.carrier_ghz == other.carrier_ghz
            and self.tr_separation_m == other.tr_separation_m
            and self.pt_dbm == other.pt_dbm
        )

    __hash__ = None

    @property
    def power_mw(self) -> np.ndarray:
        return self.amplitude**2

    @property
    def components(self) -> tuple[MultipathComponent, ...]:
        return tuple(
            MultipathComponent(*(float(getattr(self, f)[i]) for f in _ARRAY_FIELDS))
            for i in range(len(self))
        )

    @classmethod
    def from_components(cls, components, carrier_ghz, tr_separation_m, pt_dbm=0.0):
        cols = {f: [getattr(c, f) for c in components] for f in _ARRAY_FIELDS}
        return cls(**cols, carrier_ghz=carrier_ghz, tr_separation_m=tr_separation_m, pt_dbm=pt_dbm)

    def scaled(self, c: float) -> "ChannelRealization":
        """Same channel with every amplitude multiplied by ``c``."""
        return replace(self, amplitude=self.amplitude * c)

    def omni_path_loss_db(self) -> float:
        return self.pt_dbm - 10.0 * math.log10(omni_power(self))


@dataclass(frozen=True)
class GeneratorConfig:
    """Parameters of the synthetic channel generator.

    The total received power follows a close-in path-loss model with
    exponent ``ple`` and log-normal shadowing ``sigma_db`` about it.
    """

    n_mpc: int = 25
    ple: float = 3.4
    sigma_db: float = 9.7
    carrier_ghz: float = 28.0
    distance_m: float = 100.0
    mean_delay_ns: float = 30.0
    el_band_deg: float = 20.0
    pt_dbm: float = 0.0
    d0_m: float = 1.0

    def __post_init__(self):
        if self.n_mpc <= 0:
            raise DomainError("need at least one multipath component")
        if not self.distance_m > 0:
            raise DomainError("distance must be positive")
        if self.sigma_db < 0 or self.mean_delay_ns < 0:
            raise DomainError("sigma and delay spread must be non-negative")
        if not 0 <= self.el_band_deg <= 90:
            raise DomainError("elevation band must lie in [0, 90]")


def _stream(seed: int, *key: int) -> np.random.Generator:
    # Philox is counter based; the spawn key makes each (seed, index) stream
    # independent of how many other realizations are drawn or in what order.
    ss = np.random.SeedSequence(seed, spawn_key=tuple(key))
    return np.random.Generator(np.random.Philox(ss))


def generate_channel(config: GeneratorConfig, seed: int, index: int = 0) -> ChannelRealization:
    """Draw one channel realization; deterministic in ``(config, seed, index)``."""
    rng = _stream(seed, index, 0)
    n = config.n_mpc
    mean_pl = fspl(config.d0_m, config.carrier_ghz) + 10 * config.ple * math.log10(
        config.distance_m / config.d0_m
    )
    pl = mean_pl + config.sigma_db * rng.standard_normal()
    total_mw = float(dbm_to_mw(config.pt_dbm - pl))
    frac = rng.dirichlet(np.ones(n))
    phase = rng.uniform(0.0, 2 * math.pi, n)
    delay = rng.exponential(config.mean_delay_ns, n) if config.mean_delay_ns > 0 else np.zeros(n)
    band = config.el_band_deg
    return ChannelRealization(
        amplitude=np.sqrt(frac * total_mw),
        phase_rad=phase,
        delay_ns=delay,
        aod_az_deg=rng.uniform(0.0, 360.0, n),
        aod_el_deg=rng.uniform(-band, band, n),
        aoa_az_deg=rng.uniform(0.0, 360.0, n),
        aoa_el_deg=rng.uniform(-band, band, n),
        carrier_ghz=config.carrier_ghz,
        tr_separation_m=config.distance_m,
        pt_dbm=config.pt_dbm,
    )


def generate_ensemble(
    config: GeneratorConfig, seed: int, count: int, d_min: float = 30.0, d_max: float = 200.0
) -> list[ChannelRealization]:
    """``count`` channels at distances drawn log-uniformly from [d_min, d_max]."""
    if not 0 < d_min <= d_max:
        raise DomainError("need 0 < d_min <= d_max")
    out = []
    for i in range(count):
        u = _stream(seed, i, 1).uniform()
        d = d_min * (d_max / d_min) ** u
        out.append(generate_channel(replace(config, distance_m=float(d)), seed, i))
    return out


def omni_power(channel: ChannelRealization) -> float:
    """Total received power in mW with isotropic antennas at both ends."""
    if len(channel) == 0:
        raise DomainError("channel has no multipath components")
    return math.fsum(channel.power_mw)


@dataclass(frozen=True)
class PointingSet:
    """Antenna pointing directions and the angular cell each one owns.

    Cell ``i`` contains azimuths with ``-az_half[i] < wrap(az - az[i]) <= az_half[i]``
    and elevations with ``el_low[i] < el <= el_high[i]``.  Half-open cells mean a
    path sitting exactly on a shared edge goes to the cell with the smaller
    centre, so a tiling never counts it twice.
    """

    az: np.ndarray
    el: np.ndarray
    az_half: np.ndarray
    el_low: np.ndarray
    el_high: np.ndarray

    def __post_init__(self):
        for name in ("az", "el", "az_half", "el_low", "el_high"):
            object.__setattr__(self, name, np.atleast_1d(np.asarray(getattr(self, name), float)))

    def __len__(self):
        return self.az.size

    @property
    def pointings(self) -> list[tuple[float, float]]:
        return [(float(a), float(e)) for a, e in zip(self.az, self.el)]

    @classmethod
    def from_pattern(cls, pointings, pattern: HornPattern) -> "PointingSet":
        """Each cell spans one HPBW per axis centred on its pointing."""
        pts = np.asarray(pointings, dtype=float).reshape(-1, 2)
        n = len(pts)
        he = pattern.el_hpbw_deg / 2
        return cls(
            az=pts[:, 0],
            el=pts[:, 1],
            az_half=np.full(n, pattern.az_hpbw_deg / 2),
            el_low=pts[:, 1] - he,
            el_high=pts[:, 1] + he,
        )

    def membership(self, az_deg, el_deg) -> np.ndarray:
        """Boolean matrix (n_pointings, n_paths): path inside the pointing's cell."""
        daz = azimuth_difference(np.asarray(az_deg)[None, :], self.az[:, None])
        el = np.asarray(el_deg)[None, :]
        return (
            (daz > -self.az_half[:, None])
            & (daz <= self.az_half[:, None])
            & (el > self.el_low[:, None])
            & (el <= self.el_high[:, None])
        )

    def pattern_weights(self, pattern: HornPattern, az_deg, el_deg) -> np.ndarray:
        """Linear pattern gain (n_pointings, n_paths) toward each path."""
        daz = azimuth_difference(np.asarray(az_deg)[None, :], self.az[:, None])
        d_el = np.asarray(el_deg)[None, :] - self.el[:, None]
        return pattern.gain_linear * (_cut(daz, pattern.a) * _cut(d_el, pattern.b))


MODES = ("sector", "weighted")


def _gain_weights(points: PointingSet, pattern: HornPattern, az, el, mode):
    if mode == "sector":
        return pattern.gain_linear * points.membership(az, el)
    if mode == "weighted":
        return points.pattern_weights(pattern, az, el)
    raise DomainError(f"mode must be one of {MODES}, got {mode!r}")


def directional_power_matrix(
    channel: ChannelRealization,
    tx: HornPattern,
    rx: HornPattern,
    tx_points: PointingSet,
    rx_points: PointingSet,
    mode: str = "sector",
) -> np.ndarray:
    """Received power in mW (gains included) for every (TX, RX) pointing pair.

    ``sector``: boresight gains ``G_T G_R`` applied to every path whose
    departure angle is in the TX cell and arrival angle in the RX cell.
    ``weighted``: each path weighted by both continuous patterns at its
    off-boresight angles.
    """
    wt = _gain_weights(tx_points, tx, channel.aod_az_deg, channel.aod_el_deg, mode)
    wr = _gain_weights(rx_points, rx, channel.aoa_az_deg, channel.aoa_el_deg, mode)
    return (wt * channel.power_mw[None, :]) @ wr.T


def directional_power(
    channel: ChannelRealization,
    tx: HornPattern,
    rx: HornPattern,
    tx_point,
    rx_point,
    mode: str = "sector",
    tx_sector: PointingSet | None = None,
    rx_sector: PointingSet | None = None,
) -> float:
    """Received power in mW for one TX/RX pointing pair.

    Sectors default to +-HPBW/2 about each pointing; pass a one-element
    :class:`PointingSet` to use a different cell.
    """
    tp = tx_sector if tx_sector is not None else PointingSet.from_pattern([tx_point], tx)
    rp = rx_sector if rx_sector is not None else PointingSet.from_pattern([rx_point], rx)
    return float(directional_power_matrix(channel, tx, rx, tp, rp, mode)[0, 0])


@dataclass(frozen=True)
class PowerDelayProfile:
    """Power per delay bin; only occupied bins are stored, in increasing order."""

    bin_width_ns: float
    bins: tuple[tuple[int, float], ...] = field(default=())

    def __post_init__(self):
        if not self.bin_width_ns > 0:
            raise DomainError("bin width must be positive")
        if any(p < 0 for _, p in self.bins):
            raise DomainError("bin powers must be non-negative")

    @property
    def delays_ns(self) -> np.ndarray:
        return np.array([i * self.bin_width_ns for i, _ in self.bins])

    @property
    def powers_mw(self) -> np.ndarray:
        return np.array([p for _, p in self.bins])

    def total_power(self) -> float:
        return math.fsum(p for _, p in self.bins)


def compute_pdp(channel: ChannelRealization, bin_width_ns: float = DEFAULT_BIN_NS) -> PowerDelayProfile:
    """Bin path powers by delay.  Paths sharing a bin add in power, not amplitude."""
    if not bin_width_ns > 0:
        raise DomainError(f"bin width must be positive, got {bin_width_ns}")
    idx = np.floor(channel.delay_ns / bin_width_ns).astype(np.int64)
    power = channel.power_mw
    bins = []
    for k in np.unique(idx):
        bins.append((int(k), math.fsum(power[idx == k])))
    return PowerDelayProfile(bin_width_ns, tuple(bins))
