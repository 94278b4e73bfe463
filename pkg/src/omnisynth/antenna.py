"""Canonical horn-antenna power pattern and pattern-combination tools.

The far-field power pattern is modelled as a product of two one-dimensional
cuts::

    f(phi, theta) = G * [sinc^2(a sin phi) cos^2 phi] * [sinc^2(b sin theta) cos^2 theta]

with ``phi``/``theta`` the azimuth/elevation offsets from boresight and ``G``
the linear boresight gain.  The shape parameters ``a`` and ``b`` are fixed by
requiring the cut to fall to one half at +-HPBW/2.

sinc convention
---------------
``sinc(u) = sin(pi u) / (pi u)`` (the normalized sinc, as in ``numpy.sinc``).
With this choice a 10 deg beamwidth gives ``a ~= 5.06``; the unnormalized sinc
would give ``a ~= 15.9`` for the same beam.

Offsets beyond +-90 deg on either axis are outside the model's range
(``cos^2`` reaches zero at 90 deg) and evaluate to a gain of exactly 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError
from .units import azimuth_difference, db_to_linear, linear_to_db

#: Half-power residual tolerance every constructed pattern must satisfy.
ROOT_RESIDUAL_TOL = 1e-9

#: Default angular resolution for pattern combination, degrees.
DEFAULT_STEP_DEG = 0.01


def _cut(offset_deg, param):
    """One-dimensional pattern cut ``sinc^2(param sin x) cos^2 x``, 0 beyond 90 deg."""
    x = np.radians(np.asarray(offset_deg, dtype=float))
    g = np.sinc(param * np.sin(x)) ** 2 * np.cos(x) ** 2
    return np.where(np.abs(offset_deg) <= 90.0, g, 0.0)


def half_power_residual(param, hpbw_deg):
    """``sinc^2(param sin(hpbw/2)) cos^2(hpbw/2) - 1/2``; zero at the correct parameter."""
    half = math.radians(hpbw_deg) / 2.0
    return float(np.sinc(param * math.sin(half)) ** 2 * math.cos(half) ** 2 - 0.5)


def solve_beamwidth_param(hpbw_deg: float, tol: float = 1e-12) -> float:
    """Shape parameter that puts the half-power points at +-hpbw/2.

    Solves ``sinc^2(x sin(hpbw/2)) cos^2(hpbw/2) = 1/2`` by bisection over the
    main lobe ``0 < x sin(hpbw/2) < 1``, where the left side falls
    monotonically from ``cos^2(hpbw/2)`` to 0.  Side lobes of sinc^2 never
    exceed 0.05, so the main-lobe root is the only positive root.

    A root exists only for ``hpbw < 90`` deg: beyond that ``cos^2(hpbw/2)``
    is already below one half.

    Parameters
    ----------
    hpbw_deg : float
        Half-power beamwidth in degrees.
    tol : float
        Relative bracket width at which bisection stops.

    Returns
    -------
    float
        The positive root.
    """
    if not (0.0 < hpbw_deg < 180.0) or not math.isfinite(hpbw_deg):
        raise DomainError(f"HPBW must lie in (0, 180) degrees, got {hpbw_deg!r}")
    if hpbw_deg >= 90.0:
        raise DomainError(
            f"no half-power root for HPBW {hpbw_deg} deg: cos^2(HPBW/2) <= 1/2"
        )
    lo, hi = 0.0, 1.0 / math.sin(math.radians(hpbw_deg) / 2.0)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if half_power_residual(mid, hpbw_deg) > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol * hi:
            break
    root = 0.5 * (lo + hi)
    resid = half_power_residual(root, hpbw_deg)
    if abs(resid) > ROOT_RESIDUAL_TOL:
        raise ArithmeticError(
            f"bisection did not certify a root for HPBW {hpbw_deg}: residual {resid:g}"
        )
    return root


@dataclass(frozen=True)
class HornPattern:
    """A canonical horn antenna.

    ``a``/``b`` are the azimuth/elevation shape parameters; build instances
    with :func:`make_pattern` rather than supplying them by hand.
    """

    boresight_gain_dbi: float
    az_hpbw_deg: float
    el_hpbw_deg: float
    a: float
    b: float

    def __post_init__(self):
        for name in ("az_hpbw_deg", "el_hpbw_deg"):
            v = getattr(self, name)
            if not 0.0 < v < 180.0:
                raise DomainError(f"{name} must lie in (0, 180), got {v}")
        if not (self.a > 0.0 and self.b > 0.0):
            raise DomainError("shape parameters a and b must be positive")
        if not math.isfinite(self.boresight_gain_dbi):
            raise DomainError("boresight gain must be finite")
        ra = half_power_residual(self.a, self.az_hpbw_deg)
        rb = half_power_residual(self.b, self.el_hpbw_deg)
        if abs(ra) > ROOT_RESIDUAL_TOL or abs(rb) > ROOT_RESIDUAL_TOL:
            raise DomainError(
                f"shape parameters do not match the beamwidths (residuals {ra:g}, {rb:g})"
            )

    @property
    def gain_linear(self) -> float:
        return float(db_to_linear(self.boresight_gain_dbi))

    def describe(self) -> str:
        return (
            f"{self.boresight_gain_dbi:g} dBi, {self.az_hpbw_deg:g}/{self.el_hpbw_deg:g} deg "
            f"AZ/EL HPBW"
        )


def make_pattern(gain_dbi: float, az_hpbw_deg: float, el_hpbw_deg: float) -> HornPattern:
    return HornPattern(
        boresight_gain_dbi=float(gain_dbi),
        az_hpbw_deg=float(az_hpbw_deg),
        el_hpbw_deg=float(el_hpbw_deg),
        a=solve_beamwidth_param(az_hpbw_deg),
        b=solve_beamwidth_param(el_hpbw_deg),
    )


def pattern_gain(pattern: HornPattern, d_az_deg, d_el_deg):
    """Linear power gain at the given azimuth/elevation offsets from boresight.

    Broadcasts over array inputs.  Returns a float for scalar input.
    """
    ga = _cut(d_az_deg, pattern.a)
    ge = _cut(d_el_deg, pattern.b)
    g = pattern.gain_linear * (ga * ge)
    return float(g) if np.ndim(g) == 0 else g


@dataclass(frozen=True)
class AngularGrid:
    """Uniform rectangular grid of (azimuth, elevation) offsets, endpoints inclusive."""

    az_min: float
    az_max: float
    el_min: float
    el_max: float
    step: float = DEFAULT_STEP_DEG

    def __post_init__(self):
        if not self.step > 0.0:
            raise DomainError(f"grid step must be positive, got {self.step}")
        if self.az_max < self.az_min or self.el_max < self.el_min:
            raise DomainError("grid bounds are reversed")

    @staticmethod
    def _axis(lo, hi, step):
        n = int(round((hi - lo) / step)) + 1
        return lo + step * np.arange(n)

    @property
    def az(self) -> np.ndarray:
        return self._axis(self.az_min, self.az_max, self.step)

    @property
    def el(self) -> np.ndarray:
        return self._axis(self.el_min, self.el_max, self.step)

    @classmethod
    def around(cls, pattern: HornPattern, pointings, span_hpbw=3.0, step=DEFAULT_STEP_DEG):
        """Grid covering every pointing +- ``span_hpbw`` beamwidths.

        When all pointings share one elevation the grid collapses to that
        elevation (an azimuth cut), which keeps 0.01 deg maps small.
        """
        az = [p[0] for p in pointings]
        el = [p[1] for p in pointings]
        da = span_hpbw * pattern.az_hpbw_deg
        de = span_hpbw * pattern.el_hpbw_deg
        if len(set(el)) == 1:
            return cls(min(az) - da, max(az) + da, el[0], el[0], step)
        return cls(min(az) - da, max(az) + da, min(el) - de, max(el) + de, step)


@dataclass(frozen=True)
class GainMap:
    """Linear gains on a uniform grid; ``gain_linear[i, j]`` is at ``(az[i], el[j])``."""

    az_grid_deg: np.ndarray
    el_grid_deg: np.ndarray
    gain_linear: np.ndarray

    def __post_init__(self):
        g = self.gain_linear
        if g.shape != (len(self.az_grid_deg), len(self.el_grid_deg)):
            raise DomainError("gain matrix shape does not match the grid")
        if not np.all(np.isfinite(g)) or np.any(g < 0):
            raise DomainError("gains must be finite and non-negative")
        for axis in (self.az_grid_deg, self.el_grid_deg):
            if len(axis) > 1:
                d = np.diff(axis)
                if np.any(d <= 0) or not np.allclose(d, d[0], rtol=1e-9, atol=1e-12):
                    raise DomainError("grid spacing must be positive and uniform")

    @property
    def gain_db(self) -> np.ndarray:
        return linear_to_db(self.gain_linear)

    def peak_db(self) -> float:
        return float(linear_to_db(self.gain_linear.max()))

    def __add__(self, other: "GainMap") -> "GainMap":
        if not (
            np.array_equal(self.az_grid_deg, other.az_grid_deg)
            and np.array_equal(self.el_grid_deg, other.el_grid_deg)
        ):
            raise DomainError("cannot add gain maps on different grids")
        return GainMap(self.az_grid_deg, self.el_grid_deg, self.gain_linear + other.gain_linear)


def combine_patterns(
    pattern: HornPattern,
    pointings: Sequence[tuple[float, float]],
    grid: AngularGrid | None = None,
) -> GainMap:
    """Sum, in linear power, copies of ``pattern`` steered to each pointing.

    Contributions are accumulated in the order the pointings are given, one
    rank-1 outer product per pointing.
    """
    pointings = [(float(az), float(el)) for az, el in pointings]
    if not pointings:
        raise DomainError("at least one pointing is required")
    if grid is None:
        grid = AngularGrid.around(pattern, pointings)
    az, el = grid.az, grid.el
    g0 = pattern.gain_linear
    acc = np.zeros((az.size, el.size))
    for p_az, p_el in pointings:
        ga = _cut(azimuth_difference(az, p_az), pattern.a)
        ge = _cut(el - p_el, pattern.b)
        acc += g0 * (ga[:, None] * ge[None, :])
    return GainMap(az, el, acc)


def ripple(gmap: GainMap, az_bounds, el_bounds=None) -> float:
    """Peak-to-trough spread, in dB, of the map inside a rectangular region.

    Bounds are inclusive.  ``el_bounds=None`` takes the whole elevation grid.
    """
    eps = 1e-9
    az = gmap.az_grid_deg
    el = gmap.el_grid_deg
    ia = (az >= az_bounds[0] - eps) & (az <= az_bounds[1] + eps)
    if el_bounds is None:
        ie = np.ones(el.size, dtype=bool)
    else:
        ie = (el >= el_bounds[0] - eps) & (el <= el_bounds[1] + eps)
    region = gmap.gain_linear[np.ix_(ia, ie)]
    if region.size == 0:
        raise DomainError("region does not intersect the map grid")
    lo = region.min()
    if lo == 0.0:
        return math.inf
    return float(linear_to_db(region.max()) - linear_to_db(lo))


def _midpoint(fn, lo, hi, n):
    h = (hi - lo) / n
    x = lo + h * (np.arange(n) + 0.5)
    return float(np.sum(fn(x)) * h)


def _converged_integral(fn, lo, hi, rtol, n0=256, n_max=1 << 22):
    n = n0
    prev = _midpoint(fn, lo, hi, n)
    while n < n_max:
        n *= 2
        cur = _midpoint(fn, lo, hi, n)
        if abs(cur - prev) <= rtol * abs(cur):
            return cur
        prev = cur
    return prev


def integrated_beam_power(
    pattern: HornPattern,
    limits: float = 3.0,
    pointings: Sequence[tuple[float, float]] = ((0.0, 0.0),),
    rtol: float = 1e-6,
) -> float:
    """Integral of the (combined) pattern over +-``limits`` beamwidths per axis.

    Integrates ``sum_p f(phi - phi_p, theta - theta_p)`` over the rectangle
    ``[-L*HPBW_AZ, L*HPBW_AZ] x [-L*HPBW_EL, L*HPBW_EL]`` (clipped to +-90 deg),
    in linear gain x deg^2.  Each term factorises into an azimuth and an
    elevation integral, each evaluated by the midpoint rule with the cell count
    doubled until successive estimates agree to ``rtol``.
    """
    if not limits > 0:
        raise DomainError(f"integration limits must be positive, got {limits}")
    az_hi = min(limits * pattern.az_hpbw_deg, 90.0)
    el_hi = min(limits * pattern.el_hpbw_deg, 90.0)
    total = 0.0
    for p_az, p_el in pointings:
        ia = _converged_integral(lambda x: _cut(x - p_az, pattern.a), -az_hi, az_hi, rtol)
        ie = _converged_integral(lambda x: _cut(x - p_el, pattern.b), -el_hi, el_hi, rtol)
        total += ia * ie
    return pattern.gain_linear * total


def hpbw_grid_pointings(pattern: HornPattern, n_az: int = 3, n_el: int = 3):
    """``n_az x n_el`` pointings centred on boresight, one beamwidth apart."""
    ka = np.arange(n_az) - (n_az - 1) / 2
    ke = np.arange(n_el) - (n_el - 1) / 2
    return [
        (float(i * pattern.az_hpbw_deg), float(j * pattern.el_hpbw_deg)) for i in ka for j in ke
    ]


def beam_power_ratio_db(
    num: HornPattern,
    den: HornPattern,
    limits: float = 3.0,
    num_pointings=((0.0, 0.0),),
    den_pointings=((0.0, 0.0),),
) -> float:
    """Integrated power of ``num`` over ``den`` in dB, both scaled to the same boresight gain."""
    p_num = integrated_beam_power(num, limits, num_pointings) / num.gain_linear
    p_den = integrated_beam_power(den, limits, den_pointings) / den.gain_linear
    return float(linear_to_db(p_num / p_den))


#: 28 GHz narrowbeam receive/transmit horn.
NARROWBEAM_28GHZ = make_pattern(24.5, 10.9, 8.6)
#: 28 GHz widebeam receive horn.
WIDEBEAM_28GHZ = make_pattern(15.0, 28.8, 30.0)
#: 73 GHz horn used at both ends.
HORN_73GHZ = make_pattern(27.0, 7.0, 7.0)
