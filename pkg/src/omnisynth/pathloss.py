"""Free-space, close-in (CI) and floating-intercept (FI) path-loss models.

CI::

    PL(d) = FSPL(d0) + 10 n log10(d / d0) + X_sigma

FI::

    PL(d) = alpha + 10 beta log10(d) + X_sigma

``sigma`` is reported as the population RMS of the fit residuals by default
(divide by the sample count).  Pass ``unbiased=True`` to divide by the
residual degrees of freedom instead (count - 1 for CI, count - 2 for FI).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .errors import DegenerateDesignError, DomainError

SPEED_OF_LIGHT = 299_792_458.0


def fspl(distance_m, frequency_ghz):
    """Free-space path loss ``20 log10(4 pi d / lambda)`` in dB."""
    d = np.asarray(distance_m, dtype=float)
    f = np.asarray(frequency_ghz, dtype=float)
    if np.any(~(d > 0)) or np.any(~(f > 0)):
        raise DomainError("distance and frequency must be positive")
    wavelength = SPEED_OF_LIGHT / (f * 1e9)
    out = 20.0 * np.log10(4.0 * math.pi * d / wavelength)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class PathLossSample:
    distance_m: float
    path_loss_db: float

    def __post_init__(self):
        if not self.distance_m > 0:
            raise DomainError(f"distance must be positive, got {self.distance_m}")
        if not math.isfinite(self.path_loss_db):
            raise DomainError("path loss must be finite")


def _as_arrays(samples):
    if isinstance(samples, np.ndarray) and samples.ndim == 2:
        d, pl = samples[:, 0].astype(float), samples[:, 1].astype(float)
    else:
        samples = list(samples)
        d = np.array([s.distance_m for s in samples], dtype=float)
        pl = np.array([s.path_loss_db for s in samples], dtype=float)
    if d.size == 0:
        raise DegenerateDesignError("no samples to fit")
    if np.any(~(d > 0)) or np.any(~np.isfinite(pl)):
        raise DomainError("samples need positive distances and finite path losses")
    return d, pl


def _rms(resid, dof_used, unbiased):
    denom = resid.size - dof_used if unbiased else resid.size
    if denom <= 0:
        return 0.0 if not np.any(resid) else math.nan
    return math.sqrt(math.fsum(resid**2) / denom)


@dataclass(frozen=True)
class CiFit:
    ple_n: float
    sigma_db: float
    d0_m: float
    frequency_ghz: float
    n_samples: int = 0
    d_min_m: float = math.nan
    d_max_m: float = math.nan
    warnings: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if not self.d0_m > 0:
            raise DomainError("d0 must be positive")
        if self.sigma_db < 0:
            raise DomainError("sigma must be non-negative")

    def report(self) -> dict:
        out = asdict(self)
        out["warnings"] = list(self.warnings)
        return {"model": "ci", **out}


@dataclass(frozen=True)
class FiFit:
    alpha_db: float
    beta: float
    sigma_db: float
    n_samples: int = 0
    d_min_m: float = math.nan
    d_max_m: float = math.nan

    def __post_init__(self):
        if self.sigma_db < 0:
            raise DomainError("sigma must be non-negative")

    def report(self) -> dict:
        return {"model": "fi", **asdict(self)}


def fit_ci(
    samples: Sequence[PathLossSample] | np.ndarray,
    d0_m: float = 1.0,
    frequency_ghz: float = 28.0,
    unbiased: bool = False,
) -> CiFit:
    """Minimum mean-square-error path-loss exponent about the free-space anchor.

    With ``D_i = 10 log10(d_i / d0)`` the single-parameter least-squares
    solution is ``n = sum((PL_i - FSPL(d0)) D_i) / sum(D_i^2)``.
    """
    d, pl = _as_arrays(samples)
    if not d0_m > 0:
        raise DomainError("d0 must be positive")
    D = 10.0 * np.log10(d / d0_m)
    sdd = math.fsum(D * D)
    if sdd == 0.0:
        raise DegenerateDesignError("every sample sits at d0; the exponent is undetermined")
    anchor = fspl(d0_m, frequency_ghz)
    y = pl - anchor
    n = math.fsum(y * D) / sdd
    resid = y - n * D
    warnings = ()
    if np.any(d < d0_m):
        warnings = (f"{int(np.sum(d < d0_m))} sample(s) closer than d0 = {d0_m} m",)
    return CiFit(
        ple_n=n,
        sigma_db=_rms(resid, 1, unbiased),
        d0_m=float(d0_m),
        frequency_ghz=float(frequency_ghz),
        n_samples=int(d.size),
        d_min_m=float(d.min()),
        d_max_m=float(d.max()),
        warnings=warnings,
    )


def fit_fi(samples: Sequence[PathLossSample] | np.ndarray, unbiased: bool = False) -> FiFit:
    """Ordinary least squares of PL on ``10 log10(d)``.

    A negative slope is a legitimate outcome for clustered data and is
    returned as is.
    """
    d, pl = _as_arrays(samples)
    x = 10.0 * np.log10(d)
    xc = x - x.mean()
    sxx = math.fsum(xc * xc)
    if d.size < 2 or sxx == 0.0 or np.all(d == d[0]):
        raise DegenerateDesignError("need samples at two or more distinct distances")
    beta = math.fsum(xc * (pl - pl.mean())) / sxx
    alpha = pl.mean() - beta * x.mean()
    resid = pl - (alpha + beta * x)
    return FiFit(
        alpha_db=float(alpha),
        beta=float(beta),
        sigma_db=_rms(resid, 2, unbiased),
        n_samples=int(d.size),
        d_min_m=float(d.min()),
        d_max_m=float(d.max()),
    )


def predict(model: CiFit | FiFit, distance_m):
    """Mean path loss (no shadowing term) at ``distance_m``."""
    d = np.asarray(distance_m, dtype=float)
    if np.any(~(d > 0)):
        raise DomainError("distance must be positive")
    if isinstance(model, CiFit):
        out = fspl(model.d0_m, model.frequency_ghz) + 10.0 * model.ple_n * np.log10(d / model.d0_m)
    elif isinstance(model, FiFit):
        out = model.alpha_db + 10.0 * model.beta * np.log10(d)
    else:
        raise TypeError(f"unsupported model {type(model).__name__}")
    return float(out) if np.ndim(out) == 0 else out


def residuals(model: CiFit | FiFit, samples) -> np.ndarray:
    d, pl = _as_arrays(samples)
    return pl - predict(model, d)
