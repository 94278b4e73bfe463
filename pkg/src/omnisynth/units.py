"""dB <-> linear conversions.

Every power in a file is dBm and every gain dBi; all arithmetic happens in mW
and linear gain. Keep the conversions here so the sign and base conventions
live in exactly one place.
"""

import numpy as np


def db_to_linear(x_db):
    """Power ratio from dB."""
    return np.power(10.0, np.asarray(x_db, dtype=float) / 10.0)


def linear_to_db(x):
    """dB from a power ratio. Zero maps to -inf without a warning."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(x)


def dbm_to_mw(p_dbm):
    return db_to_linear(p_dbm)


def mw_to_dbm(p_mw):
    return linear_to_db(p_mw)


def wrap_azimuth(az_deg):
    """Map azimuths onto [0, 360)."""
    w = np.mod(np.asarray(az_deg, dtype=float), 360.0)
    # mod of a tiny negative number rounds up to 360 itself
    return np.where(w >= 360.0, 0.0, w)


def azimuth_difference(az_deg, ref_deg):
    """Signed azimuth offset ``az - ref`` mapped to (-180, 180]."""
    d = np.mod(np.asarray(az_deg, dtype=float) - ref_deg + 180.0, 360.0) - 180.0
    return np.where(d == -180.0, 180.0, d)
