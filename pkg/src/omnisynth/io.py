"""CSV/JSON readers and writers.

Formats
-------
measurements   ``tx_az,tx_el,rx_az,rx_el,pr_dbm,gt_dbi,gr_dbi,pt_dbm,dist_m``
               (6 decimals; optional leading ``# key: value`` metadata lines)
gain map       ``az_deg,el_deg,gain_db`` (6 decimals, azimuth-major)
channel        ``amp_sqrt_mw,phase_rad,delay_ns,aod_az,aod_el,aoa_az,aoa_el``
               plus a ``.json`` sidecar holding carrier, distance and Pt
PDP            ``delay_ns,power_mw``
path loss      ``distance_m,path_loss_db``
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .antenna import GainMap
from .channel import ChannelRealization, PowerDelayProfile
from .errors import DomainError, ParseError
from .pathloss import PathLossSample
from .sweep import MeasurementTable

MEASUREMENT_HEADER = ("tx_az", "tx_el", "rx_az", "rx_el", "pr_dbm", "gt_dbi", "gr_dbi", "pt_dbm", "dist_m")
CHANNEL_HEADER = ("amp_sqrt_mw", "phase_rad", "delay_ns", "aod_az", "aod_el", "aoa_az", "aoa_el")
GAINMAP_HEADER = ("az_deg", "el_deg", "gain_db")
PDP_HEADER = ("delay_ns", "power_mw")
PATHLOSS_HEADER = ("distance_m", "path_loss_db")

OUTPUT_DIR_ENV = "OMNISYNTH_OUTPUT_DIR"


def resolve_output(path) -> Path:
    """Relative output paths land under ``$OMNISYNTH_OUTPUT_DIR`` when it is set."""
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def _f6(x) -> str:
    return f"{float(x):.6f}"


def _f17(x) -> str:
    return repr(float(x))


def _clean_json(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {str(k): _clean_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean_json(v) for v in obj]
    if isinstance(obj, np.generic):
        return _clean_json(obj.item())
    return obj


def dumps_json(obj) -> str:
    return json.dumps(_clean_json(obj), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_json(obj, path) -> Path:
    p = resolve_output(path)
    p.write_text(dumps_json(obj), encoding="utf-8")
    return p


@dataclass
class MeasurementFile:
    records: MeasurementTable
    metadata: dict = field(default_factory=dict)


def format_measurements(table: MeasurementTable, metadata: dict | None = None) -> str:
    lines = [f"# {k}: {v}" for k, v in (metadata or {}).items()]
    lines.append(",".join(MEASUREMENT_HEADER))
    cols = [table.tx_az, table.tx_el, table.rx_az, table.rx_el, table.pr_dbm,
            table.gt_dbi, table.gr_dbi, table.pt_dbm, table.tr_separation_m]
    for row in zip(*cols):
        lines.append(",".join(_f6(v) for v in row))
    return "\n".join(lines) + "\n"


def write_measurements(path, table: MeasurementTable, metadata: dict | None = None) -> Path:
    p = resolve_output(path)
    p.write_text(format_measurements(table, metadata), encoding="utf-8")
    return p


def _read_lines(path):
    try:
        return Path(path).read_text(encoding="utf-8").splitlines()
    except FileNotFoundError:
        raise ParseError("file not found", path=path) from None


def _split_header(lines, path, expected):
    """Skip ``#`` metadata lines; return (metadata, header line number, data start)."""
    meta = {}
    i = 0
    while i < len(lines) and (lines[i].startswith("#") or not lines[i].strip()):
        text = lines[i].lstrip("#").strip()
        if ":" in text:
            k, v = text.split(":", 1)
            meta[k.strip()] = v.strip()
        i += 1
    if i == len(lines):
        raise ParseError("missing header", path=path, line=i + 1)
    header = [h.strip() for h in next(csv.reader([lines[i]]))]
    for col, name in enumerate(expected, start=1):
        if col > len(header) or header[col - 1] != name:
            raise ParseError(f"expected column {name!r}", path=path, line=i + 1, column=col)
    return meta, i + 1, header


def _numeric_rows(lines, start, path, header):
    rows, where = [], []
    for lineno, fields_ in enumerate(csv.reader(lines[start:]), start=start + 1):
        if not fields_ or (len(fields_) == 1 and not fields_[0].strip()):
            continue
        vals = []
        for col, name in enumerate(header, start=1):
            if col > len(fields_) or not fields_[col - 1].strip():
                raise ParseError(f"missing value for {name}", path=path, line=lineno, column=col)
            try:
                v = float(fields_[col - 1])
            except ValueError:
                raise ParseError(
                    f"non-numeric {name}: {fields_[col - 1]!r}", path=path, line=lineno, column=col
                ) from None
            if not math.isfinite(v):
                raise ParseError(f"non-finite {name}", path=path, line=lineno, column=col)
            vals.append(v)
        if len(fields_) > len(header):
            raise ParseError("too many fields", path=path, line=lineno, column=len(header) + 1)
        rows.append(vals)
        where.append(lineno)
    return np.array(rows, dtype=float).reshape(-1, len(header)), where


def parse_measurements(path) -> MeasurementFile:
    """Read and validate a measurement CSV.

    Raises :class:`ParseError` naming the line and column of the first bad
    field, a non-positive distance, or a transmit power that changes within
    one link (rows sharing a distance).
    """
    lines = _read_lines(path)
    meta, start, header = _split_header(lines, path, MEASUREMENT_HEADER)
    data, where = _numeric_rows(lines, start, path, MEASUREMENT_HEADER)
    dist_col = MEASUREMENT_HEADER.index("dist_m")
    pt_col = MEASUREMENT_HEADER.index("pt_dbm")
    pt_by_link = {}
    for row, lineno in zip(data, where):
        if not row[dist_col] > 0:
            raise ParseError("distance must be positive", path=path, line=lineno, column=dist_col + 1)
        first = pt_by_link.setdefault(row[dist_col], row[pt_col])
        if row[pt_col] != first:
            raise ParseError(
                "transmit power differs within one TX-RX link", path=path, line=lineno, column=pt_col + 1
            )
    table = MeasurementTable(*(data[:, k] for k in range(len(MEASUREMENT_HEADER))))
    return MeasurementFile(records=table, metadata=meta)


def write_gain_map(path, gmap: GainMap) -> Path:
    p = resolve_output(path)
    p.write_text(format_gain_map(gmap), encoding="utf-8")
    return p


def format_gain_map(gmap: GainMap) -> str:
    lines = [",".join(GAINMAP_HEADER)]
    gdb = gmap.gain_db
    for i, az in enumerate(gmap.az_grid_deg):
        for j, el in enumerate(gmap.el_grid_deg):
            g = gdb[i, j]
            lines.append(f"{_f6(az)},{_f6(el)},{_f6(g) if math.isfinite(g) else '-inf'}")
    return "\n".join(lines) + "\n"


def read_gain_map(path) -> GainMap:
    lines = _read_lines(path)
    _, start, header = _split_header(lines, path, GAINMAP_HEADER)
    rows = list(csv.reader(lines[start:]))
    data = np.array([[float(v) for v in r] for r in rows if r], dtype=float)
    az = np.unique(data[:, 0])
    el = np.unique(data[:, 1])
    g = (10.0 ** (data[:, 2] / 10.0)).reshape(az.size, el.size)
    return GainMap(az, el, g)


def write_channel(path, channel: ChannelRealization) -> Path:
    """Write the components CSV and a ``.json`` sidecar next to it."""
    p = resolve_output(path)
    lines = [",".join(CHANNEL_HEADER)]
    cols = [channel.amplitude, channel.phase_rad, channel.delay_ns, channel.aod_az_deg,
            channel.aod_el_deg, channel.aoa_az_deg, channel.aoa_el_deg]
    for row in zip(*cols):
        lines.append(",".join(_f17(v) for v in row))
    p.write_text("\n".join(lines) + "\n", encoding="utf-8")
    side = {
        "carrier_ghz": channel.carrier_ghz,
        "tr_separation_m": channel.tr_separation_m,
        "pt_dbm": channel.pt_dbm,
    }
    p.with_suffix(".json").write_text(dumps_json(side), encoding="utf-8")
    return p


def read_channel(path) -> ChannelRealization:
    lines = _read_lines(path)
    _, start, header = _split_header(lines, path, CHANNEL_HEADER)
    data, _ = _numeric_rows(lines, start, path, CHANNEL_HEADER)
    try:
        side = json.loads(Path(path).with_suffix(".json").read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ParseError("missing JSON sidecar", path=Path(path).with_suffix(".json")) from None
    try:
        return ChannelRealization(
            *(data[:, k] for k in range(len(CHANNEL_HEADER))),
            carrier_ghz=float(side["carrier_ghz"]),
            tr_separation_m=float(side["tr_separation_m"]),
            pt_dbm=float(side.get("pt_dbm", 0.0)),
        )
    except (KeyError, DomainError) as exc:
        raise ParseError(f"invalid channel: {exc}", path=path) from None


def write_pdp(path, pdp: PowerDelayProfile) -> Path:
    p = resolve_output(path)
    lines = [",".join(PDP_HEADER)]
    for idx, pw in pdp.bins:
        lines.append(f"{_f6(idx * pdp.bin_width_ns)},{_f17(pw)}")
    p.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return p


def write_pathloss(path, samples) -> Path:
    p = resolve_output(path)
    lines = [",".join(PATHLOSS_HEADER)]
    for s in samples:
        lines.append(f"{_f6(s.distance_m)},{_f6(s.path_loss_db)}")
    p.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return p


def read_pathloss(path) -> list[PathLossSample]:
    lines = _read_lines(path)
    _, start, header = _split_header(lines, path, PATHLOSS_HEADER)
    data, where = _numeric_rows(lines, start, path, PATHLOSS_HEADER)
    out = []
    for (d, pl), lineno in zip(data, where):
        if not d > 0:
            raise ParseError("distance must be positive", path=path, line=lineno, column=1)
        out.append(PathLossSample(float(d), float(pl)))
    return out
