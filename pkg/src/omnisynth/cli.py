"""Command-line entry point.

Exit status: 0 success, 1 usage error, 2 data/computation error,
3 verification failure.
"""

from __future__ import annotations

import argparse
import sys
from collections import defaultdict

import numpy as np

from . import antenna as ant
from . import io
from .channel import MODES, GeneratorConfig, generate_ensemble
from .errors import DomainError, ParseError
from .pathloss import PathLossSample, fit_ci, fit_fi
from .sweep import (
    DEFAULT_NOISE_FLOOR_DBM,
    MeasurementTable,
    full_partition_plan,
    run_sweep,
    strongest_plane_ratio,
    synthesize_omni,
)

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_VERIFY = 0, 1, 2, 3

ANTENNAS = {
    "narrow28": ant.NARROWBEAM_28GHZ,
    "wide28": ant.WIDEBEAM_28GHZ,
    "horn73": ant.HORN_73GHZ,
}

# Options that take comma lists which may start with a minus sign.
_LIST_OPTIONS = ("--pointings", "--el-pointings")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _emit(text: str, out):
    if out is None:
        sys.stdout.write(text)
    else:
        p = io.resolve_output(out)
        p.write_text(text, encoding="utf-8")


def cmd_pattern(args):
    p = ant.make_pattern(args.gain, args.az_hpbw, args.el_hpbw or args.az_hpbw)
    pts = [(a, e) for a in args.pointings for e in args.el_pointings]
    grid = ant.AngularGrid.around(p, pts, span_hpbw=args.span, step=args.step)
    gmap = ant.combine_patterns(p, pts, grid)
    _emit(io.format_gain_map(gmap), args.out)
    print(
        f"peak {gmap.peak_db() - p.boresight_gain_dbi:+.3f} dB relative to boresight gain",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_simulate(args):
    tx, rx = ANTENNAS[args.tx], ANTENNAS[args.rx]
    cfg = GeneratorConfig(
        n_mpc=args.n_mpc,
        ple=args.ple,
        sigma_db=args.sigma,
        carrier_ghz=args.freq,
        mean_delay_ns=args.delay_spread,
        el_band_deg=args.el_band,
    )
    plan = full_partition_plan(tx, rx)
    tables = []
    for i, ch in enumerate(generate_ensemble(cfg, args.seed, args.count, args.d_min, args.d_max)):
        tables.append(run_sweep(ch, tx, rx, plan, args.pt, args.mode, args.noise_floor))
        if args.channels_dir:
            io.write_channel(f"{args.channels_dir}/channel_{i:04d}.csv", ch)
    meta = {
        "campaign": f"synthetic seed={args.seed}",
        "frequency_ghz": f"{args.freq:g}",
        "tx_antenna": tx.describe(),
        "rx_antenna": rx.describe(),
        "mode": args.mode,
        "noise_floor_dbm": f"{args.noise_floor:g}",
    }
    text = io.format_measurements(MeasurementTable.concat(tables), meta)
    _emit(text, args.out)
    return EXIT_OK


def _by_link(table: MeasurementTable):
    groups = defaultdict(list)
    for i, d in enumerate(table.tr_separation_m):
        groups[float(d)].append(i)
    return {d: table[np.array(ix)] for d, ix in sorted(groups.items())}


def _floor(args, meta):
    if args.noise_floor is not None:
        return args.noise_floor
    return float(meta.get("noise_floor_dbm", DEFAULT_NOISE_FLOOR_DBM))


def cmd_synthesize(args):
    mf = io.parse_measurements(args.measurements)
    floor = _floor(args, mf.metadata)
    links = []
    samples = []
    for d, t in _by_link(mf.records).items():
        res = synthesize_omni(t, floor)
        links.append({"dist_m": d, **res.report()})
        samples.append(PathLossSample(d, res.omni_path_loss_db))
    if args.pathloss_out:
        io.write_pathloss(args.pathloss_out, samples)
    _emit(io.dumps_json({"noise_floor_dbm": floor, "links": links}), args.out)
    return EXIT_OK


def cmd_fit(args):
    samples = io.read_pathloss(args.pathloss)
    reports = []
    if args.model in ("ci", "both"):
        reports.append(fit_ci(samples, args.d0, args.freq, unbiased=args.unbiased).report())
    if args.model in ("fi", "both"):
        reports.append(fit_fi(samples, unbiased=args.unbiased).report())
    _emit(io.dumps_json(reports[0] if len(reports) == 1 else reports), args.out)
    return EXIT_OK


def cmd_planes(args):
    mf = io.parse_measurements(args.measurements)
    floor = _floor(args, mf.metadata)
    links = [
        {"dist_m": d, **strongest_plane_ratio(t, floor).report()} for d, t in _by_link(mf.records).items()
    ]
    _emit(io.dumps_json({"noise_floor_dbm": floor, "links": links}), args.out)
    return EXIT_OK


def cmd_verify(args):
    from .checks import run_all

    checks = run_all()
    for c in checks:
        print(c.line())
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="omnisynth", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("pattern", help="combined horn pattern as a gain-map CSV")
    p.add_argument("--gain", type=float, default=0.0, help="boresight gain, dBi")
    p.add_argument("--az-hpbw", type=float, required=True)
    p.add_argument("--el-hpbw", type=float, default=None, help="defaults to --az-hpbw")
    p.add_argument("--pointings", type=_floats, default=[0.0], help="azimuth pointings, e.g. -10,0,10")
    p.add_argument("--el-pointings", type=_floats, default=[0.0])
    p.add_argument("--step", type=float, default=ant.DEFAULT_STEP_DEG)
    p.add_argument("--span", type=float, default=3.0, help="grid margin in HPBWs")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_pattern)

    p = sub.add_parser("simulate", help="synthetic channels swept into a measurement CSV")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--d-min", type=float, default=30.0)
    p.add_argument("--d-max", type=float, default=200.0)
    p.add_argument("--n-mpc", type=int, default=25)
    p.add_argument("--ple", type=float, default=3.4)
    p.add_argument("--sigma", type=float, default=9.7)
    p.add_argument("--freq", type=float, default=28.0)
    p.add_argument("--delay-spread", type=float, default=30.0)
    p.add_argument("--el-band", type=float, default=20.0)
    p.add_argument("--pt", type=float, default=30.0, help="transmit power, dBm")
    p.add_argument("--tx", choices=sorted(ANTENNAS), default="wide28")
    p.add_argument("--rx", choices=sorted(ANTENNAS), default="wide28")
    p.add_argument("--mode", choices=MODES, default="sector")
    p.add_argument("--noise-floor", type=float, default=-150.0, help="gain-removed, dBm")
    p.add_argument("--channels-dir", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("synthesize", help="measurement CSV -> omni power/path loss JSON")
    p.add_argument("measurements")
    p.add_argument("--noise-floor", type=float, default=None)
    p.add_argument("--pathloss-out", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("fit", help="path-loss CSV -> CI/FI fit JSON")
    p.add_argument("pathloss")
    p.add_argument("--model", choices=("ci", "fi", "both"), default="ci")
    p.add_argument("--d0", type=float, default=1.0)
    p.add_argument("--freq", type=float, default=28.0)
    p.add_argument("--unbiased", action="store_true", help="sigma with residual degrees of freedom")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("planes", help="strongest-elevation-plane power ratio per link")
    p.add_argument("measurements")
    p.add_argument("--noise-floor", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_planes)

    p = sub.add_parser("verify", help="check the embedded tables and reference values")
    p.set_defaults(func=cmd_verify)
    return parser


def _glue_list_options(argv):
    out, i = [], 0
    while i < len(argv):
        if argv[i] in _LIST_OPTIONS and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    argv = _glue_list_options(list(sys.argv[1:] if argv is None else argv))
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except (ParseError, DomainError, OSError) as exc:
        print(f"omnisynth {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
