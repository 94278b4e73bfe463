"""Flatness of horn patterns combined at HPBW spacing.

Prints the peak-over-boresight and ripple numbers for the 3-pointing azimuth
cut (10 deg HPBW) and the 3x3 grid (10 x 8 deg HPBW), and writes both gain
maps as CSV for plotting.

    python scripts/combined_pattern.py [--out-dir results]
"""

import argparse
from pathlib import Path

from omnisynth import antenna as ant
from omnisynth import io


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out-dir", default="results")
    args = ap.parse_args()
    out = Path(args.out_dir)

    p1 = ant.make_pattern(0.0, 10.0, 10.0)
    pts1 = [(-10.0, 0.0), (0.0, 0.0), (10.0, 0.0)]
    cut = ant.combine_patterns(p1, pts1, ant.AngularGrid.around(p1, pts1))
    io.write_gain_map(out / "combined_3.csv", cut)
    print(f"a for 10 deg HPBW          {p1.a:.4f}")
    print(f"3 pointings: peak          {cut.peak_db():+.4f} dB")
    for half in (5.0, 10.0):
        print(f"             ripple +-{half:<4g}  {ant.ripple(cut, (-half, half)):.4f} dB")

    p2 = ant.make_pattern(0.0, 10.0, 8.0)
    pts2 = ant.hpbw_grid_pointings(p2)
    grid = ant.combine_patterns(p2, pts2, ant.AngularGrid.around(p2, pts2, step=0.05))
    io.write_gain_map(out / "combined_3x3.csv", grid)
    print(f"3x3 pointings: peak        {grid.peak_db():+.4f} dB")
    for az, el in ((5.0, 4.0), (10.0, 8.0), (12.0, 9.0)):
        r = ant.ripple(grid, (-az, az), (-el, el))
        print(f"             ripple {2 * az:g}x{2 * el:g} deg  {r:.4f} dB")


if __name__ == "__main__":
    main()
