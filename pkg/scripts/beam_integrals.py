"""Integrated beam power of the 28 GHz horns at equal boresight gain.

    python scripts/beam_integrals.py
"""

from omnisynth import antenna as ant

NB, WB = ant.NARROWBEAM_28GHZ, ant.WIDEBEAM_28GHZ


def main():
    for lim in (1.0, 2.0, 3.0, 5.0):
        r = ant.beam_power_ratio_db(WB, NB, lim)
        nine = ant.beam_power_ratio_db(NB, WB, lim, ant.hpbw_grid_pointings(NB))
        print(f"+-{lim:g} HPBW  wide/narrow {r:7.3f} dB ({10 ** (r / 10):5.2f}x)   3x3 narrow vs wide {nine:+.3f} dB")
    print(f"boresight gain gap {NB.boresight_gain_dbi - WB.boresight_gain_dbi:.1f} dB")


if __name__ == "__main__":
    main()
