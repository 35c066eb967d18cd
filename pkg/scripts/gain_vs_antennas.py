"""How the quadrature gains at BER 1e-3 depend on the array sizes.

Bisects each scheme's BER 1e-3 crossing with a fixed frame budget.  Two
studies: RQSM over RSM as the transmit array grows past the square 4x4
ZF case, and GSM / QSM over SM as the receive array grows.

    python scripts/gain_vs_antennas.py --frames 100000
"""
import argparse

from singlerf.config import SchemeConfig
from singlerf.engine import SimSpec, StopRule, run_point


def ber(cfg, snr, frames, seed):
    spec = SimSpec(cfg, (snr,), StopRule(min_errors=10**9, max_bits=frames * SimSpec(cfg, (0.0,)).se,
                                         chunk_frames=min(frames, 20_000)), seed=seed)
    return run_point(spec, snr).ber


def crossing(cfg, frames, lo=0.0, hi=50.0, target=1e-3, seed=0, steps=12):
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if ber(cfg, mid, frames, seed) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--frames", type=int, default=50_000)
    args = ap.parse_args()

    print("RQSM (QPSK) over RSM (16-QAM), N_R = 4, ML detection")
    for n_t in (4, 5, 6, 8):
        rsm = crossing(SchemeConfig("rsm", n_t=n_t, n_r=4, m=16, kind="qam"), args.frames)
        rqsm = crossing(SchemeConfig("rqsm", n_t=n_t, n_r=4, m=4), args.frames)
        print(f"  N_T={n_t}: RSM {rsm:6.2f} dB  RQSM {rqsm:6.2f} dB  gain {rsm - rqsm:5.2f} dB")

    print("GSM (N_T=6, N_A=2, 8-PSK) and QSM (N_T=4, QPSK) over SM (N_T=4, 16-QAM)")
    for n_r in (1, 2, 4):
        sm = crossing(SchemeConfig("sm", n_t=4, n_r=n_r, m=16, kind="qam"), args.frames)
        gsm = crossing(SchemeConfig("gsm", n_t=6, n_a=2, n_r=n_r, m=8), args.frames)
        qsm = crossing(SchemeConfig("qsm", n_t=4, n_r=n_r, m=4), args.frames)
        print(f"  N_R={n_r}: GSM gain {sm - gsm:5.2f} dB  QSM gain {sm - qsm:5.2f} dB")


if __name__ == "__main__":
    main()
