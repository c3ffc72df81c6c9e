"""Feasibility onset below the two-shock gap as the right normal velocity varies.

For rho_- = 1, rho_+ = 4 and v_+ = (1, v_{+2}) this runs the threshold
estimate for each v_{+2} and prints T, the estimate and the bracket. Frames
where nothing is certified just below T are reported as such.

    python scripts/threshold_frames.py --gamma 2 --v-plus-2 0 -1 -2 -5
"""

import argparse

from fansub.eos import Eos
from fansub.thresholds import ThresholdError, estimate_vbar


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--gamma", type=float, nargs="+", default=[2.0, 1.0])
    ap.add_argument("--rho-minus", type=float, default=1.0)
    ap.add_argument("--rho-plus", type=float, default=4.0)
    ap.add_argument("--v-plus-1", type=float, default=1.0)
    ap.add_argument("--v-plus-2", type=float, nargs="+", default=[0.0, -0.5, -1.0, -2.0, -5.0])
    ap.add_argument("--bisect-tol", type=float, default=1e-3)
    args = ap.parse_args()

    print(f"{'gamma':>6} {'v_+2':>7} {'T':>10} {'Vbar':>10}  bracket / note")
    for gamma in args.gamma:
        eos = Eos(gamma)
        for vp2 in args.v_plus_2:
            try:
                rep = estimate_vbar(
                    eos, args.rho_minus, args.rho_plus, (args.v_plus_1, vp2), 0.0, args.bisect_tol
                )
            except ThresholdError as exc:
                print(f"{gamma:6g} {vp2:7g} {'':>10} {'-':>10}  {exc}")
                continue
            lo, hi = rep.bracket
            flag = "" if rep.monotone else f"  non-monotone at {rep.violations}"
            print(f"{gamma:6g} {vp2:7g} {rep.T:10.5f} {rep.vbar_estimate:10.5f}  [{lo:.5f}, {hi:.5f}]{flag}")


if __name__ == "__main__":
    main()
