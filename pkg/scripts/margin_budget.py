"""Largest certified margins as the gap approaches the two-shock threshold.

Under the contact ansatz the determinant margin of the matrix condition is
eps1 * eps2, and the energy inequalities bound eps2 by a multiple of eps1.
Near T both shrink, so the determinant margin falls below any fixed strict
tolerance. This prints, per dataset and gap offset, the best determinant
margin over a fine eps1 grid together with the number of certified points.

    python scripts/margin_budget.py
"""

import argparse

import numpy as np

from fansub.riemann import RiemannData, hugoniot_middle_state
from fansub.subsolution import NewtonError, eps2_interval, search, solve_reduced
from fansub.thresholds import two_shock_threshold

DATASETS = {
    "A": (2.0, 1.0, 4.0, 0.0, 1.0, 0.0),
    "B": (1.4, 2.0, 0.5, 1.0, -1.0, 0.3),
    "C": (1.0, 1.0, 3.0, 0.5, 2.0, -1.0),
    "D": (3.0, 0.7, 1.5, -2.0, 0.5, 0.0),
    "E": (5.0 / 3.0, 5.0, 1.0, 0.0, 3.0, 1.0),
}


def best_det_margin(data, grid):
    best = 0.0
    guess = hugoniot_middle_state(data)
    for eps1 in grid:
        try:
            rho1, beta, nm, npl = solve_reduced(data, eps1, guess)
        except (NewtonError, ArithmeticError):
            continue
        guess = (rho1, beta)
        iv = eps2_interval(data, rho1, beta, eps1)
        if iv.empty or not nm < beta < npl:
            continue
        best = max(best, eps1 * min(iv.hi, 1e6))
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--offsets", type=float, nargs="+", default=[0.05, 0.1, 0.2, 0.5, 1.0])
    ap.add_argument("--n-eps1", type=int, default=200)
    args = ap.parse_args()
    grid = np.geomspace(1e-10, 1.0, args.n_eps1)
    print(f"{'set':>3} {'offset':>7} {'max eps1*eps2':>14} {'certified':>9}")
    for name, (gamma, rm, rp, vm1, vp1, vp2) in DATASETS.items():
        base = RiemannData(rm, rp, (vm1, 0.0), (vp1, vp2), gamma)
        T = two_shock_threshold(base.eos, rm, rp)
        for off in args.offsets:
            data = base.with_gap(T + off)
            print(f"{name:>3} {off:7g} {best_det_margin(data, grid):14.3e} {len(search(data)):9d}")


if __name__ == "__main__":
    main()
