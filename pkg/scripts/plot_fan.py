"""Draw the classical wave fan and, if one exists, a certified subsolution fan.

    python scripts/plot_fan.py --rho-minus 1 --rho-plus 4 --v-minus 0,4.5 --v-plus 1,0 --gamma 2 -o fan.png
"""

import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from fansub.cli import plot_data  # noqa: E402
from fansub.riemann import RiemannData  # noqa: E402
from fansub.subsolution import search  # noqa: E402

COLORS = {"shock": "C3", "rarefaction": "C0", "contact": "k"}


def _vec(text):
    a, b = text.split(",")
    return float(a), float(b)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rho-minus", type=float, required=True)
    ap.add_argument("--rho-plus", type=float, required=True)
    ap.add_argument("--v-minus", type=_vec, required=True)
    ap.add_argument("--v-plus", type=_vec, required=True)
    ap.add_argument("--gamma", type=float, required=True)
    ap.add_argument("-o", "--output", default="fan.png")
    args = ap.parse_args()
    data = RiemannData(args.rho_minus, args.rho_plus, args.v_minus, args.v_plus, args.gamma)

    fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharey=True)
    geo = plot_data(data)
    ax = axes[0]
    for line in geo["polylines"]:
        (x0, t0), (x1, t1) = line["points"]
        ax.plot([x0, x1], [t0, t1], color=COLORS[line["kind"]], lw=1.5 if line["kind"] != "rarefaction" else 0.8)
    if "vacuum" in geo:
        lo, hi = geo["vacuum"]["slopes"]
        ax.fill([0, lo, hi], [0, 1, 1], color="0.85", label="vacuum")
        ax.legend()
    ax.set_title(f"classical fan: {geo['pattern']}")
    ax.set_xlabel("x2")
    ax.set_ylabel("t")

    ax = axes[1]
    found = search(data).found
    if found:
        w = found[len(found) // 2]
        for nu, style in zip(w.subsolution.partition.slopes, ("C3", "k", "C3")):
            ax.plot([0, nu], [0, 1], color=style)
        ax.set_title(f"subsolution fan, eps1={w.point.eps1:.1e}")
    else:
        ax.set_title("no certified subsolution")
    ax.set_xlabel("x2")
    fig.tight_layout()
    fig.savefig(args.output, dpi=120)
    print(f"wrote {args.output}")


if __name__ == "__main__":
    main()
