"""Independent reference computations used by the tests.

Nothing here calls the package's root finders or the reduced-system solver;
only the final certificate check is shared.
"""

import math

import numpy as np

from fansub.fan import FanPartition, FanSubsolution, OuterState, Region, TracelessSym2
from fansub.verifier import Tolerances, certify


def bisect(f, lo, hi, tol=1e-15, maxiter=500):
    flo = f(lo)
    assert flo * f(hi) < 0, "oracle bracket does not change sign"
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0 or hi - lo < tol:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def symmetric_cubic_root():
    """Middle density of the symmetric gamma=2 collision, rho^3 - rho^2 - 2 rho + 1 = 0."""
    return bisect(lambda r: r**3 - r**2 - 2 * r + 1, 1.0, 3.0)


def two_shock_gap(gamma, rho_a, rho_b):
    p = lambda r: r**gamma
    return math.sqrt((rho_b - rho_a) * (p(rho_b) - p(rho_a)) / (rho_a * rho_b))


def _sub_from_reduced(data, rho1, beta, nu_m, nu_p, eps1, eps2):
    vm1, vp1 = data.v_minus[0], data.v_plus[0]
    C1 = vm1**2 + beta**2 + eps1 + eps2
    C2 = vp1**2 + beta**2 + eps1 + eps2
    g1 = 0.5 * C1 - beta**2 - eps1
    return FanSubsolution(
        FanPartition(nu_m, beta, nu_p),
        OuterState(data.rho_minus, data.v_minus),
        OuterState(data.rho_plus, data.v_plus),
        Region(rho1, (vm1, beta), TracelessSym2(g1, vm1 * beta), C1),
        Region(rho1, (vp1, beta), TracelessSym2(g1 - 0.5 * C1 + 0.5 * C2, vp1 * beta), C2),
    )


def brute_force_feasible(
    data,
    eps1_values=np.geomspace(1e-9, 1.0, 40),
    eps2_values=np.geomspace(1e-12, 10.0, 60),
    n_rho=3000,
    tolerances=Tolerances(),
):
    """Scan the reduced ansatz exhaustively and return the certified points.

    For each eps1 both sides must satisfy the effective Hugoniot relation
    (beta - v_2)^2 = (rho1 - rho)(P1 - p)/(rho rho1) with P1 = p(rho1) + rho1 eps1.
    All four sign branches are intersected by sign changes on a log grid of
    rho1 and refined by bisection. Each root is tried with every eps2 value.
    """
    g = data.gamma
    p = lambda r: r**g
    rm, rp = data.rho_minus, data.rho_plus
    vm2, vp2 = data.v_minus[1], data.v_plus[1]
    lo, hi = min(rm, rp) * 1e-3, max(rm, rp) * 1e3
    grid = np.geomspace(lo, hi, n_rho)
    found = []

    for eps1 in eps1_values:

        def jump(r1, rho_s):
            val = (r1 - rho_s) * (p(r1) + r1 * eps1 - p(rho_s)) / (rho_s * r1)
            return math.sqrt(val) if val >= 0 else math.nan

        for sl in (-1.0, 1.0):
            for sr in (-1.0, 1.0):

                def h(r1):
                    return (vm2 + sl * jump(r1, rm)) - (vp2 + sr * jump(r1, rp))

                vals = [h(r) for r in grid]
                for a, b, fa, fb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
                    if math.isnan(fa) or math.isnan(fb) or fa * fb > 0:
                        continue
                    r1 = bisect(h, a, b) if fa * fb < 0 else (a if fa == 0 else b)
                    if min(abs(r1 - rm), abs(r1 - rp)) < 1e-12:
                        continue
                    beta = vm2 + sl * jump(r1, rm)
                    nu_m = (rm * vm2 - r1 * beta) / (rm - r1)
                    nu_p = (r1 * beta - rp * vp2) / (r1 - rp)
                    for eps2 in eps2_values:
                        sub = _sub_from_reduced(data, r1, beta, nu_m, nu_p, eps1, eps2)
                        if certify(sub, data, tolerances).passed:
                            found.append((r1, beta, eps1, eps2))
    return found
