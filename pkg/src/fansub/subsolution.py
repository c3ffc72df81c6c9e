"""Construction of admissible fan subsolutions under the contact ansatz.

Both middle wedges carry the same density rho1 and normal velocity beta; their
tangential velocities are v_{-1} and v_{+1}, so the contact discontinuity sits
on the middle interface nu_1 = beta. With the slack variables

    eps1 = C1/2 - gamma1 - beta**2,    eps2 = C1 - v_{-1}**2 - beta**2 - eps1

the relaxed Rankine-Hugoniot system collapses to two equations in
(rho1, beta) for given eps1, and the energy inequalities become affine in eps2.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from fansub.eos import Eos
from fansub.fan import FanPartition, FanSubsolution, OuterState, Region, TracelessSym2
from fansub.riemann import RiemannData, RootFindingError, hugoniot_middle_state
from fansub.verifier import Certificate, Tolerances, certify

__all__ = [
    "AnsatzPoint",
    "FanPartition",
    "FanSubsolution",
    "Interval",
    "NewtonError",
    "OrderingError",
    "SearchResult",
    "SingularEliminationError",
    "TracelessSym2",
    "Witness",
    "assemble",
    "default_eps1_grid",
    "eps2_interval",
    "reduced_residual",
    "search",
    "solve_reduced",
]

log = logging.getLogger(__name__)

SINGULAR_RTOL = 1e-14


class SingularEliminationError(ArithmeticError):
    """rho1 coincides with an outer density, so nu_-/nu_+ cannot be eliminated."""


class NewtonError(ArithmeticError):
    def __init__(self, message, iterate):
        super().__init__(f"{message} (last iterate rho1={iterate[0]!r}, beta={iterate[1]!r})")
        self.iterate = iterate


class OrderingError(ValueError):
    """nu_- < beta < nu_+ fails, so the candidate has no fan partition."""


@dataclass(frozen=True)
class AnsatzPoint:
    rho1: float
    beta: float
    nu_minus: float
    nu_plus: float
    eps1: float
    eps2: float


class Interval(NamedTuple):
    lo: float
    hi: float

    @property
    def empty(self) -> bool:
        return not self.lo < self.hi

    def pick(self, cap: float = 1.0) -> float:
        """Midpoint, but never more than ``cap`` above the lower end."""
        return min(0.5 * (self.lo + self.hi), self.lo + cap)


def default_eps1_grid() -> np.ndarray:
    return np.geomspace(1e-8, 1e-1, 16)


def _check_elimination(data: RiemannData, rho1):
    for rho in (data.rho_minus, data.rho_plus):
        if abs(rho1 - rho) <= SINGULAR_RTOL * rho:
            raise SingularEliminationError(f"rho1={rho1!r} equals outer density {rho!r}")


def _eliminated_speeds(data: RiemannData, rho1, beta):
    rm, rp = data.rho_minus, data.rho_plus
    vm2, vp2 = data.v_minus[1], data.v_plus[1]
    nu_m = (rm * vm2 - rho1 * beta) / (rm - rho1)
    nu_p = (rho1 * beta - rp * vp2) / (rho1 - rp)
    return nu_m, nu_p


def reduced_residual(data: RiemannData, rho1, beta, eps1, eos: Optional[Eos] = None):
    """Normal-momentum residuals on the outer interfaces after eliminating nu_-/nu_+.

    Returns (r_left, r_right); both vanish on a solution of the reduced system.
    """
    eos = eos or data.eos
    _check_elimination(data, rho1)
    rm, rp = data.rho_minus, data.rho_plus
    vm2, vp2 = data.v_minus[1], data.v_plus[1]
    p1 = float(eos.pressure(rho1))
    A = rm * vm2 - rho1 * beta
    B = rho1 * beta - rp * vp2
    r_left = A * A / (rm - rho1) - (rm * vm2**2 - rho1 * (beta**2 + eps1) + float(eos.pressure(rm)) - p1)
    r_right = B * B / (rho1 - rp) - (rho1 * (beta**2 + eps1) - rp * vp2**2 + p1 - float(eos.pressure(rp)))
    return r_left, r_right


def _reduced_jacobian(data: RiemannData, rho1, beta, eps1, eos: Eos):
    rm, rp = data.rho_minus, data.rho_plus
    vm2, vp2 = data.v_minus[1], data.v_plus[1]
    dp1 = float(eos.dpressure(rho1))
    A = rm * vm2 - rho1 * beta
    B = rho1 * beta - rp * vp2
    dl = rm - rho1
    dr = rho1 - rp
    return np.array(
        [
            [-2 * A * beta / dl + A * A / dl**2 + beta**2 + eps1 + dp1, -2 * A * rho1 / dl + 2 * rho1 * beta],
            [2 * B * beta / dr - B * B / dr**2 - (beta**2 + eps1) - dp1, 2 * B * rho1 / dr - 2 * rho1 * beta],
        ]
    )


def _fd_jacobian(data: RiemannData, x, r, eps1, eos: Eos):
    J = np.empty((2, 2))
    for j in range(2):
        h = 1e-7 * max(1.0, abs(x[j]))
        xh = x.copy()
        xh[j] += h
        J[:, j] = (np.array(reduced_residual(data, xh[0], xh[1], eps1, eos)) - r) / h
    return J


def _newton_step(data: RiemannData, x, r, eps1, eos: Eos):
    for jac in (_reduced_jacobian(data, x[0], x[1], eps1, eos), None):
        try:
            if jac is None:
                jac = _fd_jacobian(data, x, r, eps1, eos)
            step = np.linalg.solve(jac, -r)
        except (np.linalg.LinAlgError, ArithmeticError):
            continue
        if np.all(np.isfinite(step)):
            return step
    raise NewtonError("singular Jacobian", tuple(x))


def _residual_scale(data: RiemannData, rho1, beta, eos: Eos):
    terms = (
        data.rho_minus * data.v_minus[1] ** 2,
        data.rho_plus * data.v_plus[1] ** 2,
        rho1 * beta**2,
        float(eos.pressure(rho1)),
        float(eos.pressure(data.rho_minus)),
        float(eos.pressure(data.rho_plus)),
    )
    return max(1.0, *terms)


def solve_reduced(
    data: RiemannData,
    eps1,
    guess: Tuple[float, float],
    eos: Optional[Eos] = None,
    tol=1e-11,
    maxiter=50,
):
    """Newton iteration on the reduced system from ``guess`` = (rho1, beta).

    Steps are halved while they increase the residual or leave rho1 > 0.
    The tolerance is absolute, relaxed only to the rounding floor of the
    largest term. Returns (rho1, beta, nu_minus, nu_plus).
    """
    eos = eos or data.eos
    x = np.array(guess, dtype=float)
    r = np.array(reduced_residual(data, x[0], x[1], eps1, eos))
    for _ in range(maxiter):
        floor = 64 * np.finfo(float).eps * _residual_scale(data, x[0], x[1], eos)
        if np.max(np.abs(r)) <= max(tol, floor):
            nu_m, nu_p = _eliminated_speeds(data, x[0], x[1])
            return float(x[0]), float(x[1]), float(nu_m), float(nu_p)
        step = _newton_step(data, x, r, eps1, eos)
        norm = np.max(np.abs(r))
        lam = 1.0
        for _ in range(40):
            trial = x + lam * step
            rt = None
            if trial[0] > 0:
                try:
                    rt = np.array(reduced_residual(data, trial[0], trial[1], eps1, eos))
                except ArithmeticError:
                    pass
            if rt is not None and (np.max(np.abs(rt)) < norm or lam < 1e-3):
                break
            lam *= 0.5
        else:
            raise NewtonError("line search failed", tuple(x))
        x, r = trial, rt
    raise NewtonError(f"no convergence in {maxiter} iterations", tuple(x))


def _affine_coefficients(data: RiemannData, rho1, beta, eps1, eos: Eos):
    """Energy inequalities on the outer interfaces as a * eps2 <= b.

    Returns ((a_left, b_left), (a_right, b_right)).
    """
    _check_elimination(data, rho1)
    rm, rp = data.rho_minus, data.rho_plus
    vm2, vp2 = data.v_minus[1], data.v_plus[1]
    pm, p1, pp = (float(eos.pressure(r)) for r in (rm, rho1, rp))
    em, e1, ep = (float(eos.internal_energy(r)) for r in (rm, rho1, rp))

    # mass fluxes into the middle wedges through the left and right interfaces
    k_left = rm * rho1 * (beta - vm2) / (rm - rho1)
    k_right = rho1 * rp * (vp2 - beta) / (rho1 - rp)

    lhs_left = (beta - vm2) * (pm + p1) - 2.0 * k_left * (em - e1)
    lhs_right = (vp2 - beta) * (p1 + pp) - 2.0 * k_right * (e1 - ep)

    b_left = eps1 * rho1 * (vm2 + beta) - eps1 * k_left - lhs_left
    b_right = -eps1 * rho1 * (vp2 + beta) + eps1 * k_right - lhs_right
    return (k_left, b_left), (-k_right, b_right)


def _bound(a, b) -> Interval:
    """Solution set of a * x <= b intersected with x > 0."""
    if a > 0:
        return Interval(0.0, b / a)
    if a < 0:
        return Interval(max(0.0, b / a), math.inf)
    return Interval(0.0, math.inf) if b >= 0 else Interval(0.0, 0.0)


def eps2_interval(data: RiemannData, rho1, beta, eps1, eos: Optional[Eos] = None, sides=False):
    """Open interval of eps2 > 0 allowed by the two outer energy inequalities.

    With ``sides=True`` also returns the intervals allowed by each side alone.
    """
    eos = eos or data.eos
    left, right = _affine_coefficients(data, rho1, beta, eps1, eos)
    il, ir = _bound(*left), _bound(*right)
    both = Interval(max(il.lo, ir.lo), min(il.hi, ir.hi))
    if both.empty:
        both = Interval(both.lo, both.lo)
    return (both, il, ir) if sides else both


def assemble(data: RiemannData, point: AnsatzPoint) -> FanSubsolution:
    """Full piecewise-constant triple from a reduced point."""
    if not point.nu_minus < point.beta < point.nu_plus:
        raise OrderingError(
            f"nu_minus={point.nu_minus!r}, beta={point.beta!r}, nu_plus={point.nu_plus!r}"
        )
    vm1, vp1 = data.v_minus[0], data.v_plus[0]
    beta, rho1 = point.beta, point.rho1
    slack = point.eps1 + point.eps2
    C1 = vm1**2 + beta**2 + slack
    C2 = vp1**2 + beta**2 + slack
    g1 = 0.5 * C1 - beta**2 - point.eps1
    g2 = g1 - 0.5 * C1 + 0.5 * C2
    return FanSubsolution(
        FanPartition(point.nu_minus, beta, point.nu_plus),
        OuterState(data.rho_minus, data.v_minus),
        OuterState(data.rho_plus, data.v_plus),
        Region(rho1, (vm1, beta), TracelessSym2(g1, vm1 * beta), C1),
        Region(rho1, (vp1, beta), TracelessSym2(g2, vp1 * beta), C2),
    )


@dataclass
class Witness:
    point: AnsatzPoint
    subsolution: FanSubsolution
    certificate: Certificate


@dataclass
class SearchResult:
    found: List[Witness] = field(default_factory=list)
    diagnostics: List[dict] = field(default_factory=list)

    def __len__(self):
        return len(self.found)

    def __iter__(self):
        return iter(self.found)

    @property
    def subsolutions(self) -> List[FanSubsolution]:
        return [w.subsolution for w in self.found]


def continuation_seed(data: RiemannData):
    """Root of the reduced system at eps1 = 0 (the two Hugoniot curves meeting)."""
    return hugoniot_middle_state(data)


def search(
    data: RiemannData,
    eps1_grid: Optional[Sequence[float]] = None,
    eos: Optional[Eos] = None,
    tolerances: Tolerances = Tolerances(),
) -> SearchResult:
    """Scan eps1 upwards by continuation and keep every certified candidate."""
    eos = eos or data.eos
    grid = sorted(float(e) for e in (default_eps1_grid() if eps1_grid is None else eps1_grid))
    result = SearchResult()
    try:
        guess = continuation_seed(data)
    except RootFindingError as exc:
        result.diagnostics.append({"eps1": 0.0, "stage": "seed", "error": str(exc)})
        return result

    for eps1 in grid:
        diag = {"eps1": eps1}
        try:
            rho1, beta, nu_m, nu_p = solve_reduced(data, eps1, guess, eos)
        except ArithmeticError as exc:
            diag.update(stage="solve_reduced", error=str(exc))
            result.diagnostics.append(diag)
            continue
        guess = (rho1, beta)
        interval = eps2_interval(data, rho1, beta, eps1, eos)
        if interval.empty:
            diag.update(stage="eps2_interval", error=f"empty interval {tuple(interval)}")
            result.diagnostics.append(diag)
            continue
        point = AnsatzPoint(rho1, beta, nu_m, nu_p, eps1, interval.pick())
        try:
            sub = assemble(data, point)
        except OrderingError as exc:
            diag.update(stage="ordering", error=str(exc))
            result.diagnostics.append(diag)
            continue
        cert = certify(sub, data, tolerances, eos)
        if cert.passed:
            result.found.append(Witness(point, sub, cert))
        else:
            diag.update(stage="certify", error=",".join(cert.failures))
            result.diagnostics.append(diag)
    log.debug("search: %d certified, %d rejected", len(result.found), len(result.diagnostics))
    return result
