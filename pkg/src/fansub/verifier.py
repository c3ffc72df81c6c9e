"""Independent certification of fan subsolutions.

Nothing here assumes the reduced ansatz used to construct candidates: every
interface relation is evaluated in its general form from the stored fields.
"""

import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np

from fansub.eos import Eos
from fansub.fan import FanSubsolution
from fansub.riemann import RiemannData

RH_NAMES = (
    "cont_left",
    "mom_1_left",
    "mom_2_left",
    "cont_middle",
    "mom_1_middle",
    "mom_2_middle",
    "cont_right",
    "mom_1_right",
    "mom_2_right",
)
SUB_NAMES = ("sub_trace_1", "sub_trace_2", "sub_det_1", "sub_det_2")
ADM_NAMES = ("E_left", "E_middle", "E_right")
EIG_NAMES = ("eig_1", "eig_2")


@dataclass(frozen=True)
class Tolerances:
    eq: float = 1e-9
    strict: float = 1e-10

    def __post_init__(self):
        if not (self.eq > 0 and self.strict > 0):
            raise ValueError("tolerances must be positive")


@dataclass
class Certificate:
    rh_residuals: List[float]
    subsolution_margins: List[float]
    admissibility_margins: List[float]
    ordering_ok: bool
    eigen_margins: List[float]
    verdict: str
    failures: List[str] = field(default_factory=list)
    rh_scales: List[float] = field(default_factory=list)
    subsolution_scales: List[float] = field(default_factory=list)
    admissibility_scales: List[float] = field(default_factory=list)
    eigen_scales: List[float] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def relative(self, group: str) -> List[float]:
        """Values of a group ("rh", "subsolution", ...) divided by their scales."""
        vals = getattr(self, f"{group}_residuals" if group == "rh" else f"{group}_margins")
        return [v / s for v, s in zip(vals, getattr(self, f"{group}_scales"))]

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "Certificate":
        return cls(**d)


def _scale(*terms) -> float:
    return max([1.0] + [abs(t) for t in terms])


def _rh_sides(sub: FanSubsolution, eos: Eos):
    """(lhs, rhs, scale) for the nine interface relations, in RH_NAMES order."""
    nm, n1, npl = sub.partition.slopes
    rm, (vm1, vm2) = sub.outer_minus.rho, sub.outer_minus.v
    rp, (vp1, vp2) = sub.outer_plus.rho, sub.outer_plus.v
    r1, (a1, b1), u1, C1 = sub.region1.rho, sub.region1.v, sub.region1.u, sub.region1.C
    r2, (a2, b2), u2, C2 = sub.region2.rho, sub.region2.v, sub.region2.u, sub.region2.C
    pm, p1, p2, pp = (float(eos.pressure(r)) for r in (rm, r1, r2, rp))

    rows = [
        (nm * rm, -nm * r1, rm * vm2, -r1 * b1),
        (nm * rm * vm1, -nm * r1 * a1, rm * vm1 * vm2, -r1 * u1.d),
        (nm * rm * vm2, -nm * r1 * b1, rm * vm2**2, r1 * u1.g, pm, -p1, -0.5 * r1 * C1),
        (n1 * r1, -n1 * r2, r1 * b1, -r2 * b2),
        (n1 * r1 * a1, -n1 * r2 * a2, r1 * u1.d, -r2 * u2.d),
        (
            n1 * r1 * b1,
            -n1 * r2 * b2,
            -r1 * u1.g,
            r2 * u2.g,
            p1,
            -p2,
            0.5 * r1 * C1,
            -0.5 * r2 * C2,
        ),
        (npl * r2, -npl * rp, r2 * b2, -rp * vp2),
        (npl * r2 * a2, -npl * rp * vp1, r2 * u2.d, -rp * vp1 * vp2),
        (npl * r2 * b2, -npl * rp * vp2, -r2 * u2.g, -rp * vp2**2, p2, -pp, 0.5 * r2 * C2),
    ]
    out = []
    for row in rows:
        # rows are (lhs terms..., rhs terms...) split by the number of nu-terms
        lhs = row[0] + row[1]
        rhs = sum(row[2:])
        out.append((lhs, rhs, _scale(*row)))
    return out


def check_rh(sub: FanSubsolution, eos: Optional[Eos] = None, gamma: float = None):
    """LHS - RHS of the nine Rankine-Hugoniot relations (general form)."""
    eos = eos or Eos(gamma)
    return [lhs - rhs for lhs, rhs, _ in _rh_sides(sub, eos)]


def _matrix_rows(sub: FanSubsolution):
    rows = []
    for reg in (sub.region1, sub.region2):
        a, b = reg.v
        g, d, C = reg.u.g, reg.u.d, reg.C
        m11 = 0.5 * C - a * a + g
        m22 = 0.5 * C - b * b - g
        m12 = d - a * b
        trace = (C - a * a - b * b, _scale(C, a * a + b * b))
        det = (m11 * m22 - m12 * m12, _scale(m11 * m22, m12 * m12))
        eig = float(np.linalg.eigvalsh(np.array([[m11, m12], [m12, m22]]))[0])
        rows.append((trace, det, (eig, _scale(m11, m22, m12))))
    return rows


def check_matrix_conditions(sub: FanSubsolution):
    """Margins of |v_i|^2 < C_i, of the determinant condition, and min eig of M_i.

    M_i = (C_i/2) Id - v_i (x) v_i + u_i must be positive definite. Returns
    ([trace_1, trace_2, det_1, det_2], [eig_1, eig_2]).
    """
    (t1, d1, e1), (t2, d2, e2) = _matrix_rows(sub)
    return [t1[0], t2[0], d1[0], d2[0]], [e1[0], e2[0]]


def _energy_sides(sub: FanSubsolution, eos: Eos):
    nm, n1, npl = sub.partition.slopes
    rm, vm = sub.outer_minus.rho, sub.outer_minus.v
    rp, vp = sub.outer_plus.rho, sub.outer_plus.v
    reg1, reg2 = sub.region1, sub.region2
    r1, b1, C1 = reg1.rho, reg1.v[1], reg1.C
    r2, b2, C2 = reg2.rho, reg2.v[1], reg2.C
    e = {k: float(eos.internal_energy(r)) for k, r in (("m", rm), ("1", r1), ("2", r2), ("p", rp))}
    p = {k: float(eos.pressure(r)) for k, r in (("m", rm), ("1", r1), ("2", r2), ("p", rp))}
    km = 0.5 * (vm[0] ** 2 + vm[1] ** 2)
    kp = 0.5 * (vp[0] ** 2 + vp[1] ** 2)

    left_l = (nm * (rm * e["m"] - r1 * e["1"]), nm * (rm * km - 0.5 * r1 * C1))
    left_r = (
        (rm * e["m"] + p["m"]) * vm[1],
        -(r1 * e["1"] + p["1"]) * b1,
        rm * vm[1] * km,
        -0.5 * r1 * b1 * C1,
    )
    mid_l = (n1 * (r1 * e["1"] - r2 * e["2"]), n1 * 0.5 * (r1 * C1 - r2 * C2))
    mid_r = (
        (r1 * e["1"] + p["1"]) * b1,
        -(r2 * e["2"] + p["2"]) * b2,
        0.5 * r1 * b1 * C1,
        -0.5 * r2 * b2 * C2,
    )
    right_l = (npl * (r2 * e["2"] - rp * e["p"]), npl * (0.5 * r2 * C2 - rp * kp))
    right_r = (
        (r2 * e["2"] + p["2"]) * b2,
        -(rp * e["p"] + p["p"]) * vp[1],
        0.5 * r2 * b2 * C2,
        -rp * vp[1] * kp,
    )
    return [(sum(lh), sum(rh), _scale(*lh, *rh)) for lh, rh in ((left_l, left_r), (mid_l, mid_r), (right_l, right_r))]


def check_admissibility(sub: FanSubsolution, eos: Optional[Eos] = None, gamma: float = None):
    """RHS - LHS of the three interface energy inequalities (>= 0 required)."""
    eos = eos or Eos(gamma)
    return [rhs - lhs for lhs, rhs, _ in _energy_sides(sub, eos)]


def certify(
    sub: FanSubsolution,
    data: RiemannData,
    tolerances: Tolerances = Tolerances(),
    eos: Optional[Eos] = None,
) -> Certificate:
    """Check that ``sub`` is an admissible fan subsolution for ``data``.

    Equations pass at ``tol.eq`` relative to the magnitude of their terms. The
    open matrix conditions and the fan ordering need a positive margin of at
    least ``tol.strict`` (scaled the same way). The energy inequalities are
    non-strict and only need to hold up to ``tol.eq``.
    """
    eos = eos or data.eos
    tol = tolerances
    failures = []

    if (sub.outer_minus.rho, sub.outer_minus.v, sub.outer_plus.rho, sub.outer_plus.v) != (
        data.rho_minus,
        data.v_minus,
        data.rho_plus,
        data.v_plus,
    ):
        failures.append("outer_states")

    rh = _rh_sides(sub, eos)
    rh_res = [lhs - rhs for lhs, rhs, _ in rh]
    rh_scales = [s for *_, s in rh]
    for name, r, s in zip(RH_NAMES, rh_res, rh_scales):
        if not abs(r) <= tol.eq * s:
            failures.append(name)

    (t1, d1, e1), (t2, d2, e2) = _matrix_rows(sub)
    subs = [t1, t2, d1, d2]
    eigs = [e1, e2]
    for name, (m, s) in zip(SUB_NAMES + EIG_NAMES, subs + eigs):
        if not m >= tol.strict * s:
            failures.append(name)

    adm = _energy_sides(sub, eos)
    adm_m = [rhs - lhs for lhs, rhs, _ in adm]
    adm_s = [s for *_, s in adm]
    for name, m, s in zip(ADM_NAMES, adm_m, adm_s):
        if not m >= -tol.eq * s:
            failures.append(name)

    nm, n1, npl = sub.partition.slopes
    gap_scale = _scale(nm, n1, npl)
    ordering_ok = bool(n1 - nm >= tol.strict * gap_scale and npl - n1 >= tol.strict * gap_scale)
    if not ordering_ok:
        failures.append("ordering")

    return Certificate(
        rh_residuals=[float(r) for r in rh_res],
        subsolution_margins=[float(m) for m, _ in subs],
        admissibility_margins=[float(m) for m in adm_m],
        ordering_ok=ordering_ok,
        eigen_margins=[float(m) for m, _ in eigs],
        verdict="fail" if failures else "pass",
        failures=failures,
        rh_scales=rh_scales,
        subsolution_scales=[s for _, s in subs],
        admissibility_scales=adm_s,
        eigen_scales=[s for _, s in eigs],
    )


# --- weak-form oracle -------------------------------------------------------


@lru_cache(maxsize=16)
def _gauss_legendre(n):
    return np.polynomial.legendre.leggauss(n)


def _bump(z):
    """exp(1/(z^2 - 1)) on |z| < 1 and its derivative."""
    z = np.asarray(z, dtype=float)
    inside = np.abs(z) < 1.0
    zi = np.where(inside, z, 0.0)
    q = zi * zi - 1.0
    b = np.where(inside, np.exp(1.0 / q), 0.0)
    db = np.where(inside, b * (-2.0 * zi / (q * q)), 0.0)
    return b, db


def _region_fields(sub: FanSubsolution, eos: Eos):
    """Densities and fluxes in x2 on P-, P1, P2, P+ (rows) for the weak forms.

    Columns: mass, x1-momentum, x2-momentum, energy.
    """
    U = np.zeros((4, 4))
    F = np.zeros((4, 4))
    for k, o in ((0, sub.outer_minus), (3, sub.outer_plus)):
        r, (a, b) = o.rho, o.v
        p, e = float(eos.pressure(r)), float(eos.internal_energy(r))
        kin = 0.5 * r * (a * a + b * b)
        U[k] = (r, r * a, r * b, r * e + kin)
        F[k] = (r * b, r * a * b, r * b * b + p, (r * e + p + kin) * b)
    for k, reg in ((1, sub.region1), (2, sub.region2)):
        r, (a, b), u, C = reg.rho, reg.v, reg.u, reg.C
        p, e = float(eos.pressure(r)), float(eos.internal_energy(r))
        U[k] = (r, r * a, r * b, r * e + 0.5 * r * C)
        # x2-row of rho*u + (p + rho*C/2) Id, with u_22 = -g
        F[k] = (r * b, r * u.d, -r * u.g + p + 0.5 * r * C, (r * e + p + 0.5 * r * C) * b)
    return U, F


def _weak_integrals(U, F, slopes, c, tau, s, t_lo, n):
    xg, wg = _gauss_legendre(n)
    t_hi = tau + s
    tm, th = 0.5 * (t_hi + t_lo), 0.5 * (t_hi - t_lo)
    t = tm + th * xg  # (n,)
    wt = th * wg
    x_lo, x_hi = c - s, c + s
    brk = np.clip(np.outer(t, slopes), x_lo, x_hi)  # (n, 3), sorted per row
    edges = np.concatenate([np.full((n, 1), x_lo), brk, np.full((n, 1), x_hi)], axis=1)
    a, b = edges[:, :-1], edges[:, 1:]  # (n, 4) piece k lies in region k
    half = 0.5 * (b - a)
    x = 0.5 * (a + b)[:, :, None] + half[:, :, None] * xg[None, None, :]  # (n,4,n)
    wx = half[:, :, None] * wg[None, None, :]
    bx, dbx = _bump((x - c) / s)
    bt, dbt = _bump((t - tau) / s)
    phi_t = bx * (dbt / s)[:, None, None]
    phi_x = (dbx / s) * bt[:, None, None]
    w = wx * wt[:, None, None]
    # contract region index with field table
    term_t = np.einsum("ikj,kq->q", w * phi_t, U)
    term_x = np.einsum("ikj,kq->q", w * phi_x, F)
    abs_t = np.einsum("ikj,kq->q", np.abs(w * phi_t), np.abs(U))
    abs_x = np.einsum("ikj,kq->q", np.abs(w * phi_x), np.abs(F))
    return term_t + term_x, abs_t + abs_x


def _initial_term(E_minus, E_plus, c, tau, s, n):
    xg, wg = _gauss_legendre(n)
    bt, _ = _bump(np.array([(0.0 - tau) / s]))
    total = 0.0
    mag = 0.0
    for lo, hi, E in ((c - s, min(0.0, c + s), E_minus), (max(0.0, c - s), c + s, E_plus)):
        if hi <= lo:
            continue
        x = 0.5 * (lo + hi) + 0.5 * (hi - lo) * xg
        bx, _ = _bump((x - c) / s)
        val = 0.5 * (hi - lo) * np.dot(wg, bx) * bt[0]
        total += E * val
        mag += abs(E) * val
    return total, mag


def weak_form_residual(
    sub: FanSubsolution,
    data: RiemannData,
    n_test: int = 64,
    quad_res: int = 256,
    seed: int = 0,
    eos: Optional[Eos] = None,
) -> Tuple[float, float]:
    """Distributional check of the relaxed equations and energy inequality.

    Integrates the weak forms against random smooth bumps in (x2, t), with
    Gauss-Legendre quadrature on each cell cut out by the interface lines.
    Returns (max_eq_residual, min_ineq_value), both divided by the integral of
    the absolute integrand. The equation residual should vanish; the
    inequality value (integral of E phi_t + F phi_x plus the initial-data term)
    must be nonnegative up to quadrature error.
    """
    if n_test < 1 or quad_res < 16:
        raise ValueError("need n_test >= 1 and quad_res >= 16")
    eos = eos or data.eos
    U, F = _region_fields(sub, eos)
    slopes = np.array(sub.partition.slopes)
    rng = np.random.default_rng(seed)
    T = 1.0
    E_minus, E_plus = (
        r * float(eos.internal_energy(r)) + 0.5 * r * (v[0] ** 2 + v[1] ** 2)
        for r, v in ((data.rho_minus, data.v_minus), (data.rho_plus, data.v_plus))
    )

    max_eq = 0.0
    min_ineq = math.inf
    for _ in range(n_test):
        s = rng.uniform(0.1, 0.4) * T
        tau = rng.uniform(s, T)
        k = rng.integers(0, 3)
        c = slopes[k] * tau + rng.uniform(-0.8, 0.8) * s
        val, mag = _weak_integrals(U, F, slopes, c, tau, s, tau - s, quad_res)
        scale = max(float(np.max(mag)), 1e-300)
        max_eq = max(max_eq, float(np.max(np.abs(val[:3]))) / scale)
        min_ineq = min(min_ineq, float(val[3]) / max(float(mag[3]), 1e-300))

        s0 = rng.uniform(0.1, 0.4) * T
        tau0 = rng.uniform(0.0, 0.9 * s0)
        c0 = slopes[rng.integers(0, 3)] * tau0 + rng.uniform(-0.5, 0.5) * s0
        val0, mag0 = _weak_integrals(U, F, slopes, c0, tau0, s0, 0.0, quad_res)
        ini, ini_mag = _initial_term(E_minus, E_plus, c0, tau0, s0, quad_res)
        scale0 = max(float(mag0[3]) + ini_mag, 1e-300)
        min_ineq = min(min_ineq, (float(val0[3]) + ini) / scale0)
    return max_eq, min_ineq
