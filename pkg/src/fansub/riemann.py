"""Self-similar solution of the planar Riemann problem.

The data jump across the line x2 = 0, so the solution depends on x2/t only and
the system reduces to 1D gas dynamics in the normal direction for (rho, rho v2)
with the tangential velocity v1 passively advected. The wave fan is a 1-wave, a
contact (only if v1 jumps) and a 3-wave.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

from fansub.eos import DomainError, Eos

Vec2 = Tuple[float, float]

# Relative distance below which a middle density counts as equal to an outer one.
WAVE_TOL = 1e-10


class RootFindingError(ArithmeticError):
    """Bracketed root finder failed; carries the last bracket and residual."""

    def __init__(self, message, bracket, residual):
        super().__init__(f"{message} (bracket={bracket}, residual={residual:.3e})")
        self.bracket = bracket
        self.residual = residual


@dataclass(frozen=True)
class RiemannData:
    rho_minus: float
    rho_plus: float
    v_minus: Vec2
    v_plus: Vec2
    gamma: float

    def __post_init__(self):
        object.__setattr__(self, "v_minus", tuple(float(x) for x in self.v_minus))
        object.__setattr__(self, "v_plus", tuple(float(x) for x in self.v_plus))
        if len(self.v_minus) != 2 or len(self.v_plus) != 2:
            raise ValueError("velocities must be 2-vectors")
        if not (self.rho_minus > 0 and self.rho_plus > 0):
            raise DomainError("densities must be positive")
        if not self.gamma >= 1.0:
            raise DomainError("gamma must be >= 1")

    @property
    def eos(self) -> Eos:
        return Eos(self.gamma)

    @property
    def gap(self) -> float:
        """Normal velocity jump v_{-2} - v_{+2}."""
        return self.v_minus[1] - self.v_plus[1]

    def mirrored(self) -> "RiemannData":
        """Reflect x2 -> -x2: swap the states and negate normal velocities."""
        return RiemannData(
            self.rho_plus,
            self.rho_minus,
            (self.v_plus[0], -self.v_plus[1]),
            (self.v_minus[0], -self.v_minus[1]),
            self.gamma,
        )

    def shifted(self, dv1=0.0, dv2=0.0) -> "RiemannData":
        return RiemannData(
            self.rho_minus,
            self.rho_plus,
            (self.v_minus[0] + dv1, self.v_minus[1] + dv2),
            (self.v_plus[0] + dv1, self.v_plus[1] + dv2),
            self.gamma,
        )

    def with_gap(self, gap: float) -> "RiemannData":
        """Same data with v_{-2} moved so that v_{-2} - v_{+2} = gap."""
        return RiemannData(
            self.rho_minus,
            self.rho_plus,
            (self.v_minus[0], self.v_plus[1] + gap),
            self.v_plus,
            self.gamma,
        )

    def to_dict(self) -> dict:
        return {
            "rho_minus": self.rho_minus,
            "rho_plus": self.rho_plus,
            "v_minus": list(self.v_minus),
            "v_plus": list(self.v_plus),
            "gamma": self.gamma,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RiemannData":
        return cls(
            float(d["rho_minus"]),
            float(d["rho_plus"]),
            tuple(d["v_minus"]),
            tuple(d["v_plus"]),
            float(d["gamma"]),
        )


@dataclass(frozen=True)
class Wave:
    kind: str  # "shock", "rarefaction" or "none"
    speeds: Tuple[float, float] = (math.nan, math.nan)

    @property
    def letter(self) -> str:
        return {"shock": "S", "rarefaction": "R", "none": "N"}[self.kind]


NO_WAVE = Wave("none")


def _as_floats(wave: Wave) -> Wave:
    return Wave(wave.kind, (float(wave.speeds[0]), float(wave.speeds[1])))


@dataclass(frozen=True)
class WaveFan:
    left: Wave
    right: Wave
    contact: bool
    contact_speed: Optional[float]
    tangential: Vec2  # (v_{-1}, v_{+1})
    middle_density: Optional[float]
    middle_normal_velocity: Optional[float]
    vacuum: bool = False

    @property
    def pattern(self) -> str:
        if self.vacuum:
            return "vacuum"
        return self.left.letter + self.right.letter

    def to_dict(self) -> dict:
        return {
            "pattern": self.pattern,
            "contact": self.contact,
            "contact_speed": self.contact_speed,
            "tangential": list(self.tangential),
            "left_wave": {"kind": self.left.kind, "speeds": list(self.left.speeds)},
            "right_wave": {"kind": self.right.kind, "speeds": list(self.right.speeds)},
            "middle_density": self.middle_density,
            "middle_normal_velocity": self.middle_normal_velocity,
            "vacuum": self.vacuum,
        }


class Classification(NamedTuple):
    waves: str
    contact: bool

    def __str__(self):
        if self.waves == "NN" and not self.contact:
            return "no waves"
        return f"{self.waves}, contact={'present' if self.contact else 'absent'}"


def shock_jump(eos: Eos, rho0, rho):
    """Normal velocity jump across a shock joining densities rho0 and rho."""
    if rho0 <= 0 or rho <= 0:
        raise DomainError("densities must be positive")
    dp = eos.pressure(rho) - eos.pressure(rho0)
    return math.sqrt(max((rho - rho0) * dp / (rho * rho0), 0.0))


def rarefaction_jump(eos: Eos, rho0, rho):
    """Integral of c(r)/r from rho to rho0 (velocity gained by expanding)."""
    if rho <= 0 or rho0 <= 0:
        raise DomainError("densities must be positive")
    if rho > rho0:
        raise DomainError("rarefaction requires rho <= rho0")
    if eos.isothermal:
        return math.log(rho0 / rho)
    g = eos.gamma
    h = 0.5 * (g - 1.0)
    return 2.0 * math.sqrt(g) / (g - 1.0) * (rho0**h - rho**h)


def wave_curve(eos: Eos, rho_side, rho):
    """Signed normal velocity drop from an outer state to a middle density rho.

    Compressive (rho > rho_side) uses the shock branch, expansive uses the
    rarefaction branch. Returns (value, derivative in rho).
    """
    if rho > rho_side:
        j = shock_jump(eos, rho_side, rho)
        if j < 1e-8 * eos.sound_speed(rho_side):
            return j, eos.sound_speed(rho) / rho
        p, p0 = eos.pressure(rho), eos.pressure(rho_side)
        dh = ((p - p0) + (rho - rho_side) * eos.dpressure(rho)) / (rho * rho_side)
        dh -= (rho - rho_side) * (p - p0) / (rho * rho * rho_side)
        return j, dh / (2.0 * j)
    return -rarefaction_jump(eos, rho_side, rho), eos.sound_speed(rho) / rho


def hugoniot_curve(eos: Eos, rho_side, rho):
    """Like wave_curve but on the shock branch for both signs of rho - rho_side."""
    if rho >= rho_side:
        return wave_curve(eos, rho_side, rho)
    j = shock_jump(eos, rho_side, rho)
    if j < 1e-8 * eos.sound_speed(rho_side):
        return -j, eos.sound_speed(rho) / rho
    p, p0 = eos.pressure(rho), eos.pressure(rho_side)
    dh = ((p - p0) + (rho - rho_side) * eos.dpressure(rho)) / (rho * rho_side)
    dh -= (rho - rho_side) * (p - p0) / (rho * rho * rho_side)
    return -j, -dh / (2.0 * j)


def find_increasing_root(f, lo, hi, tol=1e-12, maxiter=400, expand=30):
    """Root of an increasing function by Newton safeguarded with bisection.

    ``f`` returns (value, derivative). The bracket is expanded geometrically
    (lo / 1e3, hi * 1e3) until it straddles the root.
    """
    flo, _ = f(lo)
    for _ in range(expand):
        if flo <= 0:
            break
        lo /= 1e3
        flo, _ = f(lo)
    fhi, _ = f(hi)
    for _ in range(expand):
        if fhi >= 0:
            break
        hi *= 1e3
        fhi, _ = f(hi)
    if flo > 0 or fhi < 0:
        raise RootFindingError("no sign change", (lo, hi), min(abs(flo), abs(fhi)))

    x = 0.5 * (lo + hi)
    fx = math.inf
    for _ in range(maxiter):
        fx, dfx = f(x)
        if abs(fx) <= tol:
            return x
        if fx > 0:
            hi = x
        else:
            lo = x
        step = x - fx / dfx if dfx > 0 else math.nan
        if lo < step < hi:
            x = step
        else:
            x = 0.5 * (lo + hi)
        if hi - lo <= 4 * math.ulp(hi):
            break
    fx, _ = f(x)
    if abs(fx) <= tol:
        return x
    raise RootFindingError("did not converge", (lo, hi), abs(fx))


def vacuum_capacity(eos: Eos, rho_minus, rho_plus):
    """Largest v_{+2} - v_{-2} that two rarefactions can absorb (inf if gamma=1)."""
    if eos.isothermal:
        return math.inf
    g1 = eos.gamma - 1.0
    return 2.0 * (eos.sound_speed(rho_minus) + eos.sound_speed(rho_plus)) / g1


def _middle_density(data: RiemannData, curve, tol):
    eos = data.eos
    rm, rp, g = data.rho_minus, data.rho_plus, data.gap
    scale = max(1.0, abs(data.v_minus[1]), abs(data.v_plus[1]))

    def f(rho):
        wl, dl = curve(eos, rm, rho)
        wr, dr = curve(eos, rp, rho)
        return wl + wr - g, dl + dr

    return find_increasing_root(f, min(rm, rp) * 1e-6, max(rm, rp) * 1e6, tol * scale)


def solve_riemann(data: RiemannData, tol=1e-12) -> WaveFan:
    eos = data.eos
    rm, rp = data.rho_minus, data.rho_plus
    (vm1, vm2), (vp1, vp2) = data.v_minus, data.v_plus
    contact = vm1 != vp1

    if -data.gap >= vacuum_capacity(eos, rm, rp):
        g1 = eos.gamma - 1.0
        cm, cp = eos.sound_speed(rm), eos.sound_speed(rp)
        left = Wave("rarefaction", (vm2 - cm, vm2 + 2 * cm / g1))
        right = Wave("rarefaction", (vp2 - 2 * cp / g1, vp2 + cp))
        left, right = _as_floats(left), _as_floats(right)
        return WaveFan(left, right, False, None, (vm1, vp1), None, None, vacuum=True)

    rho = float(_middle_density(data, wave_curve, tol))
    u = float(vm2 - wave_curve(eos, rm, rho)[0])

    if abs(rho - rm) <= WAVE_TOL * rm:
        left = NO_WAVE
    elif rho > rm:
        s = float((rm * vm2 - rho * u) / (rm - rho))
        left = Wave("shock", (s, s))
    else:
        left = Wave("rarefaction", (vm2 - eos.sound_speed(rm), u - eos.sound_speed(rho)))

    if abs(rho - rp) <= WAVE_TOL * rp:
        right = NO_WAVE
    elif rho > rp:
        s = float((rho * u - rp * vp2) / (rho - rp))
        right = Wave("shock", (s, s))
    else:
        right = Wave("rarefaction", (u + eos.sound_speed(rho), vp2 + eos.sound_speed(rp)))

    left, right = _as_floats(left), _as_floats(right)
    return WaveFan(left, right, contact, u if contact else None, (vm1, vp1), rho, u)


def hugoniot_middle_state(data: RiemannData, tol=1e-12):
    """Intersection of the two shock (Hugoniot) curves, admissible or not.

    Coincides with the classical middle state when both waves are shocks; in
    the mixed regimes the rarefaction is replaced by a non-admissible jump.
    Returns (rho, v2).
    """
    rho = float(_middle_density(data, hugoniot_curve, tol))
    return rho, float(data.v_minus[1] - hugoniot_curve(data.eos, data.rho_minus, rho)[0])


def classify(data: RiemannData) -> Classification:
    fan = solve_riemann(data)
    return Classification(fan.pattern, fan.contact)
