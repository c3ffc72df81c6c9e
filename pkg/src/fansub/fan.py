"""Piecewise-constant fan subsolutions and their JSON form."""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

Vec2 = Tuple[float, float]


@dataclass(frozen=True)
class FanPartition:
    """Interface slopes: the lines x2 = nu * t bound the wedges P-, P1, P2, P+."""

    nu_minus: float
    nu_1: float
    nu_plus: float

    @property
    def ordered(self) -> bool:
        return self.nu_minus < self.nu_1 < self.nu_plus

    @property
    def slopes(self) -> Tuple[float, float, float]:
        return (self.nu_minus, self.nu_1, self.nu_plus)


@dataclass(frozen=True)
class TracelessSym2:
    """The matrix [[g, d], [d, -g]]."""

    g: float
    d: float

    def matrix(self) -> np.ndarray:
        return np.array([[self.g, self.d], [self.d, -self.g]])

    @classmethod
    def from_velocity(cls, v: Vec2) -> "TracelessSym2":
        """v (x) v - |v|^2/2 Id, the value of u on the outer states."""
        a, b = v
        return cls(0.5 * (a * a - b * b), a * b)


@dataclass(frozen=True)
class OuterState:
    rho: float
    v: Vec2


@dataclass(frozen=True)
class Region:
    """Constant state (rho_i, v_i, u_i) on P_i together with its constant C_i."""

    rho: float
    v: Vec2
    u: TracelessSym2
    C: float


@dataclass(frozen=True)
class FanSubsolution:
    partition: FanPartition
    outer_minus: OuterState
    outer_plus: OuterState
    region1: Region
    region2: Region

    def to_dict(self) -> dict:
        def region(r):
            return {
                "rho": float(r.rho),
                "v": [float(x) for x in r.v],
                "u": {"g": float(r.u.g), "d": float(r.u.d)},
                "C": float(r.C),
            }

        def outer(o):
            return {"rho": float(o.rho), "v": [float(x) for x in o.v]}

        return {
            "partition": {
                "nu_minus": float(self.partition.nu_minus),
                "nu_1": float(self.partition.nu_1),
                "nu_plus": float(self.partition.nu_plus),
            },
            "outer_minus": outer(self.outer_minus),
            "outer_plus": outer(self.outer_plus),
            "region1": region(self.region1),
            "region2": region(self.region2),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FanSubsolution":
        def region(r):
            return Region(
                float(r["rho"]),
                (float(r["v"][0]), float(r["v"][1])),
                TracelessSym2(float(r["u"]["g"]), float(r["u"]["d"])),
                float(r["C"]),
            )

        def outer(o):
            return OuterState(float(o["rho"]), (float(o["v"][0]), float(o["v"][1])))

        p = d["partition"]
        return cls(
            FanPartition(float(p["nu_minus"]), float(p["nu_1"]), float(p["nu_plus"])),
            outer(d["outer_minus"]),
            outer(d["outer_plus"]),
            region(d["region1"]),
            region(d["region2"]),
        )
