"""Gap thresholds for the normal velocity jump g = v_{-2} - v_{+2}.

Above the two-shock threshold the classical fan is shock-contact-shock and a
subsolution exists for small eps1. Below it a rarefaction appears, and the
lower end of the gap range where the search still certifies a witness is
located by bisection.
"""

from dataclasses import asdict, dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from fansub.eos import Eos
from fansub.riemann import RiemannData, shock_jump
from fansub.subsolution import search
from fansub.verifier import Tolerances

PROBE_FRACTIONS = (1e-3, 1e-2, 5e-2)


class ThresholdError(RuntimeError):
    """No feasible gap just below the two-shock threshold."""

    def __init__(self, message, samples):
        super().__init__(message)
        self.samples = samples


@dataclass
class ThresholdReport:
    T: float
    vbar_estimate: Optional[float]
    bracket: Tuple[float, float]
    samples: List[Tuple[float, bool]] = field(default_factory=list)
    violations: List[float] = field(default_factory=list)

    @property
    def monotone(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        d = asdict(self)
        d["samples"] = [[g, ok] for g, ok in self.samples]
        d["bracket"] = list(self.bracket)
        d["monotone"] = self.monotone
        return d


def two_shock_threshold(eos: Eos, rho_minus, rho_plus) -> float:
    return shock_jump(eos, rho_minus, rho_plus)


def _monotonicity_violations(samples, T):
    """Gaps that are infeasible although a smaller sampled gap is feasible."""
    out = []
    seen_feasible = False
    for g, ok in sorted(samples):
        if ok:
            seen_feasible = True
        elif seen_feasible and g < T:
            out.append(g)
    return out


def estimate_vbar(
    eos: Eos,
    rho_minus,
    rho_plus,
    v_plus,
    v_minus_1,
    bisect_tol=1e-3,
    eps1_grid: Optional[Sequence[float]] = None,
    tolerances: Tolerances = Tolerances(),
    n_scan: int = 8,
) -> ThresholdReport:
    """Smallest gap in (0, T) for which the subsolution search succeeds.

    Bisection assumes feasibility is monotone in the gap. A uniform scan of
    ``n_scan`` gaps above the estimate is added to the samples so that
    violations of that assumption show up in ``violations``.
    """
    if rho_minus == rho_plus:
        raise ValueError("rho_minus and rho_plus must differ")
    T = two_shock_threshold(eos, rho_minus, rho_plus)
    base = RiemannData(rho_minus, rho_plus, (v_minus_1, 0.0), tuple(v_plus), eos.gamma)
    samples = []

    def feasible(g):
        ok = len(search(base.with_gap(g), eps1_grid, eos, tolerances)) > 0
        samples.append((float(g), ok))
        return ok

    hi = None
    for frac in PROBE_FRACTIONS:
        if feasible(T * (1.0 - frac)):
            hi = T * (1.0 - frac)
            break
    if hi is None:
        raise ThresholdError(
            f"no certified subsolution just below T={T!r} (probed gaps "
            f"{[g for g, _ in samples]})",
            samples,
        )

    lo = 0.0
    if feasible(lo):
        hi = lo
    while hi - lo > bisect_tol:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    for g in np.linspace(hi, T, n_scan + 2)[1:-1]:
        feasible(g)

    return ThresholdReport(
        T=T,
        vbar_estimate=hi,
        bracket=(lo, hi),
        samples=sorted(samples),
        violations=_monotonicity_violations(samples, T),
    )
