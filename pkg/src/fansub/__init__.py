"""Admissible fan subsolutions for the 2D isentropic Euler Riemann problem."""

from fansub.eos import DomainError, Eos
from fansub.fan import FanPartition, FanSubsolution, OuterState, Region, TracelessSym2
from fansub.riemann import RiemannData, WaveFan, classify, solve_riemann
from fansub.subsolution import AnsatzPoint, search
from fansub.thresholds import estimate_vbar, two_shock_threshold
from fansub.verifier import Certificate, Tolerances, certify, weak_form_residual

__version__ = "0.1.0"
