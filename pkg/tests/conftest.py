import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fansub.riemann import RiemannData  # noqa: E402
from fansub.thresholds import two_shock_threshold  # noqa: E402

# (gamma, rho_minus, rho_plus, v_minus_1, v_plus_1, v_plus_2)
DATASETS = {
    "A": (2.0, 1.0, 4.0, 0.0, 1.0, 0.0),
    "B": (1.4, 2.0, 0.5, 1.0, -1.0, 0.3),
    "C": (1.0, 1.0, 3.0, 0.5, 2.0, -1.0),
    "D": (3.0, 0.7, 1.5, -2.0, 0.5, 0.0),
    "E": (5.0 / 3.0, 5.0, 1.0, 0.0, 3.0, 1.0),
}
OFFSETS = (0.1, 0.5, 1.0, 2.0, 5.0)
# one gap offset per dataset; A at T + 1.0 is also the continuation dataset
PAIRING = {"B": 0.1, "C": 0.5, "A": 1.0, "D": 2.0, "E": 5.0}


def make_data(name, offset):
    gamma, rm, rp, vm1, vp1, vp2 = DATASETS[name]
    base = RiemannData(rm, rp, (vm1, 0.0), (vp1, vp2), gamma)
    return base.with_gap(two_shock_threshold(base.eos, rm, rp) + offset)


@pytest.fixture(params=sorted(PAIRING))
def paired_data(request):
    return make_data(request.param, PAIRING[request.param])


def pytest_terminal_summary(terminalreporter):
    acc = sys.modules.get("test_acceptance")
    if acc is None or not acc.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(acc.RESULTS):
        terminalreporter.write_line(acc.RESULTS[key])
