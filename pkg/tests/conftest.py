from fractions import Fraction

import pytest
from hypothesis import strategies as st

from pwrot.cyclotomic import Cyclo, cyclo_new
from pwrot.cyclotomic import _field

FIELDS = [3, 4, 5, 6, 8, 10, 12]
# fields containing i, where real and imaginary parts are field elements
GEOM_FIELDS = [4, 8, 12]

small_fraction = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def cyclos(draw, n=None):
    n = n if n is not None else draw(st.sampled_from(FIELDS))
    deg = _field(n).deg
    coeffs = draw(st.lists(small_fraction, min_size=deg, max_size=deg))
    return cyclo_new(n, coeffs)


@st.composite
def rational_points(draw, n, bound=4):
    from pwrot.geometry import point

    x = draw(st.fractions(min_value=-bound, max_value=bound, max_denominator=16))
    y = draw(st.fractions(min_value=-bound, max_value=bound, max_denominator=16))
    return point(x, y, n)


@pytest.fixture(scope="session")
def sixth_map():
    from pwrot.dynamics import build_map

    return build_map(Fraction(1, 6), sigma=Fraction(0))


@pytest.fixture(scope="session")
def sixth_return(sixth_map):
    from pwrot.induction import base_cone, first_return

    return first_return(sixth_map, base_cone(sixth_map), 20)


def rat(n: int, v) -> Cyclo:
    return Cyclo.from_rational(n, v)


# outcomes of the randomized suites, read back by the acceptance run
PROPERTY_RESULTS: dict[str, tuple[str, float]] = {}
# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_collection_modifyitems(items):
    # the acceptance run summarizes the property suites, so it goes last
    items.sort(key=lambda it: it.path.name == "test_acceptance.py")


def pytest_runtest_logreport(report):
    if report.when == "call" and "property" in report.keywords:
        PROPERTY_RESULTS[report.nodeid] = (report.outcome, report.duration)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
        failed = sum(line.startswith("FAIL") for line in ACCEPTANCE_LINES)
        terminalreporter.write_line(f"{len(ACCEPTANCE_LINES) - failed} passed, {failed} failed")
