from fractions import Fraction

from hypothesis import settings, strategies as st

from polyhom.bivariate import BivariatePoly
from polyhom.series import PolyhomSeries

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def exact_series(draw, trunc=8, min_power=2, max_log=2, allow_constant=True):
    """Exact d-series whose terms stay differentiable: constants or powers >= min_power."""
    keys = st.tuples(st.integers(min_power, trunc), st.integers(0, max_log))
    terms = draw(st.dictionaries(keys, small_fractions, max_size=5))
    if allow_constant and draw(st.booleans()):
        terms[(0, 0)] = draw(small_fractions)
    return PolyhomSeries(terms, trunc)


@st.composite
def plain_series(draw, trunc=6, var="d"):
    coeffs = draw(st.lists(small_fractions, min_size=1, max_size=trunc + 1))
    return PolyhomSeries.from_powers(coeffs, trunc, var)


@st.composite
def seed_polys(draw, max_degree=6):
    degree = draw(st.integers(0, max_degree))
    keys = st.tuples(st.integers(0, degree), st.integers(0, degree)).filter(
        lambda ab: ab[0] + ab[1] <= degree)
    coeffs = draw(st.dictionaries(keys, st.integers(-4, 4).map(Fraction), min_size=1, max_size=8))
    return BivariatePoly(coeffs)


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance as acc
    except ImportError:
        return
    if not acc.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(acc.RESULTS):
        terminalreporter.write_line(acc.format_line(number, *acc.RESULTS[number]))
