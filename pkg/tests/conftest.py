import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from rankone.params import FAMILY_IDS, family_spec, odd_pair, periodic_spec, validate

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

BUILTIN = ["chacon", "staircase", "even_staircase", "z_example", "xp:2", "yp:2", "xp:3", "yp:3"]
BOUNDED = ["chacon", "odd_pair", "periodic_27"]


def named_spec(name):
    if name == "odd_pair":
        return odd_pair()
    if name == "periodic_27":
        return periodic_spec([(3, [2, 7])])
    return family_spec(name)


@pytest.fixture(params=BUILTIN)
def builtin(request):
    return family_spec(request.param)


@st.composite
def levels(draw, max_q=4, max_a=4):
    q = draw(st.integers(2, max_q))
    return (q, draw(st.lists(st.integers(0, max_a), min_size=q - 1, max_size=q - 1)))


@st.composite
def periodic_specs(draw, max_q=4, max_a=4):
    """Small non-degenerate eventually periodic specs."""
    period = draw(st.lists(levels(max_q, max_a), min_size=1, max_size=2))
    prefix = draw(st.lists(levels(max_q, max_a), max_size=2))
    seed = draw(st.integers(1, 3))
    spec = periodic_spec(period, seed_zeros=seed, prefix=prefix)
    rep = validate(spec)
    from hypothesis import assume

    assume(rep.ok and not rep.degenerate)
    return spec


assert set(FAMILY_IDS) >= {"chacon", "xp", "yp"}


_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when != "call":
        return
    status = "PASS" if call.excinfo is None else "FAIL"
    detail = "" if call.excinfo is None else str(call.excinfo.value).splitlines()[0][:160]
    _CRITERIA[mark.args[0]] = (status, call.duration, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        status, secs, detail = _CRITERIA[n]
        line = f"criterion {n}: {status} ({secs:.2f}s)"
        terminalreporter.write_line(line + (f" {detail}" if detail else ""))
