import pytest

from grwverify.scenario import load_scenario, sample_points

FIXTURE_NAMES = (
    "minkowski",
    "desitter",
    "flrw_dust",
    "flrw_radiation",
    "closed_rw",
    "anisotropic_fiber",
)


def fixture_spec(name):
    return load_scenario(name).build_spec()


def fixture_points(name, count, seed=None):
    sc = load_scenario(name)
    sampling = dict(sc.sampling, count=count)
    if seed is not None:
        sampling["seed"] = seed
    points, _ = sample_points(sc.build_spec(), sampling)
    return points


@pytest.fixture(scope="session")
def desitter():
    return fixture_spec("desitter")


@pytest.fixture(scope="session")
def minkowski():
    return fixture_spec("minkowski")


@pytest.fixture(scope="session")
def flrw_dust():
    return fixture_spec("flrw_dust")


# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
