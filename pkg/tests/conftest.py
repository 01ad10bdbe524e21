import datetime as dt
from pathlib import Path

import pytest
from hypothesis import settings

from tabframe import frame_from_dict

DATA = Path(__file__).parent / "data"
REAL_SLUMP = DATA / "slump_test.data"
STANDIN_SLUMP = DATA / "slump_test_standin.data"
SLUMP_URL = "https://archive.ics.uci.edu/ml/machine-learning-databases/concrete/slump/slump_test.data"

# reproducible property runs
settings.register_profile("repro", derandomize=True, deadline=None)
settings.load_profile("repro")

NOW = dt.datetime(2021, 3, 15, 9, 30, 0, 125000, tzinfo=dt.timezone.utc)


def seven_column_dict():
    return {
        "ID": [1, 2, 3],
        "City": ["Sarajevo", "Seattle", "Berlin"],
        "Zip Code": [71000, 98101, 10115],
        "State": ["BiH", "USA", "GER"],
        "IsHome": [True, False, False],
        "Values": [3.14, 3.21, 4.55],
        "Date": [NOW - dt.timedelta(days=20), NOW - dt.timedelta(days=10), NOW - dt.timedelta(days=5)],
    }


@pytest.fixture
def dict_frame():
    return frame_from_dict(seven_column_dict())


def slump_path() -> Path:
    """The vendored UCI file when present, else the synthetic stand-in with the same layout."""
    return REAL_SLUMP if REAL_SLUMP.exists() else STANDIN_SLUMP


@pytest.fixture
def slump_file() -> Path:
    return slump_path()


ACCEPTANCE_NOTES: dict[int, str] = {}
_acceptance: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    marker = getattr(report, "acceptance", None)
    if marker is None:
        return
    number, title = marker
    failed = report.failed or (report.when == "call" and report.outcome != "passed")
    if report.when == "call" or failed:
        status = "FAIL" if failed else "PASS"
        if _acceptance.get(number, ("", ""))[0] != "FAIL":
            _acceptance[number] = (status, title)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("acceptance")
    if marker is not None:
        outcome.get_result().acceptance = marker.args


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        status, title = _acceptance[number]
        note = ACCEPTANCE_NOTES.get(number)
        terminalreporter.write_line(f"criterion {number}: {status}  {title}" + (f"  [{note}]" if note else ""))


def pytest_addoption(parser):
    parser.addoption("--network", action="store_true", help="run tests that need internet access")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--network"):
        return
    skip = pytest.mark.skip(reason="needs --network")
    for item in items:
        if "network" in item.keywords:
            item.add_marker(skip)
