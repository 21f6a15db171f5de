from pathlib import Path

import pytest

SPEC_DIR = Path(__file__).resolve().parents[1] / "specs"


@pytest.fixture
def spec_dir() -> Path:
    return SPEC_DIR


# ---------------------------------------------------------------------------
# acceptance summary: one line per criterion after the run

_ACCEPTANCE: dict[int, tuple[str, str, float | None]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or (rep.when != "call" and not rep.failed):
        return
    number, title = mark.args
    elapsed = dict(item.user_properties).get("elapsed")
    if hasattr(rep, "wasxfail"):
        status = "FAIL (expected: target not attainable)" if rep.skipped else "PASS (unexpected)"
    else:
        status = "PASS" if rep.passed else "FAIL"
    _ACCEPTANCE[number] = (title, status, elapsed)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, status, elapsed = _ACCEPTANCE[number]
        took = f" [{elapsed:.2f}s]" if elapsed is not None else ""
        terminalreporter.write_line(f"criterion {number:2d}: {status:<6} {title}{took}")
