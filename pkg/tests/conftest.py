import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
CORPUS = ROOT / "corpus"
sys.path.insert(0, str(ROOT / "src"))
sys.path.insert(0, str(Path(__file__).resolve().parent))

from ddsl import io  # noqa: E402


def corpus_model(name):
    return io.load_model(CORPUS / f"{name}.json")


def corpus_update(name):
    return io.load_update(CORPUS / f"{name}.json")


@pytest.fixture(scope="session")
def examples():
    names = ["version1", "version2", "version3", "version4", "version5", "version6",
             "four_triangles", "hex_fan"]
    return {n: corpus_model(n) for n in names}


@pytest.fixture(scope="session")
def example_updates():
    updates = [corpus_update(n) for n in ["simple_choice", "partial_disagreement", "ghosting"]]
    return {u.name: u for u in updates}


# Acceptance summary: one line per criterion at the end of the run.
_CRITERIA = {}


def pytest_runtest_logreport(report):
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        previous = _CRITERIA.get(crit, True)
        _CRITERIA[crit] = previous and report.outcome == "passed"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(_CRITERIA):
        status = "PASS" if _CRITERIA[crit] else "FAIL"
        terminalreporter.write_line(f"criterion {crit}: {status}")
