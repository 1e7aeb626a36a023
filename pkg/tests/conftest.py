"""Shared fixtures and the acceptance-criterion summary.

Tests marked ``@pytest.mark.criterion("<name>")`` roll up into a
pass/fail line per criterion at the end of the run, so the acceptance
gate reads as a checklist."""

from __future__ import annotations

from pathlib import Path

import pytest

import credence

REPO = Path(__file__).resolve().parent.parent
KB_DIR = REPO / "kb"
FIXTURES = Path(__file__).resolve().parent / "fixtures"

_criteria: dict[str, str] = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "criterion(name): acceptance criterion this test checks"
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call":
        return
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    name = marker.args[0]
    if report.failed:
        _criteria[name] = "FAIL"
    elif report.skipped:
        _criteria.setdefault(name, "SKIP")
    elif report.passed and _criteria.get(name) != "FAIL":
        _criteria[name] = "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria):
        terminalreporter.write_line(f"{_criteria[name]:<5} {name}")


@pytest.fixture(scope="session")
def sample_kb() -> credence.KnowledgeBase:
    return credence.load_kb(KB_DIR / "polyarthritis.gkb")


@pytest.fixture(scope="session")
def latex_kb() -> credence.KnowledgeBase:
    return credence.load_kb(FIXTURES / "latex_screen.gkb")


@pytest.fixture(scope="session")
def e4_evidence(sample_kb) -> credence.EvidenceAssignment:
    return credence.load_evidence(KB_DIR / "E4.gev", sample_kb)


@pytest.fixture(scope="session")
def e4_memory(sample_kb, e4_evidence) -> credence.WorkingMemory:
    return credence.forward_chain(sample_kb, e4_evidence)
