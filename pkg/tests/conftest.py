import json
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"
DOCS = Path(__file__).parent.parent / "docs"


@pytest.fixture
def fixtures():
    return FIXTURES


@pytest.fixture(scope="session")
def network_schema():
    return json.loads((DOCS / "network.schema.json").read_text())


@pytest.fixture(scope="session")
def demo_out(tmp_path_factory):
    """One full demo run shared by the output-format tests."""
    from topiknet.cli import main

    out = tmp_path_factory.mktemp("demo")
    assert main(["demo", "--out", str(out)]) == 0
    return out


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
