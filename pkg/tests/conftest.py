from pathlib import Path

import pytest

from retrodict.evaluator import parse_equation

DATA = Path(__file__).parent / "data"


def load_equations(name: str):
    with open(DATA / name) as fh:
        return [parse_equation(line) for line in fh if line.strip()]


def load_grover_rows():
    rows = {}
    with open(DATA / "grover_n4.txt") as fh:
        for line in fh:
            u, formula = line.split(":", 1)
            rows[int(u)] = formula.strip()
    return rows


@pytest.fixture
def data_dir():
    return DATA


# lines recorded by the acceptance suite, echoed at the end of the session
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
