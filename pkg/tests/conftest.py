import random

import pytest

from qdisynth.logic import BooleanFunction, from_truth_table

AND3_BITS = [0, 0, 0, 0, 0, 0, 0, 1]
SEED = 20170501

_acceptance_lines: list[str] = []


def record_criterion(number: int, name: str, passed: bool, detail: str = "") -> None:
    status = "PASS" if passed else "FAIL"
    _acceptance_lines.append(f"[{status}] criterion {number:>2}: {name}" + (f" ({detail})" if detail else ""))


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def and3():
    return from_truth_table(3, AND3_BITS)


def nonconstant_functions(n: int) -> list[BooleanFunction]:
    return [BooleanFunction.from_int(n, t) for t in range(1, (1 << (1 << n)) - 1)]


def random_functions(n: int, count: int, seed: int = SEED) -> list[BooleanFunction]:
    rng = random.Random(seed)
    return [BooleanFunction.from_int(n, rng.randrange(1, (1 << (1 << n)) - 1)) for _ in range(count)]
