import sys

import pytest

from structrsa.keygen import StructuredPrime, build_key
from structrsa.shapes import ModulusShape


@pytest.fixture
def desk_pq():
    # 19 = 2^4 + 3, 29 = 5^2 + 4, N = 551
    return build_key(ModulusShape.pq(), StructuredPrime(19, 2, 4, 3),
                     StructuredPrime(29, 5, 2, 4))


@pytest.fixture
def desk_psq():
    # 5 = 2^2 + 1, 83 = 3^4 + 2, N = 5^2 * 83 = 2075
    return build_key(ModulusShape.psq(2), StructuredPrime(5, 2, 2, 1),
                     StructuredPrime(83, 3, 4, 2))


@pytest.fixture
def desk_pslqs():
    # 11 = 2^3 + 3, 3 = 2^1 + 1, N = 11^4 * 3^3 = 395307
    return build_key(ModulusShape.pslqs(3, 1), StructuredPrime(11, 2, 3, 3),
                     StructuredPrime(3, 2, 1, 1))


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda x: int(x.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
