from pathlib import Path

import pytest

from cdex import load_matrix_file, load_problem_file

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# Holdings of the bundled six-client reference problem, kept inline so the
# tests notice if the fixture file drifts.
SIX_CLIENT_HOLDINGS = [
    [1, 3, 6],
    [2, 3, 4],
    [1, 2, 5],
    [3, 4, 5],
    [2, 4, 6],
    [1, 5, 6],
]

# Reference packet vector used by the exchange tests (over GF(3)).
REFERENCE_PACKETS = [1, 2, 0, 1, 2, 1]


@pytest.fixture(scope="session")
def six_problem():
    problem, q = load_problem_file(FIXTURES / "six_client_problem.json")
    assert q == 3
    assert [list(h) for h in problem.holdings] == SIX_CLIENT_HOLDINGS
    return problem


@pytest.fixture(scope="session")
def six_matrix(six_problem):
    """The bundled ternary reference matrix (local distance 2 everywhere)."""
    return load_matrix_file(FIXTURES / "six_client_matrix.json", six_problem)


@pytest.fixture(scope="session")
def six_matrix_gf5(six_problem):
    """A verified GF(5) matrix for the same problem (local distance 3)."""
    return load_matrix_file(FIXTURES / "six_client_matrix_gf5.json", six_problem)
