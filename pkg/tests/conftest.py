import json
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from padic_ducci.arith.linalg import RationalMatrix, RationalVector
from padic_ducci.config.settings import ENV_OVERRIDES
from padic_ducci.dynamics.orbit import DucciInstance, IterationMode

PRIMES = [2, 3, 5, 7, 11]

small_rationals = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 9))
nonzero_rationals = st.builds(
    Fraction,
    st.integers(-10**6, 10**6).filter(lambda n: n != 0),
    st.integers(1, 10**6),
)
rationals = st.builds(Fraction, st.integers(-10**6, 10**6), st.integers(1, 10**6))
primes = st.sampled_from(PRIMES)


def square_matrices(max_n=5, entries=small_rationals):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(
            st.lists(entries, min_size=n, max_size=n), min_size=n, max_size=n
        ).map(RationalMatrix)
    )


def shift_matrix(n=4) -> RationalMatrix:
    """(S x)_i = x_{i+1}: S (1,2,3,4) = (2,3,4,1)"""
    return RationalMatrix([[1 if j == (i + 1) % n else 0 for j in range(n)] for i in range(n)])


def is_power_of(x: Fraction, p: int) -> bool:
    if x <= 0:
        return False
    num, den = x.numerator, x.denominator
    if num != 1 and den != 1:
        return False
    m = num if den == 1 else den
    while m % p == 0:
        m //= p
    return m == 1


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    """Keep tests away from the user's settings and environment"""
    monkeypatch.setenv("PADIC_DUCCI_CONFIG", str(tmp_path / "config" / "settings.json"))
    for var in ENV_OVERRIDES:
        monkeypatch.delenv(var, raising=False)
    return tmp_path / "config" / "settings.json"


@pytest.fixture
def half_diagonal():
    return RationalMatrix.diagonal([Fraction(1, 2), Fraction(1, 2)])


@pytest.fixture
def diag_half_instance(half_diagonal):
    return DucciInstance(
        p=2,
        matrix=half_diagonal,
        seed=RationalVector([1, 1]),
        mode=IterationMode.LINEAR_MODE,
    )


@pytest.fixture
def write_json(tmp_path):
    def _write(name, data):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return path

    return _write


@pytest.fixture
def diag_half_file(write_json):
    return write_json(
        "diag_half.json",
        {"p": 2, "mode": "linear", "matrix": [["1/2", "0"], ["0", "1/2"]], "seed": ["1", "1"]},
    )
