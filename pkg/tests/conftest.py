import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from drhlab.primes import sieve_range
from drhlab.tau import build_tau_table

from oracles import naive_tau


@pytest.fixture(scope="session")
def primes_1e6():
    return sieve_range(2, 10**6)


@pytest.fixture(scope="session")
def primes_1e8():
    return sieve_range(2, 10**8)


@pytest.fixture(scope="session")
def tau_1e6():
    return build_tau_table(10**6)


@pytest.fixture(scope="session")
def tau_4096():
    return build_tau_table(4096)


@pytest.fixture(scope="session")
def tau_oracle_3000():
    return naive_tau(3000)
