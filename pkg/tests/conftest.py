import numpy as np
import pytest

from theta4.theta_eval import PeriodMatrix, block_diagonal_tau, random_tau


@pytest.fixture(scope="session")
def tau_g1_i() -> PeriodMatrix:
    return PeriodMatrix([[1j]])


@pytest.fixture(scope="session")
def tau_g2_random() -> PeriodMatrix:
    return random_tau(2, seed=7, floor=1.0)


@pytest.fixture(scope="session")
def tau_g2_product() -> PeriodMatrix:
    return block_diagonal_tau([1j, 1j])


@pytest.fixture(scope="session")
def zero1() -> np.ndarray:
    return np.zeros(1, dtype=complex)


@pytest.fixture(scope="session")
def zero2() -> np.ndarray:
    return np.zeros(2, dtype=complex)
