import pytest

from lteu_coex import WifiParams, solve_fixed_point


@pytest.fixture(scope="session")
def default_params():
    """The committed full-scale configuration (17 stations, 1 KB, RTS/CTS)."""
    return WifiParams()


@pytest.fixture(scope="session")
def default_sol(default_params):
    return solve_fixed_point(default_params)


@pytest.fixture(scope="session")
def reduced_params():
    """Enumeration-friendly instance: 4/8/16 windows, short frames."""
    return WifiParams(n=5, cw0=4, m_retries=2, payload_bits=2048,
                      phy_rate_bps=10_000_000.0)


@pytest.fixture(scope="session")
def reduced_sol(reduced_params):
    return solve_fixed_point(reduced_params)
