"""Shared expensive fixtures: profile integrations reused across modules."""

import pytest

import bowlab as bl
from bowlab.profile import SolverConfig, integrate_profile


@pytest.fixture(scope="session")
def profile_mean2():
    return integrate_profile(bl.mean(2), SolverConfig(r_budget=50.0))


@pytest.fixture(scope="session")
def profile_mean3():
    return integrate_profile(bl.mean(3), SolverConfig(r_budget=50.0))


@pytest.fixture(scope="session")
def profile_sr2n3():
    return integrate_profile(bl.sigma_root(2, 3), SolverConfig(r_budget=50.0))


@pytest.fixture(scope="session")
def profile_hs2():
    return integrate_profile(bl.h_times_sn(2))


@pytest.fixture(scope="session")
def profile_hs3():
    return integrate_profile(bl.h_times_sn(3))


@pytest.fixture(scope="session")
def profile_harmonic():
    # inverse harmonic sum, n=2: the profile has the exact closed form
    # v(r) = 2r/(1-r^2), u(r) = -log(1-r^2), ball radius exactly 1
    return integrate_profile(bl.harmonic_sum_inverse(1, 2))
