"""Pytest fixtures for tests."""
from copy import deepcopy

import pytest
from rich.console import Console
from tvk import DEFAULT_CONFIG
from tvk._checks import CheckContext
from tvk._numerics import PrecisionPolicy, TValueTable


@pytest.fixture(scope="session")
def console():
    return Console(force_terminal=True, force_interactive=True)


@pytest.fixture
def tvk_config(tmp_path):
    return deepcopy({**DEFAULT_CONFIG, "digits": 20, "cache_dir": str(tmp_path)})


@pytest.fixture(scope="session")
def policy():
    """A lighter policy than the default so that the numeric tests stay quick."""
    return PrecisionPolicy(target_digits=20)


@pytest.fixture(scope="session")
def values(policy):
    return TValueTable(policy)


@pytest.fixture
def context(policy):
    return CheckContext(
        policy=policy,
        tolerance=1e-15,
        duality_tolerance=1e-14,
        oracle_tolerance=1e-10,
        quadrature_tolerance=1e-8,
    )
