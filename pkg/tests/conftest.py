from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from app.integrations.fixtures import load_fixture
from app.models import Fixture

FIXTURES_DIR = Path(__file__).resolve().parents[1] / "fixtures"

settings.register_profile(
    "boundary",
    max_examples=200,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("boundary")


def _load(name: str) -> Fixture:
    fixture, _ = load_fixture(FIXTURES_DIR / f"{name}.json")
    return fixture


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES_DIR


@pytest.fixture(scope="session")
def t1() -> Fixture:
    return _load("t1")


@pytest.fixture(scope="session")
def t2() -> Fixture:
    return _load("t2")


@pytest.fixture(scope="session")
def g7() -> Fixture:
    return _load("g7")
