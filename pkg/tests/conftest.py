"""
tests/conftest.py
-----------------
Shared fixtures and the `slow` tier switch.

Slow tests (large brute-force associativity and multiplicativity sweeps) are
skipped unless pytest runs with --slow or HOPFCYC_SLOW=1.
"""
import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from corpus import load_corpus


def pytest_addoption(parser):
    parser.addoption("--slow", action="store_true", default=False, help="run slow brute-force tiers")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: large brute-force check, needs --slow or HOPFCYC_SLOW=1")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--slow") or os.getenv("HOPFCYC_SLOW", "0") == "1":
        return
    skip = pytest.mark.skip(reason="slow tier: pass --slow or set HOPFCYC_SLOW=1")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


# ── Corpus fixtures ───────────────────────────────────────────────────────────

CORPUS_PARAMS = {
    "trivial": {},
    "C2": {"name": "group_algebra", "group": "C2"},
    "C4": {"name": "group_algebra", "group": "C4"},
    "S3": {"name": "group_algebra", "group": "S3"},
    "C^S3": {"name": "function_algebra", "group": "S3"},
    "H4": {"name": "sweedler"},
    "T3": {"name": "taft", "order": 3},
}


def corpus_algebra(key: str):
    params = dict(CORPUS_PARAMS[key])
    name = params.pop("name", key)
    return load_corpus(name, **params)


@pytest.fixture(params=list(CORPUS_PARAMS))
def corpus_hopf(request):
    return corpus_algebra(request.param)


@pytest.fixture
def trivial_hopf():
    return corpus_algebra("trivial")


@pytest.fixture
def c2():
    return corpus_algebra("C2")


@pytest.fixture
def h4():
    return corpus_algebra("H4")


@pytest.fixture
def t3():
    return corpus_algebra("T3")
