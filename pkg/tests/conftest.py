import os

import pytest


def pytest_addoption(parser):
    parser.addoption(
        "--run-long",
        action="store_true",
        default=False,
        help="run extended sweeps up to r=23 (also enabled by RANKFORGE_LONG=1)",
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-long") or os.environ.get("RANKFORGE_LONG") == "1":
        return
    skip = pytest.mark.skip(reason="extended sweep; use --run-long")
    for item in items:
        if "longrun" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(autouse=True)
def _single_env_thread(monkeypatch):
    monkeypatch.delenv("RANKFORGE_THREADS", raising=False)
