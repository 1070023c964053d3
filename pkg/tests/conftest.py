import inspect

import pytest
from fastapi.testclient import TestClient

from rtimon.config import load_config
from rtimon.service import AppState, create_app, run_ingest
from rtimon.store import ObservationStore

import corpus


@pytest.fixture(scope="session")
def corpus_paths(tmp_path_factory):
    return corpus.write_corpus(tmp_path_factory.mktemp("corpus"))


@pytest.fixture(scope="session")
def config(corpus_paths):
    return load_config(corpus_paths.config_dir)


@pytest.fixture(scope="session")
def populated_state(corpus_paths, config, tmp_path_factory):
    """App state with the main batch ingested; treat as read-only."""
    store_dir = tmp_path_factory.mktemp("store")
    state = AppState(config=config,
                     store=ObservationStore(store_dir, config=config),
                     config_dir=corpus_paths.config_dir,
                     reports_dir=store_dir / "reports")
    run_ingest(state, corpus.MAIN_SOURCE)
    return state


@pytest.fixture(scope="session")
def snapshot(populated_state):
    return populated_state.store.snapshot()


@pytest.fixture(scope="session")
def client(populated_state):
    return TestClient(create_app(populated_state))


@pytest.fixture()
def fresh_state(corpus_paths, tmp_path):
    """Isolated state over the same corpus for tests that mutate."""
    config = load_config(corpus_paths.config_dir)
    return AppState(config=config,
                    store=ObservationStore(tmp_path / "store", config=config),
                    config_dir=corpus_paths.config_dir,
                    reports_dir=tmp_path / "reports")


@pytest.fixture()
def admin_token(monkeypatch):
    monkeypatch.setenv("RTIMON_ADMIN_TOKEN", "sesame")
    return "sesame"


# --- acceptance criterion reporting ------------------------------------------

_acceptance_results: dict[str, str] = {}


def pytest_runtest_makereport(item, call):
    if call.when != "call" or "test_acceptance" not in item.nodeid:
        return
    label = item.name
    doc = inspect.getdoc(item.function)
    if doc:
        label = doc.splitlines()[0]
    _acceptance_results[label] = \
        "PASS" if call.excinfo is None else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for label, outcome in _acceptance_results.items():
        terminalreporter.write_line(f"[{outcome}] {label}")
