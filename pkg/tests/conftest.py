import numpy as np
import pytest

from samaboost import MultiviewDataset
from samaboost.experiment_io import load_fixture

# Filled by test_acceptance.py; printed once the session ends.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1][:-1])):
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def binary_data():
    return load_fixture("binary", view_count=2, view_seed=0)


@pytest.fixture(scope="session")
def three_class_data():
    return load_fixture("three_class", view_count=2, view_seed=0)


@pytest.fixture(scope="session")
def breast_cancer():
    return load_fixture("breast_cancer", view_count=2, view_seed=0)


def toy_dataset(n=40, d=4, K=2, V=2, seed=0):
    rng = np.random.default_rng(seed)
    labels = np.arange(n) % K + 1
    X = rng.normal(size=(n, d)) + labels[:, None] * 0.8
    views = tuple(tuple(range(v, d, V)) for v in range(V))
    return MultiviewDataset(X, labels, views, K=K)
