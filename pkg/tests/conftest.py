"""Shared fixtures: generated corpora and trained model bundles.

Everything is seeded, so fixture contents are identical across runs; the
session scope just avoids re-training for every test module.
"""

import pytest

from tickettriage.corpusgen import generate_corpus
from tickettriage.training import train_bundle

# one line per release criterion, filled in by tests/test_acceptance.py;
# echoed after the run so the lines survive output capture
acceptance_report_lines: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_report_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_report_lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory):
    """Small corpus for component and pipeline tests."""
    out = tmp_path_factory.mktemp("corpus")
    generate_corpus(str(out), seed=3, count=400, image_only_fraction=0.4)
    return str(out)


@pytest.fixture(scope="session")
def bundle(corpus_dir):
    return train_bundle(corpus_dir, seed=1)


@pytest.fixture(scope="session")
def bundle_path(bundle, tmp_path_factory):
    from tickettriage.bundle import save_bundle
    path = tmp_path_factory.mktemp("bundle") / "models.bin"
    save_bundle(bundle, str(path))
    return str(path)


@pytest.fixture(scope="session")
def uplift_corpus_dir(tmp_path_factory):
    """2000-ticket corpus where 40% of tickets carry their discriminative
    entities only inside the attached screenshot."""
    out = tmp_path_factory.mktemp("uplift_corpus")
    generate_corpus(str(out), seed=7, count=2000, image_only_fraction=0.4)
    return str(out)


@pytest.fixture(scope="session")
def uplift_bundle(uplift_corpus_dir):
    return train_bundle(uplift_corpus_dir, seed=0)
