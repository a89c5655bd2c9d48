"""
Pytest configuration and shared fixtures for testing.
"""

import os
import sys

import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from models.Settings import EvaluationConfig
from utils.PresentationCompiler import FIXTURE_VARIANTS, LEVEL_PRESETS, build_level_fixture
from utils.SampleDeck import write_sample_deck


@pytest.fixture
def eval_config():
    """Default parameters, single worker."""
    return EvaluationConfig(workers=1)


@pytest.fixture
def app(eval_config):
    """Flask app with the testing environment and default parameters."""
    from app import create_app

    app = create_app("testing", evaluation_config=eval_config)
    app.config["TESTING"] = True
    yield app


@pytest.fixture
def client(app):
    """Flask test client."""
    return app.test_client()


@pytest.fixture
def runner():
    """Click runner for the command group."""
    from click.testing import CliRunner

    return CliRunner()


@pytest.fixture
def sample_deck_dir(tmp_path):
    """The six-slide reference deck with layout sidecars."""
    deck = tmp_path / "reference" / "sample"
    write_sample_deck(deck)
    return deck


@pytest.fixture(scope="session")
def level_packages():
    """{"L0": pdf bytes, "L1".."L5": package bytes}."""
    return {preset: build_level_fixture(preset) for preset in LEVEL_PRESETS}


@pytest.fixture(scope="session")
def variant_packages():
    """Gate-specific packages keyed by variant name."""
    return {name: builder() for name, builder in FIXTURE_VARIANTS.items()}
