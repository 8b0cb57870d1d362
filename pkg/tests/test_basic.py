"""Basic tests to ensure the test infrastructure is working."""

import sys
from pathlib import Path

import pytest


def test_python_version():
    """Test that we're running on a supported Python version."""
    assert sys.version_info >= (3, 10), "Python 3.10 or higher is required"


def test_imports():
    """Test that core dependencies can be imported."""
    import mpmath
    import numpy
    import sympy
    import yaml

    assert yaml is not None
    assert numpy is not None
    assert sympy is not None
    assert mpmath is not None


def test_config_example_exists():
    """Test that the example configuration file exists."""
    config_path = Path(__file__).parent.parent / "config" / "config.example.yaml"
    assert config_path.exists(), "config.example.yaml should exist"


def test_config_example_valid():
    """Test that the example configuration file is valid YAML."""
    import yaml

    config_path = Path(__file__).parent.parent / "config" / "config.example.yaml"
    with open(config_path, "r") as f:
        config = yaml.safe_load(f)

    assert config is not None
    assert "tolerance_profiles" in config
    assert set(config["tolerance_profiles"]) == {"strict", "parity", "relaxed"}
    assert config["verification"]["default_max_n"][2] == 400
    assert config["verification"]["default_max_n"][3] == 80


def test_config_example_matches_defaults():
    """Test that the example configuration spells out the built-in defaults."""
    import yaml

    from scripts.walk_asymptotics import DEFAULT_CONFIG

    config_path = Path(__file__).parent.parent / "config" / "config.example.yaml"
    with open(config_path, "r") as f:
        config = yaml.safe_load(f)

    assert config["tolerance_profiles"] == DEFAULT_CONFIG["tolerance_profiles"]
    assert config["fitting"] == DEFAULT_CONFIG["fitting"]
    assert config["diagonal"] == DEFAULT_CONFIG["diagonal"]


def test_prediction_schema_matches_document():
    """Test that the shipped prediction schema names the keys the document carries."""
    import json

    from scripts.asymptotics import predict
    from scripts.corpus import get_example

    schema_path = Path(__file__).parent.parent / "docs" / "schemas" / "prediction.json"
    schema = json.loads(schema_path.read_text())
    prediction_schema = schema["properties"]["prediction"]
    document = predict(get_example("zerodrift-2d-weighted").model, second_order=True).to_dict()

    assert set(prediction_schema["required"]) == set(document)
    class_schema = prediction_schema["properties"]["classes"]["items"]
    assert set(class_schema["required"]) == set(document["classes"][0])


def test_verification_schema_is_valid_json():
    """Test that the shipped verification schema parses and lists the report keys."""
    import json

    schema_path = Path(__file__).parent.parent / "docs" / "schemas" / "verification.json"
    schema = json.loads(schema_path.read_text())
    assert set(schema["required"]) == {"theorem", "profile", "tolerances", "maxN", "classes", "verdict"}


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
