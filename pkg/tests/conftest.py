import json
from pathlib import Path

import pytest

from cinestagger import ClusterInstance, build_model, load_instance
from cinestagger.data import example_instance_path


@pytest.fixture(scope="session")
def example_path() -> Path:
    return example_instance_path()


@pytest.fixture(scope="session")
def example_document(example_path) -> dict:
    return json.loads(example_path.read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def example_instance(example_path) -> ClusterInstance:
    instance = load_instance(example_path)
    assert isinstance(instance, ClusterInstance)
    return instance


@pytest.fixture(scope="session")
def example_model(example_instance):
    return build_model(example_instance)
