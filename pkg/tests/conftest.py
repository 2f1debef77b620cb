import pytest

from syncmdp import example_model, parse_model


@pytest.fixture(scope="session")
def drain():
    return example_model("drain")


@pytest.fixture(scope="session")
def funnel():
    return example_model("funnel")


@pytest.fixture(scope="session")
def loopback():
    return example_model("loopback")


@pytest.fixture(scope="session")
def twophase():
    return example_model("twophase")


def build(doc):
    """Parse a model given as a plain dict (test shorthand)."""
    return parse_model(doc)


ABSORBING = {
    "states": ["t"],
    "actions": ["a"],
    "transitions": [{"from": "t", "action": "a", "to": "t", "prob": "1"}],
    "initial": {"t": "1"},
    "targets": {"target": ["t"]},
}
