import pytest

from entanglement_transfer.config import Config, bool_env_var_set


@pytest.mark.parametrize(
    "value, expected",
    [("True", True), ("1", True), ("true", True), ("False", False), ("0", False), ("yes", False)],
)
def test_bool_env_var_set(monkeypatch, value, expected):
    monkeypatch.setenv("TEST_VAR", value)
    assert bool_env_var_set("TEST_VAR") == expected


def test_bool_env_var_not_set(monkeypatch):
    monkeypatch.delenv("TEST_VAR_THAT_IS_NOT_SET", raising=False)
    assert not bool_env_var_set("TEST_VAR_THAT_IS_NOT_SET")


def test_strict_minimizer(monkeypatch):
    monkeypatch.setenv("STRICT_MINIMIZER", "true")
    assert Config.strict_minimizer()
    monkeypatch.delenv("STRICT_MINIMIZER")
    assert not Config.strict_minimizer()


def test_defaults():
    assert Config.UNITS in Config.VALID_UNITS
    assert Config.TRUNCATION_BUDGET > 0
    assert Config.MINIMIZER_RESTARTS >= 1
