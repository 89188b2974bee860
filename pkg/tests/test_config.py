import pytest

from src.cli.commands import Settings
from src.core.config import BUDGET_ENV_VAR, DEFAULT_CONFIG, ConfigManager
from src.core.logging_setup import configure_logging


def test_defaults_without_file():
    config = ConfigManager(None)
    assert config.config == DEFAULT_CONFIG
    assert config.config is not DEFAULT_CONFIG
    assert config.get_budget() == 20000
    assert config.get_default_backend() == "pset:2"
    assert config.get_component_bound("pset") == 2
    assert config.get_component_bound("vect") == 1
    assert config.get_quiver_limits() == {'max_vertices': 4, 'max_arrows': 4}
    assert config.get_output_format() == "text"
    assert not config.check_universality()


def test_partial_file_is_merged_with_defaults(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("verification:\n  budget: 7\nbackends:\n  default: vect:2:1\n")
    config = ConfigManager(str(path))
    assert config.get_budget() == 7
    assert config.get_max_witnesses() == 5
    assert config.get_default_backend() == "vect:2:1"
    assert config.get_backends_config()['pset'] == {'n_max': 2}


def test_repository_config_matches_defaults(fixtures_dir):
    config = ConfigManager(str(fixtures_dir.parent / "config.yaml"))
    assert config.config == DEFAULT_CONFIG


def test_missing_explicit_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        ConfigManager(str(tmp_path / "absent.yaml"))


@pytest.mark.parametrize("text", ["verification: [1, 2\n", "- just\n- a list\n"])
def test_malformed_file(tmp_path, text):
    path = tmp_path / "config.yaml"
    path.write_text(text)
    with pytest.raises(ValueError):
        ConfigManager(str(path))


def test_environment_overrides_file(monkeypatch):
    monkeypatch.setenv(BUDGET_ENV_VAR, "12")
    assert ConfigManager(None).get_budget() == 12


@pytest.mark.parametrize("raw", ["many", "-3"])
def test_bad_environment_budget(monkeypatch, raw):
    monkeypatch.setenv(BUDGET_ENV_VAR, raw)
    with pytest.raises(ValueError):
        ConfigManager(None).get_budget()


def test_blank_environment_budget_is_ignored(monkeypatch):
    monkeypatch.setenv(BUDGET_ENV_VAR, "  ")
    assert ConfigManager(None).get_budget() == 20000


def test_budget_precedence(monkeypatch):
    monkeypatch.setenv(BUDGET_ENV_VAR, "12")
    settings = Settings(ConfigManager(None))
    assert settings.budget() == 12
    assert settings.budget(5) == 5
    assert settings.budget("unlimited") is None
    assert Settings(ConfigManager(None), budget_flag=3).budget("unlimited") == 3


def test_negative_flag_budget_is_rejected():
    with pytest.raises(ValueError, match="non-negative"):
        Settings(ConfigManager(None), budget_flag=-1).budget()


def test_backend_flag_and_validation():
    assert Settings(ConfigManager(None)).backend == "pset:2"
    assert Settings(ConfigManager(None), backend_flag="vect:3:1").backend == "vect:3:1"
    with pytest.raises(ValueError):
        Settings(ConfigManager(None), backend_flag="vect:4:1").backend


def test_unknown_logging_level():
    with pytest.raises(ValueError, match="Unknown logging level"):
        configure_logging("CHATTY")
