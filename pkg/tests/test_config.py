"""Test the run configuration."""
import os

# noinspection PyPackageRequirements
import pytest

from fdstpy.config import (
    CACHE_DIR_VAR,
    CONFIG_KEYS,
    MEASURE_IDS,
    RunConfig,
    default_cache_dir,
    load_config_file,
    make_config,
)


def _write(tmp_path, text: str) -> str:
    """Write a configuration file."""
    path = os.path.join(str(tmp_path), "run.yaml")
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)
    return path


def test_defaults(monkeypatch) -> None:
    """Test the default settings."""
    monkeypatch.delenv(CACHE_DIR_VAR, raising=False)
    cfg = RunConfig("weights")
    assert cfg.n is None
    assert cfg.r is None
    assert cfg.choice == 1
    assert cfg.profile == "quadratic"
    assert cfg.tol == 1e-6
    assert cfg.max_iter == 100
    assert not cfg.relative_tol
    assert cfg.seed == 0
    assert cfg.measures == ()
    assert cfg.sizes == (32, 64, 128, 256, 512)
    assert cfg.repeats == 3
    assert cfg.out_dir == "."
    assert cfg.cache_dir == os.path.join("~", ".cache", "fdstpy")
    assert "command" in CONFIG_KEYS
    assert "cache_dir" in CONFIG_KEYS


def test_cache_dir_from_environment(monkeypatch) -> None:
    """Test the cache directory variable."""
    monkeypatch.setenv(CACHE_DIR_VAR, "/tmp/weights")
    assert default_cache_dir() == "/tmp/weights"
    assert RunConfig("weights").cache_dir == "/tmp/weights"
    assert RunConfig("weights", cache_dir="/x").cache_dir == "/x"
    monkeypatch.setenv(CACHE_DIR_VAR, "  ")
    assert default_cache_dir() == os.path.join("~", ".cache", "fdstpy")


def test_measures() -> None:
    """Test the measure selection."""
    assert RunConfig("measure", measures=["d3", "d1", "d3"]).measures == \
        ("d3", "d1")
    assert RunConfig("measure", measures=["all"]).measures == MEASURE_IDS
    assert RunConfig("measure", measures=["d2", "all"]).measures[0] == "d2"
    with pytest.raises(ValueError):
        RunConfig("measure", measures=["d9"])


def test_invalid() -> None:
    """Test the rejection of invalid settings."""
    with pytest.raises(ValueError):
        RunConfig("transform")
    with pytest.raises(ValueError):
        RunConfig("weights", n=2)
    with pytest.raises(ValueError):
        RunConfig("weights", choice=4)
    with pytest.raises(ValueError):
        RunConfig("weights", profile="gaussian")
    with pytest.raises(ValueError):
        RunConfig("inverse", max_iter=-1)
    with pytest.raises(ValueError):
        RunConfig("inverse", tol=-1e-3)
    with pytest.raises(ValueError):
        RunConfig("bench", repeats=0)
    with pytest.raises(TypeError):
        RunConfig("weights", n="8")  # type: ignore
    with pytest.raises(TypeError):
        RunConfig("fdst", output=3)  # type: ignore
    assert RunConfig("inverse", max_iter=0).max_iter == 0


def test_config_file(tmp_path) -> None:
    """Test loading settings from YAML."""
    path = _write(tmp_path, "n: 64\nr: 4\nprofile: cubic\nsizes: [8, 16]\n")
    assert load_config_file(path) == {"n": 64, "r": 4, "profile": "cubic",
                                      "sizes": [8, 16]}
    cfg = make_config("bench", {"n": None, "r": 8}, path)
    assert cfg.n == 64
    assert cfg.r == 8
    assert cfg.profile == "cubic"
    assert cfg.sizes == (8, 16)
    assert make_config("weights", {"choice": 2}).choice == 2

    assert load_config_file(_write(tmp_path, "")) == {}
    with pytest.raises(ValueError):
        load_config_file(_write(tmp_path, "n: 8\ncolor: red\n"))
    with pytest.raises(ValueError):
        load_config_file(_write(tmp_path, "command: fdst\n"))
    with pytest.raises(TypeError):
        load_config_file(_write(tmp_path, "- 1\n- 2\n"))
    with pytest.raises(ValueError):
        load_config_file(_write(tmp_path, "n: [1\n"))
    with pytest.raises(ValueError):
        load_config_file(os.path.join(str(tmp_path), "missing.yaml"))
