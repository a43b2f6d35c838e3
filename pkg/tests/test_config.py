import pytest

from tickettriage.config import load_config, merged_config, parse_value
from tickettriage.errors import ParameterError


def test_load_config_parses_types_and_comments(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "# pipeline settings\n"
        "seed = 7\n"
        "top_n=3   # inline comment\n"
        "\n"
        "conf_resolv_cutoff = 0.8\n"
        "mode = multimodal\n"
    )
    values = load_config(str(cfg))
    assert values == {"seed": 7, "top_n": 3,
                      "conf_resolv_cutoff": 0.8, "mode": "multimodal"}


def test_load_config_rejects_unknown_key(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("sede = 7\n")
    with pytest.raises(ParameterError):
        load_config(str(cfg))


def test_load_config_rejects_bad_value(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("seed = seven\n")
    with pytest.raises(ParameterError):
        load_config(str(cfg))


def test_load_config_rejects_missing_equals(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("seed 7\n")
    with pytest.raises(ParameterError):
        load_config(str(cfg))


def test_parse_value_types():
    assert parse_value("seed", "3") == 3
    assert parse_value("image_only_fraction", "0.25") == 0.25
    with pytest.raises(ParameterError):
        parse_value("unknown_key", "1")


def test_merged_config_cli_overrides_file():
    merged = merged_config({"seed": 1, "top_n": 5}, {"seed": 2, "count": None})
    assert merged == {"seed": 2, "top_n": 5}
