import json
import math

import pytest

from lienard_lab import builtin, load_system, save_system
from lienard_lab.errors import ConfigError


def test_round_trip_builtin_models(tmp_path):
    for name, params in [("vdp", {"mu": 1.0}), ("vdp_bounded", {"mu": 2.0}),
                         ("two_cycle", None), ("three_cycle", None)]:
        s = builtin(name, params)
        path = tmp_path / f"{name}.json"
        save_system(s, path)
        loaded = load_system(path)
        assert loaded.name == s.name
        assert loaded.d == s.d
        assert loaded.F.segments == s.F.segments
        assert loaded.g.segments == s.g.segments


def test_load_handcrafted_file(tmp_path):
    obj = {
        "name": "cubic_demo",
        "d": "inf",
        "F": {"segments": [{"lo": 0.0, "hi": "inf", "form": "polynomial",
                            "coeffs": [0.0, -1.0, 0.0, 1.0 / 3.0]}]},
        "g": {"segments": [{"lo": 0.0, "hi": "inf", "form": "polynomial",
                            "coeffs": [0.0, 1.0]}]},
    }
    path = tmp_path / "model.json"
    path.write_text(json.dumps(obj))
    s = load_system(path)
    assert s.F.value(math.sqrt(3.0)) == pytest.approx(0.0, abs=1e-14)
    assert s.d == math.inf


def test_load_errors(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ConfigError):
        load_system(path)
    path.write_text(json.dumps({"F": {"segments": []}}))
    with pytest.raises(ConfigError):
        load_system(path)
    path.write_text(json.dumps({
        "F": {"segments": [{"lo": 0, "hi": 1, "form": "wiggle"}]},
        "g": {"segments": [{"lo": 0, "hi": "inf", "form": "polynomial",
                            "coeffs": [0, 1]}]}}))
    with pytest.raises(ConfigError):
        load_system(path)
    path.write_text(json.dumps({
        "F": {"segments": [{"lo": 0, "hi": "inf", "form": "sinusoid",
                            "amplitude": 1.0}]},
        "g": {"segments": [{"lo": 0, "hi": "inf", "form": "polynomial",
                            "coeffs": [0, 1]}]}}))
    with pytest.raises(ConfigError):
        load_system(path)
