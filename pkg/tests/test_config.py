import json
from pathlib import Path

import numpy as np
import pytest

from qfridge.config import SOLVER_DEFAULTS, load_config, parse_config, parse_path, set_path
from qfridge.errors import ConfigError
from qfridge.model import canonical_model

CONFIGS = Path(__file__).resolve().parents[1] / "configs"

MODEL = {
    "qubits": [
        {"energy": 2.0, "gamma": 0.001, "bath_temp": 50.0},
        {"energy": 12.0, "gamma": 0.001, "bath_temp": 150.0},
        {"energy": 10.0, "gamma": 0.001, "bath_temp": 300.0},
    ],
    "coupling": {"g_tilde": 0.01},
}


def parse(doc):
    return parse_config(json.dumps(doc))


class TestParse:
    @pytest.mark.filterwarnings("ignore:E1/E3")
    def test_canonical_round_trip(self):
        cfg = load_config(CONFIGS / "canonical.json")
        model, assembled = cfg.build()
        assert assembled is None
        assert model == canonical_model()

    def test_defaults_recorded(self):
        cfg = parse({"model": MODEL})
        assert cfg.solver == SOLVER_DEFAULTS
        assert cfg.block["coupling"]["d123"] == 0.0
        resolved = cfg.resolved()
        assert resolved["solver"]["initial_state"] == "000"
        assert "sweep" not in resolved

    def test_both_blocks(self):
        with pytest.raises(ConfigError, match=r"\$\.model.*\$\.circuit"):
            parse({"model": MODEL, "circuit": {}})

    def test_neither_block(self):
        with pytest.raises(ConfigError, match="required"):
            parse({"solver": {}})

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="colour"):
            parse({"model": MODEL, "colour": "blue"})

    def test_unknown_nested_key(self):
        doc = json.loads(json.dumps(MODEL))
        doc["qubits"][1]["spin"] = 0.5
        with pytest.raises(ConfigError, match=r"\$\.model\.qubits\[1\]"):
            parse({"model": doc})

    def test_type_error_path(self):
        doc = json.loads(json.dumps(MODEL))
        doc["qubits"][2]["bath_temp"] = "hot"
        with pytest.raises(ConfigError) as err:
            parse({"model": doc})
        assert "$.model.qubits[2].bath_temp" in str(err.value)
        assert "number" in str(err.value)

    def test_wrong_qubit_count(self):
        doc = {"qubits": MODEL["qubits"][:2]}
        with pytest.raises(ConfigError, match="qubits"):
            parse({"model": doc})

    def test_nonpositive(self):
        doc = json.loads(json.dumps(MODEL))
        doc["qubits"][0]["gamma"] = 0
        with pytest.raises(ConfigError, match="gamma"):
            parse({"model": doc})

    def test_non_finite(self):
        text = json.dumps({"model": MODEL}).replace("0.01", "NaN")
        with pytest.raises(ConfigError, match="finite"):
            parse_config(text)

    def test_invalid_json(self):
        with pytest.raises(ConfigError, match="JSON"):
            parse_config("{not json")

    def test_circuit_block(self):
        cfg = load_config(CONFIGS / "circuit_canonical.json")
        assert cfg.kind == "circuit"
        assert cfg.solver["n_basis"] == 60

    def test_initial_state_pattern(self):
        with pytest.raises(ConfigError, match="initial_state"):
            parse({"model": MODEL, "solver": {"initial_state": "012"}})


class TestSweep:
    def test_plan(self):
        cfg = load_config(CONFIGS / "sweep_t3.json")
        values = cfg.sweep_values()
        assert len(values) == 41
        assert values[0] == 100.0 and values[-1] == 500.0
        assert np.allclose(np.diff(values), 10.0)
        assert cfg.sweep["scale"] == "linear"

    def test_log(self):
        cfg = parse({"model": MODEL, "sweep": {"parameter": "coupling.g_tilde", "from": 1e-4,
                                               "to": 1e-2, "steps": 3, "scale": "log"}})
        assert np.allclose(cfg.sweep_values(), [1e-4, 1e-3, 1e-2])

    def test_log_needs_positive(self):
        cfg = parse({"model": MODEL, "sweep": {"parameter": "coupling.d1", "from": -1,
                                               "to": 1, "steps": 3, "scale": "log"}})
        with pytest.raises(ConfigError):
            cfg.sweep_values()

    def test_steps(self):
        with pytest.raises(ConfigError, match="steps"):
            parse({"model": MODEL, "sweep": {"parameter": "coupling.d1", "from": 0, "to": 1,
                                             "steps": 1}})

    def test_missing_parameter(self):
        with pytest.raises(ConfigError, match="does not exist"):
            parse({"model": MODEL, "sweep": {"parameter": "qubits[3].energy", "from": 0,
                                             "to": 1, "steps": 2}})

    def test_default_coupling_is_sweepable(self):
        cfg = parse({"model": MODEL, "sweep": {"parameter": "coupling.d13", "from": 0, "to": 0.1,
                                               "steps": 2}})
        assert cfg.sweep["parameter"] == "coupling.d13"


class TestPaths:
    def test_parse(self):
        assert parse_path("qubits[2].bath_temp") == ["qubits", 2, "bath_temp"]
        assert parse_path("loops[0].phi_ext") == ["loops", 0, "phi_ext"]

    @pytest.mark.parametrize("bad", ["", "a..b", "q[x]", "q[1", "1abc"])
    def test_malformed(self, bad):
        with pytest.raises(ConfigError):
            parse_path(bad)

    def test_set_is_a_copy(self):
        block = json.loads(json.dumps(MODEL))
        out = set_path(block, "qubits[0].energy", 3.0)
        assert out["qubits"][0]["energy"] == 3.0
        assert block["qubits"][0]["energy"] == 2.0

    def test_non_numeric_leaf(self):
        with pytest.raises(ConfigError, match="not numeric"):
            set_path(MODEL, "qubits[0]", 1.0)
