"""JSON scenario configuration: strict schema, defaults, sweep plans.

A scenario holds exactly one of

* ``model``: dressed parameters, ``{"qubits": [3 x {energy, gamma, bath_temp}],
  "coupling": {g_tilde, d1, ..., d123}}``
* ``circuit``: ``{"loops": [3 x {capacitance, ej, inductance, phi_ext[, phi_guess]}],
  "coil_self", "coil_mutual", "baths": [3 x {gamma, bath_temp}]}``

plus optional ``solver`` and ``sweep`` blocks.  Units are fixed: GHz, mK,
nH, fF.
"""

import copy
import json
import math
import re
from dataclasses import dataclass

import jsonschema
import numpy as np

from qfridge.circuit import CircuitParams, JunctionLoop, assemble_model
from qfridge.errors import ConfigError
from qfridge.model import CouplingSpec, QubitSpec, build_model

_NUM = {"type": "number"}
_POS = {"type": "number", "exclusiveMinimum": 0}


def _object(props, required=()):
    return {
        "type": "object",
        "properties": props,
        "required": list(required),
        "additionalProperties": False,
    }


def _triple(item):
    return {"type": "array", "items": item, "minItems": 3, "maxItems": 3}


QUBIT_SCHEMA = _object({"energy": _POS, "gamma": _POS, "bath_temp": _POS},
                       ["energy", "gamma", "bath_temp"])
COUPLING_SCHEMA = _object(
    {"g_tilde": {"type": "number", "minimum": 0},
     **{k: _NUM for k in ("d1", "d2", "d3", "d12", "d13", "d23", "d123")}}
)
LOOP_SCHEMA = _object(
    {"capacitance": _POS, "ej": {"type": "number", "minimum": 0}, "inductance": _POS,
     "phi_ext": _NUM, "phi_guess": {"type": ["number", "null"]}},
    ["capacitance", "ej", "inductance", "phi_ext"],
)
BATH_SCHEMA = _object({"gamma": _POS, "bath_temp": _POS}, ["gamma", "bath_temp"])

SCHEMA = _object(
    {
        "model": _object({"qubits": _triple(QUBIT_SCHEMA), "coupling": COUPLING_SCHEMA},
                         ["qubits"]),
        "circuit": _object(
            {"loops": _triple(LOOP_SCHEMA), "coil_self": _POS,
             "coil_mutual": {"type": "number", "minimum": 0}, "baths": _triple(BATH_SCHEMA)},
            ["loops", "coil_self", "coil_mutual", "baths"],
        ),
        "solver": _object(
            {
                "dt": {"type": ["number", "null"], "exclusiveMinimum": 0},
                "t_final": {"type": ["number", "null"], "exclusiveMinimum": 0},
                "stride": {"type": "integer", "minimum": 1},
                "n_basis": {"type": "integer", "minimum": 20},
                "initial_state": {"type": "string", "pattern": "^[01]{3}$"},
                "resonance_tol": _POS,
                "circuit_resonance_tol": _POS,
                "steady_tol": _POS,
            }
        ),
        "sweep": _object(
            {
                "parameter": {"type": "string"},
                "from": _NUM,
                "to": _NUM,
                "steps": {"type": "integer", "minimum": 2},
                "scale": {"enum": ["linear", "log"]},
            },
            ["parameter", "from", "to", "steps"],
        ),
    }
)

SOLVER_DEFAULTS = {
    "dt": None,
    "t_final": None,
    "stride": 1,
    "n_basis": 60,
    "initial_state": "000",
    "resonance_tol": 1e-9,
    "circuit_resonance_tol": 1e-3,
    "steady_tol": 1e-6,
}
COUPLING_DEFAULTS = {k: 0.0 for k in ("g_tilde", "d1", "d2", "d3", "d12", "d13", "d23", "d123")}

_PATH_TOKEN = re.compile(r"([A-Za-z_]\w*)|\[(\d+)\]")


def _json_path(path):
    out = "$"
    for part in path:
        out += f"[{part}]" if isinstance(part, int) else f".{part}"
    return out


def parse_path(path):
    """Split ``"qubits[2].bath_temp"`` into ``["qubits", 2, "bath_temp"]``."""
    tokens = []
    for part in path.split("."):
        if not part:
            raise ConfigError(f"malformed parameter path {path!r}")
        matched = 0
        for m in _PATH_TOKEN.finditer(part):
            if m.start() != matched:
                raise ConfigError(f"malformed parameter path {path!r}")
            tokens.append(m.group(1) if m.group(1) else int(m.group(2)))
            matched = m.end()
        if matched != len(part):
            raise ConfigError(f"malformed parameter path {path!r}")
    return tokens


def _get(doc, tokens):
    for t in tokens:
        doc = doc[t]
    return doc


def set_path(block, path, value):
    """Return a copy of ``block`` with the numeric leaf at ``path`` replaced."""
    tokens = parse_path(path)
    out = copy.deepcopy(block)
    try:
        parent = _get(out, tokens[:-1])
        current = parent[tokens[-1]]
    except (KeyError, IndexError, TypeError):
        raise ConfigError(f"sweep parameter {path!r} does not exist in the scenario") from None
    if isinstance(current, bool) or not isinstance(current, (int, float)):
        raise ConfigError(f"sweep parameter {path!r} is not numeric")
    parent[tokens[-1]] = value
    return out


@dataclass(frozen=True)
class ScenarioConfig:
    kind: str
    block: dict
    solver: dict
    sweep: dict | None

    def resolved(self):
        """Full config with defaults, as a JSON-ready dict."""
        doc = {self.kind: self.block, "solver": self.solver}
        if self.sweep is not None:
            doc["sweep"] = self.sweep
        return doc

    def sweep_values(self):
        s = self.sweep
        if s["scale"] == "log":
            if s["from"] <= 0 or s["to"] <= 0:
                raise ConfigError("log sweep bounds must be positive")
            return np.geomspace(s["from"], s["to"], s["steps"])
        return np.linspace(s["from"], s["to"], s["steps"])

    def build(self, block=None):
        """Model for this scenario; returns ``(model, assembled_or_None)``."""
        block = self.block if block is None else block
        if self.kind == "model":
            qubits = [QubitSpec(**q) for q in block["qubits"]]
            model = build_model(qubits, CouplingSpec(**block["coupling"]),
                                resonance_tol=self.solver["resonance_tol"])
            return model, None
        circuit = CircuitParams(
            loops=[JunctionLoop(**lp) for lp in block["loops"]],
            coil_self=block["coil_self"],
            coil_mutual=block["coil_mutual"],
        )
        baths = [(b["gamma"], b["bath_temp"]) for b in block["baths"]]
        assembled = assemble_model(
            circuit, baths, n_basis=self.solver["n_basis"],
            resonance_tol=self.solver["circuit_resonance_tol"],
        )
        return assembled.model, assembled


def _check_finite(doc, path=()):
    if isinstance(doc, dict):
        for k, v in doc.items():
            _check_finite(v, path + (k,))
    elif isinstance(doc, list):
        for i, v in enumerate(doc):
            _check_finite(v, path + (i,))
    elif isinstance(doc, float) and not math.isfinite(doc):
        raise ConfigError(f"{_json_path(path)}: expected a finite number, got {doc}")


def parse_config(text):
    """Parse and validate a scenario document; fill and record defaults."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("$: expected an object")
    has_model, has_circuit = "model" in doc, "circuit" in doc
    if has_model and has_circuit:
        raise ConfigError("$.model and $.circuit are both present; give exactly one")
    if not (has_model or has_circuit):
        raise ConfigError("$: one of $.model or $.circuit is required")
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        expected = err.schema.get("type") if isinstance(err.schema, dict) else None
        hint = f" (expected {expected})" if expected and err.validator == "type" else ""
        raise ConfigError(f"{_json_path(err.absolute_path)}: {err.message}{hint}")
    _check_finite(doc)

    kind = "model" if has_model else "circuit"
    block = copy.deepcopy(doc[kind])
    if kind == "model":
        block["coupling"] = {**COUPLING_DEFAULTS, **block.get("coupling", {})}
    else:
        for loop in block["loops"]:
            loop.setdefault("phi_guess", None)
    solver = {**SOLVER_DEFAULTS, **doc.get("solver", {})}
    sweep = None
    if "sweep" in doc:
        sweep = {"scale": "linear", **doc["sweep"]}
        set_path(block, sweep["parameter"], float(sweep["from"]))
    return ScenarioConfig(kind=kind, block=block, solver=solver, sweep=sweep)


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
