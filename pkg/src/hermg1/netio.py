"""JSON input format for patch networks.

    {"corners": [{"position": [x, y, z], "normal": [x, y, z]}, ...],
     "faces": [[i0, i1, i2, i3], ...],
     "options": {"twist": "zero" | "adini",
                 "chord_scale": number,
                 "normal_policy": "prescribed" | "average_cross" | "first_slot"}}

``normal`` and the whole ``options`` object are optional; unknown keys are
rejected.
"""
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

import jsonschema

from .errors import ParseError, SchemaError
from .network import CornerRecord, TwistPolicy, build_network
from .continuity import NormalPolicy

_VEC3 = {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3}

NETWORK_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["corners", "faces"],
    "properties": {
        "corners": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["position"],
                "properties": {"position": _VEC3, "normal": _VEC3},
            },
        },
        "faces": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "integer"}, "minItems": 4, "maxItems": 4},
        },
        "options": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "twist": {"enum": [p.value for p in TwistPolicy]},
                "chord_scale": {"type": "number", "exclusiveMinimum": 0},
                "normal_policy": {"enum": [p.value for p in NormalPolicy]},
            },
        },
    },
}


@dataclass
class NetworkOptions:
    twist: TwistPolicy = TwistPolicy.ZERO
    chord_scale: float = 1.0
    # None: prescribed where a corner has a normal, average_cross elsewhere
    normal_policy: Optional[NormalPolicy] = None

    def to_json(self):
        out = {"twist": self.twist.value, "chord_scale": self.chord_scale}
        if self.normal_policy is not None:
            out["normal_policy"] = self.normal_policy.value
        return out


@dataclass
class NetworkInput:
    corners: list
    faces: list
    options: NetworkOptions = field(default_factory=NetworkOptions)

    def build(self):
        return build_network(self.corners, self.faces)

    def __eq__(self, other):
        if not isinstance(other, NetworkInput):
            return NotImplemented
        return (self.corners == other.corners and self.faces == other.faces
                and self.options == other.options)


def _schema_path(error):
    parts = ["$"]
    for p in error.absolute_path:
        parts.append(f"[{p}]" if isinstance(p, int) else f".{p}")
    return "".join(parts)


def parse_network(text, source="<string>"):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    validator = jsonschema.Draft202012Validator(NETWORK_SCHEMA)
    error = jsonschema.exceptions.best_match(validator.iter_errors(doc))
    if error is not None:
        raise SchemaError(f"{source}: {_schema_path(error)}: {error.message}")
    corners = [CornerRecord(c["position"], c.get("normal")) for c in doc["corners"]]
    faces = [tuple(int(i) for i in f) for f in doc["faces"]]
    opts = doc.get("options", {})
    options = NetworkOptions(
        twist=TwistPolicy(opts.get("twist", "zero")),
        chord_scale=float(opts.get("chord_scale", 1.0)),
        normal_policy=NormalPolicy(opts["normal_policy"]) if "normal_policy" in opts else None,
    )
    return NetworkInput(corners, faces, options)


def load_network_json(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: cannot read file: {exc.strerror or exc}") from None
    return parse_network(text, source=str(path))


def network_to_json(data):
    corners = []
    for c in data.corners:
        entry = {"position": [float(x) for x in c.position]}
        if c.normal is not None:
            entry["normal"] = [float(x) for x in c.normal]
        corners.append(entry)
    return {
        "corners": corners,
        "faces": [list(f) for f in data.faces],
        "options": data.options.to_json(),
    }


def save_network_json(data, path):
    path = Path(path)
    path.write_text(json.dumps(network_to_json(data), indent=2) + "\n", encoding="utf-8")
    return path


def input_from_network(net, options=None):
    return NetworkInput(list(net.corners), [tuple(f) for f in net.faces], options or NetworkOptions())


def bundled_cube_path():
    """Path of the cube network shipped with the package."""
    return Path(str(resources.files("hermg1") / "data" / "cube.json"))
