"""Scenario files: schema, loading and semantic validation.

A scenario is a JSON object::

    {
      "schema_version": 1,
      "description": "...",
      "seed": 0,
      "hbar": 1.0,
      "grid": {"n": 128, "L": 40.0},
      "frames": {"<frame id>": {"observer": "s", "observer_mass": "2",
                                "masses": {"i": 1, "s'": [3, 2]}, "dim": 1}},
      "states": [{"id": "psi", "frame": "<frame id>", "kind": "gaussian",
                  "params": [[center, width, mean_pi], ...]}],
      "actions": [{"action": "verify-algebra", "frame": "<frame id>", "to": "s'"}, ...]
    }

Masses are numbers, decimal/fraction strings or [numerator, denominator]
pairs; ``observer_mass: null`` is a classical observer. Complex numbers are
numbers or [re, im] pairs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import jsonschema

from .frame import FrameSpec

SCHEMA_VERSION = 1

ACTIONS = (
    "verify-algebra", "transform", "evolve", "uncertainty",
    "delta-c", "wigner", "galilean-check", "angular-momentum",
)

_MASS = {
    "oneOf": [
        {"type": "number", "exclusiveMinimum": 0},
        {"type": "string", "minLength": 1},
        {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
    ]
}
_COMPLEX = {
    "oneOf": [
        {"type": "number"},
        {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
    ]
}
_NAME = {"type": "string", "minLength": 1}
_TRIPLE = {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3}
_POS = {"type": "number", "exclusiveMinimum": 0}
_TOLS = {"type": "object", "additionalProperties": {"type": "number", "minimum": 0}}


def _action(name, props, required=()):
    base = {"action": {"const": name}, "label": _NAME, "tolerances": _TOLS}
    return {
        "if": {"properties": {"action": {"const": name}}, "required": ["action"]},
        "then": {
            "properties": {**base, **props},
            "required": ["action", *required],
            "additionalProperties": False,
        },
    }


SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema_version", "frames", "actions"],
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "description": {"type": "string"},
        "seed": {"type": "integer", "minimum": 0, "maximum": 2 ** 64 - 1},
        "hbar": _POS,
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"n": {"type": "integer", "minimum": 4}, "L": _POS},
        },
        "frames": {
            "type": "object",
            "minProperties": 1,
            "additionalProperties": {
                "type": "object",
                "required": ["observer", "masses"],
                "additionalProperties": False,
                "properties": {
                    "observer": _NAME,
                    "observer_mass": {"oneOf": [{"type": "null"}, _MASS]},
                    "masses": {"type": "object", "minProperties": 1, "additionalProperties": _MASS},
                    "bodies": {"type": "array", "items": _NAME},
                    "dim": {"enum": [1, 2, 3]},
                },
            },
        },
        "states": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "frame", "kind"],
                "properties": {
                    "id": _NAME,
                    "frame": _NAME,
                    "kind": {"enum": ["gaussian", "random", "localized-observer"]},
                },
                "allOf": [
                    {
                        "if": {"properties": {"kind": {"const": "gaussian"}}},
                        "then": {
                            "required": ["params"],
                            "properties": {"params": {"type": "array", "items": _TRIPLE, "minItems": 1}},
                        },
                    },
                    {
                        "if": {"properties": {"kind": {"const": "random"}}},
                        "then": {"properties": {"components": {"type": "integer", "minimum": 1}}},
                    },
                    {
                        "if": {"properties": {"kind": {"const": "localized-observer"}}},
                        "then": {
                            "required": ["observer", "c", "particle"],
                            "properties": {"observer": _NAME, "c": {"type": "number"}, "particle": _TRIPLE,
                                           "superposed": {"type": "boolean"}},
                        },
                    },
                ],
            },
        },
        "actions": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["action"],
                "properties": {"action": {"enum": list(ACTIONS)}},
                "allOf": [
                    _action("verify-algebra", {
                        "frame": _NAME, "to": _NAME,
                        "random_triples": {"type": "integer", "minimum": 0},
                        "compose_via": _NAME,
                    }, ["frame", "to"]),
                    _action("transform", {
                        "state": _NAME, "to": _NAME, "as": _NAME, "compare": _NAME,
                        "dump": {"type": "boolean"},
                    }, ["state", "to"]),
                    _action("evolve", {
                        "state": _NAME,
                        "hamiltonian": {
                            "type": "object",
                            "required": ["kind"],
                            "additionalProperties": False,
                            "properties": {
                                "kind": {"enum": ["free_N", "two_body_interacting", "single_body_effective",
                                                  "naive", "zero"]},
                                "potential": {
                                    "type": "object",
                                    "required": ["a", "b", "k"],
                                    "additionalProperties": False,
                                    "properties": {"type": {"const": "harmonic"}, "a": _NAME, "b": _NAME,
                                                   "k": {"type": "number"}},
                                },
                            },
                        },
                        "dt": _POS,
                        "steps": {"type": "integer", "minimum": 1},
                        "save_every": {"type": "integer", "minimum": 1},
                        "checks": {
                            "type": "array",
                            "items": {"enum": ["ehrenfest", "reduced-mass", "energy", "norm",
                                               "frame-consistency"]},
                            "uniqueItems": True,
                        },
                        "as": _NAME,
                        "dump": {"type": "boolean"},
                    }, ["state", "hamiltonian", "dt", "steps"]),
                    _action("uncertainty", {"state": _NAME, "covariant_to": _NAME}, ["state"]),
                    _action("delta-c", {
                        "state": _NAME, "L": _NAME, "R": _NAME,
                        "random_states": {"type": "integer", "minimum": 0},
                        "sweep": {"type": "array", "items": _POS},
                    }, ["state", "L", "R"]),
                    _action("wigner", {
                        "alpha": _COMPLEX, "beta": _COMPLEX,
                        "assignment": {"enum": ["standard", "classical", "toy"]},
                        "toy": {"type": "array", "items": _COMPLEX, "minItems": 4, "maxItems": 4},
                        "family_angles": {"type": "array", "items": {"type": "number"}},
                        "expect": {"enum": ["consistent", "inconsistent"]},
                    }, ["alpha", "beta", "assignment"]),
                    _action("galilean-check", {
                        "frame": _NAME, "body": _NAME,
                        "potential": {
                            "type": "object",
                            "required": ["a", "b", "k"],
                            "additionalProperties": False,
                            "properties": {"a": _NAME, "b": _NAME, "k": _MASS},
                        },
                        "expect": {"type": "boolean"},
                    }, ["frame", "body"]),
                    _action("angular-momentum", {"frame": _NAME, "body": _NAME}, ["frame", "body"]),
                ],
            },
        },
    },
}


class ScenarioError(ValueError):
    """Schema or reference problem, with a JSON path to the offending field."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


def _json_path(parts) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


@dataclass
class Scenario:
    data: dict
    frames: dict = field(default_factory=dict)
    source: str = ""

    @property
    def description(self) -> str:
        return self.data.get("description", "")

    @property
    def actions(self) -> list:
        return self.data["actions"]

    @property
    def states(self) -> list:
        return self.data.get("states", [])


def _frame_bodies(fr: FrameSpec) -> set:
    return set(fr.bodies) | {fr.observer_id}


def validate(data: dict, source: str = "") -> Scenario:
    """Schema check, then check that every referenced frame, state and body exists."""
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = list(validator.iter_errors(data))
    if errors:
        # the deepest error usually names the actual offending field
        e = max(errors, key=lambda e: len(e.absolute_path))
        raise ScenarioError(_json_path(e.absolute_path), e.message)

    frames = {}
    for fid, fd in data["frames"].items():
        try:
            frames[fid] = FrameSpec.from_json(fd)
        except (ValueError, TypeError) as exc:
            raise ScenarioError(_json_path(["frames", fid]), str(exc)) from None

    states = {}  # id -> frame
    for k, st in enumerate(data.get("states", [])):
        path = ["states", k]
        if st["frame"] not in frames:
            raise ScenarioError(_json_path(path + ["frame"]), f"undeclared frame {st['frame']!r}")
        fr = frames[st["frame"]]
        if fr.dim != 1:
            raise ScenarioError(_json_path(path + ["frame"]), "lattice states need a one-axis frame")
        if st["id"] in states:
            raise ScenarioError(_json_path(path + ["id"]), f"duplicate state id {st['id']!r}")
        if st["kind"] == "gaussian" and len(st["params"]) != len(fr.bodies):
            raise ScenarioError(_json_path(path + ["params"]),
                                f"need one (center, width, mean_pi) per body of {st['frame']!r}")
        if st["kind"] == "localized-observer":
            if len(fr.bodies) != 2:
                raise ScenarioError(_json_path(path + ["frame"]), "needs a frame with exactly two bodies")
            if st["observer"] not in fr.bodies:
                raise ScenarioError(_json_path(path + ["observer"]), f"undeclared body {st['observer']!r}")
        states[st["id"]] = fr

    def need_body(fr: FrameSpec, body: str, path, allow_observer=False):
        ok = body in fr.bodies or (allow_observer and body == fr.observer_id)
        if not ok:
            raise ScenarioError(_json_path(path), f"undeclared body {body!r}")

    def need_state(sid, path) -> FrameSpec:
        if sid not in states:
            raise ScenarioError(_json_path(path), f"undeclared state {sid!r}")
        return states[sid]

    def need_frame(fid, path) -> FrameSpec:
        if fid not in frames:
            raise ScenarioError(_json_path(path), f"undeclared frame {fid!r}")
        return frames[fid]

    for k, act in enumerate(data["actions"]):
        path = ["actions", k]
        a = act["action"]
        if a == "verify-algebra":
            fr = need_frame(act["frame"], path + ["frame"])
            need_body(fr, act["to"], path + ["to"])
            if "compose_via" in act:
                need_body(fr, act["compose_via"], path + ["compose_via"])
        elif a == "transform":
            fr = need_state(act["state"], path + ["state"])
            need_body(fr, act["to"], path + ["to"])
            if "compare" in act and need_state(act["compare"], path + ["compare"]) != fr:
                raise ScenarioError(_json_path(path + ["compare"]), "comparison state lives in another frame")
            if "as" in act:
                states[act["as"]] = fr.relative_to(act["to"])
        elif a == "evolve":
            fr = need_state(act["state"], path + ["state"])
            pot = act["hamiltonian"].get("potential")
            if pot:
                need_body(fr, pot["a"], path + ["hamiltonian", "potential", "a"])
                need_body(fr, pot["b"], path + ["hamiltonian", "potential", "b"])
            elif act["hamiltonian"]["kind"] == "two_body_interacting":
                raise ScenarioError(_json_path(path + ["hamiltonian"]), "interacting Hamiltonian needs a potential")
            if "reduced-mass" in act.get("checks", []) and len(fr.bodies) != 1:
                raise ScenarioError(_json_path(path + ["checks"]), "reduced-mass check needs a one-body frame")
            if "as" in act:
                states[act["as"]] = fr
        elif a == "uncertainty":
            fr = need_state(act["state"], path + ["state"])
            if "covariant_to" in act:
                need_body(fr, act["covariant_to"], path + ["covariant_to"])
        elif a == "delta-c":
            fr = need_state(act["state"], path + ["state"])
            need_body(fr, act["L"], path + ["L"])
            need_body(fr, act["R"], path + ["R"])
            if act["L"] == act["R"]:
                raise ScenarioError(_json_path(path + ["R"]), "L and R must be distinct bodies")
        elif a == "wigner":
            if act["assignment"] == "toy" and "toy" not in act and "family_angles" not in act:
                raise ScenarioError(_json_path(path), "toy assignment needs 'toy' or 'family_angles'")
        elif a == "galilean-check":
            fr = need_frame(act["frame"], path + ["frame"])
            need_body(fr, act["body"], path + ["body"])
            if "potential" in act:
                need_body(fr, act["potential"]["a"], path + ["potential", "a"])
                need_body(fr, act["potential"]["b"], path + ["potential", "b"])
        elif a == "angular-momentum":
            fr = need_frame(act["frame"], path + ["frame"])
            need_body(fr, act["body"], path + ["body"])
            if fr.dim != 3:
                raise ScenarioError(_json_path(path + ["frame"]), "angular momentum needs a 3-axis frame")
    return Scenario(data, frames, source)


def load(path) -> Scenario:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioError("$", f"invalid JSON: {exc}") from None
    return validate(data, str(path))


def bundled_dir():
    return resources.files("finite_observers") / "scenarios"


def list_bundled_scenarios() -> list[tuple[str, str]]:
    """(name, description) for every bundled scenario, sorted by name."""
    out = []
    for entry in bundled_dir().iterdir():
        if entry.name.endswith(".json"):
            data = json.loads(entry.read_text())
            out.append((entry.name[:-5], data.get("description", "")))
    return sorted(out)


def bundled_path(name: str):
    name = name[:-5] if name.endswith(".json") else name
    p = bundled_dir() / f"{name}.json"
    if not p.is_file():
        raise FileNotFoundError(f"no bundled scenario named {name!r}")
    return p
