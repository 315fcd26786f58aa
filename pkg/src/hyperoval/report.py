"""Report envelope and JSON schemas.

Every command emits ``{tool_version, command, task, result, timing}``; timing
is excluded from canonical text so reruns compare byte for byte.
"""

from __future__ import annotations

import json
from pathlib import Path

import jsonschema

from . import __version__

HEX = {"type": "string", "pattern": "^0x[0-9a-f]+$"}
LABEL = {"type": "string", "pattern": "^(inf|0x[0-9a-f]+)$"}

ENVELOPE = {
    "type": "object",
    "required": ["tool_version", "command", "task", "result", "timing"],
    "properties": {
        "tool_version": {"type": "string"},
        "command": {"type": "string"},
        "task": {"type": "object"},
        "result": {"type": "object"},
        "timing": {"type": "object"},
    },
    "additionalProperties": False,
}

CERTIFICATION = {
    "type": "object",
    "required": ["scattered", "certified"],
    "properties": {
        "scattered": {"type": "boolean"},
        "certified": {"type": "boolean"},
        "infinite": {"type": "array", "items": LABEL},
        "size": {"type": "integer"},
        "lines_checked": {"type": "integer"},
        "translation": {"type": "boolean"},
    },
}

SEARCH_RESULT = {
    "type": "object",
    "required": ["survivors", "counts", "verdicts", "partition_log_crc"],
    "properties": {
        "survivors": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["coeffs", "certification"],
                "properties": {"coeffs": {"type": "array", "items": HEX}, "certification": CERTIFICATION},
            },
        },
        "counts": {
            "type": "object",
            "required": ["candidates_tested", "candidates_expected", "prefixes_done", "prefixes_total"],
            "properties": {
                k: {"type": "integer", "minimum": 0}
                for k in ("candidates_tested", "candidates_expected", "prefixes_done", "prefixes_total")
            },
        },
        "verdicts": {
            "type": "object",
            "required": ["complete", "coverage_exact", "all_survivors_certified", "survivor_count", "exists"],
            "properties": {"exists": {"type": ["boolean", "null"]}},
        },
        "partition_log_crc": {"type": "string", "pattern": "^[0-9a-f]{8}$"},
    },
}

SEARCH_TASK = {
    "type": "object",
    "required": ["spec", "side", "mode", "transversal", "partition", "task_hash"],
    "properties": {
        "side": {"enum": ["shears", "nonshears"]},
        "mode": {"enum": ["paper", "safe", "full"]},
        "task_hash": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
    },
}


def envelope(command: str, task: dict, result: dict, timing: dict | None = None) -> dict:
    return {"tool_version": __version__, "command": command, "task": task, "result": result, "timing": timing or {}}


def validate(doc: dict) -> None:
    jsonschema.validate(doc, ENVELOPE)
    if doc["command"] == "search":
        jsonschema.validate(doc["task"], SEARCH_TASK)
        jsonschema.validate(doc["result"], SEARCH_RESULT)


def canonical(doc: dict) -> str:
    return json.dumps({k: v for k, v in doc.items() if k != "timing"}, sort_keys=True, indent=2)


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def write(doc: dict, path: str | Path) -> None:
    validate(doc)
    Path(path).write_text(dumps(doc))


def load(path: str | Path) -> dict:
    doc = json.loads(Path(path).read_text())
    validate(doc)
    return doc
