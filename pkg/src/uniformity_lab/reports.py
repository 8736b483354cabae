"""Versioned JSON report envelope shared by every CLI command.

A report is {schema_version, command, config, versions, results, passed}.
Each result entry carries a name, a passed verdict (which may be null for
purely informational records) and arbitrary numeric detail.  Reports contain
no timestamps, so identical configuration and seed produce byte-identical
files.
"""

from __future__ import annotations

import json
import platform
from typing import Any

import numpy

from . import __version__

SCHEMA_VERSION = "1"


def versions() -> dict:
    return {
        "uniformity_lab": __version__,
        "python": platform.python_version(),
        "numpy": numpy.__version__,
    }


def make_report(command: str, config: dict, results: list[dict]) -> dict:
    passed = all(r.get("passed") is not False for r in results)
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": config,
        "versions": versions(),
        "results": results,
        "passed": passed,
    }


def _jsonable(obj):
    if isinstance(obj, (numpy.bool_, numpy.integer, numpy.floating)):
        return obj.item()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def dump_report(report: dict, path: str | None) -> str:
    text = json.dumps(report, indent=1, sort_keys=True, default=_jsonable) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


_TOP_LEVEL = {
    "schema_version": str,
    "command": str,
    "config": dict,
    "versions": dict,
    "results": list,
    "passed": bool,
}


def validate_report(obj: Any) -> list[str]:
    """Structural validation; returns a list of problems (empty means valid)."""
    problems: list[str] = []
    if not isinstance(obj, dict):
        return ["report is not an object"]
    for key, typ in _TOP_LEVEL.items():
        if key not in obj:
            problems.append(f"missing key {key!r}")
        elif not isinstance(obj[key], typ):
            problems.append(f"key {key!r} has type {type(obj[key]).__name__}, "
                            f"expected {typ.__name__}")
    if problems:
        return problems
    if obj["schema_version"] != SCHEMA_VERSION:
        problems.append(f"unknown schema version {obj['schema_version']!r}")
    for missing in ({"uniformity_lab", "python", "numpy"} - set(obj["versions"])):
        problems.append(f"versions missing {missing!r}")
    for i, res in enumerate(obj["results"]):
        if not isinstance(res, dict):
            problems.append(f"results[{i}] is not an object")
            continue
        if "name" not in res or not isinstance(res["name"], str):
            problems.append(f"results[{i}] missing string name")
        if "passed" in res and not isinstance(res["passed"], (bool, type(None))):
            problems.append(f"results[{i}].passed is not boolean or null")
    declared = obj["passed"]
    recomputed = all(r.get("passed") is not False
                     for r in obj["results"] if isinstance(r, dict))
    if declared != recomputed:
        problems.append("top-level passed does not match the results")
    return problems
