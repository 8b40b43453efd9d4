"""Bundled example data and JSON loading with readable errors."""
from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .tropical_core import LiftFunction


class InputError(ValueError):
    """Unreadable or malformed input file."""


BUNDLED = ("genus2", "node", "genus5", "genus5_a2", "pants", "theta", "dumbbell", "novikov", "chords")


def bundled_path(name: str) -> Path:
    return Path(str(resources.files("tropants") / "data" / f"{name}.json"))


def load_json(source) -> dict:
    """Read a path or a bundled fixture name."""
    path = Path(source)
    if not path.exists() and path.stem in BUNDLED and path.suffix in ("", ".json"):
        path = bundled_path(path.stem)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def load(name: str) -> dict:
    return load_json(bundled_path(name))


def require(data: dict, *fields):
    missing = [f for f in fields if f not in data]
    if missing:
        raise InputError(f"missing field(s): {', '.join(missing)}")


def lift_from_json(data: dict) -> tuple[LiftFunction, list | None, list | None]:
    """(lift, triangulation as index cells or None, gram or None)."""
    require(data, "support", "values")
    if "dim" in data and any(len(p) != data["dim"] for p in data["support"]):
        raise InputError("field 'support': points must have length 'dim'")
    lift = LiftFunction(tuple(tuple(p) for p in data["support"]), tuple(data["values"]))
    tri = data.get("triangulation")
    if tri is not None:
        n = len(lift.support)
        if not all(isinstance(i, int) and 0 <= i < n for cell in tri for i in cell):
            raise InputError("field 'triangulation': indices must refer to support points")
    return lift, tri, data.get("gram")
