"""Turning result objects into JSON-compatible trees.

Field names of the dataclasses become keys unchanged; enums become their
values; non-finite floats become ``null``.
"""
import dataclasses
import enum
import json
import math

import numpy as np


def to_jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        out = {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
        # expose derived properties that are part of the documented interface
        for name in ("beta",):
            if hasattr(type(obj), name) and isinstance(getattr(type(obj), name), property):
                out[name] = to_jsonable(getattr(obj, name))
        return out
    if isinstance(obj, tuple) and hasattr(obj, "_asdict"):
        return {k: to_jsonable(v) for k, v in obj._asdict().items()}
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else None
    return obj


def dumps(tree) -> str:
    return json.dumps(to_jsonable(tree), indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def flatten(tree, prefix=""):
    """``(dotted.key, value)`` pairs of a nested tree, for CSV output of reports."""
    tree = to_jsonable(tree)
    if isinstance(tree, dict):
        for key, value in tree.items():
            yield from flatten(value, f"{prefix}{key}.")
    elif isinstance(tree, list):
        for k, value in enumerate(tree):
            yield from flatten(value, f"{prefix}{k}.")
    else:
        yield prefix.rstrip("."), tree
