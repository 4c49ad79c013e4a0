"""Plain-text system definition files.

One system per JSON file.  Field names mirror the model dataclasses; "inf" is
accepted for unbounded extents.  Example::

    {
      "name": "cubic_demo",
      "d": "inf",
      "F": {"name": "F",
            "segments": [{"lo": 0.0, "hi": "inf", "form": "polynomial",
                          "coeffs": [0.0, -1.0, 0.0, 0.3333333333333333]}]},
      "g": {"name": "g",
            "segments": [{"lo": 0.0, "hi": "inf", "form": "polynomial",
                          "coeffs": [0.0, 1.0]}]}
    }
"""

from __future__ import annotations

import json
import math

from .errors import ConfigError
from .functions import FORM_FIELDS, FunctionModel, LienardSystem, Segment


def _num(v, what):
    if v == "inf":
        return math.inf
    if v == "-inf":
        return -math.inf
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return float(v)
    raise ConfigError(f"{what} must be a number or 'inf', got {v!r}")


def _segment_from_dict(obj):
    try:
        lo = _num(obj["lo"], "segment lo")
        hi = _num(obj["hi"], "segment hi")
        form = obj["form"]
    except KeyError as missing:
        raise ConfigError(f"segment missing field {missing}") from None
    if form not in FORM_FIELDS:
        raise ConfigError(f"unknown segment form {form!r}")
    fields = FORM_FIELDS[form]
    try:
        if form == "polynomial":
            params = tuple(float(c) for c in obj["coeffs"])
        else:
            params = tuple(float(obj[name]) for name in fields)
    except KeyError as missing:
        raise ConfigError(f"segment form {form!r} missing field {missing}") from None
    return Segment(lo, hi, form, params)


def _segment_to_dict(seg):
    out = {"lo": "inf" if seg.lo == math.inf else seg.lo,
           "hi": "inf" if seg.hi == math.inf else seg.hi,
           "form": seg.form}
    if seg.form == "polynomial":
        out["coeffs"] = list(seg.params)
    else:
        out.update(zip(FORM_FIELDS[seg.form], seg.params))
    return out


def _model_from_dict(obj, default_name):
    try:
        segs = obj["segments"]
    except KeyError:
        raise ConfigError("function model needs a 'segments' list") from None
    if not isinstance(segs, list) or not segs:
        raise ConfigError("'segments' must be a non-empty list")
    return FunctionModel(tuple(_segment_from_dict(s) for s in segs),
                         name=obj.get("name", default_name))


def load_system(path):
    """Read a LienardSystem from a definition file."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: not valid JSON ({exc})") from None
    for key in ("F", "g"):
        if key not in obj:
            raise ConfigError(f"{path}: missing top-level field {key!r}")
    return LienardSystem(
        F=_model_from_dict(obj["F"], "F"),
        g=_model_from_dict(obj["g"], "g"),
        d=_num(obj.get("d", "inf"), "d"),
        name=obj.get("name", "custom"),
    )


def save_system(system, path):
    """Write a LienardSystem definition file (round-trips with load_system)."""
    obj = {
        "name": system.name,
        "d": "inf" if system.d == math.inf else system.d,
        "F": {"name": system.F.name,
              "segments": [_segment_to_dict(s) for s in system.F.segments]},
        "g": {"name": system.g.name,
              "segments": [_segment_to_dict(s) for s in system.g.segments]},
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")
