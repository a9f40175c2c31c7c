"""Input documents and report encoding.

Input is YAML::

    n: 6
    colors:
      - [4, 5, 1, 3, 1, 4]
      - "245631"
    weights: ["1/2", "1/2"]     # optional, uniform by default
    options:                    # optional
      levels: [1, 2, 3]
      cap: 200000

Reports encode rationals as ``"p/q"`` strings, subsets as sorted integer
lists, transformations as one-line strings such as ``"[451314]"`` and the
collapsed state as ``"X"``.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction

import yaml

from .core import Transformation, as_fraction, from_oneline
from .semigroup import ColorSystem


class ParseError(ValueError):
    pass


def parse_system(text: str):
    """Return ``(ColorSystem, options)`` from a YAML document."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ParseError(f"invalid YAML: {exc}") from exc
    if not isinstance(doc, dict) or "colors" not in doc:
        raise ParseError("document must be a mapping with a 'colors' list")
    colors = doc["colors"]
    if not isinstance(colors, list) or not colors:
        raise ParseError("'colors' must be a non-empty list")
    n = doc.get("n")
    try:
        maps = [from_oneline(c if isinstance(c, str) else list(c), n) for c in colors]
        weights = doc.get("weights")
        if weights is not None:
            if any(isinstance(w, float) for w in weights):
                raise ParseError("weights must be exact, e.g. \"1/3\"")
            weights = [as_fraction(w) for w in weights]
        cs = ColorSystem.from_images(maps, weights)
    except ParseError:
        raise
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ParseError(str(exc)) from exc
    options = doc.get("options") or {}
    if not isinstance(options, dict):
        raise ParseError("'options' must be a mapping")
    return cs, options


def dump_system(cs: ColorSystem) -> str:
    doc = {
        "n": cs.n,
        "colors": [list(c.images) for c in cs.colors],
        "weights": [frac(w) for w in cs.weights],
    }
    return yaml.safe_dump(doc, default_flow_style=None, sort_keys=False)


def frac(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


_FRAC = re.compile(r"^-?\d+/\d+$")


def encode(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return frac(obj)
    if isinstance(obj, Transformation):
        return str(obj)
    if isinstance(obj, float):
        return obj
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    raise TypeError(f"cannot encode {type(obj).__name__}")


def decode(obj):
    if isinstance(obj, str):
        if _FRAC.match(obj):
            return Fraction(obj)
        if obj.startswith("[") and obj.endswith("]"):
            return from_oneline(obj)
        return obj
    if isinstance(obj, list):
        return [decode(v) for v in obj]
    if isinstance(obj, dict):
        return {k: decode(v) for k, v in obj.items()}
    return obj


def dumps(report) -> str:
    return json.dumps(encode(report), indent=1, sort_keys=True) + "\n"


def loads(text: str):
    return decode(json.loads(text))
