"""Map-config JSON: reading, validation and construction of LorenzMaps."""
from __future__ import annotations

import json
from pathlib import Path

from .errors import ConfigParse, LorenzLabError
from .lorenzmap import LorenzMap, map_new
from .numberfield import FieldContext, FloatField

__all__ = ["load_config", "map_from_config", "parse_config"]

_PARAMS = {"mod_one": ("beta", "alpha"), "two_slope": ("a", "b", "c")}


def parse_config(text: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigParse(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigParse("map config must be a JSON object")
    return data


def load_config(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigParse(f"cannot read {path}: {exc}") from exc
    return parse_config(text)


def _coeff_vector(data: dict, key: str):
    v = data.get(key)
    if v is None:
        raise ConfigParse(f"missing parameter {key!r}")
    if isinstance(v, (int, str)):
        v = [v]
    if not isinstance(v, list) or not v:
        raise ConfigParse(f"parameter {key!r} must be a nonempty coefficient list")
    return v


def map_from_config(data: dict, *, float_bits=None, class_l: bool = False) -> LorenzMap:
    """Build the map described by a config dict.

    ``float_bits`` (or the config's own ``float_mode``) switches to the
    interval-backed float field; the exact field is still used to read the
    coefficient vectors.
    """
    family = data.get("family")
    if family not in _PARAMS:
        raise ConfigParse(f"family must be one of {sorted(_PARAMS)}, got {family!r}")
    spec = data.get("field")
    if not isinstance(spec, dict) or "poly" not in spec or "root_interval" not in spec:
        raise ConfigParse("field must be an object with 'poly' and 'root_interval'")
    try:
        ctx = FieldContext.from_spec(spec)
        params = {k: ctx.element(_coeff_vector(data, k)) for k in _PARAMS[family]}
    except ConfigParse:
        raise
    except (LorenzLabError, ValueError, TypeError, ZeroDivisionError) as exc:
        raise ConfigParse(f"bad field or parameters: {exc}") from exc
    bits = float_bits if float_bits is not None else data.get("float_mode")
    if bits is not None:
        if not isinstance(bits, int) or bits < 16:
            raise ConfigParse(f"float_mode must be an integer >= 16, got {bits!r}")
        ff = FloatField(bits)
        ctx, params = ff, {k: ff(v) for k, v in params.items()}
    return map_new(family, params, ctx, class_l=class_l or bool(data.get("class_l", False)))
