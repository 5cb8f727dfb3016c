"""Germ files and forest files."""
from __future__ import annotations

import json
import logging
import re
from pathlib import Path
from typing import Any

import voluptuous as vol

from . import series as ps
from .const import (
    CONF_BASE,
    CONF_DIVISORS,
    CONF_EXCEPTIONAL,
    CONF_IMAGE,
    CONF_LEAVES,
    CONF_PRECISION,
    CONF_U,
    CONF_V,
    CONF_VARS,
    DEFAULT_IMAGE_TAG,
    DEFAULT_PRECISION,
    MAX_PRECISION,
    MIN_PRECISION,
)
from .driver import ChartForest
from .exceptions import MalformedGerm
from .germ import BaseType, MapGerm

_LOGGER = logging.getLogger(__name__)

_IDENTIFIER = re.compile(r"^[a-z][a-z0-9_]*$")
_LINE = re.compile(r"^\s*([a-z_]+)\s*[:=]\s*(.*?)\s*$")


def clamp_precision(value: Any) -> int:
    return min(max(int(value), MIN_PRECISION), MAX_PRECISION)


def _names(value: Any) -> list[str]:
    if isinstance(value, str):
        value = value.replace(",", " ").split()
    names = [str(n) for n in value]
    for name in names:
        if not _IDENTIFIER.match(name):
            raise vol.Invalid(f"{name!r} is not a variable name")
    return names


def _distinct(names: list[str]) -> list[str]:
    if len(set(names)) != len(names):
        raise vol.Invalid(f"variables repeat in {names}")
    return names


_GERM_FIELDS = {
    vol.Required(CONF_VARS): vol.All(_names, _distinct, vol.Length(min=2, max=3)),
    vol.Optional(CONF_EXCEPTIONAL, default=[]): _names,
    vol.Optional(CONF_BASE, default=1): vol.All(vol.Coerce(int), vol.In([1, 2])),
    vol.Optional(CONF_PRECISION): vol.All(vol.Coerce(int), clamp_precision),
    vol.Required(CONF_U): vol.All(str, vol.Length(min=1)),
    vol.Required(CONF_V): vol.All(str, vol.Length(min=1)),
}

GERM_SCHEMA = vol.Schema(_GERM_FIELDS)

LEAF_SCHEMA = vol.Schema({
    **_GERM_FIELDS,
    vol.Optional(CONF_DIVISORS, default={}): {str: str},
    vol.Optional(CONF_IMAGE, default=DEFAULT_IMAGE_TAG): vol.All(str, vol.Length(min=1)),
}, extra=vol.REMOVE_EXTRA)

FOREST_SCHEMA = vol.Schema({
    vol.Optional(CONF_PRECISION, default=DEFAULT_PRECISION): vol.All(vol.Coerce(int), clamp_precision),
    vol.Required(CONF_LEAVES): vol.All([LEAF_SCHEMA], vol.Length(min=1)),
})


def _validate(schema: vol.Schema, data: Any, source: str) -> dict[str, Any]:
    try:
        return schema(data)
    except vol.Invalid as err:
        raise MalformedGerm(f"{source}: {err}", {"source": source}) from err


def parse_germ_text(text: str, source: str = "<germ>") -> dict[str, Any]:
    """The raw key/value mapping of a line based germ file."""
    data: dict[str, Any] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        match = _LINE.match(line)
        if match is None:
            raise MalformedGerm(f"{source}:{number}: expected 'key: value' or 'key = value'",
                                {"line": number, "text": line})
        key, value = match.groups()
        if key in data:
            raise MalformedGerm(f"{source}:{number}: {key} given twice", {"line": number})
        data[key] = value
    return data


def germ_from_config(config: dict[str, Any], precision: int | None = None) -> MapGerm:
    """Build a germ from validated data; ``precision`` overrides the file value."""
    names = tuple(config[CONF_VARS])
    unknown = set(config[CONF_EXCEPTIONAL]) - set(names)
    if unknown:
        raise MalformedGerm(f"exceptional variables {sorted(unknown)} are not in {list(names)}")
    if precision is None:
        precision = config.get(CONF_PRECISION, DEFAULT_PRECISION)
    u = ps.parse_series(config[CONF_U], names)
    v = ps.parse_series(config[CONF_V], names)
    return MapGerm(u, v, tuple(config[CONF_EXCEPTIONAL]), BaseType(config[CONF_BASE]), clamp_precision(precision))


def load_germ_text(text: str, precision: int | None = None, source: str = "<germ>") -> MapGerm:
    config = _validate(GERM_SCHEMA, parse_germ_text(text, source), source)
    germ = germ_from_config(config, precision)
    _LOGGER.debug(f"load_germ_text(): {source} vars={germ.vars} exceptional={germ.exceptional_vars} "
                  f"base={int(germ.base_type)} precision={germ.precision}")
    return germ


def load_germ(path: str | Path, precision: int | None = None) -> MapGerm:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as err:
        raise MalformedGerm(f"cannot read {path}: {err.strerror}", {"path": str(path)}) from err
    return load_germ_text(text, precision, str(path))


def load_forest_data(data: Any, precision: int | None = None, source: str = "<forest>") -> ChartForest:
    config = _validate(FOREST_SCHEMA, data, source)
    file_precision = config[CONF_PRECISION] if precision is None else precision
    entries = []
    for leaf in config[CONF_LEAVES]:
        germ = germ_from_config(leaf, leaf.get(CONF_PRECISION, file_precision) if precision is None else precision)
        entries.append((germ, leaf[CONF_DIVISORS], leaf[CONF_IMAGE]))
    forest = ChartForest.from_germs(entries)
    _LOGGER.debug(f"load_forest_data(): {source} {len(entries)} leaves over {sorted(forest.base_points)}")
    return forest


def load_forest(path: str | Path, precision: int | None = None) -> ChartForest:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as err:
        raise MalformedGerm(f"cannot read {path}: {err.strerror}", {"path": str(path)}) from err
    except json.JSONDecodeError as err:
        raise MalformedGerm(f"{path}: invalid JSON at line {err.lineno}", {"path": str(path)}) from err
    return load_forest_data(data, precision, str(path))
