"""Plain-text ``key = value`` config dialect.

One dialect serves both pipeline parameter overrides and scenario specs:
one assignment per line, ``#`` starts a comment, blank lines ignored.
Tuples are written as comma-separated values, booleans as true/false.
"""

from __future__ import annotations

import dataclasses
import typing


class ConfigError(ValueError):
    """Malformed config text; carries the offending line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def parse_kv(text: str) -> dict[str, str]:
    """Parse config text into a key -> raw value string mapping."""
    out: dict[str, str] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(line_no, f"expected 'key = value', got {raw.strip()!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        if not key:
            raise ConfigError(line_no, "empty key")
        if key in out:
            raise ConfigError(line_no, f"duplicate key {key!r}")
        out[key] = value.strip()
    return out


def _coerce(raw: str, target_type) -> object:
    origin = typing.get_origin(target_type)
    if origin is tuple:
        args = typing.get_args(target_type)
        parts = [p.strip() for p in raw.split(",")]
        if len(parts) != len(args):
            raise ValueError(f"expected {len(args)} comma-separated values, got {raw!r}")
        return tuple(_coerce(p, a) for p, a in zip(parts, args))
    if target_type is bool:
        lowered = raw.lower()
        if lowered in ("true", "1", "yes", "on"):
            return True
        if lowered in ("false", "0", "no", "off"):
            return False
        raise ValueError(f"expected a boolean, got {raw!r}")
    if target_type is int:
        return int(raw)
    if target_type is float:
        return float(raw)
    if target_type is str:
        return raw
    raise ValueError(f"unsupported config field type {target_type}")


def apply_config(instance, mapping: dict[str, str]):
    """Return a copy of a dataclass with config overrides applied."""
    hints = typing.get_type_hints(type(instance))
    known = {f.name for f in dataclasses.fields(instance)}
    updates = {}
    for key, raw in mapping.items():
        if key not in known:
            raise ValueError(f"unknown config key {key!r} for {type(instance).__name__}")
        try:
            updates[key] = _coerce(raw, hints[key])
        except ValueError as exc:
            raise ValueError(f"config key {key!r}: {exc}") from None
    return dataclasses.replace(instance, **updates)


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return ", ".join(_format_value(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_config(instance) -> str:
    """Serialise a dataclass as config text, one field per line."""
    lines = [f"{f.name} = {_format_value(getattr(instance, f.name))}"
             for f in dataclasses.fields(instance)]
    return "\n".join(lines) + "\n"
