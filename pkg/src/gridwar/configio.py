"""Flat key = value config files for world and EA settings.

Lines look like ``max_turns = 1500``; '#' starts a comment.  World files
accept every WorldConfig field plus navigation knobs under a ``nav.``
prefix, e.g. ``nav.guard_radius = 3``.
"""

from __future__ import annotations

import dataclasses
from pathlib import Path

from .evolution import EAConfig
from .world import NavConfig, WorldConfig


class ConfigError(ValueError):
    pass


def _parse_lines(text: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {line_no}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


def _coerce(cls, key: str, value: str):
    fields = {f.name: f for f in dataclasses.fields(cls)}
    if key not in fields:
        raise ConfigError(f"unknown key {key!r} for {cls.__name__}")
    ftype = fields[key].type
    try:
        if ftype in (int, "int"):
            return int(value)
        if ftype in (float, "float"):
            return float(value)
        return value
    except ValueError as exc:
        raise ConfigError(f"bad value for {key!r}: {value!r}") from exc


def parse_world_config(text: str) -> WorldConfig:
    values = _parse_lines(text)
    world_kwargs = {}
    nav_kwargs = {}
    for key, value in values.items():
        if key.startswith("nav."):
            sub = key[len("nav."):]
            nav_kwargs[sub] = _coerce(NavConfig, sub, value)
        else:
            world_kwargs[key] = _coerce(WorldConfig, key, value)
    world_kwargs.pop("nav", None)
    try:
        return WorldConfig(nav=NavConfig(**nav_kwargs), **world_kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def load_world_config(path: str | Path) -> WorldConfig:
    return parse_world_config(Path(path).read_text(encoding="utf-8"))


def dump_world_config(config: WorldConfig) -> str:
    lines = []
    for f in dataclasses.fields(WorldConfig):
        if f.name == "nav":
            continue
        lines.append(f"{f.name} = {getattr(config, f.name)}")
    for f in dataclasses.fields(NavConfig):
        lines.append(f"nav.{f.name} = {getattr(config.nav, f.name)}")
    return "\n".join(lines) + "\n"


def parse_ea_config(text: str, seed: int | None = None) -> EAConfig:
    values = _parse_lines(text)
    kwargs = {key: _coerce(EAConfig, key, value) for key, value in values.items()}
    if seed is not None:
        kwargs["seed"] = seed
    try:
        return EAConfig(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def load_ea_config(path: str | Path, seed: int | None = None) -> EAConfig:
    return parse_ea_config(Path(path).read_text(encoding="utf-8"), seed=seed)
