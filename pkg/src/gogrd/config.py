"""Scenario configuration files (YAML; JSON is accepted as a subset)."""

from __future__ import annotations

from pathlib import Path

import yaml

from .errors import ConfigParse, GogError
from .gog import Diagnostic, validate
from .groups import from_config


def loads(text, source="<string>"):
    try:
        data = yaml.safe_load(text)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark
        where = f"{source}:{mark.line + 1}:{mark.column + 1}" if mark else source
        raise ConfigParse(f"{where}: {exc.problem}") from None
    except yaml.YAMLError as exc:
        raise ConfigParse(f"{source}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigParse(f"{source}: top level must be a mapping")
    return data


def load(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigParse(f"{path}: {exc.strerror}") from None
    cfg = loads(text, str(path))
    cfg.setdefault("id", path.stem)
    return cfg


def dumps(cfg):
    return yaml.safe_dump(cfg, sort_keys=False, default_flow_style=None, width=100)


def dump(cfg, path):
    Path(path).write_text(dumps(cfg))


def check(cfg):
    """Diagnostics for a scenario configuration (empty list when valid)."""
    from .runner import EXPERIMENTS

    diags = []
    if "graph" not in cfg and "group" not in cfg:
        diags.append(Diagnostic("ConfigParse", "", "a scenario needs a graph or a group section"))
    if "graph" in cfg:
        if not isinstance(cfg["graph"], dict):
            diags.append(Diagnostic("ConfigParse", "graph", "must be a mapping"))
        else:
            diags.extend(validate(cfg["graph"]))
    if "group" in cfg:
        try:
            from_config(cfg["group"])
        except (GogError, ValueError, KeyError, TypeError) as exc:
            diags.append(Diagnostic("ConfigParse", "group", str(exc)))
    for i, entry in enumerate(cfg.get("experiments", [])):
        name = entry.get("name") if isinstance(entry, dict) else entry
        if name not in EXPERIMENTS:
            diags.append(Diagnostic("ConfigParse", f"experiments.{i}", f"unknown experiment {name!r}"))
    budgets = cfg.get("budgets", {})
    if not isinstance(budgets, dict):
        diags.append(Diagnostic("ConfigParse", "budgets", "must be a mapping"))
    else:
        for key in ("radius", "samples", "elements"):
            value = budgets.get(key)
            if value is not None and (not isinstance(value, int) or value < 0):
                diags.append(Diagnostic("ConfigParse", f"budgets.{key}", "must be a nonnegative integer"))
    return diags


__all__ = ["load", "loads", "dump", "dumps", "check"]
