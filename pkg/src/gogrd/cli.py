"""Command line interface: ``gogrd run|list-scenarios|validate|export-config``."""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import config as cfgio
from . import report as rep
from .errors import BudgetExceeded, ConfigParse, UnknownScenario
from .runner import run_scenario
from .scenarios import SCENARIOS, get_scenario

EXIT_PARTIAL = 3
EXIT_CONFIG = 2


def _resolve(scenario):
    path = Path(scenario)
    if path.suffix in (".yaml", ".yml", ".json") or path.exists():
        return cfgio.load(path)
    return get_scenario(scenario)


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Graph-of-groups distortion and Rapid Decay workbench."""


@main.command()
@click.argument("scenario")
@click.option("--radius", type=click.IntRange(min=0), default=None, help="Override every experiment radius.")
@click.option("--samples", type=click.IntRange(min=1), default=None, help="Samples per randomized experiment.")
@click.option("--seed", type=int, default=None, help="Random seed (default: the scenario's).")
@click.option("--budget-elements", type=click.IntRange(min=1), default=None, help="Cap on stored elements per enumeration.")
@click.option("--out-dir", type=click.Path(file_okay=False), default="reports", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "both"]), default="both", show_default=True)
@click.option("--experiment", "only", multiple=True, help="Run only these experiments (repeatable).")
@click.option("--no-timestamp", is_flag=True, help="Omit the generated_at field.")
def run(scenario, radius, samples, seed, budget_elements, out_dir, fmt, only, no_timestamp):
    """Run SCENARIO (a bundled id or a config file) and write reports."""
    try:
        cfg = _resolve(scenario)
        result = run_scenario(cfg, radius=radius, samples=samples, seed=seed, budget=budget_elements, only=set(only) or None)
    except UnknownScenario as exc:
        raise click.ClickException(f"unknown scenario {exc.args[0]!r}; see list-scenarios") from None
    except ConfigParse as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    except BudgetExceeded as exc:
        click.echo(f"budget exhausted: {exc}", err=True)
        sys.exit(EXIT_PARTIAL)
    paths = rep.write(result, out_dir, fmt, timestamp=not no_timestamp)
    for name, section in result.report["experiments"].items():
        cls = section.get("classification")
        label = f" {cls['label']}" if isinstance(cls, dict) else ""
        click.echo(f"{result.report['scenario']}.{name}: {section['status']}{label}")
    for p in paths:
        click.echo(f"wrote {p}")
    if result.partial:
        click.echo("budget exhausted: partial results flagged in the report", err=True)
        sys.exit(EXIT_PARTIAL)


@main.command("list-scenarios")
def list_scenarios():
    """List bundled scenarios."""
    width = max(len(s) for s in SCENARIOS)
    for sid, cfg in SCENARIOS.items():
        names = [e if isinstance(e, str) else e["name"] for e in cfg.get("experiments", [])]
        click.echo(f"{sid:<{width}}  {cfg['description']}")
        click.echo(f"{'':<{width}}  experiments: {', '.join(names)}")


@main.command()
@click.argument("config_path", type=click.Path(exists=True, dir_okay=False))
def validate(config_path):
    """Check a scenario config; prints one diagnostic per line."""
    try:
        cfg = cfgio.load(config_path)
    except ConfigParse as exc:
        click.echo(f"ConfigParse: {exc}")
        sys.exit(EXIT_CONFIG)
    diags = cfgio.check(cfg)
    for d in diags:
        click.echo(str(d))
    if diags:
        sys.exit(1)
    click.echo("ok")


@main.command("export-config")
@click.argument("scenario")
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None, help="Write to a file instead of stdout.")
def export_config(scenario, output):
    """Print the configuration of a bundled scenario as YAML."""
    try:
        cfg = get_scenario(scenario)
    except UnknownScenario:
        raise click.ClickException(f"unknown scenario {scenario!r}; see list-scenarios") from None
    text = cfgio.dumps(cfg)
    if output:
        Path(output).write_text(text)
    else:
        click.echo(text, nl=False)


if __name__ == "__main__":
    main()
