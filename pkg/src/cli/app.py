"""
UVC Voltage Risk - Command Line Interface
Entry point for fitting, assessment, management, validation and comparison runs
"""

import functools
import logging
import os
import sys

import click

from ..errors import InfeasibleError, InputError, UvcRiskError
from .config import RunConfig, load_config
from .pipeline import PipelineManager

logger = logging.getLogger("src.cli")

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
EXIT_EXCEEDANCE = 1


def _configure_logging(verbose: bool, quiet: bool):
    level = logging.DEBUG if verbose else (logging.WARNING if quiet else logging.INFO)
    logging.basicConfig(level=level, format=LOG_FORMAT, force=True)


def handle_errors(command):
    """Log library errors and exit with their code."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            return command(*args, **kwargs)
        except UvcRiskError as exc:
            logger.error("%s", exc)
            ctx.exit(exc.exit_code)

    return wrapper


@click.group()
@click.option("--config", "config_file", type=click.Path(dir_okay=False),
              help="JSON run configuration")
@click.option("--seed", type=int, help="Root random seed")
@click.option("--variant", type=click.Choice(["var", "cvar"]), help="Risk measure")
@click.option("--curtail/--no-curtail", default=None, help="Allow PV curtailment")
@click.option("--out", "output_dir", type=click.Path(file_okay=False), help="Output directory")
@click.option("--tau", type=float, help="Confidence level")
@click.option("-v", "--verbose", is_flag=True, help="Debug logging")
@click.option("--quiet", is_flag=True, help="Warnings and errors only")
@click.pass_context
def cli(ctx, config_file, seed, variant, curtail, output_dir, tau, verbose, quiet):
    """Voltage risk assessment and management for radial distribution feeders."""
    _configure_logging(verbose, quiet)
    try:
        config = load_config(config_file) if config_file else RunConfig()
        config = config.with_overrides(seed=seed, variant=variant, curtailment=curtail,
                                       output_dir=output_dir, tau=tau)
    except UvcRiskError as exc:
        logger.error("%s", exc)
        ctx.exit(exc.exit_code)
    ctx.obj = PipelineManager(config)


@cli.command()
@click.pass_obj
@handle_errors
def fit(manager: PipelineManager):
    """Fit one UVC mixture per bus and hour from the training days."""
    summary = manager.fit()
    click.echo(f"{len(summary.written)} models written to {manager.models_dir} "
               f"({summary.deterministic} deterministic, {len(summary.skipped)} skipped)")
    for bus, hour, reason in summary.skipped:
        click.echo(f"  skipped bus {bus} hour {hour}: {reason}")


@cli.command()
@click.pass_obj
@handle_errors
def assess(manager: PipelineManager):
    """Write VaR/CVaR of every bus and hour for the operating day."""
    rows, missing = manager.assess()
    click.echo(f"{len(rows)} risk rows written to {manager.config.path('risk_report.csv')}")
    if missing:
        raise InputError(f"no model for {len(missing)} (bus, hour) pairs; run fit first")


@cli.command()
@click.option("--dump-lp", is_flag=True, help="Also write each problem in LP text format")
@click.pass_obj
@handle_errors
def manage(manager: PipelineManager, dump_lp):
    """Solve the reactive dispatch (and curtailment) of every configured hour."""
    summary = manager.manage(dump_lp=dump_lp)
    for strategy in summary.strategies:
        click.echo(f"h{strategy.hour:02d}: cost ${strategy.cost:.4f}, alpha {strategy.alpha:.3f}")
    if summary.infeasible:
        buses = sorted({b for group in summary.infeasible.values() for b in group})
        hours = ", ".join(f"{h:02d}" for h in sorted(summary.infeasible))
        raise InfeasibleError(f"infeasible without curtailment at hours {hours}; "
                              f"binding buses {buses}", binding_buses=buses)


@cli.command()
@click.option("--both", is_flag=True, help="Evaluate the VaR and CVaR variants")
@click.option("--test-days", type=int, default=None,
              help="Score on a synthetic test stream of this many days")
@click.pass_obj
@handle_errors
def validate(manager: PipelineManager, both, test_days):
    """Score day-ahead strategies against the held-out days."""
    manager.use_test_days(test_days)
    variants = ["var", "cvar"] if both else [manager.config.variant]
    reports = manager.validate(variants)
    exceeded = False
    for name, report in reports.items():
        click.echo(f"{name}: max violation frequency {report.max_frequency:.4f} "
                   f"(threshold {report.threshold:.4f})")
        exceeded = exceeded or not report.passed()
    if exceeded:
        click.get_current_context().exit(EXIT_EXCEEDANCE)


@cli.command()
@click.option("--test-days", type=int, default=None,
              help="Score on a synthetic test stream of this many days")
@click.pass_obj
@handle_errors
def compare(manager: PipelineManager, test_days):
    """Compare the mixture-based and Gaussian planners on the held-out days."""
    manager.use_test_days(test_days)
    summary = manager.compare()
    for name, row in summary["methods"].items():
        click.echo(f"{name}: max frequency {row['max_frequency']:.4f}, "
                   f"deviation {row['deviation']:.4f}, mean cost ${row['cost_mean']:.4f}")
    if summary["tied"]:
        click.echo(f"tie: {', '.join(summary['tied'])} are equally close to the threshold")
    else:
        click.echo(f"closest to threshold: {summary['closest_to_threshold']}")


@cli.command()
@click.option("--days", type=int, default=None, help="Number of days to synthesize")
@click.option("--output", type=click.Path(dir_okay=False), default=None,
              help="Series CSV (defaults to the configured series path)")
@click.pass_obj
@handle_errors
def generate(manager: PipelineManager, days, output):
    """Write a synthetic bimodal PV and load series for the layout."""
    path = manager.generate(days or manager.config.synthetic_days, output)
    click.echo(f"Synthetic series written to {os.path.relpath(path)}")


def main():
    cli(prog_name="uvc-risk")


if __name__ == "__main__":
    sys.exit(main())
