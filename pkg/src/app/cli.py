"""Command-line entry point: `infocap stairs|cortical|mind|checks`."""

from pathlib import Path
from typing import Optional

import typer

from config.logger import logger
from config.settings import settings
from harness.runner import execute
from models.config import load_config
from models.errors import CheckSuiteError, ConfigurationError, NumericError, SamplingError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_CHECKS = 4

cli = typer.Typer(
    name="infocap",
    help="Train and validate MI estimators, capacity learners and neural decoders.",
    add_completion=False,
    no_args_is_help=True,
)

ConfigOption = typer.Option(None, "--config", "-c", help="TOML experiment document.")
OutOption = typer.Option(None, "--out", "-o", help="Output directory (default: <INFOCAP_OUTPUT_DIR>/<experiment>).")
SeedOption = typer.Option(None, "--seed", min=0, help="Master seed; overrides the document.")
ThreadsOption = typer.Option(None, "--threads", min=1, help="Worker processes (fallback: INFOCAP_THREADS).")


def run_command(
    experiment: str,
    config_path: Optional[Path],
    out: Optional[Path],
    seed: Optional[int],
    threads: Optional[int],
) -> int:
    """
    Load, run and persist one experiment, returning the process exit code.

    0 on success, 2 on a configuration error, 3 on divergence or a sampling
    failure, 4 when the check suite reports a failure.
    """
    try:
        config = load_config(config_path, experiment=experiment, seed=seed, threads=threads, output_dir=out)
    except ConfigurationError as exc:
        logger.error(str(exc))
        return EXIT_CONFIG

    workers = config.threads or settings.threads
    output_dir = config.output_dir or settings.output_dir / experiment
    logger.info(f"Running {experiment} with seed {config.seed} on {workers} worker(s) into {output_dir}")
    try:
        execute(config, output_dir, workers)
    except ConfigurationError as exc:
        logger.error(str(exc))
        return EXIT_CONFIG
    except (NumericError, SamplingError) as exc:
        logger.error(f"{experiment} aborted: {exc}")
        return EXIT_NUMERIC
    except CheckSuiteError as exc:
        logger.error(f"{exc}; see {output_dir / 'records.csv'}")
        return EXIT_CHECKS
    return EXIT_OK


def _finish(code: int) -> None:
    if code != EXIT_OK:
        raise typer.Exit(code=code)


@cli.command()
def stairs(
    config: Optional[Path] = ConfigOption,
    out: Optional[Path] = OutOption,
    seed: Optional[int] = SeedOption,
    threads: Optional[int] = ThreadsOption,
) -> None:
    """Staircase benchmark of the estimator families."""
    _finish(run_command("stairs", config, out, seed, threads))


@cli.command()
def cortical(
    config: Optional[Path] = ConfigOption,
    out: Optional[Path] = OutOption,
    seed: Optional[int] = SeedOption,
    threads: Optional[int] = ThreadsOption,
) -> None:
    """Capacity sweep with the cooperative learner."""
    _finish(run_command("cortical", config, out, seed, threads))


@cli.command()
def mind(
    config: Optional[Path] = ConfigOption,
    out: Optional[Path] = OutOption,
    seed: Optional[int] = SeedOption,
    threads: Optional[int] = ThreadsOption,
) -> None:
    """SER and information sweep of the neural decoder."""
    _finish(run_command("mind", config, out, seed, threads))


@cli.command()
def checks(
    config: Optional[Path] = ConfigOption,
    out: Optional[Path] = OutOption,
    seed: Optional[int] = SeedOption,
    threads: Optional[int] = ThreadsOption,
) -> None:
    """Deterministic analytic check suite."""
    _finish(run_command("checks", config, out, seed, threads))


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
