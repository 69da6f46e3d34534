"""Background worker for the run-control service."""

import threading
from pathlib import Path
from typing import TYPE_CHECKING, Optional

from app.cli import run_command
from config.logger import logger

if TYPE_CHECKING:
    from multiprocessing.sharedctypes import Synchronized
    from multiprocessing.synchronize import Event

STOP_POLL_SECONDS = 0.5


def run_worker(
    experiment: str,
    config_path: Optional[Path],
    output_dir: Optional[Path],
    seed: Optional[int],
    threads: Optional[int],
    stop_event: "Event",
    exit_code: "Optional[Synchronized]" = None,
):
    """
    Run one experiment inside a separate process.

    The experiment runs on a daemon thread while this function watches
    `stop_event`; once the event is set the worker returns and the process
    exits, abandoning the run. Outputs are only written when a run finishes,
    so a stopped run leaves no partial CSV behind.

    Args:
        experiment: `stairs`, `cortical`, `mind` or `checks`.
        config_path: TOML experiment document, or `None` for the defaults.
        output_dir: Output directory override.
        seed: Master seed override.
        threads: Worker process override.
        stop_event: A `multiprocessing.Event` used to signal when to stop.
        exit_code: Shared integer receiving the CLI exit code of the run.
    """
    logger.info(f"Starting {experiment} worker (config: {config_path or 'defaults'})")
    result: dict[str, int] = {}

    def target() -> None:
        try:
            result["code"] = run_command(experiment, config_path, output_dir, seed, threads)
        except Exception as e:
            logger.error(f"Unexpected error in {experiment} worker: {e}")
            result["code"] = 1

    runner = threading.Thread(target=target, name=f"{experiment}-run", daemon=True)
    runner.start()
    try:
        while runner.is_alive():
            if stop_event.wait(timeout=STOP_POLL_SECONDS):
                logger.warning(f"Stop requested; abandoning {experiment} run")
                break
            runner.join(timeout=0)
    finally:
        code = result.get("code")
        if exit_code is not None and code is not None:
            exit_code.value = code
        logger.info(f"{experiment} worker stopped (exit code {code if code is not None else 'n/a'})")
