"""FastAPI application for starting and stopping experiment runs."""

import multiprocessing
import time
from typing import Optional

from fastapi import FastAPI, HTTPException

from app.utils import run_worker
from config.logger import logger
from models.api import RunRequest, RunResponse

# Constants for process management
GRACEFUL_SHUTDOWN_TIMEOUT = 5  # seconds
FORCEFUL_TERMINATION_TIMEOUT = 2  # seconds
NO_EXIT_CODE = -1

# Global variables to track the run process
run_process: Optional[multiprocessing.Process] = None
run_experiment_name: Optional[str] = None
should_stop = multiprocessing.Event()
exit_code = multiprocessing.Value("i", NO_EXIT_CODE)

app = FastAPI(
    title="infocap run control",
    description="API for starting and stopping estimator, capacity and decoder experiments",
    version="0.1.0",
)


@app.post("/start-run", response_model=RunResponse, tags=["Run Process"])
async def start_run(request: RunRequest):
    """
    Start an experiment in a background process.

    Only one run may be active at a time.

    Args:
        request: A `RunRequest` naming the experiment, an optional TOML
            document and the seed, thread and output overrides.

    Returns:
        A `RunResponse` with a success message and the process ID.

    Raises:
        HTTPException (400): If a run is already active.
        HTTPException (500): If there is an internal error starting the process.
    """
    global run_process, run_experiment_name

    if run_process is not None and run_process.is_alive():
        raise HTTPException(
            status_code=400,
            detail="A run is already active. Stop it first before starting a new one.",
        )

    try:
        should_stop.clear()
        exit_code.value = NO_EXIT_CODE

        run_process = multiprocessing.Process(
            target=run_worker,
            args=(
                request.experiment,
                request.config_path,
                request.output_dir,
                request.seed,
                request.threads,
                should_stop,
                exit_code,
            ),
        )
        run_process.start()
        run_experiment_name = request.experiment

        logger.info(f"Started {request.experiment} run with PID: {run_process.pid}")

        return RunResponse(
            message=f"Run {request.experiment} started (config: {request.config_path or 'defaults'})",
            process_id=run_process.pid,
        )

    except Exception as e:
        logger.error(f"Failed to start run process: {e}")
        raise HTTPException(status_code=500, detail=f"Failed to start run: {str(e)}")


@app.post("/stop-run", response_model=RunResponse, tags=["Run Process"])
async def stop_run():
    """
    Stop the active run.

    Signals the background process to stop; if it does not respond within a
    timeout it is terminated, then killed.

    Returns:
        A `RunResponse` with a success message.

    Raises:
        HTTPException (400): If no run is active.
        HTTPException (500): If there is an internal error stopping the process.
    """
    global run_process

    if run_process is None or not run_process.is_alive():
        raise HTTPException(status_code=400, detail="No run is currently active.")

    try:
        pid = run_process.pid
        should_stop.set()
        run_process.join(timeout=GRACEFUL_SHUTDOWN_TIMEOUT)

        if run_process.is_alive():
            logger.warning("Run process didn't stop gracefully, terminating...")
            run_process.terminate()
            run_process.join(timeout=FORCEFUL_TERMINATION_TIMEOUT)

            if run_process.is_alive():
                logger.error("Forcefully killing run process")
                run_process.kill()
                run_process.join()

        logger.info("Run process stopped successfully")
        run_process = None

        return RunResponse(message="Run process stopped successfully", process_id=pid)

    except Exception as e:
        logger.error(f"Failed to stop run process: {e}")
        raise HTTPException(status_code=500, detail=f"Failed to stop run: {str(e)}")


@app.get("/run-status", tags=["Run Process"])
async def get_run_status():
    """
    Report whether a run is active and, once finished, its exit code.
    """
    if run_process is None:
        return {"status": "stopped", "message": "No run has been started"}

    is_alive = run_process.is_alive()
    code = exit_code.value
    return {
        "status": "running" if is_alive else "stopped",
        "experiment": run_experiment_name,
        "process_id": run_process.pid if is_alive else None,
        "exit_code": None if is_alive or code == NO_EXIT_CODE else code,
        "message": f"Run {run_experiment_name} is running"
        if is_alive
        else f"Run {run_experiment_name} has stopped",
    }


@app.get("/health", tags=["Status"])
async def health_check():
    """Health check endpoint."""
    return {"status": "healthy", "timestamp": time.time()}
