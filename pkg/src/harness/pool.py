"""Fan-out of independent experiment cells and training-event logging."""

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence, TypeVar

from config.logger import EVENT_KEY, logger
from models.records import TrainingEvent

CellT = TypeVar("CellT")
ResultT = TypeVar("ResultT")


def log_training_event(experiment: str, run_id: str, status: str, detail: str = "") -> None:
    event = TrainingEvent(experiment=experiment, run_id=run_id, status=status, detail=detail)
    logger.bind(**{EVENT_KEY: True}).info(event.model_dump_json())


def run_cells(
    worker: Callable[[CellT], ResultT],
    cells: Sequence[CellT],
    threads: int,
) -> list[ResultT]:
    """
    Evaluate `worker` on every cell, in order.

    With more than one thread the cells go to a process pool; results come
    back in cell order regardless of completion order, so output files do not
    depend on the worker count. `worker` must be a picklable top-level
    callable (or a `functools.partial` of one).
    """
    if threads <= 1 or len(cells) <= 1:
        return [worker(cell) for cell in cells]
    logger.info(f"Fanning out {len(cells)} cells over {threads} worker processes")
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, cells))
