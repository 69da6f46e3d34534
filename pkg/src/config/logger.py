import sys

from loguru import logger

from config.settings import settings

LOG_DIR = settings.log_dir
LOG_DIR.mkdir(parents=True, exist_ok=True)

GENERAL_LOG_FILE = LOG_DIR / "general.log"
TRAINING_EVENTS_LOG_FILE = LOG_DIR / "training_events.jsonl"

EVENT_KEY = "training_event"

CONSOLE_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | "
    "<level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{line}</cyan> - "
    "<level>{message}</level>"
)


def is_training_event(record: dict) -> bool:
    return EVENT_KEY in record["extra"]


def is_progress_line(record: dict) -> bool:
    return not is_training_event(record)


logger.remove()

# Progress goes to stderr so stdout stays free for piping
logger.add(sys.stderr, level=settings.log_level, format=CONSOLE_FORMAT, filter=is_progress_line)
logger.add(
    GENERAL_LOG_FILE,
    level=settings.log_level,
    rotation="10 MB",
    retention="10 days",
    encoding="utf-8",
    enqueue=True,
    backtrace=True,
    diagnose=False,
    filter=is_progress_line,
)

# Cell outcomes are logged as pre-formatted JSON, one object per line
logger.add(
    TRAINING_EVENTS_LOG_FILE,
    level="INFO",
    format="{message}",
    encoding="utf-8",
    enqueue=True,
    filter=is_training_event,
)
