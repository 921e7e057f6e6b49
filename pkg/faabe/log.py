import logging
from datetime import datetime

from faabe import config

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(message)s"


# ---------- logging setup ----------
def setup_logger(quiet=False, verbose=None, log_to_file=None):
    """Configure the ``faabe`` logger for a command run and return it.

    Safe to call more than once; handlers from a previous call are replaced.
    """
    if verbose is None:
        verbose = getattr(config, "VERBOSE", False)
    if log_to_file is None:
        log_to_file = getattr(config, "LOG_TO_FILE", False)

    if quiet:
        level = logging.WARNING
    elif verbose:
        level = logging.DEBUG
    else:
        level = logging.INFO

    logger = logging.getLogger("faabe")
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()

    formatter = logging.Formatter(LOG_FORMAT)
    handlers = [logging.StreamHandler()]
    if log_to_file:
        log_dir = config.LOG_DIR
        log_dir.mkdir(parents=True, exist_ok=True)
        timestamp = datetime.now().strftime("%Y-%m-%d_%H%M%S")
        handlers.append(logging.FileHandler(log_dir / f"faabe_{timestamp}.log", encoding="utf-8"))

    for handler in handlers:
        handler.setFormatter(formatter)
        logger.addHandler(handler)
    logger.setLevel(level)
    logger.propagate = False
    return logger
