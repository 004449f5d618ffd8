import logging
import os
import sys

logger = logging.getLogger("relproj")
logger.setLevel(os.getenv("RELPROJ_LOG_LEVEL", "WARNING").upper())

log_format = "[%(levelname)s] %(filename)s:%(lineno)d:%(funcName)s: %(message)s"
date_format = "%Y-%m-%dT%H:%M:%S"

# Reports own stdout; logs always go to stderr
formatter = logging.Formatter(fmt=log_format, datefmt=date_format)
if not logger.handlers:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(formatter)
    logger.addHandler(handler)
logger.propagate = False


def set_level(level: str | int) -> None:
    logger.setLevel(level.upper() if isinstance(level, str) else level)


logging.getLogger("sympy").setLevel(logging.WARNING)
