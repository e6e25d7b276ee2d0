# halg/log.py
import logging

from .config import LOG_LEVEL


def get_logger(name: str) -> logging.Logger:
    log = logging.getLogger(name)
    if not log.handlers:
        ch = logging.StreamHandler()
        ch.setFormatter(logging.Formatter("%(asctime)s [%(levelname)s] %(message)s"))
        log.addHandler(ch)
        log.setLevel(getattr(logging, LOG_LEVEL, logging.WARNING))
        log.propagate = False
    return log


def set_level(level: int) -> None:
    """Apply one level to every halg logger created so far."""
    for name, obj in logging.Logger.manager.loggerDict.items():
        if name.startswith("halg") and isinstance(obj, logging.Logger):
            obj.setLevel(level)
