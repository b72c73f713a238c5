import logging

from rich.console import Console
from rich.logging import RichHandler

LOGGER_NAME = "padic_ducci"


def configure_logging(verbose: bool = False) -> logging.Logger:
    """Route the package logger to stderr through rich"""
    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING)

    if not any(isinstance(h, RichHandler) for h in logger.handlers):
        handler = RichHandler(
            console=Console(stderr=True),
            show_path=False,
            rich_tracebacks=True,
        )
        handler.setFormatter(logging.Formatter("%(message)s"))
        logger.addHandler(handler)

    logger.propagate = False
    return logger
