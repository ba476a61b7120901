"""A fake logging handler for testing purposes."""
import logging
from typing import List

from pydantic import BaseModel


class BaseFakeLogCounter(BaseModel):
    """Counters of the records seen by a fake handler."""

    records: int = 0
    debugs: int = 0
    infos: int = 0
    warnings: int = 0
    errors: int = 0
    messages: List[str] = []


class FakeLogHandler(logging.Handler):
    """Fake logging handler that counts records per level."""

    def __init__(self) -> None:
        super().__init__(level=logging.DEBUG)
        self.counter = BaseFakeLogCounter()

    def emit(self, record: logging.LogRecord) -> None:
        c = self.counter
        c.records += 1
        c.messages.append(record.getMessage())
        if record.levelno >= logging.ERROR:
            c.errors += 1
        elif record.levelno >= logging.WARNING:
            c.warnings += 1
        elif record.levelno >= logging.INFO:
            c.infos += 1
        else:
            c.debugs += 1

    def attach(self, name: str = "weyl_lab") -> "FakeLogHandler":
        logger = logging.getLogger(name)
        logger.addHandler(self)
        logger.setLevel(logging.DEBUG)
        return self

    def detach(self, name: str = "weyl_lab") -> None:
        logging.getLogger(name).removeHandler(self)
