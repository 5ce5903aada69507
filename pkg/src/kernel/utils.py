"""Utility helpers used across the lab modules."""

from __future__ import annotations

import logging
import random
import time
from contextlib import contextmanager
from typing import Any, Iterable, Iterator

from .syntax import Formula, parse


def choice_value(option: Any, default: str | None = None) -> str | None:
    """Normalise an optional command-line choice to a non-empty string."""

    if option is None:
        return default
    value = str(option).strip()
    return value if value else default


def parse_many(texts: Iterable[str]) -> list[Formula]:
    return [parse(text) for text in texts]


def seeded_rng(seed: int, label: str) -> random.Random:
    """Independent stream per label so checks do not disturb each other's draws."""

    return random.Random(f"{seed}:{label}")


def matches_prefix(name: str, only: str | None) -> bool:
    if not only:
        return True
    return any(name.startswith(part.strip()) for part in only.split(",") if part.strip())


@contextmanager
def timed(logger: logging.Logger, label: str) -> Iterator[None]:
    """Log the wall time of a block at info level."""

    started = time.perf_counter()
    try:
        yield
    finally:
        logger.info("[%s] finished in %.2fs", label, time.perf_counter() - started)
