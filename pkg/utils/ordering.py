# Id ordering shared by every report: digit runs compare numerically (s1 < s2 < s10)
import re
from typing import Iterable

_DIGITS = re.compile(r"(\d+)")


def natural_key(value: str) -> tuple:
    parts = _DIGITS.split(value)
    # even positions are text, odd positions are digit runs
    return tuple((0, int(p), p) if i % 2 else (1, p, p) for i, p in enumerate(parts) if p)


def natural_sorted(values: Iterable[str]) -> list[str]:
    return sorted(values, key=natural_key)
