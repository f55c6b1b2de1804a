"""Semantic version numbers and the benchmark comparability rule.

Versions order lexicographically by (major, minor, patch); two benchmark
results are comparable only when their MAJOR versions agree, since a major
bump may change reported numbers.
"""

import re
from dataclasses import dataclass
from functools import total_ordering

from advkit.errors import FormatError

_PATTERN = re.compile(r"^(\d+)\.(\d+)\.(\d+)$")


@total_ordering
@dataclass(frozen=True)
class SemVersion:
    major: int
    minor: int
    patch: int

    def __post_init__(self):
        if min(self.major, self.minor, self.patch) < 0:
            raise FormatError("version components must be non-negative")

    @classmethod
    def parse(cls, text: str) -> "SemVersion":
        match = _PATTERN.match(text.strip())
        if not match:
            raise FormatError(f"not a MAJOR.MINOR.PATCH version: {text!r}")
        return cls(*(int(g) for g in match.groups()))

    def __str__(self) -> str:
        return f"{self.major}.{self.minor}.{self.patch}"

    def __lt__(self, other: "SemVersion") -> bool:
        return (self.major, self.minor, self.patch) < (
            other.major, other.minor, other.patch)

    def comparable_with(self, other: "SemVersion") -> bool:
        return self.major == other.major
