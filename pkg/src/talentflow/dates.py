"""Calendar-month dates and exact duration arithmetic.

All profile dates are month-granular. Durations are exact rationals
(months / 12) so that means and comparisons are reproducible across
platforms; they are converted to decimal only when written out.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

_MONTH_RE = re.compile(r"^(\d{4})-(\d{2})$")


@dataclass(frozen=True, order=True)
class Month:
    """A calendar month, e.g. 2017-03."""

    year: int
    month: int

    def __post_init__(self) -> None:
        if not 1 <= self.month <= 12:
            raise ValueError(f"month out of range: {self.month}")
        if self.year < 0:
            raise ValueError(f"negative year: {self.year}")

    @classmethod
    def parse(cls, text: str) -> "Month":
        """Parse a 'YYYY-MM' string."""
        m = _MONTH_RE.match(text)
        if not m:
            raise ValueError(f"not a YYYY-MM month: {text!r}")
        return cls(int(m.group(1)), int(m.group(2)))

    @property
    def ordinal(self) -> int:
        """Months since year 0, usable for distance arithmetic."""
        return self.year * 12 + (self.month - 1)

    def __str__(self) -> str:
        return f"{self.year:04d}-{self.month:02d}"


def months_between(start: Month, end: Month) -> int:
    """Signed month count from start to end (negative if end precedes start)."""
    return end.ordinal - start.ordinal


def years_between(start: Month, end: Month) -> Fraction:
    """Signed duration in years as an exact rational."""
    return Fraction(months_between(start, end), 12)


def format_years(value: Fraction | float) -> str:
    """Render a duration (or any ratio) as a decimal string.

    Uses repr of the float value, which is the shortest string that
    round-trips, so output bytes are stable across runs.
    """
    return repr(float(value))
