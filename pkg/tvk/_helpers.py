"""Module with a Helpers class that contains various static, independent functions."""
import itertools as it
import logging
import re
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, Iterator, Pattern, Sequence, Tuple, Union

from mpmath import mp

JSONDict = Dict[str, Any]
Rational = Union[int, Fraction]

_comp = re.compile
PATTERNS: Dict[str, Pattern] = {
    "index_token": _comp(r"^\d+$"),
    "word": _comp(r"^[ab]*$"),
    "fraction": _comp(r"^(-?\d+)(?:/(\d+))?$"),
}


class LoggingHandler:
    """A class that provides the logging helpers shared by the runner and the CLI."""

    _log: logging.Logger = logging.getLogger("tvk")

    def _exc(self, msg_template: str, *args: Sequence[Any]) -> None:
        self._log.log(logging.WARNING, msg_template, *args, exc_info=True)

    def _info(self, msg_template: str, *args: Sequence[Any]) -> None:
        self._log.log(logging.DEBUG, msg_template, *args, exc_info=False)


class Helpers:
    @staticmethod
    @lru_cache(maxsize=None)
    def compositions(weight: int, depth: int) -> Tuple[Tuple[int, ...], ...]:
        """Return all tuples of `depth` positive integers summing to `weight`,
        in lexicographic order.
        """
        if depth == 0:
            return ((),) if weight == 0 else ()
        if weight < depth:
            return ()
        return tuple(
            (first, *rest)
            for first in range(1, weight - depth + 2)
            for rest in Helpers.compositions(weight - first, depth - 1)
        )

    @staticmethod
    def all_compositions(weight: int) -> Iterator[Tuple[int, ...]]:
        return it.chain.from_iterable(
            Helpers.compositions(weight, depth) for depth in range(1, weight + 1)
        )

    @staticmethod
    def fraction_str(value: Rational) -> str:
        """Render a rational as 'p/q' (or 'p' when integral)."""
        value = Fraction(value)
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"

    @staticmethod
    def parse_fraction(text: str) -> Fraction:
        m = PATTERNS["fraction"].match(text.strip())
        if not m:
            raise ValueError(f"not a rational number: {text!r}")
        num, den = m.groups()
        return Fraction(int(num), int(den or 1))

    @staticmethod
    def supported_digits(value: Any, err: Any, digits: int) -> int:
        """Return how many significant digits of `value` the error estimate supports,
        capped at `digits`.
        """
        magnitude = abs(value)
        if not magnitude or not err:
            return digits
        supported = int(mp.floor(mp.log10(magnitude) - mp.log10(err)))
        return max(1, min(digits, supported))

    @staticmethod
    def render_decimal(value: Any, err: Any, digits: int) -> str:
        """Render a real or complex mpmath number with no more digits than `err`
        supports.
        """
        value = mp.mpmathify(value)
        if isinstance(value, mp.mpc):
            re_part = Helpers.render_decimal(value.real, err, digits)
            im_part = Helpers.render_decimal(abs(value.imag), err, digits)
            sign = "-" if value.imag < 0 else "+"
            return f"{re_part}{sign}{im_part}j"
        if abs(value) <= err:
            return "0.0"
        supported = Helpers.supported_digits(value, err, digits)
        return mp.nstr(value, supported, strip_zeros=False)
