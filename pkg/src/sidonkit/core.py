"""Ground types, errors, budgets and the plain-text set formats."""

from __future__ import annotations

import enum
import logging
import os
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Union

log = logging.getLogger(__name__)

TextLike = Union[str, bytes]

_INT_RE = re.compile(r"^[+-]?\d+$")
_RAT_RE = re.compile(r"^([+-]?\d+)(?:/([+-]?\d+))?$")


class SidonError(Exception):
    """Base class for every error raised by this package."""


class ParseError(SidonError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DomainError(SidonError, ValueError):
    """Input outside an operation's domain (e.g. zero in multiplicative mode)."""


class CapacityError(SidonError, RuntimeError):
    """An exhaustive enumeration would exceed its configured budget."""


class RegimeError(SidonError, ValueError):
    """Construction or operation parameters outside their valid regime."""


class Mode(str, enum.Enum):
    ADDITIVE = "additive"
    MULTIPLICATIVE = "multiplicative"

    @classmethod
    def parse(cls, value: "Mode | str") -> "Mode":
        if isinstance(value, Mode):
            return value
        v = str(value).strip().lower()
        if v in ("add", "additive", "+"):
            return cls.ADDITIVE
        if v in ("mul", "multiplicative", "*", "x"):
            return cls.MULTIPLICATIVE
        raise ValueError(f"unknown mode {value!r}")

    @property
    def short(self) -> str:
        return "add" if self is Mode.ADDITIVE else "mul"


ADD = Mode.ADDITIVE
MUL = Mode.MULTIPLICATIVE


def budget(default: int) -> int:
    """Return ``SIDON_BUDGET`` if set, else ``default``."""
    raw = os.environ.get("SIDON_BUDGET")
    if raw is None or not raw.strip():
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"SIDON_BUDGET must be a positive integer, got {raw!r}") from None
    if value <= 0:
        raise ValueError(f"SIDON_BUDGET must be a positive integer, got {raw!r}")
    return value


@dataclass(frozen=True)
class GroundSet:
    """A finite set of integers stored as a strictly increasing tuple."""

    elements: tuple[int, ...] = ()
    label: str | None = None

    def __post_init__(self) -> None:
        els = tuple(self.elements)
        for x in els:
            if not isinstance(x, int) or isinstance(x, bool):
                raise TypeError(f"GroundSet elements must be int, got {type(x).__name__}")
        for a, b in zip(els, els[1:]):
            if not a < b:
                raise ValueError("GroundSet elements must be strictly increasing")
        object.__setattr__(self, "elements", els)

    @classmethod
    def of(cls, values: Iterable[int], label: str | None = None) -> "GroundSet":
        return cls(tuple(sorted({int(v) for v in values})), label)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __contains__(self, x: object) -> bool:
        return x in self._members

    def __getitem__(self, i: int) -> int:
        return self.elements[i]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, GroundSet):
            return self.elements == other.elements
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.elements)

    @property
    def _members(self) -> frozenset[int]:
        cached = self.__dict__.get("_member_cache")
        if cached is None:
            cached = frozenset(self.elements)
            object.__setattr__(self, "_member_cache", cached)
        return cached

    def without(self, removed: Iterable[int]) -> "GroundSet":
        gone = set(removed)
        return GroundSet(tuple(x for x in self.elements if x not in gone), self.label)

    def issubset(self, other: "GroundSet") -> bool:
        return self._members <= other._members

    def max_abs(self) -> int:
        return max((abs(x) for x in self.elements), default=0)


def as_ground_set(values: "GroundSet | Iterable[int]") -> GroundSet:
    if isinstance(values, GroundSet):
        return values
    return GroundSet.of(values)


@dataclass(frozen=True)
class RationalSet:
    """A finite set of exact rationals, strictly increasing."""

    elements: tuple[Fraction, ...] = ()

    def __post_init__(self) -> None:
        els = tuple(Fraction(x) for x in self.elements)
        for a, b in zip(els, els[1:]):
            if not a < b:
                raise ValueError("RationalSet elements must be strictly increasing")
        object.__setattr__(self, "elements", els)

    @classmethod
    def of(cls, values: Iterable[Fraction | int | str]) -> "RationalSet":
        return cls(tuple(sorted({Fraction(v) for v in values})))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.elements)

    def __contains__(self, x: object) -> bool:
        return x in set(self.elements)

    def translate(self, t: Fraction | int) -> "RationalSet":
        return RationalSet.of(x + t for x in self.elements)

    def dilate(self, c: Fraction | int) -> "RationalSet":
        if c == 0:
            raise DomainError("dilation factor must be nonzero")
        return RationalSet.of(x * c for x in self.elements)


def as_rational_set(values: "RationalSet | Iterable") -> RationalSet:
    if isinstance(values, RationalSet):
        return values
    return RationalSet.of(values)


def _lines(text: TextLike) -> Iterator[tuple[int, str]]:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8 ({exc})") from None
    for number, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield number, line


def parse_set(text: TextLike, label: str | None = None) -> tuple[GroundSet, int]:
    """Parse one decimal integer per line.

    Returns the deduplicated set and the number of duplicate lines dropped.
    """
    seen: set[int] = set()
    duplicates = 0
    for number, line in _lines(text):
        if not _INT_RE.match(line):
            raise ParseError(f"not a decimal integer: {line!r}", number)
        value = int(line)
        if value in seen:
            duplicates += 1
        seen.add(value)
    if duplicates:
        log.warning("dropped %d duplicate element(s)", duplicates)
    return GroundSet(tuple(sorted(seen)), label), duplicates


def parse_rational(token: str) -> Fraction:
    m = _RAT_RE.match(token.strip())
    if not m:
        raise ValueError(f"not a rational: {token!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ZeroDivisionError(f"zero denominator in {token!r}")
    return Fraction(num, den)


def parse_rational_set(text: TextLike) -> tuple[RationalSet, int]:
    """Parse one ``p`` or ``p/q`` token per line into lowest terms."""
    seen: set[Fraction] = set()
    duplicates = 0
    for number, line in _lines(text):
        try:
            value = parse_rational(line)
        except ZeroDivisionError:
            raise ParseError(f"zero denominator: {line!r}", number) from None
        except ValueError:
            raise ParseError(f"not a rational: {line!r}", number) from None
        if value in seen:
            duplicates += 1
        seen.add(value)
    if duplicates:
        log.warning("dropped %d duplicate element(s)", duplicates)
    return RationalSet(tuple(sorted(seen))), duplicates


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def serialize_set(A: GroundSet) -> str:
    body = "".join(f"{x}\n" for x in A)
    return f"# {A.label}\n{body}" if A.label else body


def serialize_rational_set(X: RationalSet) -> str:
    return "".join(f"{format_rational(x)}\n" for x in X)


def require_nonzero(A: GroundSet, mode: Mode) -> None:
    if mode is Mode.MULTIPLICATIVE and 0 in A:
        raise DomainError("multiplicative mode requires every element to be nonzero")
