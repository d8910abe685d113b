#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""Functions on the line, partial assignments and domain orders."""
from collections.abc import Mapping as MappingABC, Sequence as SequenceABC
from typing import (
    Dict,
    Iterable,
    Iterator,
    Mapping,
    NamedTuple,
    Optional,
    Tuple,
    Union,
)
import logging
import operator
import os

from montest.errors import DomainError, FunctionFileError
from montest.ranks import RankLike, RankValue


logger = logging.getLogger(__name__)

Point = Union[int, Tuple[int, ...]]


class LineFunction(SequenceABC):
    """
    A total function ``f: [n] -> [r]`` stored densely.

    Values are held as Python integers, which already have arbitrary
    precision; ``rank`` gives the ``RankValue`` view of one value.
    Instances are immutable and hashable.

    Parameters
    ----------
    values: iterable of int or RankValue
        ``f(0), ..., f(n - 1)``.
    range_bound: int, optional
        Exclusive upper bound ``r`` on the values. Defaults to one more
        than the largest value.

    Raises
    ------
    DomainError
        If there are no values, a value is negative, or a value is not
        below ``range_bound``.

    Examples
    --------
    >>> from montest.functions import LineFunction
    >>> f = LineFunction([5, 7])
    >>> len(f), f[1], f.range_bound
    (2, 7, 8)
    >>> list(LineFunction([3, 1], range_bound=4))
    [3, 1]
    """

    __slots__ = ("_values", "_range_bound")

    def __init__(
        self,
        values: Iterable[RankLike],
        range_bound: Optional[RankLike] = None,
    ):
        self._values = tuple(map(operator.index, values))
        if not self._values:
            raise DomainError("A function needs a non-empty domain")

        low, high = min(self._values), max(self._values)
        if range_bound is None:
            range_bound = high + 1
        range_bound = operator.index(range_bound)
        if low < 0 or high >= range_bound:
            raise DomainError(
                f"Values must lie in [0, {range_bound}), got range "
                f"[{low}, {high}]"
            )
        self._range_bound = range_bound

    @property
    def n(self) -> int:
        """Domain size."""

        return len(self._values)

    @property
    def values(self) -> Tuple[int, ...]:
        """All values in domain order."""

        return self._values

    @property
    def range_bound(self) -> int:
        """Exclusive upper bound ``r`` on the values."""

        return self._range_bound

    def rank(
        self, x: int, base: Optional[int] = None, width: Optional[int] = None
    ) -> RankValue:
        """``f(x)`` as a ``RankValue``, optionally in digit form."""

        return RankValue(self._values[x], base, width)

    def __len__(self) -> int:
        return len(self._values)

    def __getitem__(self, index):
        return self._values[index]

    def __iter__(self) -> Iterator[int]:
        return iter(self._values)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LineFunction):
            return NotImplemented
        return (
            self._values == other._values
            and self._range_bound == other._range_bound
        )

    def __hash__(self) -> int:
        return hash((self._values, self._range_bound))

    def __repr__(self) -> str:
        shown = ", ".join(map(str, self._values[:8]))
        if len(self._values) > 8:
            shown += ", ..."
        return f"LineFunction([{shown}], range_bound={self._range_bound})"


class PartialAssignment(MappingABC):
    """
    A finite map from domain points to range values.

    Known elsewhere as an assignment: the transcript a decision tree
    has seen when it reaches a leaf. Its weight is the number of
    assigned points. Entries are kept sorted by point.

    Parameters
    ----------
    entries: mapping of int to int, optional
        Point to value. Points and values must be non-negative.

    Examples
    --------
    >>> from montest.functions import PartialAssignment
    >>> alpha = PartialAssignment({3: 10, 1: 4})
    >>> alpha.weight, alpha.points, alpha[3]
    (2, (1, 3), 10)
    """

    __slots__ = ("_entries",)

    def __init__(self, entries: Optional[Mapping[int, RankLike]] = None):
        items = sorted(
            (operator.index(point), operator.index(value))
            for point, value in (entries or {}).items()
        )
        for point, value in items:
            if point < 0 or value < 0:
                raise DomainError(
                    f"Assignments map non-negative points to non-negative "
                    f"values, got {point} -> {value}"
                )
        self._entries: Dict[int, int] = dict(items)

    @property
    def weight(self) -> int:
        """Number of assigned points."""

        return len(self._entries)

    @property
    def points(self) -> Tuple[int, ...]:
        """Assigned points, sorted."""

        return tuple(self._entries)

    def image(self) -> Tuple[int, ...]:
        """Assigned values in point order."""

        return tuple(self._entries.values())

    def restrict(self, points: Iterable[int]) -> "PartialAssignment":
        """Sub-assignment on the given points (which must be assigned)."""

        return PartialAssignment({x: self._entries[x] for x in points})

    def check_domain(self, n: int) -> None:
        """
        Raise ``DomainError`` unless every point lies in ``[0, n)``.
        """

        if self._entries and self.points[-1] >= n:
            raise DomainError(
                f"Assignment point {self.points[-1]} outside domain [0, {n})"
            )

    def __getitem__(self, point: int) -> int:
        return self._entries[point]

    def __iter__(self) -> Iterator[int]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other) -> bool:
        if isinstance(other, PartialAssignment):
            return self._entries == other._entries
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(self._entries.items()))

    def __repr__(self) -> str:
        return f"PartialAssignment({self._entries})"


class PosetOrder(NamedTuple):
    """
    The partial order on a domain: the line ``[n]`` or a hypergrid.

    The hypergrid ``[side]^d`` orders points coordinatewise. Its points
    are indexed row-major, most significant coordinate first; when
    ``side = 2 ** b`` this is exactly the regrouping of an index's bits
    into ``d`` groups of ``b`` bits. With ``dimension == 1`` the order
    is the line and points are plain integers.

    Attributes
    ----------
    side: int
        Number of values per coordinate.
    dimension: int
        Number of coordinates.

    Examples
    --------
    >>> from montest.functions import PosetOrder
    >>> grid = PosetOrder.hypergrid(4, 3)
    >>> grid.size, grid.point(0b110100), grid.index((3, 1, 0))
    (64, (3, 1, 0), 52)
    >>> grid.leq(0b000001, 0b010001), grid.leq(0b000100, 0b010001)
    (True, False)
    >>> PosetOrder.line(5).point(3)
    3
    """

    side: int
    dimension: int = 1

    @classmethod
    def line(cls, n: int) -> "PosetOrder":
        """The total order on ``[n]``."""

        return cls.hypergrid(n, 1)

    @classmethod
    def hypergrid(cls, side: int, dimension: int) -> "PosetOrder":
        """The coordinatewise order on ``[side]^dimension``."""

        if side < 1 or dimension < 1:
            raise DomainError(
                f"Hypergrid needs side >= 1 and dimension >= 1, got "
                f"side={side}, dimension={dimension}"
            )
        return cls(side, dimension)

    @property
    def is_line(self) -> bool:
        """True for a one-dimensional order."""

        return self.dimension == 1

    @property
    def size(self) -> int:
        """Size of the ground set."""

        return self.side ** self.dimension

    def point(self, index: int) -> Point:
        """The poset point with the given ground-set index."""

        if not 0 <= index < self.size:
            raise DomainError(f"Index {index} outside [0, {self.size})")
        if self.is_line:
            return index

        coords = [0] * self.dimension
        for axis in range(self.dimension - 1, -1, -1):
            index, coords[axis] = divmod(index, self.side)
        return tuple(coords)

    def index(self, point: Point) -> int:
        """Inverse of ``point``."""

        if self.is_line:
            coords = (operator.index(point),)
        else:
            coords = tuple(point)
        if len(coords) != self.dimension or not all(
            0 <= c < self.side for c in coords
        ):
            raise DomainError(f"Point {point} outside {self}")

        result = 0
        for coord in coords:
            result = result * self.side + coord
        return result

    def leq(self, x: int, y: int) -> bool:
        """Whether point ``x`` is below point ``y`` (both as indices)."""

        if self.is_line:
            return x <= y
        px, py = self.point(x), self.point(y)
        return all(a <= b for a, b in zip(px, py))

    def __str__(self) -> str:
        if self.is_line:
            return f"Line({self.side})"
        return f"Hypergrid({self.side}, {self.dimension})"


class ViolationPair(NamedTuple):
    """
    A monotonicity-violating pair: ``x < y`` but ``f(x) > f(y)``.

    ``x`` and ``y`` are poset points, integers on the line and tuples
    on a hypergrid.
    """

    x: Point
    y: Point

    def is_violated_by(self, f: LineFunction, order: PosetOrder) -> bool:
        """Check the pair against ``f`` on the given order."""

        x, y = order.index(self.x), order.index(self.y)
        return x != y and order.leq(x, y) and f[x] > f[y]


def agrees(f: LineFunction, alpha: PartialAssignment) -> bool:
    """
    Whether ``f`` agrees with ``alpha`` on every assigned point.

    Parameters
    ----------
    f: LineFunction
    alpha: PartialAssignment

    Raises
    ------
    DomainError
        If ``alpha`` assigns a point outside ``[0, n)``.

    Examples
    --------
    >>> from montest.functions import LineFunction, PartialAssignment, agrees
    >>> f = LineFunction([5, 7])
    >>> agrees(f, PartialAssignment()), agrees(f, PartialAssignment({0: 5}))
    (True, True)
    >>> agrees(f, PartialAssignment({1: 5}))
    False
    """

    alpha.check_domain(len(f))
    return all(f[x] == value for x, value in alpha.items())


def inflate(f: LineFunction, factor: int) -> LineFunction:
    """
    Stretch the domain: ``f'(x) = f(x // factor)`` on ``[n * factor]``.

    The relative distance to monotonicity does not change.

    Examples
    --------
    >>> from montest.functions import LineFunction, inflate
    >>> list(inflate(LineFunction([2, 0]), 3))
    [2, 2, 2, 0, 0, 0]
    """

    if factor < 1:
        raise DomainError(f"Inflation factor must be positive: {factor}")
    return LineFunction(
        (value for value in f for _ in range(factor)), f.range_bound
    )


def format_function(f: LineFunction) -> str:
    """
    Render ``f`` in the text function file format.

    The first line is ``n r`` in decimal, followed by one decimal value
    per line.

    Examples
    --------
    >>> from montest.functions import LineFunction, format_function
    >>> print(format_function(LineFunction([1, 0], range_bound=5)), end="")
    2 5
    1
    0
    """

    lines = [f"{len(f)} {f.range_bound}"]
    lines.extend(str(value) for value in f)
    return "\n".join(lines) + "\n"


def _parse_int(token: str, line: int, what: str) -> int:
    token = token.strip()
    if not (token.isascii() and token.isdigit()):
        raise FunctionFileError(
            f"Expected a non-negative decimal {what}, got {token!r}", line
        )
    return int(token)


def parse_function(text: str) -> LineFunction:
    """
    Parse the text function file format.

    Trailing blank lines are ignored; any other deviation raises a
    ``FunctionFileError`` naming the 1-based line.

    Examples
    --------
    >>> from montest.functions import parse_function
    >>> parse_function("2 5\\n1\\n0\\n")
    LineFunction([1, 0], range_bound=5)
    >>> parse_function("2 5\\n1\\n")
    Traceback (most recent call last):
    ...
    montest.errors.FunctionFileError: line 3: Expected 2 values, found 1
    """

    lines = text.split("\n")
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise FunctionFileError("Empty function file", 1)

    header = lines[0].split()
    if len(header) != 2:
        raise FunctionFileError(
            f"Expected header 'n r', got {lines[0]!r}", 1
        )
    n = _parse_int(header[0], 1, "domain size")
    bound = _parse_int(header[1], 1, "range bound")
    if n < 1:
        raise FunctionFileError("Domain size must be positive", 1)

    values = []
    for line_no, raw in enumerate(lines[1:], start=2):
        if len(values) == n:
            raise FunctionFileError(
                f"Expected {n} values, found more", line_no
            )
        value = _parse_int(raw, line_no, "value")
        if value >= bound:
            raise FunctionFileError(
                f"Value {value} is not below the range bound {bound}", line_no
            )
        values.append(value)

    if len(values) != n:
        raise FunctionFileError(
            f"Expected {n} values, found {len(values)}", len(lines) + 1
        )

    return LineFunction(values, bound)


def read_function(file_path: str) -> LineFunction:
    """Load a function file. Can be absolute or relative."""

    file_path = os.path.abspath(file_path)
    logger.debug("Reading function file %s", file_path)
    with open(file_path, "r", encoding="utf-8") as f_obj:
        return parse_function(f_obj.read())


def write_function(f: LineFunction, file_path: str) -> None:
    """Write ``f`` as a function file; output is byte-deterministic."""

    file_path = os.path.abspath(file_path)
    logger.debug("Writing %s values to %s", len(f), file_path)
    with open(file_path, "w", encoding="utf-8", newline="\n") as f_obj:
        f_obj.write(format_function(f))
