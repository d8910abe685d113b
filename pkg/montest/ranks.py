#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""Range values: arbitrary precision integers with a base-m digit view."""
from typing import Iterable, Optional, Sequence, Tuple, Union
import functools
import operator

from montest.errors import DomainError


def to_digits(value: int, base: int, width: int) -> Tuple[int, ...]:
    """
    Base-``base`` digits of ``value``, most significant first.

    The result is zero-padded to exactly ``width`` digits, so digit 0 is
    the most significant one.

    Parameters
    ----------
    value: int
        Non-negative integer below ``base ** width``.
    base: int
        Digit base, at least 2.
    width: int
        Number of digits.

    Raises
    ------
    DomainError
        If ``value`` does not fit into ``width`` digits.

    Examples
    --------
    >>> from montest.ranks import to_digits
    >>> to_digits(21, 4, 3)
    (1, 1, 1)
    >>> to_digits(7, 4, 2)
    (1, 3)
    >>> to_digits(0, 5, 3)
    (0, 0, 0)
    """

    if value < 0 or value >= base ** width:
        raise DomainError(
            f"Value {value} does not fit into {width} base-{base} digits"
        )

    digits = [0] * width
    for index in range(width - 1, -1, -1):
        value, digits[index] = divmod(value, base)
    return tuple(digits)


def from_digits(digits: Iterable[int], base: int) -> int:
    """
    Integer value of a most-significant-first digit sequence.

    Examples
    --------
    >>> from montest.ranks import from_digits
    >>> from_digits((1, 2), 4)
    6
    >>> from_digits((), 7)
    0
    """

    return functools.reduce(lambda acc, digit: acc * base + digit, digits, 0)


@functools.total_ordering
class RankValue:
    """
    A non-negative range value with an optional digit-vector form.

    Python integers already have arbitrary precision, so the value is
    always held as an ``int``. A value built from digits remembers its
    base and width; any value can be viewed as digits on demand. Order
    and equality only look at the integer value, so a plain integer
    and a digit vector with the same value compare equal.

    Parameters
    ----------
    value: int
        The numeric value, at least 0.
    base: int, optional
        Digit base of the digit-vector form.
    width: int, optional
        Number of digits of the digit-vector form. Required with
        ``base``.

    Raises
    ------
    DomainError
        If the value is negative or does not fit the digit form.

    Examples
    --------
    >>> from montest.ranks import RankValue
    >>> v = RankValue.from_digits((1, 2), 4)
    >>> v == 6, v < RankValue(7), v.digits()
    (True, True, (1, 2))
    >>> RankValue(6).digits(4, 3)
    (0, 1, 2)
    """

    __slots__ = ("_value", "_base", "_width")

    def __init__(
        self,
        value: int,
        base: Optional[int] = None,
        width: Optional[int] = None,
    ):
        value = operator.index(value)
        if value < 0:
            raise DomainError(f"Range values are non-negative, got {value}")
        if (base is None) != (width is None):
            raise TypeError("base and width must be given together")
        if base is not None:
            if base < 2:
                raise DomainError(f"Digit base must be at least 2: {base}")
            if value >= base ** width:
                raise DomainError(
                    f"Value {value} does not fit into {width} base-{base} "
                    "digits"
                )
        self._value = value
        self._base = base
        self._width = width

    @classmethod
    def from_digits(cls, digits: Sequence[int], base: int) -> "RankValue":
        """
        Build a digit-vector value, most significant digit first.

        Raises
        ------
        DomainError
            If a digit lies outside ``[0, base - 1]``.
        """

        for digit in digits:
            if not 0 <= digit < base:
                raise DomainError(
                    f"Digit {digit} outside [0, {base - 1}] in {digits}"
                )
        return cls(from_digits(digits, base), base, len(digits))

    @property
    def value(self) -> int:
        """Numeric value."""

        return self._value

    @property
    def is_digit_vector(self) -> bool:
        """True when built with a base and width."""

        return self._base is not None

    def digits(
        self, base: Optional[int] = None, width: Optional[int] = None
    ) -> Tuple[int, ...]:
        """
        Digits in the given base, defaulting to the value's own form.

        Raises
        ------
        TypeError
            If no base is given and the value has no digit form.
        DomainError
            If the value does not fit into ``width`` digits.
        """

        base = self._base if base is None else base
        width = self._width if width is None else width
        if base is None or width is None:
            raise TypeError(
                f"{self!r} has no digit form; pass base and width"
            )
        return to_digits(self._value, base, width)

    def digit(self, index: int, base: int, width: int) -> int:
        """The ``index``-th digit, where digit 0 is the most significant."""

        return self.digits(base, width)[index]

    def __index__(self) -> int:
        return self._value

    def __int__(self) -> int:
        return self._value

    def __hash__(self) -> int:
        return hash(self._value)

    def __eq__(self, other) -> bool:
        if isinstance(other, (RankValue, int)):
            return self._value == operator.index(other)
        return NotImplemented

    def __lt__(self, other) -> bool:
        if isinstance(other, (RankValue, int)):
            return self._value < operator.index(other)
        return NotImplemented

    def __repr__(self) -> str:
        if self._base is None:
            return f"RankValue({self._value})"
        return (
            f"RankValue({self._value}, base={self._base}, "
            f"width={self._width})"
        )


RankLike = Union[int, RankValue]
