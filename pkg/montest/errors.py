#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""Exception types raised by montest."""


class DomainError(ValueError):
    """A point, level or size lies outside the domain it must live in."""


class CapacityError(ValueError):
    """An exact oracle or enumeration was asked to exceed its cap."""


class ConfigurationError(ValueError):
    """Parameters are valid on their own but unusable together."""


class FunctionFileError(ValueError):
    """
    A function file could not be parsed.

    Parameters
    ----------
    message: str
        What went wrong.
    line: int
        1-based line number of the offending line.
    """

    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"line {line}: {message}")


class CertificateError(RuntimeError):
    """The greedy violating-pair builder stalled before finishing."""


class QueryBudgetExhausted(RuntimeError):
    """A capped query oracle was asked for one query too many."""
