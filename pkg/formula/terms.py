"""
Model formulas for DR Impute Sim.

A ModelFormula names a response, an ordered list of terms, optional
two-way interactions, an intercept flag and whether the model is fitted
separately within each exposure arm. The text notation is

    response ~ term + term [+ a:b] [- 1] [| x]

where a term is ``v``, ``I(v^2)`` or ``ns(v,df)``; ``ns(v)`` takes the
default df. ``- 1`` drops the intercept and ``| x`` stratifies by the
exposure x.
"""

import logging
import re
from dataclasses import dataclass, replace
from typing import FrozenSet, Optional, Tuple

from config.settings import DEFAULT_SPLINE_DF
from utils.errors import ArgumentError, ConfigError

logger = logging.getLogger(__name__)

IDENTITY = 'identity'
SQUARE = 'square'
SPLINE = 'natural_spline'

DEFAULT_EXPOSURE = 'x'

_NAME = r'[A-Za-z_][A-Za-z0-9_]*'
_SQUARE_RE = re.compile(rf'^I\(\s*({_NAME})\s*\^\s*2\s*\)$')
_SPLINE_RE = re.compile(rf'^ns\(\s*({_NAME})\s*(?:,\s*(?:df\s*=\s*)?(\d+)\s*)?\)$')
_NAME_RE = re.compile(rf'^{_NAME}$')


@dataclass(frozen=True)
class Term:
    """One variable with a transform."""

    variable: str
    transform: str = IDENTITY
    df: Optional[int] = None

    def __post_init__(self):
        if not _NAME_RE.match(self.variable):
            raise ArgumentError(f"invalid variable name '{self.variable}'")
        if self.transform == SPLINE:
            if self.df is None or self.df < 1:
                raise ArgumentError(f"spline term on '{self.variable}' needs df >= 1, got {self.df}")
        elif self.transform in (IDENTITY, SQUARE):
            if self.df is not None:
                raise ArgumentError(f"df only applies to spline terms ('{self.variable}')")
        else:
            raise ArgumentError(f"unknown transform '{self.transform}'")

    @property
    def is_spline(self) -> bool:
        return self.transform == SPLINE

    def __str__(self) -> str:
        if self.transform == SQUARE:
            return f"I({self.variable}^2)"
        if self.transform == SPLINE:
            return f"ns({self.variable},{self.df})"
        return self.variable


@dataclass(frozen=True)
class ModelFormula:
    """Declarative model specification shared by imputation and analysis models."""

    response: str
    terms: Tuple[Term, ...] = ()
    include_intercept: bool = True
    interactions: Tuple[Tuple[Term, Term], ...] = ()
    stratify_by_exposure: bool = False
    exposure: str = DEFAULT_EXPOSURE

    def __post_init__(self):
        object.__setattr__(self, 'terms', tuple(self.terms))
        object.__setattr__(self, 'interactions', tuple(tuple(pair) for pair in self.interactions))

        if self.response in self.variables:
            raise ArgumentError(f"response '{self.response}' also appears among the terms of {self}")
        if self.stratify_by_exposure and self.exposure in self.variables:
            raise ArgumentError(
                f"stratified formula {self} must not use the exposure '{self.exposure}' as a term")
        if not self.terms and not self.interactions and not self.include_intercept:
            raise ArgumentError(f"formula for '{self.response}' has no columns")
        for pair in self.interactions:
            if len(pair) != 2:
                raise ArgumentError("interactions are pairs of terms")

    @property
    def variables(self) -> FrozenSet[str]:
        """Regressor variables (response and stratifier excluded)."""
        names = {term.variable for term in self.terms}
        for a, b in self.interactions:
            names.update((a.variable, b.variable))
        return frozenset(names)

    @property
    def uses_exposure(self) -> bool:
        return self.stratify_by_exposure or self.exposure in self.variables

    def without(self, variable: str) -> 'ModelFormula':
        """Drop every term and interaction touching a variable."""
        return replace(
            self,
            terms=tuple(t for t in self.terms if t.variable != variable),
            interactions=tuple((a, b) for a, b in self.interactions
                               if variable not in (a.variable, b.variable)),
        )

    def unstratified(self) -> 'ModelFormula':
        return replace(self, stratify_by_exposure=False)

    def __str__(self) -> str:
        parts = [str(t) for t in self.terms]
        parts.extend(f"{a}:{b}" for a, b in self.interactions)
        if not parts:
            rhs = "1"
        else:
            rhs = " + ".join(parts)
            if not self.include_intercept:
                rhs += " - 1"
        text = f"{self.response} ~ {rhs}"
        if self.stratify_by_exposure:
            text += f" | {self.exposure}"
        return text


def parse_term(text: str) -> Term:
    """Parse ``v``, ``I(v^2)``, ``ns(v,df)`` or ``ns(v)`` (DEFAULT_SPLINE_DF columns)."""
    token = text.strip()
    match = _SQUARE_RE.match(token)
    if match:
        return Term(match.group(1), SQUARE)
    match = _SPLINE_RE.match(token)
    if match:
        df = int(match.group(2)) if match.group(2) else DEFAULT_SPLINE_DF
        return Term(match.group(1), SPLINE, df)
    if _NAME_RE.match(token):
        return Term(token)
    raise ConfigError(f"cannot parse term '{text}'; expected v, I(v^2) or ns(v,df)")


def parse_formula(text: str, exposure: str = DEFAULT_EXPOSURE) -> ModelFormula:
    """Parse the text notation into a ModelFormula.

    Raises:
        ConfigError: malformed text or a formula violating the term rules
    """
    if not isinstance(text, str) or text.count('~') != 1:
        raise ConfigError(f"formula must have the form 'response ~ terms', got {text!r}")

    lhs, rhs = (part.strip() for part in text.split('~'))
    if not _NAME_RE.match(lhs):
        raise ConfigError(f"invalid response '{lhs}' in formula {text!r}")

    stratify = False
    if '|' in rhs:
        rhs, stratifier = (part.strip() for part in rhs.split('|', 1))
        if stratifier != exposure:
            raise ConfigError(f"only stratification by the exposure '{exposure}' is supported, "
                              f"got '| {stratifier}' in {text!r}")
        stratify = True

    include_intercept = True
    terms = []
    interactions = []
    # signs split terms; no term syntax contains + or -
    pieces = re.split(r'\s*([+-])\s*', rhs)
    sign = '+'
    for piece in pieces:
        if piece in ('+', '-'):
            sign = piece
            continue
        token = piece.strip()
        if not token:
            continue
        if token in ('0', '1'):
            include_intercept = (sign == '+') == (token == '1')
            continue
        if sign == '-':
            raise ConfigError(f"only '- 1' may be subtracted, got '- {token}' in {text!r}")
        if ':' in token:
            parts = token.split(':')
            if len(parts) != 2:
                raise ConfigError(f"only two-way interactions are supported, got '{token}'")
            interactions.append((parse_term(parts[0]), parse_term(parts[1])))
        else:
            terms.append(parse_term(token))

    try:
        return ModelFormula(
            response=lhs,
            terms=tuple(terms),
            include_intercept=include_intercept,
            interactions=tuple(interactions),
            stratify_by_exposure=stratify,
            exposure=exposure,
        )
    except ArgumentError as e:
        raise ConfigError(f"invalid formula {text!r}: {e}") from e


__all__ = [
    'IDENTITY',
    'SQUARE',
    'SPLINE',
    'DEFAULT_EXPOSURE',
    'Term',
    'ModelFormula',
    'parse_term',
    'parse_formula',
]
