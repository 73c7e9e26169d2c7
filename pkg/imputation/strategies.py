"""
Imputation strategy catalog for DR Impute Sim.

Each strategy maps a missing target (outcome or confounder) to one
imputation formula. Formulas are pinned per DGP family as text in the
catalog below; the omit_* and missing_interaction variants are derived
from the family's correct formula:

- omit_precision / omit_outcome / omit_confounder drop the named variable
- omit_exposure drops the exposure entirely, i.e. un-stratifies
- missing_interaction un-stratifies and adds the exposure as a main term
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, Optional

from dgp.datasets import DGP_KINDS, MISSING_TARGETS, MULTI_KINDS, OUTCOME, confounder_name
from formula.terms import ModelFormula, Term, parse_formula
from utils.errors import ConfigError

logger = logging.getLogger(__name__)

STRATEGY_NAMES = (
    'correct',
    'oversaturated',
    'omit_precision',
    'omit_exposure',
    'omit_outcome',
    'omit_confounder',
    'missing_interaction',
    'misspec_precision',
    'misspec_precision_missing_interaction',
    'precision_linear_everywhere',
    'misspec_zc2_linear',
    'correct_zc2_quadratic',
)

COMPLETE_CASE = 'complete_case'
ALL_STRATEGIES = STRATEGY_NAMES + (COMPLETE_CASE,)

# ==================== Pinned formulas ====================

_CATALOG: Dict[str, Dict[str, Dict[str, str]]] = {
    'primary_linear': {
        'confounder': {
            'correct': 'zc ~ y + zp + zi | x',
            'oversaturated': 'zc ~ y + ns(zp,3) | x',
            'missing_interaction': 'zc ~ x + zi + zp + y',
        },
        'outcome': {
            'correct': 'y ~ zc + zp + zi | x',
            'oversaturated': 'y ~ ns(zc,3) + ns(zp,3) | x',
            'missing_interaction': 'y ~ x + zc + zp + zi',
        },
    },
    'primary_nonlinear': {
        'confounder': {
            'correct': 'zc ~ y + I(zp^2) + zi | x',
            'oversaturated': 'zc ~ y + ns(zp,3) | x',
            'misspec_precision': 'zc ~ y + zp + zi | x',
            'misspec_precision_missing_interaction': 'zc ~ x + y + zp + zi',
            'precision_linear_everywhere': 'zc ~ y + zp + zi | x',
        },
        'outcome': {
            'correct': 'y ~ zc + I(zp^2) + zi | x',
            'oversaturated': 'y ~ ns(zc,3) + ns(zp,3) | x',
            'misspec_precision': 'y ~ zc + zp + zi | x',
            'misspec_precision_missing_interaction': 'y ~ x + zc + zp + zi',
            'precision_linear_everywhere': 'y ~ zc + zp + zi | x',
        },
    },
    'multi': {
        'confounder': {
            'correct': 'zc1 ~ y + zc2 + I(zc2^2) | x',
            'correct_zc2_quadratic': 'zc1 ~ y + I(zc2^2) | x',
            'misspec_zc2_linear': 'zc1 ~ y + zc2 | x',
            'oversaturated': 'zc1 ~ y + ns(zc2,3) | x',
        },
        'outcome': {
            'correct': 'y ~ zc1 + zc2 + I(zc2^2) | x',
            'correct_zc2_quadratic': 'y ~ zc1 + I(zc2^2) | x',
            'misspec_zc2_linear': 'y ~ zc1 + zc2 | x',
            'oversaturated': 'y ~ ns(zc1,3) + ns(zc2,3) | x',
        },
    },
}

# analysis outcome formulas replaced by a strategy
_ANALYSIS_OVERRIDES: Dict[str, Dict[str, str]] = {
    'primary_nonlinear': {
        'precision_linear_everywhere': 'y ~ zc + zp',
    },
}


@dataclass(frozen=True)
class ImputationStrategy:
    """Named imputation model pair for one DGP family."""

    name: str
    family: str
    formulas: Dict[str, ModelFormula] = field(default_factory=dict)
    analysis_outcome: Optional[ModelFormula] = None

    def defined_for(self, target: str) -> bool:
        return target in self.formulas

    def formula_for(self, target: str) -> ModelFormula:
        if target not in self.formulas:
            available = ', '.join(sorted(self.formulas)) or 'no target'
            raise ConfigError(
                f"strategy '{self.name}' is not defined for a missing {target} "
                f"in the {self.family} family (defined for: {available})")
        return self.formulas[target]

    def stratified(self, target: str) -> bool:
        return self.formula_for(target).stratify_by_exposure


def dgp_family(kind: str) -> str:
    """Catalog family of a DGP kind."""
    if kind in ('linear_het', 'linear_hom'):
        return 'primary_linear'
    if kind == 'nonlinear_het':
        return 'primary_nonlinear'
    if kind in MULTI_KINDS:
        return 'multi'
    raise ConfigError(f"Unknown dgp '{kind}'. Valid dgps: {', '.join(DGP_KINDS)}")


def _derive(name: str, correct: ModelFormula, target: str, kind: str) -> Optional[ModelFormula]:
    if name == 'omit_exposure':
        return correct.unstratified()
    if name == 'missing_interaction':
        return replace(correct.unstratified(), terms=(Term(correct.exposure),) + correct.terms)

    dropped = {
        'omit_precision': 'zp',
        'omit_outcome': OUTCOME,
        'omit_confounder': confounder_name(kind),
    }.get(name)
    if dropped is None or dropped == correct.response or dropped not in correct.variables:
        return None
    return correct.without(dropped)


def get_strategy(name: str, kind: str) -> ImputationStrategy:
    """Look up a strategy for a DGP kind.

    Raises:
        ConfigError: unknown name, or a name defined for neither target in
            this DGP family
    """
    if name not in STRATEGY_NAMES:
        raise ConfigError(f"Unknown strategy '{name}'. Valid strategies: {', '.join(ALL_STRATEGIES)}")

    family = dgp_family(kind)
    pinned = _CATALOG[family]
    formulas = {}
    for target in MISSING_TARGETS:
        text = pinned[target].get(name)
        if text is not None:
            formulas[target] = parse_formula(text)
            continue
        correct = parse_formula(pinned[target]['correct'])
        derived = _derive(name, correct, target, kind)
        if derived is not None:
            formulas[target] = derived

    if not formulas:
        raise ConfigError(f"strategy '{name}' is not defined for dgp '{kind}'")

    override = _ANALYSIS_OVERRIDES.get(family, {}).get(name)
    return ImputationStrategy(
        name=name,
        family=family,
        formulas=formulas,
        analysis_outcome=parse_formula(override) if override else None,
    )


__all__ = [
    'STRATEGY_NAMES',
    'COMPLETE_CASE',
    'ALL_STRATEGIES',
    'ImputationStrategy',
    'dgp_family',
    'get_strategy',
]
