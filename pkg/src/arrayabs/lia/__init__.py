"""Exact linear integer arithmetic: formulas, solving, QE, DNF, SMT-LIB."""

from .dnf import dnf_to_formula, to_dnf
from .formula import (
    FALSE,
    TRUE,
    BudgetError,
    Formula,
    LiaError,
    Lin,
    bvar,
    dvd,
    eq,
    eq0,
    exists,
    forall,
    ge0,
    implies,
    land,
    le,
    lnot,
    lor,
    lt,
    ne,
    nnf,
    rename,
    simplify,
    subst,
)
from .parse import ParseError, parse_formula
from .printing import to_str
from .qe import Budget, eliminate_exists, eliminate_quantifiers, project
from .smtlib import from_smtlib, to_smtlib
from .solver import Model, entails, equivalent, is_sat

__all__ = [
    "FALSE",
    "TRUE",
    "Budget",
    "BudgetError",
    "Formula",
    "LiaError",
    "Lin",
    "Model",
    "ParseError",
    "bvar",
    "dnf_to_formula",
    "dvd",
    "eliminate_exists",
    "eliminate_quantifiers",
    "entails",
    "eq",
    "eq0",
    "equivalent",
    "exists",
    "forall",
    "from_smtlib",
    "ge0",
    "implies",
    "is_sat",
    "land",
    "le",
    "lnot",
    "lor",
    "lt",
    "ne",
    "nnf",
    "parse_formula",
    "project",
    "rename",
    "simplify",
    "subst",
    "to_dnf",
    "to_smtlib",
    "to_str",
]
