"""herbrand_lab: least Herbrand models versus answers of definite programs.

A definite program ``P`` entails a query ``Q`` (every instance is a logical
consequence) only if ``Q`` is true in the least Herbrand model ``M_P``.  The
converse can fail, and whether it does depends on the alphabet of the
underlying language.  This package provides the pieces to explore that gap:

* terms, substitutions and unification (``terms``)
* a parser for programs, queries and alphabets (``syntax``)
* SLD resolution with budgets and three-valued verdicts (``sld``)
* bounded least Herbrand models (``herbrand``)
* aliens and query generalization (``aliens``)
* condition checkers, verdict comparison and counterexamples (``lab``)
* seeded randomized campaigns (``fuzz``)
"""

from .aliens import generalize, maximal_aliens
from .herbrand import ModelApprox, least_model_upto, model_satisfies, tp_step
from .lab import (
    InternalInconsistency,
    PremiseError,
    build_counterexample,
    check_conditions,
    check_corollary2,
    check_lemma4,
    equivalence_verdict,
    verify_counterexample,
)
from .sld import Budget, Status, Verdict, entails, entails_direct, entails_via_grounding, sld_answers
from .syntax import (
    Clause,
    Program,
    Query,
    Signature,
    parse_program,
    parse_query,
    parse_symbols,
    parse_term,
    render_program,
    render_query,
)
from .terms import Struct, Substitution, Var, match, unify, variant_of

__version__ = "0.1.0"

__all__ = [
    "Var",
    "Struct",
    "Substitution",
    "unify",
    "match",
    "variant_of",
    "Clause",
    "Program",
    "Query",
    "Signature",
    "parse_program",
    "parse_query",
    "parse_term",
    "parse_symbols",
    "render_program",
    "render_query",
    "Budget",
    "Status",
    "Verdict",
    "sld_answers",
    "entails",
    "entails_direct",
    "entails_via_grounding",
    "ModelApprox",
    "tp_step",
    "least_model_upto",
    "model_satisfies",
    "maximal_aliens",
    "generalize",
    "check_conditions",
    "equivalence_verdict",
    "check_lemma4",
    "check_corollary2",
    "build_counterexample",
    "verify_counterexample",
    "InternalInconsistency",
    "PremiseError",
]
