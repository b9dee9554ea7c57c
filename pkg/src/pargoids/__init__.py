"""Decision engine and type-inference tool for finite partial groupoids.

A pargoid is a finite set with a partial binary product. This package
decides whether a pargoid admits a typing by arrow types, constructs the
typing when it exists, and otherwise produces a certificate — an
application-order cycle or a definite-operation violation — that can be
re-checked against the product table alone.
"""

from .congruence import Partition, is_congruence, leibniz, make_partition, separator
from .errors import InputError, InternalError, PargoidError, ResourceExhausted
from .generators import GenConfig, SplitMix64, gen_arbitrary, gen_typed
from .pargoid import (ElementId, Pargoid, apply, less_than, parse,
                      product_triples, serialize)
from .polyclone import (DEFAULT_BUDGET, VAR, CloneResult, Const, Prod,
                        UnaryPolyOp, Var, classify, compute_clone, eval_term,
                        format_term, lemma2_check, parse_term, term_graph,
                        term_size)
from .typability import (Certificate, ClaimStarReport, Cycle, Decision,
                         DefiniteViolation, Typable, Untypable,
                         check_claim_star, check_condition_i,
                         check_condition_ii, construct_typing, decide,
                         validate_certificate)
from .types import (Arrow, Ground, TypeTerm, Typing, format_type, parse_type,
                    strict_closure_check, type_size)
from .verifier import (VerifyReport, lemma1_check, parse_typing,
                       serialize_typing, typing_isomorphic, verify)

__all__ = [
    "Arrow", "Certificate", "ClaimStarReport", "CloneResult", "Const",
    "Cycle", "DEFAULT_BUDGET", "Decision", "DefiniteViolation", "ElementId",
    "GenConfig", "Ground", "InputError", "InternalError", "Pargoid",
    "PargoidError", "Partition", "Prod", "ResourceExhausted", "SplitMix64",
    "Typable", "TypeTerm", "Typing", "UnaryPolyOp", "Untypable", "VAR",
    "Var", "VerifyReport", "apply", "check_claim_star", "check_condition_i",
    "check_condition_ii", "classify", "compute_clone", "construct_typing",
    "decide", "eval_term", "format_term", "format_type", "gen_arbitrary",
    "gen_typed", "is_congruence", "leibniz", "lemma1_check", "lemma2_check",
    "less_than", "make_partition", "parse", "parse_term", "parse_type",
    "parse_typing", "product_triples", "separator", "serialize",
    "serialize_typing", "strict_closure_check", "term_graph", "term_size",
    "type_size", "typing_isomorphic", "validate_certificate", "verify",
]
