"""Deciders for membership, separation and covering across the Trotter-Weil
and FO2 quantifier-alternation hierarchies, via saturation families on finite
monoids and ranker-comparison separator monoids."""

from .monoid import (ContentStructure, FiniteMonoid, MonoidMorphism,
                     RelationalMorphismGraph, ResourceCapError, StablePreorder,
                     alphabetize, direct_product, generate_submonoid, j_monoid,
                     quotient, ramsey_bound)
from .rankers import (ComparisonSet, Ranker, RankerMonoid, build_comparison_set,
                      build_ranker_monoid, eval_ranker, leq_words, signature,
                      theorem_depth)
from .saturation import ConeFamily, Saturations, SubsetFamily, close_family, saturations
from .solver import (Certificate, CoverResult, SeparationResult, brute_conelikes,
                     brute_pointlikes, conelikes, decide_cover, decide_separation,
                     pointlikes, product_morphism, separator, separator_graph)
from .syntactic import (Dfa, RecognizedLanguage, compile_min_dfa, language,
                        parse_regex, syntactic_ordered_monoid)
from .varieties import Level, check_identity, is_in, kd_preorder
from .words import (MarkedFactorization, TransferFailure, alph, is_n_long,
                    is_subword, long_markers, mu_minor, rl_factorize,
                    transfer_factorization, universality_index)

__all__ = [name for name in dir() if not name.startswith("_")]
