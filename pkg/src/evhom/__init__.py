"""Homomorphism counting, exploded-view systems and rearrangements of small digraphs."""
from .errors import (ClassMismatchError, ErdError, EvhomError, InvalidSpecError, LimitExceededError,
                     NotStrictError)
from .graph import (ClassTag, Digraph, automorphism_count, bug_graph, canonical_form, class_membership,
                    enumerate_class, enumerate_upto, graph_from_json, graph_to_json, is_isomorphic)
from .homs import VertexMap, compare_lovasz, count_homs, enumerate_homs, is_hom, is_strict_hom
from .ev import EvSystem, EvVertex, alpha_map, ev_build, lift, phi_map, verify_aid, verify_erd
from .scheme import (EpsilonMap, certify, check_condition1_empirical, check_condition1_sufficient, eta,
                     find_inducing_epsilon, is_strict_ev_hom)
from .rearrange import (RearrangementSpec, apply, b_phi, collision_witnesses, epsilon_explicit,
                        epsilon_from_scheme, injectivity_criterion, rho, validate_spec)
from .undirected import UGraph, count_homs_u, ev_build_u, rearrange_u
from .corpus import corpus_list, get_entry, reproduce

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
