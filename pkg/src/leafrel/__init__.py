"""Rooted binary trees, their C- and D-relations, and finite maps between them."""

from .errors import *  # noqa: F401,F403
from .morphisms import (BehaviorReport, PartialMap, TupleType, behavior_classify_anchored,
                        behavior_classify_plain, check_canonical, cones,
                        cut_composition_check, enumerate_tuple_types, find_invq_split,
                        nil_check, preserves_c, preserves_q, realize_behavior,
                        rer_equiv_q_check)
from .reconstruct import (IsoResult, amalgamate, build_from_triples, canonical_form,
                          extend_one_point, is_isomorphic, reroot_relation)
from .relations import (AxiomReport, LeafStructure, OrderedLeafStructure, QuartetStructure,
                        c_to_q, check_c_axioms, check_c_consequences, check_d_axioms,
                        check_d_consequences, find_split, partition_from_anchor, restrict,
                        separated_sets)
from .solvers import (Instance, Solution, generate_instance, solve_forbidden_triples,
                      solve_quartets, solve_rooted_triples)
from .trees import (RootedBinaryTree, convex_order_dfs, convex_orders, count_trees,
                    enumerate_trees, format_newick, lcp_relation, parse_newick,
                    reroot_tree, separated, to_leaf_structure, to_quartets, words_to_tree,
                    yca)

__version__ = "0.1.0"
