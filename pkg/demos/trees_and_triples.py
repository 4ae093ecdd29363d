"""From a tree to its rooted triples and back, then glue two trees together."""

from leafrel import (amalgamate, build_from_triples, check_c_axioms, format_newick,
                     parse_newick, reroot_tree, to_leaf_structure, to_quartets)
from leafrel.errors import Inconsistent

tree = parse_newick("(((a,b),c),(d,e));")
s = to_leaf_structure(tree)
print("tree:", format_newick(tree))
print("rooted triples:")
for x, y, z in s.rooted_triples():
    print(f"  {x}{y}|{z}")
print("C-axioms hold:", check_c_axioms(s.to_raw()).ok)

back = build_from_triples(s.labels, s.rooted_triples())
print("rebuilt:", format_newick(back), "same tree:", back == tree)

try:
    build_from_triples("abc", [("a", "b", "c"), ("b", "c", "a")])
except Inconsistent as exc:
    print("ab|c with bc|a:", exc)

# quartets forget the root; removing a leaf and re-hanging keeps them
q = to_quartets(tree)
r = reroot_tree(tree, "e")
print("rerooted at e:", format_newick(r))
print("quartets kept:", to_quartets(r).pairings == {k: v for k, v in q.pairings.items()
                                                   if "e" not in k})

left = to_leaf_structure(parse_newick("((a,b),x);"))
right = to_leaf_structure(parse_newick("((a,b),(y,z));"))
print("amalgam:", format_newick(amalgamate(left, right)))
