"""Behaviors of finite maps: id, lin, nil and the anchored variants."""

from leafrel import (OrderedLeafStructure, PartialMap, behavior_classify_anchored,
                     behavior_classify_plain, cones, cut_composition_check, format_newick,
                     parse_newick, realize_behavior, to_leaf_structure)
from leafrel.reconstruct import tree_of

src_tree = parse_newick("((a,(b,c)),(d,(e,f)));")
source = OrderedLeafStructure(to_leaf_structure(src_tree), "abcdef")
print("source:", format_newick(src_tree))
print("identity:", behavior_classify_plain(PartialMap.identity(source)).verdict)

for which in ("lin", "nil"):
    image, m = realize_behavior(source, which)
    print(f"{which} image:", format_newick(tree_of(image.structure)),
          "->", behavior_classify_plain(m).verdict)

# anchored: the cones of c are the subtrees hanging off the path from c to the root
s = to_leaf_structure(parse_newick("((((a,b),c),d),(e,f));"))
print("cones of c:", [sorted(k) for k in cones(s, ["c"]).classes])

# move c above everything else: this map behaves as cut_c
target = to_leaf_structure(parse_newick("((((a,b),d),(e,f)),c);"))
m = PartialMap(s, target, {x: x for x in s.labels})
print(behavior_classify_anchored(m, "c").to_text(), end="")

host = parse_newick("((((a,b),c),(d,e)),f);")
print("cut composition along a<c<d<f ends in Nil:", cut_composition_check(host, "acdf"))
