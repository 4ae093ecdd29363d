"""Trees back from relations: BUILD, amalgamation, rerooting, isomorphism."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .errors import (Inconsistent, InconsistentType, InvalidStructure, NotAmalgamable,
                     UnknownLabel)
from .relations import LeafStructure, restrict
from .trees import (DEFAULT_BOUND, RootedBinaryTree, enumerate_nested, to_leaf_structure,
                    yca)


class UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            # smaller label becomes the representative
            if ry < rx:
                rx, ry = ry, rx
            self.parent[ry] = rx

    def groups(self):
        out = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return [sorted(g) for _, g in sorted(out.items())]


# ---------------------------------------------------------------------------
# BUILD


def _build(labels, triples):
    if len(labels) == 1:
        return labels[0]
    inside = set(labels)
    uf = UnionFind(labels)
    for a, b, c in triples:
        if a in inside and b in inside and c in inside:
            uf.union(a, b)
    comps = uf.groups()
    if len(comps) == 1:
        raise Inconsistent(f"triples force {labels} into one block")
    subtrees = [_build(comp, [t for t in triples if t[0] in comp])
                for comp in comps]
    tree = subtrees[0]
    for sub in subtrees[1:]:
        tree = (tree, sub)
    return tree


def build_from_triples(labels, triples):
    """A tree on ``labels`` satisfying every ``(a, b, c)`` read as ``ab|c``.

    Raises :class:`Inconsistent` when no such tree exists.  Multifurcations
    left by the component recursion are resolved as left combs over the
    blocks sorted by their smallest label.
    """
    labels = sorted(set(labels))
    if not labels:
        raise InvalidStructure("no labels")
    known = set(labels)
    triples = [tuple(t) for t in triples]
    for t in triples:
        for x in t:
            if x not in known:
                raise UnknownLabel(x)
        if len(set(t)) != 3:
            raise InvalidStructure(f"triple {t!r} has repeated entries")
    tree = RootedBinaryTree(_build(labels, triples))
    s = to_leaf_structure(tree)
    for a, b, c in triples:
        if not s.sep(a, b, c):
            raise RuntimeError(f"BUILD output violates {a}{b}|{c}")
    return tree


def tree_of(s):
    """The underlying tree of a valid leaf structure."""
    if isinstance(s, RootedBinaryTree):
        return s
    if not s.labels:
        raise InvalidStructure("empty structure")
    try:
        tree = build_from_triples(s.labels, s.rooted_triples())
    except Inconsistent as exc:
        raise InvalidStructure(str(exc)) from None
    if to_leaf_structure(tree) != s:
        raise InvalidStructure("structure is not the leaf structure of a binary tree")
    return tree


# ---------------------------------------------------------------------------
# isomorphism and canonical form


@dataclass(frozen=True)
class IsoResult:
    verdict: str
    witness: dict | None = None

    def __bool__(self):
        return self.verdict == "isomorphic"


def _sorted_shape(nested):
    if not isinstance(nested, tuple):
        return "*", nested
    (ka, ta), (kb, tb) = _sorted_shape(nested[0]), _sorted_shape(nested[1])
    if kb < ka:
        (ka, ta), (kb, tb) = (kb, tb), (ka, ta)
    return "(" + ka + "," + kb + ")", (ta, tb)


def _leaves_in_order(nested):
    if not isinstance(nested, tuple):
        return [nested]
    return _leaves_in_order(nested[0]) + _leaves_in_order(nested[1])


def is_isomorphic(s1, s2):
    """Decide whether a label bijection carries s1's triples onto s2's."""
    if len(s1.labels) != len(s2.labels):
        return IsoResult("not_isomorphic")
    if not s1.labels:
        return IsoResult("isomorphic", {})
    k1, n1 = _sorted_shape(tree_of(s1).nested())
    k2, n2 = _sorted_shape(tree_of(s2).nested())
    if k1 != k2:
        return IsoResult("not_isomorphic")
    witness = dict(zip(_leaves_in_order(n1), _leaves_in_order(n2)))
    moved = {(witness[a], witness[b], witness[c]) for a, b, c in s1.triples}
    if moved != s2.triples:
        raise RuntimeError("shape alignment failed to transport triples")
    return IsoResult("isomorphic", witness)


def canonical_form(s, labeled=True):
    """Text key; equal keys iff equal (labeled) or isomorphic (unlabeled) structures."""
    return tree_of(s).canonical_key(labeled=labeled)


# ---------------------------------------------------------------------------
# amalgamation


def _leafset(nested, cache):
    key = id(nested)
    hit = cache.get(key)
    if hit is None:
        if isinstance(nested, tuple):
            hit = _leafset(nested[0], cache) | _leafset(nested[1], cache)
        else:
            hit = frozenset((nested,))
        cache[key] = (hit, nested)
        return hit
    return hit[0]


def _amalg(t1, t2, cache):
    l1, l2 = _leafset(t1, cache), _leafset(t2, cache)
    common = l1 & l2
    if not common:
        return (t1, t2)
    if not isinstance(t1, tuple):
        return t2
    if not isinstance(t2, tuple):
        return t1
    sides1 = [_leafset(x, cache) for x in t1]
    sides2 = [_leafset(x, cache) for x in t2]
    # a side of one tree meeting both sides of the other: the remaining side
    # of that tree shares nothing with the first tree and hangs off the root
    for i, side in enumerate(sides2):
        if side & sides1[0] and side & sides1[1] and not (sides2[1 - i] & l1):
            return (_amalg(t1, t2[i], cache), t2[1 - i])
    for i, side in enumerate(sides1):
        if side & sides2[0] and side & sides2[1] and not (sides1[1 - i] & l2):
            return (_amalg(t1[i], t2, cache), t1[1 - i])
    x2, y2 = t2
    if sides1[0] & sides2[1] or sides1[1] & sides2[0]:
        x2, y2 = y2, x2
    return (_amalg(t1[0], x2, cache), _amalg(t1[1], y2, cache))


def _embeds_both(tree, b1, b2):
    s = to_leaf_structure(tree)
    return restrict(s, b1.labels) == b1 and restrict(s, b2.labels) == b2


def amalgamate(b1, b2, bound=DEFAULT_BOUND):
    """A tree whose leaf structure restricts to ``b1`` and to ``b2``.

    Follows the recursive root-split case analysis; if its result ever fails
    the embedding check, falls back to searching all trees on the union
    (at most ``bound`` labels).
    """
    if isinstance(b1, RootedBinaryTree):
        b1 = to_leaf_structure(b1)
    if isinstance(b2, RootedBinaryTree):
        b2 = to_leaf_structure(b2)
    common = b1.labels & b2.labels
    if restrict(b1, common) != restrict(b2, common):
        raise NotAmalgamable("the structures disagree on their common labels")
    t1, t2 = tree_of(b1), tree_of(b2)
    try:
        tree = RootedBinaryTree(_amalg(t1.nested(), t2.nested(), {}))
        if _embeds_both(tree, b1, b2):
            return tree
    except (ValueError, InvalidStructure):
        pass
    union = b1.labels | b2.labels
    if len(union) <= bound:
        for nested in enumerate_nested(union, bound):
            tree = RootedBinaryTree(nested)
            if _embeds_both(tree, b1, b2):
                return tree
    raise NotAmalgamable("no amalgam found")


# ---------------------------------------------------------------------------
# rerooting and one-point extension


def reroot_relation(q, c):
    """C on labels minus ``c`` with C(x; y, z) iff D(cx, yz)."""
    if c not in q.labels:
        raise UnknownLabel(c)
    rest = sorted(q.labels - {c})
    triples = [(x, y, z) for x, y, z in permutations(rest, 3)
               if y < z and q.holds(c, x, y, z)]
    return LeafStructure(rest, triples)


def graft(tree, node, label, left=False):
    """Insert leaf ``label`` on the edge above ``node``."""
    nested = tree.nested()

    def walk(sub, here):
        if here == node:
            return (label, sub) if left else (sub, label)
        if not isinstance(sub, tuple):
            raise ValueError(f"node {node!r} not in tree")
        bit = int(node[len(here)])
        kids = list(sub)
        kids[bit] = walk(sub[bit], here + str(bit))
        return tuple(kids)

    return RootedBinaryTree(walk(nested, ""))


def _fresh_label(taken, base):
    if base not in taken:
        return base
    i = 1
    while f"{base}_{i}" in taken:
        i += 1
    return f"{base}_{i}"


def extend_one_point(host, f, a, a_type=(), new_label=None):
    """Extend a C-preserving map by one point, growing the host by one leaf.

    ``f`` is a :class:`~leafrel.morphisms.PartialMap` from a leaf structure
    into the leaf structure of ``host``; ``a_type`` lists rooted triples
    ``(x, y, z)`` (``xy|z``) relating the fresh point ``a`` to ``f``'s domain.
    Returns ``(new_host, extended_map)``.
    """
    from .morphisms import PartialMap, preserves_c

    domain = sorted(f.mapping)
    if a in f.mapping:
        raise ValueError(f"{a!r} is already in the domain")
    if not preserves_c(f):
        raise ValueError("the map does not preserve C")
    scope = set(domain) | {a}
    source = getattr(f.source, "structure", f.source)
    rooted = list(restrict(source, domain).rooted_triples())
    for t in a_type:
        if a not in t or not set(t) <= scope:
            raise InconsistentType(f"type triple {t!r} must relate {a!r} to the domain")
        rooted.append(tuple(t))
    try:
        shape = build_from_triples(scope, rooted)
    except Inconsistent as exc:
        raise InconsistentType(str(exc)) from None

    r = new_label or _fresh_label(host.labels, a)
    if r in host.labels:
        raise ValueError(f"label {r!r} already in the host")
    if not domain:
        new_host = RootedBinaryTree((host.nested(), r))
    else:
        pa = shape.path(a)
        sibling = pa[:-1] + ("1" if pa[-1] == "0" else "0")
        below = shape.labels_below(sibling)
        w = yca(host, [f.mapping[x] for x in below])
        new_host = graft(host, w, r)
    mapping = dict(f.mapping)
    mapping[a] = r
    g = PartialMap(to_leaf_structure(shape), to_leaf_structure(new_host), mapping)
    if not preserves_c(g):
        raise RuntimeError("grafted extension does not preserve C")
    return new_host, g


__all__ = [
    "IsoResult", "UnionFind", "amalgamate", "build_from_triples", "canonical_form",
    "extend_one_point", "graft", "is_isomorphic", "reroot_relation", "tree_of",
]
