"""Rooted binary trees with labelled leaves.

Node identifiers are root paths written as bit strings: the root is ``""``
and the children of node ``p`` are ``p + "0"`` (left) and ``p + "1"``
(right).  With this encoding the youngest common ancestor of a set of leaves
is the longest common prefix of their paths, and "u lies below v" is "v is a
prefix of u".

Trees are also written as nested 2-tuples of labels, e.g. ``(("a", "b"), "c")``.
Child order is kept (it is a planar embedding, used by the convex orders)
but ignored by ``==``.
"""

from __future__ import annotations

import os
import re
from itertools import combinations
from math import prod

from .errors import (BoundExceeded, DuplicateLabel, NewickSyntaxError, NonBinary,
                     NotBinaryBranching, NotPrefixFree, TooSmall, UnknownLabel)
from .relations import LeafStructure, QuartetStructure

DEFAULT_BOUND = 9


def _lcp_len(p, q):
    n = min(len(p), len(q))
    i = 0
    while i < n and p[i] == q[i]:
        i += 1
    return i


def _common_prefix(paths):
    paths = list(paths)
    return os.path.commonprefix(paths)


def _paths_of(nested, prefix, out):
    if isinstance(nested, tuple):
        if len(nested) != 2:
            raise NonBinary(f"node with {len(nested)} children")
        _paths_of(nested[0], prefix + "0", out)
        _paths_of(nested[1], prefix + "1", out)
    else:
        if nested in out:
            raise DuplicateLabel(f"label {nested!r} occurs twice")
        out[nested] = prefix


class RootedBinaryTree:
    """A rooted binary tree on uniquely labelled leaves (immutable)."""

    __slots__ = ("_paths", "_leaf_label", "_key")

    def __init__(self, nested):
        paths = {}
        _paths_of(nested, "", paths)
        self._paths = paths
        self._leaf_label = {p: lab for lab, p in paths.items()}
        self._key = None

    @classmethod
    def from_paths(cls, paths):
        """Build from ``label -> bit string``; the paths must form a full binary tree."""
        paths = dict(paths)
        if not paths:
            raise TooSmall("a tree needs at least one leaf")
        by_path = {p: lab for lab, p in paths.items()}
        if len(by_path) != len(paths):
            raise DuplicateLabel("two labels share a path")

        def build(prefix):
            if prefix in by_path:
                return by_path[prefix]
            kids = [prefix + b for b in "01"]
            if not all(any(p.startswith(k) for p in by_path) for k in kids):
                raise NonBinary(f"node {prefix!r} does not have two children")
            return (build(kids[0]), build(kids[1]))

        return cls(build(""))

    # -- structure ---------------------------------------------------------

    root = ""

    @property
    def labels(self):
        return frozenset(self._paths)

    def __len__(self):
        return len(self._paths)

    @property
    def leaf_label(self):
        return dict(self._leaf_label)

    @property
    def nodes(self):
        out = set()
        for p in self._paths.values():
            out.update(p[:i] for i in range(len(p) + 1))
        return frozenset(out)

    @property
    def children(self):
        return {n: (n + "0", n + "1") for n in self.nodes if n not in self._leaf_label}

    def path(self, label):
        try:
            return self._paths[label]
        except KeyError:
            raise UnknownLabel(label) from None

    def paths(self):
        return dict(self._paths)

    def is_leaf(self, node):
        return node in self._leaf_label

    def labels_below(self, node):
        return frozenset(lab for lab, p in self._paths.items() if p.startswith(node))

    def nested(self, node=""):
        if node in self._leaf_label:
            return self._leaf_label[node]
        return (self.nested(node + "0"), self.nested(node + "1"))

    def subtree(self, node):
        return RootedBinaryTree(self.nested(node))

    def depth(self, node):
        return len(node)

    # -- identity ----------------------------------------------------------

    def canonical_key(self, labeled=True):
        """Child-order-free key: sorted recursive Newick (labels or ``*``)."""
        if labeled and self._key is not None:
            return self._key
        key = _canonical(self.nested(), labeled) + ";"
        if labeled:
            self._key = key
        return key

    def __eq__(self, other):
        if not isinstance(other, RootedBinaryTree):
            return NotImplemented
        return self.canonical_key() == other.canonical_key()

    def __hash__(self):
        return hash(self.canonical_key())

    def __repr__(self):
        return f"RootedBinaryTree({format_newick(self)!r})"


def _canonical(nested, labeled):
    if isinstance(nested, tuple):
        return "(" + ",".join(sorted(_canonical(c, labeled) for c in nested)) + ")"
    return str(nested) if labeled else "*"


def as_tree(obj):
    """Accept a tree, a nested tuple, or Newick text."""
    if isinstance(obj, RootedBinaryTree):
        return obj
    if isinstance(obj, str) and obj.rstrip().endswith(";"):
        return parse_newick(obj)
    return RootedBinaryTree(obj)


# ---------------------------------------------------------------------------
# ancestry


def yca(tree, labels):
    """Youngest common ancestor of a non-empty label set (a node path)."""
    labels = list(labels)
    if not labels:
        raise ValueError("yca of an empty set")
    return _common_prefix(tree.path(x) for x in labels)


def lies_below(u, v):
    """Node ``u`` lies below (or equals) node ``v``."""
    return u.startswith(v)


def separated(tree, s1, s2):
    """``S1|S2``: neither youngest common ancestor lies below the other."""
    y1, y2 = yca(tree, s1), yca(tree, s2)
    return not (lies_below(y1, y2) or lies_below(y2, y1))


def to_leaf_structure(tree):
    """The leaf structure: C(a; b, c) iff yca(b, c) lies strictly below yca(a, b, c)."""
    paths = tree.paths()
    labels = sorted(paths)
    triples = []
    for a, b, c in combinations(labels, 3):
        ab = _lcp_len(paths[a], paths[b])
        ac = _lcp_len(paths[a], paths[c])
        if ab > ac:
            triples.append((c, a, b))
        elif ac > ab:
            triples.append((b, a, c))
        else:
            triples.append((a, b, c))
    return LeafStructure(labels, triples, check=False)


def to_quartets(tree):
    """The quartet relation: the unique pairing of every 4-subset of leaves."""
    paths = tree.paths()
    labels = sorted(paths)
    pairings = {}
    for four in combinations(labels, 4):
        a, b, c, d = (paths[x] for x in four)
        for (x, y), (u, v) in (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))):
            p = (a, b, c, d)
            xy, uv = _lcp_len(p[x], p[y]), _lcp_len(p[u], p[v])
            # xy|u and xy|v, or x|uv and y|uv
            if (xy > _lcp_len(p[x], p[u]) and xy > _lcp_len(p[x], p[v])) or (
                    uv > _lcp_len(p[u], p[x]) and uv > _lcp_len(p[u], p[y])):
                pairings[four] = ((four[x], four[y]), (four[u], four[v]))
                break
    return QuartetStructure(labels, pairings, check=False)


# ---------------------------------------------------------------------------
# convex orders


def convex_order_dfs(tree, last=None):
    """Leaf order from a depth-first search; ``last`` (if given) comes last.

    At each node the child containing ``last`` is explored after its sibling;
    elsewhere the stored child order is used.
    """
    target = None if last is None else tree.path(last)
    out = []

    def visit(node):
        if tree.is_leaf(node):
            out.append(tree._leaf_label[node])
            return
        kids = [node + "0", node + "1"]
        if target is not None and target.startswith(kids[0]):
            kids.reverse()
        for k in kids:
            visit(k)

    visit("")
    return out


def convex_orders(tree):
    """All leaf orders obtained by flipping children: 2**(n-1) of them."""

    def orders(node):
        if tree.is_leaf(node):
            return [[tree._leaf_label[node]]]
        left, right = orders(node + "0"), orders(node + "1")
        out = []
        for a in left:
            for b in right:
                out.append(a + b)
                out.append(b + a)
        return out

    return orders("")


# ---------------------------------------------------------------------------
# rerooting


def reroot_tree(tree, c):
    """Delete leaf ``c`` and root the rest at the edge where ``c`` hung."""
    pc = tree.path(c)
    if len(tree) < 3:
        raise TooSmall("rerooting needs at least three leaves")
    parent = pc[:-1]
    sibling = parent + ("1" if pc[-1] == "0" else "0")
    if parent == "":
        return tree.subtree(sibling)

    def up(node, came_from):
        other = node + ("1" if came_from[-1] == "0" else "0")
        if node == "":
            return tree.nested(other)
        return (tree.nested(other), up(node[:-1], node))

    return RootedBinaryTree((tree.nested(sibling), up(parent[:-1], parent)))


# ---------------------------------------------------------------------------
# enumeration


def double_factorial(n):
    return prod(range(n, 0, -2)) if n > 0 else 1


def count_trees(n):
    """Number of labelled rooted binary trees on ``n`` leaves: (2n-3)!!."""
    if n < 1:
        return 0
    return 1 if n == 1 else double_factorial(2 * n - 3)


def _insertions(nested, leaf):
    yield (nested, leaf)
    if isinstance(nested, tuple):
        left, right = nested
        for t in _insertions(left, leaf):
            yield (t, right)
        for t in _insertions(right, leaf):
            yield (left, t)


def enumerate_nested(labels, bound=DEFAULT_BOUND):
    """Nested-tuple form of :func:`enumerate_trees` (cheaper for brute force)."""
    labels = sorted(set(labels))
    if not labels:
        raise TooSmall("need at least one label")
    if len(labels) > bound:
        raise BoundExceeded(f"{len(labels)} labels exceeds the bound {bound}")

    def grow(nested, rest):
        if not rest:
            yield nested
            return
        for t in _insertions(nested, rest[0]):
            yield from grow(t, rest[1:])

    return grow(labels[0], labels[1:])


def enumerate_trees(labels, bound=DEFAULT_BOUND):
    """Every labelled rooted binary tree on ``labels`` exactly once.

    Leaves are inserted in sorted label order; the k-th leaf is attached to
    each of the 2k-3 edges (including the edge above the root) in preorder.
    """
    for nested in enumerate_nested(labels, bound):
        yield RootedBinaryTree(nested)


# ---------------------------------------------------------------------------
# word model


def check_prefix_free(words):
    items = sorted(words.items(), key=lambda kv: kv[1])
    for (la, wa), (lb, wb) in zip(items, items[1:]):
        if wb.startswith(wa):
            raise NotPrefixFree(f"{wa!r} ({la}) is a prefix of {wb!r} ({lb})")


def lcp_relation(words):
    """C(x; y, z) iff the common prefix of y, z is longer than that of x, y."""
    words = dict(words)
    check_prefix_free(words)
    triples = []
    for x in words:
        for y in words:
            for z in words:
                if len({x, y, z}) == 3 and (
                        _lcp_len(words[y], words[z]) > _lcp_len(words[x], words[y])):
                    triples.append((x, y, z))
    return LeafStructure(words, triples, check=False)


def words_to_tree(words):
    """Tree of a prefix-free word set, with unary trie nodes suppressed."""
    words = dict(words)
    if not words:
        raise TooSmall("empty word set")
    check_prefix_free(words)

    def build(group, depth):
        if len(group) == 1:
            return group[0][0]
        parts = {}
        for lab, w in group:
            parts.setdefault(w[depth], []).append((lab, w))
        if len(parts) == 1:
            return build(group, depth + 1)
        if len(parts) != 2:
            raise NotBinaryBranching(
                f"{len(parts)}-way branching after prefix {group[0][1][:depth]!r}")
        a, b = (parts[k] for k in sorted(parts))
        return (build(a, depth + 1), build(b, depth + 1))

    return RootedBinaryTree(build(sorted(words.items()), 0))


# ---------------------------------------------------------------------------
# Newick

_LABEL = re.compile(r"[A-Za-z0-9_.\-]+")


def parse_newick(text):
    """Parse the label-only Newick subset; every internal node must be binary."""
    pos = 0
    n = len(text)
    seen = set()

    def skip():
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def subtree():
        nonlocal pos
        skip()
        if pos >= n:
            raise NewickSyntaxError("unexpected end of input", pos)
        if text[pos] == "(":
            start = pos
            pos += 1
            kids = [subtree()]
            skip()
            while pos < n and text[pos] == ",":
                pos += 1
                kids.append(subtree())
                skip()
            if pos >= n or text[pos] != ")":
                raise NewickSyntaxError("expected ')' or ','", pos)
            pos += 1
            if len(kids) != 2:
                raise NonBinary(f"node at position {start} has {len(kids)} children")
            return tuple(kids)
        m = _LABEL.match(text, pos)
        if not m:
            raise NewickSyntaxError(f"unexpected character {text[pos]!r}", pos)
        pos = m.end()
        label = m.group()
        if label in seen:
            raise DuplicateLabel(f"label {label!r} occurs twice")
        seen.add(label)
        return label

    nested = subtree()
    skip()
    if pos >= n or text[pos] != ";":
        raise NewickSyntaxError("expected ';'", pos)
    pos += 1
    skip()
    if pos != n:
        raise NewickSyntaxError("trailing characters", pos)
    return RootedBinaryTree(nested)


def _fmt(nested):
    if isinstance(nested, tuple):
        return "(" + ",".join(_fmt(c) for c in nested) + ")"
    return str(nested)


def format_newick(tree):
    tree = tree if isinstance(tree, RootedBinaryTree) else RootedBinaryTree(tree)
    return _fmt(tree.nested()) + ";"
