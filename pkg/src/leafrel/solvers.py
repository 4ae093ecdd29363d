"""Consistency solvers for rooted triples, quartets and forbidden triples."""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from itertools import combinations

from .errors import BadParameters, BoundExceeded, Inconsistent, MalformedInstance
from .reconstruct import build_from_triples
from .trees import (DEFAULT_BOUND, RootedBinaryTree, _insertions, _lcp_len, _paths_of,
                    enumerate_nested, format_newick, to_leaf_structure, to_quartets)

KINDS = ("triples", "quartets", "forbidden_triples")


@dataclass(frozen=True)
class Instance:
    kind: str
    labels: tuple
    constraints: tuple
    planted: RootedBinaryTree | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise MalformedInstance(f"unknown kind {self.kind!r}")
        labels = tuple(sorted(set(self.labels)))
        if len(labels) != len(self.labels):
            raise MalformedInstance("duplicate labels")
        known = set(labels)
        norm = []
        for c in self.constraints:
            if self.kind == "quartets":
                (a, b), (u, v) = c
                entries, c = (a, b, u, v), ((a, b), (u, v))
            else:
                a, b, z = c
                entries, c = (a, b, z), (a, b, z)
            if len(set(entries)) != len(entries):
                raise MalformedInstance(f"repeated entry in {c!r}")
            missing = [x for x in entries if x not in known]
            if missing:
                raise MalformedInstance(f"label {missing[0]!r} not declared")
            norm.append(c)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "constraints", tuple(norm))

    @classmethod
    def from_constraints(cls, kind, constraints, labels=None):
        """Labels default to those mentioned in the constraints."""
        if labels is None:
            seen = set()
            for c in constraints:
                if kind == "quartets":
                    seen.update(c[0])
                    seen.update(c[1])
                else:
                    seen.update(c)
            labels = sorted(seen)
        return cls(kind, tuple(labels), tuple(constraints))


@dataclass
class Solution:
    verdict: str
    tree: RootedBinaryTree | None = None
    stats: dict = field(default_factory=dict)

    @property
    def satisfiable(self):
        return self.verdict == "satisfiable"

    def to_dict(self):
        return {"verdict": self.verdict,
                "tree": format_newick(self.tree) if self.tree is not None else None,
                "stats": dict(self.stats)}

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_text(self):
        lines = [format_newick(self.tree) if self.tree is not None else self.verdict]
        lines.append(f"verdict: {self.verdict}")
        for k, v in self.stats.items():
            lines.append(f"{k}: {v}")
        return "\n".join(lines) + "\n"


def satisfies(tree, inst):
    """Check every constraint of ``inst`` against ``tree``."""
    if inst.kind == "quartets":
        q = to_quartets(tree)
        return all(q.holds(a, b, u, v) for (a, b), (u, v) in inst.constraints)
    s = to_leaf_structure(tree)
    if inst.kind == "triples":
        return all(s.sep(*t) for t in inst.constraints)
    return not any(s.sep(*t) for t in inst.constraints)


def _need(inst, kind):
    if inst.kind != kind:
        raise MalformedInstance(f"expected a {kind} instance, got {inst.kind}")
    if not inst.labels:
        raise MalformedInstance("instance has no labels")


def solve_rooted_triples(inst):
    """Polynomial: one BUILD run plus verification."""
    _need(inst, "triples")
    start = time.perf_counter()
    try:
        tree = build_from_triples(inst.labels, inst.constraints)
    except Inconsistent:
        tree = None
    stats = {"nodes_explored": len(inst.labels),
             "elapsed_seconds": round(time.perf_counter() - start, 6)}
    if tree is None:
        return Solution("unsatisfiable", None, stats)
    if not satisfies(tree, inst):
        raise RuntimeError("BUILD tree failed verification")
    return Solution("satisfiable", tree, stats)


def _sep_paths(p, x, y, z):
    return _lcp_len(p[x], p[y]) > _lcp_len(p[x], p[z])


def _quartet_paths(p, a, b, u, v):
    ab, uv = _lcp_len(p[a], p[b]), _lcp_len(p[u], p[v])
    return ((ab > _lcp_len(p[a], p[u]) and ab > _lcp_len(p[a], p[v]))
            or (uv > _lcp_len(p[u], p[a]) and uv > _lcp_len(p[u], p[b])))


def _backtrack(labels, constraints, entries_of, test):
    """First tree (in enumeration order) passing ``test`` on every constraint.

    Constraints are checked as soon as all their labels are inserted; adding
    leaves later never changes the relation among earlier ones, so pruning
    keeps the enumeration order of the surviving complete trees.
    """
    index = {x: i for i, x in enumerate(labels)}
    due = [[] for _ in labels]
    for c in constraints:
        due[max(index[x] for x in entries_of(c))].append(c)
    stats = {"nodes_explored": 0}

    def ok(nested, i):
        if not due[i]:
            return True
        paths = {}
        _paths_of(nested, "", paths)
        return all(test(paths, c) for c in due[i])

    def grow(nested, i):
        stats["nodes_explored"] += 1
        if not ok(nested, i - 1):
            return None
        if i == len(labels):
            return nested
        for cand in _insertions(nested, labels[i]):
            found = grow(cand, i + 1)
            if found is not None:
                return found
        return None

    return grow(labels[0], 1), stats


def _brute(inst, max_labels, test, entries_of):
    if len(inst.labels) > max_labels:
        raise BoundExceeded(f"{len(inst.labels)} labels exceeds the bound {max_labels}")
    start = time.perf_counter()
    nested, stats = _backtrack(list(inst.labels), inst.constraints, entries_of, test)
    stats["elapsed_seconds"] = round(time.perf_counter() - start, 6)
    if nested is None:
        return Solution("unsatisfiable", None, stats)
    tree = RootedBinaryTree(nested)
    if not satisfies(tree, inst):
        raise RuntimeError("search returned a tree failing verification")
    return Solution("satisfiable", tree, stats)


def solve_quartets(inst, max_labels=DEFAULT_BOUND):
    """Exhaustive search over all trees on the labels (with pruning)."""
    _need(inst, "quartets")
    return _brute(inst, max_labels,
                  lambda p, c: _quartet_paths(p, *c[0], *c[1]),
                  lambda c: (*c[0], *c[1]))


def solve_forbidden_triples(inst, max_labels=DEFAULT_BOUND):
    """A tree displaying none of the listed triples, by exhaustive search."""
    _need(inst, "forbidden_triples")
    return _brute(inst, max_labels, lambda p, c: not _sep_paths(p, *c), lambda c: c)


def solve(inst, max_labels=DEFAULT_BOUND):
    if inst.kind == "triples":
        return solve_rooted_triples(inst)
    if inst.kind == "quartets":
        return solve_quartets(inst, max_labels)
    return solve_forbidden_triples(inst, max_labels)


def brute_force_verdict(inst, max_labels=DEFAULT_BOUND):
    """Reference answer: plain enumeration, no pruning."""
    for nested in enumerate_nested(inst.labels, max_labels):
        if satisfies(RootedBinaryTree(nested), inst):
            return "satisfiable"
    return "unsatisfiable"


# ---------------------------------------------------------------------------
# generators


def random_tree(labels, rng):
    """Uniform random tree: insert leaves one by one on a uniform edge."""
    labels = list(labels)
    nested = labels[0]
    for x in labels[1:]:
        options = list(_insertions(nested, x))
        nested = options[rng.randrange(len(options))]
    return RootedBinaryTree(nested)


def caterpillar(labels):
    labels = list(labels)
    nested = labels[0]
    for x in labels[1:]:
        nested = (nested, x)
    return RootedBinaryTree(nested)


def default_labels(n):
    if n <= 26:
        return [chr(ord("a") + i) for i in range(n)]
    return [f"x{i}" for i in range(n)]


def generate_instance(kind, n_labels, planted=None, noise=0.0, seed=0, size=None):
    """Random instance, deterministic per seed.

    ``planted`` is a tree, the string ``"caterpillar"`` or ``"random"``
    (also the default).  Constraints are drawn from the planted tree; each
    is replaced by a random wrong one with probability ``noise``.  For
    forbidden triples, the tree's displayed triples are flipped to one of
    the two orientations it does not display, so zero noise stays
    satisfiable.  ``size`` caps the number of constraints (default: all
    3- or 4-subsets).
    """
    if kind == "forbidden":
        kind = "forbidden_triples"
    if kind not in KINDS:
        raise BadParameters(f"unknown kind {kind!r}")
    if not 0.0 <= noise <= 1.0:
        raise BadParameters("noise must lie in [0, 1]")
    if n_labels < (4 if kind == "quartets" else 3):
        raise BadParameters("too few labels for this kind")
    rng = random.Random(seed)
    if isinstance(planted, RootedBinaryTree):
        tree = planted
        if len(tree.labels) != n_labels:
            raise BadParameters("planted tree has the wrong number of leaves")
    elif planted == "caterpillar":
        tree = caterpillar(default_labels(n_labels))
    elif planted in (None, "random"):
        tree = random_tree(default_labels(n_labels), rng)
    else:
        raise BadParameters(f"unknown planted tree {planted!r}")
    labels = sorted(tree.labels)
    s = to_leaf_structure(tree)
    constraints = []
    if kind == "quartets":
        q = to_quartets(tree)
        for four in combinations(labels, 4):
            (a, b), (u, v) = (sorted(side) for side in sorted(q.pairing(*four), key=min))
            if rng.random() < noise:
                w, x, y, z = four
                (a, b), (u, v) = rng.choice((((w, x), (y, z)), ((w, y), (x, z)),
                                             ((w, z), (x, y))))
            constraints.append(((a, b), (u, v)))
    else:
        for three in combinations(labels, 3):
            a, b, c = three
            shown = next(t for t in ((a, b, c), (a, c, b), (b, c, a)) if s.sep(*t))
            options = [(a, b, c), (a, c, b), (b, c, a)]
            if kind == "forbidden_triples":
                t = rng.choice([o for o in options if o != shown])
            else:
                t = shown
            if rng.random() < noise:
                t = rng.choice(options)
            constraints.append(t)
    if size is not None:
        if size < 0:
            raise BadParameters("size must be non-negative")
        constraints = sorted(rng.sample(constraints, min(size, len(constraints))))
    return Instance(kind, tuple(labels), tuple(constraints), planted=tree)
