"""Finite maps between leaf structures and how they behave.

A :class:`PartialMap` is a total assignment on the source labels.  The checks
here are all exhaustive over the (finite) source, so they are meant for desk
scale: a handful of labels, not hundreds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations, permutations

from .errors import (ConstructionFailed, NoSplit, NotInjective, NotQPreserving,
                     PreconditionFailed, UnknownLabel, BoundExceeded)
from .reconstruct import UnionFind, tree_of
from .relations import (OrderedLeafStructure, QuartetStructure,
                        convexity_violation, find_split, q_formula, restrict,
                        separated_sets)
from .trees import (RootedBinaryTree, convex_order_dfs, convex_orders, enumerate_nested,
                    to_leaf_structure, yca)

PLAIN = ("id", "lin", "nil")
ANCHORED = ("id_c", "cut_c", "rer_c", "tilde_rer_c")
TYPE_BOUND = 6


def _base(s):
    return getattr(s, "structure", s)


@dataclass(frozen=True)
class PartialMap:
    source: object
    target: object
    mapping: dict
    constants: tuple = ()

    def __post_init__(self):
        mapping = dict(self.mapping)
        for x in self.source.labels:
            if x not in mapping:
                raise ValueError(f"assignment is not defined on {x!r}")
        for x, y in mapping.items():
            if x not in self.source.labels:
                raise UnknownLabel(x)
            if y not in self.target.labels:
                raise UnknownLabel(y)
        for c in self.constants:
            if c not in self.source.labels:
                raise UnknownLabel(c)
        object.__setattr__(self, "mapping", mapping)
        object.__setattr__(self, "constants", tuple(self.constants))

    def __call__(self, x):
        return self.mapping[x]

    def image(self, xs):
        return [self.mapping[x] for x in xs]

    def is_injective(self, on=None):
        dom = self.source.labels if on is None else on
        return len({self.mapping[x] for x in dom}) == len(set(dom))

    @classmethod
    def identity(cls, s):
        return cls(s, s, {x: x for x in s.labels})

    @classmethod
    def between_trees(cls, src, dst, mapping, ordered=False):
        """Map between the leaf structures of two trees (DFS orders when ordered)."""
        a, b = to_leaf_structure(src), to_leaf_structure(dst)
        if ordered:
            a = OrderedLeafStructure(a, convex_order_dfs(src))
            b = OrderedLeafStructure(b, convex_order_dfs(dst))
        return cls(a, b, mapping)


@dataclass(frozen=True)
class Check:
    ok: bool
    witness: tuple | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def _collision(m, dom):
    seen = {}
    for x in sorted(dom):
        y = m.mapping[x]
        if y in seen:
            return seen[y], x
        seen[y] = x
    return None


# ---------------------------------------------------------------------------
# preservation


def preserves_c(m, on=None):
    """Does every C-triple of the source land on a C-triple of the target?

    Degenerate triples C(a; b, b) are included, so a non-injective map always
    fails.  On success the map is re-checked to be injective and to send
    non-triples to non-triples.
    """
    src, tgt = _base(m.source), _base(m.target)
    dom = set(src.labels if on is None else on)
    f = m.mapping
    pair = _collision(m, dom)
    if pair is not None:
        a, b = pair
        return Check(False, (a, b, b), "two points share an image")
    for a, b, c in sorted(src.triples):
        if a in dom and b in dom and c in dom and not tgt.holds(f[a], f[b], f[c]):
            return Check(False, (a, b, c), "triple not preserved")
    # injective and C-preserving maps also reflect C
    for a, b, c in permutations(sorted(dom), 3):
        if not src.holds(a, b, c) and tgt.holds(f[a], f[b], f[c]):
            raise AssertionError(f"C-preserving map creates the triple at {(a, b, c)!r}")
    return Check(True)


def _pairing_of(s, four):
    """The pairing {{x,y},{u,v}} on a 4-set, or None."""
    w, x, y, z = four
    for p in ((w, x, y, z), (w, y, x, z), (w, z, x, y)):
        if isinstance(s, QuartetStructure):
            hit = s.holds(*p)
        else:
            hit = q_formula(s, *p)
        if hit:
            return frozenset((frozenset(p[:2]), frozenset(p[2:])))
    return None


def preserves_q(m, on=None):
    """Q analogue of :func:`preserves_c`; works on C or quartet structures."""
    src, tgt = _base(m.source), _base(m.target)
    dom = set(src.labels if on is None else on)
    f = m.mapping
    pair = _collision(m, dom)
    if pair is not None:
        a, b = pair
        return Check(False, (a, a, b, b), "two points share an image")
    for four in combinations(sorted(dom), 4):
        p = _pairing_of(src, four)
        if p is None:
            continue
        moved = frozenset(frozenset(f[x] for x in side) for side in p)
        if _pairing_of(tgt, [f[x] for x in four]) != moved:
            (x, y), (u, v) = sorted(sorted(side) for side in p)
            return Check(False, (x, y, u, v), "quartet not preserved")
    return Check(True)


# ---------------------------------------------------------------------------
# splits and cones


def find_invq_split(m, A=None):
    """A non-empty B ⊊ A with f(B)|f(A∖B) in the target and B|x for x ∈ A∖B."""
    src, tgt = _base(m.source), _base(m.target)
    A = frozenset(src.labels if A is None else A)
    if len(A) < 2:
        raise ValueError("need at least two points")
    if not preserves_q(m, on=A):
        raise NotQPreserving("map does not preserve Q on the set")
    f = m.mapping
    inverse = {f[x]: x for x in A}
    t1, t2 = find_split(tgt, [f[x] for x in A])
    b1 = frozenset(inverse[y] for y in t1)
    b2 = frozenset(inverse[y] for y in t2)
    for b in (b1, b2):
        rest = A - b
        if (separated_sets(tgt, [f[x] for x in b], [f[x] for x in rest])
                and all(separated_sets(src, b, {x}) for x in rest)):
            return b
    raise NoSplit("neither side of the image split works")


@dataclass(frozen=True)
class ConePartition:
    anchor: tuple
    classes: tuple

    def cone_of(self, x):
        for k in self.classes:
            if x in k:
                return k
        raise UnknownLabel(x)


def cones(s, constants):
    """Classes of ``xy|c`` for every constant c, over the non-constant labels."""
    s = _base(s)
    constants = tuple(constants)
    if len(set(constants)) != len(constants):
        raise ValueError("constants must be distinct")
    for c in constants:
        if c not in s.labels:
            raise UnknownLabel(c)
    rest = sorted(s.labels - set(constants))
    related = lambda x, y: all(s.sep(x, y, c) for c in constants)
    uf = UnionFind(rest)
    for x, y in combinations(rest, 2):
        if related(x, y):
            uf.union(x, y)
    classes = tuple(frozenset(g) for g in uf.groups())
    for k in classes:
        for x, y in combinations(sorted(k), 2):
            if not related(x, y):
                raise AssertionError("cone relation is not transitive")
    return ConePartition(constants, classes)


# ---------------------------------------------------------------------------
# behaviors


@dataclass
class BehaviorReport:
    verdict: str
    precondition_ok: bool = True
    matching: tuple = ()
    witnesses: dict = field(default_factory=dict)
    failed_preconditions: tuple = ()
    anchor: object = None

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "precondition_ok": self.precondition_ok,
            "matching": list(self.matching),
            "failed_preconditions": list(self.failed_preconditions),
            "anchor": self.anchor,
            "witnesses": {k: list(v) for k, v in sorted(self.witnesses.items())},
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_text(self):
        lines = [f"verdict: {self.verdict}"]
        if self.anchor is not None:
            lines.append(f"anchor: {self.anchor}")
        lines.append(f"precondition_ok: {str(self.precondition_ok).lower()}")
        for p in self.failed_preconditions:
            lines.append(f"failed_precondition: {p}")
        lines.append("matching: " + " ".join(self.matching))
        for k, v in sorted(self.witnesses.items()):
            lines.append(f"witness {k}: {' '.join(map(str, v))}")
        return "\n".join(lines) + "\n"


def behavior_classify_plain(m, A=None):
    """Test the id, lin and nil clause families on ``A``.

    ``verdict`` is the first matching family (in the order id, lin, nil);
    ``matching`` lists all of them, which matters only when ``A`` is too small
    for the clauses to bite.
    """
    src = m.source
    if not isinstance(src, OrderedLeafStructure):
        raise ValueError("plain behaviors need an ordered source")
    tgt = _base(m.target)
    A = sorted(src.labels if A is None else A, key=src.position.__getitem__)
    if not m.is_injective(A):
        raise NotInjective(f"collision at {_collision(m, A)!r}")
    f = m.mapping
    witnesses = {}
    for (x, y), z in ((p, z) for p in combinations(A, 2) for z in A):
        if src.sep(x, y, z) and not tgt.sep(f[x], f[y], f[z]):
            witnesses["id"] = (x, y, z)
            break
    for x, y, z in combinations(A, 3):
        if "lin" not in witnesses and not tgt.sep(f[y], f[z], f[x]):
            witnesses["lin"] = (x, y, z)
        if "nil" not in witnesses and not tgt.sep(f[x], f[y], f[z]):
            witnesses["nil"] = (x, y, z)
    matching = tuple(b for b in PLAIN if b not in witnesses)
    return BehaviorReport(matching[0] if matching else "none", True, matching, witnesses)


def behavior_classify_anchored(m, c, A=None):
    """Check conditions 1-3 over the cones of ``c``, then the four clause families."""
    src, tgt = _base(m.source), _base(m.target)
    if c not in src.labels:
        raise UnknownLabel(c)
    A = sorted(src.labels - {c} if A is None else A)
    if c in A:
        raise ValueError("anchor must not lie in the set")
    if not m.is_injective(list(A) + [c]):
        raise NotInjective(f"collision at {_collision(m, list(A) + [c])!r}")
    f = m.mapping
    fc = f[c]
    classes = cones(restrict(src, set(A) | {c}), (c,)).classes
    failed, witnesses = [], {}
    for k in classes:
        if not separated_sets(tgt, {fc}, [f[x] for x in k]):
            failed.append("anchor_separated")
            witnesses.setdefault("anchor_separated", tuple(sorted(k)))
            break
    for k in classes:
        bad = next(((x, y, z) for x, y, z in permutations(sorted(k), 3)
                    if src.holds(x, y, z) and not tgt.holds(f[x], f[y], f[z])), None)
        if bad:
            failed.append("cone_preserved")
            witnesses.setdefault("cone_preserved", bad)
            break
    for k1, k2 in combinations(classes, 2):
        if not separated_sets(tgt, [f[x] for x in k1], [f[x] for x in k2]):
            failed.append("cones_separated")
            witnesses.setdefault("cones_separated", (min(k1), min(k2)))
            break

    for x, y, z in permutations(A, 3):
        if not (separated_sets(src, {x}, {y, z, c}) and src.sep(z, c, y)):
            continue
        fx, fy, fz = f[x], f[y], f[z]
        below = separated_sets(tgt, {fx, fy, fz}, {fc})
        if "id_c" not in witnesses and not (
                separated_sets(tgt, {fx}, {fy, fz, fc}) and tgt.sep(fz, fc, fy)):
            witnesses["id_c"] = (x, y, z)
        if "cut_c" not in witnesses and not (below and tgt.sep(fy, fz, fx)):
            witnesses["cut_c"] = (x, y, z)
        if "rer_c" not in witnesses and not (below and tgt.sep(fx, fy, fz)):
            witnesses["rer_c"] = (x, y, z)
    for x, y in permutations(A, 2):
        if src.sep(y, c, x) and not tgt.sep(f[x], fc, f[y]):
            witnesses["tilde_rer_c"] = (x, y)
            break
    matching = tuple(b for b in ANCHORED if b not in witnesses)
    ok = not failed
    verdict = matching[0] if ok and matching else "none"
    return BehaviorReport(verdict, ok, matching, witnesses, tuple(failed), c)


def behaves_as(m, behavior, c=None, A=None):
    if behavior in PLAIN:
        return behavior in behavior_classify_plain(m, A).matching
    rep = behavior_classify_anchored(m, c, A)
    return rep.precondition_ok and behavior in rep.matching


def rer_equiv_q_check(m, a, X=None):
    """Self-test: with f(a)|f(X∖{a}), rer_a on X∖{a} holds iff Q is preserved on X."""
    src, tgt = _base(m.source), _base(m.target)
    X = sorted(src.labels if X is None else X)
    if a not in X:
        raise ValueError("anchor must lie in X")
    rest = [x for x in X if x != a]
    if not separated_sets(tgt, {m.mapping[a]}, [m.mapping[x] for x in rest]):
        raise PreconditionFailed("the image of the anchor is not split off")
    try:
        rer = behaves_as(m, "rer_c", a, rest)
    except NotInjective:
        rer = False
    return rer == preserves_q(m, on=X).ok


def nil_check(s, tup):
    """Nil(a1, ..., ak): increasing in the order and each prefix split off the next."""
    tup = tuple(tup)
    for x in tup:
        if x not in s.labels:
            raise UnknownLabel(x)
    if len(set(tup)) != len(tup):
        raise ValueError("entries must be distinct")
    if any(not s.precedes(x, y) for x, y in zip(tup, tup[1:])):
        return False
    return all(separated_sets(s, tup[:i], {tup[i]}) for i in range(1, len(tup)))


# ---------------------------------------------------------------------------
# tuple types and canonicity


@dataclass(frozen=True, order=True)
class TupleType:
    arity: int
    key: str


def tuple_type(s, t):
    """Type of the tuple ``t``: equalities, C among entries, and order if present."""
    base = _base(s)
    k = len(t)
    eq = "".join(str(t.index(x)) for x in t)
    bits = "".join(
        "1" if base.holds(t[i], t[j], t[l]) else "0"
        for i in range(k) for j in range(k) for l in range(j + 1, k)
        if i != j and i != l)
    order = ""
    if isinstance(s, OrderedLeafStructure):
        pos = s.position
        order = "".join("1" if pos[t[i]] < pos[t[j]] else "0"
                        for i, j in combinations(range(k), 2))
    return TupleType(k, f"{eq}/{bits}/{order}")


def enumerate_tuple_types(k, ordered=True, bound=TYPE_BOUND):
    """All types of k-tuples of distinct points, as labeled shapes times convex orders."""
    if k < 1:
        raise ValueError("arity must be positive")
    if k > bound:
        raise BoundExceeded(f"arity {k} exceeds the bound {bound}")
    points = list(range(k))
    seen = set()
    for nested in enumerate_nested(points, bound=max(bound, k)):
        tree = RootedBinaryTree(nested)
        s = to_leaf_structure(tree)
        if not ordered:
            seen.add(tuple_type(s, points))
            continue
        for order in convex_orders(tree):
            seen.add(tuple_type(OrderedLeafStructure(s, order, check=False), points))
    return sorted(seen)


@dataclass
class CanonicalResult:
    canonical: bool
    type_map: dict
    witness: tuple | None = None

    def __bool__(self):
        return self.canonical


def check_canonical(m, k_max=4, on=None):
    """Does the image type of a tuple depend only on its type?

    Constants are prepended to every tuple on both sides.  Tuples of distinct
    points of arity 1..k_max are checked.
    """
    dom = sorted((m.source.labels if on is None else set(on)) - set(m.constants))
    consts = tuple(m.constants)
    f = m.mapping
    type_map, first = {}, {}
    for k in range(1, k_max + 1):
        for t in permutations(dom, k):
            src_t = tuple_type(m.source, consts + t)
            img = tuple_type(m.target, tuple(f[x] for x in consts + t))
            seen = type_map.get(src_t)
            if seen is None:
                type_map[src_t] = img
                first[src_t] = t
            elif seen != img:
                return CanonicalResult(False, type_map, (first[src_t], t))
    return CanonicalResult(True, type_map)


# ---------------------------------------------------------------------------
# constructions


def _replace(nested, leaves, fn):
    """Replace the subtree whose leaf set is exactly ``leaves``."""
    def walk(sub):
        here = _leafset(sub)
        if here == leaves:
            return fn(sub), True
        if not isinstance(sub, tuple) or not leaves <= here:
            return sub, False
        left, done = walk(sub[0])
        if done:
            return (left, sub[1]), True
        right, done = walk(sub[1])
        return (sub[0], right), done

    out, done = walk(nested)
    if not done:
        raise ConstructionFailed(f"no subtree with leaves {sorted(leaves)}")
    return out


def _leafset(nested):
    if isinstance(nested, tuple):
        return _leafset(nested[0]) | _leafset(nested[1])
    return frozenset((nested,))


def _mirror(nested):
    if isinstance(nested, tuple):
        return (_mirror(nested[1]), _mirror(nested[0]))
    return nested


def _lin_image(order):
    img = None
    placed = []
    pos = {x: i for i, x in enumerate(order)}
    for v in sorted(order, key=str):
        ws = sorted(placed + [v], key=pos.__getitem__)
        i, n = ws.index(v), len(placed)
        if n == 0:
            img = v
        elif i == 0:
            img = (v, img)
        elif i == n:
            img = _replace(img, frozenset((ws[i - 1],)), lambda sub: (sub, v))
        elif i == n - 1:
            img = _replace(img, frozenset((ws[i + 1],)), lambda sub: (v, sub))
        else:
            img = _replace(img, frozenset(ws[i + 1:]), lambda sub: (v, sub))
        placed.append(v)
    return img


def realize_behavior(s, which):
    """Order-preserving injection with behavior ``which`` (lin or nil).

    Points are inserted one by one (in label order, so not necessarily
    increasing), each time following the insertion case that keeps every
    increasing triple in comb position.  nil is the mirror image of lin on
    the reversed order.
    """
    if which not in ("lin", "nil"):
        raise ValueError("which must be 'lin' or 'nil'")
    order = list(s.order)
    if which == "lin":
        img = _lin_image(order)
    else:
        img = _mirror(_lin_image(order[::-1]))
    tree = RootedBinaryTree(img)
    image = OrderedLeafStructure(to_leaf_structure(tree), convex_order_dfs(tree))
    if list(image.order) != order:
        raise ConstructionFailed("image order does not match the source order")
    m = PartialMap(s, image, {x: x for x in order})
    if which not in behavior_classify_plain(m).matching:
        raise ConstructionFailed(f"construction does not behave as {which}")
    return image, m


def _cut_step(nested, u, before):
    """Prune leaf ``u`` and re-attach it just above the yca of ``before``."""
    def prune(sub):
        if not isinstance(sub, tuple):
            return sub
        if sub[0] == u:
            return sub[1]
        if sub[1] == u:
            return sub[0]
        return (prune(sub[0]), prune(sub[1]))

    pruned = prune(nested)
    tree = RootedBinaryTree(pruned)
    w = yca(tree, before)
    return _replace(pruned, frozenset(tree.labels_below(w)), lambda sub: (sub, u))


def cut_composition_check(host, xs):
    """Compose cut-behaving maps along x1 < ... < xk and test Nil at the end."""
    s = to_leaf_structure(host) if isinstance(host, RootedBinaryTree) else _base(host)
    xs = list(xs)
    for x in xs:
        if x not in s.labels:
            raise UnknownLabel(x)
    if len(set(xs)) != len(xs):
        raise ValueError("entries must be distinct")
    sub = restrict(s, xs)
    if convexity_violation(sub, xs) is not None:
        raise PreconditionFailed("the tuple is not increasing in a convex order")
    cur = tree_of(sub).nested() if len(xs) > 1 else xs[0]
    for j in range(1, len(xs)):
        u, before = xs[j], xs[:j]
        nxt = _cut_step(cur, u, before)
        m = PartialMap(to_leaf_structure(RootedBinaryTree(cur)),
                       to_leaf_structure(RootedBinaryTree(nxt)), {x: x for x in xs})
        if not behaves_as(m, "cut_c", u, before):
            raise ConstructionFailed(f"step {j} does not behave as cut_{u}")
        cur = nxt
    final = to_leaf_structure(RootedBinaryTree(cur))
    if convexity_violation(final, xs) is not None:
        return False
    return nil_check(OrderedLeafStructure(final, xs), xs)


__all__ = [
    "ANCHORED", "PLAIN", "BehaviorReport", "CanonicalResult", "Check", "ConePartition",
    "PartialMap", "TupleType", "behavior_classify_anchored", "behavior_classify_plain",
    "behaves_as", "check_canonical", "cones", "cut_composition_check",
    "enumerate_tuple_types", "find_invq_split", "nil_check", "preserves_c", "preserves_q",
    "realize_behavior", "rer_equiv_q_check", "tuple_type",
]
