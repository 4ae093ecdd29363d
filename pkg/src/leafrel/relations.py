"""Finite C-relations (rooted triples) and D-relations (quartets).

A :class:`LeafStructure` stores C(a; b, c) -- read "bc|a" -- as ordered
triples ``(apex, p, q)`` with pairwise distinct entries, both ``(a, b, c)``
and ``(a, c, b)``.  Tuples with repeated entries are never stored; the
membership query :meth:`LeafStructure.holds` derives them (C(a; b, b) holds
exactly when ``a != b``).

A :class:`QuartetStructure` stores, per 4-subset of labels, the unique pairing
``{{x, y}, {u, v}}`` with D(xy, uv).  Degenerate 4-tuples are derived at
query time: D(xy, uv) with a repeated entry holds iff ``{x, y}`` and
``{u, v}`` are disjoint.

Raw relations (:class:`TernaryRelation`, :class:`QuaternaryRelation`) are
taken literally, degenerate tuples included, and are what the axiom checkers
are meant to judge before anything is trusted.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations, product

from .errors import InvalidStructure, NoSplit, UnknownLabel

UNIVERSAL_C = ("C1", "C2", "C3", "C4", "C8")
EXISTENTIAL_C = ("C5", "C6", "C7")
UNIVERSAL_D = ("D1", "D2", "D3", "D4", "D7")
EXISTENTIAL_D = ("D5", "D6")


# ---------------------------------------------------------------------------
# raw relations


@dataclass(frozen=True)
class TernaryRelation:
    """A literal ternary relation; ``(a, b, c)`` in ``tuples`` means C(a; b, c)."""

    labels: frozenset
    tuples: frozenset

    def __init__(self, labels, tuples):
        tuples = frozenset(tuple(t) for t in tuples)
        labels = frozenset(labels) | {x for t in tuples for x in t}
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "tuples", tuples)

    def holds(self, a, b, c):
        return (a, b, c) in self.tuples


@dataclass(frozen=True)
class QuaternaryRelation:
    """A literal 4-ary relation; ``(a, b, c, d)`` in ``tuples`` means D(ab, cd)."""

    labels: frozenset
    tuples: frozenset

    def __init__(self, labels, tuples):
        tuples = frozenset(tuple(t) for t in tuples)
        labels = frozenset(labels) | {x for t in tuples for x in t}
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "tuples", tuples)

    def holds(self, a, b, c, d):
        return (a, b, c, d) in self.tuples


# ---------------------------------------------------------------------------
# validated structures


class LeafStructure:
    """A finite C-relation over ``labels``.

    ``triples`` is an iterable of ``(apex, p, q)`` with distinct entries.  The
    symmetric partner ``(apex, q, p)`` is added automatically.  With
    ``check=True`` the universal axioms C1-C4 and C8 are verified and
    :class:`InvalidStructure` is raised on failure.
    """

    __slots__ = ("labels", "triples", "__weakref__")

    def __init__(self, labels, triples=(), *, check=True):
        labels = frozenset(labels)
        stored = set()
        for t in triples:
            a, b, c = t
            if len({a, b, c}) != 3:
                raise InvalidStructure(f"triple {t!r} has repeated entries")
            for x in t:
                if x not in labels:
                    raise UnknownLabel(x)
            stored.add((a, b, c))
            stored.add((a, c, b))
        self.labels = labels
        self.triples = frozenset(stored)
        if check:
            report = check_c_axioms(self)
            if not report.ok:
                axiom, witness = report.universal_violations[0]
                raise InvalidStructure(f"axiom {axiom} fails at {witness!r}")

    @classmethod
    def from_rooted_triples(cls, labels, rooted, *, check=True):
        """Build from ``(x, y, z)`` tuples meaning ``xy|z``."""
        return cls(labels, ((z, x, y) for x, y, z in rooted), check=check)

    def holds(self, a, b, c):
        """C(a; b, c), i.e. ``bc|a``."""
        if b == c:
            return a != b and a in self.labels and b in self.labels
        if a == b or a == c:
            return False
        return (a, b, c) in self.triples

    def sep(self, x, y, z):
        """``xy|z``."""
        return self.holds(z, x, y)

    def apex(self, a, b, c):
        """The element of a 3-subset that is split off from the other two."""
        for x, y, z in ((a, b, c), (b, a, c), (c, a, b)):
            if (x, y, z) in self.triples:
                return x
        return None

    def rooted_triples(self):
        """Sorted ``(x, y, z)`` with ``xy|z`` and ``x < y``."""
        return sorted((p, q, a) for a, p, q in self.triples if p < q)

    def to_raw(self):
        """The literal relation, including the degenerate tuples C(a; b, b)."""
        tuples = set(self.triples)
        for a, b in product(self.labels, repeat=2):
            if a != b:
                tuples.add((a, b, b))
        return TernaryRelation(self.labels, tuples)

    def __len__(self):
        return len(self.triples)

    def __eq__(self, other):
        if not isinstance(other, LeafStructure):
            return NotImplemented
        return self.labels == other.labels and self.triples == other.triples

    def __hash__(self):
        return hash((self.labels, self.triples))

    def __repr__(self):
        shown = ", ".join(f"{x}{y}|{z}" for x, y, z in self.rooted_triples())
        return f"LeafStructure({sorted(self.labels)}, [{shown}])"


def _pairing(x, y, u, v):
    return frozenset((frozenset((x, y)), frozenset((u, v))))


class QuartetStructure:
    """A finite D-relation: one pairing per 4-subset of ``labels``.

    ``pairings`` maps a 4-subset (any iterable) to a pair of pairs, e.g.
    ``{("a", "b", "c", "d"): (("a", "b"), ("c", "d"))}``.
    """

    __slots__ = ("labels", "pairings", "__weakref__")

    def __init__(self, labels, pairings=None, *, check=True):
        labels = frozenset(labels)
        stored = {}
        for key, pairing in (pairings or {}).items():
            key = frozenset(key)
            (x, y), (u, v) = (tuple(p) for p in pairing)
            if len(key) != 4 or {x, y, u, v} != key:
                raise InvalidStructure(f"pairing {pairing!r} does not partition {sorted(key)}")
            for lab in key:
                if lab not in labels:
                    raise UnknownLabel(lab)
            stored[key] = _pairing(x, y, u, v)
        self.labels = labels
        self.pairings = stored
        if check:
            report = check_d_axioms(self)
            if not report.ok:
                axiom, witness = report.universal_violations[0]
                raise InvalidStructure(f"axiom {axiom} fails at {witness!r}")

    @classmethod
    def from_quartets(cls, labels, quartets, *, check=True):
        """Build from ``(x, y, u, v)`` tuples meaning ``xy|uv``."""
        pairings = {}
        for x, y, u, v in quartets:
            key = frozenset((x, y, u, v))
            if len(key) != 4:
                raise InvalidStructure(f"quartet {(x, y, u, v)!r} has repeated entries")
            if key in pairings and pairings[key] != _pairing(x, y, u, v):
                raise InvalidStructure(f"two pairings given for {sorted(key)}")
            pairings[key] = _pairing(x, y, u, v)
        return cls(labels, {k: tuple(tuple(p) for p in v) for k, v in pairings.items()},
                   check=check)

    def holds(self, x, y, u, v):
        """D(xy, uv)."""
        if len({x, y, u, v}) < 4:
            return {x, y}.isdisjoint((u, v)) and all(
                lab in self.labels for lab in (x, y, u, v))
        return self.pairings.get(frozenset((x, y, u, v))) == _pairing(x, y, u, v)

    def pairing(self, *four):
        """The stored pairing of a 4-subset as a sorted pair of sorted pairs."""
        p = self.pairings.get(frozenset(four))
        if p is None:
            return None
        return tuple(sorted(tuple(sorted(q)) for q in p))

    def quartets(self):
        """Sorted ``(x, y, u, v)`` with ``xy|uv``, one per 4-subset."""
        return sorted(tuple(a + b) for a, b in
                      (tuple(sorted(tuple(sorted(q)) for q in p)) for p in self.pairings.values()))

    def to_raw(self):
        tuples = set()
        for t in product(sorted(self.labels), repeat=4):
            if self.holds(*t):
                tuples.add(t)
        return QuaternaryRelation(self.labels, tuples)

    def __len__(self):
        return len(self.pairings)

    def __eq__(self, other):
        if not isinstance(other, QuartetStructure):
            return NotImplemented
        return self.labels == other.labels and self.pairings == other.pairings

    def __hash__(self):
        return hash((self.labels, frozenset(self.pairings.items())))

    def __repr__(self):
        shown = ", ".join(f"{x}{y}|{u}{v}" for x, y, u, v in self.quartets())
        return f"QuartetStructure({sorted(self.labels)}, [{shown}])"


class OrderedLeafStructure:
    """A leaf structure with a convex linear order (given as a label sequence)."""

    __slots__ = ("structure", "order", "position")

    def __init__(self, structure, order, *, check=True):
        order = tuple(order)
        if len(order) != len(structure.labels) or set(order) != structure.labels:
            raise InvalidStructure("order must list every label exactly once")
        self.structure = structure
        self.order = order
        self.position = {x: i for i, x in enumerate(order)}
        if check:
            bad = convexity_violation(structure, order)
            if bad is not None:
                raise InvalidStructure(f"order is not convex at {bad!r}")

    @property
    def labels(self):
        return self.structure.labels

    def holds(self, a, b, c):
        return self.structure.holds(a, b, c)

    def sep(self, x, y, z):
        return self.structure.sep(x, y, z)

    def precedes(self, x, y):
        return self.position[x] < self.position[y]

    def __eq__(self, other):
        if not isinstance(other, OrderedLeafStructure):
            return NotImplemented
        return self.structure == other.structure and self.order == other.order

    def __hash__(self):
        return hash((self.structure, self.order))

    def __repr__(self):
        return f"OrderedLeafStructure({self.structure!r}, order={list(self.order)})"


def convexity_violation(s, order):
    """First ``(x, y, z)`` with x<y<z in ``order`` that is not convex, else None."""
    for x, y, z in combinations(order, 3):
        if s.sep(x, z, y) or not (s.sep(x, y, z) or s.sep(y, z, x)):
            return (x, y, z)
    return None


# ---------------------------------------------------------------------------
# axiom reports


@dataclass
class AxiomReport:
    """Outcome of an axiom or consequence check.

    ``existential_status`` maps an axiom id to ``(status, witness)`` where
    status is ``"holds"``, ``"fails"`` or ``"skipped"``.
    """

    universal_violations: list = field(default_factory=list)
    existential_status: dict = field(default_factory=dict)
    checked: tuple = ()

    @property
    def ok(self):
        return not self.universal_violations

    def violated(self):
        return {axiom for axiom, _ in self.universal_violations}

    def to_dict(self):
        return {
            "checked": list(self.checked),
            "universal_violations": [
                {"axiom": a, "witness": list(w)} for a, w in self.universal_violations],
            "existential": [
                {"axiom": a, "status": s, "witness": None if w is None else list(w)}
                for a, (s, w) in sorted(self.existential_status.items())],
            "ok": self.ok,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_text(self):
        lines = []
        violated = self.violated()
        for axiom in self.checked:
            lines.append(f"{axiom} {'violated' if axiom in violated else 'ok'}")
        for axiom, witness in self.universal_violations:
            lines.append(f"violation {axiom} {' '.join(map(str, witness))}")
        for axiom, (status, witness) in sorted(self.existential_status.items()):
            tail = "" if witness is None else " " + " ".join(map(str, witness))
            lines.append(f"{axiom} {status}{tail}")
        lines.append(f"ok: {str(self.ok).lower()}")
        return "\n".join(lines) + "\n"


def _true_tuples(member, labels, arity):
    return [t for t in product(labels, repeat=arity) if member(*t)]


def check_c_axioms(rel, mode="universal_only", limit=None):
    """Decide the C-axioms on a finite ternary relation.

    ``rel`` is a :class:`TernaryRelation` (read literally) or a
    :class:`LeafStructure` (degenerate tuples derived).  C1-C4 and C8 are
    always checked; in ``"full"`` mode the existential axioms C5-C7 are
    decided too and reported separately, never as universal violations.
    ``limit`` caps the number of witnesses kept per axiom.
    """
    if mode not in ("universal_only", "full"):
        raise ValueError(f"unknown mode {mode!r}")
    C = rel.holds
    L = sorted(rel.labels)
    report = AxiomReport(checked=UNIVERSAL_C)
    counts = {}

    def violate(axiom, witness):
        n = counts.get(axiom, 0)
        if limit is None or n < limit:
            report.universal_violations.append((axiom, witness))
        counts[axiom] = n + 1

    true = _true_tuples(C, L, 3)
    for a, b, c in true:
        if not C(a, c, b):
            violate("C1", (a, b, c))
    for a, b, c in true:
        if C(b, a, c):
            violate("C2", (a, b, c))
    for a, b, c in true:
        for d in L:
            if not (C(a, d, c) or C(d, b, c)):
                violate("C3", (a, b, c, d))
    for a, b in product(L, repeat=2):
        if a != b and not C(a, b, b):
            violate("C4", (a, b))
    for a, b, c in product(L, repeat=3):
        if not (a == b == c) and not (C(a, b, c) or C(b, a, c) or C(c, a, b)):
            violate("C8", (a, b, c))
    order = {ax: i for i, ax in enumerate(UNIVERSAL_C)}
    report.universal_violations.sort(key=lambda v: (order[v[0]], v[1]))

    if mode == "full":
        report.existential_status["C5"] = _first_failure(
            ((a, b) for a, b in product(L, repeat=2)),
            lambda a, b: any(C(c, a, b) for c in L))
        report.existential_status["C6"] = _first_failure(
            ((a, b) for a, b in product(L, repeat=2) if a != b),
            lambda a, b: any(c != b and C(a, b, c) for c in L))
        report.existential_status["C7"] = _first_failure(
            ((c, a, b) for c, a, b in true),
            lambda c, a, b: any(C(c, e, b) and C(e, a, b) for e in L))
    else:
        for ax in EXISTENTIAL_C:
            report.existential_status[ax] = ("skipped", None)
    return report


def _first_failure(cases, has_witness):
    for case in cases:
        if not has_witness(*case):
            return ("fails", case)
    return ("holds", None)


def check_d_axioms(rel, mode="universal_only", limit=None):
    """Decide the D-axioms on a finite 4-ary relation.

    Universal D1-D4 and D7 always; existential D5 and D6 in ``"full"`` mode.
    """
    if mode not in ("universal_only", "full"):
        raise ValueError(f"unknown mode {mode!r}")
    D = rel.holds
    L = sorted(rel.labels)
    report = AxiomReport(checked=UNIVERSAL_D)
    counts = {}

    def violate(axiom, witness):
        n = counts.get(axiom, 0)
        if limit is None or n < limit:
            report.universal_violations.append((axiom, witness))
        counts[axiom] = n + 1

    true = _true_tuples(D, L, 4)
    for a, b, c, d in true:
        if not (D(b, a, c, d) and D(a, b, d, c) and D(c, d, a, b)):
            violate("D1", (a, b, c, d))
    for a, b, c, d in true:
        if D(a, c, b, d):
            violate("D2", (a, b, c, d))
    for a, b, c, d in true:
        for e in L:
            if not (D(e, b, c, d) or D(a, b, c, e)):
                violate("D3", (a, b, c, d, e))
    for a, b, c in product(L, repeat=3):
        if a != c and b != c and not D(a, b, c, c):
            violate("D4", (a, b, c))
    for a, b, c, d in product(L, repeat=4):
        if len({a, b, c, d}) >= 3 and not (D(a, b, c, d) or D(a, c, b, d) or D(a, d, b, c)):
            violate("D7", (a, b, c, d))
    order = {ax: i for i, ax in enumerate(UNIVERSAL_D)}
    report.universal_violations.sort(key=lambda v: (order[v[0]], v[1]))

    if mode == "full":
        report.existential_status["D5"] = _first_failure(
            ((a, b, c) for a, b, c in product(L, repeat=3) if len({a, b, c}) == 3),
            lambda a, b, c: any(d not in (a, b, c) and D(a, b, c, d) for d in L))
        report.existential_status["D6"] = _first_failure(
            iter(true),
            lambda a, b, c, d: any(D(e, b, c, d) and D(a, e, c, d) and D(a, b, e, d)
                                   and D(a, b, c, e) for e in L))
    else:
        for ax in EXISTENTIAL_D:
            report.existential_status[ax] = ("skipped", None)
    return report


def check_c_consequences(s):
    """Check the three derived implications of the C-axioms on every 4-tuple."""
    C = s.holds
    L = sorted(s.labels)
    report = AxiomReport(checked=("C-cons1", "C-cons2", "C-cons3"))
    bad = report.universal_violations
    for x, y, z, t in product(L, repeat=4):
        if C(x, y, z) and C(x, y, t) and not C(x, z, t):
            bad.append(("C-cons1", (x, y, z, t)))
    for x, y, z, t in product(L, repeat=4):
        if C(x, z, t) and C(z, x, y) and not (C(t, x, y) and C(y, z, t)):
            bad.append(("C-cons2", (x, y, z, t)))
    for x, y, z, t in product(L, repeat=4):
        if C(z, x, y) and C(y, x, t) and not (C(z, y, t) and C(z, x, t)):
            bad.append(("C-cons3", (x, y, z, t)))
    return report


def check_d_consequences(s):
    """Check the two derived implications of the D-axioms on every 5-tuple."""
    D = s.holds
    L = sorted(s.labels)
    report = AxiomReport(checked=("D-cons1", "D-cons2"))
    bad = report.universal_violations
    true = _true_tuples(D, L, 4)
    for x, y, z, u in true:
        for v in L:
            if D(x, y, z, v) and not D(x, y, u, v):
                bad.append(("D-cons1", (x, y, z, u, v)))
    for x, y, z, u in true:
        for v in L:
            left = D(x, y, z, u) and D(x, v, z, u) and D(y, v, z, u)
            right = D(x, y, z, u) and D(x, y, z, v) and D(x, y, u, v)
            if not (left or right):
                bad.append(("D-cons2", (x, y, z, u, v)))
    return report


# ---------------------------------------------------------------------------
# splitting


def _require(s, labels):
    for x in labels:
        if x not in s.labels:
            raise UnknownLabel(x)


def separated_sets(s, s1, s2):
    """``S1|S2`` at relation level: ``xx'|y`` and ``x|yy'`` across the sets."""
    s1, s2 = list(s1), list(s2)
    return (all(s.sep(x1, x2, y) for x1 in s1 for x2 in s1 for y in s2)
            and all(s.sep(y1, y2, x) for y1 in s2 for y2 in s2 for x in s1))


def c_split_holds(s, a, b):
    """C(A, B): each element of A is split off from every pair of B and vice versa."""
    return separated_sets(s, a, b)


def find_split(s, y):
    """Split ``y`` (size >= 2) into non-empty A, B with C(A, B).

    Elements are inserted one at a time in sorted order, following the three
    cases of the inductive splitting argument.
    """
    y = sorted(set(y))
    _require(s, y)
    if len(y) < 2:
        raise ValueError("need at least two labels to split")
    a_part, b_part = {y[0]}, {y[1]}
    for new in y[2:]:
        a1, b1 = min(a_part), min(b_part)
        if s.holds(new, a1, b1):
            a_part, b_part = {new}, a_part | b_part
        elif s.holds(b1, new, a1):
            a_part = a_part | {new}
        elif s.holds(a1, new, b1):
            b_part = b_part | {new}
        else:
            raise NoSplit(f"no orientation for {(new, a1, b1)!r}")
    a_part, b_part = frozenset(a_part), frozenset(b_part)
    if not c_split_holds(s, a_part, b_part):
        raise NoSplit(f"C({sorted(a_part)}, {sorted(b_part)}) fails")
    return a_part, b_part


def partition_from_anchor(s, u, c):
    """Order a partition U1..Uk of ``u`` with ``({c} | U1 | ... U(i-1)) | Ui``."""
    u = frozenset(u)
    _require(s, u | {c})
    if c in u:
        raise ValueError("anchor must not lie in the set")
    if not u:
        return []
    if separated_sets(s, {c}, u):
        return [u]
    v, w = find_split(s, u)
    if separated_sets(s, v | {c}, w):
        return partition_from_anchor(s, v, c) + [w]
    if separated_sets(s, v, w | {c}):
        return partition_from_anchor(s, w, c) + [v]
    raise NoSplit("anchor is separated from neither side of the split")


# ---------------------------------------------------------------------------
# derived relations


def q_formula(s, x, y, u, v):
    """``(xy|u and xy|v) or (x|uv and y|uv)`` over a C-relation."""
    return (s.sep(x, y, u) and s.sep(x, y, v)) or (s.sep(u, v, x) and s.sep(u, v, y))


def c_to_q(s):
    """The quartet relation defined from C, one pairing per 4-subset."""
    pairings = {}
    for w, x, y, z in combinations(sorted(s.labels), 4):
        found = [p for p in (((w, x), (y, z)), ((w, y), (x, z)), ((w, z), (x, y)))
                 if q_formula(s, *p[0], *p[1])]
        if len(found) != 1:
            raise InvalidStructure(f"{len(found)} pairings on {(w, x, y, z)!r}")
        pairings[(w, x, y, z)] = found[0]
    return QuartetStructure(s.labels, pairings, check=False)


def restrict(s, subset):
    """The induced substructure on ``subset``."""
    subset = frozenset(subset)
    _require(s, subset)
    if isinstance(s, OrderedLeafStructure):
        inner = restrict(s.structure, subset)
        return OrderedLeafStructure(inner, [x for x in s.order if x in subset], check=False)
    if isinstance(s, LeafStructure):
        return LeafStructure(subset, (t for t in s.triples if subset.issuperset(t)),
                             check=False)
    if isinstance(s, QuartetStructure):
        return QuartetStructure(
            subset,
            {k: tuple(tuple(q) for q in p) for k, p in s.pairings.items() if k <= subset},
            check=False)
    raise TypeError(f"cannot restrict {type(s).__name__}")
