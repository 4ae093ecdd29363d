import random
from itertools import combinations, permutations

import pytest

from leafrel.errors import Inconsistent, InconsistentType, NotAmalgamable, UnknownLabel
from leafrel.morphisms import PartialMap, preserves_c
from leafrel.reconstruct import (amalgamate, build_from_triples, canonical_form,
                                 extend_one_point, is_isomorphic, reroot_relation)
from leafrel.relations import LeafStructure, QuartetStructure, check_c_axioms, restrict
from leafrel.solvers import random_tree
from leafrel.trees import (RootedBinaryTree, enumerate_trees, parse_newick, reroot_tree,
                           to_leaf_structure, to_quartets)

import oracles


def s_of(text):
    return to_leaf_structure(parse_newick(text))


def brute_consistent(labels, triples):
    want = set((min(a, b), max(a, b), c) for a, b, c in triples)
    return any(want <= oracles.rooted_triples(n) for n in oracles.all_nested(labels))


def test_build_examples():
    assert build_from_triples("abc", [("a", "b", "c")]) == parse_newick("((a,b),c);")
    with pytest.raises(Inconsistent):
        build_from_triples("abc", [("a", "b", "c"), ("b", "c", "a")])
    with pytest.raises(UnknownLabel):
        build_from_triples("abc", [("a", "b", "z")])
    assert len(build_from_triples("abcd", [])) == 4


def test_build_left_comb_binarization():
    # no constraints: blocks {a},{b},{c} combed left in sorted order
    assert build_from_triples("abc", []).nested() == (("a", "b"), "c")


@pytest.mark.parametrize("n", range(3, 7))
def test_round_trip(n):
    for t in enumerate_trees("abcdef"[:n]):
        s = to_leaf_structure(t)
        back = build_from_triples(s.labels, s.rooted_triples())
        assert back == t
        assert is_isomorphic(to_leaf_structure(back), s)


def test_round_trip_random_up_to_nine():
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randint(7, 9)
        t = random_tree("abcdefghi"[:n], rng)
        s = to_leaf_structure(t)
        assert build_from_triples(s.labels, s.rooted_triples()) == t


def universe(labels):
    return [(a, b, c) for a, b in combinations(labels, 2) for c in labels if c not in (a, b)]


def test_build_agrees_with_brute_force_small_universes():
    for labels in ("abc", "abcd"):
        uni = universe(labels)
        for mask in range(1 << len(uni)):
            chosen = [t for i, t in enumerate(uni) if mask >> i & 1]
            try:
                build_from_triples(labels, chosen)
                got = True
            except Inconsistent:
                got = False
            assert got == brute_consistent(labels, chosen), chosen


def test_build_agrees_with_brute_force_random_five():
    rng = random.Random(2024)
    uni = universe("abcde")
    for _ in range(1000):
        chosen = rng.sample(uni, rng.randint(1, 12))
        try:
            tree = build_from_triples("abcde", chosen)
        except Inconsistent:
            tree = None
        assert (tree is not None) == brute_consistent("abcde", chosen)
        if tree is not None:
            s = to_leaf_structure(tree)
            assert all(s.sep(*t) for t in chosen)


def test_amalgam_examples():
    b1 = LeafStructure.from_rooted_triples("abx", [("a", "b", "x")])
    b2 = LeafStructure.from_rooted_triples("aby", [("a", "b", "y")])
    t = to_leaf_structure(amalgamate(b1, b2))
    assert restrict(t, "abx") == b1 and restrict(t, "aby") == b2
    d1, d2 = s_of("((a,b),c);"), s_of("(x,y);")
    t = to_leaf_structure(amalgamate(d1, d2))
    assert restrict(t, "abc") == d1 and restrict(t, "xy") == d2
    assert amalgamate(d1, d1) == parse_newick("((a,b),c);")
    with pytest.raises(NotAmalgamable):
        amalgamate(s_of("((a,b),c);"), s_of("((a,c),b);"))


def amalgam_pairs():
    pool1, fresh = "abcd", "wxyz"
    for k1 in range(1, 5):
        x1 = pool1[:k1]
        for k2 in range(1, 5):
            for o in range(0, min(k1, k2, 3) + 1):
                for shared in combinations(x1, o):
                    x2 = "".join(shared) + fresh[:k2 - o]
                    yield x1, x2


def test_amalgam_exhaustive_small():
    checked = 0
    for x1, x2 in amalgam_pairs():
        for t1 in enumerate_trees(x1):
            b1 = to_leaf_structure(t1)
            for t2 in enumerate_trees(x2):
                b2 = to_leaf_structure(t2)
                common = set(x1) & set(x2)
                if restrict(b1, common) != restrict(b2, common):
                    with pytest.raises(NotAmalgamable):
                        amalgamate(b1, b2)
                    continue
                s = to_leaf_structure(amalgamate(b1, b2))
                assert s.labels == set(x1) | set(x2)
                assert restrict(s, x1) == b1 and restrict(s, x2) == b2
                checked += 1
    assert checked > 1000


def test_reroot_relation_examples():
    assert reroot_relation(to_quartets(parse_newick("(((a,b),c),d);")), "d") == s_of("((a,b),c);")
    assert reroot_relation(to_quartets(parse_newick("((a,b),(c,d));")), "a") == s_of("(b,(c,d));")
    empty = reroot_relation(QuartetStructure("abc"), "a")
    assert empty.labels == {"b", "c"} and not empty.triples
    with pytest.raises(UnknownLabel):
        reroot_relation(QuartetStructure("abc"), "q")


@pytest.mark.parametrize("n", range(3, 7))
def test_rerooting_coherence(n):
    for t in enumerate_trees("abcdef"[:n]):
        q = to_quartets(t)
        for c in t.labels:
            r = reroot_relation(q, c)
            assert r == to_leaf_structure(reroot_tree(t, c))
            assert check_c_axioms(r).ok


def test_reroot_can_change_c_but_not_q():
    changed = 0
    for t in enumerate_trees("abcde"):
        s, q = to_leaf_structure(t), to_quartets(t)
        for c in t.labels:
            r = reroot_tree(t, c)
            rest = t.labels - {c}
            assert to_quartets(r) == restrict(q, rest)
            changed += to_leaf_structure(r) != restrict(s, rest)
    assert changed > 0


def test_extend_one_point_example():
    host = parse_newick("(p,q);")
    f = PartialMap(s_of("(a,b);"), to_leaf_structure(host), {"a": "p", "b": "q"})
    new_host, g = extend_one_point(host, f, "x", [("a", "b", "x")], new_label="r")
    assert new_host == parse_newick("((p,q),r);")
    assert g("x") == "r" and preserves_c(g)


def test_extend_one_point_empty_domain():
    host = parse_newick("((p,q),s);")
    empty = PartialMap(LeafStructure(()), to_leaf_structure(host), {})
    new_host, g = extend_one_point(host, empty, "x")
    assert len(new_host) == 4 and preserves_c(g)


def test_extend_one_point_inconsistent_type():
    host = parse_newick("((p,q),s);")
    f = PartialMap(s_of("((a,b),c);"), to_leaf_structure(host), {"a": "p", "b": "q", "c": "s"})
    with pytest.raises(InconsistentType):
        # ax|b puts x with a, ab|c keeps a,b together, xc|a contradicts both
        extend_one_point(host, f, "x", [("a", "x", "b"), ("x", "c", "a")])


def test_extend_one_point_iterated():
    rng = random.Random(11)
    for trial in range(40):
        target = random_tree("abcdef", rng)
        ts = to_leaf_structure(target)
        order = rng.sample("abcdef", 6)
        host = parse_newick("h0;")
        f = PartialMap(restrict(ts, order[:1]), to_leaf_structure(host), {order[0]: "h0"})
        for i, a in enumerate(order[1:], 1):
            dom = order[:i]
            a_type = [t for t in ts.rooted_triples() if a in t and set(t) <= set(dom) | {a}]
            host, f = extend_one_point(host, f, a, a_type, new_label=f"h{i}")
            assert len(host) == i + 1
            assert preserves_c(f)
        assert f.source == ts
        assert is_isomorphic(ts, to_leaf_structure(host))


def test_isomorphism_examples():
    r = is_isomorphic(s_of("((a,b),c);"), s_of("((x,y),z);"))
    assert r.verdict == "isomorphic" and r.witness["c"] == "z"
    assert is_isomorphic(s_of("((a,b),(c,d));"), s_of("(((a,b),c),d);")).verdict == "not_isomorphic"
    s = s_of("((a,b),(c,(d,e)));")
    r = is_isomorphic(s, s)
    moved = {(r.witness[a], r.witness[b], r.witness[c]) for a, b, c in s.triples}
    assert moved == s.triples


def test_isomorphism_matches_brute_force():
    trees = list(enumerate_trees("abcd"))
    for t1 in trees:
        s1 = to_leaf_structure(t1)
        for t2 in trees:
            s2 = to_leaf_structure(t2)
            brute = any({(p[a], p[b], p[c]) for a, b, c in s1.triples} == s2.triples
                        for p in (dict(zip("abcd", perm)) for perm in permutations("abcd")))
            assert bool(is_isomorphic(s1, s2)) == brute


def wedderburn_etherington(n):
    w = [0, 1]
    for m in range(2, n + 1):
        total = sum(w[i] * w[m - i] for i in range(1, (m + 1) // 2))
        if m % 2 == 0:
            total += w[m // 2] * (w[m // 2] + 1) // 2
        w.append(total)
    return w[n]


def test_canonical_form_examples():
    trees = list(enumerate_trees("abc"))
    keys = {canonical_form(to_leaf_structure(t)) for t in trees}
    shapes = {canonical_form(to_leaf_structure(t), labeled=False) for t in trees}
    assert len(keys) == 3 and len(shapes) == 1
    single = canonical_form(to_leaf_structure(RootedBinaryTree("a")))
    assert single == canonical_form(to_leaf_structure(RootedBinaryTree("a")))


def automorphisms(nested):
    if not isinstance(nested, tuple):
        return 1
    a, b = nested
    same = RootedBinaryTree(a).canonical_key(False) == RootedBinaryTree(b).canonical_key(False)
    return automorphisms(a) * automorphisms(b) * (2 if same else 1)


@pytest.mark.parametrize("n", range(1, 8))
def test_shape_keys_count_unlabeled_shapes(n):
    labels = "abcdefg"[:n]
    by_shape = {}
    for t in enumerate_trees(labels):
        by_shape.setdefault(canonical_form(to_leaf_structure(t), labeled=False), []).append(t)
    assert len(by_shape) == wedderburn_etherington(n)
    fact = 1
    for i in range(2, n + 1):
        fact *= i
    # orbit-stabilizer: each shape class has n!/|Aut| labelings
    for members in by_shape.values():
        assert len(members) == fact // automorphisms(members[0].nested())


def test_amalgam_recursion_alone_on_larger_inputs():
    from leafrel.reconstruct import _amalg, tree_of
    rng = random.Random(5)
    labels = "abcdefghijkl"
    for _ in range(300):
        big = to_leaf_structure(random_tree(labels, rng))
        x1 = rng.sample(labels, rng.randint(2, 8))
        x2 = rng.sample(labels, rng.randint(2, 8))
        b1, b2 = restrict(big, x1), restrict(big, x2)
        t = RootedBinaryTree(_amalg(tree_of(b1).nested(), tree_of(b2).nested(), {}))
        s = to_leaf_structure(t)
        assert restrict(s, x1) == b1 and restrict(s, x2) == b2
