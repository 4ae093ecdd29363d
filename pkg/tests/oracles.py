"""Reference computations for the tests, deliberately naive.

Everything here works from cluster sets (the leaf sets below each node of a
nested-tuple tree) instead of the node paths used by the library.
"""

from itertools import combinations, permutations


def leaves(nested):
    if isinstance(nested, tuple):
        return leaves(nested[0]) | leaves(nested[1])
    return frozenset((nested,))


def clusters(nested):
    out = [leaves(nested)]
    if isinstance(nested, tuple):
        out += clusters(nested[0]) + clusters(nested[1])
    return out


def rooted_triples(nested):
    """{(x, y, z)}: xy|z iff some cluster holds x, y but not z (x < y)."""
    cl = clusters(nested)
    labs = sorted(leaves(nested))
    out = set()
    for x, y in combinations(labs, 2):
        for z in labs:
            if z not in (x, y) and any(x in k and y in k and z not in k for k in cl):
                out.add((x, y, z))
    return out


def quartet_pairings(nested):
    """{4-set: pairing} where some edge (cluster) splits one pair from the other."""
    cl = clusters(nested)
    out = {}
    for four in combinations(sorted(leaves(nested)), 4):
        w, x, y, z = four
        for p, q in (((w, x), (y, z)), ((w, y), (x, z)), ((w, z), (x, y))):
            for k in cl:
                if (set(p) <= k and not set(q) & k) or (set(q) <= k and not set(p) & k):
                    out[frozenset(four)] = frozenset((frozenset(p), frozenset(q)))
    return out


def all_nested(labels):
    """Every tree on ``labels``: split off the block holding the smallest label."""
    labels = sorted(labels)
    if len(labels) == 1:
        yield labels[0]
        return
    first, rest = labels[0], labels[1:]
    for r in range(len(rest)):
        for extra in combinations(rest, r):
            left = [first, *extra]
            right = [x for x in rest if x not in extra]
            for a in all_nested(left):
                for b in all_nested(right):
                    yield (a, b)


def is_convex_by_intervals(nested, order, cl=None):
    """An order is convex iff every cluster is a contiguous block."""
    pos = {x: i for i, x in enumerate(order)}
    for k in cl or clusters(nested):
        idx = sorted(pos[x] for x in k)
        if idx[-1] - idx[0] + 1 != len(idx):
            return False
    return True


def count_convex_pairs(k):
    """Number of (tree, order) pairs on k points with the order convex."""
    pts = list(range(k))
    total = 0
    for nested in all_nested(pts):
        cl = [c for c in clusters(nested) if len(c) > 1]
        for order in permutations(pts):
            if is_convex_by_intervals(nested, order, cl):
                total += 1
    return total


def double_factorial(n):
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def yca_by_clusters(nested, names):
    """Smallest cluster containing ``names``."""
    return min((k for k in clusters(nested) if set(names) <= k), key=len)


def separated_by_clusters(nested, s1, s2):
    a, b = yca_by_clusters(nested, s1), yca_by_clusters(nested, s2)
    return not (a <= b or b <= a)


def brute_satisfiable(labels, test):
    return any(test(n) for n in all_nested(labels))


def lcp(u, v):
    n = 0
    for a, b in zip(u, v):
        if a != b:
            break
        n += 1
    return n


def lcp_triples(words):
    """xy|z iff lcp(x, y) is longer than lcp(x, z)."""
    out = set()
    for x, y in combinations(sorted(words), 2):
        for z in words:
            if z not in (x, y) and lcp(words[x], words[y]) > lcp(words[x], words[z]):
                out.add((x, y, z))
    return out
