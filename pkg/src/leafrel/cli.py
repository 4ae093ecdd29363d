"""Command line entry point: ``leafrel <command> ...``.

Inputs are file paths or ``-`` (standard input, the default).  Exit status
is 0 on success, 1 for negative domain verdicts (inconsistent, unsatisfiable,
axiom violations, no matching behavior) and 2 for usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from itertools import product

from .errors import Inconsistent, LeafRelError, NotAmalgamable
from .formats import (format_instance, format_quartets, format_triples, parse_instance,
                      parse_map, parse_quartets, parse_triples)
from .morphisms import (PartialMap, behavior_classify_anchored, behavior_classify_plain,
                        enumerate_tuple_types)
from .reconstruct import amalgamate, build_from_triples
from .relations import (QuaternaryRelation, TernaryRelation, check_c_axioms,
                        check_d_axioms)
from .solvers import Instance, generate_instance, solve_forbidden_triples, solve_quartets
from .trees import (convex_order_dfs, convex_orders, enumerate_trees, format_newick,
                    parse_newick, reroot_tree, to_leaf_structure, to_quartets)


class UsageError(Exception):
    pass


def _read(path, stdin):
    if path in (None, "-"):
        return stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _tree(text):
    return parse_newick(text.strip())


def _labels_of(constraints, extra=None):
    out = set(extra or ())
    for c in constraints:
        for part in c:
            out.update(part if isinstance(part, tuple) else (part,))
    return sorted(out)


def raw_ternary(rooted, labels=None):
    """Literal relation from ``xy|z`` lines: both orientations plus C(a; b, b)."""
    labels = _labels_of(rooted, labels)
    tuples = set()
    for x, y, z in rooted:
        tuples.update({(z, x, y), (z, y, x)})
    tuples.update((a, b, b) for a, b in product(labels, repeat=2) if a != b)
    return TernaryRelation(labels, tuples)


def raw_quaternary(quartets, labels=None):
    """Literal relation from ``xy|uv`` lines closed under the pair symmetries,
    plus the degenerate tuples with disjoint pairs."""
    labels = _labels_of(quartets, labels)
    tuples = set()
    for (x, y), (u, v) in quartets:
        for a, b in ((x, y), (y, x)):
            for c, d in ((u, v), (v, u)):
                tuples.update({(a, b, c, d), (c, d, a, b)})
    for t in product(labels, repeat=4):
        if len(set(t)) < 4 and not {t[0], t[1]} & {t[2], t[3]}:
            tuples.add(t)
    return QuaternaryRelation(labels, tuples)


def _relation_input(text, kind):
    """Axiom-check input: a Newick tree or a triple/quartet file."""
    if text.lstrip().startswith("("):
        tree = _tree(text)
        rel = to_leaf_structure(tree) if kind == "c" else to_quartets(tree)
        return rel.to_raw()
    if kind == "c":
        return raw_ternary(parse_triples(text))
    return raw_quaternary(parse_quartets(text))


def _emit(out, args, payload, text):
    if args.json:
        out.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        out.write(text)


# ---------------------------------------------------------------------------
# commands


def cmd_check(args, out, stdin, kind):
    rel = _relation_input(_read(args.input, stdin), kind)
    check = check_c_axioms if kind == "c" else check_d_axioms
    report = check(rel, mode=args.mode, limit=args.limit)
    _emit(out, args, report.to_dict(), report.to_text())
    return 0 if report.ok else 1


def cmd_triples(args, out, stdin):
    s = to_leaf_structure(_tree(_read(args.input, stdin)))
    rows = s.rooted_triples()
    _emit(out, args, {"triples": [list(t) for t in rows]}, format_triples(rows))
    return 0


def cmd_quartets(args, out, stdin):
    q = to_quartets(_tree(_read(args.input, stdin)))
    rows = [((a, b), (c, d)) for a, b, c, d in q.quartets()]
    _emit(out, args, {"quartets": [[list(p), list(r)] for p, r in rows]},
          format_quartets(rows))
    return 0


def cmd_build(args, out, stdin):
    triples = parse_triples(_read(args.input, stdin))
    labels = _labels_of(triples, args.labels.split(",") if args.labels else None)
    if not labels:
        raise UsageError("no labels given")
    try:
        tree = build_from_triples(labels, triples)
    except Inconsistent:
        _emit(out, args, {"verdict": "inconsistent", "tree": None}, "Inconsistent\n")
        return 1
    nwk = format_newick(tree)
    _emit(out, args, {"verdict": "consistent", "tree": nwk}, nwk + "\n")
    return 0


def _instance(text, kind):
    if text.lstrip().lower().startswith("kind:"):
        got, labels, constraints = parse_instance(text)
        if got != kind:
            raise UsageError(f"expected a {kind} instance, got {got}")
        return Instance.from_constraints(kind, constraints, labels)
    parse = parse_quartets if kind == "quartets" else parse_triples
    return Instance.from_constraints(kind, parse(text))


def cmd_solve(args, out, stdin, kind):
    inst = _instance(_read(args.input, stdin), kind)
    solver = solve_quartets if kind == "quartets" else solve_forbidden_triples
    sol = solver(inst, max_labels=args.max_labels)
    _emit(out, args, sol.to_dict(), sol.to_text())
    return 0 if sol.satisfiable else 1


def cmd_amalgam(args, out, stdin):
    t1 = _tree(_read(args.first, stdin))
    t2 = _tree(_read(args.second, stdin))
    try:
        tree = amalgamate(to_leaf_structure(t1), to_leaf_structure(t2))
    except NotAmalgamable as exc:
        _emit(out, args, {"verdict": "not_amalgamable", "tree": None},
              f"NotAmalgamable: {exc}\n")
        return 1
    nwk = format_newick(tree)
    _emit(out, args, {"verdict": "amalgamable", "tree": nwk}, nwk + "\n")
    return 0


def cmd_reroot(args, out, stdin):
    tree = reroot_tree(_tree(_read(args.input, stdin)), args.leaf)
    nwk = format_newick(tree)
    _emit(out, args, {"tree": nwk}, nwk + "\n")
    return 0


def cmd_convex(args, out, stdin):
    tree = _tree(_read(args.input, stdin))
    if args.all:
        orders = [list(o) for o in convex_orders(tree)]
        if args.last is not None:
            orders = [o for o in orders if o[-1] == args.last]
    else:
        orders = [convex_order_dfs(tree, last=args.last)]
    _emit(out, args, {"orders": orders}, "".join(" ".join(o) + "\n" for o in orders))
    return 0


def cmd_orbits(args, out, stdin):
    n = len(enumerate_tuple_types(args.k, ordered=not args.unordered, bound=args.bound))
    _emit(out, args, {"k": args.k, "ordered": not args.unordered, "types": n}, f"{n}\n")
    return 0


def cmd_behavior(args, out, stdin):
    src, dst = _tree(_read(args.source, stdin)), _tree(_read(args.target, stdin))
    mapping, constants = parse_map(_read(args.map, stdin))
    anchor = args.anchor or (constants[0] if constants else None)
    subset = args.set.split(",") if args.set else None
    if anchor is None:
        m = PartialMap.between_trees(src, dst, mapping, ordered=True)
        report = behavior_classify_plain(m, subset)
    else:
        m = PartialMap.between_trees(src, dst, mapping)
        report = behavior_classify_anchored(m, anchor, subset)
    _emit(out, args, report.to_dict(), report.to_text())
    return 0 if report.verdict != "none" else 1


def cmd_enumerate(args, out, stdin):
    if args.labels:
        labels = args.labels.split(",")
    else:
        labels = [chr(ord("a") + i) for i in range(args.n)] if args.n <= 26 else \
            [f"x{i}" for i in range(args.n)]
    if len(labels) != args.n:
        raise UsageError("--labels must list exactly n labels")
    trees = enumerate_trees(labels, bound=args.bound)
    if args.shapes:
        seen = []
        for t in trees:
            key = t.canonical_key(labeled=False)
            if key not in seen:
                seen.append(key)
        rows = sorted(seen)
    else:
        rows = [format_newick(t) for t in trees]
    _emit(out, args, {"n": args.n, "count": len(rows), "trees": rows},
          "".join(r + "\n" for r in rows))
    return 0


def cmd_generate(args, out, stdin):
    inst = generate_instance(args.kind, args.n, planted=args.planted, noise=args.noise,
                             seed=args.seed, size=args.size)
    payload = {"kind": inst.kind, "labels": list(inst.labels),
               "constraints": [list(map(list, c)) if inst.kind == "quartets" else list(c)
                               for c in inst.constraints],
               "planted": format_newick(inst.planted)}
    _emit(out, args, payload, format_instance(inst.kind, inst.labels, inst.constraints))
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser():
    p = argparse.ArgumentParser(prog="leafrel", description=__doc__.splitlines()[0])
    p.add_argument("--json", action="store_true", help="JSON output")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, fn, help_text, inp=True):
        sp = sub.add_parser(name, help=help_text, description=help_text)
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="JSON output")
        if inp:
            sp.add_argument("input", nargs="?", default="-", help="file or - for stdin")
        sp.set_defaults(func=fn)
        return sp

    for kind in ("c", "d"):
        sp = add(f"check-{kind}", lambda a, o, i, k=kind: cmd_check(a, o, i, k),
                 f"check the {kind.upper()}-axioms on a tree or relation file")
        sp.add_argument("--mode", choices=("universal_only", "full"),
                        default="universal_only")
        sp.add_argument("--limit", type=int, default=None,
                        help="max witnesses kept per axiom")
    add("triples", cmd_triples, "rooted triples of a Newick tree")
    add("quartets", cmd_quartets, "quartets of a Newick tree")
    sp = add("build", cmd_build, "tree from a triple file (BUILD)")
    sp.add_argument("--labels", help="comma-separated extra labels")
    for name, kind in (("solve-quartets", "quartets"), ("solve-forbidden", "forbidden_triples")):
        sp = add(name, lambda a, o, i, k=kind: cmd_solve(a, o, i, k),
                 f"brute-force {kind.replace('_', ' ')} consistency")
        sp.add_argument("--max-labels", type=int, default=9)
    sp = add("amalgam", cmd_amalgam, "amalgamate two Newick trees", inp=False)
    sp.add_argument("first")
    sp.add_argument("second")
    sp = add("reroot", cmd_reroot, "remove a leaf and hang the tree from its position")
    sp.add_argument("--leaf", required=True)
    sp = add("convex", cmd_convex, "convex leaf orders")
    sp.add_argument("--last", help="leaf that must come last")
    sp.add_argument("--all", action="store_true", help="list every convex order")
    sp = add("orbits", cmd_orbits, "number of k-tuple types", inp=False)
    sp.add_argument("k", type=int)
    sp.add_argument("--unordered", action="store_true", help="ignore the order")
    sp.add_argument("--bound", type=int, default=6)
    sp = add("behavior", cmd_behavior, "classify the behavior of a map", inp=False)
    sp.add_argument("--source", required=True, help="Newick source tree")
    sp.add_argument("--target", required=True, help="Newick target tree")
    sp.add_argument("--map", required=True, help="map file ('src -> dst', '@const c')")
    sp.add_argument("--anchor", help="anchor label (anchored behaviors)")
    sp.add_argument("--set", help="comma-separated subset A")
    sp = add("enumerate", cmd_enumerate, "all trees on n labels", inp=False)
    sp.add_argument("n", type=int)
    sp.add_argument("--labels", help="comma-separated labels")
    sp.add_argument("--shapes", action="store_true", help="unlabeled shapes only")
    sp.add_argument("--bound", type=int, default=9)
    sp = add("generate", cmd_generate, "random instance file", inp=False)
    sp.add_argument("kind", choices=("triples", "quartets", "forbidden"))
    sp.add_argument("n", type=int)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--noise", type=float, default=0.0)
    sp.add_argument("--planted", choices=("random", "caterpillar"), default="random")
    sp.add_argument("--size", type=int, default=None)
    return p


def run(argv=None, stdout=None, stdin=None, stderr=None):
    out = stdout or sys.stdout
    inp = stdin or sys.stdin
    err = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out, inp)
    except (UsageError, LeafRelError, ValueError, KeyError) as exc:
        err.write(f"error: {exc}\n")
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
