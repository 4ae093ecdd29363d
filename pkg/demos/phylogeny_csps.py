"""The three consistency problems on generated instances."""

from leafrel import format_newick, generate_instance
from leafrel.solvers import brute_force_verdict, solve

for kind in ("triples", "quartets", "forbidden_triples"):
    for noise in (0.0, 0.3):
        inst = generate_instance(kind, 7, noise=noise, seed=11)
        sol = solve(inst)
        tree = format_newick(sol.tree) if sol.tree else "-"
        print(f"{kind:18s} noise={noise:.1f} constraints={len(inst.constraints):3d} "
              f"{sol.verdict:13s} {tree}")

inst = generate_instance("quartets", 6, noise=0.5, seed=2)
print("search agrees with plain enumeration:", solve(inst).verdict == brute_force_verdict(inst))
