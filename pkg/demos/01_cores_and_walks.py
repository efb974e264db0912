"""
Coreness shells and core-biased walks
=====================================

Peel the Les Misérables co-appearance graph into k-core shells, look at
one transition distribution by hand, then sample a walk corpus.
"""

import numpy as np

from core2vec import WalkParams, generate_walks, kcore_fast, les_miserables, transition_weights

g = les_miserables()
print(g.summary())

# each node gets the largest k whose k-core still contains it
cores = kcore_fast(g)
for k, members in sorted(cores.shells.items()):
    names = ", ".join(g.labels[v] for v in members[:4])
    print(f"shell {k:2d}: {len(members):2d} nodes  e.g. {names}")

# a step from Myriel into Valjean: compare the plain and core-biased rules
prev, curr = g.id_of("Myriel"), g.id_of("Valjean")
nbrs = g.neighbors(curr)[0]
biased = transition_weights(g, cores, WalkParams(), prev, curr)
plain = transition_weights(g, cores, WalkParams.degenerate(), prev, curr)
print(f"\nfrom Myriel -> Valjean (core {cores.core_of[curr]}):")
print(f"{'next':>16} {'core':>4} {'plain':>7} {'biased':>7}")
for v, a, b in sorted(zip(nbrs, plain, biased), key=lambda t: -t[2])[:8]:
    print(f"{g.labels[v]:>16} {cores.core_of[v]:>4} {a:7.3f} {b:7.3f}")

# the penalty keeps walks inside a shell more often
for name, wp in (("plain", WalkParams.degenerate(seed=1)), ("biased", WalkParams(seed=1))):
    corpus = generate_walks(g, cores, wp)
    steps = [(w[i], w[i + 1]) for w in corpus for i in range(len(w) - 1)]
    same = np.mean([cores.core_of[a] == cores.core_of[b] for a, b in steps])
    print(f"{name:>6}: {len(corpus)} walks, {same:.1%} of steps stay in the same shell")
