# # Trees, machines and running one on the other

import random

from polyrun import cofree as C
from polyrun import free as F
from polyrun.effects import lottery_monad, uniform
from polyrun.interaction import moore_pipeline, xi
from polyrun.poly import from_counts

p = from_counts([2, 2])
rng = random.Random(5)

# A random wellfounded tree and a graft onto its leaves.
t = F.random_tree(rng, p, 3, ("a", "b"))
deeper = F.graft(t, lambda l: F.node(0, {0: F.ret(l + "0"), 1: F.ret(l + "1")}, p))
print("leaves before:", F.leaves(t))
print("leaves after graft:", F.leaves(deeper))

# A two-state machine over the same polynomial.
m = C.from_tables(p, {"s": 0, "t": 1}, {("s", 0): "t", ("s", 1): "s", ("t", 0): "s", ("t", 1): "t"}, "s")
paired = xi(t, m)
for path, label in list(F.iter_paths(paired))[:3]:
    print(" -> ".join(f"({P},{Q}) via {d}" for (P, Q), d in path), ":", label)

# ## Observing machines
print("bisimilar to itself after duplicate:", C.bisimilar(C.counit(C.duplicate(m)), m, 4))

# ## Moore machines as a pipeline
parity = C.moore([0, 1], 0, lambda s: s, lambda s, a: s ^ a, [0, 1], [0, 1])
print("parity outputs:", moore_pipeline([1, 0, 1, 1, 0], parity))

# ## Folding a tree into lotteries
lm = lottery_monad()
coin = lm.from_lottery(uniform([0, 1]))
dist = lm.distribution(F.fold_into_monad(t, lm, lambda P: (coin.position, coin.decode)))
print("fair coins at every node:", {k: str(v) for k, v in dist.outcomes})
