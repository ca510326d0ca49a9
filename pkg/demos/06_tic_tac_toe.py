# # Tic-tac-toe: rules, exact matches, learning

from polyrun import free as F
from polyrun.apps import game as G

T = G.build_rules_tree()
print(G.render("XOXOOX---"))
print("leaves from this board:", F.leaves(T.at("XOXOOX---")))
print("all games:", F.count_leaf_labels(T.root))

dist = G.match_distribution(T, G.uniform_player(G.X), G.uniform_player(G.O))
print("uniform against uniform:", {k: str(v) for k, v in dist.outcomes})

# Reinforce X's moves after every win against a uniform O.
res = G.train(2000, seed=11, T=T)
print("win rate per 100 games:", " ".join(f"{r:.2f}" for r in res.win_rates))
before = G.evaluate(G.ScoreTable(), 2000, seed=12, T=T)
after = G.evaluate(res.scores, 2000, seed=12, T=T)
print(f"X win rate {before:.3f} untrained, {after:.3f} trained")
