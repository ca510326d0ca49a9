# # Exhaustive run-off and gerrymandering

from polyrun.apps import voting as V

X = ("a", "b", "c")
e = V.exhaustive_runoff(X, 3)

for profile in (["abc", "bac", "bca"], ["abc", "bca", "cab"]):
    rounds, w = V.run_election(e, X, [V.voter_from_ranking(r) for r in profile])
    print(profile, "->", f"{rounds} rounds, winner {w}")

# Split nine voters into three districts and look for a profile where the
# districted result differs from the direct one.
w = V.gerrymander_witness(X, 3, 3, 10_000, seed=7)
print("witness found at trial", w.trial)
for i in range(3):
    print("  district", i, [">".join(r) for r in w.profile[3 * i:3 * i + 3]])
print("direct winner:", w.direct, " districted winner:", w.districted)
