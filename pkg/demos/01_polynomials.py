# # Polynomials, maps and the internal hom
#
# A polynomial is a set of positions, each with a set of directions.

from polyrun.poly import (
    STAR, NATURALS, answerer, coproduct, dirichlet, eval_map, from_counts, internal_hom, polynomial,
    representable, substitution, dumps_polynomial,
)

p = from_counts([3, 2])                                  # y^3 + y^2
q = polynomial({"a": 4, "b": 4, "c": 2, "d": 0})         # 2y^4 + y^2 + 1

print("p + q direction counts:", [len(d) for _, d in coproduct(p, q).positions])
print("p tensor q has", len(dirichlet(p, q)), "positions")

# Substitution plugs a q-position into every direction of a p-position.
s = substitution(p, q)
print("p of q has", len(s), "positions; (0:a, 1:c, 2:c) has",
      len(s.directions((0, ((0, "a"), (1, "c"), (2, "c"))))), "directions")

# ## Answerers
#
# Positions of [p, y] pick one answer per question.

tea = polynomial({"Tea?": ["yes", "no"], "Kind?": ["green", "black", "herbal"]})
hom = internal_hom(tea)
print("[tea, y] has", len(hom), "answerers")

alice = answerer(tea, {"Tea?": "no", "Kind?": "herbal"})
ev = eval_map(tea)
print("eval at Tea? for alice:", ev.on_directions(("Tea?", alice), STAR))

# [y^N, y] is N y: an answerer to read() is just a number.
reads = internal_hom(representable(NATURALS))
print("first answerers of read():", [h.answer(STAR)[1](STAR) for h in reads.sample_positions(5)])

print()
print(dumps_polynomial(tea), end="")
