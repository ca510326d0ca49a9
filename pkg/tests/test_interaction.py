import itertools
import random
from fractions import Fraction

from polyrun import cofree as C
from polyrun import free as F
from polyrun.apps.interview import alice, tea_interview
from polyrun.effects import identity_monad, lottery_monad, uniform
from polyrun.interaction import (
    RunTranscript, linear_tree, moore_pipeline, read_linear, run_against_answerer, run_on, transcript, xi,
)
from polyrun.laws import random_moore
from polyrun.poly import (
    STAR, HomPosition, Y, eval_map, from_counts, identity, internal_hom, iso_unitor_associator, polynomial,
    dirichlet,
)

P2 = from_counts([2, 2])


def test_xi_of_leaf_is_leaf():
    assert F.tree_equal(xi(F.ret("l"), C.constant(P2, 0)), F.ret("l"))


def test_xi_against_unit_behavior():
    rng = random.Random(0)
    for _ in range(100):
        t = F.random_tree(rng, P2, 4, ("a", "b"))
        unitor = iso_unitor_associator("tensor_right_unitor", P2).forward
        assert F.tree_equal(F.map_tree(unitor, xi(t, C.unit_behavior())), t)


def pairing_oracle(t, m, depth):
    """All paths of the interaction built by hand from every pair of directions."""
    out = set()

    def go(cur, state, path):
        if isinstance(cur, F.Leaf):
            out.add((path, cur.label))
            return
        Q = m.output(state)
        for dp in cur.domain:
            for dq in m.carrier.directions(Q):
                go(cur.child(dp), m.transition(state, dq), path + (((cur.position, Q), (dp, dq)),))

    go(t, m.current, ())
    return out


def test_xi_matches_pairing_oracle():
    q = from_counts([2, 1])
    m = C.from_tables(q, {"s": 0, "t": 1}, {("s", 0): "t", ("s", 1): "s", ("t", 0): "s"}, "s")
    t = F.node(0, {0: F.node(1, {0: F.ret("a"), 1: F.ret("b")}, P2), 1: F.node(0, {0: F.ret("c"), 1: F.ret("d")}, P2)},
               P2)
    got = set(F.iter_paths(xi(t, m)))
    assert got == pairing_oracle(t, m, 2)
    assert len(got) == 4 * 2 * 2 - 4  # first level 2x2, second level 2 pattern x (2 or 1) matter


def test_xi_follows_shape_of_pattern():
    rng = random.Random(1)
    q = from_counts([1, 2])
    for _ in range(50):
        t = F.random_tree(rng, P2, 3, ("a", "b"))
        m = C.random_behavior(rng, q, 3)
        for path, label in F.iter_paths(xi(t, m)):
            cur = t
            state = m.current
            for (P, Q), (dp, dq) in path:
                assert P == cur.position and Q == m.output(state)
                cur = cur.child(dp)
                state = m.transition(state, dq)
            assert cur.label == label


def test_run_on_with_identity_is_xi():
    rng = random.Random(2)
    t = F.random_tree(rng, P2, 3, ("a",))
    m = C.random_behavior(rng, P2, 3)
    assert F.tree_equal(run_on(t, m, identity(dirichlet(P2, P2))), xi(t, m))


def test_run_on_counts_questions():
    q = tea_interview()
    counted = run_on(q.script, alice().machine, eval_map(q.poly))
    assert len(read_linear(counted)) == 2
    assert all(len(list(n.domain)) == 1 for n in _nodes(counted))


def _nodes(t):
    while not isinstance(t, F.Leaf):
        yield t
        t = t.child(next(iter(t.domain)))


def test_answerer_identity_monad_reaches_alice_label():
    q = tea_interview()
    p = q.poly
    labelled = F.graft(q.script, lambda _: F.ret("end"))
    out = run_against_answerer(labelled, alice().machine, identity_monad())
    assert identity_monad().value(out) == "end"


def test_answerer_lottery_coin_on_binary_tree():
    p = from_counts([2])
    t = F.node(0, {0: F.node(0, {0: F.ret("aa"), 1: F.ret("ab")}, p),
                   1: F.node(0, {0: F.ret("ba"), 1: F.ret("bb")}, p)}, p)
    lm = lottery_monad()

    def coin(P):
        eff = lm.from_lottery(uniform(p.directions(P)))
        return eff.position, eff.decode.__getitem__

    h = C.constant(internal_hom(p, lm.carrier), HomPosition(p, lm.carrier, coin))
    dist = lm.distribution(run_against_answerer(t, h, lm))
    assert dist.as_dict() == {k: Fraction(1, 4) for k in ("aa", "ab", "ba", "bb")}


def test_answerer_on_ret_is_unit():
    lm = lottery_monad()
    h = C.constant(internal_hom(P2, lm.carrier), None)
    assert lm.equal(run_against_answerer(F.ret("x"), h, lm), lm.pure("x"))


def test_linear_tree_roundtrip():
    assert read_linear(linear_tree([])) == []
    assert read_linear(linear_tree([3, 1, 2])) == [3, 1, 2]


def test_moore_pipeline():
    m = C.moore([0, 1], 0, lambda s: s, lambda s, a: s ^ a, [0, 1], [0, 1])
    assert moore_pipeline([], m) == []
    assert moore_pipeline([1, 1, 0, 1], m) == [0, 1, 0, 0]
    rng = random.Random(3)
    for _ in range(300):
        mm, A = random_moore(rng)
        inputs = [rng.choice(A) for _ in range(rng.randint(0, 8))]
        out = moore_pipeline(inputs, mm)
        assert len(out) == len(inputs)
        state, expected = mm.current, []
        for a in inputs:
            expected.append(mm.output(state))
            state = mm.transition(state, a)
        assert out == expected


def test_transcript_roundtrip():
    q = tea_interview()
    tr = transcript(q.script, alice().machine, eval_map(q.poly))
    assert [s[2] for s in tr.path] == ["no", "no"]
    text = tr.dumps()
    assert text.splitlines()[-1] == f"result: {STAR}"
    back = RunTranscript.loads(text)
    assert [s[0] for s in back.path] == ["Tea?", "Tea?"] and len(back) == 2
