import random
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from polyrun.effects import (
    Effect, Lottery, dumps_lottery, flatten, identity_monad, loads_lottery, lottery_equal, lottery_monad, merge,
    point, random_lottery, sample, uniform, weighted,
)
from polyrun.errors import WeightError


def test_point_flattened_with_constant_point():
    assert flatten(point(0), lambda _: point("j")) == point("j")


def test_flatten_hand_example():
    out = flatten(uniform([0, 1]), {0: uniform(["a", "b"]), 1: point("a")})
    assert out.as_dict() == {"a": Fraction(3, 4), "b": Fraction(1, 4)}


def three_level_oracle(outer, f, g):
    acc = {}
    for i, w in outer.outcomes:
        for j, v in f(i).outcomes:
            for k, u in g(j).outcomes:
                acc[k] = acc.get(k, 0) + w * v * u
    return {k: v for k, v in acc.items() if v}


def test_flatten_associative_against_path_sum():
    rng = random.Random(0)
    for _ in range(500):
        outer = random_lottery(rng, rng.randint(1, 4))
        f = {i: random_lottery(rng, rng.randint(1, 3), "xyz"[:3]) for i in outer.indices}
        f = {i: random_lottery(rng, 3, "xyz") for i in outer.indices}
        g = {j: random_lottery(rng, 2, "pq") for j in "xyz"}
        lhs = flatten(flatten(outer, f), g)
        rhs = flatten(outer, lambda i: flatten(f[i], g))
        assert lottery_equal(lhs, rhs)
        assert lhs.canonical().as_dict() == three_level_oracle(outer, f.__getitem__, g.__getitem__)
        assert sum(w for _, w in lhs.outcomes) == 1


def test_weights_are_validated():
    with pytest.raises(WeightError):
        Lottery([("a", Fraction(1, 2))])
    with pytest.raises(WeightError):
        Lottery([("a", 2), ("b", -1)])
    with pytest.raises(WeightError):
        Lottery([("a", Fraction(1, 2)), ("a", Fraction(1, 2))])
    with pytest.raises(WeightError):
        uniform([])
    with pytest.raises(WeightError):
        weighted({"a": 0})


def test_weighted_and_merge():
    assert weighted({"a": 1, "b": 3}).as_dict() == {"a": Fraction(1, 4), "b": Fraction(3, 4)}
    assert merge([("a", Fraction(1, 2)), ("a", Fraction(1, 2))]) == point("a")


def test_lottery_equal_ignores_order_and_zero():
    a = Lottery([("x", Fraction(1, 2)), ("y", Fraction(1, 2)), ("z", 0)])
    b = Lottery([("y", Fraction(1, 2)), ("x", Fraction(1, 2))])
    assert lottery_equal(a, b) and a != b


def test_sample_frequencies():
    rng = random.Random(1)
    lot = Lottery([("a", Fraction(1, 4)), ("b", Fraction(3, 4))])
    counts = Counter(sample(lot, rng) for _ in range(20000))
    assert abs(counts["a"] / 20000 - 0.25) < 0.02
    assert sample(point("only"), rng) == "only"


def test_text_roundtrip():
    lot = Lottery([(0, Fraction(1, 3)), ("b", Fraction(2, 3))])
    assert dumps_lottery(lot) == "0:1/3 b:2/3"
    assert loads_lottery(dumps_lottery(lot)) == lot


def test_identity_monad():
    m = identity_monad()
    e = m.bind(m.pure(3), lambda x: m.pure(x + 1))
    assert m.value(e) == 4


def test_lottery_monad_laws_and_exactness():
    lm = lottery_monad()
    rng = random.Random(2)
    for _ in range(500):
        e = lm.from_lottery(random_lottery(rng, rng.randint(1, 4), "abcd"[:4]))
        f = {l: lm.from_lottery(random_lottery(rng, 2, "xy")) for l in "abcd"}.__getitem__
        g = {l: lm.from_lottery(random_lottery(rng, 3, "pqr")) for l in "xy"}.__getitem__
        assert lm.equal(lm.bind(lm.pure("a"), f), f("a"))
        assert lm.equal(lm.bind(e, lm.pure), e)
        lhs = lm.bind(lm.bind(e, f), g)
        rhs = lm.bind(e, lambda l: lm.bind(f(l), g))
        assert lm.equal(lhs, rhs)
        assert sum(w for _, w in lhs.position.outcomes) == 1
        assert all(isinstance(w, Fraction) for _, w in lhs.position.outcomes)


def test_lottery_carrier_positions():
    lm = lottery_monad()
    J = uniform(range(3))
    assert lm.carrier.has_position(J)
    assert list(lm.carrier.directions(J)) == [0, 1, 2]
    assert not lm.carrier.has_position(uniform("ab"))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 9), min_size=1, max_size=5))
def test_weighted_normalises_exactly(ws):
    if sum(ws) == 0:
        ws[0] = 1
    lot = weighted(dict(enumerate(ws)))
    assert sum(w for _, w in lot.outcomes) == 1
    assert lot.weight(0) == Fraction(ws[0], sum(ws))
