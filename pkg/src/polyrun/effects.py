"""Polynomial monads used as effect carriers: the trivial monad and lotteries.

An element of ``t(X)`` is an :class:`Effect`: a position ``J`` of the
carrier together with a decoder from the directions at ``J`` to ``X``.
Concrete monads supply the unit position and the multiplication on
positions; ``pure``/``bind`` are derived from those.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Hashable, Iterable, Mapping, NamedTuple

from .errors import WeightError
from .poly import STAR, Finite, LazyPolynomial, Y, canon_key


class Effect(NamedTuple):
    position: Any
    decode: dict


class MonadStructure:
    """A ◁-monoid presented by its unit and multiplication on positions."""

    carrier: Any

    def unit_position(self) -> tuple[Any, Any]:
        """Unit position and its single direction."""
        raise NotImplementedError

    def mult_position(self, J, assign: Callable[[Any], Any]) -> tuple[Any, Callable[[Any], tuple]]:
        """Flatten ``(J, d ↦ J_d)``; returns the composite position and the
        map sending its directions to pairs ``(d, d')``."""
        raise NotImplementedError

    def directions(self, J) -> list:
        return list(self.carrier.directions(J))

    # derived, extension-level operations

    def effect(self, J) -> Effect:
        return Effect(J, {d: d for d in self.directions(J)})

    def pure(self, x) -> Effect:
        J, d0 = self.unit_position()
        return Effect(J, {d0: x})

    def bind(self, eff: Effect, f: Callable[[Any], Effect]) -> Effect:
        inner = {d: f(x) for d, x in eff.decode.items()}
        J, back = self.mult_position(eff.position, lambda d: inner[d].position)
        decode = {}
        for dd in self.directions(J):
            d, d2 = back(dd)
            decode[dd] = inner[d].decode[d2]
        return self.normalize(Effect(J, decode))

    def join(self, eff: Effect) -> Effect:
        return self.bind(eff, lambda inner: inner)

    def fmap(self, eff: Effect, g: Callable) -> Effect:
        return self.normalize(Effect(eff.position, {d: g(x) for d, x in eff.decode.items()}))

    def normalize(self, eff: Effect) -> Effect:
        return eff

    def equal(self, a: Effect, b: Effect) -> bool:
        return a.position == b.position and a.decode == b.decode


class IdentityMonad(MonadStructure):
    """The trivial monad ``y``: one position, one direction."""

    carrier = Y

    def unit_position(self):
        return STAR, STAR

    def mult_position(self, J, assign):
        return STAR, lambda dd: (STAR, STAR)

    def directions(self, J):
        return [STAR]

    def value(self, eff: Effect):
        return eff.decode[STAR]


def identity_monad() -> IdentityMonad:
    return IdentityMonad()


# ---------------------------------------------------------------------------
# lotteries


class Lottery:
    """Finite distribution with exact rational weights over hashable outcomes."""

    __slots__ = ("outcomes",)

    def __init__(self, outcomes: Iterable[tuple[Hashable, Any]] | Mapping):
        items = list(outcomes.items() if isinstance(outcomes, Mapping) else outcomes)
        seen = set()
        clean = []
        for i, w in items:
            w = Fraction(w)
            if w < 0:
                raise WeightError(f"negative weight {w} on {i!r}")
            if i in seen:
                raise WeightError(f"duplicate outcome {i!r}")
            seen.add(i)
            clean.append((i, w))
        total = sum((w for _, w in clean), Fraction(0))
        if total != 1:
            raise WeightError(f"weights sum to {total}, not 1")
        self.outcomes = tuple(clean)

    @property
    def indices(self) -> tuple:
        return tuple(i for i, _ in self.outcomes)

    def weight(self, i) -> Fraction:
        for j, w in self.outcomes:
            if j == i:
                return w
        return Fraction(0)

    def as_dict(self) -> dict:
        return dict(self.outcomes)

    def canonical(self) -> "Lottery":
        """Drop zero weights and sort outcomes."""
        return Lottery(sorted(((i, w) for i, w in self.outcomes if w), key=lambda iw: canon_key(iw[0])))

    def canon_key(self):
        return canon_key(tuple(self.outcomes))

    def __eq__(self, other):
        if not isinstance(other, Lottery):
            return NotImplemented
        return self.outcomes == other.outcomes

    def __hash__(self):
        return hash(self.outcomes)

    def __len__(self):
        return len(self.outcomes)

    def __repr__(self):
        return "Lottery(" + dumps_lottery(self) + ")"


def point(i) -> Lottery:
    return Lottery([(i, 1)])


def uniform(items: Iterable) -> Lottery:
    items = list(items)
    if not items:
        raise WeightError("uniform lottery over nothing")
    return Lottery([(i, Fraction(1, len(items))) for i in items])


def weighted(weights: Mapping) -> Lottery:
    """Normalise nonnegative integer or rational weights into a lottery."""
    total = sum(Fraction(w) for w in weights.values())
    if total <= 0:
        raise WeightError("weights must have a positive sum")
    return Lottery([(i, Fraction(w) / total) for i, w in weights.items()])


def merge(pairs: Iterable[tuple[Hashable, Fraction]]) -> Lottery:
    acc: dict = {}
    for i, w in pairs:
        acc[i] = acc.get(i, 0) + w
    return Lottery(acc.items())


def flatten(outer: Lottery, inner: Callable[[Any], Lottery] | Mapping) -> Lottery:
    """Multiply weights along composite outcomes and merge equal results."""
    get = inner.__getitem__ if isinstance(inner, Mapping) else inner
    return merge((j, w * v) for i, w in outer.outcomes for j, v in get(i).outcomes)


def lottery_equal(a: Lottery, b: Lottery) -> bool:
    return a.canonical() == b.canonical()


def sample(lot: Lottery, rng) -> Any:
    """Exact inverse-CDF draw: one uniform integer below the common denominator."""
    denom = 1
    for _, w in lot.outcomes:
        denom = denom * w.denominator // math.gcd(denom, w.denominator)
    u = rng.randrange(denom)
    acc = 0
    for i, w in lot.outcomes:
        acc += w.numerator * (denom // w.denominator)
        if u < acc:
            return i
    raise AssertionError("weights do not sum to one")


def dumps_lottery(lot: Lottery) -> str:
    return " ".join(f"{i}:{w.numerator}/{w.denominator}" for i, w in lot.outcomes)


def loads_lottery(text: str) -> Lottery:
    out = []
    for tok in text.split():
        i, w = tok.rsplit(":", 1)
        out.append((int(i) if i.lstrip("-").isdigit() else i, Fraction(w)))
    return Lottery(out)


def random_lottery(rng, n_outcomes: int, labels=None, max_weight: int = 5) -> Lottery:
    labels = list(range(n_outcomes)) if labels is None else list(labels)
    weights = [rng.randint(0, max_weight) for _ in labels]
    if sum(weights) == 0:
        weights[rng.randrange(len(weights))] = 1
    return weighted(dict(zip(labels, weights)))


def _lottery_positions():
    def member(J):
        return isinstance(J, Lottery) and J.indices == tuple(range(len(J)))

    def sampler(budget):
        out = []
        for n in range(1, budget + 1):
            out.append(uniform(range(n)))
            if len(out) >= budget:
                break
        return out

    return LazyPolynomial(member, lambda J: Finite(range(len(J))), sampler, ("lott",))


class LotteryMonad(MonadStructure):
    """``lott = Σ_M Σ_{P:ΔM} y^M`` with rational points of the simplex.

    Positions are lotteries over ``0..M-1``; directions are the indices.
    """

    def __init__(self):
        self.carrier = _lottery_positions()

    def unit_position(self):
        return point(0), 0

    def mult_position(self, J: Lottery, assign):
        pairs = []
        weights = []
        for d, w in J.outcomes:
            for d2, v in assign(d).outcomes:
                pairs.append((d, d2))
                weights.append(w * v)
        return Lottery(enumerate(weights)), pairs.__getitem__

    def directions(self, J: Lottery):
        return list(range(len(J)))

    def normalize(self, eff: Effect) -> Effect:
        return self.from_lottery(self.distribution(eff))

    def from_lottery(self, lot: Lottery) -> Effect:
        lot = lot.canonical()
        J = Lottery((k, w) for k, (_, w) in enumerate(lot.outcomes))
        return Effect(J, {k: i for k, (i, _) in enumerate(lot.outcomes)})

    def distribution(self, eff: Effect) -> Lottery:
        """Merge directions with equal decoded values into a lottery over values."""
        return merge((eff.decode[d], w) for d, w in eff.position.outcomes).canonical()

    def equal(self, a: Effect, b: Effect) -> bool:
        return self.distribution(a) == self.distribution(b)


def lottery_monad() -> LotteryMonad:
    return LotteryMonad()
