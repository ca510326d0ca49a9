"""Polynomial functors, their maps, and the monoidal structure on them.

A polynomial is a list of positions, each carrying a set of directions.
Direction sets are either finite (and tabulated in canonical sorted order)
or the naturals, which can be tested for membership and sampled but never
enumerated.  Product, substitution, and hom positions are nested tuples so
that the canonical isomorphisms below are plain relabelings.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping, Sequence

from .errors import EnumerationRequired, Infeasible, UnsupportedShape

#: default sampling prefix for naturals-valued direction sets
DEFAULT_BUDGET = 32

STAR = "*"


def canon_key(x: Any) -> tuple:
    """Total order key across the mixed label types used in this package."""
    if x is None:
        return (0,)
    if isinstance(x, bool):
        return (1, int(x))
    if isinstance(x, (int, Fraction)):
        return (2, x)
    if isinstance(x, str):
        return (3, x)
    if isinstance(x, tuple):
        return (4, tuple(canon_key(e) for e in x))
    if isinstance(x, frozenset):
        return (5, tuple(sorted(canon_key(e) for e in x)))
    key = getattr(x, "canon_key", None)
    if key is not None:
        return (6, key())
    return (7, type(x).__name__, repr(x))


def canonical_sorted(xs: Iterable) -> list:
    return sorted(xs, key=canon_key)


# ---------------------------------------------------------------------------
# direction domains


class DirectionDomain:
    is_finite = True

    def sample(self, budget: int) -> list:
        raise NotImplementedError

    def enumerate(self, budget: int | None = None) -> list:
        """All directions when finite; the first ``budget`` samples otherwise."""
        if self.is_finite:
            return list(self)
        if budget is None:
            raise EnumerationRequired(f"{self!r} is infinite; pass a sampling budget")
        return self.sample(budget)

    @property
    def size(self) -> int | None:
        return None


class FiniteDomain(DirectionDomain):
    """Common behaviour for finite direction sets (explicit or product)."""

    def sample(self, budget: int) -> list:
        return list(self)

    def __eq__(self, other):
        if not isinstance(other, FiniteDomain):
            return NotImplemented
        if len(self) != len(other):
            return False
        return tuple(self) == tuple(other)

    def __hash__(self):
        h = getattr(self, "_hash", None)
        if h is None:
            h = hash(tuple(self))
            object.__setattr__(self, "_hash", h)
        return h

    @property
    def size(self) -> int:
        return len(self)


class Finite(FiniteDomain):
    """Explicit finite direction set, kept in canonical order."""

    __slots__ = ("labels", "_set", "_hash")

    def __init__(self, labels: Iterable = ()):
        labels = tuple(canonical_sorted(labels))
        s = frozenset(labels)
        if len(s) != len(labels):
            raise ValueError(f"duplicate direction labels in {labels!r}")
        self.labels = labels
        self._set = s
        self._hash = None

    def __iter__(self) -> Iterator:
        return iter(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, d) -> bool:
        try:
            return d in self._set
        except TypeError:
            return False

    def __repr__(self):
        return "Finite(" + ", ".join(map(str, self.labels)) + ")"


class FiniteProduct(FiniteDomain):
    """Pairs ``(a, b)`` drawn from two finite sets, never materialized."""

    __slots__ = ("left", "right", "_hash")

    def __init__(self, left: FiniteDomain, right: FiniteDomain):
        self.left = left
        self.right = right
        self._hash = None

    def __iter__(self):
        return itertools.product(self.left, self.right)

    def __len__(self):
        return len(self.left) * len(self.right)

    def __contains__(self, d) -> bool:
        return (isinstance(d, tuple) and len(d) == 2
                and d[0] in self.left and d[1] in self.right)

    def __repr__(self):
        return f"FiniteProduct({self.left!r}, {self.right!r})"


class Naturals(DirectionDomain):
    is_finite = False

    def __contains__(self, d) -> bool:
        return isinstance(d, int) and not isinstance(d, bool) and d >= 0

    def sample(self, budget: int) -> list:
        return list(range(budget))

    def __eq__(self, other):
        return isinstance(other, Naturals)

    def __hash__(self):
        return hash("Naturals")

    def __repr__(self):
        return "Naturals"


NATURALS = Naturals()


class LazyDomain(DirectionDomain):
    """An infinite direction set given by membership test and sampler."""

    is_finite = False

    def __init__(self, contains: Callable[[Any], bool], sampler: Callable[[int], list], key: Hashable):
        self._contains = contains
        self._sampler = sampler
        self.key = key

    def __contains__(self, d) -> bool:
        return self._contains(d)

    def sample(self, budget: int) -> list:
        return self._sampler(budget)

    def __eq__(self, other):
        return isinstance(other, LazyDomain) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"LazyDomain({self.key!r})"


def finite(labels: Iterable = ()) -> Finite:
    return Finite(labels)


def as_domain(d) -> DirectionDomain:
    """Coerce an int (``range(n)``), iterable, or domain into a domain."""
    if isinstance(d, DirectionDomain):
        return d
    if isinstance(d, int):
        return Finite(range(d))
    return Finite(d)


def pair_domain(a: DirectionDomain, b: DirectionDomain) -> DirectionDomain:
    if a.is_finite and b.is_finite:
        return FiniteProduct(a, b)

    def contains(d):
        return isinstance(d, tuple) and len(d) == 2 and d[0] in a and d[1] in b

    def sampler(budget):
        return list(itertools.product(a.enumerate(budget), b.enumerate(budget)))

    return LazyDomain(contains, sampler, ("pair", a, b))


def sum_domain(parts: Sequence[tuple[Hashable, DirectionDomain]]) -> DirectionDomain:
    """Tagged disjoint union: directions are ``(tag, d)``."""
    parts = tuple(parts)
    if all(dom.is_finite for _, dom in parts):
        return Finite((tag, d) for tag, dom in parts for d in dom)
    table = dict(parts)

    def contains(x):
        return (isinstance(x, tuple) and len(x) == 2 and x[0] in table
                and x[1] in table[x[0]])

    def sampler(budget):
        return [(tag, d) for tag, dom in parts for d in dom.enumerate(budget)]

    return LazyDomain(contains, sampler, ("sum", parts))


# ---------------------------------------------------------------------------
# polynomials


class Polynomial:
    """Finite list of positions with their direction sets."""

    is_enumerable = True

    def __init__(self, positions: Iterable[tuple[Hashable, Any]] = ()):
        pairs = [(label, as_domain(dom)) for label, dom in positions]
        pairs.sort(key=lambda pd: canon_key(pd[0]))
        index = dict(pairs)
        if len(index) != len(pairs):
            raise ValueError("duplicate position labels")
        self._positions = tuple(pairs)
        self._index = index

    @property
    def positions(self) -> tuple[tuple[Hashable, DirectionDomain], ...]:
        return self._positions

    @property
    def labels(self) -> tuple:
        return tuple(label for label, _ in self._positions)

    def directions(self, position) -> DirectionDomain:
        try:
            return self._index[position]
        except (KeyError, TypeError):
            raise KeyError(f"{position!r} is not a position") from None

    def has_position(self, position) -> bool:
        try:
            return position in self._index
        except TypeError:
            return False

    def sample_positions(self, budget: int = DEFAULT_BUDGET) -> list:
        return list(self.labels)

    def __len__(self):
        return len(self._positions)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._positions == other._positions

    def __hash__(self):
        return hash(self._positions)

    def describe(self) -> str:
        if not self._positions:
            return "0"
        terms = []
        for _, dom in self._positions:
            n = dom.size
            terms.append("y^N" if n is None else "1" if n == 0 else "y" if n == 1 else f"y^{n}")
        return " + ".join(terms)

    def __repr__(self):
        return f"Polynomial({self.describe()})"


class LazyPolynomial:
    """Polynomial with infinitely (or impractically) many positions.

    Positions are recognised by ``member`` and drawn by ``sampler``; equality
    is by the structural ``key`` supplied by the constructing operation.
    """

    is_enumerable = False

    def __init__(self, member, directions, sampler, key: Hashable):
        self._member = member
        self._directions = directions
        self._sampler = sampler
        self.key = key

    @property
    def positions(self):
        raise EnumerationRequired(f"positions of {self.key!r} cannot be enumerated")

    @property
    def labels(self):
        raise EnumerationRequired(f"positions of {self.key!r} cannot be enumerated")

    def directions(self, position) -> DirectionDomain:
        return self._directions(position)

    def has_position(self, position) -> bool:
        try:
            return bool(self._member(position))
        except (TypeError, KeyError, ValueError):
            return False

    def sample_positions(self, budget: int = DEFAULT_BUDGET) -> list:
        return self._sampler(budget)

    def __eq__(self, other):
        if not isinstance(other, LazyPolynomial):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def describe(self) -> str:
        return f"<lazy {self.key[0]}>"

    def __repr__(self):
        return f"LazyPolynomial({self.key[0]})"


Poly = Polynomial | LazyPolynomial

Y = Polynomial([(STAR, Finite([STAR]))])
ZERO = Polynomial([])


def polynomial(data: Mapping[Hashable, Any] | Iterable[tuple[Hashable, Any]]) -> Polynomial:
    """Build from ``{label: n | iterable | domain}``."""
    items = data.items() if isinstance(data, Mapping) else data
    return Polynomial(items)


def from_counts(counts: Sequence[int]) -> Polynomial:
    """Positions ``0..n-1`` with ``counts[i]`` directions each; y^3+y^2 is ``[3, 2]``."""
    return Polynomial((i, Finite(range(n))) for i, n in enumerate(counts))


def monomial(positions: Iterable[Hashable], directions) -> Polynomial:
    """``B y^A`` for a position set B and direction set A."""
    dom = as_domain(directions)
    return Polynomial((b, dom) for b in positions)


def representable(directions) -> Polynomial:
    return Polynomial([(STAR, as_domain(directions))])


def linear(positions: Iterable[Hashable]) -> Polynomial:
    return monomial(positions, [STAR])


def enumerable(*ps: Poly) -> bool:
    return all(p.is_enumerable for p in ps)


def _lazy_pairs(p: Poly, q: Poly, directions, tag: str):
    def member(x):
        return isinstance(x, tuple) and len(x) == 2 and p.has_position(x[0]) and q.has_position(x[1])

    def sampler(budget):
        return list(itertools.product(p.sample_positions(budget), q.sample_positions(budget)))[:budget]

    return LazyPolynomial(member, lambda x: directions(x[0], x[1]), sampler, (tag, p, q))


def coproduct(p: Poly, q: Poly) -> Poly:
    if enumerable(p, q):
        return Polynomial([((0, P), d) for P, d in p.positions] + [((1, Q), d) for Q, d in q.positions])
    parts = (p, q)

    def member(x):
        return isinstance(x, tuple) and len(x) == 2 and x[0] in (0, 1) and parts[x[0]].has_position(x[1])

    def sampler(budget):
        return [(0, P) for P in p.sample_positions(budget)] + [(1, Q) for Q in q.sample_positions(budget)]

    return LazyPolynomial(member, lambda x: parts[x[0]].directions(x[1]), sampler, ("coproduct", p, q))


def cartesian_product(p: Poly, q: Poly) -> Poly:
    """Positions are pairs; directions are the tagged union ``(0, d) | (1, e)``."""
    def dirs(P, Q):
        return sum_domain([(0, p.directions(P)), (1, q.directions(Q))])

    if enumerable(p, q):
        return Polynomial(((P, Q), dirs(P, Q)) for P in p.labels for Q in q.labels)
    return _lazy_pairs(p, q, dirs, "cartesian")


def dirichlet(p: Poly, q: Poly) -> Poly:
    """The tensor ``p ⊗ q``: paired positions, paired directions."""
    def dirs(P, Q):
        return pair_domain(p.directions(P), q.directions(Q))

    if enumerable(p, q):
        return Polynomial(((P, Q), dirs(P, Q)) for P in p.labels for Q in q.labels)
    return _lazy_pairs(p, q, dirs, "dirichlet")


tensor = dirichlet

#: largest position count an eager tensor is allowed to build
EAGER_LIMIT = 4096


def small_dirichlet(p: Poly, q: Poly) -> Poly:
    """``p ⊗ q``, enumerated only when that is cheap."""
    if isinstance(p, Polynomial) and isinstance(q, Polynomial) and len(p) * len(q) <= EAGER_LIMIT:
        return dirichlet(p, q)

    def dirs(P, Q):
        return pair_domain(p.directions(P), q.directions(Q))

    return _lazy_pairs(p, q, dirs, "dirichlet")


def tensor_power(p: Poly, n: int) -> Poly:
    """``p ⊗ (p ⊗ (... ⊗ p))`` nested to the right; ``y`` for n = 0."""
    if n == 0:
        return Y
    out = p
    for _ in range(n - 1):
        out = dirichlet(p, out)
    return out


def nest(items: Sequence) -> Any:
    """Right-nest a sequence the way :func:`tensor_power` nests positions."""
    if not items:
        return STAR
    out = items[-1]
    for x in reversed(items[:-1]):
        out = (x, out)
    return out


def unnest(x, n: int) -> tuple:
    if n == 0:
        return ()
    out = []
    for _ in range(n - 1):
        out.append(x[0])
        x = x[1]
    out.append(x)
    return tuple(out)


def substitution_directions(q: Poly, position) -> DirectionDomain:
    """Directions of ``p ◁ q`` at ``(P, assignment)``: pairs ``(d, e)``."""
    _, assignment = position
    return sum_domain([(d, q.directions(Q)) for d, Q in assignment])


def substitution(p: Poly, q: Poly) -> Polynomial:
    """Composite ``p ◁ q``.

    A position is ``(P, ((d, Q_d), ...))`` listing a q-position for every
    direction of P in canonical order.
    """
    if not enumerable(p, q):
        raise EnumerationRequired("substitution needs enumerable operands")
    qs = q.labels
    out = []
    for P, dom in p.positions:
        if not dom.is_finite:
            raise EnumerationRequired(f"position {P!r} of the outer polynomial has infinitely many directions")
        ds = list(dom)
        for choice in itertools.product(qs, repeat=len(ds)):
            pos = (P, tuple(zip(ds, choice)))
            out.append((pos, substitution_directions(q, pos)))
    return Polynomial(out)


def lazy_substitution(p: Poly, q: Poly) -> LazyPolynomial:
    """``p ◁ q`` recognised position by position, never enumerated."""
    def member(pos):
        P, assignment = pos
        if not p.has_position(P):
            return False
        ds = [d for d, _ in assignment]
        return (p.directions(P).is_finite and ds == list(p.directions(P))
                and all(q.has_position(Q) for _, Q in assignment))

    def sampler(budget):
        out = []
        for P in p.sample_positions(budget):
            dom = p.directions(P)
            if not dom.is_finite:
                continue
            Q0 = q.sample_positions(1)
            if not Q0:
                continue
            out.append((P, tuple((d, Q0[0]) for d in dom)))
            if len(out) >= budget:
                break
        return out

    return LazyPolynomial(member, lambda pos: substitution_directions(q, pos), sampler, ("subst", p, q))


def lazy_tensor_power(p: Poly, n: int) -> Poly:
    """Same positions and directions as :func:`tensor_power`, built on demand."""
    if n <= 1:
        return tensor_power(p, n)

    def member(x):
        try:
            return all(p.has_position(P) for P in unnest(x, n))
        except (TypeError, IndexError, ValueError):
            return False

    def directions(x):
        doms = [p.directions(P) for P in unnest(x, n)]
        out = doms[-1]
        for dom in reversed(doms[:-1]):
            out = pair_domain(dom, out)
        return out

    def sampler(budget):
        return [nest([P] * n) for P in p.sample_positions(budget)][:budget]

    return LazyPolynomial(member, directions, sampler, ("tensor_power", p, n))


# ---------------------------------------------------------------------------
# internal hom [p, t]


class HomPosition:
    """A position of ``[p, t]``: for each p-position a t-position and a decoder.

    ``respond(P)`` returns ``(J, decode)`` where ``decode`` maps directions of
    ``t`` at ``J`` back to directions of ``p`` at ``P`` (dict or callable).
    """

    __slots__ = ("p", "t", "_respond", "_table")

    def __init__(self, p: Poly, t: Poly, respond: Callable[[Any], tuple[Any, Any]]):
        self.p = p
        self.t = t
        self._respond = respond
        self._table = None

    def answer(self, P) -> tuple[Any, Callable[[Any], Any]]:
        J, decode = self._respond(P)
        if isinstance(decode, Mapping):
            decode = decode.__getitem__
        return J, decode

    def tabulate(self) -> tuple:
        if self._table is None:
            rows = []
            for P in self.p.labels:
                J, dec = self.answer(P)
                rows.append((P, J, tuple((d, dec(d)) for d in self.t.directions(J).enumerate())))
            self._table = tuple(rows)
        return self._table

    def canon_key(self):
        return canon_key(self.tabulate())

    def __eq__(self, other):
        if not isinstance(other, HomPosition):
            return NotImplemented
        if self is other:
            return True
        return self.p == other.p and self.t == other.t and self.tabulate() == other.tabulate()

    def __hash__(self):
        return hash(self.tabulate())

    def __repr__(self):
        try:
            if self.t == Y:
                return "{" + ", ".join(f"{P}↦{dict(rows)[STAR]}" for P, _, rows in self.tabulate()) + "}"
            return f"HomPosition({self.tabulate()!r})"
        except EnumerationRequired:
            return "HomPosition(<lazy>)"


def answerer(p: Poly, answers: Mapping | Callable) -> HomPosition:
    """A position of ``[p, y]`` choosing ``answers[P]`` for every question P."""
    get = answers.__getitem__ if isinstance(answers, Mapping) else answers
    return HomPosition(p, Y, lambda P: (STAR, {STAR: get(P)}))


class InternalHom(LazyPolynomial):
    """``[p, t] = Π_P t ◁ (p[P] y)``; enumerable when every piece is finite."""

    def __init__(self, p: Poly, t: Poly):
        self.p = p
        self.t = t
        self._cached = None
        super().__init__(self._member, self._dirs, self._sample, ("hom", p, t))

    @property
    def is_enumerable(self) -> bool:
        if not enumerable(self.p, self.t):
            return False
        return (all(d.is_finite for _, d in self.p.positions)
                and all(d.is_finite for _, d in self.t.positions))

    def _member(self, h) -> bool:
        return isinstance(h, HomPosition) and h.p == self.p and h.t == self.t

    def _dirs(self, h: HomPosition) -> DirectionDomain:
        if not self.p.is_enumerable:
            raise EnumerationRequired("directions of [p, t] need the positions of p")
        return sum_domain([(P, self.t.directions(h.answer(P)[0])) for P in self.p.labels])

    def _choices(self, P, budget=None) -> list:
        dom_p = self.p.directions(P)
        out = []
        for J in (self.t.labels if budget is None else self.t.sample_positions(budget)):
            dts = self.t.directions(J).enumerate(budget)
            targets = dom_p.enumerate(budget)
            for image in itertools.product(targets, repeat=len(dts)):
                out.append((J, dict(zip(dts, image))))
        return out

    def _from_choice(self, choice: Mapping) -> HomPosition:
        return HomPosition(self.p, self.t, choice.__getitem__)

    def _sample(self, budget: int) -> list:
        if not self.p.is_enumerable:
            raise EnumerationRequired("positions of p must be enumerable")
        Ps = self.p.labels
        per = [self._choices(P, budget) for P in Ps]
        out = []
        for combo in itertools.product(*per):
            out.append(self._from_choice(dict(zip(Ps, combo))))
            if len(out) >= budget:
                break
        return out

    @property
    def positions(self):
        if not self.is_enumerable:
            raise EnumerationRequired("[p, t] has infinitely many positions")
        if self._cached is None:
            Ps = self.p.labels
            per = [self._choices(P) for P in Ps]
            hs = [self._from_choice(dict(zip(Ps, combo))) for combo in itertools.product(*per)]
            hs.sort(key=canon_key)
            self._cached = tuple((h, self._dirs(h)) for h in hs)
        return self._cached

    @property
    def labels(self):
        return tuple(h for h, _ in self.positions)

    def sample_positions(self, budget: int = DEFAULT_BUDGET) -> list:
        if self.is_enumerable:
            return list(self.labels)
        return self._sample(budget)

    def __len__(self):
        return len(self.positions)

    def count_positions(self) -> int:
        """``Π_P Σ_J |p[P]|^|t[J]|`` without building anything."""
        if not self.is_enumerable:
            raise EnumerationRequired("[p, t] has infinitely many positions")
        total = 1
        for P, dom in self.p.positions:
            total *= sum(len(dom) ** len(dj) for _, dj in self.t.positions)
        return total

    def describe(self) -> str:
        return f"[{self.p.describe()}, {self.t.describe()}]"

    def __repr__(self):
        return f"InternalHom({self.describe()})"


def internal_hom(p: Poly, t: Poly = Y) -> InternalHom:
    return InternalHom(p, t)


# ---------------------------------------------------------------------------
# maps


@dataclass(frozen=True, eq=False)
class PolyMap:
    """Forward on positions, backward on directions.

    ``on_directions(P, e)`` sends a direction ``e`` of the target at
    ``on_positions(P)`` to a direction of the source at ``P``.
    """

    source: Any
    target: Any
    on_positions: Callable[[Any], Any]
    on_directions: Callable[[Any, Any], Any]

    def __call__(self, P):
        return self.on_positions(P)

    @classmethod
    def from_tables(cls, source, target, positions: Mapping, directions: Mapping) -> "PolyMap":
        positions = dict(positions)
        directions = dict(directions)
        return cls(source, target, positions.__getitem__, lambda P, e: directions[(P, e)])

    def tabulate(self) -> tuple[dict, dict]:
        pos, back = {}, {}
        for P in self.source.labels:
            Q = self.on_positions(P)
            pos[P] = Q
            for e in self.target.directions(Q).enumerate():
                back[(P, e)] = self.on_directions(P, e)
        return pos, back

    def validate(self, budget: int = DEFAULT_BUDGET) -> None:
        for P in self.source.sample_positions(budget):
            Q = self.on_positions(P)
            if not self.target.has_position(Q):
                raise ValueError(f"{P!r} maps to {Q!r}, not a target position")
            src = self.source.directions(P)
            for e in self.target.directions(Q).enumerate(budget):
                d = self.on_directions(P, e)
                if d not in src:
                    raise ValueError(f"direction {e!r} at {Q!r} pulls back to {d!r}, not a direction at {P!r}")


def identity(p: Poly) -> PolyMap:
    return PolyMap(p, p, lambda P: P, lambda P, d: d)


def compose(g: PolyMap, f: PolyMap) -> PolyMap:
    """``g ∘ f``."""
    def back(P, e):
        return f.on_directions(P, g.on_directions(f.on_positions(P), e))

    return PolyMap(f.source, g.target, lambda P: g.on_positions(f.on_positions(P)), back)


def tensor_map(f: PolyMap, g: PolyMap) -> PolyMap:
    """``f ⊗ g``."""
    def back(PQ, e):
        P, Q = PQ
        return (f.on_directions(P, e[0]), g.on_directions(Q, e[1]))

    return PolyMap(dirichlet(f.source, g.source), dirichlet(f.target, g.target),
                   lambda PQ: (f.on_positions(PQ[0]), g.on_positions(PQ[1])), back)


def coproduct_map(f: PolyMap, g: PolyMap) -> PolyMap:
    fs = (f, g)
    return PolyMap(coproduct(f.source, g.source), coproduct(f.target, g.target),
                   lambda x: (x[0], fs[x[0]].on_positions(x[1])),
                   lambda x, e: fs[x[0]].on_directions(x[1], e))


def is_cartesian(f: PolyMap, budget: int = DEFAULT_BUDGET) -> bool:
    for P in f.source.sample_positions(budget):
        src = f.source.directions(P)
        tgt = f.target.directions(f.on_positions(P))
        if src.is_finite != tgt.is_finite:
            return False
        images = [f.on_directions(P, e) for e in tgt.enumerate(budget)]
        if len(set(images)) != len(images):
            return False
        if src.is_finite and len(images) != len(src):
            return False
    return True


def maps_equal(f: PolyMap, g: PolyMap, budget: int = DEFAULT_BUDGET) -> bool:
    """Extensional equality; infinite sets are compared on a sampled prefix."""
    for P in f.source.sample_positions(budget):
        Q = f.on_positions(P)
        if Q != g.on_positions(P):
            return False
        for e in f.target.directions(Q).enumerate(budget):
            if f.on_directions(P, e) != g.on_directions(P, e):
                return False
    return True


def eval_map(p: Poly, t: Poly = Y) -> PolyMap:
    """``p ⊗ [p, t] → t``: ask question P of the answerer and decode its reply."""
    hom = internal_hom(p, t)

    def back(Ph, e):
        P, h = Ph
        _, decode = h.answer(P)
        return (decode(e), (P, e))

    return PolyMap(dirichlet(p, hom), t, lambda Ph: Ph[1].answer(Ph[0])[0], back)


def duoidality(p1: Poly, p2: Poly, q1: Poly, q2: Poly) -> PolyMap:
    """Interchange ``(p1 ◁ p2) ⊗ (q1 ◁ q2) → (p1 ⊗ q1) ◁ (p2 ⊗ q2)``."""
    inner = dirichlet(p2, q2)

    def on_pos(x):
        (P1, a), (Q1, b) = x
        a, b = dict(a), dict(b)
        assignment = tuple(((d, e), (a[d], b[e]))
                           for d in p1.directions(P1) for e in q1.directions(Q1))
        return ((P1, Q1), assignment)

    def back(x, e):
        (d1, e1), (d2, e2) = e
        return ((d1, d2), (e1, e2))

    src = dirichlet(substitution(p1, p2), substitution(q1, q2))
    tgt = substitution(dirichlet(p1, q1), inner)
    return PolyMap(src, tgt, on_pos, back)


@dataclass(frozen=True, eq=False)
class CanonicalIso:
    forward: PolyMap
    backward: PolyMap

    def roundtrip_ok(self, budget: int = DEFAULT_BUDGET) -> bool:
        return (maps_equal(compose(self.backward, self.forward), identity(self.forward.source), budget)
                and maps_equal(compose(self.forward, self.backward), identity(self.backward.source), budget))

    def inverse(self) -> "CanonicalIso":
        return CanonicalIso(self.backward, self.forward)


def _iso(src, tgt, fpos, fdir, bpos, bdir) -> CanonicalIso:
    return CanonicalIso(PolyMap(src, tgt, fpos, fdir), PolyMap(tgt, src, bpos, bdir))


def iso_unitor_associator(kind: str, *ops: Poly) -> CanonicalIso:
    """Unitors, associators and symmetry for ⊗, ◁ and +.

    Kinds: ``tensor_left_unitor`` (y⊗p≅p), ``tensor_right_unitor``,
    ``tensor_associator`` ((p⊗q)⊗r≅p⊗(q⊗r)), ``tensor_symmetry``,
    ``subst_left_unitor`` (y◁p≅p), ``subst_right_unitor``,
    ``subst_associator``, ``coproduct_left_unitor`` (0+p≅p),
    ``coproduct_right_unitor``, ``hom_unit`` ([y,t]≅t).
    """
    arity = {"tensor_left_unitor": 1, "tensor_right_unitor": 1, "tensor_associator": 3,
             "tensor_symmetry": 2, "subst_left_unitor": 1, "subst_right_unitor": 1,
             "subst_associator": 3, "coproduct_left_unitor": 1, "coproduct_right_unitor": 1,
             "hom_unit": 1}
    if kind not in arity:
        raise UnsupportedShape(f"unknown canonical isomorphism {kind!r}")
    if len(ops) != arity[kind]:
        raise UnsupportedShape(f"{kind} takes {arity[kind]} operand(s), got {len(ops)}")

    if kind == "tensor_left_unitor":
        (p,) = ops
        return _iso(dirichlet(Y, p), p, lambda x: x[1], lambda x, d: (STAR, d),
                    lambda P: (STAR, P), lambda P, d: d[1])
    if kind == "tensor_right_unitor":
        (p,) = ops
        return _iso(dirichlet(p, Y), p, lambda x: x[0], lambda x, d: (d, STAR),
                    lambda P: (P, STAR), lambda P, d: d[0])
    if kind == "tensor_associator":
        p, q, r = ops

        def reassoc(x):
            (a, b), c = x
            return (a, (b, c))

        def unassoc(x):
            a, (b, c) = x
            return ((a, b), c)

        return _iso(dirichlet(dirichlet(p, q), r), dirichlet(p, dirichlet(q, r)),
                    reassoc, lambda x, d: unassoc(d), unassoc, lambda x, d: reassoc(d))
    if kind == "tensor_symmetry":
        p, q = ops

        def swap(x):
            return (x[1], x[0])

        return _iso(dirichlet(p, q), dirichlet(q, p), swap, lambda x, d: swap(d),
                    swap, lambda x, d: swap(d))
    if kind == "subst_left_unitor":
        (p,) = ops
        return _iso(substitution(Y, p), p, lambda x: x[1][0][1], lambda x, d: (STAR, d),
                    lambda P: (STAR, ((STAR, P),)), lambda P, d: d[1])
    if kind == "subst_right_unitor":
        (p,) = ops
        return _iso(substitution(p, Y), p, lambda x: x[0], lambda x, d: (d, STAR),
                    lambda P: (P, tuple((d, STAR) for d in p.directions(P))), lambda P, d: d[0])
    if kind == "subst_associator":
        p, q, r = ops

        def fpos(x):
            (P, a), b = x
            b = dict(b)
            return (P, tuple((d, (Q, tuple((e, b[(d, e)]) for e in q.directions(Q)))) for d, Q in a))

        def bpos(x):
            P, a = x
            outer = (P, tuple((d, Q) for d, (Q, _) in a))
            inner = tuple(((d, e), R) for d, (_, c) in a for e, R in c)
            return (outer, inner)

        return _iso(substitution(substitution(p, q), r), substitution(p, substitution(q, r)),
                    fpos, lambda x, d: ((d[0], d[1][0]), d[1][1]),
                    bpos, lambda x, d: (d[0][0], (d[0][1], d[1])))
    if kind == "coproduct_left_unitor":
        (p,) = ops
        return _iso(coproduct(ZERO, p), p, lambda x: x[1], lambda x, d: d,
                    lambda P: (1, P), lambda P, d: d)
    if kind == "coproduct_right_unitor":
        (p,) = ops
        return _iso(coproduct(p, ZERO), p, lambda x: x[1], lambda x, d: d,
                    lambda P: (0, P), lambda P, d: d)
    # hom_unit
    (t,) = ops
    return _iso(internal_hom(Y, t), t,
                lambda h: h.answer(STAR)[0], lambda h, d: (STAR, d),
                lambda J: HomPosition(Y, t, lambda _P, J=J: (J, lambda d: STAR)),
                lambda J, d: d[1])


# ---------------------------------------------------------------------------
# extension evaluation on sets


def extension(p: Polynomial, X: Sequence) -> list[tuple]:
    """Elements of ``p(X)``: pairs ``(P, ((d, x), ...))``."""
    out = []
    for P, dom in p.positions:
        ds = list(dom.enumerate())
        for image in itertools.product(X, repeat=len(ds)):
            out.append((P, tuple(zip(ds, image))))
    return out


def curry_extension(p: Polynomial, q: Polynomial, element) -> tuple:
    """Send an element of ``(p ◁ q)(X)`` to the matching element of ``p(q(X))``."""
    (P, a), g = element
    g = dict(g)
    return (P, tuple((d, (Q, tuple((e, g[(d, e)]) for e in q.directions(Q)))) for d, Q in a))


# ---------------------------------------------------------------------------
# random instances


def random_polynomial(rng, max_positions: int, max_directions: int) -> Polynomial:
    n = rng.randint(0, max_positions)
    return from_counts([rng.randint(0, max_directions) for _ in range(n)])


def random_polymap(rng, p: Polynomial, q: Polynomial) -> PolyMap:
    """Uniformly chosen tabulated map; ``Infeasible`` when none exists."""
    pos, back = {}, {}
    for P, dom in p.positions:
        feasible = [Q for Q, qdom in q.positions if len(dom) > 0 or len(qdom) == 0]
        if not feasible:
            raise Infeasible(f"no target for position {P!r}")
        Q = rng.choice(feasible)
        pos[P] = Q
        src = list(dom)
        for e in q.directions(Q):
            back[(P, e)] = rng.choice(src)
    return PolyMap.from_tables(p, q, pos, back)


def random_cartesian_map(rng, p: Polynomial, q: Polynomial) -> PolyMap:
    """Random map whose backward functions are bijections; ``Infeasible`` if impossible."""
    pos, back = {}, {}
    for P, dom in p.positions:
        feasible = [Q for Q, qdom in q.positions if len(qdom) == len(dom)]
        if not feasible:
            raise Infeasible(f"no same-arity target for position {P!r}")
        Q = rng.choice(feasible)
        pos[P] = Q
        src = list(dom)
        rng.shuffle(src)
        for e, d in zip(q.directions(Q), src):
            back[(P, e)] = d
    return PolyMap.from_tables(p, q, pos, back)


# ---------------------------------------------------------------------------
# text format
#   position <label> : finite(<d1>,<d2>,...) | naturals
#   map <P> -> <Q>      back <P> <e> -> <d>


def _atom(x) -> str:
    s = str(x)
    if not s or any(c in s for c in " \t\n,():"):
        raise ValueError(f"label {x!r} cannot be written as an atom")
    return s


def parse_atom(tok: str):
    """Digit strings become ints; everything else stays a string."""
    tok = tok.strip()
    return int(tok) if tok.isdigit() else tok


def dumps_polynomial(p: Polynomial) -> str:
    lines = []
    for P, dom in p.positions:
        if isinstance(dom, Naturals):
            body = "naturals"
        elif dom.is_finite:
            body = "finite(" + ",".join(_atom(d) for d in dom) + ")"
        else:
            raise ValueError(f"direction set at {P!r} has no text form")
        lines.append(f"position {_atom(P)} : {body}")
    return "\n".join(lines) + ("\n" if lines else "")


def loads_polynomial(text: str) -> Polynomial:
    out = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, sep, body = line.partition(":")
        words = head.split()
        if not sep or len(words) != 2 or words[0] != "position":
            raise ValueError(f"bad polynomial line: {raw!r}")
        body = body.strip()
        if body == "naturals":
            dom = NATURALS
        elif body.startswith("finite(") and body.endswith(")"):
            inner = body[len("finite("):-1]
            dom = Finite(parse_atom(d) for d in inner.split(",") if d.strip())
        else:
            raise ValueError(f"bad direction set: {body!r}")
        out.append((parse_atom(words[1]), dom))
    return Polynomial(out)


def dumps_polymap(f: PolyMap) -> str:
    pos, back = f.tabulate()
    lines = [f"map {_atom(P)} -> {_atom(Q)}" for P, Q in pos.items()]
    lines += [f"back {_atom(P)} {_atom(e)} -> {_atom(d)}" for (P, e), d in back.items()]
    return "\n".join(lines) + ("\n" if lines else "")


def loads_polymap(text: str, source: Polynomial, target: Polynomial) -> PolyMap:
    pos, back = {}, {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        lhs, sep, rhs = line.partition("->")
        words = lhs.split()
        if not sep:
            raise ValueError(f"bad map line: {raw!r}")
        if words[0] == "map" and len(words) == 2:
            pos[parse_atom(words[1])] = parse_atom(rhs)
        elif words[0] == "back" and len(words) == 3:
            back[(parse_atom(words[1]), parse_atom(words[2]))] = parse_atom(rhs)
        else:
            raise ValueError(f"bad map line: {raw!r}")
    f = PolyMap.from_tables(source, target, pos, back)
    f.validate()
    return f
