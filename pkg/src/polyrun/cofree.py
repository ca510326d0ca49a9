"""Behaviour machines: elements of the cofree comonad on a polynomial.

A behaviour tree is presented by a state machine (output position per
state, transition per direction) plus a current state.  Equality of
behaviours is observed through finite truncations.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence

from .errors import EnumerationRequired, InvalidComonoid, InvalidDirection
from .poly import (
    DEFAULT_BUDGET, STAR, Finite, LazyDomain, LazyPolynomial, PolyMap, Polynomial, Y, monomial,
)

DEFAULT_DEPTH = 4


@dataclass(frozen=True)
class Behavior:
    """A machine over ``carrier`` sitting in state ``current``.

    Two behaviours compare equal when they are the same machine in the same
    state; use :func:`bisimilar` for observational equality.
    """

    carrier: Any
    output: Callable[[Hashable], Any]
    transition: Callable[[Hashable, Any], Hashable]
    current: Hashable

    def at(self, state) -> "Behavior":
        return replace(self, current=state)

    def canon_key(self):
        return (id(self.output), id(self.transition), repr(self.current))


def counit(b: Behavior):
    return b.output(b.current)


def step(b: Behavior, d, check: bool = True) -> Behavior:
    if check and d not in b.carrier.directions(counit(b)):
        raise InvalidDirection(f"{d!r} is not a direction at {counit(b)!r}")
    return b.at(b.transition(b.current, d))


def run_path(b: Behavior, path: Iterable) -> Behavior:
    for d in path:
        b = step(b, d)
    return b


def from_tables(carrier, outputs: Mapping, transitions: Mapping, start) -> Behavior:
    """Machine given by ``outputs[state]`` and ``transitions[(state, d)]``."""
    outputs = dict(outputs)
    transitions = dict(transitions)
    return Behavior(carrier, outputs.__getitem__, lambda s, d: transitions[(s, d)], start)


def constant(carrier, position) -> Behavior:
    """One-state machine that always shows ``position``."""
    return Behavior(carrier, lambda s: position, lambda s, d: s, 0)


def unit_behavior() -> Behavior:
    """The unique machine over ``y``."""
    return Behavior(Y, lambda s: STAR, lambda s, d: s, 0)


def moore(states, init, label: Callable, update: Callable, inputs: Iterable, outputs: Iterable) -> Behavior:
    """Moore machine as a behaviour over ``B y^A``."""
    carrier = monomial(outputs, Finite(inputs))
    return Behavior(carrier, label, update, init)


def simulate_moore(b: Behavior, inputs: Sequence) -> list:
    """Direct step-by-step run: output before each input is consumed."""
    out = []
    s = b.current
    for a in inputs:
        out.append(b.output(s))
        s = b.transition(s, a)
    return out


# ---------------------------------------------------------------------------
# truncations  q^(0) = y,  q^(1+i) = y × (q ◁ q^(i))


@dataclass(frozen=True)
class TruncatedTree:
    """Depth-``depth`` unfolding; ``shape`` is ``()`` at depth 0 and
    ``(position, ((d, sub), ...))`` above."""

    depth: int
    shape: tuple

    def project(self) -> "TruncatedTree":
        """The limit-cone projection down one level."""
        if self.depth == 0:
            raise ValueError("depth-0 truncation has nothing below it")
        return TruncatedTree(self.depth - 1, _cut(self.shape, self.depth - 1))


def _cut(shape, depth):
    if depth == 0:
        return ()
    pos, kids = shape
    return (pos, tuple((d, _cut(sub, depth - 1)) for d, sub in kids))


def truncate(b: Behavior, depth: int, budget: int | None = DEFAULT_BUDGET) -> TruncatedTree:
    """Unfold ``b`` to ``depth`` levels; infinite direction sets are sampled."""
    memo: dict = {}

    def go(state, i):
        if i == 0:
            return ()
        key = (state, i)
        try:
            return memo[key]
        except KeyError:
            pass
        except TypeError:
            key = None
        pos = b.output(state)
        dirs = b.carrier.directions(pos)
        if not dirs.is_finite and budget is None:
            raise EnumerationRequired(f"directions at {pos!r} are infinite")
        out = (pos, tuple((d, go(b.transition(state, d), i - 1)) for d in dirs.enumerate(budget)))
        if key is not None:
            memo[key] = out
        return out

    return TruncatedTree(depth, go(b.current, depth))


def observe(b: Behavior, depth: int, budget: int = DEFAULT_BUDGET):
    """Like :func:`truncate`, but outputs that are themselves behaviours are
    replaced by their own observations (to the same depth and budget)."""
    memo: dict = {}

    def view(pos):
        if isinstance(pos, Behavior):
            key = (id(pos.output), id(pos.transition), pos.current)
            hit = memo.get(key)
            if hit is None or hit[0] is not pos.output:
                hit = memo[key] = (pos.output, observe_shape(pos))
            return hit[1]
        return pos

    def observe_shape(m: Behavior):
        return _walk(m, depth, budget, view)

    return _walk(b, depth, budget, view)


def _walk(b: Behavior, depth: int, budget: int, view):
    def go(state, i):
        if i == 0:
            return ()
        pos = b.output(state)
        dirs = b.carrier.directions(pos).enumerate(budget)
        return (view(pos), tuple((d, go(b.transition(state, d), i - 1)) for d in dirs))

    return go(b.current, depth)


def bisimilar(b1: Behavior, b2: Behavior, depth: int = DEFAULT_DEPTH, budget: int = DEFAULT_BUDGET) -> bool:
    """Equal observations to ``depth``; outputs that are behaviours are observed too."""
    if b1.carrier != b2.carrier:
        return False
    return observe(b1, depth, budget) == observe(b2, depth, budget)


# ---------------------------------------------------------------------------
# functor and lax monoidal structure


def map_behavior(f: PolyMap, b: Behavior) -> Behavior:
    """Outputs pushed forward through ``f``; incoming directions pulled back."""
    def output(s):
        return f.on_positions(b.output(s))

    def transition(s, e):
        return b.transition(s, f.on_directions(b.output(s), e))

    return Behavior(f.target, output, transition, b.current)


def laxator(b1: Behavior, b2: Behavior) -> Behavior:
    """Product machine over ``p ⊗ q``."""
    from .poly import small_dirichlet

    def output(s):
        return (b1.output(s[0]), b2.output(s[1]))

    def transition(s, d):
        return (b1.transition(s[0], d[0]), b2.transition(s[1], d[1]))

    return Behavior(small_dirichlet(b1.carrier, b2.carrier), output, transition, (b1.current, b2.current))


def laxator_many(bs: Sequence[Behavior]) -> Behavior:
    """Right-nested product ``b1 ⊗ (b2 ⊗ (...))``; the unit machine for none."""
    if not bs:
        return unit_behavior()
    out = bs[-1]
    for b in reversed(bs[:-1]):
        out = laxator(b, out)
    return out


# ---------------------------------------------------------------------------
# the carrier c_q and the comonoid structure


def _paths_sampler(q, b: Behavior):
    def sampler(budget):
        out = [()]
        frontier = [((), b)]
        while frontier and len(out) < budget:
            nxt = []
            for path, cur in frontier:
                for d in q.directions(counit(cur)).enumerate(budget):
                    p2 = path + (d,)
                    out.append(p2)
                    nxt.append((p2, step(cur, d)))
                    if len(out) >= budget:
                        return out
            frontier = nxt
        return out

    return sampler


def path_domain(b: Behavior) -> LazyDomain:
    """Directions of ``c_q`` at ``b``: finite paths from the root."""
    q = b.carrier

    def contains(path):
        if not isinstance(path, tuple):
            return False
        cur = b
        for d in path:
            if d not in q.directions(counit(cur)):
                return False
            cur = step(cur, d, check=False)
        return True

    return LazyDomain(contains, _paths_sampler(q, b), ("paths", b))


def cofree_carrier(q) -> LazyPolynomial:
    """``c_q``: positions are behaviours over ``q``, directions are paths."""
    def member(b):
        return isinstance(b, Behavior) and b.carrier == q

    def sampler(budget):
        raise EnumerationRequired("behaviour trees cannot be enumerated")

    return LazyPolynomial(member, path_domain, sampler, ("cofree", q))


def duplicate(b: Behavior) -> Behavior:
    """Comultiplication, as a machine over ``c_q`` on the same state space.

    Its output at a state is the original machine at that state; a path
    direction advances along the whole path.
    """
    def output(s):
        return b.at(s)

    def transition(s, path):
        for d in path:
            s = b.transition(s, d)
        return s

    return Behavior(cofree_carrier(b.carrier), output, transition, b.current)


def cofree_counit_map(q) -> PolyMap:
    """``c_q → q``: root position; a direction becomes the one-step path."""
    return PolyMap(cofree_carrier(q), q, counit, lambda b, d: (d,))


def cofree_comult_map(q) -> PolyMap:
    """``c_q → c_{c_q}``: duplicate positions, concatenate paths of paths."""
    def back(b, pp):
        out = ()
        cur = b
        for path in pp:
            out += tuple(path)
            cur = run_path(cur, path)
        return out

    return PolyMap(cofree_carrier(q), cofree_carrier(cofree_carrier(q)), duplicate, back)


def cofree_point_map(q) -> PolyMap:
    """``c_q → y``: the empty path."""
    return PolyMap(cofree_carrier(q), Y, lambda b: STAR, lambda b, d: ())


def concat_paths(p1: tuple, p2: tuple) -> tuple:
    return tuple(p1) + tuple(p2)


# ---------------------------------------------------------------------------
# comonoids (categories) and the adjunction unit


@dataclass(frozen=True)
class Comonoid:
    """A finite category presented on its objects.

    ``morphisms[c]`` lists ``(name, codomain)`` for arrows out of ``c``;
    ``identity[c]`` names the identity; ``compose[(c, f, g)]`` names the
    composite of ``f`` out of ``c`` followed by ``g``.
    """

    objects: tuple
    morphisms: Mapping
    identity: Mapping
    compose: Mapping

    @property
    def carrier(self) -> Polynomial:
        return Polynomial((c, Finite(f for f, _ in self.morphisms[c])) for c in self.objects)

    def codomain(self, c, f):
        return dict(self.morphisms[c])[f]

    def composite(self, c, path: Sequence):
        f = self.identity[c]
        cur = c
        for g in path:
            f = self.compose[(c, f, g)]
            cur = self.codomain(cur, g)
        return f

    def validate(self) -> None:
        for c in self.objects:
            outs = dict(self.morphisms[c])
            idc = self.identity.get(c)
            if idc not in outs or outs[idc] != c:
                raise InvalidComonoid(f"identity at {c!r} missing or not an endomorphism")
            for f, cod in outs.items():
                if cod not in self.objects:
                    raise InvalidComonoid(f"{f!r} lands outside the objects")
                for g, cod2 in dict(self.morphisms[cod]).items():
                    h = self.compose.get((c, f, g))
                    if h not in outs or outs[h] != cod2:
                        raise InvalidComonoid(f"composite of {f!r};{g!r} at {c!r} is wrong")
                if self.compose.get((c, idc, f)) != f:
                    raise InvalidComonoid(f"left identity fails for {f!r}")
                if self.compose.get((c, f, self.identity[cod])) != f:
                    raise InvalidComonoid(f"right identity fails for {f!r}")
                for g, cod2 in dict(self.morphisms[cod]).items():
                    for k in dict(self.morphisms[cod2]):
                        lhs = self.compose[(c, self.compose[(c, f, g)], k)]
                        rhs = self.compose[(c, f, self.compose[(cod, g, k)])]
                        if lhs != rhs:
                            raise InvalidComonoid(f"associativity fails at {c!r}: {f!r},{g!r},{k!r}")


def unfold_comonoid(c: Comonoid, start) -> Behavior:
    """The adjunction unit: start at an object, follow codomains."""
    c.validate()
    return Behavior(c.carrier, lambda obj: obj, c.codomain, start)


def comonoid_unit_map(c: Comonoid) -> PolyMap:
    """``c → c_c``: object ↦ its unfolded behaviour, path ↦ composite arrow."""
    c.validate()
    carrier = c.carrier
    return PolyMap(carrier, cofree_carrier(carrier), lambda obj: unfold_comonoid(c, obj),
                   lambda obj, path: c.composite(obj, path))


def discrete_comonoid(objects: Iterable) -> Comonoid:
    objects = tuple(objects)
    return Comonoid(objects, {o: (("id", o),) for o in objects}, {o: "id" for o in objects},
                    {(o, "id", "id"): "id" for o in objects})


def interval_comonoid() -> Comonoid:
    """Two objects and one non-identity arrow ``f: 0 → 1``."""
    return Comonoid(
        (0, 1),
        {0: (("id0", 0), ("f", 1)), 1: (("id1", 1),)},
        {0: "id0", 1: "id1"},
        {(0, "id0", "id0"): "id0", (0, "id0", "f"): "f", (0, "f", "id1"): "f", (1, "id1", "id1"): "id1"},
    )


# ---------------------------------------------------------------------------
# random machines and text format


def random_behavior(rng, q: Polynomial, max_states: int) -> Behavior:
    """Random tabulated machine with at most ``max_states`` states over finite ``q``."""
    if len(q) == 0:
        raise ValueError("no machines over the zero polynomial")
    n = rng.randint(1, max_states)
    outputs = {s: rng.choice(q.labels) for s in range(n)}
    transitions = {(s, d): rng.randrange(n) for s in range(n) for d in q.directions(outputs[s])}
    return from_tables(q, outputs, transitions, rng.randrange(n))


def reachable_states(b: Behavior, limit: int = 10_000) -> list:
    seen = {b.current: None}
    frontier = [b.current]
    while frontier:
        nxt = []
        for s in frontier:
            for d in b.carrier.directions(b.output(s)).enumerate():
                t = b.transition(s, d)
                if t not in seen:
                    seen[t] = None
                    nxt.append(t)
                    if len(seen) > limit:
                        raise EnumerationRequired("too many reachable states")
        frontier = nxt
    return list(seen)


def dumps_machine(b: Behavior, fmt: Callable[[Any], str] = str) -> str:
    """``start``/``state``/``on`` lines for the reachable part of a finite machine."""
    states = reachable_states(b)
    lines = [f"start {b.current}"]
    for s in states:
        lines.append(f"state {s} output {fmt(b.output(s))}")
    for s in states:
        for d in b.carrier.directions(b.output(s)).enumerate():
            lines.append(f"on {s} {d} -> {b.transition(s, d)}")
    return "\n".join(lines) + "\n"


def loads_machine(text: str, carrier, parse_position: Callable[[str], Any] = str,
                  parse_direction: Callable[[str], Any] = str) -> Behavior:
    """Inverse of :func:`dumps_machine`.  States are kept as strings.

    A state with no ``on`` line for some direction stays put.
    """
    outputs: dict = {}
    transitions: dict = {}
    start = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("start "):
            start = line.split(None, 1)[1].strip()
        elif line.startswith("state "):
            head, _, pos = line.partition(" output ")
            if not _:
                raise ValueError(f"bad state line: {raw!r}")
            outputs[head.split(None, 1)[1].strip()] = parse_position(pos.strip())
        elif line.startswith("on "):
            lhs, _, rhs = line.partition("->")
            parts = lhs.split()
            if len(parts) != 3 or not _:
                raise ValueError(f"bad transition line: {raw!r}")
            transitions[(parts[1], parse_direction(parts[2]))] = rhs.strip()
        else:
            raise ValueError(f"unrecognised line: {raw!r}")
    if not outputs:
        raise ValueError("machine has no states")
    if start is None:
        start = next(iter(outputs))
    if start not in outputs:
        raise ValueError(f"start state {start!r} has no output line")
    for t in transitions.values():
        if t not in outputs:
            raise ValueError(f"transition target {t!r} has no output line")
    return Behavior(carrier, outputs.__getitem__, lambda s, d: transitions.get((s, d), s), start)
