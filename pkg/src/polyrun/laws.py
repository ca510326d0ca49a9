"""Randomised law suites for trees, machines, their interaction, and lotteries.

Each suite returns a :class:`SuiteResult`; ``run_all`` runs them in order.
The ``graft_impl`` hook lets a caller swap in a broken graft to check that
the suites can fail.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from . import cofree as C
from . import free as F
from .effects import Effect, lottery_monad, random_lottery
from .interaction import moore_pipeline, xi
from .poly import (
    Polynomial, iso_unitor_associator, random_polymap, random_polynomial, tensor_map,
)
from .errors import Infeasible

LABELS = ("a", "b", "c")


@dataclass
class SuiteResult:
    name: str
    cases: int
    failures: int
    seed: int
    first_failure: str | None = None

    @property
    def passed(self) -> bool:
        return self.failures == 0 and self.cases > 0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  first failure: {self.first_failure}" if self.first_failure else ""
        return f"{status} {self.name}: {self.cases - self.failures}/{self.cases} (seed {self.seed}){extra}"


def _suite(name: str, seed: int, samples: int, case: Callable[[random.Random, int], bool]) -> SuiteResult:
    rng = random.Random(f"{name}:{seed}")
    failures, first = 0, None
    for i in range(samples):
        try:
            ok = case(rng, i)
            err = None
        except Exception as exc:  # a crashing case is a failing case
            ok, err = False, f"{type(exc).__name__}: {exc}"
        if not ok:
            failures += 1
            if first is None:
                first = f"case {i}" + (f" ({err})" if err else "")
    return SuiteResult(name, samples, failures, seed, first)


def _poly(rng, max_pos=4, max_dirs=4, min_dirs=0) -> Polynomial:
    while True:
        p = random_polynomial(rng, max_pos, max_dirs)
        if min_dirs:
            p = Polynomial((P, d) for P, d in p.positions if len(d) >= min_dirs)
        if len(p):
            return p


def _tree(rng, p, depth=4, labels=LABELS):
    return F.random_tree(rng, p, rng.randint(0, depth), labels)


# ---------------------------------------------------------------------------
# free monad


def free_monad_suites(seed: int = 0, samples: int = 100, depth: int = 4, graft_impl=F.graft) -> list[SuiteResult]:
    def kleisli(rng, p, d):
        table = {l: _tree(rng, p, d) for l in LABELS}
        return table.__getitem__

    def left_unit(rng, i):
        p = _poly(rng)
        f = kleisli(rng, p, depth)
        l = rng.choice(LABELS)
        return F.tree_equal(graft_impl(F.ret(l), f), f(l))

    def right_unit(rng, i):
        p = _poly(rng)
        t = _tree(rng, p, depth)
        return F.tree_equal(graft_impl(t, F.ret), t)

    def assoc(rng, i):
        p = _poly(rng)
        t = _tree(rng, p, depth)
        f, g = kleisli(rng, p, 2), kleisli(rng, p, 2)
        lhs = graft_impl(graft_impl(t, f), g)
        rhs = graft_impl(t, lambda l: graft_impl(f(l), g))
        return F.tree_equal(lhs, rhs)

    def roundtrip(rng, i):
        p = _poly(rng)
        t = _tree(rng, p, depth)
        return F.tree_equal(F.reroll(F.unroll(t), p), t)

    return [
        _suite("free.left_unit", seed, samples, left_unit),
        _suite("free.right_unit", seed, samples, right_unit),
        _suite("free.associativity", seed, samples, assoc),
        _suite("free.unroll_reroll", seed, samples, roundtrip),
    ]


# ---------------------------------------------------------------------------
# cofree comonad


def cofree_suites(seed: int = 0, samples: int = 100, depth: int = 4, budget: int = 4) -> list[SuiteResult]:
    def machine(rng):
        p = _poly(rng)
        return C.random_behavior(rng, p, 4)

    def left_counit(rng, i):
        b = machine(rng)
        return C.bisimilar(C.counit(C.duplicate(b)), b, depth)

    def right_counit(rng, i):
        b = machine(rng)
        return C.bisimilar(C.map_behavior(C.cofree_counit_map(b.carrier), C.duplicate(b)), b, depth)

    def coassoc(rng, i):
        b = machine(rng)
        d = C.duplicate(b)
        lhs = C.duplicate(d)
        rhs = C.map_behavior(C.cofree_comult_map(b.carrier), d)
        return C.observe(lhs, 3, budget) == C.observe(rhs, 3, budget)

    def projection(rng, i):
        b = machine(rng)
        return all(C.truncate(b, k + 1).project() == C.truncate(b, k) for k in range(depth + 1))

    return [
        _suite("cofree.left_counit", seed, samples, left_counit),
        _suite("cofree.right_counit", seed, samples, right_counit),
        _suite("cofree.coassociativity", seed, samples, coassoc),
        _suite("cofree.projection_coherence", seed, samples, projection),
    ]


# ---------------------------------------------------------------------------
# module action


def _map(rng, p, q):
    while True:
        try:
            return random_polymap(rng, p, q)
        except Infeasible:
            q = _poly(rng)


def module_suites(seed: int = 0, samples: int = 100, depth: int = 4) -> list[SuiteResult]:
    def unit(rng, i):
        p = _poly(rng)
        t = _tree(rng, p, depth)
        unitor = iso_unitor_associator("tensor_right_unitor", p).forward
        return F.tree_equal(F.map_tree(unitor, xi(t, C.unit_behavior())), t)

    def assoc(rng, i):
        p, q, r = _poly(rng, 3, 3), _poly(rng, 3, 3), _poly(rng, 3, 3)
        t = _tree(rng, p, 3)
        b1, b2 = C.random_behavior(rng, q, 4), C.random_behavior(rng, r, 4)
        back = iso_unitor_associator("tensor_associator", p, q, r).backward
        lhs = F.map_tree(back, xi(t, C.laxator(b1, b2)))
        rhs = xi(xi(t, b1), b2)
        return F.tree_equal(lhs, rhs)

    def natural(rng, i):
        p, q = _poly(rng), _poly(rng)
        f = _map(rng, p, _poly(rng))
        g = _map(rng, q, _poly(rng))
        t = _tree(rng, p, depth)
        b = C.random_behavior(rng, q, 4)
        lhs = F.map_tree(tensor_map(f, g), xi(t, b))
        rhs = xi(F.map_tree(f, t), C.map_behavior(g, b))
        return F.tree_equal(lhs, rhs)

    return [
        _suite("module.unit", seed, samples, unit),
        _suite("module.associativity", seed, samples, assoc),
        _suite("module.naturality", seed, samples, natural),
    ]


def random_moore(rng, max_a=3, max_b=3, max_states=4):
    A = list(range(rng.randint(1, max_a)))
    B = list(range(rng.randint(1, max_b)))
    n = rng.randint(1, max_states)
    label = {s: rng.choice(B) for s in range(n)}
    update = {(s, a): rng.randrange(n) for s in range(n) for a in A}
    return C.moore(range(n), rng.randrange(n), label.__getitem__, lambda s, a: update[(s, a)], A, B), A


def moore_suite(seed: int = 0, samples: int = 500, max_len: int = 8) -> list[SuiteResult]:
    def case(rng, i):
        m, A = random_moore(rng)
        inputs = [rng.choice(A) for _ in range(rng.randint(0, max_len))]
        out = moore_pipeline(inputs, m)
        return out == C.simulate_moore(m, inputs) and len(out) == len(inputs)

    return [_suite("module.moore_pipeline", seed, samples, case)]


# ---------------------------------------------------------------------------
# lottery monad


def _random_effect(rng, lm, labels=LABELS) -> Effect:
    lot = random_lottery(rng, rng.randint(1, 4))
    return Effect(lot, {k: rng.choice(labels) for k in range(len(lot))})


def lottery_suites(seed: int = 0, samples: int = 500, tree_samples: int = 100, depth: int = 4,
                   graft_impl=F.graft) -> list[SuiteResult]:
    lm = lottery_monad()

    def kleisli(rng):
        table = {l: _random_effect(rng, lm, ("x", "y", "z")) for l in LABELS}
        return table.__getitem__

    def left_unit(rng, i):
        f = kleisli(rng)
        l = rng.choice(LABELS)
        return lm.equal(lm.bind(lm.pure(l), f), f(l))

    def right_unit(rng, i):
        e = _random_effect(rng, lm)
        return lm.equal(lm.bind(e, lm.pure), e)

    def assoc(rng, i):
        e = _random_effect(rng, lm)
        f = kleisli(rng)
        table = {l: _random_effect(rng, lm, LABELS) for l in ("x", "y", "z")}
        g = table.__getitem__
        lhs = lm.bind(lm.bind(e, f), g)
        rhs = lm.bind(e, lambda l: lm.bind(f(l), g))
        return lm.equal(lhs, rhs) and sum(w for _, w in lm.distribution(lhs).outcomes) == 1

    def fold_graft(rng, i):
        # a lottery always has an outcome, so every question needs an answer
        p = _poly(rng, min_dirs=1)
        algebra = {}
        for P in p.labels:
            dirs = list(p.directions(P))
            J = random_lottery(rng, rng.randint(1, 3))
            algebra[P] = (J, {k: rng.choice(dirs) for k in range(len(J))})
        t = _tree(rng, p, depth)
        subs = {l: _tree(rng, p, 2) for l in LABELS}
        fold = lambda tree: F.fold_into_monad(tree, lm, algebra.__getitem__)
        lhs = fold(graft_impl(t, subs.__getitem__))
        rhs = lm.bind(fold(t), lambda l: fold(subs[l]))
        return lm.equal(lhs, rhs)

    return [
        _suite("lottery.left_unit", seed, samples, left_unit),
        _suite("lottery.right_unit", seed, samples, right_unit),
        _suite("lottery.associativity", seed, samples, assoc),
        _suite("lottery.fold_commutes_with_graft", seed, tree_samples, fold_graft),
    ]


def run_all(seed: int = 0, samples: int = 100, depth: int = 4, graft_impl=F.graft) -> list[SuiteResult]:
    return (free_monad_suites(seed, samples, depth, graft_impl)
            + cofree_suites(seed, samples, depth)
            + module_suites(seed, samples, depth)
            + moore_suite(seed, max(samples, 500))
            + lottery_suites(seed, max(samples, 500), samples, depth, graft_impl))


def corrupted_graft(t, f, inner_bound=None):
    """A graft that forgets the last branch of the root; for negative controls."""
    out = F.graft(t, f, inner_bound)
    if isinstance(out, F.Leaf) or not out.domain.is_finite or len(out.domain) < 2:
        return out
    kids = out.branches()
    last = list(kids)[-1]
    kids[last] = F.Leaf("corrupted")
    return F.Node(out.position, out.domain, kids)
