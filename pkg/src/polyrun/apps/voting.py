"""Exhaustive run-off elections: ballots, voters, runs, and gerrymandering."""
from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Sequence

from ..cofree import Behavior, constant, laxator_many
from ..errors import VoterCountMismatch
from ..free import KleisliMap, Leaf, Node, Tree
from ..interaction import xi
from ..poly import STAR, HomPosition, Polynomial, Y, canonical_sorted, internal_hom, lazy_tensor_power, nest, unnest


def ballot(A) -> tuple:
    return tuple(canonical_sorted(set(A)))


def ballot_polynomial(X) -> Polynomial:
    """One position per subset of ``X``; the directions at ``A`` are ``A``."""
    X = ballot(X)
    subsets = [c for r in range(len(X) + 1) for c in itertools.combinations(X, r)]
    return Polynomial((A, A) for A in subsets)


def nonempty_ballots(X) -> Polynomial:
    """Ballots a voter can answer; the empty ballot has no answer."""
    return Polynomial((A, A) for A, _ in ballot_polynomial(X).positions if A)


def eliminate(A: tuple, choices: Sequence) -> tuple:
    """Drop every candidate of ``A`` with the fewest votes."""
    tally = Counter(choices)
    low = min(tally.get(a, 0) for a in A)
    return tuple(a for a in A if tally.get(a, 0) != low)


@dataclass(frozen=True)
class Election:
    candidates: tuple
    voter_count: int
    scheme: KleisliMap

    @property
    def ballots(self) -> Polynomial:
        return self.scheme.source


def _reachable_depth(n: int, M: int) -> int:
    """Exact depth of the run-off tree on ``n`` candidates with ``M`` voters."""
    @lru_cache(maxsize=None)
    def go(k):
        if k <= 1:
            return 0 if k == 1 else 1
        sizes = set()
        for counts in _compositions(M, k):
            low = min(counts)
            sizes.add(sum(1 for c in counts if c != low))
        return 1 + max(go(s) for s in sizes)

    return go(n)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def exhaustive_runoff(X, M: int) -> Election:
    """Each round every voter names a candidate; the least-voted are removed."""
    if M < 1:
        raise ValueError("need at least one voter")
    X = ballot(X)
    p = ballot_polynomial(X)
    sig = lazy_tensor_power(p, M)

    @lru_cache(maxsize=None)
    def body(A) -> Tree:
        A = ballot(A)
        if len(A) == 1:
            return Leaf(A[0])
        position = nest([A] * M)
        dom = sig.directions(position)
        if not A:
            return Node(position, dom, {})
        return Node(position, dom, lambda dd: body(eliminate(A, unnest(dd, M))),
                    depth=_reachable_depth(len(A), M))

    return Election(X, M, KleisliMap(p, sig, body))


@dataclass(frozen=True)
class Voter:
    machine: Behavior


def voter_from_ranking(ranking: Sequence, X=None) -> Voter:
    """Answer every ballot with its highest-ranked member."""
    ranking = tuple(ranking)
    X = ballot(ranking if X is None else X)
    p = nonempty_ballots(X)
    order = {c: i for i, c in enumerate(ranking)}

    def respond(A):
        return STAR, {STAR: min(A, key=order.__getitem__)}

    return Voter(constant(internal_hom(p), HomPosition(p, Y, respond)))


def voter(machine: Behavior) -> Voter:
    return Voter(machine)


def parse_ranking(line: str) -> tuple:
    return tuple(x.strip() for x in line.strip().split(">"))


def run_election(e: Election, A, voters: Sequence[Voter]) -> tuple[int, Any]:
    """``(rounds, winner)``; the winner is ``None`` when every candidate is eliminated."""
    if len(voters) != e.voter_count:
        raise VoterCountMismatch(f"election expects {e.voter_count} voters, got {len(voters)}")
    M = e.voter_count
    matter = laxator_many([v.machine for v in voters])
    cur = xi(e.scheme(ballot(A)), matter)
    rounds = 0
    while not isinstance(cur, Leaf):
        if cur.domain.size == 0:
            return rounds, None
        ballots, answerers = cur.position
        Ps = unnest(ballots, M)
        hs = unnest(answerers, M)
        choices = [h.answer(P)[1](STAR) for P, h in zip(Ps, hs)]
        dp = nest(choices)
        dq = nest([(P, STAR) for P in Ps])
        cur = cur.child((dp, dq))
        rounds += 1
    return rounds, cur.label


@dataclass(frozen=True)
class Witness:
    profile: tuple
    direct: Any
    districted: Any
    trial: int


class _NotFound:
    def __repr__(self):
        return "NotFound"

    def __bool__(self):
        return False


NotFound = _NotFound()


def districted_winner(X, profile: Sequence[Sequence], M: int, N: int):
    """Run-off inside each district of ``M`` voters, then among district winners.

    Each district sends one voter to the final: its first voter's ranking
    restricted to the finalists.
    """
    X = ballot(X)
    local = exhaustive_runoff(X, M)
    winners = []
    for i in range(N):
        district = profile[i * M:(i + 1) * M]
        _, w = run_election(local, X, [voter_from_ranking(r) for r in district])
        if w is not None:
            winners.append((w, district[0]))
    if not winners:
        return None
    finalists = ballot(w for w, _ in winners)
    final = exhaustive_runoff(X, len(winners))
    delegates = [voter_from_ranking(r, X) for _, r in winners]
    return run_election(final, finalists, delegates)[1]


def gerrymander_witness(X, M: int, N: int, search_budget: int, seed: int = 0):
    """First random profile whose direct and districted winners differ."""
    X = ballot(X)
    rng = random.Random(seed)
    direct = exhaustive_runoff(X, M * N)
    for trial in range(search_budget):
        profile = tuple(tuple(rng.sample(X, len(X))) for _ in range(M * N))
        _, w_direct = run_election(direct, X, [voter_from_ranking(r) for r in profile])
        w_dist = districted_winner(X, profile, M, N)
        if w_direct != w_dist:
            return Witness(profile, w_direct, w_dist, trial)
    return NotFound
