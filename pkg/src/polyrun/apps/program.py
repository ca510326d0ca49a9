"""The guessing game as a program over ``y^ℕ`` run on stream operating systems."""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

from ..cofree import Behavior
from ..effects import identity_monad
from ..free import KleisliMap, Leaf, Node, Tree
from ..interaction import read_linear, run_against_answerer, run_on
from ..poly import NATURALS, STAR, Finite, HomPosition, LazyPolynomial, Y, eval_map, internal_hom, representable

READ = STAR


def read_polynomial():
    """``y^ℕ``: one effect, ``read()``, answered by a natural number."""
    return representable(NATURALS)


def _is_nat(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool) and x >= 0


def argument_polynomial() -> LazyPolynomial:
    """``Σ_{m,g} y^Bool``."""
    def member(x):
        return isinstance(x, tuple) and len(x) == 2 and _is_nat(x[0]) and _is_nat(x[1])

    def sampler(budget):
        return [(m, g) for m in range(budget) for g in range(budget)][:budget]

    return LazyPolynomial(member, lambda x: Finite([False, True]), sampler, ("guess-args",))


@dataclass(frozen=True)
class GuessProgram:
    kmap: KleisliMap

    def tree(self, m: int, g: int) -> Tree:
        return self.kmap((m, g))


def guessing_game_program() -> GuessProgram:
    """Read up to ``m`` numbers; ``True`` as soon as one equals ``g``."""
    @lru_cache(maxsize=None)
    def body(mg) -> Tree:
        m, g = mg
        if m == 0:
            return Leaf(False)
        rest = body((m - 1, g))
        hit = Leaf(True)
        return Node(READ, NATURALS, lambda k: hit if k == g else rest, depth=m)

    return GuessProgram(KleisliMap(argument_polynomial(), read_polynomial(), body))


@dataclass(frozen=True)
class Stream:
    """Eventually periodic stream ``prefix`` then ``cycle`` repeated forever."""

    prefix: tuple
    cycle: tuple

    def __post_init__(self):
        if not self.cycle:
            raise ValueError("a stream needs a nonempty cycle")
        for x in self.prefix + self.cycle:
            if not _is_nat(x):
                raise ValueError(f"stream entries must be naturals, got {x!r}")

    def normalize(self, k: int) -> int:
        n = len(self.prefix)
        return k if k < n else n + (k - n) % len(self.cycle)

    def at(self, k: int) -> int:
        k = self.normalize(k)
        n = len(self.prefix)
        return self.prefix[k] if k < n else self.cycle[k - n]

    def take(self, n: int) -> list:
        return [self.at(k) for k in range(n)]

    def __str__(self):
        body = [str(x) for x in self.prefix]
        body.append("(" + ",".join(map(str, self.cycle)) + ")*")
        return ",".join(body)

    @classmethod
    def parse(cls, text: str) -> "Stream":
        """``"3,5,(0)*"``; a list without a cycle repeats as a whole."""
        text = text.strip()
        if text.startswith("stream:"):
            text = text[len("stream:"):].strip()
        text = text.replace("...", "")
        m = re.fullmatch(r"(.*?)\(([^()]*)\)\*", text)
        if m:
            head, cyc = m.group(1), m.group(2)
        else:
            head, cyc = "", text
        prefix = tuple(int(x) for x in head.split(",") if x.strip())
        cycle = tuple(int(x) for x in cyc.split(",") if x.strip())
        return cls(prefix, cycle)


def stream(values, cycle=None) -> Stream:
    if cycle is None:
        return Stream((), tuple(values))
    return Stream(tuple(values), tuple(cycle))


def os_from_stream(s: Stream | str | list) -> Behavior:
    """Operating system answering the ``k``-th read with ``s[k]``."""
    if isinstance(s, str):
        s = Stream.parse(s)
    elif not isinstance(s, Stream):
        s = stream(s)
    p = read_polynomial()
    answers = {}

    def output(k):
        h = answers.get(k)
        if h is None:
            v = s.at(k)
            h = answers[k] = HomPosition(p, Y, lambda P, v=v: (STAR, {STAR: v}))
        return h

    return Behavior(internal_hom(p), output, lambda k, d: s.normalize(k + 1), 0)


def answer_value(h: HomPosition) -> int:
    """The natural a ``[y^ℕ, y]`` position answers; this is the iso with ``ℕ y``."""
    _, decode = h.answer(READ)
    return decode(STAR)


def run_program(m: int, g: int, os: Behavior, program: GuessProgram | None = None) -> tuple[int, bool]:
    """``(reads, result)`` from running the game against an operating system."""
    program = guessing_game_program() if program is None else program
    t = program.tree(m, g)
    result = identity_monad().value(run_against_answerer(t, os, identity_monad()))
    reads = len(read_linear(run_on(t, os, eval_map(read_polynomial()))))
    return reads, result
