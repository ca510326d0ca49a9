"""The tea interview: a questionnaire run on people who answer it."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, TextIO

from ..cofree import Behavior, constant, from_tables
from ..errors import CarrierMismatch
from ..free import Leaf, Node, Tree, node
from ..interaction import RunTranscript, read_linear, run_on, transcript
from ..poly import STAR, Polynomial, answerer, eval_map, internal_hom, polynomial

TEA = "Tea?"
KIND = "Kind?"


@dataclass(frozen=True)
class Questionnaire:
    poly: Polynomial
    script: Tree

    def __post_init__(self):
        stack = [self.script]
        while stack:
            cur = stack.pop()
            if isinstance(cur, Leaf):
                continue
            if not self.poly.has_position(cur.position):
                raise CarrierMismatch(f"{cur.position!r} is not a question of the polynomial")
            stack.extend(cur.branches().values())


def tea_polynomial() -> Polynomial:
    return polynomial({TEA: ["yes", "no"], KIND: ["green", "black", "herbal"]})


def tea_interview() -> Questionnaire:
    """Ask about tea; on yes ask the kind, on no ask again."""
    p = tea_polynomial()

    def kind():
        return node(KIND, {a: Leaf(STAR) for a in p.directions(KIND)}, p)

    script = node(TEA, {"yes": kind(), "no": node(TEA, {"yes": kind(), "no": Leaf(STAR)}, p)}, p)
    return Questionnaire(p, script)


@dataclass(frozen=True)
class Person:
    machine: Behavior


def person(machine: Behavior, p: Polynomial | None = None) -> Person:
    p = tea_polynomial() if p is None else p
    if machine.carrier != internal_hom(p):
        raise CarrierMismatch("a person must be a machine over the universal answerer [p, y]")
    return Person(machine)


def alice() -> Person:
    """Never wants tea, likes herbal."""
    p = tea_polynomial()
    return person(constant(internal_hom(p), answerer(p, {TEA: "no", KIND: "herbal"})), p)


def bob() -> Person:
    """Declines at first and likes black; after any question he wants tea."""
    p = tea_polynomial()
    hom = internal_hom(p)
    outputs = {
        "declining": answerer(p, {TEA: "no", KIND: "black"}),
        "accepting": answerer(p, {TEA: "yes", KIND: "black"}),
    }
    transitions = {(s, (P, STAR)): "accepting" for s in outputs for P in p.labels}
    return person(from_tables(hom, outputs, transitions, "declining"), p)


def run_interview(q: Questionnaire, pn: Person) -> tuple[int, RunTranscript]:
    """Number of questions asked, and the path taken."""
    collapse = eval_map(q.poly)
    count = len(read_linear(run_on(q.script, pn.machine, collapse)))
    return count, transcript(q.script, pn.machine, collapse)


def format_transcript(tr: RunTranscript) -> str:
    """Human-facing lines ``question -> answer``."""
    lines = [f"{P} -> {dp}" for P, _, dp, _ in tr.path]
    lines.append(f"questions: {len(tr.path)}")
    return "\n".join(lines) + "\n"


def run_interactive(q: Questionnaire, read: Callable[[], str], out: TextIO) -> int:
    """A human at ``read`` is the matter; re-prompt until the answer is valid."""
    cur = q.script
    count = 0
    while not isinstance(cur, Leaf):
        allowed = list(cur.domain)
        while True:
            out.write(f"{cur.position} [{'/'.join(map(str, allowed))}]: ")
            out.flush()
            raw = read()
            if raw is None or raw == "":
                raise EOFError("input ended before the interview finished")
            ans = raw.strip()
            if ans in cur.domain:
                break
            out.write(f"please answer one of: {', '.join(map(str, allowed))}\n")
        cur = cur.child(ans)
        count += 1
    out.write(f"questions: {count}\n")
    return count
