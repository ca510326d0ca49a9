"""Running wellfounded trees against behaviours.

``xi`` pairs a tree over ``p`` with a machine over ``q`` and follows the
tree's shape, giving a tree over ``p ⊗ q``.  Everything else here is a
composite of ``xi`` with a map out of ``p ⊗ q``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from .cofree import Behavior, counit
from .effects import Effect, MonadStructure
from .free import Leaf, Node, Tree, map_tree
from .poly import STAR, PolyMap, Y, dirichlet, linear, pair_domain


def xi(t: Tree, b: Behavior) -> Tree:
    """The interaction ``m_p ⊗ c_q → m_{p⊗q}``.

    Children are built on demand, so a single path through a wide tree
    (or a naturals-branching one) costs only that path.
    """
    q = b.carrier
    memo: dict = {}

    def go(cur: Tree, state) -> Tree:
        if isinstance(cur, Leaf):
            return cur
        try:
            key = (id(cur), state)
            hit = memo.get(key)
        except TypeError:
            key = hit = None
        if hit is not None and hit[0] is cur:
            return hit[1]
        Q = b.output(state)
        dom = pair_domain(cur.domain, q.directions(Q))

        def kid(dd, cur=cur, state=state):
            dp, dq = dd
            return go(cur.child(dp), b.transition(state, dq))

        out = Node((cur.position, Q), dom, kid, depth=cur.depth)
        if key is not None:
            memo[key] = (cur, out)
        return out

    return go(t, b.current)


def run_on(t: Tree, b: Behavior, f: PolyMap) -> Tree:
    """``map_tree(f, xi(t, b))`` for ``f: p ⊗ q → r``."""
    return map_tree(f, xi(t, b))


def run_against_answerer(t: Tree, h: Behavior, m: MonadStructure) -> Effect:
    """Run ``t`` against a machine over ``[p, t_m]``, collecting effects in ``m``.

    At a question ``P`` the machine's current answerer gives an ``m``-position
    ``J`` and a decoder ``J``-directions → ``P``-directions; the machine then
    steps along ``(P, d_t)``.
    """
    def go(cur: Tree, state) -> Effect:
        if isinstance(cur, Leaf):
            return m.pure(cur.label)
        P = cur.position
        J, decode = h.output(state).answer(P)
        return m.bind(m.effect(J), lambda dt: go(cur.child(decode(dt)), h.transition(state, (P, dt))))

    return go(t, h.current)


# ---------------------------------------------------------------------------
# linear trees and the Moore pipeline


def linear_tree(items: Sequence, poly=None) -> Tree:
    """The element of ``m_{A y}`` spelling out ``items``."""
    domain = [STAR]
    t: Tree = Leaf(STAR)
    for a in reversed(list(items)):
        t = Node(a, domain, {STAR: t})
    return t


def read_linear(t: Tree) -> list:
    """Positions along a tree whose every node has a single direction."""
    out = []
    while not isinstance(t, Leaf):
        (d,) = t.domain.enumerate()
        out.append(t.position)
        t = t.child(d)
    return out


def moore_phi(A, moore_carrier) -> PolyMap:
    """``A y ⊗ B y^A → B y``: show the output, feed the input."""
    src = dirichlet(linear(A), moore_carrier)
    tgt = linear(moore_carrier.labels)
    return PolyMap(src, tgt, lambda ab: ab[1], lambda ab, e: (STAR, ab[0]))


def moore_pipeline(inputs: Sequence, machine: Behavior) -> list:
    """Outputs of a Moore machine over ``inputs``, one per input."""
    carrier = machine.carrier
    A = carrier.directions(carrier.labels[0]).enumerate() if len(carrier) else []
    return read_linear(run_on(linear_tree(inputs), machine, moore_phi(A, carrier)))


# ---------------------------------------------------------------------------
# transcripts


@dataclass
class RunTranscript:
    path: list = field(default_factory=list)
    result: Any = None

    def __len__(self):
        return len(self.path)

    @property
    def pattern_positions(self) -> list:
        return [step[0] for step in self.path]

    def dumps(self) -> str:
        lines = [" | ".join(str(x) for x in step) for step in self.path]
        lines.append(f"result: {self.result}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "RunTranscript":
        """Fields come back as strings."""
        path = []
        result = None
        for raw in text.splitlines():
            line = raw.strip()
            if not line:
                continue
            if line.startswith("result:"):
                result = line[len("result:"):].strip()
                continue
            parts = [x.strip() for x in line.split(" | ")]
            if len(parts) != 4:
                raise ValueError(f"bad transcript line: {raw!r}")
            path.append(tuple(parts))
        return cls(path, result)


def transcript(t: Tree, b: Behavior, collapse: PolyMap) -> RunTranscript:
    """Walk ``xi(t, b)`` along the single path selected by ``collapse: p ⊗ q → y``."""
    cur = xi(t, b)
    steps = []
    while not isinstance(cur, Leaf):
        P, Q = cur.position
        dp, dq = collapse.on_directions(cur.position, STAR)
        steps.append((P, Q, dp, dq))
        cur = cur.child((dp, dq))
    return RunTranscript(steps, cur.label)


def collapse_to_y(source, choose: Callable[[Any], Any]) -> PolyMap:
    """A map ``source → y`` picking ``choose(position)`` as the single pulled-back direction."""
    return PolyMap(source, Y, lambda P: STAR, lambda P, e: choose(P))
