"""Wellfounded decision trees: the free monad on a polynomial.

A tree is either a :class:`Leaf` carrying a label or a :class:`Node` sitting
at a position of the underlying polynomial with one subtree per direction.
Finite direction sets are tabulated (possibly on first access); naturals
branching is function-backed and carries a declared depth bound so the tree
stays certifiably wellfounded.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Hashable, Iterator, Mapping

from .errors import EnumerationRequired, MissingBranch
from .poly import DEFAULT_BUDGET, STAR, DirectionDomain, PolyMap, Poly, as_domain, canon_key


@dataclass(frozen=True)
class Leaf:
    label: Any

    depth = 0

    def __repr__(self):
        return f"Leaf({self.label!r})"


class Node:
    """A question ``position`` with a subtree for every direction in ``domain``.

    ``branches`` is either a mapping covering the domain exactly, or a
    callable.  Callable branches need ``depth``: for finite domains it is the
    exact depth (children are built and cached on access), for infinite
    domains it is the declared bound.
    """

    __slots__ = ("position", "domain", "depth", "_table", "_fn")

    def __init__(self, position, domain, branches, depth: int | None = None):
        self.position = position
        self.domain = domain = as_domain(domain)
        if callable(branches) and not isinstance(branches, Mapping):
            if depth is None:
                raise ValueError("function-backed branches need a declared depth bound")
            self._fn = branches
            self._table = None
            self.depth = depth
            return
        table = dict(branches)
        if not domain.is_finite:
            raise EnumerationRequired("naturals-branching nodes must be function-backed")
        missing = [d for d in domain if d not in table]
        if missing:
            raise MissingBranch(f"no subtree for directions {missing!r} at {position!r}")
        extra = [d for d in table if d not in domain]
        if extra:
            raise MissingBranch(f"directions {extra!r} are not in the domain at {position!r}")
        self._table = table
        self._fn = None
        self.depth = 1 + max((t.depth for t in table.values()), default=0) if depth is None else depth

    @property
    def is_tabulated(self) -> bool:
        return self.domain.is_finite

    def child(self, d) -> "Tree":
        if self._table is not None and d in self._table:
            return self._table[d]
        if d not in self.domain:
            raise KeyError(f"{d!r} is not a direction at {self.position!r}")
        sub = self._fn(d)
        if self.domain.is_finite:
            if self._table is None:
                self._table = {}
            self._table[d] = sub
        return sub

    def branches(self, budget: int | None = None) -> dict:
        """All subtrees; infinite domains need a sampling budget."""
        return {d: self.child(d) for d in self.domain.enumerate(budget)}

    def __eq__(self, other):
        if not isinstance(other, (Node, Leaf)):
            return NotImplemented
        return tree_equal(self, other)

    __hash__ = None

    def __repr__(self):
        return f"Node({self.position!r}, depth={self.depth})"


Tree = Leaf | Node


def ret(label=STAR) -> Leaf:
    """Unit of the free monad."""
    return Leaf(label)


def node(position, branches, poly: Poly | None = None, *, domain=None, depth=None) -> Node:
    """Build a node, taking the direction set from ``poly`` when given."""
    if domain is None:
        if poly is None:
            raise ValueError("need the polynomial or an explicit domain")
        domain = poly.directions(position)
    return Node(position, domain, branches, depth)


# ---------------------------------------------------------------------------
# traversal helpers


def _children(t: Node, budget: int | None) -> list[tuple[Any, Tree]]:
    return [(d, t.child(d)) for d in t.domain.enumerate(budget)]


def iter_paths(t: Tree, budget: int | None = None) -> Iterator[tuple[tuple, Any]]:
    """Yield ``(((position, direction), ...), leaf_label)`` for every root-to-leaf path."""
    stack = [(t, ())]
    while stack:
        cur, path = stack.pop()
        if isinstance(cur, Leaf):
            yield path, cur.label
            continue
        for d, sub in reversed(_children(cur, budget)):
            stack.append((sub, path + ((cur.position, d),)))


def leaves(t: Tree, budget: int | None = None) -> list:
    return [label for _, label in iter_paths(t, budget)]


def count_leaves(t: Tree, budget: int | None = None) -> int:
    """Number of root-to-leaf paths; shared subtrees are counted once per path."""
    return sum(count_leaf_labels(t, budget).values())


def count_leaf_labels(t: Tree, budget: int | None = None) -> dict:
    memo: dict[int, dict] = {}

    def go(cur):
        key = id(cur)
        if key in memo:
            return memo[key]
        if isinstance(cur, Leaf):
            res = {cur.label: 1}
        else:
            res = {}
            for _, sub in _children(cur, budget):
                for label, n in go(sub).items():
                    res[label] = res.get(label, 0) + n
        memo[key] = res
        return res

    return go(t)


def leaf_label_set(t: Tree, budget: int | None = None) -> set:
    return set(count_leaf_labels(t, budget))


def tree_equal(t1: Tree, t2: Tree, budget: int = DEFAULT_BUDGET) -> bool:
    """Structural equality; infinite branchings compared on ``range(budget)``."""
    seen = set()
    stack = [(t1, t2)]
    while stack:
        a, b = stack.pop()
        if a is b:
            continue
        key = (id(a), id(b))
        if key in seen:
            continue
        seen.add(key)
        if isinstance(a, Leaf) or isinstance(b, Leaf):
            if not (isinstance(a, Leaf) and isinstance(b, Leaf) and a.label == b.label):
                return False
            continue
        if a.position != b.position or a.domain != b.domain:
            return False
        for d in a.domain.enumerate(budget):
            stack.append((a.child(d), b.child(d)))
    return True


# ---------------------------------------------------------------------------
# monad structure


def graft(t: Tree, f: Callable[[Any], Tree], inner_bound: int | None = None) -> Tree:
    """Replace every leaf ``l`` of ``t`` by ``f(l)``.

    Runs on an explicit work stack.  Function-backed nodes stay lazy and need
    ``inner_bound``, an upper bound on the depth of every ``f(l)``.
    """
    cache: dict[int, Tree] = {}
    leaf_cache: dict[Any, Tree] = {}

    def leaf_image(label):
        try:
            return leaf_cache[label]
        except KeyError:
            out = leaf_cache[label] = f(label)
            return out
        except TypeError:
            return f(label)

    stack: list[tuple[Tree, bool]] = [(t, False)]
    while stack:
        cur, expanded = stack.pop()
        key = id(cur)
        if key in cache:
            continue
        if isinstance(cur, Leaf):
            cache[key] = leaf_image(cur.label)
            continue
        if not cur.domain.is_finite:
            if inner_bound is None:
                raise EnumerationRequired("grafting onto naturals-branching nodes needs inner_bound")
            cache[key] = _lazy_graft(cur, f, inner_bound)
            continue
        kids = cur.branches()
        if not expanded:
            stack.append((cur, True))
            for sub in kids.values():
                if id(sub) not in cache:
                    stack.append((sub, False))
            continue
        cache[key] = Node(cur.position, cur.domain, {d: cache[id(sub)] for d, sub in kids.items()})
    return cache[id(t)]


def _lazy_graft(n: Node, f, inner_bound: int) -> Node:
    return Node(n.position, n.domain, lambda d: graft(n.child(d), f, inner_bound),
                depth=n.depth + inner_bound)


def join(tt: Tree) -> Tree:
    """Multiplication: a tree whose leaves are trees, flattened."""
    return graft(tt, lambda sub: sub)


def map_leaves(t: Tree, g: Callable[[Any], Any]) -> Tree:
    return graft(t, lambda label: Leaf(g(label)), inner_bound=0)


def map_tree(f: PolyMap, t: Tree) -> Tree:
    """Push a tree over ``f.source`` forward to a tree over ``f.target``.

    Children are pulled back lazily, so walking a single path of a huge
    tree only touches that path.
    """
    memo: dict[int, tuple] = {}

    def go(cur: Tree) -> Tree:
        key = id(cur)
        hit = memo.get(key)
        if hit is not None and hit[0] is cur:
            return hit[1]
        if isinstance(cur, Leaf):
            out = cur
        else:
            P = cur.position
            Q = f.on_positions(P)
            out = Node(Q, f.target.directions(Q), lambda e, cur=cur, P=P: go(cur.child(f.on_directions(P, e))),
                       depth=cur.depth)
        memo[key] = (cur, out)
        return out

    return go(t)


def depth(t: Tree) -> int:
    return t.depth


@dataclass(frozen=True)
class DepthBound:
    """Finite stage index: trees of depth at most ``value`` live in that stage."""

    value: int

    def certifies(self, t: Tree) -> bool:
        return t.depth <= self.value

    def __add__(self, other: "DepthBound") -> "DepthBound":
        return DepthBound(self.value + other.value)


def stage(t: Tree) -> DepthBound:
    return DepthBound(t.depth)


# ---------------------------------------------------------------------------
# fixed point  m_p ≅ y + p ◁ m_p


def unroll(t: Tree):
    """``Leaf`` unchanged, or ``(position, branches)`` for a node."""
    if isinstance(t, Leaf):
        return t
    if t.domain.is_finite:
        return (t.position, t.branches())
    return (t.position, t.child)


def reroll(v, poly: Poly | None = None, *, domain=None, depth=None) -> Tree:
    if isinstance(v, Leaf):
        return v
    position, branches = v
    return node(position, branches, poly, domain=domain, depth=depth)


# ---------------------------------------------------------------------------
# interpretation into a monad


def fold_into_monad(t: Tree, m, alg: Callable[[Any], tuple[Any, Any]], budget: int | None = None):
    """Interpret a tree in the monad ``m``.

    ``alg(P)`` gives an ``m``-position ``J`` and a decoder from directions of
    ``m`` at ``J`` to directions of ``P``.  Leaves become ``m.pure`` and
    nodes sequence ``alg`` with the recursively folded branches.
    """
    memo: dict[int, tuple] = {}

    def go(cur):
        hit = memo.get(id(cur))
        if hit is not None and hit[0] is cur:
            return hit[1]
        if isinstance(cur, Leaf):
            out = m.pure(cur.label)
        else:
            J, decode = alg(cur.position)
            if isinstance(decode, Mapping):
                decode = decode.__getitem__
            out = m.bind(m.effect(J), lambda d, cur=cur, decode=decode: go(cur.child(decode(d))))
        memo[id(cur)] = (cur, out)
        return out

    return go(t)


# ---------------------------------------------------------------------------
# Kleisli maps r → m_p


@dataclass(frozen=True, eq=False)
class KleisliMap:
    """Per source position R, a tree over ``signature`` with leaves in ``source[R]``."""

    source: Any
    signature: Any
    body: Callable[[Any], Tree]

    def __call__(self, R) -> Tree:
        return self.body(R)

    def validate(self, R, budget: int | None = None) -> None:
        allowed = self.source.directions(R)
        for _, label in iter_paths(self.body(R), budget):
            if label not in allowed:
                raise ValueError(f"leaf label {label!r} is not a direction at {R!r}")


# ---------------------------------------------------------------------------
# text format: (node P (d subtree) ...) / (leaf L)


def dumps_tree(t: Tree) -> str:
    lines: list[str] = []

    def go(cur, indent):
        pad = "  " * indent
        if isinstance(cur, Leaf):
            lines.append(f"{pad}(leaf {_atom(cur.label)})")
            return
        lines.append(f"{pad}(node {_atom(cur.position)}")
        for d in cur.domain.enumerate():
            lines.append(f"{pad}  ({_atom(d)}")
            go(cur.child(d), indent + 2)
            lines[-1] += ")"
        lines[-1] += ")"

    go(t, 0)
    return "\n".join(lines) + "\n"


def _atom(x) -> str:
    s = str(x)
    if any(c in s for c in " ()\n") or s == "":
        raise ValueError(f"label {x!r} cannot be written as an atom")
    return s


def _parse_atom(tok: str):
    if tok.isdigit():
        return int(tok)
    if tok in ("True", "False"):
        return tok == "True"
    return tok


def _tokenize(text: str) -> list[str]:
    return text.replace("(", " ( ").replace(")", " ) ").split()


def loads_tree(text: str, poly: Poly | None = None) -> Tree:
    """Parse :func:`dumps_tree` output.  Atoms that are digits become ints."""
    toks = _tokenize(text)
    pos = 0

    def expect(tok):
        nonlocal pos
        if toks[pos] != tok:
            raise ValueError(f"expected {tok!r}, got {toks[pos]!r}")
        pos += 1

    def parse():
        nonlocal pos
        expect("(")
        kind = toks[pos]
        pos += 1
        if kind == "leaf":
            label = _parse_atom(toks[pos])
            pos += 1
            expect(")")
            return Leaf(label)
        if kind != "node":
            raise ValueError(f"unknown form {kind!r}")
        P = _parse_atom(toks[pos])
        pos += 1
        branches = {}
        while toks[pos] == "(":
            pos += 1
            d = _parse_atom(toks[pos])
            pos += 1
            branches[d] = parse()
            expect(")")
        expect(")")
        domain = poly.directions(P) if poly is not None else list(branches)
        return Node(P, domain, branches)

    t = parse()
    if pos != len(toks):
        raise ValueError("trailing tokens after tree")
    return t


# ---------------------------------------------------------------------------
# random trees


def random_tree(rng, poly, max_depth: int, labels=(STAR,), leaf_prob: float = 0.3) -> Tree:
    """Random finite tree over an enumerable polynomial with finite directions."""
    positions = list(poly.labels)

    def go(d):
        if d == 0 or not positions or rng.random() < leaf_prob:
            return Leaf(rng.choice(labels))
        P = rng.choice(positions)
        dom = poly.directions(P)
        return Node(P, dom, {e: go(d - 1) for e in dom})

    return go(max_depth)
