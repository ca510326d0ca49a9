"""Tic-tac-toe: the rules tree, players over ``[p_side, t]``, matches, learning.

Boards are 9-character strings over ``X``, ``O`` and ``-`` (open), cells
numbered 0..8 row by row.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Iterable

from ..cofree import Behavior, constant
from ..effects import Effect, Lottery, MonadStructure, identity_monad, lottery_monad, point, sample, uniform
from ..errors import IllegalMove
from ..free import KleisliMap, Leaf, Node, Tree
from ..poly import (
    STAR, Finite, HomPosition, Polynomial, Y, coproduct, internal_hom, lazy_substitution, representable,
)

X, O, OPEN, TIE = "X", "O", "-", "Tie"
OUTCOMES = (O, TIE, X)
EMPTY = OPEN * 9

LINES = ((0, 1, 2), (3, 4, 5), (6, 7, 8), (0, 3, 6), (1, 4, 7), (2, 5, 8), (0, 4, 8), (2, 4, 6))

Board = str


def open_cells(b: Board) -> tuple:
    return tuple(i for i, c in enumerate(b) if c == OPEN)


def to_move(b: Board) -> str:
    return X if len(open_cells(b)) % 2 == 1 else O


def place(b: Board, cell: int, side: str) -> Board:
    if b[cell] != OPEN:
        raise IllegalMove(f"cell {cell} is taken on {b}")
    return b[:cell] + side + b[cell + 1:]


def winner(b: Board):
    for i, j, k in LINES:
        if b[i] != OPEN and b[i] == b[j] == b[k]:
            return b[i]
    return None


def valid_boards(m: int) -> set:
    """Boards with ``m`` open cells and ``#O ≤ #X ≤ #O + 1``."""
    if not 0 <= m <= 9:
        raise ValueError("m must be between 0 and 9")
    filled = 9 - m
    nx, no = (filled + 1) // 2, filled // 2
    out = set()
    for xs in itertools.combinations(range(9), nx):
        rest = [i for i in range(9) if i not in xs]
        for os_ in itertools.combinations(rest, no):
            cells = [OPEN] * 9
            for i in xs:
                cells[i] = X
            for i in os_:
                cells[i] = O
            out.add("".join(cells))
    return out


def render(b: Board) -> str:
    return "\n".join(" ".join(b[r * 3:r * 3 + 3]) for r in range(3))


@lru_cache(maxsize=None)
def side_polynomial(side: str) -> Polynomial:
    """``p_×`` (odd open counts) or ``p_○`` (even open counts)."""
    counts = (1, 3, 5, 7, 9) if side == X else (2, 4, 6, 8)
    return Polynomial((b, open_cells(b)) for m in counts for b in valid_boards(m))


@lru_cache(maxsize=None)
def rules_polynomial():
    """``p = p_× ◁ (y + p_○)``: an X move, then game over or an O move."""
    return lazy_substitution(side_polynomial(X), coproduct(Y, side_polynomial(O)))


OUTCOME_POLY = representable(OUTCOMES)

GAME_OVER = (0, STAR)


@dataclass(frozen=True)
class RulesTree:
    kmap: KleisliMap
    play_final_move: bool

    @property
    def root(self) -> Tree:
        return self.kmap(STAR)

    def at(self, b: Board) -> Tree:
        """Subtree for an X-to-move board (odd number of open cells)."""
        return self.kmap.body.at(b)


class _Builder:
    def __init__(self, play_final_move: bool):
        self.play_final_move = play_final_move
        self.memo: dict = {}
        self.p = rules_polynomial()

    def final(self, b: Board) -> Tree:
        """One open cell left."""
        if self.play_final_move and winner(b) is None:
            b = place(b, open_cells(b)[0], X)
        return Leaf(winner(b) or TIE)

    def after_o(self, b: Board) -> Tree:
        w = winner(b)
        if w is not None:
            return Leaf(w)
        if len(open_cells(b)) == 1:
            return self.final(b)
        return self.at(b)

    def at(self, b: Board) -> Tree:
        hit = self.memo.get(b)
        if hit is not None:
            return hit
        if len(open_cells(b)) == 1:
            out = self.final(b)
        else:
            assignment = []
            kids = {}
            for c in open_cells(b):
                b1 = place(b, c, X)
                if winner(b1) is not None or not open_cells(b1):
                    assignment.append((c, GAME_OVER))
                    kids[(c, STAR)] = Leaf(winner(b1) or TIE)
                    continue
                assignment.append((c, (1, b1)))
                for c2 in open_cells(b1):
                    kids[(c, c2)] = self.after_o(place(b1, c2, O))
            position = (b, tuple(assignment))
            out = Node(position, self.p.directions(position), kids)
        self.memo[b] = out
        return out

    def __call__(self, _star) -> Tree:
        return self.at(EMPTY)


def build_rules_tree(play_final_move: bool = False) -> RulesTree:
    """The decision tree of legal games, each leaf labelled X, O or Tie.

    A board with one open cell is scored as it stands unless
    ``play_final_move`` is set, in which case X fills it first.
    """
    builder = _Builder(play_final_move)
    return RulesTree(KleisliMap(OUTCOME_POLY, rules_polynomial(), builder), play_final_move)


def board_of(position) -> Board:
    return position[0]


# ---------------------------------------------------------------------------
# players


def strategy_player(side: str, f: Callable[[Board], tuple], t=None) -> Behavior:
    """One-state player; ``f(board)`` gives a ``t``-position and decoder to cells."""
    t = Y if t is None else t
    p = side_polynomial(side)

    def respond(b):
        J, decode = f(b)
        get = decode.__getitem__ if isinstance(decode, dict) else decode
        for d in t.directions(J).enumerate():
            c = get(d)
            if c not in p.directions(b):
                raise IllegalMove(f"{side} chose cell {c!r} on {b}")
        return J, decode

    return constant(internal_hom(p, t), HomPosition(p, t, respond))


def lottery_player(side: str, choose: Callable[[Board], Lottery]) -> Behavior:
    """Player whose move at a board is drawn from ``choose(board)`` over cells."""
    lm = lottery_monad()

    def f(b):
        eff = lm.from_lottery(choose(b))
        return eff.position, eff.decode

    return strategy_player(side, f, lm.carrier)


def first_open_player(side: str, as_lottery: bool = False) -> Behavior:
    """Always the lowest open cell; over ``y`` unless ``as_lottery``."""
    if not as_lottery:
        return strategy_player(side, lambda b: (STAR, {STAR: open_cells(b)[0]}))
    return lottery_player(side, lambda b: point(open_cells(b)[0]))


def uniform_player(side: str) -> Behavior:
    return lottery_player(side, lambda b: uniform(open_cells(b)))


# ---------------------------------------------------------------------------
# game play


def run_match(T: RulesTree, px: Behavior, po: Behavior, m: MonadStructure | None = None,
              board: Board = EMPTY) -> Effect:
    """Result of ``T`` played by ``px`` and ``po``, in the monad ``m``.

    At each node X is asked for a move; unless that ends the game, O is
    asked next.  Effects are sequenced with ``m``'s multiplication.
    """
    m = identity_monad() if m is None else m
    memo: dict = {}

    def go(cur: Tree, sx, so) -> Effect:
        if isinstance(cur, Leaf):
            return m.pure(cur.label)
        key = (id(cur), sx, so)
        hit = memo.get(key)
        if hit is not None:
            return hit
        b, assignment = cur.position
        after = dict(assignment)
        Jx, decx = px.output(sx).answer(b)

        def after_x(dx):
            c = decx(dx)
            sx2 = px.transition(sx, (b, dx))
            Q = after[c]
            if Q == GAME_OVER:
                return go(cur.child((c, STAR)), sx2, so)
            b1 = Q[1]
            Jo, deco = po.output(so).answer(b1)
            return m.bind(m.effect(Jo), lambda do: go(cur.child((c, deco(do))), sx2, po.transition(so, (b1, do))))

        out = m.bind(m.effect(Jx), after_x)
        memo[key] = out
        return out

    return go(T.at(board), px.current, po.current)


def match_distribution(T: RulesTree, px: Behavior, po: Behavior, board: Board = EMPTY) -> Lottery:
    lm = lottery_monad()
    return lm.distribution(run_match(T, px, po, lm, board))


def play_sampled(T: RulesTree, px: Behavior, po: Behavior, rng, board: Board = EMPTY):
    """One game drawn move by move; returns the outcome and X's ``(board, cell)`` moves."""
    cur = T.at(board)
    sx, so = px.current, po.current
    played = []
    while not isinstance(cur, Leaf):
        b, assignment = cur.position
        Jx, decx = px.output(sx).answer(b)
        dx = _draw(Jx, rng)
        c = decx(dx)
        played.append((b, c))
        sx = px.transition(sx, (b, dx))
        Q = dict(assignment)[c]
        if Q == GAME_OVER:
            cur = cur.child((c, STAR))
            continue
        b1 = Q[1]
        Jo, deco = po.output(so).answer(b1)
        do = _draw(Jo, rng)
        so = po.transition(so, (b1, do))
        cur = cur.child((c, deco(do)))
    return cur.label, played


def _draw(J, rng):
    return sample(J, rng) if isinstance(J, Lottery) else STAR


# ---------------------------------------------------------------------------
# learning


@dataclass(frozen=True)
class ScoreTable:
    """Natural-number score per ``(board, cell)``; unseen pairs score 0."""

    scores: dict = field(default_factory=dict)

    def get(self, b: Board, c: int) -> int:
        return self.scores.get((b, c), 0)

    def probabilities(self, b: Board) -> Lottery:
        cells = open_cells(b)
        weights = [self.get(b, c) + 1 for c in cells]
        total = sum(weights)
        return Lottery((c, Fraction(w, total)) for c, w in zip(cells, weights))

    def reinforce(self, moves: Iterable[tuple[Board, int]]) -> "ScoreTable":
        new = dict(self.scores)
        for key in moves:
            new[key] = new.get(key, 0) + 1
        return ScoreTable(new)

    def __eq__(self, other):
        return isinstance(other, ScoreTable) and self.scores == other.scores

    def dumps(self) -> str:
        return "".join(f"{b} {c} {s}\n" for (b, c), s in sorted(self.scores.items()))

    @classmethod
    def loads(cls, text: str) -> "ScoreTable":
        out = {}
        for raw in text.splitlines():
            if not raw.strip():
                continue
            b, c, s = raw.split()
            if len(b) != 9 or any(ch not in "XO-" for ch in b):
                raise ValueError(f"bad board {b!r}")
            s = int(s)
            if s < 0:
                raise ValueError("scores are naturals")
            out[(b, int(c))] = s
        return cls(out)


def learning_player(scores: ScoreTable):
    """Stochastic X player from ``scores`` and its update rule."""
    player = lottery_player(X, scores.probabilities)

    def update(outcome, played) -> ScoreTable:
        return scores.reinforce(played) if outcome == X else scores

    return player, update


@dataclass
class TrainingResult:
    scores: ScoreTable
    win_rates: list


def train(episodes: int, seed: int, opponent: Behavior | None = None, T: RulesTree | None = None,
          epoch: int = 100, learn: bool = True) -> TrainingResult:
    """Play ``episodes`` sampled games, reinforcing X's moves after each X win.

    ``win_rates`` holds the X win rate of each block of ``epoch`` games.
    With ``learn=False`` the table never changes (the uniform baseline).
    """
    if episodes < 1:
        raise ValueError("need at least one episode")
    T = build_rules_tree() if T is None else T
    opponent = uniform_player(O) if opponent is None else opponent
    rng = random.Random(seed)
    scores = ScoreTable()
    rates, wins, played_in_epoch = [], 0, 0
    for _ in range(episodes):
        player, update = learning_player(scores)
        outcome, moves = play_sampled(T, player, opponent, rng)
        if learn:
            scores = update(outcome, moves)
        wins += outcome == X
        played_in_epoch += 1
        if played_in_epoch == epoch:
            rates.append(wins / epoch)
            wins = played_in_epoch = 0
    if played_in_epoch:
        rates.append(wins / played_in_epoch)
    return TrainingResult(scores, rates)


def evaluate(scores: ScoreTable, games: int, seed: int, opponent: Behavior | None = None,
             T: RulesTree | None = None) -> float:
    """X win rate of the frozen table over sampled games."""
    T = build_rules_tree() if T is None else T
    opponent = uniform_player(O) if opponent is None else opponent
    rng = random.Random(seed)
    player, _ = learning_player(scores)
    wins = sum(play_sampled(T, player, opponent, rng)[0] == X for _ in range(games))
    return wins / games
