import itertools
import random
from fractions import Fraction

import pytest

from polyrun import free as F
from polyrun.apps import game as G
from polyrun.effects import identity_monad, point, uniform
from polyrun.errors import IllegalMove


@pytest.fixture(scope="module")
def T():
    return G.build_rules_tree()


def brute_boards(m):
    out = set()
    for cells in itertools.product("XO-", repeat=9):
        nx, no = cells.count("X"), cells.count("O")
        if cells.count("-") == m and no <= nx <= no + 1:
            out.add("".join(cells))
    return out


def test_valid_boards_match_brute_force():
    for m in range(10):
        assert G.valid_boards(m) == brute_boards(m)
    with pytest.raises(ValueError):
        G.valid_boards(10)


def test_side_polynomials():
    px = G.side_polynomial(G.X)
    assert px.has_position(G.EMPTY) and len(px.directions(G.EMPTY)) == 9
    assert not G.side_polynomial(G.O).has_position(G.EMPTY)


def test_place_and_winner():
    b = G.place(G.EMPTY, 4, G.X)
    assert b == "----X----" and G.to_move(b) == G.O
    with pytest.raises(IllegalMove):
        G.place(b, 4, G.O)
    assert G.winner("XXX-OO---") == G.X and G.winner("XOXOXOOXO") is None


def test_figure_board(T):
    t = T.at("XOXOOX---")
    assert F.leaves(t) == [G.O, G.TIE, G.TIE, G.TIE, G.X]
    assert F.count_leaves(t) == 5


def test_final_move_option():
    t = G.build_rules_tree(play_final_move=True).at("XOXOOX---")
    assert F.leaves(t) == [G.O, G.TIE, G.X, G.TIE, G.X]


def test_first_open_players_give_x(T):
    out = G.run_match(T, G.first_open_player(G.X), G.first_open_player(G.O))
    assert identity_monad().value(out) == G.X


def exact_distribution(board, mover, choose_x, choose_o):
    """Recursive expectation over the rules: one open cell is scored as it stands."""
    w = G.winner(board)
    free = [i for i, c in enumerate(board) if c == "-"]
    if w:
        return {w: Fraction(1)}
    if len(free) == 0 or (len(free) == 1 and mover == "X"):
        return {"Tie": Fraction(1)}
    lot = (choose_x if mover == "X" else choose_o)(board)
    acc = {}
    for c, p in lot.outcomes:
        nb = board[:c] + mover + board[c + 1:]
        for k, v in exact_distribution(nb, "O" if mover == "X" else "X", choose_x, choose_o).items():
            acc[k] = acc.get(k, 0) + p * v
    return acc


def test_uniform_distribution_matches_recursion(T):
    dist = G.match_distribution(T, G.uniform_player(G.X), G.uniform_player(G.O))
    u = lambda b: uniform(G.open_cells(b))
    assert dist.as_dict() == exact_distribution(G.EMPTY, "X", u, u)
    assert sum(w for _, w in dist.outcomes) == 1
    assert dist.as_dict() == {G.O: Fraction(121, 420), G.TIE: Fraction(37, 105), G.X: Fraction(151, 420)}


def test_mixed_distribution_matches_recursion(T):
    first = lambda b: point(G.open_cells(b)[0])
    u = lambda b: uniform(G.open_cells(b))
    dist = G.match_distribution(T, G.first_open_player(G.X, as_lottery=True), G.uniform_player(G.O))
    assert dist.as_dict() == exact_distribution(G.EMPTY, "X", first, u)


def test_illegal_player_is_rejected(T):
    bad = G.strategy_player(G.X, lambda b: (G.STAR, {G.STAR: 0}))
    with pytest.raises(IllegalMove):
        G.run_match(T, bad, G.first_open_player(G.O))


def test_sampled_games_follow_the_rules(T):
    rng = random.Random(0)
    for _ in range(200):
        outcome, moves = G.play_sampled(T, G.uniform_player(G.X), G.uniform_player(G.O), rng)
        assert outcome in G.OUTCOMES
        for b, c in moves:
            assert b[c] == G.OPEN and G.to_move(b) == G.X


def test_score_table():
    s = G.ScoreTable().reinforce([(G.EMPTY, 4), (G.EMPTY, 4), ("X---O----", 8)])
    assert s.get(G.EMPTY, 4) == 2 and s.get(G.EMPTY, 0) == 0
    probs = s.probabilities(G.EMPTY)
    assert probs.weight(4) == Fraction(3, 11) and probs.weight(0) == Fraction(1, 11)
    assert G.ScoreTable.loads(s.dumps()) == s
    with pytest.raises(ValueError):
        G.ScoreTable.loads("XX 1 1\n")
    with pytest.raises(ValueError):
        G.ScoreTable.loads(f"{G.EMPTY} 1 -3\n")


def test_learning_update_only_on_wins():
    _, update = G.learning_player(G.ScoreTable())
    assert update(G.O, [(G.EMPTY, 0)]) == G.ScoreTable()
    assert update(G.X, [(G.EMPTY, 0)]).get(G.EMPTY, 0) == 1


def test_training_is_deterministic(T):
    a = G.train(200, 3, T=T)
    b = G.train(200, 3, T=T)
    assert a.scores == b.scores and a.win_rates == b.win_rates and len(a.win_rates) == 2
    frozen = G.train(200, 3, T=T, learn=False)
    assert frozen.scores == G.ScoreTable()
