import io
import itertools

import pytest

from polyrun import free as F
from polyrun.apps import interview as I
from polyrun.apps import program as P
from polyrun.apps import voting as V
from polyrun.cofree import constant
from polyrun.errors import CarrierMismatch, VoterCountMismatch
from polyrun.poly import STAR, internal_hom, representable


# interview

def test_tea_interview_counts():
    q = I.tea_interview()
    assert I.run_interview(q, I.alice())[0] == 2
    assert I.run_interview(q, I.bob())[0] == 3


def test_format_transcript():
    q = I.tea_interview()
    _, tr = I.run_interview(q, I.bob())
    assert I.format_transcript(tr) == "Tea? -> no\nTea? -> yes\nKind? -> black\nquestions: 3\n"


def test_person_needs_the_answerer_carrier():
    with pytest.raises(CarrierMismatch):
        I.person(constant(I.tea_polynomial(), I.TEA))


def test_questionnaire_rejects_foreign_questions():
    p = I.tea_polynomial()
    with pytest.raises(CarrierMismatch):
        I.Questionnaire(p, F.Node("Coffee?", ["yes"], {"yes": F.ret()}))


def test_interactive_reprompts():
    answers = iter(["maybe\n", "yes\n", "oolong\n", "green\n"])
    out = io.StringIO()
    n = I.run_interactive(I.tea_interview(), lambda: next(answers), out)
    assert n == 2
    text = out.getvalue()
    assert "please answer one of: no, yes" in text and text.endswith("questions: 2\n")


def test_interactive_eof():
    with pytest.raises(EOFError):
        I.run_interactive(I.tea_interview(), lambda: "", io.StringIO())


# program

def translated(m, g):
    """Straight recursive reading of the program, independent of the library."""
    if m == 0:
        return ("leaf", False)
    return ("read", {k: ("leaf", True) if k == g else translated(m - 1, g) for k in range(10)})


def as_nested(t):
    if isinstance(t, F.Leaf):
        return ("leaf", t.label)
    return ("read", {k: as_nested(t.child(k)) for k in range(10)})


def test_program_trees():
    prog = P.guessing_game_program()
    assert F.tree_equal(prog.tree(0, 4), F.ret(False))
    t = prog.tree(1, 5)
    assert t.child(5).label is True and all(t.child(k).label is False for k in (0, 4, 6, 99))
    assert as_nested(prog.tree(3, 7)) == translated(3, 7)
    assert prog.tree(4, 1).depth == 4


def test_read_polynomial_answerers_are_naturals():
    hom = internal_hom(P.read_polynomial())
    assert [P.answer_value(h) for h in hom.sample_positions(5)] == [0, 1, 2, 3, 4]


def test_run_program_examples():
    assert P.run_program(0, 3, P.os_from_stream([3])) == (0, False)
    assert P.run_program(3, 5, P.os_from_stream([3, 5, 9])) == (2, True)
    assert P.run_program(2, 7, P.os_from_stream([1, 2, 3])) == (2, False)
    assert P.run_program(4, 0, P.os_from_stream("1,(0)*")) == (2, True)


def test_constant_stream():
    os = P.os_from_stream("(4)*")
    assert P.run_program(5, 4, os) == (1, True)
    assert P.run_program(5, 3, os) == (5, False)


def test_stream_parse():
    s = P.Stream.parse("3,5,(0)*")
    assert s.take(5) == [3, 5, 0, 0, 0] and str(s) == "3,5,(0)*"
    assert P.Stream.parse("1,2").take(5) == [1, 2, 1, 2, 1]
    with pytest.raises(ValueError):
        P.Stream.parse("1,()*")
    with pytest.raises(ValueError):
        P.Stream.parse("a,b")


def test_result_iff_goal_in_consumed_prefix():
    for m in range(4):
        for s in itertools.product(range(3), repeat=3):
            for g in range(3):
                reads, result = P.run_program(m, g, P.os_from_stream(list(s)))
                assert result == (g in s[:reads])


# voting

def test_ballot_polynomial():
    p = V.ballot_polynomial("abc")
    assert len(p) == 8
    assert sorted(len(d) for _, d in p.positions) == [0, 1, 1, 1, 2, 2, 2, 3]
    assert len(p.directions(())) == 0 and len(p.directions(("a", "b", "c"))) == 3


def test_voter_from_ranking():
    v = V.voter_from_ranking(("a", "b", "c"))
    h = v.machine.output(v.machine.current)
    assert h.answer(("a", "b", "c"))[1](STAR) == "a"
    assert h.answer(("b", "c"))[1](STAR) == "b"
    for A, _ in V.nonempty_ballots("abc").positions:
        assert h.answer(A)[1](STAR) in A


def test_runoff_examples():
    X = ("a", "b", "c")
    e = V.exhaustive_runoff(X, 3)
    voters = [V.voter_from_ranking(r) for r in ("abc", "bac", "bca")]
    assert V.run_election(e, X, voters) == (2, "b")
    cyclic = [V.voter_from_ranking(r) for r in ("abc", "bca", "cab")]
    assert V.run_election(e, X, cyclic) == (1, None)
    assert V.run_election(e, ("c",), voters) == (0, "c")
    assert V.run_election(e, (), voters) == (0, None)
    with pytest.raises(VoterCountMismatch):
        V.run_election(e, X, voters[:2])


def test_scheme_shapes():
    e = V.exhaustive_runoff("abc", 2)
    assert F.tree_equal(e.scheme(("b",)), F.ret("b"))
    empty = e.scheme(())
    assert isinstance(empty, F.Node) and F.count_leaves(empty) == 0
    root = e.scheme(("a", "b", "c"))
    assert root.domain.size == 9


def test_leaf_labels_lie_in_ballot():
    e = V.exhaustive_runoff("abc", 2)
    for A, _ in V.ballot_polynomial("abc").positions:
        assert F.leaf_label_set(e.scheme(A)) <= set(A)


def test_unanimity():
    X = ("a", "b", "c")
    for top in X:
        ranking = (top,) + tuple(c for c in X if c != top)
        for M in (1, 2, 3):
            rounds, w = V.run_election(V.exhaustive_runoff(X, M), X, [V.voter_from_ranking(ranking)] * M)
            assert w == top and rounds <= 2


def test_gerrymander():
    assert not V.gerrymander_witness("abc", 1, 1, 500, seed=0)
    w = V.gerrymander_witness("abc", 3, 3, 10_000, seed=7)
    assert w and w.direct != w.districted
    profile = w.profile
    assert V.run_election(V.exhaustive_runoff("abc", 9), "abc", [V.voter_from_ranking(r) for r in profile])[1] == w.direct
    assert V.districted_winner("abc", profile, 3, 3) == w.districted
    same = [("a", "b", "c")] * 9
    assert V.districted_winner("abc", same, 3, 3) == "a"
