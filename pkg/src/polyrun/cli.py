"""Command-line front end: ``laws``, ``interview``, ``guess``, ``vote``, ``ttt``.

Exit codes: 0 success, 1 a check failed, 2 bad usage or input.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from . import laws
from .errors import PolyError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass(frozen=True)
class Config:
    seed: int = 0
    bisim_depth: int = 4
    nat_budget: int = 32
    law_samples: int = 100

    def header(self) -> str:
        return (f"# seed={self.seed} depth={self.bisim_depth} budget={self.nat_budget} "
                f"samples={self.law_samples}")


class UsageError(Exception):
    pass


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def _natural(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be a natural number")
    return n


# ---------------------------------------------------------------------------
# subcommands


def cmd_laws(config: Config, out, corrupt_graft: bool = False) -> int:
    graft_impl = laws.corrupted_graft if corrupt_graft else laws.F.graft
    results = laws.run_all(config.seed, config.law_samples, config.bisim_depth, graft_impl)
    print(config.header(), file=out)
    for r in results:
        print(r.line(), file=out)
    failed = sum(not r.passed for r in results)
    print(f"suites: {len(results) - failed} passed, {failed} failed", file=out)
    return EXIT_FAIL if failed else EXIT_OK


def _load_person(who: str):
    from .apps import interview as I
    if who == "alice":
        return I.alice()
    if who == "bob":
        return I.bob()
    return I.person(load_answerer_machine(_read(who), I.tea_polynomial()), I.tea_polynomial())


def load_answerer_machine(text: str, p):
    """Machine over ``[p, y]``: outputs ``Q1=a,Q2=b``, transitions on a question."""
    from .cofree import loads_machine
    from .poly import STAR, answerer, internal_hom

    def parse_position(s):
        answers = {}
        for part in s.split(","):
            q, _, a = part.partition("=")
            answers[q.strip()] = a.strip()
        missing = [P for P in p.labels if P not in answers]
        if missing:
            raise UsageError(f"no answer for {', '.join(missing)}")
        for P, a in answers.items():
            if not p.has_position(P) or a not in p.directions(P):
                raise UsageError(f"{P}={a} is not a valid answer")
        return answerer(p, answers)

    return loads_machine(text, internal_hom(p), parse_position, lambda s: (s, STAR))


def cmd_interview(config: Config, args, out) -> int:
    from .apps import interview as I
    q = I.tea_interview()
    if args.action == "interactive":
        try:
            I.run_interactive(q, sys.stdin.readline, out)
        except EOFError as exc:
            raise UsageError(str(exc))
        return EXIT_OK
    count, tr = I.run_interview(q, _load_person(args.person))
    out.write(I.format_transcript(tr))
    return EXIT_OK


def cmd_guess(config: Config, args, out) -> int:
    from .apps.program import Stream, os_from_stream, run_program
    try:
        s = Stream.parse(args.stream)
    except ValueError as exc:
        raise UsageError(f"bad stream: {exc}")
    reads, result = run_program(args.max_guesses, args.goal, os_from_stream(s))
    print(f"reads={reads} result={str(result).lower()}", file=out)
    return EXIT_OK


def cmd_vote(config: Config, args, out) -> int:
    from .apps import voting as V
    X = V.ballot(c.strip() for c in args.candidates.split(",") if c.strip())
    profile = [V.parse_ranking(line) for line in _read(args.voters).splitlines() if line.strip()]
    for r in profile:
        if sorted(r) != sorted(X):
            raise UsageError(f"ranking {'>'.join(r)} is not an order on {','.join(X)}")
    if not profile:
        raise UsageError("no voters")
    rounds, w = V.run_election(V.exhaustive_runoff(X, len(profile)), X,
                               [V.voter_from_ranking(r) for r in profile])
    print(f"rounds={rounds} winner={w if w is not None else 'none'}", file=out)
    if args.districts:
        N = args.districts
        if len(profile) % N:
            raise UsageError(f"{len(profile)} voters do not split into {N} districts")
        dw = V.districted_winner(X, profile, len(profile) // N, N)
        print(f"districted winner={dw if dw is not None else 'none'}", file=out)
    return EXIT_OK


def cmd_ttt(config: Config, args, out) -> int:
    from .apps import game as G
    T = G.build_rules_tree()
    opponent = G.uniform_player(G.O) if args.o == "uniform" else G.first_open_player(G.O, as_lottery=True)
    if args.x == "learned" or args.train:
        res = G.train(args.episodes, config.seed, opponent, T)
        print(f"trained episodes={args.episodes} seed={config.seed}", file=out)
        print("epoch win rates: " + " ".join(f"{r:.2f}" for r in res.win_rates), file=out)
        if args.scores_out:
            with open(args.scores_out, "w") as fh:
                fh.write(res.scores.dumps())
        player, _ = G.learning_player(res.scores)
    elif args.x == "uniform":
        player = G.uniform_player(G.X)
    else:
        player = G.first_open_player(G.X, as_lottery=True)
    dist = G.match_distribution(T, player, opponent)
    for outcome in G.OUTCOMES:
        w = dist.weight(outcome)
        print(f"{outcome} {w.numerator}/{w.denominator} ({float(w):.4f})", file=out)
    return EXIT_OK


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}")


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polyrun", description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=_natural, default=0)
    ap.add_argument("--depth", type=_positive, default=4, help="bisimulation depth")
    ap.add_argument("--budget", type=_positive, default=32, help="sampling budget for infinite direction sets")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("laws", help="run the law suites")
    p.add_argument("--samples", type=_positive, default=100)
    p.add_argument("--corrupt-graft", action="store_true", help=argparse.SUPPRESS)

    p = sub.add_parser("interview", help="the tea interview")
    isub = p.add_subparsers(dest="action", required=True)
    r = isub.add_parser("run")
    r.add_argument("--person", default="alice", help="alice, bob, or a machine file")
    isub.add_parser("interactive")

    p = sub.add_parser("guess", help="the guessing game")
    gsub = p.add_subparsers(dest="action", required=True)
    r = gsub.add_parser("run")
    r.add_argument("--max-guesses", type=_natural, required=True)
    r.add_argument("--goal", type=_natural, required=True)
    r.add_argument("--stream", required=True, help='e.g. "3,5,(0)*"')

    p = sub.add_parser("vote", help="exhaustive run-off")
    vsub = p.add_subparsers(dest="action", required=True)
    r = vsub.add_parser("runoff")
    r.add_argument("--candidates", required=True)
    r.add_argument("--voters", required=True, help="file with one ranking a>b>c per line")
    r.add_argument("--districts", type=_positive)

    p = sub.add_parser("ttt", help="tic-tac-toe")
    tsub = p.add_subparsers(dest="action", required=True)
    r = tsub.add_parser("play")
    r.add_argument("--x", choices=["first-open", "uniform", "learned"], default="uniform")
    r.add_argument("--o", choices=["uniform", "first-open"], default="uniform")
    r.add_argument("--episodes", type=_positive, default=2000)
    r.add_argument("--train", action="store_true")
    r.add_argument("--scores-out")
    return ap


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    config = Config(args.seed, args.depth, args.budget, getattr(args, "samples", 100))
    try:
        if args.command == "laws":
            return cmd_laws(config, out, args.corrupt_graft)
        handler = {"interview": cmd_interview, "guess": cmd_guess, "vote": cmd_vote, "ttt": cmd_ttt}
        return handler[args.command](config, args, out)
    except (UsageError, PolyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
