# # The guessing game
#
# Read up to m numbers from the operating system and stop at the goal.

from polyrun.apps.program import Stream, guessing_game_program, os_from_stream, run_program

prog = guessing_game_program()
t = prog.tree(3, 5)
print("tree depth:", t.depth, "branch 5 is", t.child(5).label)

for m, g, s in [(3, 5, "3,5,(0)*"), (2, 7, "1,2,3"), (6, 4, "(1,2)*"), (0, 1, "1")]:
    reads, result = run_program(m, g, os_from_stream(Stream.parse(s)), prog)
    print(f"m={m} goal={g} stream={s}: {reads} reads, guessed={result}")
