# # The tea interview
#
# Ask about tea; on yes ask which kind, on no ask once more.

from polyrun import free as F
from polyrun.apps import interview as I

q = I.tea_interview()
print(F.dumps_tree(q.script))

for name, who in (("Alice", I.alice()), ("Bob", I.bob())):
    count, tr = I.run_interview(q, who)
    print(f"{name} was asked {count} questions")
    print(I.format_transcript(tr))
