"""Argument lists for the golden CLI outputs, keyed by golden file name."""
CASES = {
    "laws": ["--seed", "0", "laws", "--samples", "20"],
    "interview_alice": ["interview", "run", "--person", "alice"],
    "interview_bob": ["interview", "run", "--person", "bob"],
    "interview_carol": ["interview", "run", "--person", "{data}/carol.machine"],
    "guess": ["guess", "run", "--max-guesses", "3", "--goal", "5", "--stream", "3,5,(0)*"],
    "guess_miss": ["guess", "run", "--max-guesses", "2", "--goal", "7", "--stream", "1,2,3"],
    "vote": ["vote", "runoff", "--candidates", "a,b,c", "--voters", "{data}/voters.txt"],
    "vote_cyclic": ["vote", "runoff", "--candidates", "a,b,c", "--voters", "{data}/cyclic.txt"],
    "vote_districts": ["vote", "runoff", "--candidates", "a,b,c", "--voters", "{data}/nine.txt", "--districts", "3"],
    "ttt_first_open": ["ttt", "play", "--x", "first-open"],
    "ttt_uniform": ["ttt", "play"],
    "ttt_learned": ["--seed", "5", "ttt", "play", "--x", "learned", "--episodes", "300"],
}
