"""Worked applications: an interview, a program, an election, and a game."""
