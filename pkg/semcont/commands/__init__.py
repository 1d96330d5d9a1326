"""
CLI verbs. Every module exposes `register(subparsers)`, which adds its parser
and sets `handler` to a function taking the parsed args and returning an exit code.
"""

from semcont.commands import evaluate, explain, gen, report, run, train

COMMANDS = (gen, train, explain, evaluate, report, run)

__all__ = ["COMMANDS"]
