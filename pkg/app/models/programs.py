"""
Structured while-programs over the declared alphabet.

Guards are conjunctions of literals and are represented as ``Test``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from app.models.strings import Alphabet, Test


@dataclass(frozen=True)
class Skip:
    pass


@dataclass(frozen=True)
class Abort:
    pass


@dataclass(frozen=True)
class Prim:
    name: str


@dataclass(frozen=True)
class Seq:
    first: "WhileProgram"
    second: "WhileProgram"


@dataclass(frozen=True)
class If:
    guard: Test
    then: "WhileProgram"
    otherwise: "WhileProgram"


@dataclass(frozen=True)
class While:
    guard: Test
    body: "WhileProgram"


WhileProgram = Union[Skip, Abort, Prim, Seq, If, While]
Guard = Test


def format_guard(guard: Guard, alphabet: Alphabet) -> str:
    return " & ".join(str(lit) for lit in guard.ordered(alphabet))


def format_program(prog: WhileProgram, alphabet: Alphabet) -> str:
    if isinstance(prog, Skip):
        return "skip"
    if isinstance(prog, Abort):
        return "abort"
    if isinstance(prog, Prim):
        return prog.name
    if isinstance(prog, Seq):
        return f"{format_program(prog.first, alphabet)}; {format_program(prog.second, alphabet)}"
    if isinstance(prog, If):
        return (
            f"if {format_guard(prog.guard, alphabet)} then {{ {format_program(prog.then, alphabet)} }}"
            f" else {{ {format_program(prog.otherwise, alphabet)} }}"
        )
    return f"while {format_guard(prog.guard, alphabet)} do {{ {format_program(prog.body, alphabet)} }}"
