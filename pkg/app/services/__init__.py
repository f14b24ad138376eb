"""Services package: typing, derivatives, automata, equivalence and compilation."""

from .automata_service import DerivativeAutomatonBuilder, derivative_automaton
from .equivalence_service import EquivalenceService, check_certificate, decide_equiv
from .while_compiler import WhileCompiler, compile_program, parse_program

__all__ = [
    'DerivativeAutomatonBuilder',
    'derivative_automaton',
    'EquivalenceService',
    'check_certificate',
    'decide_equiv',
    'WhileCompiler',
    'compile_program',
    'parse_program',
]
