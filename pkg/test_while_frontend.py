import pytest

from conftest import fixture_path
from app.core.errors import (
    GuardOutsidePending,
    KatSyntaxError,
    NegatedGuardDisjunction,
    UnknownIdentifier,
    UnproductiveLoopBody,
)
from app.models.expressions import ONE, ZERO, Prog, pretty
from app.models.programs import Abort, If, Prim, Seq, Skip, While, format_program
from app.models.strings import EMPTY, ExprType, Literal, Test
from app.services.equivalence_service import Equivalent, decide_equiv
from app.services.type_system import TypeChecker
from app.services.while_compiler import WhileCompiler, compile_program, parse_program

B_AND_C = frozenset({"b", "c"})


@pytest.fixture
def program1(bc):
    with open(fixture_path("program1.whl"), encoding="utf-8") as handle:
        return parse_program(handle.read(), bc)


# Parsing

def test_parse_example_program(program1):
    inner = While(Test.of(Literal("c")), Prim("q"))
    assert program1 == While(Test.of(Literal("b")), Seq(Prim("p"), inner))


def test_parse_blocks_and_separators(bc):
    assert parse_program("{}", bc) == Skip()
    assert parse_program("p;", bc) == Prim("p")
    assert parse_program("p; q; abort", bc) == Seq(Prim("p"), Seq(Prim("q"), Abort()))
    assert parse_program("if ~b then p", bc) == If(Test.of(Literal("b", False)), Prim("p"), Skip())


def test_format_program_parses_back(bc, program1):
    for text in ("if b & ~c then { p } else { q; skip }", "while ~c do { p; q }"):
        prog = parse_program(text, bc)
        assert parse_program(format_program(prog, bc), bc) == prog
    assert parse_program(format_program(program1, bc), bc) == program1


def test_parse_errors(bc):
    with pytest.raises(KatSyntaxError):
        parse_program("", bc)
    with pytest.raises(KatSyntaxError):
        parse_program("while b p", bc)
    with pytest.raises(KatSyntaxError):
        parse_program("if b & b then p", bc)
    with pytest.raises(KatSyntaxError):
        parse_program("{ p", bc)
    with pytest.raises(UnknownIdentifier):
        parse_program("r", bc)
    with pytest.raises(UnknownIdentifier):
        parse_program("while p do q", bc)


# Compiling

def test_example_program_compiles_to_alpha(bc, program1, alpha, b_to_empty):
    result = compile_program(program1, {"b"}, bc)
    assert pretty(result.expr) == "(b p (c [b] q)* ~c)* ~b"
    assert result.out_pending == EMPTY
    assert isinstance(decide_equiv(result.expr, alpha, b_to_empty, bc), Equivalent)


def test_skip_and_abort_keep_pending(bc):
    assert compile_program(Skip(), B_AND_C, bc) == (ONE, B_AND_C)
    assert compile_program(Abort(), {"c"}, bc) == (ZERO, frozenset({"c"}))


def test_program_pads_pending_tests(bc):
    assert compile_program(Prim("p"), EMPTY, bc) == (Prog("p"), B_AND_C)
    result = compile_program(Prim("p"), {"b"}, bc)
    assert pretty(result.expr) == "[b] p"
    result = compile_program(parse_program("p; q", bc), EMPTY, bc)
    assert pretty(result.expr) == "p [b] [c] q"


def test_if_branches_are_padded_to_a_common_set(bc):
    result = compile_program(parse_program("if b then p else skip", bc), B_AND_C, bc)
    assert result.out_pending == frozenset({"c"})
    assert pretty(result.expr) == "b [c] p [b] + ~b"
    assert ExprType(B_AND_C, frozenset({"c"})) in TypeChecker(bc).infer_types(result.expr)


def test_while_with_conjunctive_guard_is_rejected(bc):
    with pytest.raises(NegatedGuardDisjunction):
        compile_program(parse_program("while b & c do p", bc), B_AND_C, bc)
    with pytest.raises(NegatedGuardDisjunction):
        compile_program(parse_program("if b & ~c then p", bc), B_AND_C, bc)


def test_guard_must_be_pending(bc):
    with pytest.raises(GuardOutsidePending):
        compile_program(parse_program("if c then p", bc), {"b"}, bc)
    with pytest.raises(GuardOutsidePending):
        compile_program(parse_program("p; skip; while b do q; if b then p", bc), EMPTY, bc)


def test_loop_body_must_run_a_program(bc):
    with pytest.raises(UnproductiveLoopBody):
        compile_program(parse_program("while b do skip", bc), {"b"}, bc)


def test_compiled_programs_have_their_pending_type(bc):
    compiler = WhileCompiler(bc)
    checker = TypeChecker(bc)
    programs = [
        "while b do { p; while c do q; q }",
        "if b then { p; while ~c do q } else abort",
        "while ~c do { if b then p else q }",
        "p; if c then q",
    ]
    for text in programs:
        result = compiler.compile(parse_program(text, bc), B_AND_C)
        assert ExprType(B_AND_C, result.out_pending) in checker.infer_types(result.expr)
