import pytest

from conftest import ALPHA, ALPHA_DERIVATIVE, BETA
from app.core.config import settings
from app.core.errors import KatSyntaxError, TypeMismatch, UnknownIdentifier, Untypeable
from app.models.expressions import ONE, ZERO, Prod, Prog, Star, Sum, lit, pretty
from app.models.strings import EMPTY, EPSILON, Alphabet, ExprType, Literal, Program
from app.services.derivatives import DerivativeService, d_hat, derived_type, eps_hat, t_hat
from app.services.language_oracle import LanguageOracle, deriv_lang, eps_op, lang_union, t_op
from app.services.normal_form import aci_equal, normalize, simplify, sort_key
from app.services.parser import parse, parse_type
from app.services.type_system import TypeChecker


# Parsing and printing

def test_parse_alpha_shape(bc, alpha):
    assert isinstance(alpha, Prod)
    assert alpha.right == lit("b", False)
    assert isinstance(alpha.left, Star)


def test_parse_constants_and_no_simplification(bc):
    assert parse("0", bc) == ZERO
    assert parse("1", bc) == ONE
    assert parse("b + b", bc) == Sum(lit("b"), lit("b"))


def test_parse_sugar_and_dot(bc):
    assert parse("[b]", bc) == Sum(lit("b"), lit("b", False))
    assert parse("p . q", bc) == parse("p q", bc) == Prod(Prog("p"), Prog("q"))
    assert parse("p q*", bc) == Prod(Prog("p"), Star(Prog("q")))
    assert parse("b + c + p", bc) == Sum(lit("b"), Sum(lit("c"), Prog("p")))


def test_parse_ignores_comments(bc):
    assert parse("# loop\n p* # tail\n", bc) == Star(Prog("p"))


def test_parse_errors(bc):
    with pytest.raises(UnknownIdentifier) as info:
        parse("p r", bc)
    assert info.value.position == 2
    with pytest.raises(UnknownIdentifier):
        parse("~p", bc)
    with pytest.raises(KatSyntaxError):
        parse("(p", bc)
    with pytest.raises(KatSyntaxError):
        parse("p +", bc)
    with pytest.raises(KatSyntaxError):
        parse("2", bc)
    with pytest.raises(KatSyntaxError):
        parse("", bc)


def test_parse_type(bc):
    assert parse_type("{b,c} -> {}", bc) == ExprType.of({"b", "c"}, set())
    assert parse_type("{}->{c}", bc) == ExprType.of(set(), {"c"})
    with pytest.raises(UnknownIdentifier):
        parse_type("{d} -> {}", bc)


def test_pretty_resugars_tests(bc, alpha, beta):
    assert pretty(alpha) == ALPHA
    assert pretty(beta) == BETA


def test_pretty_parses_back_to_the_same_tree(bc, generator):
    for _ in range(200):
        e, _ = generator.typed()
        assert parse(pretty(e), bc) == e


def test_pretty_handles_long_spines():
    product, total = Prog("q"), Prog("q")
    for _ in range(2999):
        product = Prod(Prog("p"), product)
        total = Sum(Prog("p"), total)
    assert pretty(product) == " ".join(["p"] * 2999 + ["q"])
    assert pretty(total) == " + ".join(["p"] * 2999 + ["q"])


# Typing

def test_alpha_and_beta_types(bc, alpha, beta, b_to_empty):
    checker = TypeChecker(bc)
    assert b_to_empty in checker.infer_types(alpha)
    derivation = checker.check_type(beta, b_to_empty)
    assert derivation.expr_type == b_to_empty


def test_base_rules(bc):
    checker = TypeChecker(bc)
    assert checker.infer_types(ONE) == {ExprType(a, a) for a in bc.subsets()}
    assert checker.infer_types(ZERO) == {ExprType(a, b) for a in bc.subsets() for b in bc.subsets()}
    assert checker.infer_types(Prog("p")) == {ExprType.of(set(), {"b", "c"})}
    assert checker.infer_types(lit("c")) == {
        ExprType.of({"c"}, set()),
        ExprType.of({"b", "c"}, {"b"}),
    }


def test_repeated_literal_is_untypeable(only_b):
    checker = TypeChecker(only_b)
    assert checker.infer_types(Prod(lit("b"), lit("b"))) == frozenset()


def test_check_type_leaves_and_failures(bc):
    checker = TypeChecker(bc)
    leaf = checker.check_type(Prog("p"), ExprType.of(set(), {"b", "c"}))
    assert leaf.children == ()
    with pytest.raises(Untypeable):
        checker.check_type(lit("b"), ExprType.of(set(), set()))


def test_check_type_picks_first_intermediate_set(bc):
    checker = TypeChecker(bc)
    derivation = checker.check_type(parse("0 b", bc), ExprType.of({"b"}, set()))
    # 0 admits every type, so the smallest intermediate set that works is chosen
    assert derivation.mid == frozenset({"b"})
    derivation = checker.check_type(parse("1 0", bc), ExprType.of({"c"}, {"b"}))
    assert derivation.mid == frozenset({"c"})


def test_derivations_are_well_formed(bc, generator):
    checker = TypeChecker(bc)
    for _ in range(100):
        e, t = generator.typed()
        stack = [checker.check_type(e, t)]
        while stack:
            node = stack.pop()
            if isinstance(node.expr, Star):
                assert node.expr_type.source == node.expr_type.target
            if isinstance(node.expr, Sum):
                assert all(child.expr_type == node.expr_type for child in node.children)
            if isinstance(node.expr, Prod):
                first, second = node.children
                assert first.expr_type == ExprType(node.expr_type.source, node.mid)
                assert second.expr_type == ExprType(node.mid, node.expr_type.target)
            stack.extend(node.children)


# Syntactic operators

def test_t_hat_and_eps_hat_examples(bc, alpha):
    assert t_hat(Prog("p")) == ZERO
    assert t_hat(ONE) == ONE
    assert normalize(t_hat(parse("b p + c", bc))) == lit("c")
    assert eps_hat(Star(Prog("p"))) == ONE
    assert eps_hat(Prog("p")) == ZERO
    assert eps_hat(alpha) == ZERO


def test_alpha_derivative_by_b(bc, alpha, b_to_empty):
    derivation = TypeChecker(bc).check_type(alpha, b_to_empty)
    derivative = normalize(d_hat(derivation, Literal("b")))
    assert pretty(derivative) == ALPHA_DERIVATIVE
    alpha_tail = parse("([b] c q)* ~c (b p ([b] c q)* ~c)* ~b", bc)
    assert derivative == normalize(Prod(Prog("p"), alpha_tail))


def test_alpha_derivative_by_not_b(bc, alpha, b_to_empty):
    derivation = TypeChecker(bc).check_type(alpha, b_to_empty)
    assert normalize(d_hat(derivation, Literal("b", False))) == ONE


def test_program_derivative_examples(bc):
    checker = TypeChecker(bc)
    to_full = ExprType.of(set(), {"b", "c"})
    assert d_hat(checker.check_type(Prog("q"), to_full), Program("p")) == ZERO
    assert d_hat(checker.check_type(Prog("p"), to_full), Program("p")) == ONE
    empty = ExprType.of(set(), set())
    assert normalize(d_hat(checker.check_type(ONE, empty), Program("p"))) == ZERO
    assert normalize(d_hat(checker.check_type(ZERO, empty), Program("q"))) == ZERO


def test_negative_literal_kills_positive_test(only_b):
    checker = TypeChecker(only_b)
    e = parse("b p", only_b)
    derivation = checker.check_type(e, ExprType.of({"b"}, {"b"}))
    assert normalize(d_hat(derivation, Literal("b", False))) == ZERO


def test_literal_derivative_past_a_program_is_typed(bc):
    checker = TypeChecker(bc)
    t = ExprType.of({"b"}, {"c"})
    derivation = checker.check_type(parse("(b p) b", bc), t)
    assert derivation.mid == frozenset({"b", "c"})
    derived = d_hat(derivation, Literal("b"))
    checker.check_type(derived, derived_type(t, Literal("b"), bc))
    assert normalize(derived) == parse("p b", bc)


def test_d_hat_preconditions(bc):
    checker = TypeChecker(bc)
    derivation = checker.check_type(lit("b"), ExprType.of({"b"}, set()))
    with pytest.raises(TypeMismatch):
        d_hat(derivation, Program("p"))
    with pytest.raises(TypeMismatch):
        d_hat(derivation, Literal("c"))


def test_derivative_service_caches_normal_forms(bc, alpha):
    service = DerivativeService(bc)
    nf = normalize(alpha)
    first = service.derivative(nf, frozenset({"b"}), Literal("b"))
    assert service.derivative(nf, frozenset({"b"}), Literal("b")) is first
    assert service.nullable(ONE)
    assert not service.nullable(nf)
    assert service.symbols(EMPTY) == [Program("p"), Program("q")]
    assert service.symbols(frozenset({"c", "b"})) == [
        Literal("b"), Literal("b", False), Literal("c"), Literal("c", False)
    ]


# Normal forms

def test_normalize_aci_examples(bc):
    e, f, g = parse("p", bc), parse("b p", bc), parse("(p [b] [c])*", bc)
    assert normalize(Sum(e, Sum(f, g))) == normalize(Sum(Sum(e, f), g))
    assert normalize(Sum(f, g)) == normalize(Sum(g, f))
    assert normalize(Sum(g, g)) == normalize(g)
    assert normalize(Sum(Prod(ZERO, e), f)) == normalize(f)
    assert aci_equal(Prod(ONE, e), e)


def test_normalize_folds_trivial_stars(bc):
    assert normalize(Star(ZERO)) == ONE
    assert normalize(Star(ONE)) == ONE
    assert normalize(Star(Sum(ZERO, ONE))) == ONE


def test_normalize_distributes_up_to_the_first_program(bc):
    e = parse("[b] q (p [b] [c])*", bc)
    assert pretty(normalize(e)) == "b q (p [b] [c])* + ~b q (p [b] [c])*"
    e = parse("[b] [c] p [b] [c] q", bc)
    assert pretty(normalize(e)) == (
        "b c p [b] [c] q + b ~c p [b] [c] q + ~b c p [b] [c] q + ~b ~c p [b] [c] q"
    )
    tail = parse("p (b q + ~b p) [c]", bc)
    assert normalize(tail) == tail
    inner = parse("([b] q)*", bc)
    assert normalize(inner) == inner


def test_normal_form_caches_are_bounded(bc, alpha):
    normalize(alpha)
    for cached in (normalize, simplify, sort_key):
        info = cached.cache_info()
        assert info.maxsize == settings.NORMAL_FORM_CACHE_SIZE
        assert info.currsize <= info.maxsize


def test_normalize_is_idempotent_and_preserves_meaning(bc, generator):
    checker = TypeChecker(bc)
    oracle = LanguageOracle(bc, checker)
    for _ in range(150):
        e, t = generator.typed()
        nf = normalize(e)
        assert normalize(nf) == nf
        assert t in checker.infer_types(nf)
        assert oracle.m_bounded(nf, t, 4).strings == oracle.m_bounded(e, t, 4).strings


def test_normal_forms_print_and_parse_back(bc, generator):
    for _ in range(150):
        e, _ = generator.typed()
        nf = normalize(e)
        assert normalize(parse(pretty(nf), bc)) == nf


# Commutation with the bounded language oracle

def applicable_symbols(t: ExprType, alphabet: Alphabet):
    if not t.source:
        return [Program(name) for name in alphabet.programs]
    return [Literal(b, sign) for b in alphabet.ordered(t.source) for sign in (True, False)]


def test_operators_commute_with_bounded_languages(bc, generator):
    bound = 5
    checker = TypeChecker(bc)
    oracle = LanguageOracle(bc, checker)
    for _ in range(500):
        e, t = generator.typed()
        language = oracle.m_bounded(e, t, bound)

        tests_part = oracle.m_bounded(t_hat(e), t, bound)
        assert tests_part.strings == lang_union(t_op(language), eps_op(language)).strings

        assert eps_hat(e) in (ZERO, ONE)
        assert (EPSILON in language) == (eps_hat(e) == ONE)
        if eps_hat(e) == ONE:
            assert oracle.m_bounded(eps_hat(e), t, bound).strings == eps_op(language).strings

        derivation = checker.check_type(e, t)
        for x in applicable_symbols(t, bc):
            derived = d_hat(derivation, x)
            t2 = derived_type(t, x, bc)
            checker.check_type(derived, t2)
            expected = deriv_lang(language, x).up_to(bound - 1).strings
            assert oracle.m_bounded(derived, t2, bound - 1).strings == expected
            assert oracle.m_bounded(normalize(derived), t2, bound - 1).strings == expected
