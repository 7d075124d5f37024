"""Lambda terms, function definitions and summation over functions."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from strategies import envs
from tuplix.basic import normalize
from tuplix.data import Apply, Const, Lambda, Var
from tuplix.errors import ArityMismatch, UnboundFunctionVar
from tuplix.funcdef import apply_fd, beta_reduce, eliminate_functions, sum_fn_elim
from tuplix.meadow import eval_data, normalize_data
from tuplix.syntax import format_tuplix, parse_data, parse_tuplix


def P(text):
    return parse_tuplix(text)


def F(p):
    return format_tuplix(p)


class TestBeta:
    def test_doubling(self):
        got = beta_reduce(parse_data("(lam x . x + x)(2)"))
        assert str(got) == "2 + 2"
        assert normalize_data(got) == Const(4)

    def test_constant_function(self):
        assert beta_reduce(parse_data("(lam x . y)(7)")) == Var("y")

    def test_two_parameters(self):
        got = beta_reduce(parse_data("(lam x, y . x - y)(y, x)"))
        assert str(normalize_data(got)) == str(normalize_data(parse_data("y - x")))

    def test_arity(self):
        with pytest.raises(ArityMismatch):
            beta_reduce(Apply(Lambda(("x",), Var("x")), (Const(1), Const(2))))


class TestApplyFd:
    def test_unfolds(self):
        got = apply_fd(P("gamma(f, lam x . x + x) & a(f(1))"))
        assert F(got) == "gamma(f, lam x . x + x) & a(1 + 1)"

    def test_identity_function(self):
        got = apply_fd(P("gamma(f, lam x . x) & [f(y) - y]"))
        assert F(got) == "gamma(f, lam x . x) & [y - y]"

    def test_no_definition(self):
        term = P("a(f(1))")
        assert apply_fd(term) == term

    def test_capture_avoided(self):
        got = eliminate_functions(P("sumf f . gamma(f, lam x . x + y) & sum y . a(f(y))"))
        assert F(got) == "sum y' . a(y' + y)"


class TestSumFn:
    def test_let(self):
        got = sum_fn_elim(apply_fd(P("sumf f . gamma(f, lam x . x + x) & a(f(1))")))
        assert str(normalize(got)) == "a(2)"

    def test_sugar(self):
        assert str(normalize(P("def f = lam x . x + x in a(f(1))"))) == "a(2)"

    def test_vacuous(self):
        assert F(sum_fn_elim(P("sumf f . a(1)"))) == "a(1)"

    def test_shared_rule(self):
        got = normalize(P("def f = lam s, t . 3*s + 40*t in "
                          "a_math(f(120, 10)) & a_law(f(300, 12))"))
        assert str(got) == "a_law(1380) & a_math(760)"

    def test_through_choice(self):
        got = normalize(P("def f = lam x . x + y in a(f(1)) + b(f(2))"))
        assert str(got) == "a(y + 1) + b(y + 2)"

    def test_undefined_use(self):
        with pytest.raises(UnboundFunctionVar):
            normalize(P("sumf f . a(f(1))"))

    def test_free_function_is_uninterpreted(self):
        assert str(normalize(P("a(f(1)) & a(-f(1))"))) == "a(0)"

    def test_arity(self):
        with pytest.raises(ArityMismatch):
            normalize(P("sumf f . gamma(f, lam x . x) & a(f(1, 2))"))


# -- properties ----------------------------------------------------------------


@settings(max_examples=200, deadline=None)
@given(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5), envs(("y",)))
def test_unfolding_agrees_with_evaluation(p, q, r, env):
    """The unfolded payload equals the lambda body evaluated at the argument."""
    body = parse_data(f"{p}*x*x + {q}*x + {r}*y")
    arg = Fraction(p - q, 3)
    term = P(f"def f = lam x . {p}*x*x + {q}*x + {r}*y in a(f({arg.numerator}/{arg.denominator}))")
    ((_, payload),) = normalize(term).alternatives[0].entries
    assert eval_data(payload, env) == eval_data(body, {**env, "x": arg})


@settings(max_examples=100, deadline=None)
@given(st.integers(-4, 4), st.integers(-4, 4))
def test_reduction_order_irrelevant(m, n):
    inner = f"(lam y . y * {m})({n})"
    outer_first = beta_reduce(parse_data(f"(lam x . x + x)({inner})"))
    inner_first = beta_reduce(parse_data(f"(lam x . x + x)({m * n})"))
    assert normalize_data(outer_first) == normalize_data(inner_first)
