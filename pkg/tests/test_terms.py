import hypothesis
import hypothesis.strategies as strat
import numpy as np
import pytest

from cells.algebra import FiniteAlgebra, transport
from cells.errors import SignatureError, TermSyntaxError, UnboundVariableError, WorkbenchError
from cells.terms import (
    PLUS_TIMES,
    TIMES_INVERSE,
    TIMES_ONLY,
    Add,
    Inv,
    Mul,
    Var,
    eval_term,
    evaluate,
    parse_identity,
    parse_term,
    power,
    render,
    rewrite_plus_to_inv,
    to_word,
    var_key,
    vn_pair,
    word_term,
)

VARIABLE_NAMES = ["x", "y", "z", "x1", "x10"]
names = strat.sampled_from(VARIABLE_NAMES)
variables = names.map(Var)

plus_times_terms = strat.recursive(
    variables,
    lambda inner: strat.one_of(strat.builds(Mul, inner, inner), strat.builds(Add, inner, inner)),
    max_leaves=8,
)
times_inverse_terms = strat.recursive(
    variables,
    lambda inner: strat.one_of(strat.builds(Mul, inner, inner), strat.builds(Inv, inner)),
    max_leaves=8,
)


def test_signatures():
    assert parse_identity("x + x*x = x*x").signature == PLUS_TIMES
    assert parse_identity("x^-1 x = x x^-1").signature == TIMES_INVERSE
    assert parse_identity("x y = y x").signature == TIMES_ONLY
    with pytest.raises(SignatureError):
        parse_identity("x + y = x^-1")
    with pytest.raises(SignatureError):
        parse_term("x + y", signature=TIMES_ONLY)


def test_juxtaposition_and_powers():
    assert parse_term("x y z") == Mul(Mul(Var("x"), Var("y")), Var("z"))
    assert parse_term("x^3") == power(Var("x"), 3)
    assert parse_term("(x*y)^-1") == Inv(Mul(Var("x"), Var("y")))
    assert parse_term("x + y + z") == Add(Add(Var("x"), Var("y")), Var("z"))


@pytest.mark.parametrize("text, position", [
    ("x + ", 4),
    ("x)", 1),
    ("x ^ y", 4),
    ("x^0", 2),
    ("x # y", 2),
])
def test_syntax_errors_carry_positions(text, position):
    with pytest.raises(TermSyntaxError) as info:
        parse_term(text)
    assert info.value.position == position


def test_identity_needs_equals():
    with pytest.raises(TermSyntaxError):
        parse_identity("x y")


def test_vn_macros():
    v2, v2_prime = vn_pair(2)
    assert v2 == ("x1", "x2", "x3", "x4", "x2", "x1", "x3", "x4", "x1", "x2")
    assert len(v2_prime) == 18
    identity = parse_identity("v2 = v2'", macros=True)
    assert to_word(identity.lhs) == v2
    assert to_word(identity.rhs) == v2_prime
    assert identity.variables() == ["x1", "x2", "x3", "x4"]
    with pytest.raises(TermSyntaxError):
        parse_identity("v2 = v2'")
    with pytest.raises(WorkbenchError):
        vn_pair(1)


def test_variable_order_is_natural():
    assert sorted(["x10", "x2", "y", "x1"], key=var_key) == ["x1", "x2", "x10", "y"]


def test_to_word_rejects_non_words():
    with pytest.raises(SignatureError):
        to_word(parse_term("x + y"))
    assert to_word(word_term(("a", "b", "a"))) == ("a", "b", "a")


def test_evaluation(brandt, b21):
    c, d = brandt.index("c"), brandt.index("d")
    assert brandt.labels[eval_term(parse_term("x y x"), {"x": c, "y": d}, brandt)] == "c"
    assert brandt.labels[eval_term(parse_term("x^-1"), {"x": c}, brandt)] == "d"
    assert b21.labels[eval_term(parse_term("x + y"), {"x": c, "y": d}, b21)] == "0"
    with pytest.raises(UnboundVariableError):
        eval_term(parse_term("x y"), {"x": c}, brandt)
    with pytest.raises(SignatureError):
        eval_term(parse_term("x + y"), {"x": c, "y": d}, brandt)


def test_vectorized_evaluation_matches_scalar(brandt):
    t = parse_term("x y^-1 x")
    xs, ys = np.indices((brandt.size, brandt.size)).reshape(2, -1)
    values = evaluate(t, {"x": xs, "y": ys}, brandt)
    for x, y, v in zip(xs, ys, values):
        assert eval_term(t, {"x": int(x), "y": int(y)}, brandt) == v


def test_rewrite_plus_to_inv():
    x, y = Var("x"), Var("y")
    assert rewrite_plus_to_inv(Add(x, y), 2) == Mul(power(Mul(x, Inv(y)), 2), x)
    nested = rewrite_plus_to_inv(parse_term("(x + y) z"), 1)
    assert nested == Mul(Mul(Mul(x, Inv(y)), x), Var("z"))
    with pytest.raises(WorkbenchError):
        rewrite_plus_to_inv(x, 0)


@hypothesis.given(strat.one_of(plus_times_terms, times_inverse_terms))
def test_render_parses_back(t):
    assert parse_term(render(t)) == t


@hypothesis.given(plus_times_terms, strat.fixed_dictionaries({name: strat.integers(0, 5) for name in VARIABLE_NAMES}))
def test_rewritten_terms_agree_on_b21(brandt, b21, t, env):
    # 同一载体上同时带有自然加法与求逆
    both = FiniteAlgebra(brandt.labels, brandt.mul, add=b21.add, inv=brandt.inv)
    assert eval_term(rewrite_plus_to_inv(t, 2), env, both) == eval_term(t, env, both)


assignments = strat.fixed_dictionaries({name: strat.integers(0, 5) for name in VARIABLE_NAMES})


@hypothesis.given(plus_times_terms, assignments, strat.permutations(range(6)))
def test_evaluation_follows_relabeling(a21, t, env, perm):
    moved = transport(a21, perm)
    carried = {name: perm[x] for name, x in env.items()}
    assert eval_term(t, carried, moved) == perm[eval_term(t, env, a21)]


@hypothesis.given(times_inverse_terms, assignments, strat.permutations(range(6)))
def test_inverse_evaluation_follows_relabeling(brandt, t, env, perm):
    moved = transport(brandt, perm)
    carried = {name: perm[x] for name, x in env.items()}
    assert eval_term(t, carried, moved) == perm[eval_term(t, env, brandt)]
