import operator

import pytest
from hypothesis import given, settings, strategies as st

from kishon import folk
from kishon.folk import (
    FALSE,
    TRUE,
    And,
    Const,
    DataCmp,
    Eq,
    EvaluationError,
    Exists,
    FiniteStructure,
    Forall,
    Implies,
    Lit,
    Not,
    Or,
    Prec,
    Pred,
    ValOf,
    check_structure,
    evaluate,
    free_variables,
    russell_wiener_sentence,
    strict_partial_order_sentence,
)
from kishon.orders import Precedence, all_strict_partial_orders, is_russell_wiener

OPS = {"=": operator.eq, "!=": operator.ne, "<": operator.lt, "<=": operator.le, ">": operator.gt, ">=": operator.ge}


def naive(s: FiniteStructure, f, env: dict) -> bool:
    """Textbook recursive satisfaction, one assignment at a time."""
    if isinstance(f, Pred):
        return s.holds(f.name, env[f.var])
    if isinstance(f, Prec):
        return s.precedes(env[f.left], env[f.right])
    if isinstance(f, Eq):
        return env[f.left] == env[f.right]
    if isinstance(f, DataCmp):
        def term(t):
            if isinstance(t, ValOf):
                return s.val[env[t.var]]
            if isinstance(t, Const):
                return s.constants[t.name]
            return t.value
        return OPS[f.op](term(f.lhs), term(f.rhs))
    if isinstance(f, And):
        return all(naive(s, a, env) for a in f.args)
    if isinstance(f, Or):
        return any(naive(s, a, env) for a in f.args)
    if isinstance(f, Not):
        return not naive(s, f.arg, env)
    if isinstance(f, Implies):
        return not naive(s, f.hyp, env) or naive(s, f.concl, env)
    if isinstance(f, Forall):
        return all(naive(s, f.body, {**env, f.var: e}) for e in s.events)
    if isinstance(f, Exists):
        return any(naive(s, f.body, {**env, f.var: e}) for e in s.events)
    raise TypeError(f)


def structure_from_order(p: Precedence, vals=None) -> FiniteStructure:
    names = tuple(f"e{k}" for k in range(p.n))
    return FiniteStructure(
        events=names,
        data_universe=tuple(range(-1, 4)),
        predicates={},
        precedence=frozenset((names[i], names[j]) for i, j in p.pairs),
        val={e: (vals[k] if vals else 0) for k, e in enumerate(names)},
    )


# -- random structures and formulas -------------------------------------------

VARS = ("x", "y", "z")


@st.composite
def structures(draw):
    n = draw(st.integers(0, 4))
    names = tuple(f"e{k}" for k in range(n))
    perm = draw(st.permutations(range(n))) if n else []
    # random suborder of a random linear order keeps precedence acyclic but not necessarily transitive
    pairs = frozenset(
        (names[perm[i]], names[perm[j]]) for i in range(n) for j in range(i + 1, n) if draw(st.booleans())
    )
    return FiniteStructure(
        events=names,
        data_universe=tuple(range(-1, 4)),
        predicates={"P": frozenset(e for e in names if draw(st.booleans())),
                    "Q": frozenset(e for e in names if draw(st.booleans()))},
        precedence=pairs,
        val={e: draw(st.integers(-1, 3)) for e in names},
        constants={"c": draw(st.integers(-1, 3))},
    )


def terms(bound_vars):
    options = [st.builds(Lit, st.integers(-1, 3)), st.just(Const("c"))]
    if bound_vars:
        options.append(st.builds(ValOf, st.sampled_from(bound_vars)))
    return st.one_of(*options)


def formulas(bound_vars=(), depth=3):
    atoms = [st.builds(DataCmp, st.sampled_from(sorted(OPS)), terms(bound_vars), terms(bound_vars))]
    if bound_vars:
        v = st.sampled_from(bound_vars)
        atoms += [st.builds(Pred, st.sampled_from(["P", "Q"]), v), st.builds(Prec, v, v), st.builds(Eq, v, v)]
    leaf = st.one_of(*atoms)
    if depth == 0:
        return leaf
    sub = st.deferred(lambda: formulas(bound_vars, depth - 1))
    fresh = [x for x in VARS if x not in bound_vars]
    branches = [
        leaf,
        st.builds(lambda a, b: And((a, b)), sub, sub),
        st.builds(lambda a, b: Or((a, b)), sub, sub),
        st.builds(Not, sub),
        st.builds(Implies, sub, sub),
    ]
    if fresh:
        inner = formulas(bound_vars + (fresh[0],), depth - 1)
        branches += [st.builds(Forall, st.just(fresh[0]), inner), st.builds(Exists, st.just(fresh[0]), inner)]
    return st.one_of(*branches)


@settings(max_examples=400, deadline=None)
@given(structures(), formulas())
def test_tensor_evaluator_matches_naive(s, f):
    assert evaluate(s, f) == naive(s, f, {})


@settings(max_examples=200, deadline=None)
@given(structures(), formulas())
def test_negation_flips(s, f):
    assert evaluate(s, Not(f)) != evaluate(s, f)


@settings(max_examples=200, deadline=None)
@given(structures(), formulas(("x",)))
def test_open_formula_under_assignment(s, f):
    for e in s.events:
        assert evaluate(s, f, {"x": e}) == naive(s, f, {"x": e})


@settings(max_examples=100, deadline=None)
@given(structures())
def test_json_round_trip(s):
    back = FiniteStructure.from_json(s.to_json())
    assert back == s
    assert hash(back) == hash(s)


# -- fixed examples -----------------------------------------------------------


def test_empty_domain_quantifiers():
    s = FiniteStructure()
    assert evaluate(s, Forall("x", FALSE))
    assert not evaluate(s, Exists("x", TRUE))


def test_constants():
    assert evaluate(FiniteStructure(), TRUE)
    assert not evaluate(FiniteStructure(), FALSE)


def test_two_plus_two_fails_russell_wiener_sentence():
    s = structure_from_order(Precedence(4, frozenset({(0, 1), (2, 3)})))
    assert evaluate(s, strict_partial_order_sentence())
    assert not evaluate(s, russell_wiener_sentence())
    assert not folk.is_system_execution(s)


@pytest.mark.parametrize("n", range(0, 6))
def test_russell_wiener_sentence_agrees_with_native(n):
    for p in all_strict_partial_orders(n):
        s = structure_from_order(p)
        assert evaluate(s, strict_partial_order_sentence())
        assert evaluate(s, russell_wiener_sentence()) == is_russell_wiener(p)


def test_unbound_variable():
    s = structure_from_order(Precedence.chain(2))
    with pytest.raises(EvaluationError):
        evaluate(s, Prec("x", "y"))


def test_unknown_predicate():
    s = structure_from_order(Precedence.chain(2))
    with pytest.raises(EvaluationError):
        evaluate(s, Exists("x", Pred("Nope", "x")))


def test_unknown_constant():
    s = structure_from_order(Precedence.chain(2))
    with pytest.raises(EvaluationError):
        evaluate(s, DataCmp("=", Const("d"), Lit(0)))


def test_env_must_name_events():
    s = structure_from_order(Precedence.chain(2))
    with pytest.raises(EvaluationError):
        evaluate(s, Pred("P", "x"), {"x": "ghost"})


def test_free_variables():
    f = Forall("x", And((Prec("x", "y"), DataCmp("<", ValOf("z"), Lit(1)))))
    assert free_variables(f) == {"y", "z"}


def test_check_structure_reports_problems():
    s = FiniteStructure(
        events=("a", "b"),
        data_universe=(-1, 0, 1),
        predicates={"P": frozenset({"c"})},
        precedence=frozenset({("a", "z")}),
        val={"a": 5},
        constants={"k": 9},
    )
    problems = check_structure(s)
    assert any("non-events" in p and "P" in p for p in problems)
    assert any("precedence pair" in p for p in problems)
    assert any(p.startswith("val not total") for p in problems)
    assert any("val(a)=5" in p for p in problems)
    assert any("constant k" in p for p in problems)


def test_valid_structure_has_no_problems():
    assert check_structure(structure_from_order(Precedence.chain(3))) == []


def test_reduct_keeps_only_selected_events():
    s = structure_from_order(Precedence.chain(3), vals=[1, 2, 3])
    r = s.reduct(["e0", "e2"])
    assert r.events == ("e0", "e2")
    assert r.precedence == {("e0", "e2")}
    assert r.val == {"e0": 1, "e2": 3}
