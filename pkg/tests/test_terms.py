import random

import pytest

from conftest import R, T, corpus
from relcomp.terms import (
    App,
    EnumerationCapExceeded,
    ExtraVariableRhs,
    FuelExhausted,
    Language,
    RelativeTRS,
    Rule,
    Var,
    VariableLhs,
    classify,
    complexity_sample,
    derivation_height,
    fcount,
    ground_terms,
    language_terms,
    match,
    size,
    substitute,
    successors,
    subterm,
)


def rel_of(*rules, weak=()):
    return RelativeTRS(tuple(R(r) for r in rules), tuple(R(r) for r in weak))


# -- structure ---------------------------------------------------------------


def test_size_and_fcount():
    t = T("f(x,g(a))")
    assert size(t) == 4
    assert fcount(t) == 3


def test_terms_are_interned():
    assert T("f(x,a)") is T("f(x,a)")
    assert hash(T("g(b)")) == hash(App("g", [App("b")]))


def test_match_and_substitute():
    s = match(T("f(x,y)"), T("f(a,g(b))"))
    assert s == {Var("x"): T("a"), Var("y"): T("g(b)")}
    assert match(T("f(x,x)"), T("f(a,b)")) is None
    assert substitute(T("g(y)"), s) == T("g(g(b))")
    assert subterm(T("f(a,g(b))"), (1, 0)) == T("b")


def test_rule_errors():
    with pytest.raises(VariableLhs):
        Rule(Var("x"), App("a"))
    with pytest.raises(ExtraVariableRhs):
        Rule(App("f", [Var("x")]), Var("y"))


# -- classify ----------------------------------------------------------------


def test_classify_nonlinear_nonduplicating():
    p = classify(rel_of("f(x,x) -> g(x)"))
    assert not p.duplicating and not p.left_linear and not p.collapsing


def test_classify_ex16_rule6():
    p = classify(rel_of("g(x,x) -> g(a,b)"))
    assert not p.left_linear and not p.duplicating


def test_classify_hofbauer_rule():
    p = classify(rel_of("c(L(x)) -> R(x)"))
    assert p.linear and not p.collapsing
    assert p.defined_symbols == {"c"}


def test_classify_duplicating_collapsing():
    p = classify(rel_of("f(x) -> g(x,x)", "h(x) -> x"))
    assert p.duplicating and p.collapsing and p.left_linear and not p.right_linear


# -- successors --------------------------------------------------------------


def test_successors_choice():
    assert successors(T("a"), [R("a -> b"), R("a -> c")]) == {T("b"), T("c")}


def test_successors_normal_form():
    assert successors(T("b"), [R("a -> b")]) == set()


def test_successors_all_positions():
    assert successors(T("f(a)"), [R("a -> b"), R("f(x) -> x")]) == {T("f(b)"), T("a")}


def test_successors_rematch_property():
    rng = random.Random(7)
    rules = [R("f(x,y) -> g(y)"), R("g(a) -> b"), R("g(x) -> f(x,x)"), R("a -> c")]
    sig = {"f": 2, "g": 1, "a": 0, "b": 0, "c": 0}
    terms = ground_terms(sig, 6)
    for t in rng.sample(terms, 60):
        for u in successors(t, rules):
            # u differs from t at exactly one position, where a rule applies
            assert _one_step(t, u, rules)


def _one_step(t, u, rules):
    for r in rules:
        s = match(r.lhs, t)
        if s is not None and substitute(r.rhs, s) == u:
            return True
    if isinstance(t, App) and isinstance(u, App) and t.fun == u.fun:
        diff = [i for i, (a, b) in enumerate(zip(t.args, u.args)) if a != b]
        return len(diff) == 1 and _one_step(t.args[diff[0]], u.args[diff[0]], rules)
    return False


# -- derivation height ---------------------------------------------------------


def test_dh_choice_example():
    assert derivation_height(T("a"), rel_of("a -> b", "a -> c")) == 1


def test_dh_normal_form():
    assert derivation_height(T("b"), rel_of("a -> b")) == 0


def test_dh_counts_only_strict_steps():
    rel = rel_of("a -> b", weak=("c -> a",))
    assert derivation_height(T("f(c,c)"), rel) == 2


def test_dh_ex16_term(ex16):
    # frozen value of the exhaustive oracle
    assert derivation_height(T("mark(f(a,a))"), ex16) == 4


def test_dh_nontermination_raises():
    with pytest.raises(FuelExhausted):
        derivation_height(T("a"), rel_of("a -> f(a)"), fuel=1000)
    with pytest.raises(FuelExhausted):
        derivation_height(T("a"), rel_of("a -> b", weak=("b -> a",)))


def test_dh_weak_cycle_is_fine():
    rel = rel_of("c -> d", weak=("a -> b", "b -> a"))
    assert derivation_height(T("f(a,c)"), rel) == 1


def test_dh_size_decreasing_rule_bounded_by_size():
    rel = rel_of("f(g(x)) -> x")
    sig = {"f": 1, "g": 1, "a": 0}
    for t in ground_terms(sig, 8):
        assert derivation_height(t, rel) <= size(t)


# -- complexity sample ---------------------------------------------------------


def test_sample_single_rule():
    assert complexity_sample(rel_of("a -> b"), Language.ALL, 1) == 1


def test_sample_empty_strict():
    rel = RelativeTRS((), (R("a -> b"),))
    assert complexity_sample(rel, Language.ALL, 4) == 0


def _naive_dh(t, rel):
    # plain recursion over all reducts; independent of the memoised oracle
    strict = set(successors(t, rel.strict))
    weak = set(successors(t, rel.weak))
    best = 0
    for u in strict:
        best = max(best, 1 + _naive_dh(u, rel))
    for u in weak - strict:
        best = max(best, _naive_dh(u, rel))
    return best


def test_dh_agrees_with_naive_recursion(ex16):
    for t in language_terms(ex16, Language.ALL, 4):
        assert derivation_height(t, ex16) == _naive_dh(t, ex16)


def test_sample_ex16_n4(ex16):
    # frozen oracle value
    assert complexity_sample(ex16, Language.ALL, 4) == 8


def test_constructor_language():
    rel = corpus("bits")
    terms = language_terms(rel, Language.CONSTRUCTOR, 4)
    assert T("bits(s(0))") in terms
    assert T("bits(half(0))") not in terms
    assert all(t.fun in rel.defined_symbols() for t in terms)


def test_enumeration_cap():
    with pytest.raises(EnumerationCapExceeded):
        ground_terms({"f": 2, "a": 0, "b": 0}, 12, cap=1000)


# -- modularity ---------------------------------------------------------------

_SYMS = [("a", 0), ("b", 0), ("f", 1), ("g", 1)]


def _random_term(rng, depth, allow_var):
    if depth == 0 or rng.random() < 0.3:
        if allow_var and rng.random() < 0.5:
            return Var("x")
        return App(rng.choice(["a", "b"]))
    f = rng.choice(["f", "g"])
    return App(f, [_random_term(rng, depth - 1, allow_var)])


def _random_terminating_rule(rng):
    # size-decreasing rules keep every system terminating
    while True:
        lhs = _random_term(rng, 3, True)
        rhs = _random_term(rng, 2, True)
        if isinstance(lhs, Var):
            continue
        if size(rhs) < size(lhs) and _vars(rhs) <= _vars(lhs):
            return Rule(lhs, rhs)


def _vars(t):
    if isinstance(t, Var):
        return {t}
    out = set()
    for a in t.args:
        out |= _vars(a)
    return out


def test_modular_inequality_property():
    rng = random.Random(2024)
    sig = dict(_SYMS)
    terms = ground_terms(sig, 5)
    cases = 0
    while cases < 60:
        r1 = tuple(_random_terminating_rule(rng) for _ in range(rng.randint(1, 2)))
        r2 = tuple(_random_terminating_rule(rng) for _ in range(rng.randint(1, 2)))
        union = RelativeTRS(r1 + r2, ())
        a = RelativeTRS(r1, r2)
        b = RelativeTRS(r2, r1)
        m0, m1, m2 = {}, {}, {}
        for t in terms:
            whole = derivation_height(t, union, memo=m0)
            parts = derivation_height(t, a, memo=m1) + derivation_height(t, b, memo=m2)
            assert whole <= parts
        cases += 1
    assert cases >= 50


def test_modular_inequality_can_be_strict():
    r1, r2 = (R("a -> b"),), (R("a -> c"),)
    t = T("a")
    whole = derivation_height(t, RelativeTRS(r1 + r2, ()))
    parts = derivation_height(t, RelativeTRS(r1, r2)) + derivation_height(t, RelativeTRS(r2, r1))
    assert whole == 1 and parts == 2
