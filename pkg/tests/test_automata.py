import random
import time
from collections import Counter

import pytest

from conftest import R, T, corpus, split
from relcomp.automata import (
    Bounded,
    CompletionBudget,
    GaveUp,
    Mode,
    NoConstant,
    PreconditionViolated,
    TreeAutomaton,
    automaton_signature,
    base,
    certify,
    choose_mode,
    complete,
    drop,
    enriched_steps,
    height_multiset,
    initial_automaton,
    join,
    label,
    lift,
    match_rule,
    matchrt_rule,
    multiset_compare,
    raise_at,
)
from relcomp.terms import (
    FRESH,
    App,
    FuelExhausted,
    Language,
    RelativeTRS,
    Rule,
    Var,
    derivation_height,
    fcount,
    ground_terms,
    language_terms,
    size,
)


def E(text, *heights):
    return label(T(text), heights)


# -- enriched rules -------------------------------------------------------------

REV = R("rev(x) -> rev'(x,nil)")
REV_CONS = R("rev'(cons(x,y),z) -> rev'(y,cons(x,z))")
REV_NIL = R("rev'(nil,y) -> y")


def test_match_rule_rev():
    assert match_rule(REV, E("rev(x)", 0)).rhs == E("rev'(x,nil)", 1, 1)
    assert match_rule(REV, E("rev(x)", 2)).rhs == E("rev'(x,nil)", 3, 3)


def test_matchrt_rule_rev_cons():
    # size-preserving with a uniform left-hand side keeps the height
    assert matchrt_rule(REV_CONS, E("rev'(cons(x,y),z)", 0, 0), 1).rhs == E("rev'(y,cons(x,z))", 0, 0)
    # mixed heights take one more than the minimum
    assert matchrt_rule(REV_CONS, E("rev'(cons(x,y),z)", 0, 1), 1).rhs == E("rev'(y,cons(x,z))", 1, 1)
    # and the height is capped at c
    assert matchrt_rule(REV_CONS, E("rev'(cons(x,y),z)", 1, 2), 1).rhs == E("rev'(y,cons(x,z))", 1, 1)


def test_matchrt_collapsing():
    assert matchrt_rule(REV_NIL, E("rev'(nil,y)", 0, 3), 2).rhs == Var("y")


def test_match_rule_checks_base():
    with pytest.raises(ValueError):
        match_rule(REV, E("rev'(x,nil)", 0, 0))


def test_lift_base_join_raise():
    t = E("f(a,g(b))", 0, 2, 1, 0)
    assert base(t) == T("f(a,g(b))")
    assert lift(T("f(a)"), 3) == E("f(a)", 3, 3)
    assert height_multiset(t) == Counter({0: 2, 2: 1, 1: 1})
    assert join([E("g(a)", 0, 2), E("g(a)", 1, 0)]) == E("g(a)", 1, 2)
    assert raise_at(t, (1, 0)) == E("f(a,g(b))", 0, 2, 1, 1)
    with pytest.raises(ValueError):
        join([E("g(a)", 0, 0), E("g(b)", 0, 0)])


def test_enriched_steps_rev():
    rel = corpus("rev_rel")
    steps = list(enriched_steps(E("rev(cons(nil,nil))", 0, 0, 0, 0), rel, 1))
    assert len(steps) == 1
    succ, strict, _ = steps[0]
    assert strict and succ == E("rev'(cons(nil,nil),nil)", 1, 0, 0, 0, 1)


# -- multisets ------------------------------------------------------------------


def test_multiset_examples():
    assert multiset_compare([0], [], "gt")
    assert multiset_compare([0, 0], [1, 1, 1, 0], "gt")
    assert not multiset_compare([1], [0], "gt")
    assert multiset_compare([2], [2], "ge") and not multiset_compare([2], [2], "gt")
    assert multiset_compare([0, 2], [2, 2, 2], "gtc", c=2)
    assert multiset_compare([2], [2, 2], "gec", c=2)
    assert drop(Counter([1, 2, 2]), 2) == Counter([1])
    with pytest.raises(ValueError):
        multiset_compare([1], [1], "gtc")


# -- automata -------------------------------------------------------------------


def test_initial_automaton_all():
    rel = corpus("rev_rel")
    a = initial_automaton(automaton_signature(rel), Language.ALL, rel)
    assert a.states == {1} and a.finals == {1}
    assert a.accepts(E("rev(cons(nil,nil))", 0, 0, 0, 0))
    assert a.accepts(App((FRESH, 0)))
    assert not a.accepts(E("rev(nil)", 1, 0))


def test_initial_automaton_constructor():
    rel = corpus("rev_rel")
    a = initial_automaton(automaton_signature(rel), Language.CONSTRUCTOR, rel)
    assert a.accepts(E("rev(cons(nil,nil))", 0, 0, 0, 0))
    assert not a.accepts(E("rev(rev(nil))", 0, 0, 0))
    assert not a.accepts(E("nil", 0))


def test_initial_automaton_needs_constant():
    rel = RelativeTRS((R("f(x) -> g(x)"),), ())
    with pytest.raises(NoConstant):
        initial_automaton(dict(rel.signature), Language.ALL, rel)
    # the fresh constant makes the signature usable
    assert initial_automaton(automaton_signature(rel), Language.ALL, rel).accepts(E("f($)", 0, 0))


REV_CLOSURE = [
    "$_0 -> 1",
    "cons_0(1,1) -> 1",
    "cons_1(1,1) -> 2",
    "cons_1(1,2) -> 2",
    "nil_0 -> 1",
    "nil_1 -> 2",
    "rev_0(1) -> 1",
    "rev'_0(1,1) -> 1",
    "rev'_1(1,2) -> 1",
    "2 -> 1",
]


def test_complete_rev_rel():
    rel = corpus("rev_rel")
    res = complete(rel)
    assert isinstance(res, Bounded) and res.c == 1 and res.mode is Mode.LINEAR
    assert res.automaton.transition_lines() == REV_CLOSURE
    assert certify(res.automaton, rel, Language.ALL, 1, Mode.LINEAR)


def test_certify_rejects_mutations():
    rel = corpus("rev_rel")
    good = TreeAutomaton.from_json({"states": [1, 2], "finals": [1], "transitions": REV_CLOSURE})
    assert certify(good, rel, Language.ALL, 1, Mode.LINEAR)
    no_eps = TreeAutomaton.from_json({"states": [1, 2], "finals": [1], "transitions": REV_CLOSURE[:-1]})
    assert not certify(no_eps, rel, Language.ALL, 1, Mode.LINEAR)
    assert not certify(good, rel, Language.ALL, 0, Mode.LINEAR)
    dropped = [line for line in REV_CLOSURE if not line.startswith("rev'_1")]
    bad = TreeAutomaton.from_json({"states": [1, 2], "finals": [1], "transitions": dropped})
    assert not certify(bad, rel, Language.ALL, 1, Mode.LINEAR)


def test_automaton_json_roundtrip():
    res = complete(corpus("rev_rel"))
    back = TreeAutomaton.from_json(res.automaton.to_json())
    assert back.transition_lines() == res.automaton.transition_lines()
    assert back.finals == res.automaton.finals


def test_complete_a_to_b():
    res = complete(corpus("a_to_b"))
    assert res and res.c == 1


def test_complete_ex16_raise_mode():
    rel = split(corpus("ex16_luc06"), {6})
    assert choose_mode(rel) is Mode.RAISE
    res = complete(rel)
    assert res and res.c == 1 and res.mode is Mode.RAISE
    assert certify(res.automaton, rel, Language.ALL, res.c, Mode.RAISE)


def test_complete_ex16_rule2():
    rel = split(corpus("ex16_luc06"), {2})
    res = complete(rel)
    assert res and res.c == 2
    assert certify(res.automaton, rel, Language.ALL, 2, res.mode)


def test_complete_gives_up_on_exponential_system():
    rel = RelativeTRS((R("a(b(x)) -> b(b(a(x)))"),), ())
    res = complete(rel, budget=CompletionBudget(max_transitions=300, max_states=100))
    assert isinstance(res, GaveUp) and not res


def test_complete_respects_deadline():
    rel = RelativeTRS((R("a(b(x)) -> b(b(a(x)))"),), ())
    start = time.monotonic()
    res = complete(rel, budget=CompletionBudget(10**6, 10**6, deadline=start + 0.5, max_height=100))
    assert isinstance(res, GaveUp) and time.monotonic() - start < 5


def test_preconditions():
    with pytest.raises(PreconditionViolated):
        complete(RelativeTRS((R("f(x) -> g(x,x)"),), ()))
    with pytest.raises(PreconditionViolated):
        complete(corpus("rev_append"))
    with pytest.raises(PreconditionViolated):
        complete(split(corpus("ex16_luc06"), {6}), mode=Mode.LINEAR)


# -- properties -------------------------------------------------------------------

SIG = {"a": 0, "f": 1, "g": 1, "h": 2}


def _random_term(rng, depth, vars_=()):
    if depth == 0 or rng.random() < 0.25:
        if vars_ and rng.random() < 0.6:
            return rng.choice(vars_)
        return App("a")
    f = rng.choice(["f", "g", "h"])
    return App(f, [_random_term(rng, depth - 1, vars_) for _ in range(SIG[f])])


def _random_enriched(rng, t, top):
    n = sum(height_multiset(lift(t, 0)).values())
    return label(t, [rng.randint(0, top) for _ in range(n)])


def test_lift_base_property():
    rng = random.Random(41)
    for _ in range(60):
        t = _random_term(rng, 4, (Var("x"),))
        h = rng.randint(0, 5)
        assert base(lift(t, h)) == t
        assert set(height_multiset(lift(t, h))) <= {h}


def test_enriched_steps_are_compatible():
    rng = random.Random(43)
    rel = RelativeTRS(
        (R("f(g(x)) -> g(f(f(x)))"), R("h(x,x) -> h(a,x)")),
        (R("g(g(x)) -> g(x)"), R("h(f(x),y) -> h(x,f(y))")),
    )
    c = 2
    strict_cases = weak_cases = 0
    while strict_cases < 60 or weak_cases < 60:
        t = _random_enriched(rng, _random_term(rng, 4), c)
        for u, strict, _ in enriched_steps(t, rel, c):
            a, b = height_multiset(t), height_multiset(u)
            if strict:
                assert multiset_compare(a, b, "gt")
                if max(b) <= c:
                    assert multiset_compare(a, b, "gtc", c)
                    strict_cases += 1
            else:
                assert max(b) <= c
                assert multiset_compare(a, b, "gec", c)
                weak_cases += 1


def test_raise_is_bounded_decrease():
    rng = random.Random(47)
    c = 3
    for _ in range(60):
        t = _random_enriched(rng, _random_term(rng, 4), c - 1)
        n = sum(height_multiset(t).values())
        pos = _positions(t)[rng.randrange(n)]
        u = raise_at(t, pos)
        assert multiset_compare(height_multiset(t), height_multiset(u), "gec", c)
        assert base(u) == base(t)


def _positions(t, pos=()):
    out = [pos]
    for i, a in enumerate(t.args):
        out.extend(_positions(a, pos + (i,)))
    return out


def test_rev_rel_derivation_length_is_linear():
    rel = corpus("rev_rel")
    for t in language_terms(rel, Language.ALL, 6):
        assert derivation_height(t, rel) <= size(t)


def _random_rule(rng, binary):
    x, y = Var("x"), Var("y")
    while True:
        vars_ = (x, y) if binary else (x,)
        lhs = _random_term(rng, 3, vars_)
        rhs = _random_term(rng, 3, vars_)
        if isinstance(lhs, Var) or isinstance(rhs, Var):
            continue
        try:
            rule = Rule(lhs, rhs)
        except ValueError:
            continue
        if not rule.is_duplicating:
            return rule


def test_certify_accepts_completed_automata():
    rng = random.Random(53)
    budget = CompletionBudget(max_transitions=200, max_states=60, max_height=3)
    done = 0
    tried = 0
    while done < 50 and tried < 2000:
        tried += 1
        rules = [_random_rule(rng, rng.random() < 0.3) for _ in range(rng.randint(1, 3))]
        k = rng.randint(1, len(rules))
        rel = RelativeTRS(tuple(rules[:k]), tuple(rules[k:]))
        res = complete(rel, budget=budget)
        if not res:
            continue
        done += 1
        assert certify(res.automaton, rel, Language.ALL, res.c, res.mode), rel
    assert done >= 50


def test_chain_length_bound():
    # strict steps from t are at most ||t|| (k+1)^c, k the largest rhs
    rng = random.Random(61)
    budget = CompletionBudget(max_transitions=200, max_states=60, max_height=3)
    cases = 0
    tried = 0
    while cases < 50 and tried < 2000:
        tried += 1
        rules = [_random_rule(rng, False) for _ in range(rng.randint(1, 3))]
        rel = RelativeTRS((rules[0],), tuple(rules[1:]))
        res = complete(rel, budget=budget)
        if not res:
            continue
        k = max(fcount(r.rhs) for r in rel.rules)
        try:
            for t in rng.sample(ground_terms(SIG, 5), 20):
                assert derivation_height(t, rel, fuel=20000) <= fcount(t) * (k + 1) ** res.c
        except FuelExhausted:
            continue
        cases += 1
    assert cases >= 50
