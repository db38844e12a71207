import json
import random

import pytest

from conftest import CORPUS, R, T, corpus, corpus_files
from relcomp import framework
from relcomp.terms import ArityMismatch, ExtraVariableRhs, RelativeTRS, VariableLhs
from relcomp.trs_io import (
    TRSSyntaxError,
    load,
    parse_trs,
    print_trs,
    proof_from_json,
    proof_to_json,
    render_proof,
)

FAST = framework.AnalysisConfig(timeout=20, dims=(1, 2), deterministic=True)


def test_parse_relative_rules():
    rel = parse_trs("(VAR x)\n(RULES\n  f(x) -> g(x)\n  g(x) ->= x\n  a -> b\n)\n")
    assert rel.strict == (R("f(x) -> g(x)"), R("a -> b"))
    assert rel.weak == (R("g(x) -> x"),)


def test_comments_and_constants():
    rel = parse_trs("(COMMENT nested (parens) are fine)(RULES a -> f(b))")
    assert rel.strict[0].lhs == T("a")
    assert len(rel.rules) == 1


def test_nullary_call_syntax():
    assert parse_trs("(RULES a() -> b)").strict[0].lhs == T("a")


def test_undeclared_identifier_is_a_symbol():
    rel = parse_trs("(RULES f(x) -> x)")
    assert rel.strict[0].rhs == T("x", variables=())


@pytest.mark.parametrize(
    "text, line, col",
    [
        ("(RULES\n  f(x -> x)", 2, 7),
        ("(RULES a b)", 1, 10),
        ("(FOO a)", 1, 2),
        ("(RULES a -> b", 1, 2),
        ("RULES", 1, 1),
    ],
)
def test_syntax_errors_have_positions(text, line, col):
    with pytest.raises(TRSSyntaxError) as info:
        parse_trs(text)
    assert (info.value.line, info.value.col) == (line, col)
    assert str(info.value).startswith(f"{line}:{col}:")


def test_rule_errors_have_positions():
    with pytest.raises(VariableLhs, match="^3:3:"):
        parse_trs("(VAR x y)\n(RULES\n  x -> a)")
    with pytest.raises(ExtraVariableRhs, match="^1:"):
        parse_trs("(VAR x y)(RULES f(x) -> y)")
    with pytest.raises(ArityMismatch, match="^1:"):
        parse_trs("(RULES f(a) -> f(a,a))")


def test_variable_with_arguments_rejected():
    with pytest.raises(TRSSyntaxError):
        parse_trs("(VAR x)(RULES f(x) -> x(a))")


@pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.stem)
def test_corpus_roundtrip(path):
    rel = load(path)
    back = parse_trs(print_trs(rel))
    assert back.strict == rel.strict and back.weak == rel.weak


def test_print_parse_roundtrip_random():
    rng = random.Random(59)
    pool = [R(r) for r in ("f(x) -> g(x)", "g(h(x,y)) -> h(y,x)", "a -> b", "h(x,a) -> x", "f(f(x)) -> a")]
    for _ in range(60):
        rules = rng.sample(pool, rng.randint(1, len(pool)))
        k = rng.randint(0, len(rules))
        rel = RelativeTRS(tuple(rules[:k]), tuple(rules[k:]))
        back = parse_trs(print_trs(rel))
        assert (back.strict, back.weak) == (rel.strict, rel.weak)


# -- proofs ---------------------------------------------------------------------


@pytest.fixture(scope="module")
def rev_proof():
    return framework.analyze(corpus("rev_rel"), FAST)


@pytest.fixture(scope="module")
def ex16_proof():
    return framework.analyze(corpus("ex16_luc06"), FAST)


def test_render_text(rev_proof):
    text = render_proof(rev_proof, "text")
    lines = text.splitlines()
    assert lines[0] == "YES(?,O(n))"
    assert "  2: rev'(nil,y) ->= y" in lines
    assert "  {1}/{2,3}" in lines
    assert any("[match-bounds c=1] shifts {1}" in line for line in lines)
    assert "| rev'_1(1,2) -> 1" in text


def test_render_json_schema(ex16_proof):
    data = json.loads(render_proof(ex16_proof, "json"))
    assert data["verdict"] == "YES(?,O(n^2))"
    assert set(data) == {"verdict", "bound", "language", "variables", "signature", "rules", "strict_count", "proof"}
    assert data["strict_count"] == 7 and len(data["rules"]) == 7
    step = data["proof"]["step"]
    assert set(step) == {"processor", "label", "cost", "shifted", "note", "witness", "children"}
    assert step["witness"]["type"] in ("interpretation", "automaton", "split")


@pytest.mark.parametrize("which", ["rev_proof", "ex16_proof"])
def test_json_roundtrip(which, request):
    proof = request.getfixturevalue(which)
    data = proof_to_json(proof)
    back = proof_from_json(json.dumps(data))
    assert proof_to_json(back) == data
    assert render_proof(back, "text") == render_proof(proof, "text")
    assert framework.total_bound(back) == framework.total_bound(proof)


def test_render_open_problem():
    proof = framework.ProofNode(framework.CPProblem(corpus("cab_exp")))
    text = render_proof(proof)
    assert text.splitlines()[0] == "MAYBE" and "open" in text


def test_unknown_style(rev_proof):
    with pytest.raises(ValueError):
        render_proof(rev_proof, "xml")
