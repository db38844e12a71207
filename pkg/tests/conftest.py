from pathlib import Path

import pytest

from relcomp.terms import App, Rule, Var
from relcomp.trs_io import load, parse_trs

CORPUS = Path(__file__).resolve().parent.parent / "src" / "relcomp" / "corpus"


def corpus(name: str):
    return load(CORPUS / f"{name}.trs")


def corpus_files():
    return sorted(CORPUS.glob("*.trs"))


def T(text: str, variables=("x", "y", "z")):
    """Parse a single term; names in ``variables`` are variables."""
    rel = parse_trs(f"(VAR {' '.join(variables)})(RULES {text} -> {text})")
    return rel.strict[0].lhs


def R(text: str, variables=("x", "y", "z")) -> Rule:
    rel = parse_trs(f"(VAR {' '.join(variables)})(RULES {text})")
    return rel.rules[0]


def split(rel, strict_numbers):
    """Re-split a system by 1-based rule numbers (root order)."""
    rules = rel.rules
    strict = [r for i, r in enumerate(rules, 1) if i in strict_numbers]
    weak = [r for i, r in enumerate(rules, 1) if i not in strict_numbers]
    return rel.with_rules(strict, weak)


@pytest.fixture
def ex16():
    return corpus("ex16_luc06")


# acceptance results, printed at the end of the run
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
