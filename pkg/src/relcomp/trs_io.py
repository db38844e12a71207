"""Reading and writing rewrite systems in the plain-text TPDB format.

Supported sections are ``(VAR ...)``, ``(RULES ...)`` and ``(COMMENT ...)``.
Rules written ``l -> r`` are strict, rules written ``l ->= r`` are weak.
Identifiers that are not declared as variables are function symbols.
"""

from __future__ import annotations

import json

from .terms import (
    App,
    ArityMismatch,
    ExtraVariableRhs,
    RelativeTRS,
    Rule,
    RuleError,
    Term,
    Var,
    VariableLhs,
    fun_name,
    to_str,
)


class TRSSyntaxError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


_PUNCT = "(),"


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def _advance(self, n: int = 1):
        for ch in self.text[self.pos:self.pos + n]:
            if ch == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
        self.pos += n

    def skip_ws(self):
        text = self.text
        while self.pos < len(text) and text[self.pos].isspace():
            self._advance()

    def peek(self):
        """Next token as ``(kind, value, line, col)``; kinds are
        ``punct``, ``arrow``, ``ident`` and ``eof``."""
        self.skip_ws()
        text, p = self.text, self.pos
        if p >= len(text):
            return ("eof", None, self.line, self.col)
        ch = text[p]
        if ch in _PUNCT:
            return ("punct", ch, self.line, self.col)
        if text.startswith("->=", p):
            return ("arrow", "->=", self.line, self.col)
        if text.startswith("->", p):
            return ("arrow", "->", self.line, self.col)
        end = p
        while end < len(text) and not text[end].isspace() and text[end] not in _PUNCT:
            if text.startswith("->", end):
                break
            end += 1
        return ("ident", text[p:end], self.line, self.col)

    def next(self):
        tok = self.peek()
        if tok[0] != "eof":
            self._advance(len(tok[1]))
        return tok

    def expect(self, value: str):
        tok = self.next()
        if tok[1] != value:
            got = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise TRSSyntaxError(f"expected {value!r}, found {got}", tok[2], tok[3])
        return tok

    def skip_balanced(self, line: int, col: int):
        """Skip raw text up to the parenthesis closing an open section."""
        depth = 1
        text = self.text
        while self.pos < len(text):
            ch = text[self.pos]
            self._advance()
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
                if depth == 0:
                    return
        raise TRSSyntaxError("unterminated section", line, col)


def parse_trs(text: str) -> RelativeTRS:
    lex = _Lexer(text)
    variables: set = set()
    raw_rules: list = []  # (lhs, rhs, weak, line, col)
    arities: dict = {}
    while True:
        tok = lex.next()
        if tok[0] == "eof":
            break
        if tok[1] != "(":
            raise TRSSyntaxError(f"expected '(', found {tok[1]!r}", tok[2], tok[3])
        head = lex.next()
        if head[0] != "ident":
            raise TRSSyntaxError("expected a section name", head[2], head[3])
        name = head[1]
        if name == "VAR":
            while lex.peek()[0] == "ident":
                v = lex.next()
                if v[1] in arities:
                    raise TRSSyntaxError(f"{v[1]} is already used as a function symbol", v[2], v[3])
                variables.add(v[1])
            lex.expect(")")
        elif name == "RULES":
            while lex.peek()[1] != ")":
                if lex.peek()[0] == "eof":
                    raise TRSSyntaxError("unterminated RULES section", head[2], head[3])
                start = lex.peek()
                lhs = _parse_term(lex, variables, arities)
                arrow = lex.next()
                if arrow[0] != "arrow":
                    raise TRSSyntaxError(f"expected '->' or '->=', found {arrow[1]!r}", arrow[2], arrow[3])
                rhs = _parse_term(lex, variables, arities)
                raw_rules.append((lhs, rhs, arrow[1] == "->=", start[2], start[3]))
            lex.expect(")")
        elif name == "COMMENT":
            lex.skip_balanced(tok[2], tok[3])
        else:
            raise TRSSyntaxError(f"unsupported section {name}", head[2], head[3])
    strict, weak = [], []
    for lhs, rhs, is_weak, line, col in raw_rules:
        try:
            rule = Rule(lhs, rhs)
        except RuleError as exc:
            raise type(exc)(f"{line}:{col}: {exc}") from None
        (weak if is_weak else strict).append(rule)
    return RelativeTRS(tuple(strict), tuple(weak), dict(arities))


def _parse_term(lex: _Lexer, variables: set, arities: dict) -> Term:
    tok = lex.next()
    if tok[0] != "ident":
        got = "end of input" if tok[0] == "eof" else repr(tok[1])
        raise TRSSyntaxError(f"expected a term, found {got}", tok[2], tok[3])
    name = tok[1]
    args = []
    if lex.peek()[1] == "(":
        lex.next()
        if lex.peek()[1] != ")":
            args.append(_parse_term(lex, variables, arities))
            while lex.peek()[1] == ",":
                lex.next()
                args.append(_parse_term(lex, variables, arities))
        lex.expect(")")
    if name in variables:
        if args:
            raise TRSSyntaxError(f"variable {name} applied to arguments", tok[2], tok[3])
        return Var(name)
    known = arities.setdefault(name, len(args))
    if known != len(args):
        raise ArityMismatch(f"{tok[2]}:{tok[3]}: symbol {name} used with arities {known} and {len(args)}")
    return App(name, args)


def print_trs(rel: RelativeTRS) -> str:
    names = sorted({v.name for r in rel.rules for side in (r.lhs, r.rhs) for v in _vars(side)})
    lines = []
    if names:
        lines.append("(VAR " + " ".join(names) + ")")
    lines.append("(RULES")
    for r in rel.strict:
        lines.append(f"  {to_str(r.lhs)} -> {to_str(r.rhs)}")
    for r in rel.weak:
        lines.append(f"  {to_str(r.lhs)} ->= {to_str(r.rhs)}")
    lines.append(")")
    return "\n".join(lines) + "\n"


def _vars(t: Term):
    if isinstance(t, Var):
        yield t
    else:
        for a in t.args:
            yield from _vars(a)


def load(path) -> RelativeTRS:
    with open(path, encoding="utf-8") as fh:
        return parse_trs(fh.read())


# ---------------------------------------------------------------------------
# proof output


def _rule_set(rules, numbers) -> str:
    return "{" + ",".join(str(n) for n in sorted(numbers[r] for r in rules)) + "}"


def _problem_str(problem, numbers) -> str:
    return f"{_rule_set(problem.rel.strict, numbers)}/{_rule_set(problem.rel.weak, numbers)}"


def _witness_lines(step) -> list:
    from . import automata
    from .framework import SplitWitness
    from .interpretations import LinearInterpretation

    w = step.witness
    if isinstance(w, LinearInterpretation):
        return w.describe()
    if isinstance(w, automata.Bounded):
        return w.automaton.transition_lines() + ["final: " + " ".join(map(str, sorted(w.automaton.finals)))]
    if isinstance(w, SplitWitness):
        return []
    return [str(w)]


def render_proof(proof, style: str = "text") -> str:
    """Render a proof tree as indented text or as JSON."""
    from .framework import total_bound

    if style == "json":
        return json.dumps(proof_to_json(proof), indent=2) + "\n"
    if style != "text":
        raise ValueError(f"unknown style {style!r}")
    numbers = {r: i + 1 for i, r in enumerate(proof.problem.rel.rules)}
    lines = [total_bound(proof).verdict]
    k = len(proof.problem.rel.strict)
    for r, i in numbers.items():
        lines.append(f"  {i}: {to_str(r.lhs)} {'->' if i <= k else '->='} {to_str(r.rhs)}")

    def go(node, depth):
        pad = "  " * depth
        lines.append(f"{pad}{_problem_str(node.problem, numbers)}")
        step = node.step
        if step is None:
            if not node.problem.closed:
                lines.append(f"{pad}  open")
            return
        for ch in step.children:
            edge = f"{pad}  {step.cost} [{step.label}]"
            if step.shifted:
                edge += f" shifts {_rule_set(step.shifted, numbers)}"
            lines.append(edge)
            if ch is step.children[0]:
                lines.extend(f"{pad}    | {x}" for x in _witness_lines(step))
                if step.note:
                    lines.append(f"{pad}    | note: {step.note}")
            go(ch, depth + 2)

    go(proof, 1)
    return "\n".join(lines) + "\n"


def _witness_json(step, numbers) -> dict:
    from . import automata
    from .framework import SplitWitness
    from .interpretations import LinearInterpretation

    w = step.witness
    if isinstance(w, LinearInterpretation):
        return {"type": "interpretation", **w.to_json()}
    if isinstance(w, automata.Bounded):
        return {"type": "automaton", "bound": w.c, "mode": w.mode.value, **w.automaton.to_json()}
    if isinstance(w, SplitWitness):
        return {
            "type": "split",
            "parts": [sorted(numbers[r] for r in w.first), sorted(numbers[r] for r in w.second)],
        }
    raise TypeError(f"unknown witness {w!r}")


def proof_to_json(proof) -> dict:
    from .framework import total_bound

    rel = proof.problem.rel
    rules = rel.rules
    numbers = {r: i + 1 for i, r in enumerate(rules)}

    def node(n):
        out = {
            "strict": sorted(numbers[r] for r in n.problem.rel.strict),
            "weak": sorted(numbers[r] for r in n.problem.rel.weak),
            "step": None,
        }
        s = n.step
        if s is not None:
            out["step"] = {
                "processor": s.processor,
                "label": s.label,
                "cost": str(s.cost),
                "shifted": sorted(numbers[r] for r in s.shifted),
                "note": s.note,
                "witness": _witness_json(s, numbers),
                "children": [node(ch) for ch in s.children],
            }
        return out

    return {
        "verdict": total_bound(proof).verdict,
        "bound": str(total_bound(proof)),
        "language": proof.problem.lang.value,
        "variables": sorted({v.name for r in rules for side in (r.lhs, r.rhs) for v in _vars(side)}),
        "signature": {fun_name(f): n for f, n in sorted(rel.signature.items(), key=lambda kv: fun_name(kv[0]))},
        "rules": [str(r) for r in rules],
        "strict_count": len(rel.strict),
        "proof": node(proof),
    }


def proof_from_json(data):
    """Rebuild a proof tree from :func:`proof_to_json` output."""
    from . import automata
    from .framework import Bound, CPProblem, ProofNode, SplitWitness, Step
    from .interpretations import LinearInterpretation
    from .terms import Language

    if isinstance(data, str):
        data = json.loads(data)
    variables = set(data["variables"])
    arities = dict(data["signature"])
    rules = []
    for text in data["rules"]:
        lex = _Lexer(text)
        lhs = _parse_term(lex, variables, arities)
        lex.next()
        rhs = _parse_term(lex, variables, arities)
        rules.append(Rule(lhs, rhs))
    k = data["strict_count"]
    root = RelativeTRS(tuple(rules[:k]), tuple(rules[k:]), arities)
    lang = Language(data["language"])

    def by_number(nums):
        return tuple(rules[i - 1] for i in nums)

    def node(d):
        problem = CPProblem(root.with_rules(by_number(d["strict"]), by_number(d["weak"])), lang)
        s = d["step"]
        if s is None:
            return ProofNode(problem)
        w = s["witness"]
        if w["type"] == "interpretation":
            witness = LinearInterpretation.from_json(w)
        elif w["type"] == "automaton":
            witness = automata.Bounded(w["bound"], automata.TreeAutomaton.from_json(w), automata.Mode(w["mode"]))
        else:
            witness = SplitWitness(by_number(w["parts"][0]), by_number(w["parts"][1]))
        step = Step(
            s["processor"],
            s["label"],
            Bound.parse(s["cost"]),
            by_number(s["shifted"]),
            witness,
            [node(ch) for ch in s["children"]],
            s.get("note", ""),
        )
        return ProofNode(problem, step)

    return node(data["proof"])


__all__ = [
    "ArityMismatch",
    "ExtraVariableRhs",
    "TRSSyntaxError",
    "VariableLhs",
    "fun_name",
    "load",
    "parse_trs",
    "print_trs",
    "proof_from_json",
    "proof_to_json",
    "render_proof",
]
