"""A small CDCL SAT solver plus DIMACS input/output.

Literals use the DIMACS convention: variable ``v >= 1`` is the literal
``v`` and its negation ``-v``.  The solver does unit propagation with two
watched literals, first-UIP clause learning, VSIDS-style branching with
phase saving, and Luby restarts.  Runs are deterministic for a given seed.
"""

from __future__ import annotations

import heapq
import logging
import os
import random
import shlex
import subprocess
import tempfile
import time
from dataclasses import dataclass, field

log = logging.getLogger(__name__)


@dataclass
class CNF:
    num_vars: int = 0
    clauses: list = field(default_factory=list)

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        lines.extend(" ".join(map(str, c)) + " 0" for c in self.clauses)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_dimacs(cls, text: str) -> "CNF":
        cnf = cls()
        current: list = []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("c") or line.startswith("%"):
                continue
            if line.startswith("p"):
                parts = line.split()
                cnf.num_vars = int(parts[2])
                continue
            for tok in line.split():
                lit = int(tok)
                if lit == 0:
                    cnf.clauses.append(current)
                    current = []
                else:
                    current.append(lit)
                    cnf.num_vars = max(cnf.num_vars, abs(lit))
        if current:
            cnf.clauses.append(current)
        return cnf


@dataclass
class Budget:
    max_conflicts: int | None = None
    deadline: float | None = None  # time.monotonic() value
    cancel: object = None  # callable returning True to stop

    def exhausted(self, conflicts: int) -> bool:
        if self.max_conflicts is not None and conflicts >= self.max_conflicts:
            return True
        if self.deadline is not None and time.monotonic() >= self.deadline:
            return True
        return bool(self.cancel and self.cancel())


SAT, UNSAT, UNKNOWN = "sat", "unsat", "unknown"


@dataclass
class SatResult:
    status: str
    model: list | None = None  # model[v] is True/False, index 0 unused

    def value(self, lit: int) -> bool:
        v = self.model[abs(lit)]
        return v if lit > 0 else not v


class ExternalSolverFailure(RuntimeError):
    pass


def _luby(i: int) -> int:
    k = 1
    while (1 << k) - 1 < i:
        k += 1
    while (1 << k) - 1 != i:
        i -= (1 << (k - 1)) - 1
        k = 1
        while (1 << k) - 1 < i:
            k += 1
    return 1 << (k - 1)


class Solver:
    restart_base = 64
    var_decay = 0.95

    def __init__(self, cnf: CNF, seed: int = 0):
        self.n = n = cnf.num_vars
        # lists of size 2n+1 indexed by literal; negative literals wrap around
        self.val = [0] * (2 * n + 1)
        self.watches = [[] for _ in range(2 * n + 1)]
        self.level = [0] * (n + 1)
        self.reason: list = [None] * (n + 1)
        self.phase = [False] * (n + 1)
        rng = random.Random(seed)
        self.activity = [rng.random() * 1e-5 for _ in range(n + 1)]
        self.var_inc = 1.0
        self.heap = [(-self.activity[v], v) for v in range(1, n + 1)]
        heapq.heapify(self.heap)
        # activity of each variable's current heap entry (None when it has
        # none); a variable with a current entry is not pushed again
        self.pushed = list(self.activity)
        self.trail: list = []
        self.trail_lim: list = []
        self.qhead = 0
        self.conflicts = 0
        self.ok = True
        self.units: list = []
        for clause in cnf.clauses:
            self._add_input_clause(clause)

    # -- setup ---------------------------------------------------------------

    def _add_input_clause(self, clause):
        lits = []
        seen = set()
        for lit in clause:
            if -lit in seen:
                return  # tautology
            if lit not in seen:
                seen.add(lit)
                lits.append(lit)
        if not lits:
            self.ok = False
        elif len(lits) == 1:
            self.units.append(lits[0])
        else:
            self.watches[lits[0]].append(lits)
            self.watches[lits[1]].append(lits)

    # -- core ----------------------------------------------------------------

    def _enqueue(self, lit, reason):
        v = abs(lit)
        self.val[lit] = 1
        self.val[-lit] = -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _propagate(self):
        val = self.val
        watches = self.watches
        trail = self.trail
        level = self.level
        reason = self.reason
        cur = len(self.trail_lim)
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            false_lit = -p
            ws = watches[false_lit]
            i = 0
            j = 0
            n_ws = len(ws)
            while i < n_ws:
                c = ws[i]
                i += 1
                if c[0] == false_lit:
                    c[0], c[1] = c[1], false_lit
                first = c[0]
                if val[first] == 1:
                    ws[j] = c
                    j += 1
                    continue
                found = False
                for k in range(2, len(c)):
                    lk = c[k]
                    if val[lk] != -1:
                        c[1] = lk
                        c[k] = false_lit
                        watches[lk].append(c)
                        found = True
                        break
                if found:
                    continue
                ws[j] = c
                j += 1
                if val[first] == -1:
                    while i < n_ws:
                        ws[j] = ws[i]
                        j += 1
                        i += 1
                    del ws[j:]
                    return c
                val[first] = 1
                val[-first] = -1
                v = first if first > 0 else -first
                level[v] = cur
                reason[v] = c
                trail.append(first)
            del ws[j:]
        return None

    def _bump(self, v):
        act = self.activity
        act[v] += self.var_inc
        if act[v] > 1e100:
            for u in range(1, self.n + 1):
                act[u] *= 1e-100
            self.var_inc *= 1e-100
            self.heap = [(-act[u], u) for u in range(1, self.n + 1) if self.val[u] == 0]
            heapq.heapify(self.heap)
            self.pushed = [act[u] if self.val[u] == 0 else None for u in range(self.n + 1)]
        elif self.val[v] == 0:
            heapq.heappush(self.heap, (-act[v], v))
            self.pushed[v] = act[v]

    def _analyze(self, confl):
        seen = set()
        learnt = [0]
        counter = 0
        p = None
        idx = len(self.trail) - 1
        level = self.level
        cur = len(self.trail_lim)
        while True:
            for q in confl:
                if p is not None and q == p:
                    continue
                v = abs(q)
                if v in seen or level[v] == 0:
                    continue
                seen.add(v)
                self._bump(v)
                if level[v] >= cur:
                    counter += 1
                else:
                    learnt.append(q)
            while abs(self.trail[idx]) not in seen:
                idx -= 1
            p = self.trail[idx]
            idx -= 1
            confl = self.reason[abs(p)]
            seen.discard(abs(p))
            counter -= 1
            if counter == 0:
                break
        learnt[0] = -p
        # minimisation: drop literals implied by the rest of the clause
        if len(learnt) > 2:
            marks = {abs(q) for q in learnt}
            kept = [learnt[0]]
            for q in learnt[1:]:
                r = self.reason[abs(q)]
                if r is None or any(abs(x) not in marks and level[abs(x)] > 0 for x in r if abs(x) != abs(q)):
                    kept.append(q)
            learnt = kept
        if len(learnt) == 1:
            back = 0
        else:
            best = max(range(1, len(learnt)), key=lambda i: level[abs(learnt[i])])
            learnt[1], learnt[best] = learnt[best], learnt[1]
            back = level[abs(learnt[1])]
        self.var_inc /= self.var_decay
        return learnt, back

    def _backtrack(self, lvl):
        if len(self.trail_lim) <= lvl:
            return
        start = self.trail_lim[lvl]
        val = self.val
        act = self.activity
        heap = self.heap
        pushed = self.pushed
        phase = self.phase
        reason = self.reason
        for lit in self.trail[start:]:
            v = lit if lit > 0 else -lit
            phase[v] = lit > 0
            val[lit] = 0
            val[-lit] = 0
            reason[v] = None
            if pushed[v] != act[v]:
                heapq.heappush(heap, (-act[v], v))
                pushed[v] = act[v]
        del self.trail[start:]
        del self.trail_lim[lvl:]
        self.qhead = len(self.trail)

    def _pick(self):
        heap = self.heap
        val = self.val
        pushed = self.pushed
        while heap:
            key, v = heapq.heappop(heap)
            if pushed[v] == -key:
                pushed[v] = None
            if val[v] == 0:
                return v if self.phase[v] else -v
        return 0

    def solve(self, budget: Budget | None = None) -> SatResult:
        budget = budget or Budget()
        if not self.ok:
            return SatResult(UNSAT)
        for lit in self.units:
            if self.val[lit] == -1:
                return SatResult(UNSAT)
            if self.val[lit] == 0:
                self._enqueue(lit, None)
        if self._propagate() is not None:
            return SatResult(UNSAT)
        restart_no = 1
        limit = self.restart_base * _luby(restart_no)
        since_restart = 0
        while True:
            confl = self._propagate()
            if confl is not None:
                self.conflicts += 1
                since_restart += 1
                if not self.trail_lim:
                    return SatResult(UNSAT)
                learnt, back = self._analyze(confl)
                self._backtrack(back)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], None)
                else:
                    self.watches[learnt[0]].append(learnt)
                    self.watches[learnt[1]].append(learnt)
                    self._enqueue(learnt[0], learnt)
                continue
            if since_restart >= limit:
                if budget.exhausted(self.conflicts):
                    self._backtrack(0)
                    return SatResult(UNKNOWN)
                restart_no += 1
                limit = self.restart_base * _luby(restart_no)
                since_restart = 0
                self._backtrack(0)
                continue
            lit = self._pick()
            if lit == 0:
                model = [False] * (self.n + 1)
                for v in range(1, self.n + 1):
                    model[v] = self.val[v] == 1
                self._backtrack(0)
                return SatResult(SAT, model)
            self.trail_lim.append(len(self.trail))
            self._enqueue(lit, None)


def solve(cnf: CNF, budget: Budget | None = None, seed: int = 0, external: str | None = None) -> SatResult:
    """Solve ``cnf``; with ``external`` set, run that command on a DIMACS
    file first and fall back to the bundled solver if it misbehaves."""
    if external:
        try:
            return solve_external(cnf, external, budget)
        except ExternalSolverFailure as exc:
            log.warning("external solver failed (%s); using bundled solver", exc)
    return Solver(cnf, seed).solve(budget)


def solve_external(cnf: CNF, command: str, budget: Budget | None = None) -> SatResult:
    timeout = None
    if budget is not None and budget.deadline is not None:
        timeout = max(budget.deadline - time.monotonic(), 0.1)
    fd, path = tempfile.mkstemp(suffix=".cnf")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(cnf.to_dimacs())
        try:
            proc = subprocess.run(
                shlex.split(command) + [path], capture_output=True, text=True, timeout=timeout
            )
        except subprocess.TimeoutExpired:
            return SatResult(UNKNOWN)
        except OSError as exc:
            raise ExternalSolverFailure(str(exc)) from exc
    finally:
        os.unlink(path)
    # SAT competition exit codes: 10 = SAT, 20 = UNSAT
    if proc.returncode not in (0, 10, 20):
        raise ExternalSolverFailure(f"exit code {proc.returncode}")
    return parse_solver_output(proc.stdout, cnf.num_vars)


def parse_solver_output(text: str, num_vars: int) -> SatResult:
    status = None
    values: dict = {}
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("s "):
            word = line[2:].strip().upper()
            if word == "SATISFIABLE":
                status = SAT
            elif word == "UNSATISFIABLE":
                status = UNSAT
            elif word == "UNKNOWN":
                status = UNKNOWN
            else:
                raise ExternalSolverFailure(f"bad status line {line!r}")
        elif line.startswith("v "):
            for tok in line[2:].split():
                lit = int(tok)
                if lit != 0:
                    values[abs(lit)] = lit > 0
    if status is None:
        raise ExternalSolverFailure("no status line")
    if status != SAT:
        return SatResult(status)
    model = [False] * (num_vars + 1)
    for v, b in values.items():
        if v <= num_vars:
            model[v] = b
    return SatResult(SAT, model)
