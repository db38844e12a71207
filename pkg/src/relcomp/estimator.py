"""Thin estimator-style facade over :mod:`relcomp.framework`."""

from __future__ import annotations

import os
import time

from . import framework, trs_io
from .terms import Language, RelativeTRS


class ComplexityAnalyzer:
    """Analyse relative rewrite systems with a fixed configuration.

    ``fit`` runs the analysis on one system and stores ``proof_``,
    ``bound_`` and ``verdict_``; ``predict`` maps systems to verdicts.
    Systems may be given as :class:`RelativeTRS`, TPDB text or a path.
    """

    _params = (
        "complexity",
        "timeout",
        "tighten",
        "dims",
        "coeff_bits",
        "const_bits",
        "seed",
        "solver",
        "deterministic",
    )

    def __init__(
        self,
        complexity: str = "derivational",
        timeout: float = 60.0,
        tighten: bool = True,
        dims=(1, 2, 3),
        coeff_bits: int = 2,
        const_bits: int = 3,
        seed: int = 0,
        solver: str | None = None,
        deterministic: bool = False,
    ):
        self.complexity = complexity
        self.timeout = timeout
        self.tighten = tighten
        self.dims = tuple(dims)
        self.coeff_bits = coeff_bits
        self.const_bits = const_bits
        self.seed = seed
        self.solver = solver
        self.deterministic = deterministic

    def get_params(self, deep: bool = True) -> dict:
        return {k: getattr(self, k) for k in self._params}

    def set_params(self, **params) -> "ComplexityAnalyzer":
        for k, v in params.items():
            if k not in self._params:
                raise ValueError(f"unknown parameter {k!r}")
            setattr(self, k, v)
        return self

    def config(self) -> framework.AnalysisConfig:
        if self.complexity not in ("derivational", "runtime"):
            raise ValueError(f"unknown complexity {self.complexity!r}")
        return framework.AnalysisConfig(
            lang=Language.CONSTRUCTOR if self.complexity == "runtime" else Language.ALL,
            timeout=self.timeout,
            dims=tuple(self.dims),
            coeff_bits=self.coeff_bits,
            const_bits=self.const_bits,
            seed=self.seed,
            solver=self.solver,
            deterministic=self.deterministic,
        )

    @staticmethod
    def _coerce(system) -> RelativeTRS:
        if isinstance(system, RelativeTRS):
            return system
        if isinstance(system, os.PathLike) or (isinstance(system, str) and "(" not in system):
            return trs_io.load(system)
        return trs_io.parse_trs(system)

    def _run(self, system) -> framework.ProofNode:
        config = self.config()
        deadline = time.monotonic() + config.timeout
        proof = framework.analyze(framework.CPProblem(self._coerce(system), config.lang), config, deadline)
        if self.tighten and proof.closed:
            proof = framework.tighten(proof, config, deadline)
        return proof

    def fit(self, system, y=None) -> "ComplexityAnalyzer":
        self.proof_ = self._run(system)
        self.bound_ = framework.total_bound(self.proof_)
        self.verdict_ = self.bound_.verdict
        return self

    def predict(self, systems) -> list:
        return [framework.total_bound(self._run(s)).verdict for s in systems]

    def render(self, style: str = "text") -> str:
        return trs_io.render_proof(self.proof_, style)
