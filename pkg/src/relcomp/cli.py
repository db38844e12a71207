"""Command-line entry point.

Exit codes: 0 for any verdict, 1 for input errors, 2 for internal
invariant failures.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time

from . import automata, framework, synth, trs_io
from .terms import Language, RuleError


def _dims(text: str) -> tuple:
    try:
        dims = tuple(sorted({int(x) for x in text.split(",") if x.strip()}))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list of dimensions: {text!r}") from None
    if not dims or min(dims) < 1:
        raise argparse.ArgumentTypeError("dimensions must be positive")
    return dims


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="relcomp",
        description="Upper bounds on the derivational or runtime complexity of relative rewrite systems.",
    )
    p.add_argument("input", help="TRS file in the plain TPDB format")
    p.add_argument("--complexity", choices=("derivational", "runtime"), default="derivational")
    p.add_argument("--timeout", type=float, default=60.0, help="global time limit in seconds")
    p.add_argument("--tighten", choices=("on", "off"), default="on")
    p.add_argument("--dims", type=_dims, default=(1, 2, 3), help="matrix dimensions, e.g. 1,2,3")
    p.add_argument("--coeff-bits", type=_positive, default=2)
    p.add_argument("--const-bits", type=_positive, default=3)
    p.add_argument("--proof", choices=("text", "json", "none"), default="text")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--solver", default=None, help="external DIMACS SAT solver command")
    p.add_argument("--deterministic", action="store_true", help="count-based budgets for reproducible output")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def config_from_args(args) -> framework.AnalysisConfig:
    return framework.AnalysisConfig(
        lang=Language.CONSTRUCTOR if args.complexity == "runtime" else Language.ALL,
        timeout=args.timeout,
        dims=args.dims,
        coeff_bits=args.coeff_bits,
        const_bits=args.const_bits,
        seed=args.seed,
        solver=args.solver,
        deterministic=args.deterministic,
    )


def run(args, out=sys.stdout) -> int:
    try:
        rel = trs_io.load(args.input)
    except (OSError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (trs_io.TRSSyntaxError, RuleError) as exc:
        print(f"error: {args.input}:{exc}", file=sys.stderr)
        return 1
    config = config_from_args(args)
    start = time.monotonic()
    deadline = start + config.timeout
    try:
        proof = framework.analyze(framework.CPProblem(rel, config.lang), config, deadline)
        if args.tighten == "on" and proof.closed:
            proof = framework.tighten(proof, config, deadline)
    except (AssertionError, synth.VerificationFailed, automata.PreconditionViolated) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 2
    if args.proof == "json":
        out.write(framework.total_bound(proof).verdict + "\n")
        out.write(trs_io.render_proof(proof, "json"))
    elif args.proof == "text":
        out.write(trs_io.render_proof(proof, "text"))
    else:
        out.write(framework.total_bound(proof).verdict + "\n")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
