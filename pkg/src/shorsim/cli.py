"""Command-line entry point: ``shorsim {factor,order,distribution,verify}``.

Exit codes (stable):

    0  success
    1  usage error (bad arguments, unknown selector)
    2  domain error (e.g. N < 3)
    3  capacity error (simulation larger than the amplitude cap)
    4  no result (no factor / order found, or a verification failed)
    5  ``order`` only: m shares a factor with N; the divisor is printed
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, TextIO

import numpy as np

from . import analysis, shor
from .errors import CapacityError, DomainError, SharedFactorError
from .numtheory import continued_fraction
from .postprocess import FactorConfig, factor, find_order
from .records import Document, dumps_many
from .rng import GENERATOR_ID

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_CAPACITY = 3
EXIT_NO_RESULT = 4
EXIT_DIVISOR = 5


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


@dataclass(frozen=True)
class RunConfig:
    seed: int = 1
    max_repetitions: Optional[int] = None
    max_m_attempts: int = 20
    max_amplitudes: int = shor.DEFAULT_MAX_AMPLITUDES
    threads: int = 1
    output_format: str = "text"

    def __post_init__(self):
        if self.seed < 0:
            raise UsageError("--seed must be nonnegative")
        for name in ("max_m_attempts", "max_amplitudes", "threads"):
            if getattr(self, name) < 1:
                raise UsageError(f"--{name.replace('_', '-')} must be positive")
        if self.max_repetitions is not None and self.max_repetitions < 1:
            raise UsageError("--max-repetitions must be positive")

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        return cls(
            seed=args.seed,
            max_repetitions=args.max_repetitions,
            max_m_attempts=args.max_m_attempts,
            max_amplitudes=args.max_amplitudes,
            threads=args.threads,
            output_format=args.format,
        )


def _int_arg(text: str) -> int:
    try:
        return int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=_int_arg, default=1, help="root seed (default 1)")
    common.add_argument("--max-repetitions", type=_int_arg, default=None,
                        help="quantum repetitions per base (default ceil(10 log2 log2 N + 10))")
    common.add_argument("--max-m-attempts", type=_int_arg, default=20, help="random bases to try (default 20)")
    common.add_argument("--max-amplitudes", type=_int_arg, default=shor.DEFAULT_MAX_AMPLITUDES,
                        help=f"cap on q*N1 (default {shor.DEFAULT_MAX_AMPLITUDES})")
    common.add_argument("--threads", type=_int_arg, default=1, help="worker threads for verify (default 1)")
    common.add_argument("--out", default=None, help="write structured records to FILE")
    common.add_argument("--format", choices=("text", "structured"), default="text")

    parser = _Parser(prog="shorsim", description="Shor order finding and factoring on a state-vector simulator.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("factor", parents=[common], help="split N into two factors")
    p.add_argument("N", type=_int_arg)
    p.add_argument("--path", choices=("simulation", "closed-form"), default="simulation")

    p = sub.add_parser("order", parents=[common], help="find the order of m modulo N")
    p.add_argument("N", type=_int_arg)
    p.add_argument("m", type=_int_arg)
    p.add_argument("--path", choices=("simulation", "closed-form"), default="simulation")

    p = sub.add_parser("distribution", parents=[common], help="export the full outcome distribution")
    p.add_argument("N", type=_int_arg)
    p.add_argument("m", type=_int_arg)
    p.add_argument("--path", choices=("simulation", "closed-form", "both"), default="closed-form")
    p.add_argument("--peaks", type=_int_arg, default=None, help="number of top peaks to list (default r)")

    p = sub.add_parser("verify", parents=[common], help="run the theorem harness")
    p.add_argument("selector", help="one of: " + ", ".join([*SELECTORS, *ALIASES]) + ", all")
    p.add_argument("--s-max", type=_int_arg, default=10, help="largest register size for qft checks")
    p.add_argument("--N", dest="Ns", type=_int_arg, action="append", default=None,
                   help="restrict to this N (repeatable)")
    return parser


# ------------------------------------------------------------------ output


class Output:
    def __init__(self, stdout: TextIO, fmt: str, out_path: Optional[str]):
        self.stdout = stdout
        self.fmt = fmt
        self.out_path = out_path
        self.documents: list[Document] = []

    def text(self, line: str = "") -> None:
        if self.fmt == "text":
            print(line, file=self.stdout)

    def doc(self, document: Document) -> None:
        self.documents.append(document)

    def flush(self) -> None:
        payload = dumps_many(self.documents)
        if self.out_path:
            with open(self.out_path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(payload)
        elif self.fmt == "structured":
            self.stdout.write(payload)


# ---------------------------------------------------------------- commands


def cmd_factor(args, config: RunConfig, out: Output) -> int:
    fc = FactorConfig(
        max_m_attempts=config.max_m_attempts,
        max_repetitions=config.max_repetitions,
        path=args.path,
        max_amplitudes=config.max_amplitudes,
    )
    outcome = factor(args.N, config.seed, fc)
    out.doc(outcome.to_document())
    out.text(f"N = {args.N}  seed = {config.seed}  generator = {GENERATOR_ID}")
    for a in outcome.attempts:
        out.text(
            f"  attempt offset={a.seed_offset} m={a.m} gcd(m,N)={a.gcd_m} order={a.order} "
            f"repetitions={a.repetitions} m^(r/2)={a.half_power} "
            f"gcd(b-1,N)={a.gcd_minus} gcd(b+1,N)={a.gcd_plus} -> {a.result}"
        )
    if outcome.factors is None:
        out.text(f"no factor found: {outcome.reason}")
        return EXIT_NO_RESULT
    p, q = outcome.factors
    out.text(f"factors: {p} x {q}  (method: {outcome.method})")
    return EXIT_OK


def cmd_order(args, config: RunConfig, out: Output) -> int:
    N, m = args.N, args.m
    try:
        search = find_order(
            N, m, seed=config.seed, max_repetitions=config.max_repetitions,
            path=args.path, max_amplitudes=config.max_amplitudes,
        )
    except SharedFactorError as exc:
        out.doc(Document("order-finding", meta={"N": N, "m": m, "divisor": exc.divisor}, columns=()))
        out.text(f"gcd({m}, {N}) = {exc.divisor}: {exc.divisor} divides {N}; no order exists")
        return EXIT_DIVISOR
    params = search.runs[0].params
    doc = Document(
        "order-finding",
        meta={"N": N, "m": m, "q": params.q, "N1": params.N1, "seed": config.seed,
              "generator": GENERATOR_ID, "order": search.order, "path": args.path},
        columns=("seed_offset", "c", "y", "quotients", "d", "r", "verified"),
    )
    out.text(f"N = {N}  m = {m}  q = {params.q}  N1 = {params.N1}  seed = {config.seed}")
    for run in search.runs:
        c, y = run.sample
        cf = continued_fraction(c, params.q)
        quotients = ",".join(str(x) for x in cf.quotients)
        d, r = run.candidate
        doc.add_row(run.seed_offset, c, y, quotients, d, r, run.verified)
        trace = " ".join(f"{p}/{qq}" for p, qq in cf.convergents)
        out.text(
            f"  run offset={run.seed_offset} c={c} y={y} c/q=[{quotients}] convergents: {trace} "
            f"-> {d}/{r} {'verified' if run.verified else 'rejected'}"
        )
    out.doc(doc)
    if search.order is None:
        out.text(f"no verified order after {search.repetitions} repetitions")
        return EXIT_NO_RESULT
    out.text(f"r = {search.order}")
    return EXIT_OK


def cmd_distribution(args, config: RunConfig, out: Output) -> int:
    params = shor.make_parameters(args.N, args.m, config.max_amplitudes)
    paths = ("simulation", "closed-form") if args.path == "both" else (args.path,)
    dists = [shor.outcome_distribution(params, p) for p in paths]
    for d in dists:
        out.doc(d.to_document())
    r = dists[0].r
    npeaks = args.peaks if args.peaks is not None else r
    predicted = shor.theoretical_peaks(params.q, r)
    summary = Document(
        "distribution-summary",
        meta={"N": params.N, "m": params.m, "q": params.q, "r": r},
        columns=("rank", "c", "marginal", "predicted_c"),
    )
    peaks = sorted(dists[0].top_peaks(npeaks), key=lambda t: t[0])
    for i, (c, pc) in enumerate(peaks):
        summary.add_row(i, c, pc, predicted[i] if i < len(predicted) else None)
    out.text(f"N = {params.N}  m = {params.m}  q = {params.q}  N1 = {params.N1}  r = {r}")
    out.text(f"predicted peaks round(dq/r): {predicted}")
    for c, pc in peaks:
        out.text(f"  c = {c:6d}  P(c) = {pc:.12f}")
    if len(dists) == 2:
        dev = float(np.max(np.abs(dists[0].probabilities - dists[1].probabilities)))
        summary.meta["max_deviation"] = dev
        summary.meta["agree"] = dev <= 1e-9
        out.text(f"simulation vs closed form: max deviation {dev:.3e} ({'agree' if dev <= 1e-9 else 'DISAGREE'} at 1e-9)")
    out.doc(summary)
    if out.out_path:
        out.text(f"records written to {out.out_path}")
    return EXIT_OK


def _suite_for(Ns: Optional[list[int]]) -> Optional[list[tuple[int, int]]]:
    return None if Ns is None else analysis.full_suite(Ns)


def _distribution_suite(Ns: Optional[list[int]]):
    if Ns is None:
        return None
    return [(N, m) for N in Ns for m in analysis.DISTRIBUTION_BASES.get(N, tuple(analysis.valid_bases(N)[:3]))]


SELECTORS: dict[str, Callable] = {
    "qft": lambda a, c: analysis.verify_qft(range(1, a.s_max + 1), seed=c.seed),
    "gate-count": lambda a, c: analysis.gate_count_report(),
    "operation-count": lambda a, c: analysis.operation_count_report(a.Ns or analysis.DEFAULT_SUITE_N),
    "peak-bound": lambda a, c: analysis.verify_peak_bound(_suite_for(a.Ns), threads=c.threads),
    "success-mass": lambda a, c: analysis.verify_success_probability(_suite_for(a.Ns), threads=c.threads),
    "distribution": lambda a, c: analysis.verify_distribution_agreement(_distribution_suite(a.Ns), threads=c.threads),
    "good-bases": lambda a, c: analysis.verify_good_base_fraction(a.Ns or analysis.GOOD_BASE_SUITE),
    "convergents": lambda a, c: analysis.verify_convergent_property(seed=c.seed),
    "totient": lambda a, c: analysis.verify_totient_lower_bound(),
    "lame": lambda a, c: analysis.verify_lame_bound(seed=c.seed),
}

# conventional theorem numbering, accepted as alternative selector names
ALIASES = {
    "theorem-4.1": "gate-count",
    "theorem-5.1": "convergents",
    "theorem-5.2": "totient",
    "theorem-7.1": "peak-bound",
    "theorem-7.2": "success-mass",
    "theorem-8.1": "operation-count",
    "theorem-9.1": "good-bases",
}


def cmd_verify(args, config: RunConfig, out: Output) -> int:
    if args.selector == "all":
        names = list(SELECTORS)
    elif args.selector in SELECTORS or args.selector in ALIASES:
        names = [ALIASES.get(args.selector, args.selector)]
    else:
        choices = ", ".join([*SELECTORS, *ALIASES, "all"])
        raise UsageError(f"unknown selector {args.selector!r}; choose from {choices}")
    ok = True
    for name in names:
        report = SELECTORS[name](args, config)
        ok &= report.passed
        out.doc(report.to_document())
        out.text(report.render_text())
    return EXIT_OK if ok else EXIT_NO_RESULT


COMMANDS = {
    "factor": cmd_factor,
    "order": cmd_order,
    "distribution": cmd_distribution,
    "verify": cmd_verify,
}


def main(argv: Optional[Sequence[str]] = None, stdout: TextIO = None, stderr: TextIO = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        config = RunConfig.from_args(args)
        out = Output(stdout, config.output_format, args.out)
        code = COMMANDS[args.command](args, config, out)
        out.flush()
        return code
    except UsageError as exc:
        print(exc, file=stderr)
        return EXIT_USAGE
    except SharedFactorError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_DIVISOR
    except DomainError as exc:
        print(f"domain error: {exc}", file=stderr)
        return EXIT_DOMAIN
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=stderr)
        return EXIT_CAPACITY


if __name__ == "__main__":
    sys.exit(main())
