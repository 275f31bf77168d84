"""Command-line runner.

    nlinv run --problem 2inv --rule ur --out runs/ur
    nlinv compare --problem 2inv --out runs/cmp
    nlinv oracle --problem "ninv 3 1"

Exit codes: 0 refutation (or oracle witness), 1 sos exhausted (or oracle
unsat), 2 limit hit, 3 usage or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from .circuits import (DENIALS, CircuitProblem, brute_force_search, builtin_problem,
                       format_problem, parse_problem, prove, verify_circuit)
from .inference import RULES, RuleConfig
from .saturation import TRACE_HEADER, Limits, Outcome

EXIT_REFUTATION, EXIT_EXHAUSTED, EXIT_LIMIT, EXIT_USAGE = 0, 1, 2, 3
EXIT_CODES = {"refutation": EXIT_REFUTATION, "sos_exhausted": EXIT_EXHAUSTED, "limit": EXIT_LIMIT}

POLARITY_FLAGS = {"both": "both", "pos": "positive", "neg": "negative"}

STATS_ROWS = (
    ("clauses generated", "clauses_generated"),
    ("clauses forward subsumed", "clauses_forward_subsumed"),
    ("subsumed by sos", "subsumed_by_sos"),
    ("sos size (final)", "sos_size_final"),
    ("sos size (peak)", "sos_size_peak"),
    ("user CPU time", "cpu_seconds"),
    ("wall time", "wall_seconds"),
    ("given clauses", "given_count"),
    ("clauses retained", "retained"),
)

COMPARE_HEADER = "metric,ur,hyper,ratio_hyper_over_ur"
COMPARE_METRICS = ("exit_code", "given_count", "clauses_generated", "clauses_forward_subsumed",
                   "subsumed_by_sos", "sos_size_final", "sos_size_peak", "retained",
                   "cpu_seconds", "wall_seconds")
TIME_FIELDS = ("cpu_seconds", "wall_seconds")


@dataclass
class RunReport:
    problem: str
    rule: str
    ur_polarity: str
    status: str
    limit: Optional[str]
    exit_code: int
    stats: Dict[str, object]
    artifacts: Dict[str, str] = field(default_factory=dict)
    metadata: Dict[str, object] = field(default_factory=dict)
    circuit_verified: Optional[bool] = None

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls(**json.loads(text))

    def without_times(self) -> dict:
        d = asdict(self)
        d["stats"] = {k: v for k, v in d["stats"].items() if k not in TIME_FIELDS}
        return d


def load_problem(spec: str, denial: str = "table-derived", budget: Optional[int] = None
                 ) -> CircuitProblem:
    """A built-in problem by name, otherwise a problem file."""
    p = builtin_problem(spec, denial)
    if p is None:
        path = Path(spec)
        if not path.is_file():
            raise ValueError(f"no built-in problem or file named {spec!r}")
        p = parse_problem(path.read_text(), name=path.stem)
    if budget is not None:
        p = p.with_budget(budget)
    return p


def format_stats(stats: Dict[str, object]) -> str:
    lines = []
    for label, key in STATS_ROWS:
        value = stats[key]
        if isinstance(value, float):
            value = f"{value:.2f}"
        lines.append(f"{label}: {value}")
    for reason, n in sorted(stats.get("discarded", {}).items()):
        lines.append(f"discarded ({reason}): {n}")
    return "\n".join(lines) + "\n"


def run(problem: CircuitProblem, rule: RuleConfig, limits: Limits, out_dir,
        pick_given: str = "weight", metadata: Optional[dict] = None) -> RunReport:
    """Saturate one problem and write its artifacts under ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    artifacts = {"trace": str(out / "trace.csv"), "stats": str(out / "stats.txt"),
                 "problem": str(out / "problem.txt")}
    (out / "problem.txt").write_text(format_problem(problem))
    for stale in ("proof.txt", "circuit.txt"):
        (out / stale).unlink(missing_ok=True)
    with open(out / "trace.csv", "w", newline="") as trace:
        outcome, circuit = prove(problem, rule, limits, pick_given, trace_file=trace)
    stats = outcome.stats.as_dict()
    (out / "stats.txt").write_text(format_stats(stats))
    verified = None
    if outcome.refuted:
        (out / "proof.txt").write_text(outcome.proof.format())
        artifacts["proof"] = str(out / "proof.txt")
        if circuit is not None:
            verified = verify_circuit(circuit, problem)
            (out / "circuit.txt").write_text(
                circuit.format() + f"# verified: {'yes' if verified else 'NO'}\n")
            artifacts["circuit"] = str(out / "circuit.txt")
    meta = {"pick_given": pick_given, "budget": problem.budget,
            "limits": asdict(limits), "seed": None}
    meta.update(metadata or {})
    report = RunReport(problem.name, rule.rule, rule.ur_polarity, outcome.status, outcome.limit,
                       EXIT_CODES[outcome.status], stats, artifacts, meta, verified)
    (out / "report.json").write_text(report.to_json())
    return report


def _run_job(args):
    return run(*args)


def _ratio(ur, hyper) -> str:
    if not ur:
        return ""
    return f"{hyper / ur:.4f}"


def compare_rows(ur: RunReport, hyper: RunReport) -> List[List[str]]:
    comparable = (ur.exit_code == hyper.exit_code == EXIT_REFUTATION
                  or (ur.exit_code == hyper.exit_code == EXIT_LIMIT and ur.limit == hyper.limit))
    rows = []
    for m in COMPARE_METRICS:
        a = ur.exit_code if m == "exit_code" else ur.stats[m]
        b = hyper.exit_code if m == "exit_code" else hyper.stats[m]
        ratio = _ratio(a, b) if comparable and m != "exit_code" else ""
        fmt = (lambda v: f"{v:.3f}") if m in TIME_FIELDS else str
        rows.append([m, fmt(a), fmt(b), ratio])
    return rows


def compare(problem: CircuitProblem, limits: Limits, out_dir, pick_given: str = "weight",
            ur_polarity: str = "both", jobs: int = 2, metadata: Optional[dict] = None):
    """Run UR and hyper with identical limits; write ``compare.csv``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    jobs_args = [(problem, RuleConfig("ur", ur_polarity), limits, out / "ur", pick_given, metadata),
                 (problem, RuleConfig("hyper"), limits, out / "hyper", pick_given, metadata)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=2) as pool:
            ur, hyper = pool.map(_run_job, jobs_args)
    else:
        ur, hyper = map(_run_job, jobs_args)
    with open(out / "compare.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(COMPARE_HEADER.split(","))
        w.writerows(compare_rows(ur, hyper))
    return ur, hyper


# -- argument parsing ---------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _positive_float(text: str) -> float:
    v = float(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _pick_given(text: str) -> str:
    from .saturation import parse_pick_given
    try:
        parse_pick_given(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))
    return text


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nlinv", description="Resolution prover for inverter synthesis.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, rule=True):
        p.add_argument("--problem", required=True,
                       help="2inv, bcd, 'ninv N K', 'identity N' or a problem file")
        p.add_argument("--budget", type=int, help="override the problem's inverter budget")
        p.add_argument("--denial", choices=DENIALS, default="table-derived",
                       help="bcd output columns (default: %(default)s)")
        if not rule:
            return
        p.add_argument("--ur-polarity", choices=sorted(POLARITY_FLAGS), default="both")
        p.add_argument("--pick-given", type=_pick_given, default="weight",
                       help="weight, fifo or ratio:R (default: %(default)s)")
        p.add_argument("--max-given", type=_positive_int)
        p.add_argument("--max-seconds", type=_positive_float)
        p.add_argument("--max-weight", type=_positive_int)
        p.add_argument("--max-retained", type=_positive_int)
        p.add_argument("--out", default="out", help="output directory (default: %(default)s)")

    p = sub.add_parser("run", help="saturate with one rule")
    common(p)
    p.add_argument("--rule", choices=RULES, default="ur")

    p = sub.add_parser("compare", help="run UR and hyper side by side")
    common(p)
    p.add_argument("--jobs", type=int, choices=(1, 2), default=2,
                   help="run the two saturations concurrently (2) or one after the other (1)")

    p = sub.add_parser("oracle", help="exhaustive synthesis search")
    common(p, rule=False)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        problem = load_problem(args.problem, args.denial, args.budget)
        if args.command == "oracle":
            witness = brute_force_search(problem)
            if witness is None:
                print(f"{problem.name}: unsat within {problem.budget} NOT gates")
                return EXIT_EXHAUSTED
            print(witness.format(), end="")
            return EXIT_REFUTATION
        limits = Limits(args.max_given, args.max_seconds, args.max_weight, args.max_retained)
        meta = {"denial": args.denial, "problem_spec": args.problem}
        if args.command == "run":
            rule = RuleConfig(args.rule, POLARITY_FLAGS[args.ur_polarity])
            report = run(problem, rule, limits, args.out, args.pick_given, meta)
            _summary(report)
            return report.exit_code
        ur, hyper = compare(problem, limits, args.out, args.pick_given,
                            POLARITY_FLAGS[args.ur_polarity], args.jobs, meta)
        _summary(ur)
        _summary(hyper)
        print((Path(args.out) / "compare.csv").read_text(), end="")
        return max(ur.exit_code, hyper.exit_code)
    except (ValueError, OSError) as e:
        print(f"nlinv: error: {e}", file=sys.stderr)
        return EXIT_USAGE


def _summary(r: RunReport) -> None:
    what = r.status if r.limit is None else f"{r.status} ({r.limit})"
    extra = ""
    if r.circuit_verified is not None:
        extra = f", circuit {'verified' if r.circuit_verified else 'FAILED verification'}"
    print(f"{r.problem} [{r.rule}]: {what} after {r.stats['given_count']} given clauses, "
          f"{r.stats['clauses_generated']} generated{extra}")


if __name__ == "__main__":
    sys.exit(main())
