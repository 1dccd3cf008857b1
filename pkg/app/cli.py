"""
Command line front end.

    python -m app basis    --type F4 --parabolic 2,3,4
    python -m app steenrod --type D6 --parabolic 1..5 --prime 3,5 --k 1..5
    python -m app verify   --type A6 --parabolic 1,2,4,5,6 --prime 3 --k 1..4

Exit codes: 0 ok, 1 verification mismatch, 2 bad configuration or Cartan
input, 3 element budget exceeded.
"""
import argparse
import logging
import sys
from typing import List, Optional, Sequence

from app import config
from app.cache import cached_cosets
from app.errors import BudgetExceeded, CartanError, ConfigError, DomainError
from app.oracle import cross_check
from app.steenrod import SteenrodTable, steenrod_table
from app.tools.render import (
    render_basis_text,
    render_csv,
    render_latex,
    render_steenrod_text,
    to_json_document,
)
from app.weyl import CosetTable

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_MISMATCH, EXIT_CONFIG, EXIT_BUDGET = 0, 1, 2, 3


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--type", dest="lie_type", help="Lie type letter+rank, e.g. G2, F4, D6")
    src.add_argument("--cartan-file", help="JSON Cartan matrix (list of rows or {matrix, labels})")
    common.add_argument("--parabolic", default="", help="nodes of the Levi part, e.g. 2,3,4 or 1..5")
    common.add_argument("--prime", default=None, help="prime(s), e.g. 3 or 3,5,7")
    common.add_argument("--k", default=None, help="k values, e.g. 1..3, 1,2,5 or 2")
    common.add_argument("--format", default=None, choices=config.FORMATS)
    common.add_argument("--cache-dir", default=None, help="coset cache directory ('' disables)")
    common.add_argument("--budget", type=int, default=None, help="orbit size limit")
    common.add_argument("--threads", type=int, default=None, help="worker processes")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = argparse.ArgumentParser(prog="python -m app", description="Reduced powers on Schubert classes of G/H")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("basis", parents=[common], help="minimal coset representatives and their words")
    sub.add_parser("steenrod", parents=[common], help="nontrivial P^k(s_u) for each Schubert class")
    sub.add_parser("verify", parents=[common], help="cross-check type A against Schubert polynomials")
    return parser


def _setup_logging(verbose: int) -> None:
    level = {0: config.LOG_LEVEL.strip().upper(), 1: "INFO"}.get(verbose, "DEBUG")
    known = isinstance(logging.getLevelName(level), int)
    logging.basicConfig(level=level if known else "WARNING", format="%(asctime)s %(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    if not known:
        logger.warning("[CONFIG] LOG_LEVEL=%r is not a logging level, using WARNING", config.LOG_LEVEL)


def job_from_args(args: argparse.Namespace) -> config.JobConfig:
    return config.build_config(
        lie_type=args.lie_type,
        cartan_file=args.cartan_file,
        parabolic=config.parse_nodes(args.parabolic),
        primes=config.parse_k_list(args.prime) if args.prime else None,
        k_list=config.parse_k_list(args.k) if args.k else None,
        format=args.format,
        cache_dir=args.cache_dir,
        budget=args.budget,
        threads=args.threads,
    )


def load_cosets(job: config.JobConfig) -> CosetTable:
    return cached_cosets(job.cartan(), job.parabolic_nodes, cache_dir=job.cache_dir, budget=job.budget)


def compute_tables(job: config.JobConfig, cosets: CosetTable) -> List[SteenrodTable]:
    return [
        steenrod_table(cosets.cartan, cosets.parabolic, p, job.k_list, budget=job.budget, threads=job.threads, cosets=cosets)
        for p in job.require_primes()
    ]


def cmd_basis(job: config.JobConfig) -> str:
    cosets = load_cosets(job)
    if job.format == "json":
        return to_json_document(cosets)
    if job.format in ("csv", "latex"):
        raise ConfigError(f"format: {job.format!r} is only available for the steenrod command")
    return render_basis_text(cosets)


def cmd_steenrod(job: config.JobConfig) -> str:
    tables = compute_tables(job, load_cosets(job))
    if job.format == "json":
        return to_json_document(tables)
    if job.format == "csv":
        return render_csv(tables)
    if job.format == "latex":
        return render_latex(tables)
    return render_steenrod_text(tables)


def cmd_verify(job: config.JobConfig) -> tuple[str, int]:
    tables = compute_tables(job, load_cosets(job))
    lines, bad = [], 0
    for table in tables:
        mismatches = cross_check(table)
        bad += len(mismatches)
        for k, u, w, got, want in mismatches:
            lines.append(f"MISMATCH p={table.prime} {table.operation_name(k)} {u} -> {w}: engine {got}, oracle {want}")
        checked = sum(1 for key in table.entries if key[0] in table.k_list)
        lines.append(f"p={table.prime}: {checked} coefficients checked, {len(mismatches)} mismatches")
    return "\n".join(lines) + "\n", (EXIT_MISMATCH if bad else EXIT_OK)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    _setup_logging(args.verbose)
    try:
        job = job_from_args(args)
        if args.command == "basis":
            out, code = cmd_basis(job), EXIT_OK
        elif args.command == "steenrod":
            out, code = cmd_steenrod(job), EXIT_OK
        else:
            out, code = cmd_verify(job)
    except (ConfigError, CartanError, DomainError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except BudgetExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    sys.stdout.write(out)
    return code
