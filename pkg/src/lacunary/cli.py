"""Command-line front end: ``lacunary {bound,verify,triangulate,check-lemmas}``.

Exit codes: 0 success, 1 error, 2 lacunarity condition violated.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import lemmas
from .bautin import build_block, triangulated
from .bounds import BoundReport, normalize_curve, zero_bound_report
from .config import ProblemConfig, load_config
from .errors import LacunaryError
from .kernels import BACKEND
from .lacunarity import resolve_condition
from .report import MachineReport, dumps, emit, to_decimal
from .verifier import VerificationRun, verify_run

EXIT_OK, EXIT_ERROR, EXIT_CONDITION = 0, 1, 2


class ConditionViolation(Exception):
    def __init__(self, tag):
        super().__init__(f"condition {tag.kind} fails at blocks {tag.witness}")
        self.tag = tag


def _apply_overrides(cfg: ProblemConfig, args) -> ProblemConfig:
    for name in ("condition", "samples", "seed", "precision"):
        val = getattr(args, name, None)
        if val is not None:
            setattr(cfg, name, val)
    return cfg


def _bound(cfg: ProblemConfig) -> tuple:
    curve = cfg.curve()
    diagram = cfg.diagram(curve)
    norm = normalize_curve(curve, cfg.big_r, cfg.precision)
    tag = resolve_condition(diagram, norm.curve, cfg.condition)
    if not tag.holds:
        raise ConditionViolation(tag)
    return norm, diagram, zero_bound_report(norm, diagram, tag)


def _fmt(x, direction: str) -> str:
    return "-" if x is None else str(to_decimal(x, direction))


def print_bound(rep: BoundReport, out=None) -> None:
    out = out or sys.stdout
    rows = [
        ("case", rep.case_tag),
        ("condition", rep.condition_used),
        ("b", rep.b),
        ("sigma", rep.sigma),
        ("m", rep.m),
        ("Z (disc 1/4)", _fmt(rep.z_bound, "up")),
        ("Z generic", _fmt(rep.z_bound_generic, "up")),
        ("Z refined", _fmt(rep.z_bound_refined, "up")),
        ("Z integer", rep.z_bound_int),
        ("rho", _fmt(rep.rho_lb, "down")),
        ("delta lower", _fmt(rep.delta_lb, "down")),
        ("zeros in rho-disc", rep.count_in_rho),
    ]
    rows += [(f"  {k}", v) for k, v in sorted(rep.symbols.items())]
    rows += [(f"  normalization.{k}", v) for k, v in sorted(rep.normalization.items())]
    width = max(len(k) for k, _ in rows)
    for k, v in rows:
        print(f"{k:<{width}}  {v}", file=out)


def print_run(run: VerificationRun, out=None) -> None:
    out = out or sys.stdout
    print(f"samples {run.samples}, certified {run.certified}, skipped {len(run.skipped)}", file=out)
    print(f"max zeros in disc 1/4: {run.max_count_quarter} (bound {run.report.z_bound_int})", file=out)
    print(f"max zeros in rho-disc: {run.max_count_rho} (bound {run.report.b})", file=out)
    print(f"witness multiplicity: {run.witness_multiplicity}", file=out)
    for index, where, count in run.violations:
        print(f"VIOLATION sample {index}: {count} zeros in the {where} disc", file=out)
    print("PASS" if run.passed else "FAIL", file=out)


def _write(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text)


def cmd_bound(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    _, _, rep = _bound(cfg)
    print_bound(rep)
    _write(args.out, emit(MachineReport("bound", cfg, rep)))
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    norm, diagram, rep = _bound(cfg)
    print_bound(rep)
    run = verify_run(norm, diagram, rep, cfg.samples, cfg.seed, workers=args.workers)
    print_run(run)
    _write(args.out, emit(MachineReport("verify", cfg, rep, run)))
    return EXIT_OK if run.passed else EXIT_ERROR


def cmd_triangulate(args) -> int:
    cfg = load_config(args.config)
    curve = cfg.curve()
    diagram = cfg.diagram(curve)
    blocks = []
    for n, s in diagram.blocks():
        blk = build_block(curve.polynomial_part(), n, s)
        tri = triangulated(curve.polynomial_part(), blk)
        blocks.append({
            "degree": n,
            "columns": list(s.values),
            "row_offset": blk.row_offset,
            "triangulated": [[str(x) for x in row] for row in tri],
        })
        print(f"degree {n}, columns {list(s.values)}, rows from {blk.row_offset}")
        for row in tri[: s.size]:
            print("  " + "  ".join(str(x) for x in row))
    _write(args.out, emit(MachineReport("triangulate", cfg, None, extra={"blocks": blocks})))
    return EXIT_OK


def cmd_check_lemmas(args) -> int:
    results = lemmas.run_all(args.max_point, args.max_degree, args.max_total,
                             args.max_r, args.max_n, fault=args.inject_fault)
    for r in results:
        print(f"{r.name:<13} {r.checks:>8} checks  {'ok' if r.ok else 'FAILED'}")
        for detail in r.failures[:5]:
            print(f"  failure: {detail}")
    doc = {"schema_version": 1, "kind": "check-lemmas",
           "suites": [{"name": r.name, "checks": r.checks, "ok": r.ok} for r in results]}
    _write(args.out, dumps(doc))
    return EXIT_OK if all(r.ok for r in results) else EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lacunary", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def problem(p):
        p.add_argument("--config", required=True, metavar="PATH")
        p.add_argument("--out", metavar="PATH")
        p.add_argument("--condition", choices=("l1", "l2", "l3", "auto"))
        p.add_argument("--precision", type=float, metavar="EPS")

    p = sub.add_parser("bound", help="zero-count bound for a configured problem")
    problem(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("verify", help="bound plus sampled root counts")
    problem(p)
    p.add_argument("--samples", type=int, metavar="N")
    p.add_argument("--seed", type=int, metavar="N")
    p.add_argument("--workers", type=int, default=1, metavar="N")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("triangulate", help="dump exact triangulated blocks")
    p.add_argument("--config", required=True, metavar="PATH")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_triangulate)

    p = sub.add_parser("check-lemmas", help="exhaustive checks of the combinatorial identities")
    p.add_argument("--max-point", type=int, default=8)
    p.add_argument("--max-degree", type=int, default=6)
    p.add_argument("--max-total", type=int, default=6)
    p.add_argument("--max-r", type=int, default=6)
    p.add_argument("--max-n", type=int, default=10)
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_check_lemmas)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger(__name__).info("kernel backend: %s", BACKEND)
    try:
        return args.func(args)
    except ConditionViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"witness {exc.tag.witness[0]} {exc.tag.witness[1]}")
        return EXIT_CONDITION
    except LacunaryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
