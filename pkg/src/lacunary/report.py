"""Machine reports: JSON with 17-digit decimal strings tagged by rounding
direction.  Parsed numbers stay decimal, so re-emission is byte-identical."""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from decimal import ROUND_CEILING, ROUND_FLOOR, Context, Decimal
from fractions import Fraction

from mpmath import mp

from .bounds import BoundReport
from .config import SCHEMA_VERSION, ProblemConfig
from .errors import ConfigError
from .verifier import VerificationRun

DIGITS = 17
UP, DOWN = "up", "down"

# BoundReport fields that are real numbers, with their safe rounding direction
_ROUNDED = {
    "delta_lb": DOWN,
    "delta_refined_lb": DOWN,
    "z_bound": UP,
    "z_bound_generic": UP,
    "z_bound_refined": UP,
    "rho_lb": DOWN,
    "rho_lb_generic": DOWN,
    "rho_lb_refined": DOWN,
}


def to_decimal(x, direction: str) -> Decimal:
    """x rounded to 17 significant digits in the given direction."""
    if isinstance(x, Decimal):
        return x
    if isinstance(x, (int, Fraction)):
        frac = Fraction(x)
    else:
        sign, man, exp, _ = mp.mpf(x)._mpf_
        frac = (-1) ** sign * Fraction(int(man)) * Fraction(2) ** int(exp)
    ctx = Context(prec=DIGITS, rounding=ROUND_CEILING if direction == UP else ROUND_FLOOR)
    return ctx.divide(Decimal(frac.numerator), Decimal(frac.denominator))


def number_out(x, direction: str) -> dict | None:
    if x is None:
        return None
    return {"value": str(to_decimal(x, direction)), "rounding": direction}


def number_in(obj, where: str) -> Decimal | None:
    if obj is None:
        return None
    try:
        return Decimal(obj["value"])
    except (KeyError, TypeError, ArithmeticError):
        raise ConfigError(f"{where}: malformed number {obj!r}") from None


def bound_to_dict(rep: BoundReport) -> dict:
    out = {}
    for f in fields(rep):
        val = getattr(rep, f.name)
        out[f.name] = number_out(val, _ROUNDED[f.name]) if f.name in _ROUNDED else val
    return out


def bound_from_dict(data: dict) -> BoundReport:
    kwargs = {}
    for f in fields(BoundReport):
        if f.name not in data:
            raise ConfigError(f"bound.{f.name}: missing")
        val = data[f.name]
        kwargs[f.name] = number_in(val, f"bound.{f.name}") if f.name in _ROUNDED else val
    return BoundReport(**kwargs)


def run_to_dict(run: VerificationRun) -> dict:
    return {
        "samples": run.samples,
        "certified": run.certified,
        "max_count_quarter": run.max_count_quarter,
        "max_count_rho": run.max_count_rho,
        "witness_multiplicity": run.witness_multiplicity,
        "violations": [{"sample": i, "where": w, "count": c} for i, w, c in run.violations],
        "skipped": [{"sample": i, "reason": r} for i, r in run.skipped],
        "strategy_counts": dict(run.strategy_counts),
        "passed": run.passed,
    }


def run_from_dict(data: dict, report: BoundReport) -> VerificationRun:
    try:
        return VerificationRun(
            report=report,
            samples=data["samples"],
            max_count_quarter=data["max_count_quarter"],
            max_count_rho=data["max_count_rho"],
            witness_multiplicity=data["witness_multiplicity"],
            violations=[(v["sample"], v["where"], v["count"]) for v in data["violations"]],
            skipped=[(s["sample"], s["reason"]) for s in data["skipped"]],
            certified=data["certified"],
            strategy_counts=dict(data["strategy_counts"]),
        )
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"verification: malformed ({exc})") from None


@dataclass
class MachineReport:
    kind: str
    problem: ProblemConfig
    bound: BoundReport | None
    verification: VerificationRun | None = None
    extra: dict | None = None

    def to_dict(self) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind,
            "problem": self.problem.to_dict(),
        }
        if self.bound is not None:
            out["bound"] = bound_to_dict(self.bound)
        if self.verification is not None:
            out["verification"] = run_to_dict(self.verification)
        if self.extra is not None:
            out["extra"] = self.extra
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "MachineReport":
        if data.get("schema_version") != SCHEMA_VERSION:
            raise ConfigError(f"schema_version: unsupported {data.get('schema_version')!r}")
        problem = ProblemConfig.from_dict(data["problem"])
        bound = bound_from_dict(data["bound"]) if "bound" in data else None
        run = run_from_dict(data["verification"], bound) if "verification" in data else None
        return cls(data["kind"], problem, bound, run, data.get("extra"))


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def emit(report: MachineReport) -> str:
    return dumps(report.to_dict())


def parse(text: str) -> MachineReport:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"report:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return MachineReport.from_dict(data)
