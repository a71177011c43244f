"""Problem configuration files (JSON)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .errors import ConfigError, LacunaryError
from .lacunarity import LacunarityDiagram, align_diagram, geometric_diagram
from .poly import ExactComplex, ParamCurve, UniPoly

SCHEMA_VERSION = 1
CONDITIONS = ("l1", "l2", "l3", "auto")


def _coeff(raw, where: str) -> ExactComplex:
    if isinstance(raw, float):
        raise ConfigError(f"{where}: floats are not accepted, write \"p/q\"")
    try:
        return ExactComplex.coerce(raw)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ConfigError(f"{where}: cannot parse {raw!r} ({exc})") from None


def _poly(raw, where: str) -> UniPoly:
    if not isinstance(raw, list):
        raise ConfigError(f"{where}: expected a coefficient list")
    return UniPoly([_coeff(c, f"{where}[{i}]") for i, c in enumerate(raw)])


def _coeff_out(c: ExactComplex):
    re, im = c.to_strings()
    return re if im == "0" else [re, im]


@dataclass
class ProblemConfig:
    p1: UniPoly
    p2: UniPoly
    v: UniPoly | None
    diagram_spec: dict
    condition: str = "auto"
    big_r: Fraction = Fraction(1)
    samples: int = 500
    seed: int = 0
    precision: float = 1e-9
    extra: dict = field(default_factory=dict)

    def curve(self) -> ParamCurve:
        return ParamCurve.from_polys(self.p1, self.p2, self.v)

    def diagram(self, curve: ParamCurve | None = None) -> LacunarityDiagram:
        """The diagram in the curve's canonical orientation."""
        curve = curve or self.curve()
        spec = self.diagram_spec
        if "geometric" in spec:
            g = spec["geometric"]
            big_d = g.get("D", max(self.p1.degree or 0, self.p2.degree or 0))
            diag = geometric_diagram(big_d, g["tau"], g["depth"], g.get("selector", "lowest"))
        else:
            diag = LacunarityDiagram.from_dict(spec)
        return align_diagram(curve, diag)

    def to_dict(self) -> dict:
        curve = {"p1": [_coeff_out(c) for c in self.p1.coeffs],
                 "p2": [_coeff_out(c) for c in self.p2.coeffs]}
        if self.v is not None:
            curve["v"] = [_coeff_out(c) for c in self.v.coeffs]
        return {
            "schema_version": SCHEMA_VERSION,
            "curve": curve,
            "diagram": self.diagram_spec,
            "options": {
                "condition": self.condition,
                "R": str(self.big_r),
                "samples": self.samples,
                "seed": self.seed,
                "precision": self.precision,
            },
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ProblemConfig":
        if not isinstance(data, dict):
            raise ConfigError("config: expected a JSON object")
        version = data.get("schema_version", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise ConfigError(f"schema_version: unsupported version {version!r}")
        curve = data.get("curve")
        if not isinstance(curve, dict) or "p1" not in curve or "p2" not in curve:
            raise ConfigError("curve: needs p1 and p2")
        p1 = _poly(curve["p1"], "curve.p1")
        p2 = _poly(curve["p2"], "curve.p2")
        v = _poly(curve["v"], "curve.v") if curve.get("v") is not None else None
        diagram = data.get("diagram")
        if not isinstance(diagram, dict):
            raise ConfigError("diagram: expected an object")
        diagram = _check_diagram(diagram)
        opts = data.get("options", {})
        if not isinstance(opts, dict):
            raise ConfigError("options: expected an object")
        condition = str(opts.get("condition", "auto")).lower()
        if condition not in CONDITIONS:
            raise ConfigError(f"options.condition: expected one of {CONDITIONS}")
        try:
            big_r = Fraction(str(opts.get("R", "1")))
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"options.R: cannot parse {opts.get('R')!r}") from None
        if big_r <= 0:
            raise ConfigError("options.R: must be positive")
        cfg = cls(p1, p2, v, diagram, condition, big_r,
                  int(opts.get("samples", 500)), int(opts.get("seed", 0)),
                  float(opts.get("precision", 1e-9)))
        try:
            cfg.diagram(cfg.curve())
        except LacunaryError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"config: {exc}") from None
        return cfg


def _check_diagram(spec: dict) -> dict:
    if "geometric" in spec:
        g = spec["geometric"]
        if not isinstance(g, dict):
            raise ConfigError("diagram.geometric: expected an object")
        for key in ("tau", "depth"):
            if not isinstance(g.get(key), int):
                raise ConfigError(f"diagram.geometric.{key}: expected an integer")
        if "D" in g and not isinstance(g["D"], int):
            raise ConfigError("diagram.geometric.D: expected an integer")
        return {"geometric": dict(g)}
    if not isinstance(spec.get("degrees"), list) or not isinstance(spec.get("selections"), list):
        raise ConfigError("diagram: needs degrees and selections, or geometric")
    return {"degrees": list(spec["degrees"]), "selections": [list(s) for s in spec["selections"]]}


def load_config(path: str | Path) -> ProblemConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return ProblemConfig.from_dict(data)
