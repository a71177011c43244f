"""Lacunarity diagrams, their aggregate quantities and the block
non-overlap conditions L1, L2a, L2b, L3a, L3b."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .combinatorics import ColumnSet, last_weight
from .errors import CapacityError, CaseError, DomainError, StructureError
from .poly import ParamCurve, jet_proportionality

CONDITION_KINDS = ("L1", "L2a", "L2b", "L3a", "L3b")
DEFAULT_MAX_DEGREE = 10**6


@dataclass(frozen=True)
class LacunarityDiagram:
    """Degrees n_0 < ... < n_{l_d} = d with column selections T_l in {1..n_l+1}.

    Column t of degree n stands for the monomial X^(t-1) Y^(n-t+1).
    """

    degrees: tuple[int, ...]
    selections: tuple[ColumnSet, ...]

    def __post_init__(self):
        degs = tuple(int(n) for n in self.degrees)
        sels = tuple(s if isinstance(s, ColumnSet) else ColumnSet(tuple(s)) for s in self.selections)
        object.__setattr__(self, "degrees", degs)
        object.__setattr__(self, "selections", sels)
        if not degs:
            raise StructureError("diagram has no degrees")
        if len(degs) != len(sels):
            raise StructureError("one column selection per degree is required")
        if degs[0] < 0 or any(b <= a for a, b in zip(degs, degs[1:])):
            raise StructureError(f"degrees must be strictly increasing and nonnegative, got {degs}")
        for n, s in zip(degs, sels):
            if s.values[0] < 1 or s.values[-1] > n + 1:
                raise StructureError(f"selection {s.values} out of range 1..{n + 1} for degree {n}")

    @classmethod
    def build(cls, degrees: Sequence[int], selections: Sequence[Sequence[int]]) -> "LacunarityDiagram":
        return cls(tuple(degrees), tuple(ColumnSet(tuple(s)) for s in selections))

    @property
    def d(self) -> int:
        return self.degrees[-1]

    @property
    def ell_d(self) -> int:
        return len(self.degrees) - 1

    @property
    def taus(self) -> tuple[int, ...]:
        return tuple(s.size for s in self.selections)

    @property
    def m(self) -> int:
        return sum(self.taus)

    def blocks(self):
        return zip(self.degrees, self.selections)

    def mirrored(self) -> "LacunarityDiagram":
        """Exchange the roles of X and Y: t -> n + 2 - t."""
        return LacunarityDiagram(
            self.degrees,
            tuple(ColumnSet(tuple(sorted(n + 2 - t for t in s))) for n, s in self.blocks()),
        )

    def to_dict(self) -> dict:
        return {"degrees": list(self.degrees), "selections": [list(s.values) for s in self.selections]}

    @classmethod
    def from_dict(cls, data: dict) -> "LacunarityDiagram":
        return cls.build(data["degrees"], data["selections"])


def align_diagram(curve: ParamCurve, diagram: LacunarityDiagram) -> LacunarityDiagram:
    """Express a diagram given for the input (P1, P2) in the curve's canonical order."""
    return diagram.mirrored() if curve.swapped else diagram


@dataclass(frozen=True)
class DiagramAggregates:
    nu_bar: tuple[int, ...]
    nu_tilde: tuple[int, ...]
    t_bar: int
    t_bar_ell: tuple[int, ...]
    t_bar_prime1: int
    n_bar: int
    tau_n_bar: int
    tau_bar: int
    tau_bar_prime: int
    c_ell: tuple[Fraction, ...]
    c_bar: Fraction
    ell_e: int
    m: int
    taus: tuple[int, ...]
    k: int


def block_constant(t_set: ColumnSet) -> Fraction:
    """C = 1 / (prod (i-1)! * prod |K_{t_1..t_i, t_i}|)."""
    den = Fraction(1)
    for i in range(1, t_set.size + 1):
        den *= math.factorial(i - 1) * abs(last_weight(t_set.prefix(i)))
    return 1 / den


def aggregates(diagram: LacunarityDiagram, curve: ParamCurve) -> DiagramAggregates:
    nu1, nu2 = curve.nu1, curve.nu2
    jet = jet_proportionality(curve)
    k = jet.k
    nu_bar = tuple((s[0] - 1) * nu1 + (n - s[0] + 1) * nu2 for n, s in diagram.blocks())
    nu_tilde = tuple((s[-1] - 1) * nu1 + (n - s[-1] + 1) * nu2 for n, s in diagram.blocks())
    taus = diagram.taus
    t_bar_ell = tuple(sum(s.values) for s in diagram.selections)
    c_ell = tuple(block_constant(s) for s in diagram.selections)
    c_bar = Fraction(1)
    for c in c_ell:
        c_bar *= c
    if jet.fully_proportional:
        ell_e = diagram.ell_d
    elif nu1 == nu2:
        scores = [nb + (k + 1) * t for nb, t in zip(nu_bar, taus)]
        ell_e = max(range(len(scores)), key=lambda i: (scores[i], i))
    else:
        ell_e = max(range(len(nu_tilde)), key=lambda i: (nu_tilde[i], i))
    return DiagramAggregates(
        nu_bar=nu_bar,
        nu_tilde=nu_tilde,
        t_bar=sum(t_bar_ell),
        t_bar_ell=t_bar_ell,
        t_bar_prime1=sum(s[0] for s in diagram.selections),
        n_bar=sum(diagram.degrees),
        tau_n_bar=sum(t * n for t, n in zip(taus, diagram.degrees)),
        tau_bar=sum(t * (t + 1) // 2 for t in taus),
        tau_bar_prime=sum(t * (t - 1) // 2 for t in taus),
        c_ell=c_ell,
        c_bar=c_bar,
        ell_e=ell_e,
        m=diagram.m,
        taus=taus,
        k=k,
    )


@dataclass(frozen=True)
class ConditionTag:
    kind: str
    holds: bool
    witness: tuple[int, int] | None = None

    def __post_init__(self):
        if self.holds != (self.witness is None):
            raise ValueError("witness must be present exactly when the condition fails")


def _first_adjacent_violation(values_ok) -> tuple[int, int] | None:
    for l, ok in enumerate(values_ok):
        if not ok:
            return (l, l + 1)
    return None


def check_condition(diagram: LacunarityDiagram, curve: ParamCurve, kind: str) -> ConditionTag:
    if kind not in CONDITION_KINDS:
        raise DomainError(f"unknown condition {kind!r}")
    equal = curve.nu1 == curve.nu2
    if kind in ("L2a", "L3a") and not equal:
        raise CaseError(f"{kind} requires equal multiplicities")
    if kind in ("L2b", "L3b") and equal:
        raise CaseError(f"{kind} requires distinct multiplicities")
    degs = diagram.degrees
    agg = aggregates(diagram, curve)
    k = agg.k
    pairs = range(len(degs) - 1)
    witness = None
    if kind == "L1":
        witness = _first_adjacent_violation(curve.nu * degs[l + 1] > degs[l] * curve.bigD for l in pairs)
    elif kind == "L2a":
        witness = _first_adjacent_violation(
            curve.nu * degs[l + 1] > curve.nu * degs[l] + (k + 1) * (agg.taus[l] - 1) for l in pairs)
    elif kind == "L2b":
        witness = _first_adjacent_violation(agg.nu_bar[l + 1] > agg.nu_tilde[l] for l in pairs)
    else:
        if kind == "L3a":
            mod = k + 1
            bound = [agg.nu_bar[l] + (k + 1) * (agg.taus[l] - 1) for l in range(len(degs))]
        else:
            mod = abs(curve.nu1 - curve.nu2)
            bound = list(agg.nu_tilde)
        for l in range(len(degs)):
            for lp in range(l):
                if (agg.nu_bar[l] - agg.nu_bar[lp]) % mod == 0 and not agg.nu_bar[l] > bound[lp]:
                    witness = (lp, l)
                    break
            if witness:
                break
    return ConditionTag(kind, witness is None, witness)


def resolve_condition(diagram: LacunarityDiagram, curve: ParamCurve, request: str = "auto") -> ConditionTag:
    """Map a request in {l1, l2, l3, auto} to a concrete condition and evaluate it.

    ``auto`` returns the first condition that holds among L1, L2, L3, or the
    failing L1 tag when none does.
    """
    request = request.lower()
    equal = curve.nu1 == curve.nu2
    by_level = {"l1": "L1", "l2": "L2a" if equal else "L2b", "l3": "L3a" if equal else "L3b"}
    if request in by_level:
        return check_condition(diagram, curve, by_level[request])
    if request != "auto":
        raise DomainError(f"unknown condition request {request!r}")
    first = None
    for level in ("l1", "l2", "l3"):
        tag = check_condition(diagram, curve, by_level[level])
        if tag.holds:
            return tag
        first = first or tag
    return first


def _select(n: int, tau: int, selector: str) -> ColumnSet:
    size = min(tau, n + 1)
    if selector == "lowest":
        return ColumnSet(tuple(range(1, size + 1)))
    if selector == "highest":
        return ColumnSet(tuple(range(n + 2 - size, n + 2)))
    if selector == "spread":
        if size == 1:
            return ColumnSet((1,))
        return ColumnSet(tuple(1 + (i * n) // (size - 1) for i in range(size)))
    raise DomainError(f"unknown selector {selector!r}")


def geometric_diagram(bigD: int, tau: int, depth: int, selector: str = "lowest",
                      max_degree: int = DEFAULT_MAX_DEGREE) -> LacunarityDiagram:
    """Degrees 0, 1, D+1, (D+1)^2, ..., (D+1)^(depth-1)."""
    if bigD < 1 or depth < 1 or tau < 1:
        raise DomainError("need D >= 1, depth >= 1, tau >= 1")
    top = (bigD + 1) ** (depth - 1)
    if top > max_degree:
        raise CapacityError(f"top degree {top} exceeds cap {max_degree}")
    degrees = [0] + [(bigD + 1) ** (l - 1) for l in range(1, depth + 1)]
    return LacunarityDiagram(tuple(degrees), tuple(_select(n, tau, selector) for n in degrees))
