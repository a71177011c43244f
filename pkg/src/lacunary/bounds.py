"""Normalization, Bernstein-class estimates and the zero-count reports.

Transcendental arithmetic runs in mpmath interval mode: zero counts take the
upper endpoint and radii the lower endpoint, so reported numbers are
conservative.  Minor bounds are kept in factored form (constant times
powers of moduli) so nothing under- or overflows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from mpmath import iv, mp

from .errors import (
    CaseError,
    DomainError,
    PreconditionError,
    StructureError,
    UnsupportedError,
)
from .lacunarity import (
    ConditionTag,
    DiagramAggregates,
    LacunarityDiagram,
    aggregates,
    resolve_condition,
)
from .poly import (
    ExactComplex,
    JetData,
    ParamCurve,
    UniPoly,
    jet_proportionality,
    max_modulus_on_circle,
)

IV_PREC = 160


class _iv_prec:
    """Temporarily raise the working precision of the interval context."""

    def __enter__(self):
        self.saved = iv.prec
        iv.prec = max(IV_PREC, self.saved)

    def __exit__(self, *exc):
        iv.prec = self.saved


def _with_prec(fn):
    def wrapper(*args, **kwargs):
        with _iv_prec():
            return fn(*args, **kwargs)
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def iv_frac(x) -> "iv.mpf":
    x = Fraction(x)
    return iv.mpf(x.numerator) / iv.mpf(x.denominator)


def lower(x) -> mp.mpf:
    return mp.make_mpf(x._mpi_[0])


def upper(x) -> mp.mpf:
    return mp.make_mpf(x._mpi_[1])


# --------------------------------------------------------------------------
# normalization

@dataclass(frozen=True)
class NormalizedCurve:
    """A curve rescaled to R = B_R = 1: components P_i(R z) / scale.

    ``curve`` carries exact rational coefficients; ``scale`` is a certified
    upper bound for max_{|z|=R} |P_i| (or |P_i / V|).
    """

    curve: ParamCurve
    original: ParamCurve
    big_r: Fraction
    scale: Fraction
    m_interval: tuple[float, float]

    @classmethod
    def identity(cls, curve: ParamCurve) -> "NormalizedCurve":
        return cls(curve, curve, Fraction(1), Fraction(1), (1.0, 1.0))

    def float_coeffs(self) -> tuple:
        import numpy as np
        c = self.curve
        p1 = c.p1.to_complex()
        p2 = c.p2.to_complex()
        v = c.v.to_complex() if c.v is not None else None
        if c.swapped:
            p1, p2 = p2, p1
        return p1, p2, v


def _abs_upper(c: ExactComplex) -> Fraction:
    """Rational upper bound for |c|."""
    n2 = c.abs2()
    if n2 == 0:
        return Fraction(0)
    num, den = n2.numerator, n2.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    with _iv_prec():
        hi = upper(iv.sqrt(iv_frac(n2)))
    man, exp = mp.mpf(hi).man_exp
    return Fraction(man) * Fraction(2) ** exp


def _l1_upper(curve: ParamCurve, big_r: Fraction) -> Fraction:
    """Upper bound for max |P_i| (or |P_i / V| with V constant) on |z| = R."""
    l1 = max(sum((_abs_upper(c) * big_r ** k for k, c in enumerate(p.coeffs)), Fraction(0))
             for p in (curve.p1, curve.p2))
    if curve.v is not None:
        l1 *= _abs_upper(curve.v.coeff(0).inverse())
    return l1


def _scaled(p: UniPoly, big_r: Fraction, scale: Fraction) -> UniPoly:
    return UniPoly(c * (big_r ** k / scale) for k, c in enumerate(p.coeffs))


def normalize_curve(curve: ParamCurve, big_r=1, precision: float = 1e-9) -> NormalizedCurve:
    """Rescale so both components are certified <= 1 on the closed unit disc.

    The divisor is the smaller of the certified circle maximum and the
    coefficient 1-norm on |z| = R (the latter makes the map exactly the
    identity when the 1-norm is already 1).
    """
    big_r = Fraction(big_r) if not isinstance(big_r, str) else Fraction(big_r)
    if big_r <= 0:
        raise DomainError("R must be positive")
    r_float = float(big_r)
    if curve.v is None:
        his, los = [], []
        for p in (curve.p1, curve.p2):
            lo, hi = max_modulus_on_circle(p, r_float, precision)
            los.append(lo)
            his.append(hi)
        m_lo, m_hi = max(los), max(his)
        scale = min(Fraction(m_hi), _l1_upper(curve, big_r))
    else:
        his, los = [], []
        for p in (curve.p1, curve.p2):
            lo, hi = max_modulus_on_circle(p, r_float, precision, denominator=curve.v)
            los.append(lo)
            his.append(hi)
        m_lo, m_hi = max(los), max(his)
        scale = Fraction(m_hi)
        if curve.v.degree == 0:
            scale = min(scale, _l1_upper(curve, big_r))
    if scale <= 0:
        raise DomainError("curve vanishes identically on the circle")
    p1 = _scaled(curve.p1, big_r, scale)
    p2 = _scaled(curve.p2, big_r, scale)
    v = None
    if curve.v is not None:
        v = UniPoly(c * big_r ** k for k, c in enumerate(curve.v.coeffs))
    if curve.swapped:
        p1, p2 = p2, p1
    new = ParamCurve.from_polys(p1, p2, v)
    return NormalizedCurve(new, curve, big_r, scale, (m_lo, m_hi))


def check_cauchy(curve: ParamCurve) -> None:
    """Normalized initial coefficients must have modulus <= 1 (Cauchy)."""
    b2 = curve.beta0.abs2() if curve.beta0 is not None else Fraction(1)
    for name, c in (("alpha0", curve.alpha0), ("a0", curve.a0)):
        if c.abs2() > b2:
            raise PreconditionError(f"|{name}| exceeds the Cauchy bound after normalization")


# --------------------------------------------------------------------------
# Bernstein machinery

@dataclass(frozen=True)
class BernsteinParams:
    r: float
    alpha: float
    big_k: float | None = None
    sigma_bar: float | None = None
    c_est: float | None = None
    b_r: float = 1.0
    big_r: float = 1.0


def sigma_bar(rho, basis_rows: Iterable[int] | None = None, b: int | None = None,
              sigma: int | None = None) -> float:
    """sum_{k in S} rho^(b-k) when S is known, else the case-split upper bound."""
    if rho <= 0:
        raise DomainError("rho must be positive")
    if basis_rows is not None:
        if b is None:
            raise DomainError("b is required with explicit basis rows")
        return sum(float(rho) ** (b - k) for k in basis_rows)
    if sigma is None:
        raise DomainError("sigma is required for the case-split bound")
    if rho == 1:
        return float(sigma)
    if rho < 1:
        return (1 - rho ** sigma) / (1 - rho)
    if b is None:
        raise DomainError("b is required when rho > 1")
    return rho ** (b + 1) * (1 - rho ** (-sigma)) / (rho - 1)


def c_estimate(sigma: int, delta_lb: float, b_r: float, big_r: float, b: int) -> float:
    """Upper bound sigma (B sqrt(sigma))^(sigma-1) / (delta R^(beta(sigma-1)))."""
    if delta_lb <= 0:
        raise DomainError("delta must be positive")
    beta = b if big_r <= 1 else sigma / 2
    return sigma * (b_r * math.sqrt(sigma)) ** (sigma - 1) / (delta_lb * big_r ** (beta * (sigma - 1)))


def bernstein_k(b: int, alpha: float, r: float, big_r: float, b_r: float, c: float,
                sigma_bar_value: float) -> float:
    return (1 / alpha ** b) * (1 + alpha * (1 - alpha ** b) / (1 - alpha)
                               + b_r * c * r * sigma_bar_value / (big_r ** (b + 1) * (1 - r / big_r)))


def bernstein_zero_bound(params: BernsteinParams, b: int) -> tuple[float, float]:
    """(log K / log((1+a^2)/(2a)), R / (8^b max(2, B c sigma_bar / R^b)))."""
    a = params.alpha
    if not 0 < a < 1:
        raise DomainError("alpha must lie in (0, 1)")
    if params.r >= params.big_r:
        raise DomainError("need r < R")
    if params.big_k is not None:
        big_k = params.big_k
    else:
        big_k = bernstein_k(b, a, params.r, params.big_r, params.b_r, params.c_est, params.sigma_bar)
    if big_k < 1:
        raise DomainError("K must be >= 1")
    count = math.log(big_k) / math.log((1 + a * a) / (2 * a))
    if params.c_est is None or params.sigma_bar is None:
        rho = params.big_r / (8 ** b * 2)
    else:
        rho = params.big_r / (8 ** b * max(2.0, params.b_r * params.c_est * params.sigma_bar / params.big_r ** b))
    return count, rho


@_with_prec
def general_zero_bound(b: int, sigma: int, delta_lb: float, b_r: float = 1.0,
                       big_r: float = 1.0) -> tuple[mp.mpf, mp.mpf]:
    """Zero count in D_{R/4} and localization radius for general R, B_R."""
    c = c_estimate(sigma, delta_lb, b_r, big_r, b)
    sb = sigma_bar(big_r / 4, sigma=sigma, b=b)
    two = iv.mpf(2)
    R = iv.mpf(big_r)
    z = 5 * b * iv.log(two) + 5 * iv.log(2 * R ** b + iv.mpf(b_r) * iv.mpf(c) * iv.mpf(sb)) - 5 * b * iv.log(R)
    rho = R / (iv.mpf(8) ** b * max(2.0, b_r * c * sb / big_r ** b))
    return upper(z), lower(rho)


# --------------------------------------------------------------------------
# minor bounds in factored form

@dataclass(frozen=True)
class DeltaForm:
    """constant * prod |base_i|^{exp_i}, bases given by their squared moduli."""

    constant: Fraction
    factors: tuple[tuple[Fraction, int], ...]

    def abs2(self) -> Fraction:
        out = self.constant * self.constant
        for base2, e in self.factors:
            out *= base2 ** e
        return out

    def log_iv(self):
        acc = iv.log(iv_frac(self.constant))
        for base2, e in self.factors:
            if e:
                acc += iv.mpf(e) * iv.log(iv_frac(base2)) / 2
        return acc


@dataclass(frozen=True)
class ClosedInvariants:
    case_tag: str
    b: int
    sigma: int
    delta: DeltaForm
    delta_refined: DeltaForm | None
    b_refined: int | None
    sigma_refined: int | None
    ell_e: int
    count_in_rho_stated: int


def case_of(curve: ParamCurve, jet: JetData | None = None) -> str:
    jet = jet or jet_proportionality(curve)
    if curve.nu1 != curve.nu2:
        return "distinct_mult"
    return "proportional" if jet.fully_proportional else "equal_mult"


def closed_invariants(curve: ParamCurve, diagram: LacunarityDiagram,
                      agg: DiagramAggregates | None, condition: ConditionTag) -> ClosedInvariants:
    """b, sigma and the minor lower bounds from the diagram data alone."""
    if not condition.holds:
        raise PreconditionError(f"condition {condition.kind} fails at {condition.witness}")
    agg = agg or aggregates(diagram, curve)
    jet = jet_proportionality(curve)
    case = case_of(curve, jet)
    taus, degs = agg.taus, diagram.degrees
    ld = diagram.ell_d
    b2 = curve.beta0.abs2() if curve.beta0 is not None else Fraction(1)
    al2 = curve.alpha0.abs2() / b2
    a2 = curve.a0.abs2() / b2
    refined = condition.kind == "L1"
    if case == "distinct_mult":
        b = max(agg.nu_tilde)
        sigma = agg.m
        e1 = agg.t_bar - agg.m
        delta = DeltaForm(Fraction(1), ((al2, e1), (a2, agg.tau_n_bar - e1)))
        td, nd = taus[ld], degs[ld]
        e1d = agg.t_bar_ell[ld] - td
        d_ref = DeltaForm(Fraction(1), ((al2, e1d), (a2, td * nd - e1d))) if refined else None
        b_ref, s_ref = agg.nu_tilde[ld], td
        stated = b
    elif case == "equal_mult":
        k = jet.k
        b = max(curve.nu * n + (k + 1) * (t - 1) for n, t in zip(degs, taus))
        sigma = agg.m
        mu2 = jet.mu.abs2()
        db2 = jet.delta_bar_k.abs2() / b2
        delta = DeltaForm(agg.c_bar, ((mu2, agg.t_bar - agg.tau_bar),
                                      (a2, agg.tau_n_bar - agg.tau_bar_prime),
                                      (db2, agg.tau_bar_prime)))
        td, nd = taus[ld], degs[ld]
        tri, tri_p = td * (td + 1) // 2, td * (td - 1) // 2
        d_ref = DeltaForm(agg.c_ell[ld], ((mu2, agg.t_bar_ell[ld] - tri),
                                          (a2, td * nd - tri_p),
                                          (db2, tri_p))) if refined else None
        b_ref, s_ref = curve.nu * nd + (k + 1) * (td - 1), td
        stated = curve.nu * degs[agg.ell_e]
    else:
        b = curve.nu * diagram.d
        sigma = ld + 1
        mu2 = jet.mu.abs2()
        delta = DeltaForm(Fraction(1), ((mu2, agg.t_bar_prime1 - (ld + 1)), (a2, agg.n_bar)))
        t_d1 = diagram.selections[ld][0]
        d_ref = DeltaForm(Fraction(1), ((mu2, t_d1 - 1), (a2, degs[ld]))) if refined else None
        b_ref, s_ref = b, 1
        stated = b
    if condition.kind in ("L1", "L2a", "L2b") and agg.ell_e != ld:
        raise StructureError(f"argmax block {agg.ell_e} differs from the last block {ld}")
    return ClosedInvariants(case, b, sigma, delta, d_ref,
                            b_ref if refined else None, s_ref if refined else None,
                            agg.ell_e, stated)


# --------------------------------------------------------------------------
# zero-count formulas (all interval valued)

def unit_radius_bound_iv(b: int, sigma: int, log_delta):
    """5 b log 2 + 5 log(2 + 4 s^{(s+1)/2} / (3 delta)) and
    8^{-b} min(1/2, 3 delta / (4 s^{(s+1)/2}))."""
    log_s = iv.log(iv.mpf(sigma)) * iv.mpf(sigma + 1) / 2
    ratio = iv.exp(log_s - log_delta)  # s^{(s+1)/2} / delta
    z = 5 * b * iv.log(iv.mpf(2)) + 5 * iv.log(2 + 4 * ratio / 3)
    inv = iv.exp(log_delta - log_s)
    rho_tail = 3 * inv / 4
    rho = iv.exp(-b * iv.log(iv.mpf(8))) * _iv_min(iv.mpf(1) / 2, rho_tail)
    return z, rho


def simplified_bound_iv(b: int, sigma: int, log_delta):
    """5 (b+1) log 2 + (5/2)(s+1) log s + 5 log(1/delta); valid for s >= 2, delta <= 1."""
    return (5 * (b + 1) * iv.log(iv.mpf(2)) + iv.mpf(5) * (sigma + 1) / 2 * iv.log(iv.mpf(sigma))
            - 5 * log_delta)


def _iv_min(x, y):
    lo = min(lower(x), lower(y))
    hi = min(upper(x), upper(y))
    return iv.mpf([lo, hi])


@_with_prec
def unit_radius_zero_bound(b: int, sigma: int, delta) -> tuple[mp.mpf, mp.mpf]:
    """Bound at R = B_R = 1 as floats: (Z upper, rho lower)."""
    log_delta = iv.log(iv_frac(delta)) if not isinstance(delta, DeltaForm) else delta.log_iv()
    z, rho = unit_radius_bound_iv(b, sigma, log_delta)
    return upper(z), lower(rho)


# --------------------------------------------------------------------------
# reports

@dataclass
class BoundReport:
    case_tag: str
    condition_used: str
    b: int
    sigma: int
    m: int
    delta_lb: mp.mpf
    delta_refined_lb: mp.mpf | None
    z_bound: mp.mpf
    z_bound_generic: mp.mpf
    z_bound_refined: mp.mpf | None
    z_bound_int: int
    rho_lb: mp.mpf
    rho_lb_generic: mp.mpf
    rho_lb_refined: mp.mpf | None
    ell_e: int
    count_in_rho: int
    count_in_rho_stated: int
    rational: bool = False
    symbols: dict = field(default_factory=dict)
    normalization: dict = field(default_factory=dict)


def _symbol_table(curve: ParamCurve, agg: DiagramAggregates, jet: JetData) -> dict:
    return {
        "nu1": curve.nu1, "nu2": curve.nu2, "D": curve.bigD, "k": agg.k,
        "m": agg.m, "t_bar": agg.t_bar, "tau_n_bar": agg.tau_n_bar,
        "tau_bar": agg.tau_bar, "tau_bar_prime": agg.tau_bar_prime,
        "t_bar_prime1": agg.t_bar_prime1, "n_bar": agg.n_bar,
        "c_bar": str(agg.c_bar), "nu_bar": list(agg.nu_bar), "nu_tilde": list(agg.nu_tilde),
        "mu": str(jet.mu), "swapped": curve.swapped,
    }


def _as_normalized(curve) -> NormalizedCurve:
    if isinstance(curve, NormalizedCurve):
        return curve
    if isinstance(curve, ParamCurve):
        lo_hi = [max_modulus_on_circle(p, 1.0, 1e-9, denominator=curve.v) for p in (curve.p1, curve.p2)]
        hi = Fraction(max(h for _, h in lo_hi))
        if curve.v is None or curve.v.degree == 0:
            hi = min(hi, _l1_upper(curve, Fraction(1)))
        if hi > 1:
            raise PreconditionError("curve is not normalized: components exceed 1 on the unit circle")
        return NormalizedCurve(curve, curve, Fraction(1), Fraction(1),
                               (max(lo for lo, _ in lo_hi), max(h for _, h in lo_hi)))
    raise PreconditionError("expected a normalized curve")


@_with_prec
def zero_bound_report(curve, diagram: LacunarityDiagram, condition: str | ConditionTag = "auto") -> BoundReport:
    """Headline zero count in the closed disc of radius 1/4 and localization radius."""
    norm = _as_normalized(curve)
    cv = norm.curve
    check_cauchy(cv)
    tag = condition if isinstance(condition, ConditionTag) else resolve_condition(diagram, cv, condition)
    agg = aggregates(diagram, cv)
    jet = jet_proportionality(cv)
    inv = closed_invariants(cv, diagram, agg, tag)
    # a constant denominator is a polynomial curve in disguise
    rational = cv.v is not None and cv.v.degree > 0
    if rational and tag.kind in ("L3a", "L3b"):
        raise UnsupportedError("rational curves are covered under L1, L2a, L2b only")
    log_delta = inv.delta.log_iv()
    m = agg.m
    two_log = iv.log(iv.mpf(2))

    if inv.case_tag == "distinct_mult":
        if m < 2:
            raise UnsupportedError("the main bound needs m >= 2")
        z_gen = simplified_bound_iv(inv.b, m, log_delta)
        _, rho_gen = unit_radius_bound_iv(inv.b, m, log_delta)
    elif inv.case_tag == "equal_mult":
        if m < 2:
            raise UnsupportedError("the main bound needs m >= 2")
        z_gen, rho_gen = unit_radius_bound_iv(inv.b, m, log_delta)
        if rational:
            # the rational statement carries one extra log 2 term
            z_gen = z_gen + 5 * two_log
    else:
        if diagram.ell_d < 1:
            raise UnsupportedError("the proportional bound needs at least two degrees")
        z_gen = simplified_bound_iv(inv.b, inv.sigma, log_delta)
        _, rho_gen = unit_radius_bound_iv(inv.b, inv.sigma, log_delta)

    z_ref = rho_ref = None
    if inv.delta_refined is not None:
        log_dr = inv.delta_refined.log_iv()
        z_ref, rho_ref = unit_radius_bound_iv(inv.b_refined, inv.sigma_refined, log_dr)
        if rational and inv.case_tag == "distinct_mult" and inv.sigma_refined >= 2:
            z_ref = simplified_bound_iv(inv.b_refined, inv.sigma_refined, log_dr)
    z_head = upper(z_gen) if z_ref is None else min(upper(z_gen), upper(z_ref))
    rho_head = lower(rho_gen) if rho_ref is None else max(lower(rho_gen), lower(rho_ref))
    z_int = int(mp.ceil(z_head))
    if z_int < inv.b:
        raise StructureError("zero bound undercuts the Bautin index")
    return BoundReport(
        case_tag=inv.case_tag,
        condition_used=tag.kind,
        b=inv.b,
        sigma=inv.sigma,
        m=m,
        delta_lb=lower(iv.exp(log_delta)),
        delta_refined_lb=lower(iv.exp(inv.delta_refined.log_iv())) if inv.delta_refined else None,
        z_bound=z_head,
        z_bound_generic=upper(z_gen),
        z_bound_refined=upper(z_ref) if z_ref is not None else None,
        z_bound_int=z_int,
        rho_lb=rho_head,
        rho_lb_generic=lower(rho_gen),
        rho_lb_refined=lower(rho_ref) if rho_ref is not None else None,
        ell_e=inv.ell_e,
        count_in_rho=inv.b,
        count_in_rho_stated=inv.count_in_rho_stated,
        rational=rational,
        symbols=_symbol_table(cv, agg, jet),
        normalization={
            "R": str(norm.big_r),
            "scale": str(norm.scale),
            "max_modulus_interval": [repr(norm.m_interval[0]), repr(norm.m_interval[1])],
        },
    )


def asymptotic_slope(curve: ParamCurve, tau: int) -> float:
    """Limit of Z / d along geometric diagrams: 5 (max(nu) log 2 + tau log(1/|alpha0 a0|))."""
    prod = math.sqrt(float(curve.alpha0.abs2() * curve.a0.abs2()))
    return 5 * (max(curve.nu1, curve.nu2) * math.log(2) + tau * math.log(1 / prod))
