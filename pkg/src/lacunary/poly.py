"""Exact polynomial arithmetic over the Gaussian rationals.

Everything structural (block triangularity, vanishing of sub-diagonals,
closed-form entries) is checked with zero tolerance, so coefficients live
in Q(i) and never touch floating point.  The only floating routine here is
:func:`max_modulus_on_circle`, which returns an enclosing interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CapacityError,
    ConvergenceError,
    DomainError,
    SingularDenominatorError,
    ZeroPolynomialError,
)

DEFAULT_MAX_SLOTS = 10**6


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        text = x.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            den_i = int(den)
            if den_i == 0:
                raise ZeroDivisionError(f"zero denominator in {x!r}")
            return Fraction(int(num), den_i)
        return Fraction(text)
    if isinstance(x, float):
        raise TypeError("floats are not accepted in the exact layer; pass a string or Fraction")
    return Fraction(x)


class ExactComplex:
    """A Gaussian rational ``re + i*im`` with exact arithmetic."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _to_fraction(re)
        self.im = _to_fraction(im)

    @classmethod
    def _raw(cls, re: Fraction, im: Fraction) -> "ExactComplex":
        obj = cls.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    @classmethod
    def coerce(cls, x) -> "ExactComplex":
        if isinstance(x, ExactComplex):
            return x
        if isinstance(x, (tuple, list)):
            if len(x) != 2:
                raise ValueError(f"expected (re, im) pair, got {x!r}")
            return cls(x[0], x[1])
        if isinstance(x, complex):
            raise TypeError("complex floats are not accepted in the exact layer")
        return cls(x)

    @classmethod
    def parse(cls, text: str) -> "ExactComplex":
        """Parse ``"p/q"`` (real) or ``"p/q,r/s"`` (real, imaginary)."""
        parts = text.split(",")
        if len(parts) == 1:
            return cls(parts[0])
        if len(parts) == 2:
            return cls(parts[0], parts[1])
        raise ValueError(f"cannot parse {text!r} as a Gaussian rational")

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        o = _coerce_operand(other)
        if o is NotImplemented:
            return o
        return ExactComplex._raw(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce_operand(other)
        if o is NotImplemented:
            return o
        return ExactComplex._raw(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _coerce_operand(other)
        if o is NotImplemented:
            return o
        return ExactComplex._raw(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = _coerce_operand(other)
        if o is NotImplemented:
            return o
        if not self.im and not o.im:
            return ExactComplex._raw(self.re * o.re, Fraction(0))
        return ExactComplex._raw(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __neg__(self):
        return ExactComplex._raw(-self.re, -self.im)

    def inverse(self) -> "ExactComplex":
        n = self.abs2()
        if not n:
            raise ZeroDivisionError("inverse of zero")
        return ExactComplex._raw(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = _coerce_operand(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _coerce_operand(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result = ONE
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # comparison and conversion -------------------------------------------
    def __eq__(self, other):
        o = _coerce_operand(other)
        if o is NotImplemented:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def conjugate(self) -> "ExactComplex":
        return ExactComplex._raw(self.re, -self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self) -> float:
        return math.sqrt(float(self.abs2()))

    def to_strings(self) -> tuple[str, str]:
        return (_frac_str(self.re), _frac_str(self.im))

    def __repr__(self):
        if not self.im:
            return f"ExactComplex({_frac_str(self.re)!r})"
        return f"ExactComplex({_frac_str(self.re)!r}, {_frac_str(self.im)!r})"

    def __str__(self):
        if not self.im:
            return _frac_str(self.re)
        sign = "+" if self.im >= 0 else "-"
        return f"{_frac_str(self.re)}{sign}{_frac_str(abs(self.im))}i"


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _coerce_operand(x):
    if isinstance(x, ExactComplex):
        return x
    if isinstance(x, (int, Fraction)):
        return ExactComplex._raw(Fraction(x), Fraction(0))
    return NotImplemented


ZERO = ExactComplex(0)
ONE = ExactComplex(1)


class UniPoly:
    """Univariate polynomial with Gaussian-rational coefficients.

    ``coeffs[k]`` is the coefficient of ``z**k``.  Trailing zeros are
    stripped, so the zero polynomial has an empty tuple and ``degree`` is
    ``None``.
    """

    __slots__ = ("coeffs", "_intform")

    def __init__(self, coeffs: Iterable = ()):
        cs = [ExactComplex.coerce(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs: tuple[ExactComplex, ...] = tuple(cs)
        self._intform = None

    @classmethod
    def monomial(cls, k: int, c=1) -> "UniPoly":
        return cls([ZERO] * k + [ExactComplex.coerce(c)])

    @property
    def degree(self) -> int | None:
        return len(self.coeffs) - 1 if self.coeffs else None

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> ExactComplex:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else ZERO

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly([{', '.join(str(c) for c in self.coeffs)}])"

    def __call__(self, z) -> ExactComplex:
        z = ExactComplex.coerce(z)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def __add__(self, other: "UniPoly") -> "UniPoly":
        n = max(len(self), len(other))
        return UniPoly(self.coeff(k) + other.coeff(k) for k in range(n))

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        n = max(len(self), len(other))
        return UniPoly(self.coeff(k) - other.coeff(k) for k in range(n))

    def __neg__(self):
        return UniPoly(-c for c in self.coeffs)

    def scale(self, c) -> "UniPoly":
        c = ExactComplex.coerce(c)
        return UniPoly(c * x for x in self.coeffs)

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            return self.scale(other)
        if self.is_zero() or other.is_zero():
            return UniPoly()
        return _from_intform(_int_mul(self.intform(), other.intform()))

    def __pow__(self, e: int) -> "UniPoly":
        if e < 0:
            raise DomainError("negative power of a polynomial")
        return _from_intform(_int_pow(self.intform(), e))

    def truncate(self, order: int) -> "UniPoly":
        """Keep coefficients of degree ``<= order``."""
        return UniPoly(self.coeffs[: order + 1])

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead_inv = other.coeffs[-1].inverse()
        quot = [ZERO] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            q = rem[k] * lead_inv
            if not q:
                continue
            quot[k - dq] = q
            for j, oc in enumerate(other.coeffs):
                rem[k - dq + j] = rem[k - dq + j] - q * oc
        return UniPoly(quot), UniPoly(rem[:dq])

    def to_complex(self) -> np.ndarray:
        return np.array([complex(c) for c in self.coeffs], dtype=np.complex128)

    def intform(self) -> tuple:
        """``(den, re_ints, im_ints)`` with ``coeff_k = (re_k + i*im_k) / den``."""
        if self._intform is None:
            den = 1
            for c in self.coeffs:
                den = math.lcm(den, c.re.denominator, c.im.denominator)
            re = tuple(c.re.numerator * (den // c.re.denominator) for c in self.coeffs)
            im = tuple(c.im.numerator * (den // c.im.denominator) for c in self.coeffs)
            self._intform = (den, re, im)
        return self._intform


# Gaussian-integer polynomial kernels.  Object-dtype convolution keeps the
# big-integer loop inside numpy, which is several times faster than a Python
# double loop for the long compositions P1^I P2^J.

def _conv(a, b):
    if not a or not b:
        return ()
    if len(a) == 1:
        x = a[0]
        return tuple(x * y for y in b)
    if len(b) == 1:
        y = b[0]
        return tuple(x * y for x in a)
    return tuple(np.convolve(np.array(a, dtype=object), np.array(b, dtype=object)).tolist())


def _all_zero(xs):
    return not any(xs)


def _vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _int_mul(f, g):
    fden, fre, fim = f
    gden, gre, gim = g
    if _all_zero(fim) and _all_zero(gim):
        re = _conv(fre, gre)
        return (fden * gden, re, (0,) * len(re))
    rr = _conv(fre, gre)
    if _all_zero(fim):
        return (fden * gden, rr, _conv(fre, gim))
    if _all_zero(gim):
        return (fden * gden, rr, _conv(fim, gre))
    re = _vsub(rr, _conv(fim, gim))
    im = _vadd(_conv(fre, gim), _conv(fim, gre))
    return (fden * gden, re, im)


@lru_cache(maxsize=4096)
def _int_pow(f, e: int):
    if e == 0:
        return (1, (1,), (0,))
    if e == 1:
        return f
    half = _int_pow(f, e // 2)
    sq = _int_mul(half, half)
    return _int_mul(sq, f) if e & 1 else sq


def _from_intform(f) -> UniPoly:
    den, re, im = f
    out = UniPoly.__new__(UniPoly)
    cs = [ExactComplex._raw(Fraction(r, den), Fraction(i, den)) for r, i in zip(re, im)]
    while cs and not cs[-1]:
        cs.pop()
    out.coeffs = tuple(cs)
    out._intform = None
    return out


def poly_gcd(p: UniPoly, q: UniPoly) -> UniPoly:
    """Monic gcd over Q(i) by the Euclidean algorithm."""
    a, b = p, q
    while not b.is_zero():
        _, r = a.divmod(b)
        a, b = b, r
    if a.is_zero():
        return a
    return a.scale(a.coeffs[-1].inverse())


def trailing_data(p: UniPoly) -> tuple[int, ExactComplex]:
    """Valuation at 0 and the lowest nonzero coefficient."""
    for k, c in enumerate(p.coeffs):
        if c:
            return k, c
    raise ZeroPolynomialError("valuation of the zero polynomial is undefined")


@dataclass(frozen=True)
class ParamCurve:
    """A plane curve z -> (P1(z), P2(z)) / V(z) through the origin.

    Build with :meth:`from_polys`; it enforces nu1 >= nu2 by exchanging the
    components (recorded in ``swapped``).
    """

    p1: UniPoly
    p2: UniPoly
    v: UniPoly | None
    d1: int
    d2: int
    bigD: int
    nu1: int
    nu2: int
    nu: int
    alpha: tuple[ExactComplex, ...]
    a: tuple[ExactComplex, ...]
    beta0: ExactComplex | None
    swapped: bool = False
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @classmethod
    def from_polys(cls, p1, p2, v=None) -> "ParamCurve":
        p1 = p1 if isinstance(p1, UniPoly) else UniPoly(p1)
        p2 = p2 if isinstance(p2, UniPoly) else UniPoly(p2)
        if v is not None and not isinstance(v, UniPoly):
            v = UniPoly(v)
        for name, p in (("P1", p1), ("P2", p2)):
            if p.is_zero():
                raise DomainError(f"{name} is the zero polynomial")
            if p.coeff(0):
                raise DomainError(f"{name}(0) must vanish")
        swapped = False
        nu1, _ = trailing_data(p1)
        nu2, _ = trailing_data(p2)
        if nu1 < nu2:
            p1, p2 = p2, p1
            nu1, nu2 = nu2, nu1
            swapped = True
        beta0 = None
        if v is not None:
            if v.is_zero() or not v.coeff(0):
                raise SingularDenominatorError("V(0) must be nonzero")
            for name, p in (("P1", p1), ("P2", p2)):
                if poly_gcd(p, v).degree != 0:
                    raise DomainError(f"gcd({name}, V) is not 1")
            beta0 = v.coeff(0)
        return cls(
            p1=p1,
            p2=p2,
            v=v,
            d1=p1.degree,
            d2=p2.degree,
            bigD=max(p1.degree, p2.degree),
            nu1=nu1,
            nu2=nu2,
            nu=nu2,
            alpha=p1.coeffs[nu1:],
            a=p2.coeffs[nu2:],
            beta0=beta0,
            swapped=swapped,
        )

    @property
    def alpha0(self) -> ExactComplex:
        return self.alpha[0]

    @property
    def a0(self) -> ExactComplex:
        return self.a[0]

    def alpha_at(self, i: int) -> ExactComplex:
        return self.alpha[i] if 0 <= i < len(self.alpha) else ZERO

    def a_at(self, i: int) -> ExactComplex:
        return self.a[i] if 0 <= i < len(self.a) else ZERO

    @property
    def equal_multiplicities(self) -> bool:
        return self.nu1 == self.nu2

    def polynomial_part(self) -> "ParamCurve":
        """The same curve with the denominator dropped."""
        if self.v is None:
            return self
        return ParamCurve.from_polys(self.p1, self.p2)


def compose_monomial(curve: ParamCurve, i_exp: int, j_exp: int,
                     max_slots: int = DEFAULT_MAX_SLOTS) -> UniPoly:
    """Return ``P1**i_exp * P2**j_exp`` exactly (polynomial curves only)."""
    if curve.v is not None:
        raise DomainError("compose_monomial needs a polynomial curve; use rational_ext")
    if i_exp < 0 or j_exp < 0:
        raise DomainError("exponents must be nonnegative")
    slots = i_exp * curve.d1 + j_exp * curve.d2 + 1
    if slots > max_slots:
        raise CapacityError(f"P1^{i_exp} P2^{j_exp} needs {slots} slots (cap {max_slots})")
    f = _int_mul(_int_pow(curve.p1.intform(), i_exp), _int_pow(curve.p2.intform(), j_exp))
    return _from_intform(f)


def series_inverse_power(v: UniPoly, n: int, order: int) -> list[ExactComplex]:
    """Taylor coefficients s_0..s_order of ``1 / v**n`` at the origin."""
    if v.is_zero() or not v.coeff(0):
        raise SingularDenominatorError("v(0) = 0: 1/v^n has a pole at the origin")
    w = (v ** n).truncate(order) if n else UniPoly([1])
    w0_inv = w.coeff(0).inverse()
    s = [w0_inv]
    for k in range(1, order + 1):
        acc = ZERO
        for j in range(1, min(k, w.degree) + 1):
            acc = acc + w.coeffs[j] * s[k - j]
        s.append(-acc * w0_inv)
    return s


def series_divide(num: UniPoly, den: UniPoly, order: int) -> list[ExactComplex]:
    """Taylor coefficients 0..order of ``num / den`` by long division."""
    if den.is_zero() or not den.coeff(0):
        raise SingularDenominatorError("denominator vanishes at the origin")
    d0_inv = den.coeff(0).inverse()
    q: list[ExactComplex] = []
    for k in range(order + 1):
        acc = num.coeff(k)
        for j in range(1, min(k, den.degree) + 1):
            acc = acc - den.coeffs[j] * q[k - j]
        q.append(acc * d0_inv)
    return q


# --------------------------------------------------------------------------
# certified maximum of |p| (or |p / v|) on a circle

_GOLDEN = (math.sqrt(5) - 1) / 2


def _trig_data(coeffs: np.ndarray, radius: float):
    k = np.arange(len(coeffs), dtype=float)
    b = coeffs * radius ** k
    mags = np.abs(b)
    a0 = mags.sum()
    a1 = (k * mags).sum()
    a2 = (k * k * mags).sum()
    return b, k, 2.0 * (a1 * a1 + a0 * a2), a0


def _eval_sq(b: np.ndarray, k: np.ndarray, theta: np.ndarray):
    """|q|^2 and its derivative at angles theta, q(t) = sum b_k e^{ikt}."""
    if len(b) == 1:
        val = np.full(theta.shape, abs(b[0]) ** 2)
        return val, np.zeros_like(theta)
    e = np.exp(1j * np.outer(theta, k))
    q = e @ b
    dq = e @ (1j * k * b)
    return np.abs(q) ** 2, 2.0 * np.real(np.conj(q) * dq)


def max_modulus_on_circle(p: UniPoly, radius: float, precision: float = 1e-9,
                          denominator: UniPoly | None = None,
                          max_rounds: int = 80, max_cells: int = 2_000_000) -> tuple[float, float]:
    """Enclose ``max_{|z|=radius} |p(z)|`` (or ``|p/denominator|``).

    Seeds ``4*deg + 16`` equispaced cells, polishes the best seeds with a
    golden-section search on the squared modulus, then discards cells by a
    second-order Taylor bound until ``hi - lo <= precision * hi``.
    """
    if radius <= 0:
        raise DomainError("radius must be positive")
    if p.is_zero():
        return 0.0, 0.0
    num = p.to_complex()
    den = denominator.to_complex() if denominator is not None else np.ones(1, dtype=complex)
    bn, kn, g2, an = _trig_data(num, radius)
    bd, kd, w2, ad = _trig_data(den, radius)
    deg = max(len(num), len(den)) - 1
    # relative floating error of evaluating |q|^2 by dot products
    eps_n = 8.0 * (deg + 2) * np.finfo(float).eps * an * an
    eps_d = 8.0 * (deg + 2) * np.finfo(float).eps * ad * ad

    def ratio(theta):
        g, dg = _eval_sq(bn, kn, theta)
        w, dw = _eval_sq(bd, kd, theta)
        return g, dg, w, dw

    n_seed = 4 * deg + 16
    half = math.pi / n_seed
    centers = (2.0 * np.arange(n_seed) + 1.0) * half

    g, dg, w, dw = ratio(centers)
    vals = g / np.where(w > 0, w, np.inf)
    best = float(np.max(vals))

    # golden-section polish of the strongest seeds (lower end of the interval)
    for idx in np.argsort(vals)[-4:]:
        lo_t, hi_t = centers[idx] - 2 * half, centers[idx] + 2 * half
        def f(t):
            gt, _, wt, _ = ratio(np.array([t]))
            return float(gt[0] / max(wt[0], 1e-300))

        x1 = hi_t - _GOLDEN * (hi_t - lo_t)
        x2 = lo_t + _GOLDEN * (hi_t - lo_t)
        f1, f2 = f(x1), f(x2)
        for _ in range(60):
            if f1 < f2:
                lo_t, x1, f1 = x1, x2, f2
                x2 = lo_t + _GOLDEN * (hi_t - lo_t)
                f2 = f(x2)
            else:
                hi_t, x2, f2 = x2, x1, f1
                x1 = hi_t - _GOLDEN * (hi_t - lo_t)
                f1 = f(x1)
        best = max(best, f1, f2)

    lo_sq = max(best - eps_n / max(float(np.min(w)), 1e-300), 0.0)
    for _ in range(max_rounds):
        g_up = g + np.abs(dg) * half + 0.5 * g2 * half * half + eps_n
        w_lo = w - np.abs(dw) * half - 0.5 * w2 * half * half - eps_d
        up = np.where(w_lo > 0, g_up / np.where(w_lo > 0, w_lo, 1.0), np.inf)
        hi_sq = float(np.max(up))
        with np.errstate(divide="ignore", invalid="ignore"):
            cur = float(np.nanmax(np.where(w > 0, g / w, 0.0)))
        lo_sq = max(lo_sq, cur * (1 - 1e-15) - eps_n / max(float(np.min(w)), 1e-300))
        lo, hi = math.sqrt(max(lo_sq, 0.0)), math.sqrt(hi_sq) if math.isfinite(hi_sq) else math.inf
        if hi - lo <= precision * hi:
            return lo, hi
        keep = up > lo_sq
        centers = centers[keep]
        if 2 * len(centers) > max_cells:
            break
        half /= 2.0
        centers = np.concatenate([centers - half, centers + half])
        g, dg, w, dw = ratio(centers)
    raise ConvergenceError(f"circle maximum not resolved to relative precision {precision}")


@dataclass(frozen=True)
class JetData:
    """Proportionality of the low-order jets of P1 and P2.

    ``k`` is the largest order with (alpha_0..alpha_k) = mu (a_0..a_k).  For
    fully proportional curves ``k`` is set to min(D1, D2) - nu and
    ``delta_bar_k`` is None.
    """

    k: int
    mu: ExactComplex
    fully_proportional: bool
    delta_bar_k: ExactComplex | None


def jet_proportionality(curve: ParamCurve) -> JetData:
    mu = curve.alpha0 / curve.a0
    full = curve.nu1 == curve.nu2 and curve.p1 == curve.p2.scale(mu)
    if full:
        return JetData(min(curve.d1, curve.d2) - curve.nu, mu, True, None)
    k = 0
    top = max(len(curve.alpha), len(curve.a))
    while k + 1 < top and curve.alpha_at(k + 1) == mu * curve.a_at(k + 1):
        k += 1
    return JetData(k, mu, False, curve.alpha_at(k + 1) - mu * curve.a_at(k + 1))
