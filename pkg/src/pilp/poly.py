"""Exact univariate polynomials, rational functions and quasi-polynomials.

Everything here is exact: coefficients are ``int`` or ``fractions.Fraction``,
never floats.  The central notion is *eventual* comparison: two polynomials
are ordered by which one wins for every sufficiently large integer argument,
and every such comparison can be certified by an explicit integer threshold.

``BOTTOM`` is the formal value "minus infinity".  It participates in eventual
comparison and sorting (smaller than everything, equal to itself) but not in
arithmetic; mixing it into arithmetic raises ``BottomArithmeticError``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

LT, EQ, GT = -1, 0, 1


class BottomArithmeticError(TypeError):
    """Raised when BOTTOM is used where a finite value is required."""


class _Bottom:
    """Formal minus infinity.  Singleton; compare/sort only, no arithmetic."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "-inf"

    def __deepcopy__(self, memo):
        return self

    def _refuse(self, *_):
        raise BottomArithmeticError("arithmetic with -inf is not defined")

    __add__ = __radd__ = __sub__ = __rsub__ = _refuse
    __mul__ = __rmul__ = __neg__ = _refuse


BOTTOM = _Bottom()


def _norm_coeff(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    if isinstance(c, bool):
        return int(c)
    if not isinstance(c, (int, Fraction)):
        raise TypeError(f"coefficient must be int or Fraction, got {type(c).__name__}")
    return c


@dataclass(frozen=True)
class Poly:
    """Polynomial in one variable t, ascending coefficients, exact.

    >>> p = Poly((6, -5, 1))        # t^2 - 5t + 6
    >>> p(2), p(3), p(10)
    (0, 0, 56)
    >>> p.degree
    2
    """

    coeffs: tuple = ()

    def __post_init__(self):
        cs = tuple(_norm_coeff(c) for c in self.coeffs)
        while cs and cs[-1] == 0:
            cs = cs[:-1]
        object.__setattr__(self, "coeffs", cs)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def const(v) -> Poly:
        return Poly((v,))

    @staticmethod
    def monomial(k: int, coef=1) -> Poly:
        return Poly((0,) * k + (coef,))

    # -- structure ---------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; -1 stands in for the zero polynomial's minus infinity."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_integer(self) -> bool:
        return all(isinstance(c, int) for c in self.coeffs)

    def coeff(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    @property
    def leading(self):
        if not self.coeffs:
            return 0
        return self.coeffs[-1]

    def abs_coeffs(self) -> Poly:
        return Poly(tuple(abs(c) for c in self.coeffs))

    # -- arithmetic --------------------------------------------------------

    def __call__(self, t):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __add__(self, other) -> Poly:
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(tuple(self.coeff(k) + other.coeff(k) for k in range(n)))

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other) -> Poly:
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> Poly:
        return _as_poly(other) + (-self)

    def __mul__(self, other) -> Poly:
        other = _as_poly(other)
        if self.is_zero or other.is_zero:
            return Poly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(tuple(out))

    __rmul__ = __mul__

    def scale(self, s) -> Poly:
        return Poly(tuple(c * s for c in self.coeffs))

    def shift_up(self, k: int) -> Poly:
        """Multiply by t^k."""
        if self.is_zero:
            return self
        return Poly((0,) * k + self.coeffs)

    def __bool__(self):
        return not self.is_zero

    def __repr__(self):
        return f"Poly({poly_str(self)!r})"


T = Poly((0, 1))
ZERO = Poly()
ONE = Poly((1,))


def _as_poly(v) -> Poly:
    if isinstance(v, Poly):
        return v
    if isinstance(v, (int, Fraction)):
        return Poly((v,))
    raise TypeError(f"cannot coerce {type(v).__name__} to Poly")


def poly_str(p: Poly) -> str:
    """Human form, descending powers.

    >>> poly_str(Poly((6, -5, 1)))
    't^2 - 5t + 6'
    >>> poly_str(Poly((Fraction(1, 2),)))
    '1/2'
    >>> poly_str(Poly())
    '0'
    """
    if p.is_zero:
        return "0"
    parts = []
    for k in range(p.degree, -1, -1):
        c = p.coeff(k)
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            var = "t" if k == 1 else f"t^{k}"
            if mag == 1:
                body = var
            elif isinstance(mag, Fraction):
                body = f"({mag}){var}"
            else:
                body = f"{mag}{var}"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def coeffs_max(polys, floor=None) -> Poly:
    """Coefficient-wise max of the absolute-value polynomials of ``polys``.

    Used for the alpha/beta envelopes in the coordinate bound.  ``floor``
    optionally lower-bounds the result coefficient-wise (a constant Poly).
    """
    acc: list = []
    for p in polys:
        for k, c in enumerate(p.coeffs):
            while len(acc) <= k:
                acc.append(0)
            acc[k] = max(acc[k], abs(c))
    out = Poly(tuple(acc))
    if floor is not None:
        n = max(len(out.coeffs), len(floor.coeffs))
        out = Poly(tuple(max(out.coeff(k), floor.coeff(k)) for k in range(n)))
    return out


# ---------------------------------------------------------------------------
# Eventual comparison


def eventual_sign(p: Poly) -> int:
    """Sign of p(t) for all large t: the sign of the leading coefficient."""
    if p.is_zero:
        return 0
    return 1 if p.leading > 0 else -1


def eventual_sign_threshold(p: Poly) -> int:
    """Integer T with sign(p(t)) == eventual_sign(p) for every t > T.

    Constant polynomials (including zero) get T = 0.  Otherwise T is the
    Cauchy root bound 1 + max|a_i| / |a_d| rounded up: no real root of p
    exceeds it, so the sign is settled beyond it.

    >>> eventual_sign_threshold(Poly((-100, 0, 1)))   # t^2 - 100
    101
    >>> eventual_sign_threshold(Poly((7,)))
    0
    """
    if p.degree <= 0:
        return 0
    lead = abs(p.leading)
    top = max(abs(c) for c in p.coeffs[:-1])
    bound = 1 + Fraction(top, lead)
    return int(-((-bound.numerator) // bound.denominator))


def compare_eventually(p, q) -> int:
    """LT/EQ/GT by which argument wins for all sufficiently large t.

    Both arguments may be Poly or BOTTOM; BOTTOM is below every polynomial
    and equal to itself.

    >>> compare_eventually(Poly((0, 1)), Poly((1000,)))   # t vs 1000
    1
    >>> compare_eventually(BOTTOM, Poly((-5,)))
    -1
    """
    pb, qb = p is BOTTOM, q is BOTTOM
    if pb and qb:
        return EQ
    if pb:
        return LT
    if qb:
        return GT
    return eventual_sign(_as_poly(p) - _as_poly(q))


def eventual_compare_threshold(p, q) -> int:
    """Threshold past which the compare_eventually verdict holds pointwise."""
    if p is BOTTOM or q is BOTTOM:
        return 0
    return eventual_sign_threshold(_as_poly(p) - _as_poly(q))


def eventual_sort(values) -> list[int]:
    """Permutation of indices sorting ``values`` descending by eventual order.

    Stable: eventually-equal entries keep their input order.

    >>> eventual_sort([Poly((0, 1)), BOTTOM, Poly((5,))])
    [0, 2, 1]
    """
    values = list(values)
    order = list(range(len(values)))
    # insertion sort on compare_eventually; stable and fine at this scale
    out: list[int] = []
    for i in order:
        lo, hi = 0, len(out)
        while lo < hi:
            mid = (lo + hi) // 2
            if compare_eventually(values[out[mid]], values[i]) == LT:
                hi = mid
            else:
                lo = mid + 1
        out.insert(lo, i)
    return out


# ---------------------------------------------------------------------------
# Interpolation


def interpolate(points) -> Poly:
    """Unique least-degree Poly through ``points`` = [(t, value), ...].

    Newton divided differences over Fractions.  Duplicate abscissae are an
    error.

    >>> interpolate([(1, 1), (2, 4), (3, 9)])
    Poly('t^2')
    """
    pts = [(t, Fraction(v)) for t, v in points]
    ts = [t for t, _ in pts]
    if len(set(ts)) != len(ts):
        raise ValueError("interpolation abscissae must be distinct")
    if not pts:
        return ZERO
    coefs = [v for _, v in pts]
    for level in range(1, len(pts)):
        for i in range(len(pts) - 1, level - 1, -1):
            coefs[i] = Fraction(coefs[i] - coefs[i - 1], ts[i] - ts[i - level])
    # Horner assembly of the Newton form
    poly = ZERO
    for i in range(len(pts) - 1, -1, -1):
        poly = poly * (T - ts[i]) + Poly((coefs[i],))
    return poly


# ---------------------------------------------------------------------------
# Rational functions


def _poly_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    """Exact division with remainder over Q[t]."""
    if b.is_zero:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a.coeffs)
    qn = a.degree - b.degree
    if qn < 0:
        return ZERO, a
    quo = [0] * (qn + 1)
    blead = Fraction(b.leading)
    for k in range(qn, -1, -1):
        if len(rem) < k + b.degree + 1:
            continue  # this quotient coefficient is 0
        c = Fraction(rem[-1]) / blead
        quo[k] = c
        for j, bc in enumerate(b.coeffs):
            rem[k + j] -= c * bc
        while rem and rem[-1] == 0:
            rem.pop()
    return Poly(tuple(quo)), Poly(tuple(rem))


def _primitive(p: Poly) -> Poly:
    """Integer-coefficient primitive part with the same roots, leading > 0."""
    if p.is_zero:
        return p
    m = lcm(*(Fraction(c).denominator for c in p.coeffs))
    ints = [int(Fraction(c) * m) for c in p.coeffs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    ints = [v // g for v in ints]
    if ints[-1] < 0:
        ints = [-v for v in ints]
    return Poly(tuple(ints))


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Primitive integer gcd over Q[t], leading coefficient positive."""
    a, b = _primitive(a), _primitive(b)
    while not b.is_zero:
        _, r = _poly_divmod(a, b)
        a, b = b, _primitive(r) if not r.is_zero else ZERO
    return a if not a.is_zero else ZERO


@dataclass(frozen=True)
class RationalFunction:
    """Quotient of integer polynomials in canonical form.

    Canonical: gcd(num, den) constant, joint integer content 1, leading
    coefficient of den positive.  Ordered by eventual sign, which makes
    these a totally ordered field suitable for exact pivoting.
    """

    num: Poly
    den: Poly

    def __post_init__(self):
        num, den = self.num, self.den
        if den.is_zero:
            raise ZeroDivisionError("rational function with zero denominator")
        if not (num.is_integer and den.is_integer):
            num, den = _primitive_pair(num, den)
        if num.is_zero:
            object.__setattr__(self, "num", ZERO)
            object.__setattr__(self, "den", ONE)
            return
        if den == ONE:
            # already canonical; skipping the gcd matters under heavy pivoting
            object.__setattr__(self, "num", num)
            return
        g = poly_gcd(num, den) if num.degree > 0 and den.degree > 0 else ONE
        if g.degree > 0:
            num, _ = _poly_divmod(num, g)
            den, _ = _poly_divmod(den, g)
            num, den = _primitive_pair(num, den)
        c = gcd(_int_content(num), _int_content(den))
        if c > 1:
            num = Poly(tuple(v // c for v in num.coeffs))
            den = Poly(tuple(v // c for v in den.coeffs))
        if den.leading < 0:
            num, den = -num, -den
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def of(v) -> RationalFunction:
        if isinstance(v, RationalFunction):
            return v
        if isinstance(v, Poly):
            return RationalFunction(v, ONE)
        if isinstance(v, (int, Fraction)):
            return RationalFunction(Poly((v,)), ONE)
        raise TypeError(f"cannot coerce {type(v).__name__} to RationalFunction")

    # -- field arithmetic --------------------------------------------------

    def __add__(self, other) -> RationalFunction:
        o = RationalFunction.of(other)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> RationalFunction:
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other) -> RationalFunction:
        return self + (-RationalFunction.of(other))

    def __rsub__(self, other) -> RationalFunction:
        return RationalFunction.of(other) + (-self)

    def __mul__(self, other) -> RationalFunction:
        o = RationalFunction.of(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> RationalFunction:
        o = RationalFunction.of(other)
        if o.num.is_zero:
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return RationalFunction.of(other) / self

    def __abs__(self) -> RationalFunction:
        return -self if self.eventual_sign() < 0 else self

    # -- eventual order ----------------------------------------------------

    def eventual_sign(self) -> int:
        return eventual_sign(self.num)  # den leading > 0 by canonical form

    def sign_threshold(self) -> int:
        """Past this t the pointwise sign equals eventual_sign."""
        return max(eventual_sign_threshold(self.num), eventual_sign_threshold(self.den))

    def __bool__(self):
        return not self.num.is_zero

    def __eq__(self, other):
        o = RationalFunction.of(other)
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __lt__(self, other):
        return (self - other).eventual_sign() < 0

    def __le__(self, other):
        return (self - other).eventual_sign() <= 0

    def __gt__(self, other):
        return (self - other).eventual_sign() > 0

    def __ge__(self, other):
        return (self - other).eventual_sign() >= 0

    def __call__(self, t) -> Fraction:
        return Fraction(self.num(t), self.den(t))

    def __repr__(self):
        if self.den == ONE:
            return f"RF({poly_str(self.num)!r})"
        return f"RF({poly_str(self.num)!r} / {poly_str(self.den)!r})"


def _int_content(p: Poly) -> int:
    g = 0
    for c in p.coeffs:
        g = gcd(g, abs(int(c)))
    return g if g else 1


def _primitive_pair(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    """Scale a Q[t] pair to integer coefficients jointly."""
    m = lcm(*(Fraction(c).denominator for c in (*num.coeffs, *den.coeffs)))
    num, den = num.scale(m), den.scale(m)
    return (Poly(tuple(int(c) for c in num.coeffs)),
            Poly(tuple(int(c) for c in den.coeffs)))


RF_ZERO = RationalFunction(ZERO, ONE)
RF_ONE = RationalFunction(ONE, ONE)


# ---------------------------------------------------------------------------
# Quasi-polynomials


class ThresholdError(ValueError):
    """Evaluation of an eventual object at or below its threshold."""


@dataclass(frozen=True)
class QuasiPolynomial:
    """Eventually valid quasi-polynomial: branch by residue of t mod period.

    ``branches[j]`` covers t == j (mod period); a branch is a Poly or BOTTOM.
    The claim is only for integer t > threshold.
    """

    period: int
    threshold: int
    branches: tuple

    def __post_init__(self):
        if self.period < 1:
            raise ValueError("period must be >= 1")
        if len(self.branches) != self.period:
            raise ValueError("need exactly one branch per residue class")
        object.__setattr__(self, "branches", tuple(
            b if b is BOTTOM else _as_poly(b) for b in self.branches))

    def branch_for(self, t: int):
        return self.branches[t % self.period]

    @property
    def finite_branch_count(self) -> int:
        return sum(1 for b in self.branches if b is not BOTTOM)

    def map_branches(self, fn) -> QuasiPolynomial:
        """Apply fn to every finite branch; BOTTOM passes through."""
        return QuasiPolynomial(self.period, self.threshold, tuple(
            b if b is BOTTOM else fn(b) for b in self.branches))

    def with_threshold(self, threshold: int) -> QuasiPolynomial:
        return QuasiPolynomial(self.period, max(self.threshold, threshold), self.branches)

    def lift_period(self, period: int) -> QuasiPolynomial:
        """Rewrite with a larger period that the current one divides."""
        if period % self.period:
            raise ValueError("new period must be a multiple of the old")
        return QuasiPolynomial(period, self.threshold, tuple(
            self.branches[j % self.period] for j in range(period)))


def qp_eval(qp: QuasiPolynomial, t: int):
    """Value at integer t > threshold; BOTTOM branches yield BOTTOM.

    >>> half = QuasiPolynomial(2, 0, (Poly((0, Fraction(1, 2))), Poly((Fraction(-1, 2), Fraction(1, 2)))))
    >>> qp_eval(half, 7), qp_eval(half, 8)
    (3, 4)
    """
    if t <= qp.threshold:
        raise ThresholdError(f"t={t} not above threshold {qp.threshold}")
    b = qp.branch_for(t)
    if b is BOTTOM:
        return BOTTOM
    v = b(t)
    if isinstance(v, Fraction) and v.denominator == 1:
        return int(v)
    return v


def qp_equivalent(a: QuasiPolynomial, b: QuasiPolynomial) -> bool:
    """Same eventual function, ignoring period presentation and thresholds."""
    d = lcm(a.period, b.period)
    for j in range(d):
        x, y = a.branches[j % a.period], b.branches[j % b.period]
        if (x is BOTTOM) != (y is BOTTOM):
            return False
        if x is not BOTTOM and x != y:
            return False
    return True


# ---------------------------------------------------------------------------
# Serialization helpers (shared by model/cli)


def coeff_to_json(c):
    c = _norm_coeff(c)
    if isinstance(c, int):
        return c
    return f"{c.numerator}/{c.denominator}"


def coeff_from_json(v):
    if isinstance(v, bool):
        raise ValueError("boolean is not a coefficient")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        return Fraction(v)
    raise ValueError(f"bad coefficient {v!r}")


def poly_to_json(p: Poly) -> list:
    return [coeff_to_json(c) for c in p.coeffs]


def poly_from_json(v) -> Poly:
    if not isinstance(v, list):
        raise ValueError("polynomial must be a list of coefficients")
    return Poly(tuple(coeff_from_json(c) for c in v))


def value_to_json(v):
    if v is BOTTOM:
        return "-inf"
    v = _norm_coeff(v)
    return coeff_to_json(v)


def value_from_json(v):
    if v == "-inf":
        return BOTTOM
    return coeff_from_json(v)


def qp_to_json(qp: QuasiPolynomial) -> dict:
    return {
        "period": qp.period,
        "threshold": qp.threshold,
        "branches": [None if b is BOTTOM else poly_to_json(b) for b in qp.branches],
    }


def qp_from_json(d: dict) -> QuasiPolynomial:
    return QuasiPolynomial(d["period"], d["threshold"], tuple(
        BOTTOM if b is None else poly_from_json(b) for b in d["branches"]))


def qp_str(qp: QuasiPolynomial) -> str:
    lines = [f"period {qp.period}, valid for t > {qp.threshold}"]
    for j, b in enumerate(qp.branches):
        body = "-inf" if b is BOTTOM else poly_str(b)
        lines.append(f"  t = {j} (mod {qp.period}): {body}")
    return "\n".join(lines)


__all__ = [
    "BOTTOM", "BottomArithmeticError", "EQ", "GT", "LT", "Poly",
    "QuasiPolynomial", "RationalFunction", "RF_ONE", "RF_ZERO", "T",
    "ThresholdError", "ZERO", "ONE", "coeff_from_json", "coeff_to_json",
    "coeffs_max", "compare_eventually", "eventual_compare_threshold",
    "eventual_sign", "eventual_sign_threshold", "eventual_sort",
    "interpolate", "poly_from_json", "poly_gcd", "poly_str", "poly_to_json",
    "qp_equivalent", "qp_eval", "qp_from_json", "qp_str", "qp_to_json",
    "value_from_json", "value_to_json",
]
