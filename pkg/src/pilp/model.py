"""Integer linear programs whose data are integer polynomials in t.

A PILP fixes, for every integer t >= 1, the lattice-point set L(t) of a
polyhedron and the objective covector c(t).  Four forms are supported:

  general             A(t) x <= b(t)
  standard            A(t) x  = b(t),  x >= 0
  canonical           A(t) x <= b(t),  x >= 0
  reduced_canonical   canonical with constant A and deg(b) <= 1

n = 0 is legal everywhere: the single candidate point is the empty tuple,
feasible iff the constraints hold with the zero left side.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from enum import Enum
from math import factorial
from typing import NamedTuple

from .poly import (
    Poly, ZERO, ONE, coeffs_max, eventual_sign_threshold, poly_from_json,
    poly_to_json,
)


class Form(str, Enum):
    GENERAL = "general"
    STANDARD = "standard"
    CANONICAL = "canonical"
    REDUCED_CANONICAL = "reduced_canonical"

    @property
    def has_nonneg(self) -> bool:
        """Whether the form carries the implicit constraint x >= 0."""
        return self is not Form.GENERAL

    @property
    def is_equality(self) -> bool:
        return self is Form.STANDARD


class InvalidProgramError(ValueError):
    """Program data violate the declared form."""


class Diagnostic(NamedTuple):
    severity: str  # "error" or "warning"
    message: str


def _poly_row(row) -> tuple:
    return tuple(p if isinstance(p, Poly) else Poly((p,)) for p in row)


@dataclass(frozen=True)
class PILP:
    """Parametric program; immutable and hashable.

    ``bounded`` is the caller's assertion that every L(t) is finite; the
    enumeration path still detects and reports an unbounded relaxation at
    any concrete t it is asked about.
    """

    form: Form
    n: int
    m: int
    A: tuple
    b: tuple
    c: tuple
    bounded: bool = True

    def __post_init__(self):
        object.__setattr__(self, "form", Form(self.form))
        object.__setattr__(self, "A", tuple(_poly_row(r) for r in self.A))
        object.__setattr__(self, "b", _poly_row(self.b))
        object.__setattr__(self, "c", _poly_row(self.c))

    def check(self) -> PILP:
        """Raise InvalidProgramError on any error diagnostic; else self."""
        errs = [d for d in validate(self) if d.severity == "error"]
        if errs:
            raise InvalidProgramError("; ".join(d.message for d in errs))
        return self


class ConcreteILP(NamedTuple):
    """A PILP instantiated at one integer t; all data plain ints."""

    form: Form
    n: int
    m: int
    A: tuple          # m rows of n ints
    b: tuple          # m ints
    c: tuple          # n ints
    t: int


def validate(p: PILP) -> list[Diagnostic]:
    """Structural diagnostics; empty list means well-formed."""
    out: list[Diagnostic] = []
    err = lambda msg: out.append(Diagnostic("error", msg))
    if p.n < 0 or p.m < 0:
        err(f"dimensions must be nonnegative, got n={p.n} m={p.m}")
        return out
    if len(p.A) != p.m:
        err(f"A has {len(p.A)} rows, expected m={p.m}")
    if any(len(r) != p.n for r in p.A):
        err(f"every row of A must have n={p.n} entries")
    if len(p.b) != p.m:
        err(f"b has {len(p.b)} entries, expected m={p.m}")
    if len(p.c) != p.n:
        err(f"c has {len(p.c)} entries, expected n={p.n}")
    if out:
        return out
    for name, polys in (("A", [e for r in p.A for e in r]), ("b", p.b), ("c", p.c)):
        if any(not q.is_integer for q in polys):
            err(f"{name} must have integer polynomial entries")
    if p.form is Form.REDUCED_CANONICAL:
        if any(e.degree > 0 for r in p.A for e in r):
            err("reduced canonical form requires a constant matrix A")
        if any(q.degree > 1 for q in p.b):
            err("reduced canonical form requires deg(b) <= 1")
    if not p.bounded:
        out.append(Diagnostic(
            "warning", "bounded=false: value functions may be undefined"))
    return out


def instantiate(p: PILP, t: int) -> ConcreteILP:
    """Evaluate all polynomial data at integer t."""
    return ConcreteILP(
        p.form, p.n, p.m,
        tuple(tuple(int(e(t)) for e in row) for row in p.A),
        tuple(int(q(t)) for q in p.b),
        tuple(int(q(t)) for q in p.c),
        t,
    )


def general_rows(p: PILP) -> list[tuple[tuple, Poly]]:
    """All constraints of p as <= rows (coefficient Polys, rhs Poly).

    Equalities become two opposite rows; implicit x >= 0 becomes -x_i <= 0.
    This is the rewrite the coordinate bound is stated for.
    """
    rows = [(row, rhs) for row, rhs in zip(p.A, p.b)]
    if p.form.is_equality:
        rows += [(tuple(-e for e in row), -rhs) for row, rhs in zip(p.A, p.b)]
    if p.form.has_nonneg:
        for i in range(p.n):
            e = tuple(ZERO if j != i else Poly((-1,)) for j in range(p.n))
            rows.append((e, ZERO))
    return rows


class CoordinateBound(NamedTuple):
    r: int        # coordinates satisfy |x_i| < t^r for all t > T
    T: int
    bound: Poly   # the envelope B(t) itself, |x_i| <= B(t) for all t >= 1


def coordinate_bound_exponent(p: PILP) -> CoordinateBound:
    """Exponent r and threshold T with every point of L(t) inside (-t^r, t^r).

    B(t) = n! * alpha(t)^(n-1) * beta(t), where alpha and beta envelope the
    constraint coefficients and right sides of the general-form rewrite
    (floored at the constant 1).  |x_i| <= B(t) holds for every t >= 1 under
    the bounded assumption; only the domination t^r > B(t) is eventual.
    """
    if p.n == 0:
        return CoordinateBound(1, 0, ZERO)
    rows = general_rows(p)
    alpha = coeffs_max([e for row, _ in rows for e in row], floor=ONE)
    beta = coeffs_max([rhs for _, rhs in rows], floor=ONE)
    bound = ONE
    for _ in range(p.n - 1):
        bound = bound * alpha
    bound = (bound * beta).scale(factorial(p.n))
    r = bound.degree + 1
    T = eventual_sign_threshold(Poly.monomial(r) - bound)
    return CoordinateBound(r, T, bound)


class NormalizedB(NamedTuple):
    pilp: PILP
    degenerate: bool  # b identically zero: L(t) = {0} for every t


def normalize_b_signs(p: PILP) -> NormalizedB:
    """Rewrite a standard-form program so every b_i has positive leading term.

    Rows with b_i != 0 and negative leading coefficient are negated (same
    solution set).  Rows with b_i == 0 then get the first sign-normalized row
    added to them, which leaves the solution set unchanged.  If b is
    identically zero no rewrite exists; the program is flagged degenerate
    (its only feasible point, at every t, is the origin).
    """
    if p.form is not Form.STANDARD:
        raise InvalidProgramError("b-sign normalization applies to standard form")
    donor = None
    A, b = list(p.A), list(p.b)
    for i in range(p.m):
        if b[i].is_zero:
            continue
        if b[i].leading < 0:
            A[i] = tuple(-e for e in A[i])
            b[i] = -b[i]
        if donor is None:
            donor = i
    if donor is None:
        return NormalizedB(p, True)
    for i in range(p.m):
        if b[i].is_zero:
            A[i] = tuple(e + d for e, d in zip(A[i], A[donor]))
            b[i] = b[donor]
    return NormalizedB(replace(p, A=tuple(A), b=tuple(b)), False)


# ---------------------------------------------------------------------------
# File format


def pilp_to_json(p: PILP) -> dict:
    return {
        "form": p.form.value,
        "n": p.n,
        "m": p.m,
        "A": [[poly_to_json(e) for e in row] for row in p.A],
        "b": [poly_to_json(q) for q in p.b],
        "c": [poly_to_json(q) for q in p.c],
        "bounded": p.bounded,
    }


def pilp_from_json(d: dict) -> PILP:
    try:
        p = PILP(
            form=Form(d["form"]),
            n=int(d["n"]),
            m=int(d["m"]),
            A=tuple(tuple(poly_from_json(e) for e in row) for row in d["A"]),
            b=tuple(poly_from_json(q) for q in d["b"]),
            c=tuple(poly_from_json(q) for q in d["c"]),
            bounded=bool(d.get("bounded", True)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidProgramError(f"malformed program: {exc}") from exc
    return p.check()


def dumps_pilp(p: PILP) -> str:
    return json.dumps(pilp_to_json(p), indent=2, sort_keys=True) + "\n"


def loads_pilp(text: str) -> PILP:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidProgramError(f"not valid JSON: {exc}") from exc
    if not isinstance(d, dict):
        raise InvalidProgramError("program file must hold a JSON object")
    return pilp_from_json(d)


def load_pilp(path) -> PILP:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_pilp(fh.read())


def save_pilp(p: PILP, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_pilp(p))


__all__ = [
    "ConcreteILP", "CoordinateBound", "Diagnostic", "Form",
    "InvalidProgramError", "NormalizedB", "PILP", "coordinate_bound_exponent",
    "dumps_pilp", "general_rows", "instantiate", "load_pilp", "loads_pilp",
    "normalize_b_signs", "pilp_from_json", "pilp_to_json", "save_pilp",
    "validate",
]
