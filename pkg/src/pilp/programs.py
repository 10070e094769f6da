"""Bundled example programs.

Small named programs used by the command-line demos and the test suite.
Every entry is bounded, so the coordinate-bound certificate applies to each
one and enumeration stays cheap at desk scale.
"""

from __future__ import annotations

from .model import Form, PILP
from .poly import Poly

T = Poly((0, 1))


def _canonical(A, b, c) -> PILP:
    return PILP(Form.CANONICAL, len(c), len(b), A, b, c).check()


EXAMPLES: dict[str, PILP] = {
    # maximize x subject to 2x <= t, x >= 0; value floor(t/2)
    "floor": _canonical([(2,)], [T], [1]),
    # first coordinate on the triangle x1 + x2 <= t; top value t, then t-1 twice
    "simplex": _canonical([(1, 1)], [T], [1, 0]),
    # the square [0,t]^2; (t+1)^2 lattice points
    "square": _canonical([(1, 0), (0, 1)], [T, T], [1, 1]),
    # x1 + 2x2 <= t; hull vertices alternate with the parity of t
    "triangle": _canonical([(1, 2)], [T], [1, 1]),
    # 2x1 + 2x2 <= t; the boundary hyperplane only meets the lattice at even t
    "even-sum": _canonical([(2, 2)], [T], [1, 0]),
    # t*x1 + x2 = t**2 + 1: solutions are the base-t digit pairs of t**2 + 1
    "digits": PILP(Form.STANDARD, 2, 1, [(T, 1)], [Poly((1, 0, 1))], [1, 1]).check(),
    # the symmetric interval -t <= x <= t, no sign restriction
    "interval": PILP(Form.GENERAL, 1, 2, [(1,), (-1,)], [T, T], [1]).check(),
    # x <= -1 with x >= 0: empty at every t
    "infeasible": _canonical([(1,)], [Poly((-1,))], [1]),
    # 2x1 + 2x2 = 2t + 1 has no integer solutions at any t
    "parity-gap": PILP(Form.STANDARD, 2, 1, [(2, 2)], [Poly((1, 2))], [1, 0]).check(),
}

BLURBS: dict[str, str] = {
    "floor": "maximize x with 2x <= t; the optimum is floor(t/2)",
    "simplex": "max x1 on x1 + x2 <= t; f1 = t and f2 = f3 = t - 1",
    "square": "all of [0,t]^2; counting target (t+1)^2",
    "triangle": "x1 + 2x2 <= t; parity-dependent hull vertices",
    "even-sum": "2x1 + 2x2 <= t; tight layer exists only for even t",
    "digits": "t*x1 + x2 = t**2 + 1; base-t digit lattice",
    "interval": "-t <= x <= t without nonnegativity",
    "infeasible": "x <= -1, x >= 0; empty for every t",
    "parity-gap": "2x1 + 2x2 = 2t + 1; empty by parity",
}


def example_names() -> list[str]:
    return list(EXAMPLES)


def example(name: str) -> PILP:
    try:
        return EXAMPLES[name]
    except KeyError:
        known = ", ".join(EXAMPLES)
        raise KeyError(f"unknown example {name!r}; bundled: {known}") from None


__all__ = ["EXAMPLES", "BLURBS", "example", "example_names"]
