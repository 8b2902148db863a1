"""The beta-dependent constants of the 8/5 analysis.

For ``1/3 <= beta < 1/2`` the worst narrow-cut repair coefficient is

    f(beta) = max_{0 <= w < 1} beta*w*(3 - 1/beta - w) / (1 - w),

attained at ``w = 1 - sqrt(1/beta - 2)``; substituting gives the closed form
``f(beta) = 1 - beta - 2*sqrt(beta - 2*beta**2)``.  The expected parity
correction is then at most ``(1/2 + eps) c.x*`` with
``eps = 1/2 - beta / (f(beta) + 1)``.

Exact values live in :class:`QuadSurd`; the exploratory functions
(:func:`f_beta`, :func:`mixed_bound`) work in floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import minimize_scalar

BETA_STAR = Fraction(4, 9)
LOW = Fraction(1, 3)
HIGH = Fraction(1, 2)


class DomainError(ValueError):
    pass


def rational_sqrt(q: Fraction) -> Fraction | None:
    q = Fraction(q)
    if q < 0:
        return None
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class QuadSurd:
    """The real number ``rational + coeff * sqrt(radicand)``, radicand >= 0."""

    rational: Fraction
    coeff: Fraction = Fraction(0)
    radicand: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        if self.radicand < 0:
            raise ValueError("negative radicand")
        root = rational_sqrt(self.radicand)
        if root is not None and self.coeff:
            object.__setattr__(self, "rational", Fraction(self.rational) + self.coeff * root)
            object.__setattr__(self, "coeff", Fraction(0))
            object.__setattr__(self, "radicand", Fraction(0))

    @property
    def is_rational(self) -> bool:
        return self.coeff == 0

    def sign(self) -> int:
        a, b, d = self.rational, self.coeff, self.radicand
        if b == 0 or d == 0:
            return (a > 0) - (a < 0)
        sb = 1 if b > 0 else -1
        if a == 0 or (a > 0) == (b > 0):
            return sb if a == 0 else (1 if a > 0 else -1)
        # opposite signs: compare a^2 with b^2 d
        diff = a * a - b * b * d
        if diff == 0:
            return 0
        return (1 if a > 0 else -1) if diff > 0 else sb

    def __add__(self, other: Fraction | int) -> QuadSurd:
        return QuadSurd(self.rational + other, self.coeff, self.radicand)

    def __rsub__(self, other: Fraction | int) -> QuadSurd:
        return QuadSurd(other - self.rational, -self.coeff, self.radicand)

    def __sub__(self, other: Fraction | int) -> QuadSurd:
        return QuadSurd(self.rational - other, self.coeff, self.radicand)

    def __mul__(self, k: Fraction | int) -> QuadSurd:
        return QuadSurd(self.rational * k, self.coeff * k, self.radicand)

    __rmul__ = __mul__

    def __float__(self) -> float:
        return float(self.rational) + float(self.coeff) * math.sqrt(self.radicand)

    def __str__(self) -> str:
        if self.is_rational:
            return f"{self.rational.numerator}/{self.rational.denominator}"
        return f"{self.rational} {'+' if self.coeff > 0 else '-'} {abs(self.coeff)}*sqrt({self.radicand})"


def _check_beta(beta: float | Fraction, closed_low: bool = True) -> None:
    low, high = (LOW, HIGH) if isinstance(beta, Fraction) else (float(LOW), float(HIGH))
    ok_low = beta >= low if closed_low else beta > low
    if not (ok_low and beta < high):
        raise DomainError(f"beta = {beta} outside {'[' if closed_low else '('}1/3, 1/2)")


def omega_exact(beta: Fraction) -> QuadSurd:
    beta = Fraction(beta)
    _check_beta(beta)
    return QuadSurd(Fraction(1), Fraction(-1), 1 / beta - 2)


def f_beta_exact(beta: Fraction) -> QuadSurd:
    beta = Fraction(beta)
    _check_beta(beta)
    return QuadSurd(1 - beta, Fraction(-2), beta - 2 * beta * beta)


def epsilon_exact(beta: Fraction) -> Fraction | None:
    """``1/2 - beta/(f+1)`` when f(beta) is rational, else None."""
    f = f_beta_exact(beta)
    if not f.is_rational:
        return None
    return Fraction(1, 2) - Fraction(beta) / (f.rational + 1)


@dataclass(frozen=True)
class BetaPoint:
    beta: float
    omega: float
    f_of_beta: float
    epsilon: float
    f_numeric: float  # direct maximization, for cross-checking

    @property
    def ratio(self) -> float:
        return 1.5 + self.epsilon


def _numeric_max(fun, lo: float, hi: float) -> tuple[float, float]:
    res = minimize_scalar(lambda t: -fun(t), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12, "maxiter": 500})
    # the bounded method never probes the endpoints themselves
    best_t, best_v = float(res.x), -float(res.fun)
    v_lo = fun(lo)
    if v_lo > best_v:
        best_t, best_v = lo, v_lo
    return best_v, best_t


def repair_coefficient(beta: float, x: float) -> float:
    """``(x - 1) * (4 beta - 1 - beta x) / (2 - x)`` for a cut of LP value ``x``."""
    return (x - 1) * (4 * beta - 1 - beta * x) / (2 - x)


def f_beta(beta: float) -> BetaPoint:
    _check_beta(beta)
    beta = float(beta)
    omega = 1 - math.sqrt(max(1 / beta - 2, 0.0))
    f = 1 - beta - 2 * math.sqrt(max(beta - 2 * beta * beta, 0.0))
    f_num, _ = _numeric_max(lambda x: repair_coefficient(beta, x), 1.0, 2.0 - 1e-12)
    if abs(f - f_num) > 1e-9:
        raise ArithmeticError(f"closed form f({beta}) = {f} disagrees with maximization {f_num}")
    eps = 0.5 - beta / (f + 1)
    return BetaPoint(beta, omega, f, eps, f_num)


def mixed_inner(beta: float, y: float) -> tuple[float, float]:
    """``max_w (beta*w*(3 - 1/beta - w) - y) / (1 - w)`` over ``0 <= w < 1``, and the argmax."""
    return _numeric_max(lambda w: (beta * w * (3 - 1 / beta - w) - y) / (1 - w), 0.0, 1.0 - 1e-9)


def mixed_bound(beta: float, y: float) -> float:
    _check_beta(beta, closed_low=False)
    if y < 0:
        raise DomainError(f"y = {y} must be nonnegative")
    f, _ = mixed_inner(beta, y)
    return 0.5 - (beta - y) / (f + 1)


def printed_omegas(beta: float, y: float) -> dict[str, float]:
    """The two closed forms for the inner maximizer found in the literature, for reporting."""
    return {
        "one_minus_sqrt": 1 - math.sqrt(1 / beta - 2 + y / beta),
        "sqrt": math.sqrt(1 / beta - 2 + y / beta),
    }


@dataclass(frozen=True)
class MixedOptimum:
    beta: float
    y: float
    epsilon: float


def minimize_mixed_bound(beta_range: tuple[float, float] = (1 / 3, 1 / 2),
                         y_range: tuple[float, float] = (0.0, 0.2),
                         grid: int = 41) -> MixedOptimum:
    """Grid search followed by nested bounded refinement around the best cell."""
    pad = 1e-6
    b_lo, b_hi = beta_range[0] + pad, beta_range[1] - pad
    y_lo, y_hi = y_range
    betas = np.linspace(b_lo, b_hi, grid).tolist()
    ys = np.linspace(y_lo, y_hi, grid).tolist()
    best = min((mixed_bound(b, y), i, j) for i, b in enumerate(betas) for j, y in enumerate(ys))
    _, i, j = best
    cb = (betas[max(i - 1, 0)], betas[min(i + 1, grid - 1)])
    cy = (ys[max(j - 1, 0)], ys[min(j + 1, grid - 1)])

    def over_beta(y: float) -> tuple[float, float]:
        res = minimize_scalar(lambda b: mixed_bound(b, y), bounds=cb, method="bounded",
                              options={"xatol": 1e-10})
        return float(res.fun), float(res.x)

    res_y = minimize_scalar(lambda y: over_beta(y)[0], bounds=cy, method="bounded",
                            options={"xatol": 1e-9})
    y_star = float(res_y.x)
    eps, b_star = over_beta(y_star)
    # the bounded search never lands on the interval ends; try them explicitly
    for y_end in cy:
        e_end, b_end = over_beta(y_end)
        if e_end <= eps:
            eps, b_star, y_star = e_end, b_end, float(y_end)
    return MixedOptimum(b_star, y_star, eps)


def constants_table(betas: list[Fraction] | None = None) -> list[dict]:
    if betas is None:
        betas = [Fraction(k, 90) for k in range(31, 45)] + [BETA_STAR, Fraction(9, 20)]
        betas = sorted(set(betas))
    rows = []
    for b in betas:
        p = f_beta(float(b))
        row = {
            "beta": f"{b.numerator}/{b.denominator}",
            "omega": p.omega,
            "f": p.f_of_beta,
            "epsilon": p.epsilon,
            "ratio": 1.5 + p.epsilon,
        }
        f_ex = f_beta_exact(b)
        if f_ex.is_rational:
            eps = epsilon_exact(b)
            row["exact"] = {
                "omega": str(omega_exact(b)),
                "f": str(f_ex),
                "epsilon": f"{eps.numerator}/{eps.denominator}",
                "coefficient": str(Fraction(1, 2) + eps),
                "ratio": str(Fraction(3, 2) + eps),
            }
        rows.append(row)
    return rows
