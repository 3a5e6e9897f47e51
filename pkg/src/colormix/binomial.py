"""Binomial expectations behind the random-graph decay estimate.

X ~ B(n, d/n) plays the role of a vertex degree.  The float path computes
the pmf in log space and sums with ``math.fsum``; an exact Fraction path
anchors it for small trial counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np
from scipy import special, stats

EXACT_TRIALS_LIMIT = 1000


@dataclass(frozen=True)
class BinomialSpec:
    trials: int
    success_prob: float | Fraction

    def __post_init__(self) -> None:
        if self.trials < 0:
            raise ValueError("trials must be non-negative")
        if not 0 <= self.success_prob <= 1:
            raise ValueError("success probability must lie in [0, 1]")

    @classmethod
    def degree(cls, n: int, d: float | Fraction) -> "BinomialSpec":
        """B(n, d/n); stays exact when d is an int or a Fraction."""
        if isinstance(d, (int, Fraction)):
            return cls(n, Fraction(d) / n)
        return cls(n, d / n)


def f_q(q: int, x: int) -> Fraction:
    """1/(q - x - 1) for x <= q - 2, else 1."""
    if q < 2:
        raise ValueError("q must be at least 2")
    if x < 0 or int(x) != x:
        raise ValueError("x must be a non-negative integer")
    return Fraction(1, q - x - 1) if x <= q - 2 else Fraction(1)


def log_pmf(spec: BinomialSpec, ks: np.ndarray) -> np.ndarray:
    n, p = spec.trials, float(spec.success_prob)
    ks = np.asarray(ks, dtype=float)
    if p == 0.0:
        return np.where(ks == 0, 0.0, -np.inf)
    if p == 1.0:
        return np.where(ks == n, 0.0, -np.inf)
    logc = special.gammaln(n + 1) - special.gammaln(ks + 1) - special.gammaln(n - ks + 1)
    return logc + ks * math.log(p) + (n - ks) * math.log1p(-p)


def exact_pmf(spec: BinomialSpec, k: int) -> Fraction:
    p = Fraction(spec.success_prob)
    return math.comb(spec.trials, k) * p**k * (1 - p) ** (spec.trials - k)


def expected_f(spec: BinomialSpec, q: int, exact: bool = False) -> float | Fraction:
    """E[f_q(X)] for X ~ spec.

    Only k <= q - 2 carry a non-constant value, so the float path sums those
    terms directly and adds the upper tail P(X >= q - 1) from the survival
    function.  ``exact=True`` sums Fractions and needs trials <= 1000.
    """
    n = spec.trials
    top = min(q - 2, n)
    if exact:
        if n > EXACT_TRIALS_LIMIT:
            raise ValueError(f"exact mode is limited to {EXACT_TRIALS_LIMIT} trials")
        total = sum((f_q(q, k) * exact_pmf(spec, k) for k in range(top + 1)), Fraction(0))
        tail = sum((exact_pmf(spec, k) for k in range(top + 1, n + 1)), Fraction(0))
        return total + tail
    if top < 0:
        return 1.0
    ks = np.arange(top + 1)
    weights = np.exp(log_pmf(spec, ks))
    head = math.fsum(float(w) / (q - k - 1) for k, w in zip(ks, weights))
    tail = float(stats.binom.sf(top, n, float(spec.success_prob))) if top < n else 0.0
    return head + tail


def lemma_q(d: float) -> int:
    """The palette size ceil(2d + 4)."""
    return math.ceil(2 * d + 4)


def fq_table(ds: Iterable[float], n: int) -> list[dict]:
    """Rows d, n, q, expected_f, 1/d, margin with q = ceil(2d+4) and margin = 1/d - E[f_q]."""
    rows = []
    for d in ds:
        q = lemma_q(d)
        value = expected_f(BinomialSpec.degree(n, float(d)), q)
        rows.append({"d": d, "n": n, "q": q, "expected_f": value, "inv_d": 1 / d, "margin": 1 / d - value})
    return rows


# -- the polynomial approximation -------------------------------------------

def g(d: float, x: float) -> float:
    """1 - 1/(2d + 3 - x)."""
    if x == 2 * d + 3:
        raise ZeroDivisionError("g is singular at x = 2d + 3")
    return 1 - 1 / (2 * d + 3 - x)


def g_tilde(d: float, x: float) -> float:
    """Degree-6 polynomial in (x - d) that stays below g left of 2d + 2."""
    a = d + 3
    y = x - d
    value = (d + 2) / a
    for k in range(1, 6):
        value -= y**k / a ** (k + 1)
    return value - y**6 / a**6


def g_residual(d: float, x: float) -> float:
    """Closed form of g(x) - g_tilde(x)."""
    if x == 2 * d + 3:
        raise ZeroDivisionError("the residual is singular at x = 2d + 3")
    return (x - d) ** 6 * (2 * d + 2 - x) / ((d + 3) ** 6 * (2 * d + 3 - x))


_LEADING = (1, 17, 119, 422, 867, 1012, 486)  # d^6 .. d^0
_CORRECTIONS = (
    # (power of 1/n, sign, coefficients of d^6 .. d^0)
    (1, +1, (0, 1, 63, 290, 121, 0, 0)),
    (2, -1, (0, 50, 498, 284, 0, 0, 0)),
    (3, +1, (15, 416, 468, 0, 0, 0, 0)),
    (4, -1, (130, 384, 0, 0, 0, 0, 0)),
    (5, +1, (120, 0, 0, 0, 0, 0, 0)),
)


def _poly(coeffs, d):
    return sum(c * d ** (6 - i) for i, c in enumerate(coeffs))


def expected_g_tilde_closed(d: float | Fraction, n: int) -> float | Fraction:
    """E[g_tilde(X)] for X ~ B(n, d/n) from its expansion in powers of 1/n."""
    inv_n = Fraction(1, n) if isinstance(d, Fraction) else 1 / n
    total = _poly(_LEADING, d)
    for power, sign, coeffs in _CORRECTIONS:
        total += sign * _poly(coeffs, d) * inv_n**power
    return total / (d + 3) ** 6


def expected_g_tilde_direct(d: float | Fraction, n: int) -> float | Fraction:
    """E[g_tilde(X)] by summing over the support; exact when d is a Fraction."""
    if isinstance(d, Fraction):
        spec = BinomialSpec(n, d / n)
        return sum((g_tilde(d, Fraction(k)) * exact_pmf(spec, k) for k in range(n + 1)), Fraction(0))
    spec = BinomialSpec.degree(n, float(d))
    ks = np.arange(n + 1)
    weights = np.exp(log_pmf(spec, ks))
    return math.fsum(float(w) * g_tilde(d, float(k)) for k, w in zip(ks, weights))


def lemma42_margins(d: float, n: int) -> dict:
    """Terms of the lower-bound chain for E[f_q], evaluated at finite n.

    ``leading`` is the n-free part of E[g_tilde(X)], ``excess`` its surplus
    over 1 - 1/d, and the two margins subtract e^{-d} (asymptotic form) and
    (1 - d/n)^n (finite form) from that surplus.
    """
    leading = _poly(_LEADING, d) / (d + 3) ** 6
    excess = (2 * d**5 + 17 * d**4 + 192 * d**3 + 769 * d**2 + 1215 * d + 729) / (d * (d + 3) ** 6)
    zero_mass = (1 - d / n) ** n
    return {
        "d": d,
        "n": n,
        "leading": leading,
        "excess": excess,
        "leading_minus_target": leading - (1 - 1 / d),
        "exp_neg_d": math.exp(-d),
        "zero_mass": zero_mass,
        "margin_asymptotic": excess - math.exp(-d),
        "margin_finite": excess - zero_mass,
    }


def expected_power4(k: int, n: int, d: float) -> dict:
    """E[4^Y] for Y ~ B(C(k,2) - k + 1, d/n) next to the bounds (1+3d/n)^{k^2} and exp(3dk^2/n)."""
    if k < 2:
        raise ValueError("walk length k must be at least 2")
    trials = math.comb(k, 2) - k + 1
    p = d / n
    return {
        "k": k,
        "trials": trials,
        "exact": (1 + 3 * p) ** trials,
        "bound_power": (1 + 3 * p) ** (k * k),
        "bound_exp": math.exp(3 * d * k * k / n),
    }
