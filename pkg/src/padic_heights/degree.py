"""Degree selection: simultaneous approximation of exponent vectors.

For several residue norms x_i the target degree must be a common near-power:
r <= x_i^(k_i) <= (1+epsilon) r for all i.  A scan of multiples q of the
exponent vector (2 log rho / log x_i) is guaranteed to hit by Dirichlet's
simultaneous approximation theorem within q < Q^n; the scan accepts the
first q whose rounded exponents already satisfy the stated conclusions,
which keeps the resulting degree as small as the guarantee allows.

For a single constraint the power is chosen directly and the approximation
step is skipped entirely.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import InvariantError, UnsupportedError

_SCAN_CAP = 1 << 32


@dataclass(frozen=True)
class DegreePlan:
    n: int
    x: tuple  # residue norms x_i = q_i^(f_i)
    rho: int
    epsilon: float
    d: int
    C: int
    c: int
    r: int
    k: tuple
    degree: int


def _round_half_up(v):
    return math.floor(v + 0.5)


def dirichlet_approx(x, rho, epsilon):
    """Positive integers (r, k) with r >= rho and r <= x_i^(k_i) <= (1+eps) r.

    rho may be a Fraction; all acceptance comparisons are exact.  Raises when
    the guaranteed scan bound is impractically large.
    """
    n = len(x)
    if n < 1 or any(xi < 2 for xi in x):
        raise ValueError("x_i must be integers >= 2")
    rho = Fraction(rho)
    if rho < 3:
        raise ValueError("rho must be at least 3")
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    eps = Fraction(epsilon)
    xmax = max(x)
    Q = math.ceil(2 * math.log(xmax) / math.log(1 + epsilon))
    if Q ** n > _SCAN_CAP:
        raise UnsupportedError("approximation scan bound exceeds the search budget")
    log_rho = math.log(rho)
    alphas = [2 * log_rho / math.log(xi) for xi in x]
    kb = [_k_bound(n, xmax, rho, xi, epsilon) for xi in x]
    for q in range(1, Q ** n):
        k = [_round_half_up(q * a) for a in alphas]
        if any(ki < 1 for ki in k):
            continue
        powers = [xi ** ki for xi, ki in zip(x, k)]
        r = min(powers)
        if Fraction(r) < rho:
            continue
        if any(Fraction(pw) > (1 + eps) * r for pw in powers):
            continue
        if any(ki > kbi for ki, kbi in zip(k, kb)):
            continue
        return r, tuple(k)
    raise InvariantError("approximation scan found no admissible exponent vector")


def _k_bound(n, xmax, rho, xi, epsilon):
    with mpmath.workprec(80):
        val = (
            mpmath.mpf(2) ** (2 * n + 1)
            * mpmath.log(xmax) ** n
            * mpmath.log(mpmath.mpf(rho.numerator) / rho.denominator)
            / (mpmath.log(xi) * mpmath.log(1 + mpmath.mpf(epsilon)) ** n)
        )
        return float(val)


def select_degree(n, x, rho, epsilon, d, C):
    """Build the degree plan; the target degree is d*r."""
    if C < 2:
        raise ValueError("the tower constant must be >= 2")
    if rho < 3 * C ** n:
        raise ValueError("rho below threshold: need rho >= 3*C^n = %d" % (3 * C ** n))
    c = 4 * C ** (n + 1)
    if n == 0:
        plan = DegreePlan(n=0, x=(), rho=rho, epsilon=0.0, d=d, C=C, c=c, r=rho, k=(), degree=d * rho)
        return plan
    if n == 1:
        epsilon = 0.0
        x1 = x[0]
        k1 = 1
        while d * x1 ** k1 < rho:
            k1 += 1
        r = x1 ** k1
        k = (k1,)
    else:
        if not 0 < epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1) when n > 1")
        r, k = dirichlet_approx(list(x), Fraction(rho, d), epsilon)
    plan = DegreePlan(
        n=n, x=tuple(x), rho=rho, epsilon=float(epsilon), d=d, C=C, c=c, r=r, k=k, degree=d * r
    )
    _check_plan(plan)
    return plan


def _check_plan(plan):
    n, d, r, rho, C = plan.n, plan.d, plan.r, plan.rho, plan.C
    if d * r < rho:
        raise InvariantError("degree fell below rho")
    if Fraction(r) < Fraction(rho, d):
        raise InvariantError("r below rho/d")
    eps = Fraction(plan.epsilon) if plan.epsilon else Fraction(0)
    for xi, ki in zip(plan.x, plan.k):
        pw = xi ** ki
        if not (r <= pw and Fraction(pw) <= (1 + eps) * r):
            raise InvariantError("common near-power condition fails")
    if n == 1:
        if d * r > C * rho:
            raise InvariantError("degree exceeds the single-constraint window")
        # log(rho/d) <= log r <= log(rho/d) + log(x1)
        if Fraction(r) * d > Fraction(rho) * plan.x[0]:
            raise InvariantError("r exceeds its single-constraint bound")
    elif n > 1:
        with mpmath.workprec(80):
            lhs = mpmath.log(d * r)
            exponent = (4 * mpmath.log(C)) ** (n + 1) / mpmath.log(1 + mpmath.mpf(plan.epsilon)) ** n
            if lhs > exponent * mpmath.log(rho) * (1 + mpmath.mpf(2) ** -40):
                raise InvariantError("degree exceeds the multi-constraint window")
