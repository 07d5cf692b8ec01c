import math
import random
from fractions import Fraction

import pytest

from padic_heights.degree import dirichlet_approx, select_degree


def test_single_constraint_q2_rho24():
    plan = select_degree(n=1, x=(2,), rho=24, epsilon=0.5, d=1, C=2)
    assert plan.k == (5,)
    assert plan.r == 32
    assert plan.degree == 32
    assert 24 <= plan.degree <= 48
    assert plan.epsilon == 0.0


def test_single_constraint_exact_power():
    plan = select_degree(n=1, x=(3,), rho=27, epsilon=0.5, d=1, C=3)
    assert plan.k == (3,) and plan.r == 27 and plan.degree == 27


def test_rho_threshold_rejected():
    with pytest.raises(ValueError):
        select_degree(n=1, x=(2,), rho=2, epsilon=0.5, d=1, C=2)


def test_two_constraints_symmetric():
    r, k = dirichlet_approx([2, 2], 10, 0.5)
    assert k[0] == k[1]
    assert r == 2 ** k[0]
    assert r >= 10


def test_two_constraints_powers():
    r, k = dirichlet_approx([2, 4], 10, 0.5)
    assert r >= 10
    for x, ki in zip((2, 4), k):
        assert r <= x ** ki <= 1.5 * r


def test_three_constraints():
    r, k = dirichlet_approx([2, 3, 5], 100, 0.9)
    for x, ki in zip((2, 3, 5), k):
        assert r <= x ** ki <= 1.9 * r
    assert r >= 100


def test_select_degree_n2_window():
    plan = select_degree(n=2, x=(2, 3), rho=81, epsilon=0.5, d=1, C=3)
    assert plan.degree >= 81
    exponent = (4 * math.log(3)) ** 3 / math.log(1.5) ** 2
    assert math.log(plan.degree) <= exponent * math.log(81)


def test_property_suite_random_inputs():
    rng = random.Random(42)
    checked = 0
    while checked < 200:
        n = rng.choice([1, 2, 2, 3])
        x = [rng.randrange(2, 40) for _ in range(n)]
        rho = Fraction(rng.randrange(3, 5000))
        eps = rng.uniform(0.15, 0.9)
        if n == 1:
            # single-constraint path is deterministic; exercise the scan anyway
            r, k = dirichlet_approx(x, rho, eps)
        else:
            r, k = dirichlet_approx(x, rho, eps)
        assert r >= rho
        feps = Fraction(eps)
        for xi, ki in zip(x, k):
            assert r <= xi ** ki
            assert Fraction(xi ** ki) <= (1 + feps) * r
            bound = (
                2 ** (2 * n + 1)
                * math.log(max(x)) ** n
                * math.log(rho)
                / (math.log(xi) * math.log(1 + eps) ** n)
            )
            assert ki <= bound
        checked += 1


def test_n0_plan():
    plan = select_degree(n=0, x=(), rho=5, epsilon=0.0, d=1, C=2)
    assert plan.degree == 5
