import math
import random

import mpmath
import pytest

from padic_heights.construct import PrimeSpec, run_construction
from padic_heights.errors import UnsupportedError
from padic_heights.numfield import decompose_prime, nf_init
from padic_heights import verify
from padic_heights.verify import (
    exact_height,
    height_bound,
    lower_bound_for_field,
    lower_bound_value,
    rational_poly_min_root_height,
    verify_irreducible,
    verify_splitting,
)

GOLDEN_HEIGHT = 0.5 * math.log((1 + 5 ** 0.5) / 2)


@pytest.fixture(scope="module")
def q_field():
    return nf_init([-1, 1])


@pytest.fixture(scope="module")
def small_run(q_field):
    return run_construction(q_field, [PrimeSpec(p=2)], rho=24, epsilon=0.5, seed=1)


def _int_poly(nf, coeffs):
    return [nf.from_int(c) for c in coeffs]


def test_exact_height_units(q_field):
    h, err, _ = exact_height(q_field, _int_poly(q_field, [-5, 1]))
    assert abs(h - math.log(5)) <= 1e-9 and err <= 1e-9
    h, err, _ = exact_height(q_field, _int_poly(q_field, [1, 1, 1]))
    assert abs(h) <= 1e-9
    h, err, _ = exact_height(q_field, _int_poly(q_field, [-1, -1, 1]))
    assert abs(h - GOLDEN_HEIGHT) <= 1e-9


def test_exact_height_gaussian_field():
    K = nf_init([1, 0, 1])
    h, err, _ = exact_height(K, [K.from_int(-5), K.one()])
    assert abs(h - math.log(5)) <= 1e-9
    # X - i has height 0 (root of unity)
    h, err, _ = exact_height(K, [-K.theta(), K.one()])
    assert abs(h) <= 1e-9


def test_exact_height_vs_direct_mahler_random(q_field):
    rng = random.Random(77)
    done = 0
    while done < 100:
        deg = rng.randrange(1, 9)
        coeffs = [rng.randrange(-9, 10) for _ in range(deg)] + [1]
        from padic_heights.intpoly import is_irreducible_q, is_squarefree_q

        if not is_squarefree_q(coeffs):
            continue
        if deg > 4:
            # no exact irreducibility test at this degree: restrict to
            # squarefree and compare polynomial heights instead
            continue
        if not is_irreducible_q(coeffs):
            continue
        h, err, _ = exact_height(q_field, _int_poly(q_field, coeffs))
        with mpmath.workprec(300):
            poly = [mpmath.mpf(c) for c in reversed(coeffs)]
            roots = mpmath.polyroots(poly, maxsteps=300, extraprec=150)
            expected = float(sum(mpmath.log(abs(r)) for r in roots if abs(r) > 1)) / deg
        assert abs(h - expected) < 1e-8
        done += 1


def test_lower_bound_values():
    assert abs(lower_bound_value([(2, 1, 1)]) - 0.5 * math.log(2) / 3) < 1e-12
    two = lower_bound_value([(2, 1, 1), (3, 1, 1)])
    assert abs(two - 0.5 * (math.log(2) / 3 + math.log(3) / 4)) < 1e-12
    assert lower_bound_value([]) == 0.0
    assert abs(lower_bound_value([(2, 1, 1)]) - 0.11552453009332421) < 1e-9
    assert abs(two - 0.2528510661768) < 1e-9


def test_lower_bound_rejects_number_fields():
    K = nf_init([1, 0, 1])
    with pytest.raises(UnsupportedError):
        lower_bound_for_field(K, [(5, 1, 1)])


def test_min_root_height_factors():
    # (x-1)(x^2-x-1): minimum over factors is 0
    from padic_heights import intpoly

    f = intpoly.mul([-1, 1], [-1, -1, 1])
    assert rational_poly_min_root_height(f) <= 1e-10
    assert abs(rational_poly_min_root_height([-1, -1, 1]) - GOLDEN_HEIGHT) < 1e-9


def test_verify_irreducible_examples(q_field):
    (p3,) = decompose_prime(q_field, 3)

    class FakePoly:
        def __init__(self, coeffs, degree):
            self.coeffs = coeffs
            self.degree = degree

    good = FakePoly(tuple(_int_poly(q_field, [1, 0, 1])), 2)
    cert = verify_irreducible(q_field, good, p3)
    assert cert.ok and cert.scanned_to == 1
    bad = FakePoly(tuple(_int_poly(q_field, [-1, 0, 1])), 2)
    cert = verify_irreducible(q_field, bad, p3)
    assert not cert.ok
    assert cert.witness is not None and len(cert.witness) == 2  # a linear factor
    lin = FakePoly(tuple(_int_poly(q_field, [4, 1])), 1)
    assert verify_irreducible(q_field, lin, p3).ok


def test_splitting_certificate_full_run(small_run):
    res = small_run
    cert = verify_splitting(res.contexts[0], res.gpoly, res.plan.c)
    assert cert.all_ok
    assert cert.distinct_count == 32
    assert cert.separation_max <= cert.b
    # every stored inequality has its stated slack
    for e in cert.entries:
        assert e.value_val is None or e.value_val > e.a + cert.b
        assert e.min_slack is None or e.min_slack >= 0


def test_splitting_tamper_negative_control(small_run):
    res = small_run
    from padic_heights.construct import GlobalPolynomial

    bumped = list(res.gpoly.coeffs)
    bumped[1] = bumped[1] + res.nf.one()
    tampered = GlobalPolynomial(
        nf=res.nf, coeffs=tuple(bumped), degree=res.gpoly.degree, provenance={}
    )
    cert = verify_splitting(res.contexts[0], tampered, res.plan.c)
    assert not cert.all_ok
    assert any(e.failing_condition == 1 for e in cert.entries if not e.ok)


def test_height_bound_terms(small_run):
    res = small_run
    hb = height_bound(res.nf, res.plan, res.contexts, res.prime0, res.log_B)
    assert abs(hb.main_term - math.log(2)) < 1e-10
    assert hb.epsilon_term == 0.0
    assert abs(hb.error_term - 13 * 1 * 2 ** 4 * math.log(32) / 32) < 1e-9
    h, err, _ = exact_height(res.nf, list(res.gpoly.coeffs))
    assert lower_bound_for_field(res.nf, [(2, 1, 1)]) <= h <= hb.bound_total
    assert h <= hb.coefficient_bound


def test_splitting_agrees_with_oracle(small_run):
    from padic_heights.oracle import count_padic_roots

    res = small_run
    coeffs = [c.coords[0] for c in res.gpoly.coeffs]
    assert count_padic_roots(coeffs, 2, precision=96) == 32
