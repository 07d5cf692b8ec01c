import pytest

from padic_heights.construct import (
    PrimeSpec,
    approximate_to_global,
    build_local_poly,
    choose_g0,
    compute_m,
    digit_table,
    run_construction,
    select_invariant_subset,
)
from padic_heights.embedding import completion_embedding
from padic_heights.errors import UnsupportedError
from padic_heights.localfield import (
    galois_group,
    lf_init,
    trivial_galois_action,
)
from padic_heights.numfield import decompose_prime, nf_init, reduce_mod_prime
from padic_heights.repset import build_repset
import random


@pytest.fixture(scope="module")
def q_field():
    return nf_init([-1, 1])


@pytest.fixture(scope="module")
def gauss_field():
    return nf_init([1, 0, 1])


def test_compute_m_example():
    # single dyadic condition, k=5, c=16
    assert compute_m(d=1, rel_e=1, x=2, k=5, c=16) == 31 + 5 + 32


def test_select_invariant_subset_trivial():
    E = lf_init(2, precision=24)
    G = trivial_galois_action(E)
    rep = build_repset(E, E, G, d=1, k=2)
    subset = select_invariant_subset(rep, 2)
    assert len(subset) == 2
    assert subset == tuple(rep.elements[i] for o in rep.orbits[:2] for i in o)
    assert select_invariant_subset(rep, len(rep.elements)) == rep.elements


def test_select_invariant_subset_galois():
    E = lf_init(2, unram_poly=[1, 1, 1], precision=20)
    F = E.prime_base()
    G = galois_group(E, F)
    rep = build_repset(E, F, G, d=2, k=1)
    subset = select_invariant_subset(rep, 4)
    assert len(subset) == 4
    level = min(rep.k + rep.c, E.N)
    keys = {E.rcanon(x, level) for x in subset}
    for idx in G.non_identity():
        assert all(E.rcanon(G.apply_raw(idx, x), level) in keys for x in subset)


def test_build_local_poly_pair_of_points():
    E = lf_init(2, precision=24)
    coeffs = build_local_poly(E, E, (E.rfrom_int(4), E.rfrom_int(5)))
    assert coeffs == [E.rfrom_int(20), E.rfrom_int(-9), E.rfrom_int(1)]


def test_build_local_poly_constant_term_valuation():
    E = lf_init(2, precision=24)
    coeffs = build_local_poly(E, E, (E.rfrom_int(2), E.rfrom_int(3), E.rfrom_int(5)))
    # constant term is the signed product of the points: valuations add
    assert E.rval(coeffs[0]) == 1
    with_zero = build_local_poly(E, E, (E.rfrom_int(0), E.rfrom_int(3)))
    assert E.rval(with_zero[0]) is None  # exactly zero


def test_build_local_poly_galois_invariant_coeffs():
    E = lf_init(2, unram_poly=[1, 1, 1], precision=20)
    F = E.prime_base()
    G = galois_group(E, F)
    rep = build_repset(E, F, G, d=2, k=1)
    subset = select_invariant_subset(rep, 4)
    coeffs = build_local_poly(E, F, subset)
    for c in coeffs:
        for idx in G.non_identity():
            diff = E.rsub(G.apply_raw(idx, c), c)
            v = E.rval(diff)
            assert v is None or v >= E.N


def test_approximate_to_global_rationals(q_field):
    (p2,) = decompose_prime(q_field, 2)
    E = lf_init(2, precision=40)
    emb = completion_embedding(q_field, p2, E)
    gtilde = [E.rfrom_int(-9), E.rfrom_int(20), E.rfrom_int(1)]
    approx, tol = approximate_to_global(q_field, p2, emb, gtilde, m=6, rel_e=1)
    assert tol == 6
    for coeff, target in zip(approx, gtilde):
        diff = E.rsub(emb.embed(coeff), target)
        v = E.rval(diff)
        assert v is None or v >= 6
    assert approx[-1] == q_field.one()


def test_approximate_to_global_gaussian(gauss_field):
    primes = decompose_prime(gauss_field, 5)
    prime = primes[0]
    E = lf_init(5, precision=24)
    emb = completion_embedding(gauss_field, prime, E)
    rng = random.Random(4)
    target = [E.rfrom_int(rng.randrange(5 ** 12)) for _ in range(3)] + [E.rone()]
    approx, tol = approximate_to_global(gauss_field, prime, emb, target, m=4, rel_e=1)
    for coeff, t in zip(approx, target):
        v = E.rval(E.rsub(emb.embed(coeff), t))
        assert v is None or v >= 4


def test_digit_table_covers_residues(gauss_field):
    primes = decompose_prime(gauss_field, 5)
    prime = primes[0]
    E = lf_init(5, precision=24)
    emb = completion_embedding(gauss_field, prime, E)
    table = digit_table(gauss_field, prime, emb)
    assert len(table) == 5
    for key, d in table.items():
        assert E.residue_field.to_index(E.rresidue(emb.embed(d))) == key


def test_choose_g0_rationals(q_field):
    (p3,) = decompose_prime(q_field, 3)
    rng = random.Random(1)
    g0, checked = choose_g0(q_field, p3, 2, rng)
    assert len(g0) == 3 and g0[-1] == q_field.one()
    # irreducible quadratic mod 3 has no roots mod 3
    for r in range(3):
        val = sum(c.coords[0] * r ** i for i, c in enumerate(g0))
        assert val % 3 != 0


def test_choose_g0_degree_one(q_field):
    (p3,) = decompose_prime(q_field, 3)
    g0, _ = choose_g0(q_field, p3, 1, random.Random(0))
    assert len(g0) == 2


def test_embedding_gaussian_roots(gauss_field):
    primes = decompose_prime(gauss_field, 5)
    for prime in primes:
        E = lf_init(5, precision=24)
        emb = completion_embedding(gauss_field, prime, E)
        img = emb.embed(gauss_field.theta())
        sq = E.radd(E.rmul(img, img), E.rone())
        assert E.rval(sq) is None or E.rval(sq) >= E.N
        assert E.rresidue(img) == reduce_mod_prime(prime, gauss_field.theta())


def test_embedding_inert_prime(gauss_field):
    primes = decompose_prime(gauss_field, 3)
    (prime,) = primes
    E = lf_init(3, unram_poly=list(prime.factor_lift), precision=20)
    emb = completion_embedding(gauss_field, prime, E)
    img = emb.embed(gauss_field.theta())
    sq = E.radd(E.rmul(img, img), E.rone())
    assert E.rval(sq) is None or E.rval(sq) >= E.N


def test_embedding_rejects_ramified(gauss_field):
    (prime,) = decompose_prime(gauss_field, 2)
    E = lf_init(2, precision=20)
    with pytest.raises(UnsupportedError):
        completion_embedding(gauss_field, prime, E)


def test_run_construction_determinism(q_field):
    res1 = run_construction(q_field, [PrimeSpec(p=2)], rho=24, epsilon=0.5, seed=7)
    res2 = run_construction(q_field, [PrimeSpec(p=2)], rho=24, epsilon=0.5, seed=7)
    assert [c.coords for c in res1.gpoly.coeffs] == [c.coords for c in res2.gpoly.coeffs]
    res3 = run_construction(q_field, [PrimeSpec(p=2)], rho=24, epsilon=0.5, seed=8)
    assert [c.coords for c in res3.gpoly.coeffs] != [c.coords for c in res1.gpoly.coeffs]


def test_run_construction_ramified_extension(q_field):
    # totally ramified quadratic over Q_3 via its default Eisenstein polynomial
    res = run_construction(q_field, [PrimeSpec(p=3, rel_e=2)], rho=3 * 9, epsilon=0.5, seed=1)
    ctx = res.contexts[0]
    assert ctx.E.e == 2 and ctx.G.size == 2
    from padic_heights import verify

    cert = verify.verify_splitting(ctx, res.gpoly, res.plan.c)
    assert cert.all_ok


def test_run_construction_unramified_extension(q_field):
    res = run_construction(q_field, [PrimeSpec(p=2, rel_f=2)], rho=3 * 16, epsilon=0.5, seed=1)
    ctx = res.contexts[0]
    assert ctx.E.f == 2 and ctx.G.size == 2
    from padic_heights import verify

    cert = verify.verify_splitting(ctx, res.gpoly, res.plan.c)
    assert cert.all_ok
    assert res.gpoly.degree == res.plan.degree
