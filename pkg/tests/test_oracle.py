import random

import pytest

from padic_heights import intpoly
from padic_heights.oracle import (
    count_padic_roots,
    enumerate_root_classes,
    factor_monic_z,
    search_small_height,
)


def test_count_examples():
    assert count_padic_roots([0, -1, 1], 3) == 2  # x^2 - x
    assert count_padic_roots([-17, 0, 1], 2) == 2  # 17 = 1 mod 8 is a 2-adic square
    assert count_padic_roots([1, 0, 1], 2) == 0  # -1 is not a square mod 8
    assert count_padic_roots([1, 0, 1], 5) == 2  # -1 is a square mod 5
    assert count_padic_roots([0, -1, 0, 1], 5) == 3  # x^3 - x splits


def test_count_rejects_non_squarefree():
    with pytest.raises(ValueError):
        count_padic_roots([1, 2, 1], 3)


def test_count_agrees_with_enumeration_random_cubics():
    rng = random.Random(12)
    done = 0
    while done < 120:
        f = [rng.randrange(-20, 21) for _ in range(3)] + [1]
        if not intpoly.is_squarefree_q(f):
            continue
        disc = intpoly.discriminant(f)
        for p in (2, 3, 5):
            v = 0
            d = abs(disc)
            while d % p == 0:
                d //= p
                v += 1
            if v > 6:
                break
        else:
            for p in (2, 3, 5):
                classes = enumerate_root_classes(f, p, depth=12)
                assert count_padic_roots(f, p, precision=40) == len(classes), (f, p)
            done += 1


def test_factor_monic_z():
    f = intpoly.mul([2, 1], intpoly.mul([-3, 1], [1, 0, 1]))
    factors = factor_monic_z(f)
    assert sorted(map(tuple, factors)) == [(-3, 1), (1, 0, 1), (2, 1)]
    quartic = intpoly.mul([1, 0, 1], [4, 0, 1])
    assert sorted(map(tuple, factor_monic_z(quartic))) == [(1, 0, 1), (4, 0, 1)]


def test_search_degree_one():
    rec = search_small_height([2], 1, 2)
    surv = {c for c, h in rec.entries}
    assert (0, 1) in surv and (1, 1) in surv and (-1, 1) in surv and (2, 1) in surv
    assert rec.min_height == 0.0


def test_search_small_heights_respect_floor():
    import math

    rec = search_small_height([2], 2, 5)
    floor = 0.5 * math.log(2) / 3
    for coeffs, h in rec.entries:
        assert h <= 1e-12 or h >= floor - 1e-9
    assert rec.min_nonzero_height >= floor


def test_search_prefilter_consistency():
    # the mod-p prefilter must never drop a genuine survivor
    rec_all = search_small_height([3], 2, 3)
    brute = []
    for b in range(-3, 4):
        for a in range(-3, 4):
            f = [a, b, 1]
            if not intpoly.is_squarefree_q(f):
                continue
            if count_padic_roots(f, 3) == 2:
                brute.append((a, b, 1))
    got = sorted(c for c, _ in rec_all.entries if len(c) == 3)
    assert got == sorted(brute)
