"""Independent brute-force cross-checks.

Root counting over Z_p by the textbook branch-and-strip recursion, level-wise
candidate enumeration (no lifting shortcuts at all), and exhaustive searches
for small-height totally split integer polynomials.  Everything here is kept
deliberately naive: these functions are the second opinion against which the
certified pipeline is tested.
"""

from dataclasses import dataclass, field

from . import intpoly
from .errors import PrecisionError, UnsupportedError


def count_padic_roots(f, p, precision=24):
    """Number of roots of a squarefree integer polynomial in Z_p.

    For each simple residue root one p-adic root; multiple residue roots are
    resolved by recursing on f(r + pX) with its p-power content stripped.
    """
    f = intpoly.normalize(f)
    if intpoly.degree(f) < 1:
        raise ValueError("nonconstant polynomial expected")
    if not intpoly.is_squarefree_q(f):
        raise ValueError("polynomial must be squarefree over Q")
    return _count_rec(f, p, precision // 2, 0)


def _count_rec(f, p, depth_cap, depth):
    if depth > depth_cap:
        raise PrecisionError("root counting recursion exhausted; increase precision")
    fp = intpoly.derivative(f)
    count = 0
    for r in range(p):
        if intpoly.eval_at(f, r) % p:
            continue
        if intpoly.eval_at(fp, r) % p:
            count += 1
            continue
        shifted = _shift_scale(f, r, p)
        count += _count_rec(shifted, p, depth_cap, depth + 1)
    return count


def _shift_scale(f, r, p):
    """f(r + pX) divided by its p-power content."""
    taylor = list(f)
    out = []
    for _ in range(len(f)):
        taylor, rem = _syndiv(taylor, r)
        out.append(rem)
    coeffs = [c * p ** i for i, c in enumerate(out)]
    v = min(_vp(c, p) for c in coeffs if c)
    return [c // p ** v for c in coeffs]


def _syndiv(b, r):
    if not b:
        return [], 0
    q = [0] * (len(b) - 1)
    acc = b[-1]
    for i in range(len(b) - 2, -1, -1):
        q[i] = acc
        acc = acc * r + b[i]
    return q, acc


def _vp(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def enumerate_root_classes(f, p, depth, margin=None):
    """Residue classes mod p^depth that contain a Z_p root: pure level-wise
    candidate lifting to depth + margin, then projection.  A class survives
    the deep extension exactly when it holds a root (squarefree input,
    moderate discriminant valuation)."""
    if margin is None:
        margin = depth
    total_depth = depth + margin
    cands = [r for r in range(p) if intpoly.eval_at(f, r) % p == 0]
    mod = p
    for level in range(2, total_depth + 1):
        mod *= p
        nxt = []
        for r in cands:
            for t in range(p):
                rr = r + t * (mod // p)
                if intpoly.eval_at(f, rr) % mod == 0:
                    nxt.append(rr)
        cands = nxt
        if len(cands) > 64 * (len(f) + 1):
            raise UnsupportedError("candidate explosion; polynomial too degenerate for enumeration")
    pd = p ** depth
    return sorted({r % pd for r in cands})


def factor_monic_z(f):
    """Monic integer polynomial factored into monic irreducibles over Q
    (degree <= 4 after linear deflation; desk scale)."""
    f = intpoly.normalize(f)
    factors = []
    for r in intpoly.integer_roots(f):
        while True:
            q, rem = _syndiv(f, r)
            if rem != 0:
                break
            factors.append([-r, 1])
            f = q
            if intpoly.degree(f) == 0:
                break
        if intpoly.degree(f) == 0:
            break
    d = intpoly.degree(f)
    if d == 0:
        return factors
    if d in (2, 3):
        factors.append(f)
        return factors
    if d == 4:
        split = intpoly._quartic_quadratic_split(f)
        if split:
            b, c, bp, cp = split
            factors.extend([[c, b, 1], [cp, bp, 1]])
        else:
            factors.append(f)
        return factors
    raise UnsupportedError("factorization implemented for degree <= 4 residual factors")


@dataclass
class SearchRecord:
    primes: tuple
    deg_max: int
    coeff_bound: int
    entries: list = field(default_factory=list)  # (coeffs tuple, min root height)
    searched: int = 0
    min_height: float = None
    min_nonzero_height: float = None
    budget_exceeded: bool = False


def search_small_height(primes, deg_max, coeff_bound, budget=10 ** 8, height_fn=None):
    """Exhaustive scan of monic integer polynomials, degree <= deg_max and
    coefficients in [-H, H], recording every squarefree one that splits
    completely in all the given p-adic fields together with the minimum of
    its root heights.

    Search order is by degree then lexicographic coefficient tuples; a cheap
    mod-p full-splitting prefilter runs before the exact count.
    """
    if height_fn is None:
        from .verify import rational_poly_min_root_height

        height_fn = rational_poly_min_root_height
    H = coeff_bound
    record = SearchRecord(primes=tuple(primes), deg_max=deg_max, coeff_bound=H)
    for deg in range(1, deg_max + 1):
        if (2 * H + 1) ** deg > budget:
            record.budget_exceeded = True
            break
        for f in _monic_lex(deg, H):
            record.searched += 1
            if record.searched > budget:
                record.budget_exceeded = True
                return record
            if not intpoly.is_squarefree_q(f):
                continue
            if any(not _splits_mod_p(f, p) for p in primes):
                continue
            if any(count_padic_roots(f, p) != deg for p in primes):
                continue
            h = height_fn(f)
            record.entries.append((tuple(f), h))
            if record.min_height is None or h < record.min_height:
                record.min_height = h
            if h > 1e-12 and (record.min_nonzero_height is None or h < record.min_nonzero_height):
                record.min_nonzero_height = h
    return record


def _monic_lex(deg, H):
    coeffs = [-H] * deg
    while True:
        yield coeffs + [1]
        i = 0
        while i < deg:
            coeffs[i] += 1
            if coeffs[i] <= H:
                break
            coeffs[i] = -H
            i += 1
        else:
            return
        if i == deg:
            return


def _splits_mod_p(f, p):
    """All roots of f mod p rational, counted with multiplicity (necessary
    for the polynomial to split completely over Z_p)."""
    g = [c % p for c in f]
    deg = len(f) - 1
    total = 0
    for r in range(p):
        while True:
            q, rem = _syndiv_mod(g, r, p)
            if rem % p:
                break
            g = q
            total += 1
            if len(g) <= 1:
                return total == deg
    return total == deg


def _syndiv_mod(b, r, p):
    if not b:
        return [], 0
    q = [0] * (len(b) - 1)
    acc = b[-1]
    for i in range(len(b) - 2, -1, -1):
        q[i] = acc
        acc = (acc * r + b[i]) % p
    return q, acc
