"""Dense exact polynomial helpers over Z and Q.

Polynomials are lists of coefficients in ascending order: [a0, a1, ..., an].
The zero polynomial is [].  Entries are ints or Fractions; operations never
introduce floating point.
"""

from fractions import Fraction

from .errors import UnsupportedError


def normalize(f):
    """Strip trailing zero coefficients."""
    n = len(f)
    while n and f[n - 1] == 0:
        n -= 1
    return list(f[:n])


def degree(f):
    f = normalize(f)
    return len(f) - 1 if f else -1


def is_monic(f):
    f = normalize(f)
    return bool(f) and f[-1] == 1


def add(f, g):
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] += c
    return normalize(out)


def neg(f):
    return [-c for c in f]


def sub(f, g):
    return add(f, neg(g))


def mul(f, g):
    f, g = normalize(f), normalize(g)
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            out[i + j] += a * b
    return normalize(out)


def scale(f, c):
    if c == 0:
        return []
    return [a * c for a in f]


def eval_at(f, x):
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def derivative(f):
    return normalize([i * c for i, c in enumerate(f)][1:])


def divmod_q(f, g):
    """Quotient and remainder over Q (Fraction arithmetic)."""
    f = [Fraction(c) for c in normalize(f)]
    g = [Fraction(c) for c in normalize(g)]
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(f) - len(g) + 1, 0)
    r = f
    while r and len(r) >= len(g):
        c = r[-1] / g[-1]
        d = len(r) - len(g)
        q[d] = c
        r = normalize([r[i] - (c * g[i - d] if 0 <= i - d < len(g) else 0) for i in range(len(r))])
    return normalize(q), r


def content(f):
    from math import gcd

    c = 0
    for a in f:
        c = gcd(c, abs(a))
    return c


def primitive_part(f):
    c = content(f)
    return [a // c for a in f] if c else []


def gcd_z(f, g):
    """gcd of integer polynomials, returned primitive with positive leading coeff.

    Primitive pseudo-remainder sequence; exact, no coefficient blowup beyond
    content removal at each step.
    """
    f, g = primitive_part(normalize(f)), primitive_part(normalize(g))
    if not f:
        return g
    if not g:
        return f
    while g:
        # pseudo-remainder: lc(g)^(deg f - deg g + 1) * f mod g
        df, dg = len(f) - 1, len(g) - 1
        if df < dg:
            f, g = g, f
            continue
        r = list(f)
        lg = g[-1]
        for _ in range(df - dg + 1):
            if not r:
                break
            if len(r) - 1 < dg:
                r = scale(r, lg)
                continue
            c = r[-1]
            d = len(r) - 1 - dg
            r = normalize([lg * r[i] - (c * g[i - d] if 0 <= i - d < len(g) else 0) for i in range(len(r) - 1)])
        f, g = g, primitive_part(r)
    if f and f[-1] < 0:
        f = neg(f)
    return f


def is_squarefree_q(f):
    return degree(gcd_z(f, derivative(f))) <= 0


def sylvester_resultant(f, g):
    """Resultant of integer polynomials via Bareiss fraction-free elimination."""
    f, g = normalize(f), normalize(g)
    m, n = len(f) - 1, len(g) - 1
    if m < 0 or n < 0:
        return 0
    if m == 0:
        return f[0] ** n
    if n == 0:
        return g[0] ** m
    size = m + n
    mat = [[0] * size for _ in range(size)]
    for i in range(n):
        for j, c in enumerate(reversed(f)):
            mat[i][i + j] = c
    for i in range(m):
        for j, c in enumerate(reversed(g)):
            mat[n + i][i + j] = c
    return _det_bareiss(mat)


def _det_bareiss(mat):
    """Exact integer determinant (fraction-free Gaussian elimination)."""
    a = [row[:] for row in mat]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def discriminant(f):
    """disc(f) for integer f: (-1)^(m(m-1)/2) Res(f, f') / lc(f)."""
    f = normalize(f)
    m = len(f) - 1
    if m < 1:
        raise ValueError("discriminant needs degree >= 1")
    res = sylvester_resultant(f, derivative(f))
    s = -1 if (m * (m - 1) // 2) % 2 else 1
    d, rem = divmod(s * res, f[-1])
    assert rem == 0
    return d


def sturm_real_root_count(f):
    """Number of distinct real roots, by exact Sturm sequence over Q."""
    f = [Fraction(c) for c in normalize(f)]
    if len(f) <= 1:
        return 0
    chain = [f, [Fraction(c) for c in derivative(f)]]
    while degree(chain[-1]) > 0:
        _, r = divmod_q(chain[-2], chain[-1])
        if not r:
            # squarefree input expected; shared factor means repeated roots
            chain[-1] = normalize(chain[-1])
            break
        chain.append(neg(r))

    def signs_at_inf(positive):
        out = []
        for g in chain:
            if not g:
                out.append(0)
                continue
            s = 1 if g[-1] > 0 else -1
            if not positive and (len(g) - 1) % 2 == 1:
                s = -s
            out.append(s)
        return out

    def variations(seq):
        seq = [s for s in seq if s != 0]
        return sum(1 for a, b in zip(seq, seq[1:]) if a * b < 0)

    return variations(signs_at_inf(False)) - variations(signs_at_inf(True))


def _divisors_signed(n):
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.extend([d, -d, n // d, -(n // d)])
        d += 1
    return sorted(set(out), key=abs)


def integer_roots(f):
    """Integer roots of a monic integer polynomial (rational root test)."""
    f = normalize(f)
    if not f or f[-1] != 1:
        raise ValueError("monic integer polynomial expected")
    if f[0] == 0:
        return [0] + [r for r in integer_roots(normalize(f[1:])) if r != 0] if degree(f) > 1 else [0]
    return [r for r in _divisors_signed(f[0]) if eval_at(f, r) == 0]


def is_irreducible_q(f):
    """Irreducibility over Q for monic integer polynomials of degree <= 4.

    Degree 2, 3: equivalent to having no rational (hence integer) root.
    Degree 4: also rule out a product of two monic integer quadratics.
    """
    f = normalize(f)
    m = degree(f)
    if not is_monic(f):
        raise ValueError("monic polynomial expected")
    if m == 1:
        return True
    if m in (2, 3):
        return not integer_roots(f)
    if m == 4:
        if integer_roots(f):
            return False
        return not _quartic_quadratic_split(f)
    raise UnsupportedError("irreducibility test implemented for degree <= 4 only")


def _quartic_quadratic_split(f):
    """Find (X^2+bX+c)(X^2+b'X+c') = f with integer b, c if one exists."""
    a0, a1, a2, a3 = f[0], f[1], f[2], f[3]
    if a0 == 0:
        return True
    for c in _divisors_signed(a0):
        cp, rem = divmod(a0, c)
        if rem:
            continue
        # b + b' = a3, b b' = a2 - c - c', b c' + b' c = a1
        s = a2 - c - cp
        disc = a3 * a3 - 4 * s
        if disc < 0:
            continue
        r = _isqrt_exact(disc)
        if r is None or (a3 + r) % 2:
            continue
        for b in {(a3 + r) // 2, (a3 - r) // 2}:
            bp = a3 - b
            if b * cp + bp * c == a1:
                return (b, c, bp, cp)
    return None


def _isqrt_exact(n):
    from math import isqrt

    if n < 0:
        return None
    r = isqrt(n)
    return r if r * r == n else None
