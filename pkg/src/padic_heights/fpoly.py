"""Finite fields F_{p^f} and dense polynomial arithmetic over them.

Field elements are plain ints in [0, p) when f = 1, else tuples of f ints
(coordinates over the power basis of t, where u(t) = 0 for the chosen monic
irreducible modulus u).  Polynomials are ascending coefficient lists with no
trailing zeros; [] is the zero polynomial.

Prime-field polynomials of large degree get a fast path: multiplication by
Kronecker substitution (coefficients packed into one big integer, multiplied
with CPython's subquadratic integer product, unpacked with numpy) and
division via a Newton-inverted reversed modulus.  This keeps the degree-scan
irreducibility certificates cheap at degrees in the hundreds.
"""

import zlib
import random

import numpy as np

from .errors import InvariantError, UnsupportedError

_FAST_DEGREE = 32


class GF:
    """F_{p^f}, as F_p (modulus None) or F_p[t]/(u(t))."""

    def __init__(self, p, modulus=None):
        if p < 2 or any(p % d == 0 for d in range(2, min(p, 1 + int(p ** 0.5) + 1))):
            raise ValueError("p must be prime")
        self.p = p
        if modulus is None:
            self.f = 1
            self.modulus = None
            self.zero = 0
            self.one = 1 % p
        else:
            mod = [c % p for c in modulus]
            while mod and mod[-1] == 0:
                mod.pop()
            if len(mod) < 3 or mod[-1] != 1:
                raise ValueError("extension modulus must be monic of degree >= 2")
            self.f = len(mod) - 1
            self.modulus = tuple(mod)
            prime = GF(p)
            if not is_irreducible([c for c in mod], prime):
                raise ValueError("extension modulus is reducible mod %d" % p)
            self.zero = tuple([0] * self.f)
            self.one = tuple([1] + [0] * (self.f - 1))
            # reduction rows: t^(f+i) as a tuple, for i < f-1
            self._red = []
            cur = [(-c) % p for c in mod[:-1]]
            for _ in range(self.f - 1):
                self._red.append(tuple(cur))
                cur = [0] + cur
                if cur[-1]:
                    top = cur.pop()
                    cur = [(a + top * b) % p for a, b in zip(cur, self._red[0])]
                else:
                    cur.pop()
        self.q = p ** self.f

    def __repr__(self):
        return "GF(%d)" % self.p if self.f == 1 else "GF(%d^%d)" % (self.p, self.f)

    def __eq__(self, other):
        return isinstance(other, GF) and self.p == other.p and self.modulus == other.modulus

    def __hash__(self):
        return hash((self.p, self.modulus))

    def add(self, a, b):
        if self.f == 1:
            return (a + b) % self.p
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a, b):
        if self.f == 1:
            return (a - b) % self.p
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        if self.f == 1:
            return (-a) % self.p
        return tuple((-x) % self.p for x in a)

    def mul(self, a, b):
        if self.f == 1:
            return (a * b) % self.p
        p, f = self.p, self.f
        conv = [0] * (2 * f - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    conv[i + j] += x * y
        out = [c % p for c in conv[:f]]
        for i, c in enumerate(conv[f:]):
            if c:
                row = self._red[i]
                out = [(o + c * r) % p for o, r in zip(out, row)]
        return tuple(out)

    def inv(self, a):
        if self.f == 1:
            return pow(a, -1, self.p)
        if a == self.zero:
            raise ZeroDivisionError("inverse of zero")
        # extended Euclid in F_p[t]
        prime = GF(self.p)
        r0, r1 = list(self.modulus), pnorm(list(a), prime)
        s0, s1 = [], [prime.one]
        while pdeg(r1) > 0:
            q, r = pdivmod(r0, r1, prime)
            r0, r1 = r1, r
            s0, s1 = s1, psub(s0, pmul(q, s1, prime), prime)
        if not r1:
            raise ZeroDivisionError("element shares a factor with the modulus")
        c = pow(r1[0], -1, self.p)
        s1 = [(x * c) % self.p for x in s1]
        s1 = s1 + [0] * (self.f - len(s1))
        return tuple(s1[: self.f])

    def pow_(self, a, e):
        out = self.one
        base = a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def from_index(self, i):
        if self.f == 1:
            return i % self.p
        digits = []
        for _ in range(self.f):
            i, r = divmod(i, self.p)
            digits.append(r)
        return tuple(digits)

    def to_index(self, a):
        if self.f == 1:
            return a % self.p
        i = 0
        for d in reversed(a):
            i = i * self.p + d
        return i

    def elements(self):
        return (self.from_index(i) for i in range(self.q))

    def is_zero(self, a):
        return a == self.zero


# ---------------------------------------------------------------------------
# generic dense polynomials over a GF


def pnorm(f, F):
    n = len(f)
    while n and F.is_zero(f[n - 1]):
        n -= 1
    return list(f[:n])


def pdeg(f):
    return len(f) - 1


def padd(a, b, F):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = F.add(out[i], c)
    return pnorm(out, F)


def psub(a, b, F):
    out = list(a) + [F.zero] * max(0, len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = F.sub(out[i], c)
    return pnorm(out, F)


def pmul(a, b, F):
    if not a or not b:
        return []
    if F.f == 1 and min(len(a), len(b)) >= _FAST_DEGREE:
        return _fp_mul(a, b, F.p)
    out = [F.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if F.is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = F.add(out[i + j], F.mul(x, y))
    return pnorm(out, F)


def pscale(a, c, F):
    if F.is_zero(c):
        return []
    return [F.mul(x, c) for x in a]


def pdivmod(a, b, F):
    a, b = pnorm(a, F), pnorm(b, F)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    binv = F.inv(b[-1])
    q = [F.zero] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    while r and len(r) >= len(b):
        c = F.mul(r[-1], binv)
        d = len(r) - len(b)
        q[d] = c
        for i in range(len(b)):
            r[d + i] = F.sub(r[d + i], F.mul(c, b[i]))
        r = pnorm(r, F)
    return q, r


def pmonic(a, F):
    a = pnorm(a, F)
    if not a:
        return a
    c = F.inv(a[-1])
    return [F.mul(x, c) for x in a]


def pgcd(a, b, F):
    if F.f == 1 and max(len(a), len(b)) >= _FAST_DEGREE:
        return _fp_gcd(a, b, F.p)
    a, b = pnorm(a, F), pnorm(b, F)
    while b:
        _, r = pdivmod(a, b, F)
        a, b = b, r
    return pmonic(a, F)


def peval(f, x, F):
    acc = F.zero
    for c in reversed(f):
        acc = F.add(F.mul(acc, x), c)
    return acc


def pderiv(f, F):
    out = []
    for i in range(1, len(f)):
        c = f[i]
        k = i % F.p
        if F.f == 1:
            out.append((c * k) % F.p)
        else:
            out.append(tuple((x * k) % F.p for x in c))
    return pnorm(out, F)


def x_poly(F):
    return [F.zero, F.one]


# ---------------------------------------------------------------------------
# fast prime-field kernels (coefficients are plain ints mod p)


def _pack(a, width):
    arr = np.asarray(a, dtype="<u4" if width == 4 else "<u8")
    return int.from_bytes(arr.tobytes(), "little")


def _unpack(n, slots, width, p):
    raw = n.to_bytes(slots * width, "little")
    arr = np.frombuffer(raw, dtype="<u4" if width == 4 else "<u8").astype(np.int64)
    return (arr % p).tolist()


def _fp_mul(a, b, p):
    slots = len(a) + len(b) - 1
    bound = min(len(a), len(b)) * (p - 1) * (p - 1)
    width = 4 if bound < (1 << 32) else 8
    if bound >= (1 << 64):
        raise UnsupportedError("coefficient field too large for packed multiplication")
    prod = _pack(a, width) * _pack(b, width)
    out = _unpack(prod, slots, width, p)
    while out and out[-1] == 0:
        out.pop()
    return out


def _fp_divmod_np(a, b, p):
    a = np.array(a, dtype=np.int64)
    b = np.array(b, dtype=np.int64)
    binv = pow(int(b[-1]), -1, p)
    la, lb = len(a), len(b)
    q = np.zeros(max(la - lb + 1, 0), dtype=np.int64)
    for d in range(la - lb, -1, -1):
        c = (a[d + lb - 1] * binv) % p
        if c:
            q[d] = c
            a[d : d + lb] = (a[d : d + lb] - c * b) % p
    r = a[: lb - 1]
    nz = np.nonzero(r)[0]
    return q.tolist(), r[: nz[-1] + 1].tolist() if len(nz) else []


def _fp_gcd(a, b, p):
    while b:
        if len(a) < len(b):
            a, b = b, a
            continue
        _, r = _fp_divmod_np(a, b, p)
        a, b = b, r
    if not a:
        return []
    c = pow(a[-1], -1, p)
    return [(x * c) % p for x in a]


class _FpBarrett:
    """Reduction modulo a fixed monic prime-field polynomial via the Newton
    inverse of its reversal; mulmod costs three packed products."""

    def __init__(self, g, p):
        self.p = p
        self.g = list(g)
        self.n = len(g) - 1
        self._rev = list(reversed(g))
        self.inv = self._inv_series(self._rev, max(self.n, 1))

    def _inv_series(self, h, k):
        p = self.p
        inv = [pow(h[0], -1, p)]
        prec = 1
        while prec < k:
            prec = min(2 * prec, k)
            t = _fp_mul(inv, h[:prec], p)[:prec]
            t = [(-c) % p for c in t]
            t[0] = (t[0] + 2) % p
            inv = _fp_mul(inv, t, p)[:prec]
            inv += [0] * (prec - len(inv))
        return inv

    def reduce(self, a):
        p, n = self.p, self.n
        while a and a[-1] == 0:
            a.pop()
        if len(a) <= n:
            return a
        da = len(a) - 1
        k = da - n + 1
        if k > len(self.inv):
            self.inv = self._inv_series(self._rev, k)
        rev_a = list(reversed(a))
        qrev = _fp_mul(rev_a[:k], self.inv[:k], p)[:k]
        qrev += [0] * (k - len(qrev))
        q = list(reversed(qrev))
        qg = _fp_mul(q, self.g, p)
        qg += [0] * (n - len(qg))
        r = [(x - y) % p for x, y in zip(a[:n], qg[:n])]
        while r and r[-1] == 0:
            r.pop()
        return r

    def mulmod(self, a, b):
        if not a or not b:
            return []
        return self.reduce(_fp_mul(a, b, self.p))


class PolyMod:
    """Arithmetic modulo a fixed monic polynomial over a GF."""

    def __init__(self, g, F):
        self.F = F
        self.g = pnorm(g, F)
        if not self.g or self.g[-1] != F.one:
            raise ValueError("monic modulus expected")
        self.deg = pdeg(self.g)
        self._fast = F.f == 1 and self.deg >= _FAST_DEGREE
        self._barrett = _FpBarrett(self.g, F.p) if self._fast else None

    def mulmod(self, a, b):
        if self._fast:
            return self._barrett.mulmod(a, b)
        prod = pmul(a, b, self.F)
        _, r = pdivmod(prod, self.g, self.F)
        return r

    def reduce(self, a):
        if self._fast:
            return self._barrett.reduce(list(a))
        _, r = pdivmod(a, self.g, self.F)
        return r

    def powmod(self, a, e):
        out = [self.F.one]
        base = self.reduce(list(a))
        while e:
            if e & 1:
                out = self.mulmod(out, base)
            base = self.mulmod(base, base)
            e >>= 1
        return out

    def qth_power(self, a):
        """a^q mod g where q = |field|."""
        out = a
        for _ in range(self.F.f):
            out = self.powmod(out, self.F.p)
        return out


# ---------------------------------------------------------------------------
# irreducibility, factorization


def _derived_rng(F, g, salt=b""):
    key = repr((F.p, F.modulus, tuple(F.to_index(c) for c in g))).encode() + salt
    return random.Random(zlib.crc32(key))


def is_irreducible(g, F):
    """Irreducibility over F, Rabin-style with a cheap low-degree prescan."""
    g = pnorm(g, F)
    n = pdeg(g)
    if n <= 0:
        return False
    if n == 1:
        return True
    if F.is_zero(g[0]):
        return False
    pm = PolyMod(pmonic(g, F), F)
    x = x_poly(F)
    needed = {n // ell for ell in _prime_divisors(n)}
    u = x
    prescan = min(20, n // 2)
    for j in range(1, n + 1):
        u = pm.qth_power(u)
        if j <= prescan or j in needed:
            if j < n and pdeg(pgcd(psub(u, x, F), pm.g, F)) > 0:
                return False
    return pnorm(psub(u, x, F), F) == []


def degree_scan_certificate(g, F):
    """Full factor-degree scan: gcd(X^(q^j) - X, g) for every j <= deg/2.

    Returns (True, checked_js) when all gcds are trivial (g irreducible), or
    (False, witness_factor) with a proper monic irreducible factor otherwise.
    """
    g = pnorm(g, F)
    n = pdeg(g)
    if n <= 0:
        raise ValueError("nonconstant polynomial expected")
    if n == 1:
        return True, []
    pm = PolyMod(pmonic(g, F), F)
    x = x_poly(F)
    u = x
    checked = []
    for j in range(1, n // 2 + 1):
        u = pm.qth_power(u)
        d = pgcd(psub(u, x, F), pm.g, F)
        if pdeg(d) > 0:
            factors = equal_degree_factor(d, j, F, _derived_rng(F, g, b"witness"))
            return False, min(factors, key=lambda h: tuple(F.to_index(c) for c in h))
        checked.append(j)
    return True, checked


def _prime_divisors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def equal_degree_factor(h, j, F, rng):
    """Split a squarefree product of degree-j irreducibles (Cantor-Zassenhaus)."""
    h = pmonic(h, F)
    n = pdeg(h)
    if n == j:
        return [h]
    pm = PolyMod(h, F)
    while True:
        t = [F.from_index(rng.randrange(F.q)) for _ in range(n)]
        t = pnorm(t, F)
        if pdeg(t) < 1:
            continue
        if F.p == 2:
            s = []
            u = pm.reduce(list(t))
            for _ in range(j * F.f):
                s = padd(s, u, F)
                u = pm.mulmod(u, u)
        else:
            e = (F.q ** j - 1) // 2
            s = psub(pm.powmod(t, e), [F.one], F)
        d = pgcd(s, h, F)
        if 0 < pdeg(d) < n:
            return sorted(
                equal_degree_factor(d, j, F, rng) + equal_degree_factor(pdivmod(h, d, F)[0], j, F, rng),
                key=lambda f: tuple(F.to_index(c) for c in f),
            )


def _pth_root_poly(g, F):
    """For g with vanishing derivative, the h with h(X)^p = g(X)."""
    p = F.p
    out = []
    for i in range(0, len(g), p):
        c = g[i]
        # p-th root in F_q is the (q/p)-th power
        out.append(F.pow_(c, F.q // p))
    return pnorm(out, F)


def factor_monic(g, F):
    """Full factorization of a monic polynomial into (irreducible, exponent)
    pairs, sorted by (degree, coefficient indices) for determinism."""
    g = pnorm(g, F)
    if not g or g[-1] != F.one:
        raise ValueError("monic polynomial expected")
    distinct = [list(f) for f in _distinct_irreducible_factors(g, F)]
    out = []
    for f in sorted(distinct, key=lambda f: (pdeg(f), tuple(F.to_index(c) for c in f))):
        e = 0
        cur = g
        while True:
            q, r = pdivmod(cur, f, F)
            if r:
                break
            e += 1
            cur = q
        if e:
            out.append((f, e))
    total = sum(pdeg(f) * e for f, e in out)
    if total != pdeg(g):
        raise InvariantError("factorization degrees do not add up")
    return out


def _distinct_irreducible_factors(g, F):
    g = pmonic(g, F)
    if pdeg(g) <= 0:
        return set()
    gp = pderiv(g, F)
    if not gp:
        return _distinct_irreducible_factors(_pth_root_poly(g, F), F)
    d = pgcd(g, gp, F)
    w, _ = pdivmod(g, d, F)
    out = {tuple(f) for f in _split_squarefree(w, F)}
    if pdeg(d) > 0:
        out |= _distinct_irreducible_factors(d, F)
    return out


def _split_squarefree(w, F):
    """Irreducible factors of a squarefree monic w (distinct-degree then
    equal-degree splitting)."""
    w = pmonic(w, F)
    if pdeg(w) <= 0:
        return []
    out = []
    pm = PolyMod(w, F)
    x = x_poly(F)
    u = x
    v = w
    j = 0
    while pdeg(v) >= 2 * (j + 1):
        j += 1
        u = pm.qth_power(u)
        ured = pdivmod(u, v, F)[1]
        d = pgcd(psub(ured, x, F), v, F)
        if pdeg(d) > 0:
            out.extend(equal_degree_factor(d, j, F, _derived_rng(F, w, b"ddf%d" % j)))
            v, _ = pdivmod(v, d, F)
    if pdeg(v) > 0:
        out.append(v)
    return out


def find_irreducible(deg, F, rng):
    """Random monic irreducible of the given degree (density ~ 1/deg)."""
    if deg == 1:
        return [F.one, F.one]
    while True:
        cand = [F.from_index(rng.randrange(F.q)) for _ in range(deg)] + [F.one]
        if F.is_zero(cand[0]):
            continue
        if is_irreducible(cand, F):
            return cand


def smallest_irreducible(deg, F):
    """Deterministically smallest monic irreducible of the given degree."""
    for idx in range(F.q ** deg):
        coeffs = []
        i = idx
        for _ in range(deg):
            i, r = divmod(i, F.q)
            coeffs.append(F.from_index(r))
        cand = coeffs + [F.one]
        if not F.is_zero(cand[0]) and is_irreducible(cand, F):
            return cand
    raise InvariantError("no irreducible found")
