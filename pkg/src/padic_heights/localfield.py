"""Finite-precision arithmetic in local field towers over Q_p.

A field is an unramified step of degree f (monic integer lift of an
irreducible polynomial over F_p) followed by a totally ramified step of
degree e (an Eisenstein polynomial over the unramified subring).  Elements
are stored as e coordinates over the unramified subring, each a vector of f
integers modulo p^M; this represents the maximal-ideal-adic expansion to
absolute precision e*M uniformizer powers.

Precision semantics: every stored element IS an exact element of the ring of
integers (the canonical representative of its coordinate data), and all
valuation statements are computed exactly about that representative modulo
P^(e*M).  The construction pads M beyond the requested precision N, so
certified statements only ever compare against thresholds <= N; when a
decision would need digits beyond the stored window, a PrecisionError is
raised instead of guessing.
"""

from dataclasses import dataclass

from . import fpoly
from .errors import (
    HenselConditionError,
    InvariantError,
    NotGaloisError,
    PrecisionError,
    UnsupportedError,
)

_PAD_DIGITS = 8


class LocalField:
    def __init__(self, p, unram_poly=None, eisenstein_poly=None, precision=32):
        if precision < 1:
            raise ValueError("precision must be >= 1")
        self.p = p
        self.N = precision
        # unramified step
        if unram_poly is None:
            self.f = 1
            self.unram = None
        else:
            u = [int(c) for c in unram_poly]
            while u and u[-1] == 0:
                u.pop()
            if len(u) < 3 or u[-1] != 1:
                raise ValueError("unramified polynomial must be monic of degree >= 2")
            if not fpoly.is_irreducible([c % p for c in u], fpoly.GF(p)):
                raise ValueError("unramified polynomial is reducible modulo %d" % p)
            self.f = len(u) - 1
            self.unram = tuple(c % p for c in u)
        self.residue_field = fpoly.GF(p) if self.f == 1 else fpoly.GF(p, list(self.unram))
        self.q_res = p ** self.f
        # ramified step
        if eisenstein_poly is None:
            self.e = 1
            self.eis = None
        else:
            eis = [self._ucoord_of_input(c) for c in eisenstein_poly]
            while eis and all(x == 0 for x in eis[-1]):
                eis.pop()
            if len(eis) < 3:
                raise ValueError("Eisenstein polynomial must have degree >= 2")
            self.e = len(eis) - 1
            self.eis = eis
        self.M = -(-precision // self.e) + _PAD_DIGITS
        self.pM = p ** self.M
        self.N_int = self.e * self.M
        self.ef = self.e * self.f
        self._setup_unram_reduction()
        if self.eis is not None:
            self.eis = tuple(tuple(c % self.pM for c in u) for u in self.eis)
            self._validate_eisenstein()
            self._setup_pi_reduction()
        self._teich_cache = {}
        self._alpha = None
        self._alpha_inv_matrix = None
        self._prime_base = None

    # -- construction helpers -------------------------------------------------

    def _ucoord_of_input(self, c):
        if isinstance(c, int):
            return tuple([c] + [0] * (self.f - 1))
        c = tuple(int(x) for x in c)
        if len(c) != self.f:
            raise ValueError("Eisenstein coefficient has wrong unramified dimension")
        return c

    def _setup_unram_reduction(self):
        # rows expressing t^(f+i) over 1..t^(f-1), modulo pM
        self._tred = []
        if self.f == 1:
            return
        cur = [(-c) % self.pM for c in self.unram[:-1]]
        for _ in range(self.f - 1):
            self._tred.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                base = self._tred[0]
                cur = [(a + top * b) % self.pM for a, b in zip(cur, base)]

    def _validate_eisenstein(self):
        p = self.p
        for j, c in enumerate(self.eis):
            if j == self.e:
                if c != self._u_one():
                    raise ValueError("Eisenstein polynomial must be monic")
            elif any(x % p for x in c):
                raise ValueError("non-Eisenstein ramified polynomial (coefficient %d is a unit)" % j)
        c0 = self.eis[0]
        shifted = tuple(x // p for x in c0)
        if all(x % p == 0 for x in shifted):
            raise ValueError("non-Eisenstein ramified polynomial (constant term valuation > 1)")
        self._u0_unit = shifted  # constant term / p, a unit of the unramified subring

    def _setup_pi_reduction(self):
        # pi^(e+i) expressed over pi^0..pi^(e-1), as vectors of U-coords
        e = self.e
        neg = [tuple((-x) % self.pM for x in c) for c in self.eis[:e]]
        rows = [neg]
        for _ in range(e - 2):
            prev = rows[-1]
            cur = [self._u_zero()] + prev[:-1]
            top = prev[-1]
            if any(top):
                base = rows[0]
                cur = [self._u_add(a, self._u_mul(top, b)) for a, b in zip(cur, base)]
            rows.append(cur)
        self._pired = rows
        # p/pi as an element: -u0_inv * (a_1 + a_2 pi + ... + pi^(e-1))
        u0_inv = self._u_inv(self._u0_unit)
        coords = []
        for j in range(1, e):
            coords.append(self._u_mul(tuple((-x) % self.pM for x in u0_inv), self.eis[j]))
        coords.append(tuple((-x) % self.pM for x in u0_inv))
        self._p_over_pi = tuple(coords)

    # -- unramified subring kernels (tuples of f ints mod pM) -----------------

    def _u_zero(self):
        return tuple([0] * self.f)

    def _u_one(self):
        return tuple([1] + [0] * (self.f - 1))

    def _u_add(self, a, b):
        pM = self.pM
        return tuple((x + y) % pM for x, y in zip(a, b))

    def _u_sub(self, a, b):
        pM = self.pM
        return tuple((x - y) % pM for x, y in zip(a, b))

    def _u_mul(self, a, b):
        pM = self.pM
        f = self.f
        if f == 1:
            return ((a[0] * b[0]) % pM,)
        conv = [0] * (2 * f - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    conv[i + j] += x * y
        out = [c % pM for c in conv[:f]]
        for i in range(f, 2 * f - 1):
            c = conv[i] % pM
            if c:
                row = self._tred[i - f]
                out = [(o + c * r) % pM for o, r in zip(out, row)]
        return tuple(out)

    def _u_val(self, a):
        best = None
        for x in a:
            if x == 0:
                continue
            v = 0
            p = self.p
            while x % p == 0:
                x //= p
                v += 1
            if best is None or v < best:
                best = v
                if best == 0:
                    return 0
        return best

    def _u_inv(self, a):
        if self._u_val(a) != 0:
            raise ZeroDivisionError("inverse of a non-unit")
        F = self.residue_field
        res = self._u_residue(a)
        y = self._u_lift(F.inv(res))
        steps = max(1, (self.M - 1).bit_length() + 1)
        two = tuple([2] + [0] * (self.f - 1))
        for _ in range(steps):
            t = self._u_sub(two, self._u_mul(a, y))
            y = self._u_mul(y, t)
        if self._u_mul(a, y) != self._u_one():
            raise InvariantError("unit inversion failed")
        return y

    def _u_residue(self, a):
        p = self.p
        if self.f == 1:
            return a[0] % p
        return tuple(x % p for x in a)

    def _u_lift(self, r):
        if self.f == 1:
            return (int(r) % self.p,)
        return tuple(int(x) % self.p for x in r)

    # -- raw element kernels ---------------------------------------------------
    # raw layout: int (e == f == 1), tuple of f ints (e == 1), or tuple of e
    # U-coords (e > 1).

    @property
    def kind(self):
        if self.e == 1 and self.f == 1:
            return "zp"
        return "unram" if self.e == 1 else "general"

    def rzero(self):
        if self.e == 1 and self.f == 1:
            return 0
        if self.e == 1:
            return self._u_zero()
        return tuple(self._u_zero() for _ in range(self.e))

    def rone(self):
        return self.rfrom_int(1)

    def rfrom_int(self, n):
        n = n % self.pM
        if self.e == 1 and self.f == 1:
            return n
        if self.e == 1:
            return tuple([n] + [0] * (self.f - 1))
        return tuple([tuple([n] + [0] * (self.f - 1))] + [self._u_zero()] * (self.e - 1))

    def radd(self, a, b):
        if self.e == 1 and self.f == 1:
            return (a + b) % self.pM
        if self.e == 1:
            return self._u_add(a, b)
        return tuple(self._u_add(x, y) for x, y in zip(a, b))

    def rsub(self, a, b):
        if self.e == 1 and self.f == 1:
            return (a - b) % self.pM
        if self.e == 1:
            return self._u_sub(a, b)
        return tuple(self._u_sub(x, y) for x, y in zip(a, b))

    def rneg(self, a):
        return self.rsub(self.rzero(), a)

    def rsmul(self, n, a):
        """Scale by a plain integer."""
        pM = self.pM
        n %= pM
        if self.e == 1 and self.f == 1:
            return (n * a) % pM
        if self.e == 1:
            return tuple((n * x) % pM for x in a)
        return tuple(tuple((n * x) % pM for x in u) for u in a)

    def rmul(self, a, b):
        if self.e == 1 and self.f == 1:
            return (a * b) % self.pM
        if self.e == 1:
            return self._u_mul(a, b)
        e = self.e
        conv = [self._u_zero()] * (2 * e - 1)
        for i, x in enumerate(a):
            if any(x):
                for j, y in enumerate(b):
                    conv[i + j] = self._u_add(conv[i + j], self._u_mul(x, y))
        out = list(conv[:e])
        for i in range(e, 2 * e - 1):
            c = conv[i]
            if any(c):
                row = self._pired[i - e]
                out = [self._u_add(o, self._u_mul(c, r)) for o, r in zip(out, row)]
        return tuple(out)

    def rval(self, a):
        """Exact valuation of the stored representative, or None when the
        representative is 0 modulo P^N_int ("precision zero")."""
        if self.e == 1 and self.f == 1:
            if a == 0:
                return None
            v = 0
            p = self.p
            while a % p == 0:
                a //= p
                v += 1
            return v
        if self.e == 1:
            return self._u_val(a)
        best = None
        for j, c in enumerate(a):
            vu = self._u_val(c)
            if vu is None:
                continue
            v = self.e * vu + j
            if best is None or v < best:
                best = v
        return best

    def ris_zero(self, a):
        return self.rval(a) is None

    def rinv(self, a):
        if self.e == 1:
            if self.f == 1:
                if a % self.p == 0:
                    raise ZeroDivisionError("inverse of a non-unit")
                return pow(a, -1, self.pM)
            return self._u_inv(a)
        if self.rval(a) != 0:
            raise ZeroDivisionError("inverse of a non-unit")
        F = self.residue_field
        y = self.rlift(F.inv(self.rresidue(a)))
        steps = max(1, (self.N_int - 1).bit_length() + 1)
        two = self.rfrom_int(2)
        for _ in range(steps):
            y = self.rmul(y, self.rsub(two, self.rmul(a, y)))
        if self.rmul(a, y) != self.rone():
            raise InvariantError("unit inversion failed")
        return y

    def rdiv_pi(self, a, s=1):
        """Exact division by the uniformizer to the s-th power."""
        for _ in range(s):
            a = self._div_pi_once(a)
        return a

    def _div_pi_once(self, a):
        p = self.p
        if self.e == 1:
            if self.f == 1:
                if a % p:
                    raise InvariantError("element not divisible by the uniformizer")
                return a // p
            if any(x % p for x in a):
                raise InvariantError("element not divisible by the uniformizer")
            return tuple(x // p for x in a)
        c0 = a[0]
        if any(x % p for x in c0):
            raise InvariantError("element not divisible by the uniformizer")
        c0p = tuple(x // p for x in c0)
        out = list(a[1:]) + [self._u_zero()]
        if any(c0p):
            for j in range(self.e):
                out[j] = self._u_add(out[j], self._u_mul(c0p, self._p_over_pi[j]))
        return tuple(out)

    def rdiv(self, a, b):
        """a/b for v(a) >= v(b), b nonzero."""
        vb = self.rval(b)
        if vb is None:
            raise ZeroDivisionError("division by (precision) zero")
        if vb:
            a = self.rdiv_pi(a, vb)
            b = self.rdiv_pi(b, vb)
        return self.rmul(a, self.rinv(b))

    def rresidue(self, a):
        if self.e == 1 and self.f == 1:
            return a % self.p
        if self.e == 1:
            return self._u_residue(a)
        return self._u_residue(a[0])

    def rlift(self, r):
        """Canonical transversal digit lifting a residue-field element."""
        if self.e == 1 and self.f == 1:
            return int(r) % self.p
        u = self._u_lift(r)
        if self.e == 1:
            return u
        return tuple([u] + [self._u_zero()] * (self.e - 1))

    def runiformizer(self):
        if self.e == 1:
            return self.rfrom_int(self.p)
        return tuple([self._u_zero(), self._u_one()] + [self._u_zero()] * (self.e - 2))

    def rgen_t(self):
        """The unramified generator (1 when f = 1)."""
        if self.f == 1:
            return self.rone()
        u = tuple([0, 1] + [0] * (self.f - 2))
        if self.e == 1:
            return u
        return tuple([u] + [self._u_zero()] * (self.e - 1))

    def rdigits(self, a, count):
        """First `count` transversal digits of the uniformizer expansion."""
        if count > self.N_int:
            raise PrecisionError("digit request beyond stored precision")
        out = []
        for _ in range(count):
            d = self.rresidue(a)
            out.append(d)
            a = self._div_pi_once(self.rsub(a, self.rlift(d)))
        return out

    def rfrom_digits(self, digits):
        pi = self.runiformizer()
        acc = self.rzero()
        for d in reversed(digits):
            acc = self.radd(self.rmul(acc, pi), self.rlift(d))
        return acc

    def rdigit_indices(self, a, count):
        F = self.residue_field
        return [F.to_index(d) for d in self.rdigits(a, count)]

    def rfrom_digit_indices(self, idx):
        F = self.residue_field
        return self.rfrom_digits([F.from_index(i) for i in idx])

    def rcanon(self, a, k=None):
        """Hashable canonical form of a modulo P^k (defaults to N_int)."""
        k = self.N_int if k is None else k
        return tuple(self.rdigit_indices(a, k))

    def teichmuller(self, r):
        """Multiplicative lift of a residue-field element."""
        key = r if not isinstance(r, tuple) else tuple(r)
        if key in self._teich_cache:
            return self._teich_cache[key]
        F = self.residue_field
        if F.is_zero(r):
            return self.rzero()
        x = self.rlift(r)
        q = self.q_res
        for _ in range(self.N_int + 4):
            nxt = self.rpow(x, q)
            if nxt == x:
                break
            x = nxt
        if self.rpow(x, q) != x:
            raise PrecisionError("Teichmuller iteration did not stabilize")
        self._teich_cache[key] = x
        return x

    def rpow(self, a, n):
        out = self.rone()
        base = a
        while n:
            if n & 1:
                out = self.rmul(out, base)
            base = self.rmul(base, base)
            n >>= 1
        return out

    # -- flattened vectors for linear algebra ---------------------------------

    def rflatten(self, a):
        if self.e == 1 and self.f == 1:
            return [a]
        if self.e == 1:
            return list(a)
        out = []
        for c in a:
            out.extend(c)
        return out

    def runflatten(self, vec):
        if self.e == 1 and self.f == 1:
            return vec[0] % self.pM
        if self.e == 1:
            return tuple(x % self.pM for x in vec)
        f = self.f
        return tuple(tuple(x % self.pM for x in vec[j * f : (j + 1) * f]) for j in range(self.e))

    def basis_raws(self):
        """t^l * pi^j in flattening order."""
        out = []
        t = self.rgen_t()
        pi = self.runiformizer() if self.e > 1 else None
        tp = [self.rone()]
        for _ in range(self.f - 1):
            tp.append(self.rmul(tp[-1], t))
        if self.e == 1:
            return tp
        pj = self.rone()
        for j in range(self.e):
            for l in range(self.f):
                out.append(self.rmul(pj, tp[l]))
            pj = self.rmul(pj, pi)
        return out

    # -- primitive element and base-field machinery ----------------------------

    def primitive_element(self):
        """Unit generator of the whole tower over Z_p, with its power-basis
        transform verified unimodular."""
        if self._alpha is not None:
            return self._alpha
        candidates = []
        t = self.rgen_t()
        if self.e == 1:
            candidates.append(t)
        elif self.f == 1:
            candidates.append(self.radd(self.rone(), self.runiformizer()))
        else:
            candidates.append(self.radd(t, self.runiformizer()))
            candidates.append(self.radd(self.radd(t, self.runiformizer()), self.rone()))
        from . import linalg

        for alpha in candidates:
            cols = []
            power = self.rone()
            for _ in range(self.ef):
                cols.append(self.rflatten(power))
                power = self.rmul(power, alpha)
            mat = [[cols[k][i] for k in range(self.ef)] for i in range(self.ef)]
            try:
                inv = linalg.matinv_mod(mat, self.pM)
            except InvariantError:
                continue
            self._alpha = alpha
            self._alpha_inv_matrix = inv
            return alpha
        raise UnsupportedError("no verified primitive element for this tower")

    def alpha_coordinates(self, a):
        """Coordinates of a over the power basis of the primitive element."""
        from . import linalg

        self.primitive_element()
        return linalg.mat_mul_vec_mod(self._alpha_inv_matrix, self.rflatten(a), self.pM)

    def prime_base(self):
        """The trivial tower Q_p at matching stored precision."""
        if self.e == 1 and self.f == 1:
            return self
        if self._prime_base is None:
            base = LocalField(self.p, precision=max(1, self.M - _PAD_DIGITS))
            while base.pM < self.pM:
                base = LocalField(self.p, precision=base.N + 1)
            self._prime_base = base
        return self._prime_base

    def element(self, raw):
        return LocalElem(self, raw)

    def from_int(self, n):
        return LocalElem(self, self.rfrom_int(n))

    def __repr__(self):
        return "LocalField(p=%d, e=%d, f=%d, N=%d)" % (self.p, self.e, self.f, self.N)


@dataclass(frozen=True)
class LocalElem:
    field: LocalField
    raw: object

    def _chk(self, other):
        if self.field is not other.field:
            raise ValueError("elements of different local fields")

    def __add__(self, other):
        self._chk(other)
        return LocalElem(self.field, self.field.radd(self.raw, other.raw))

    def __sub__(self, other):
        self._chk(other)
        return LocalElem(self.field, self.field.rsub(self.raw, other.raw))

    def __neg__(self):
        return LocalElem(self.field, self.field.rneg(self.raw))

    def __mul__(self, other):
        if isinstance(other, int):
            return LocalElem(self.field, self.field.rsmul(other, self.raw))
        self._chk(other)
        return LocalElem(self.field, self.field.rmul(self.raw, other.raw))

    __rmul__ = __mul__

    def val(self):
        return self.field.rval(self.raw)

    def inverse(self):
        return LocalElem(self.field, self.field.rinv(self.raw))

    def digits(self, count):
        return self.field.rdigits(self.raw, count)

    def __eq__(self, other):
        return isinstance(other, LocalElem) and self.field is other.field and self.raw == other.raw

    def __hash__(self):
        return hash((id(self.field), self.raw))

    def __repr__(self):
        return "LocalElem(%r)" % (self.raw,)


def lf_init(p, unram_poly=None, eisenstein_poly=None, precision=32):
    """Build a local field tower; arithmetic is exact modulo P^(e*M)."""
    return LocalField(p, unram_poly, eisenstein_poly, precision)


def relative_ef(E, F):
    """Relative (e, f) for the supported pairs: F is E itself or Q_p."""
    if F is E:
        return 1, 1
    if F.e == 1 and F.f == 1 and F.p == E.p:
        return E.e, E.f
    raise UnsupportedError("relative towers are supported over Q_p or trivially")


# ---------------------------------------------------------------------------
# polynomials over a local field (raw coefficient lists, ascending)


def epoly_eval(E, coeffs, x):
    rmul, radd = E.rmul, E.radd
    acc = E.rzero()
    for c in reversed(coeffs):
        acc = radd(rmul(acc, x), c)
    return acc


def epoly_derivative(E, coeffs):
    return [E.rsmul(i, coeffs[i]) for i in range(1, len(coeffs))]


def epoly_from_int_coeffs(E, coeffs):
    return [E.rfrom_int(c) for c in coeffs]


def epoly_product_of_linear(E, roots):
    """Monic product of (X - r) over the given raw roots."""
    rmul, rsub = E.rmul, E.rsub
    out = [E.rone()]
    for r in roots:
        nxt = [E.rzero()] * (len(out) + 1)
        for i, c in enumerate(out):
            nxt[i + 1] = E.radd(nxt[i + 1], c)
            nxt[i] = rsub(nxt[i], rmul(c, r))
        out = nxt
    return out


def taylor_prefix(E, coeffs, x0, count):
    """First `count` coefficients of g(X + x0) (synthetic division passes)."""
    rmul, radd = E.rmul, E.radd
    b = list(coeffs)
    out = []
    for _ in range(min(count, len(coeffs))):
        # divide b by (X - x0): quotient q, remainder = next Taylor coefficient
        q = [E.rzero()] * (len(b) - 1)
        acc = b[-1]
        for i in range(len(b) - 2, -1, -1):
            q[i] = acc
            acc = radd(rmul(acc, x0), b[i])
        out.append(acc)
        b = q
        if not b:
            break
    return out


# ---------------------------------------------------------------------------
# root finding


def _newton_simple(E, coeffs, dcoeffs, x0):
    """Newton iteration from a point whose derivative is a unit."""
    y = x0
    cap = max(4, (E.N_int.bit_length()) + 4)
    for _ in range(cap):
        fy = epoly_eval(E, coeffs, y)
        if E.rval(fy) is None:
            return y
        fpy = epoly_eval(E, dcoeffs, y)
        y = E.rsub(y, E.rdiv(fy, fpy))
    fy = epoly_eval(E, coeffs, y)
    if E.rval(fy) is None:
        return y
    raise PrecisionError("Newton iteration did not reach precision zero")


def integral_roots(E, coeffs, depth=None):
    """All roots of the polynomial in the ring of integers, refined to the
    highest residual the stored window supports; roots distinct modulo P^N
    are returned once."""
    if depth is None:
        depth = E.N_int
    dcoeffs = epoly_derivative(E, coeffs)
    found = []
    seen = set()
    for root in _roots_rec(E, list(coeffs), depth):
        root = _newton_polish(E, coeffs, dcoeffs, root)
        key = E.rcanon(root, E.N)
        if key not in seen:
            seen.add(key)
            found.append(root)
    return found


def _newton_polish(E, coeffs, dcoeffs, y, rounds=8):
    """Push the residual of an approximate root as high as the stored window
    allows; divisions by the uniformizer make the top digits of deep branch
    recursions drift, and a few corrector steps re-anchor them."""
    best = E.rval(epoly_eval(E, coeffs, y))
    for _ in range(rounds):
        if best is None:
            return y
        fpy = epoly_eval(E, dcoeffs, y)
        a = E.rval(fpy)
        if a is None or best <= 2 * a:
            return y
        y2 = E.rsub(y, E.rdiv(epoly_eval(E, coeffs, y), fpy))
        v2 = E.rval(epoly_eval(E, coeffs, y2))
        if v2 is not None and v2 <= best:
            return y
        y, best = y2, v2
    return y


def _roots_rec(E, coeffs, depth):
    if depth < 0:
        raise PrecisionError("root search recursion exhausted; increase precision")
    if all(E.rval(c) is None for c in coeffs):
        raise PrecisionError("polynomial vanishes at stored precision")
    out = []
    dcoeffs = epoly_derivative(E, coeffs)
    F = E.residue_field
    pi = E.runiformizer()
    for ridx in range(F.q):
        r = E.rlift(F.from_index(ridx))
        v0 = E.rval(epoly_eval(E, coeffs, r))
        if v0 == 0:
            continue
        v1 = E.rval(epoly_eval(E, dcoeffs, r))
        if v1 == 0:
            out.append(_newton_simple(E, coeffs, dcoeffs, r))
            continue
        # branch: substitute X = r + pi*Y and strip the content
        shifted = taylor_prefix(E, coeffs, r, len(coeffs))
        scaled = []
        power = E.rone()
        for c in shifted:
            scaled.append(E.rmul(c, power))
            power = E.rmul(power, pi)
        vals = [E.rval(c) for c in scaled]
        if all(v is None for v in vals):
            raise PrecisionError("cannot normalize shifted polynomial")
        s = min(v for v in vals if v is not None)
        normalized = [E.rdiv_pi(c, s) if E.rval(c) is not None else E.rzero() for c in scaled]
        for sub in _roots_rec(E, normalized, depth - 1):
            out.append(E.radd(r, E.rmul(pi, sub)))
    return out


# ---------------------------------------------------------------------------
# valuation-criterion condition checks and root lifting


@dataclass(frozen=True)
class ConditionReport:
    """Exact valuation data for the three lifting hypotheses at one point."""

    value_val: object  # v(g(x0)); None means >= stored precision
    deriv_val: object  # v(g'(x0))
    min_slack: object  # min over nu >= 2 of v(g^(nu)(x0)/nu!) - (a - (nu-1) b)
    a: int
    b: int

    def holds(self):
        cond1 = self.value_val is None or self.value_val > self.a + self.b
        cond2 = self.deriv_val is not None and self.deriv_val <= self.a
        cond3 = self.min_slack is None or self.min_slack >= 0
        return cond1 and cond2 and cond3

    def failing_condition(self):
        if not (self.value_val is None or self.value_val > self.a + self.b):
            return 1
        if not (self.deriv_val is not None and self.deriv_val <= self.a):
            return 2
        if not (self.min_slack is None or self.min_slack >= 0):
            return 3
        return None


def condition_report(E, coeffs, x0, a, b):
    """Check the lifting hypotheses for the polynomial at x0 with margins a, b.

    The higher-derivative scan stops as soon as the remaining terms are
    forced nonnegative and above the current minimum: Taylor coefficients of
    an integral polynomial at an integral point are integral, so their
    valuations are >= 0 while the threshold a - (nu-1) b keeps dropping.  The
    reported minimum is exact over all nu in [2, deg].
    """
    deg = len(coeffs) - 1
    if a + b >= E.N_int:
        raise PrecisionError("a + b exceeds stored precision")
    t01 = taylor_prefix(E, coeffs, x0, 2)
    value_val = E.rval(t01[0])
    deriv_val = E.rval(t01[1]) if len(t01) > 1 else None
    if deriv_val is None:
        raise PrecisionError("derivative valuation undecidable at stored precision")
    min_slack = None
    nu = 1
    b_coeffs = _taylor_state(E, coeffs, x0, 2)
    while nu < deg:
        nu += 1
        floor_rest = (nu - 1) * b - a
        if floor_rest >= 0 and (min_slack is not None and floor_rest > min_slack):
            break
        tnu, b_coeffs = _taylor_step(E, b_coeffs, x0)
        v = E.rval(tnu)
        slack = (E.N_int if v is None else v) - (a - (nu - 1) * b)
        if min_slack is None or slack < min_slack:
            min_slack = slack
    return ConditionReport(value_val=value_val, deriv_val=deriv_val, min_slack=min_slack, a=a, b=b)


def _taylor_state(E, coeffs, x0, skip):
    b = list(coeffs)
    for _ in range(skip):
        _, b = _taylor_step(E, b, x0)
    return b


def _taylor_step(E, b, x0):
    if not b:
        return E.rzero(), []
    rmul, radd = E.rmul, E.radd
    q = [E.rzero()] * (len(b) - 1)
    acc = b[-1]
    for i in range(len(b) - 2, -1, -1):
        q[i] = acc
        acc = radd(rmul(acc, x0), b[i])
    return acc, q


def hensel_root(E, coeffs, x0, a, b):
    """Root of the polynomial near x0 under the valuation-criterion hypotheses.

    Verifies the three hypotheses exactly, then runs the Newton iteration for
    the rescaled polynomial (the substitution X -> (X - x0)/beta with
    v(beta) = b turns x0 into a simple approximate zero; the iterate sequence
    pulled back to the original coordinates is y -> y - g(y)/g'(y)).

    Returns y with v(g(y)) >= N and v(y - x0) > b.
    """
    report = condition_report(E, coeffs, x0, a, b)
    bad = report.failing_condition()
    if bad is not None:
        raise HenselConditionError(bad, "lifting hypothesis (%d) fails at the supplied point" % bad)
    dcoeffs = epoly_derivative(E, coeffs)
    y = x0
    cap = max(1, E.N_int).bit_length() + 4
    for _ in range(cap):
        fy = epoly_eval(E, coeffs, y)
        v = E.rval(fy)
        if v is None or v >= E.N:
            break
        fpy = epoly_eval(E, dcoeffs, y)
        va = E.rval(fpy)
        if va is None:
            raise PrecisionError("derivative lost to precision during lifting")
        y = E.rsub(y, E.rdiv(fy, fpy))
    else:
        raise InvariantError("lifting iteration exceeded its budget")
    diff_val = E.rval(E.rsub(y, x0))
    if not (diff_val is None or diff_val > b):
        raise InvariantError("lifted root drifted out of its basin")
    return y


# ---------------------------------------------------------------------------
# Galois action


@dataclass(frozen=True)
class GaloisAction:
    """Automorphism group of E over F, each map stored as an exact matrix on
    the flattened coordinate vectors modulo p^M."""

    field: LocalField
    mats: tuple  # tuple of matrices, each a tuple of row tuples
    table: tuple  # composition table: table[i][j] = index of mats[i] @ mats[j]
    identity: int
    generator_images: tuple  # image of the primitive element under each map

    @property
    def size(self):
        return len(self.mats)

    def apply_raw(self, idx, raw):
        E = self.field
        if self.size == 1:
            return raw
        vec = E.rflatten(raw)
        mat = self.mats[idx]
        out = [sum(m * v for m, v in zip(row, vec)) % E.pM for row in mat]
        return E.runflatten(out)

    def compose(self, i, j):
        return self.table[i][j]

    def non_identity(self):
        return [i for i in range(self.size) if i != self.identity]


def trivial_galois_action(E):
    n = E.ef
    ident = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    return GaloisAction(field=E, mats=(ident,), table=((0,),), identity=0, generator_images=(E.rone(),))


def berkowitz_charpoly(mat, modulus):
    """Characteristic polynomial det(X*I - A) modulo `modulus`, ascending
    coefficients; division-free, so valid over Z/p^M."""
    n = len(mat)
    a = [[x % modulus for x in row] for row in mat]
    # vectors of descending coefficients
    poly = [1 % modulus, (-a[0][0]) % modulus]
    for r in range(1, n):
        m = [row[:r] for row in a[:r]]
        col = [a[i][r] for i in range(r)]
        row = a[r][:r]
        toep = [(-a[r][r]) % modulus]
        w = col[:]
        for _ in range(r):
            toep.append((-sum(x * y for x, y in zip(row, w))) % modulus)
            w = [sum(m[i][j] * w[j] for j in range(r)) % modulus for i in range(r)]
        # multiply: new_poly (length r+2) = Toeplitz(toep) applied to poly
        new_poly = [0] * (r + 2)
        for i in range(r + 2):
            acc = poly[i] if i < len(poly) else 0
            for k in range(1, i + 1):
                if k - 1 < len(toep) and i - k < len(poly):
                    acc += toep[k - 1] * poly[i - k]
            new_poly[i] = acc % modulus
        poly = new_poly
    return list(reversed(poly))


def _mult_matrix(E, raw):
    basis = E.basis_raws()
    cols = [E.rflatten(E.rmul(raw, b)) for b in basis]
    return [[cols[k][i] for k in range(E.ef)] for i in range(E.ef)]


def galois_group(E, F):
    """Automorphisms of E/F, computed by lifting every root of the primitive
    element's characteristic polynomial back into E.

    Raises NotGaloisError when fewer than [E:F] distinct roots lift.
    """
    rel_e, rel_f = relative_ef(E, F)
    if rel_e * rel_f == 1:
        return trivial_galois_action(E)
    alpha = E.primitive_element()
    charpoly = berkowitz_charpoly(_mult_matrix(E, alpha), E.pM)
    coeffs = [E.rfrom_int(c) for c in charpoly]
    try:
        roots = integral_roots(E, coeffs)
    except PrecisionError as exc:
        raise NotGaloisError("not Galois or precision insufficient: %s" % exc)
    if len(roots) != E.ef:
        raise NotGaloisError(
            "not Galois or precision insufficient: %d of %d roots lift" % (len(roots), E.ef)
        )
    # identity first, the others in canonical digit order (compared at the
    # certified precision N; root separations are far below N)
    ident_key = E.rcanon(alpha, E.N)
    keyed = sorted((E.rcanon(r, E.N), r) for r in roots)
    ordered = [r for k, r in keyed if k == ident_key] + [r for k, r in keyed if k != ident_key]
    if len(ordered) != len(roots) or E.rcanon(ordered[0], E.N) != ident_key:
        raise NotGaloisError("primitive element is not among the lifted roots")
    ordered[0] = alpha
    mats = [_automorphism_matrix(E, rho) for rho in ordered]
    n = E.ef
    ident_mat = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    if mats[0] != ident_mat:
        raise InvariantError("identity automorphism malformed")
    for mat in mats:
        one_img = [sum(m * v for m, v in zip(row, E.rflatten(E.rone()))) % E.pM for row in mat]
        if E.runflatten(one_img) != E.rone():
            raise InvariantError("automorphism does not fix 1")
    # automorphisms are keyed by their image of the primitive element at the
    # certified precision; composition closure is checked there as well
    alpha_vec = E.rflatten(alpha)

    def image_key(mat):
        img = [sum(m * v for m, v in zip(row, alpha_vec)) % E.pM for row in mat]
        return E.rcanon(E.runflatten(img), E.N)

    index = {image_key(mat): i for i, mat in enumerate(mats)}
    if len(index) != len(mats):
        raise NotGaloisError("automorphism images collide at this precision")
    table = []
    for i in range(len(mats)):
        rowt = []
        for j in range(len(mats)):
            prod = _matmul_mod(mats[i], mats[j], E.pM)
            key = image_key(prod)
            if key not in index:
                raise NotGaloisError("automorphisms do not close under composition at this precision")
            rowt.append(index[key])
        table.append(tuple(rowt))
    return GaloisAction(
        field=E,
        mats=tuple(mats),
        table=tuple(table),
        identity=0,
        generator_images=tuple(ordered),
    )


def _automorphism_matrix(E, rho):
    """Matrix of the homomorphism sending the primitive element to rho."""
    n = E.ef
    powers = [E.rone()]
    for _ in range(n - 1):
        powers.append(E.rmul(powers[-1], rho))
    cols = []
    for b in E.basis_raws():
        coords = E.alpha_coordinates(b)
        img = E.rzero()
        for c, pw in zip(coords, powers):
            if c:
                img = E.radd(img, E.rsmul(c, pw))
        cols.append(E.rflatten(img))
    return tuple(tuple(cols[k][i] for k in range(n)) for i in range(n))


def _matmul_mod(a, b, modulus):
    n = len(a)
    bt = list(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) % modulus for col in bt) for row in a
    )


def apply_aut(G, idx, x):
    """Apply the idx-th automorphism to a LocalElem (or raw) value."""
    if isinstance(x, LocalElem):
        if x.field is not G.field:
            raise ValueError("element belongs to a different local field")
        return LocalElem(G.field, G.apply_raw(idx, x.raw))
    return G.apply_raw(idx, x)


def residue_enum(E, k):
    """Canonical transversal representatives of O_E modulo P^k, in
    lexicographic digit order."""
    if k > E.N:
        raise PrecisionError("residue level beyond the certified precision")
    F = E.residue_field
    total = F.q ** k
    out = []
    for idx in range(total):
        digits = []
        i = idx
        for _ in range(k):
            i, r = divmod(i, F.q)
            digits.append(F.from_index(r))
        out.append(E.rfrom_digits(digits))
    return out


def f_part(E, F, raw):
    """Coordinates of the value over the base field, certifying membership.

    For F = Q_p the value is written over the power basis of the verified
    primitive element; every non-constant coordinate must vanish at the
    certified precision (modulo p^ceil(N/e)).  Returns the base-field raw.
    """
    if F is E:
        return raw
    relative_ef(E, F)
    m_user = -(-E.N // E.e)
    p_user = E.p ** m_user
    coords = E.alpha_coordinates(raw)
    for k, c in enumerate(coords[1:], start=1):
        if c % p_user:
            v = 0
            cc = c % p_user
            while cc % E.p == 0:
                cc //= E.p
                v += 1
            raise UnsupportedError(
                "not an F-element at current precision (coordinate %d has valuation %d)" % (k, v)
            )
    return coords[0] % min(F.pM, p_user)
