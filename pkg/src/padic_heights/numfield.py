"""Exact arithmetic in a number field K of small degree.

Elements of the ring of integers are integer coordinate vectors over a fixed
integral basis; ideals are row-style HNF lattices over that basis.  The field
is described by a monic integer minimal polynomial; when no integral basis is
supplied the power basis is used (the caller asserts it is maximal).

Everything here is exact except numerical embeddings, which are computed at a
requested binary precision and only ever used for (a) lattice geometry whose
algebraic output is re-verified exactly and (b) absolute-value bounds asserted
with generous analytic slack.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import mpmath

from . import fpoly, intpoly, lattice, linalg
from .errors import InvariantError, UnsupportedError

_EMB_PREC = 256
_SCALE_BITS = 128


class NumberField:
    def __init__(self, min_poly, integral_basis=None):
        min_poly = intpoly.normalize(min_poly)
        if not intpoly.is_monic(min_poly):
            raise ValueError("minimal polynomial must be monic")
        m = intpoly.degree(min_poly)
        if m < 1:
            raise ValueError("minimal polynomial must be nonconstant")
        if m > 1 and not intpoly.is_irreducible_q(min_poly):
            raise ValueError("minimal polynomial is reducible over Q")
        self.min_poly = tuple(min_poly)
        self.degree = m
        if integral_basis is None:
            basis = [[Fraction(1 if i == j else 0) for j in range(m)] for i in range(m)]
        else:
            basis = [[Fraction(c) for c in row] for row in integral_basis]
            if len(basis) != m or any(len(row) != m for row in basis):
                raise ValueError("integral basis must be %d vectors of length %d" % (m, m))
        self.basis = basis
        self._basis_inv = self._invert_basis(basis)
        self.one_coords = tuple(self._to_integral([Fraction(1)] + [Fraction(0)] * (m - 1)))
        self._mult_table = self._build_mult_table()
        self._power_sums = self._newton_power_sums(2 * m)
        self.disc = self._discriminant()
        self.min_poly_disc = intpoly.discriminant(list(min_poly)) if m > 1 else 1
        self.index = self._index()
        self.real_count = intpoly.sturm_real_root_count(list(min_poly)) if m > 1 else 1
        self.complex_pairs = (m - self.real_count) // 2
        if self.real_count + 2 * self.complex_pairs != m:
            raise InvariantError("embedding signature inconsistent")
        self._roots_cache = {}
        self.embeddings = self._roots(_EMB_PREC)
        self.delta = float(
            mpmath.mpf(m) ** Fraction(3, 2) * mpmath.mpf(2) ** (m * (m - 1) // 2) * mpmath.sqrt(abs(self.disc))
        )

    # -- construction helpers ------------------------------------------------

    def _invert_basis(self, basis):
        m = self.degree
        aug = [[basis[i][j] for j in range(m)] + [Fraction(1 if k == i else 0) for k in range(m)] for i in range(m)]
        for col in range(m):
            piv = next((i for i in range(col, m) if aug[i][col] != 0), None)
            if piv is None:
                raise ValueError("integral basis is singular")
            aug[col], aug[piv] = aug[piv], aug[col]
            inv = 1 / aug[col][col]
            aug[col] = [x * inv for x in aug[col]]
            for r in range(m):
                if r != col and aug[r][col] != 0:
                    c = aug[r][col]
                    aug[r] = [x - c * y for x, y in zip(aug[r], aug[col])]
        return [row[m:] for row in aug]

    def _to_integral(self, power_coords):
        m = self.degree
        out = []
        for j in range(m):
            v = sum(power_coords[k] * self._basis_inv[k][j] for k in range(m))
            out.append(v)
        ints = []
        for v in out:
            v = Fraction(v)
            if v.denominator != 1:
                raise InvariantError("element is not integral over the chosen basis")
            ints.append(int(v))
        return ints

    def _to_power(self, coords):
        m = self.degree
        return [sum(Fraction(coords[i]) * self.basis[i][j] for i in range(m)) for j in range(m)]

    def _reduce_power_poly(self, coeffs):
        """Reduce a power-basis polynomial of any degree modulo the minimal
        polynomial; Fraction coefficients, ascending."""
        m = self.degree
        coeffs = list(coeffs)
        for d in range(len(coeffs) - 1, m - 1, -1):
            c = coeffs[d]
            if c:
                for j in range(m):
                    coeffs[d - m + j] -= c * self.min_poly[j]
            coeffs.pop()
        return coeffs + [Fraction(0)] * (m - len(coeffs))

    def _build_mult_table(self):
        m = self.degree
        table = [[None] * m for _ in range(m)]
        for i in range(m):
            for j in range(i, m):
                prod = [Fraction(0)] * (2 * m - 1)
                for a in range(m):
                    for b in range(m):
                        prod[a + b] += self.basis[i][a] * self.basis[j][b]
                red = self._reduce_power_poly(prod)
                try:
                    coords = self._to_integral(red)
                except InvariantError:
                    raise ValueError("supplied basis is not closed under multiplication")
                table[i][j] = tuple(coords)
                table[j][i] = tuple(coords)
        return table

    def _newton_power_sums(self, upto):
        m = self.degree
        a = self.min_poly
        s = [m]
        for k in range(1, upto + 1):
            if k <= m:
                total = -k * a[m - k]
                for i in range(1, k):
                    total -= a[m - i] * s[k - i]
            else:
                total = 0
                for i in range(1, m + 1):
                    total -= a[m - i] * s[k - i]
            s.append(total)
        return s

    def _trace_power(self, power_coords):
        return sum(Fraction(c) * self._power_sums[k] for k, c in enumerate(power_coords))

    def _discriminant(self):
        m = self.degree
        gram = []
        for i in range(m):
            row = []
            for j in range(m):
                prod_coords = self.mul_coords(
                    tuple(1 if k == i else 0 for k in range(m)), tuple(1 if k == j else 0 for k in range(m))
                )
                tr = self._trace_power(self._to_power(prod_coords))
                if Fraction(tr).denominator != 1:
                    raise InvariantError("trace form is not integral")
                row.append(int(tr))
            gram.append(row)
        return intpoly._det_bareiss(gram)

    def _index(self):
        if self.degree == 1:
            return 1
        ratio, rem = divmod(self.min_poly_disc, self.disc)
        if rem:
            raise InvariantError("disc(min_poly) not divisible by field discriminant")
        r = isqrt(abs(ratio))
        if r * r != abs(ratio):
            raise InvariantError("index is not an integer")
        return r

    def _roots(self, prec):
        if prec in self._roots_cache:
            return self._roots_cache[prec]
        m = self.degree
        if m == 1:
            roots = [mpmath.mpc(-self.min_poly[0], 0)]
        else:
            with mpmath.workprec(prec + 64):
                poly = [mpmath.mpf(c) for c in reversed(self.min_poly)]
                roots = mpmath.polyroots(poly, maxsteps=200, extraprec=prec // 2)
                for r in roots:
                    if abs(mpmath.polyval(poly, r)) > mpmath.mpf(2) ** (-64):
                        raise InvariantError("embedding residual too large")
        reals = sorted([r for r in roots if abs(r.imag) < mpmath.mpf(2) ** (-prec // 4)], key=lambda z: z.real)
        comps = sorted([r for r in roots if r.imag > mpmath.mpf(2) ** (-prec // 4)], key=lambda z: (z.real, z.imag))
        if len(reals) != self.real_count or len(comps) != self.complex_pairs:
            raise InvariantError("root classification disagrees with Sturm count")
        ordered = [mpmath.mpc(r.real, 0) for r in reals]
        for z in comps:
            ordered.append(z)
            ordered.append(mpmath.conj(z))
        self._roots_cache[prec] = ordered
        return ordered

    # -- public arithmetic ----------------------------------------------------

    def element(self, coords):
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.degree:
            raise ValueError("expected %d coordinates" % self.degree)
        return AlgebraicInt(self, coords)

    def zero(self):
        return self.element([0] * self.degree)

    def one(self):
        return self.element(self.one_coords)

    def from_int(self, n):
        return self.element([n * c for c in self.one_coords])

    def theta(self):
        """The root of the minimal polynomial, as an element (requires the
        power basis to be inside the chosen module, which it is by design)."""
        power = [Fraction(0), Fraction(1)] + [Fraction(0)] * (self.degree - 2)
        if self.degree == 1:
            power = [Fraction(-self.min_poly[0])]
        return self.element(self._to_integral(power))

    def mul_coords(self, a, b):
        m = self.degree
        out = [0] * m
        table = self._mult_table
        for i in range(m):
            ai = a[i]
            if not ai:
                continue
            for j in range(m):
                bj = b[j]
                if not bj:
                    continue
                g = table[i][j]
                c = ai * bj
                for k in range(m):
                    out[k] += c * g[k]
        return tuple(out)

    def embed(self, x, prec=_EMB_PREC):
        """All embedding values sigma(x) as mpc, conjugate-closed order."""
        roots = self._roots(prec)
        power = self._to_power(x.coords)
        with mpmath.workprec(prec + 32):
            vals = []
            for th in roots:
                acc = mpmath.mpc(0)
                for c in reversed(power):
                    acc = acc * th + mpmath.mpf(c.numerator) / c.denominator
                vals.append(acc)
        return vals


@dataclass(frozen=True)
class AlgebraicInt:
    nf: NumberField
    coords: tuple

    def __add__(self, other):
        self._check(other)
        return AlgebraicInt(self.nf, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return AlgebraicInt(self.nf, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return AlgebraicInt(self.nf, tuple(-a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, int):
            return AlgebraicInt(self.nf, tuple(a * other for a in self.coords))
        self._check(other)
        return AlgebraicInt(self.nf, self.nf.mul_coords(self.coords, other.coords))

    __rmul__ = __mul__

    def _check(self, other):
        if self.nf is not other.nf:
            raise ValueError("elements of different fields")

    def is_zero(self):
        return not any(self.coords)

    def __eq__(self, other):
        return isinstance(other, AlgebraicInt) and self.nf is other.nf and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return "AlgebraicInt%r" % (self.coords,)


@dataclass(frozen=True)
class IdealHNF:
    nf: NumberField
    basis: tuple  # rows, upper triangular HNF over the integral basis
    norm: int

    def contains(self, x):
        return linalg.hnf_membership([list(r) for r in self.basis], list(x.coords))

    def reduce(self, x):
        v = linalg.hnf_reduce_vector([list(r) for r in self.basis], list(x.coords))
        return AlgebraicInt(self.nf, tuple(v))

    def residues(self, limit=10 ** 6):
        """All canonical representatives of O_K modulo this ideal."""
        if self.norm > limit:
            raise UnsupportedError("residue enumeration too large")
        m = self.nf.degree
        diag = [self.basis[i][i] for i in range(m)]
        out = []

        def rec(i, coords):
            if i == m:
                out.append(self.reduce(AlgebraicInt(self.nf, tuple(coords))))
                return
            for c in range(diag[i]):
                rec(i + 1, coords + [c])

        rec(0, [])
        return out


@dataclass(frozen=True)
class PrimeIdealData:
    nf: NumberField
    p: int
    e: int
    f: int
    q: int
    factor_lift: tuple  # monic integer lift of the chosen irreducible factor mod p
    pi: AlgebraicInt  # generator with valuation exactly one
    hnf: IdealHNF
    residue_field: fpoly.GF
    choice_index: int

    @property
    def two_generators(self):
        return (self.p, self.pi)


def nf_init(min_poly, integral_basis=None):
    """Set up a number field from a monic integer minimal polynomial."""
    return NumberField(min_poly, integral_basis)


def ideal_from_rows(nf, rows):
    h = linalg.hnf_square(rows, nf.degree)
    return IdealHNF(nf, tuple(tuple(r) for r in h), abs(linalg.hnf_det(h)))


def unit_ideal(nf):
    rows = []
    one = nf.one()
    for k in range(nf.degree):
        basis_el = AlgebraicInt(nf, tuple(1 if i == k else 0 for i in range(nf.degree)))
        rows.append(list((one * basis_el).coords))
    return ideal_from_rows(nf, rows)


def principal_ideal(nf, x):
    rows = []
    for k in range(nf.degree):
        basis_el = AlgebraicInt(nf, tuple(1 if i == k else 0 for i in range(nf.degree)))
        rows.append(list((x * basis_el).coords))
    return ideal_from_rows(nf, rows)


def ideal_mul(a, b):
    nf = a.nf
    rows = []
    for ra in a.basis:
        ea = AlgebraicInt(nf, ra)
        for rb in b.basis:
            rows.append(list((ea * AlgebraicInt(nf, rb)).coords))
    return ideal_from_rows(nf, rows)


def ideal_pow(a, k):
    result = unit_ideal(a.nf)
    base = a
    while k:
        if k & 1:
            result = ideal_mul(result, base)
        base = ideal_mul(base, base) if k > 1 else base
        k >>= 1
    return result


def ideal_product(factors, nf=None):
    """Product of prime-power ideals; norm multiplicativity is asserted.
    The empty product is the unit ideal (nf required in that case)."""
    if not factors:
        if nf is None:
            raise ValueError("empty product requires the number field")
        return unit_ideal(nf)
    nf = factors[0][0].nf
    result = unit_ideal(nf)
    expected_norm = 1
    for prime, exp in factors:
        if exp < 1:
            raise ValueError("exponents must be >= 1")
        result = ideal_mul(result, ideal_pow(prime.hnf, exp))
        expected_norm *= prime.hnf.norm ** exp
    if result.norm != expected_norm:
        raise InvariantError("ideal norm is not multiplicative")
    return result


def decompose_prime(nf, p):
    """Kummer-Dedekind splitting of p, valid away from index divisors."""
    if nf.index % p == 0:
        raise UnsupportedError("prime %d divides the index; supply ideal data manually" % p)
    F = fpoly.GF(p)
    reduced = [c % p for c in nf.min_poly]
    factors = fpoly.factor_monic(reduced, F)
    theta = nf.theta()
    out = []
    total = 0
    for idx, (fac, e) in enumerate(factors):
        f_deg = fpoly.pdeg(fac)
        lift = [int(c) % p for c in fac]
        gen0 = _eval_int_poly_at_element(nf, lift, theta)
        rows = _prime_rows(nf, p, gen0)
        hnf_ideal = ideal_from_rows(nf, rows)
        if hnf_ideal.norm != p ** f_deg:
            raise InvariantError("prime ideal norm mismatch")
        sq = ideal_mul(hnf_ideal, hnf_ideal)
        pi = None
        for cand in _generator_candidates(nf, gen0, p):
            if hnf_ideal.contains(cand) and not sq.contains(cand):
                pi = cand
                break
        if pi is None:
            raise InvariantError("no uniformizing generator found")
        res_field = fpoly.GF(p) if f_deg == 1 else fpoly.GF(p, lift)
        out.append(
            PrimeIdealData(
                nf=nf,
                p=p,
                e=e,
                f=f_deg,
                q=p ** f_deg,
                factor_lift=tuple(lift),
                pi=pi,
                hnf=hnf_ideal,
                residue_field=res_field,
                choice_index=idx,
            )
        )
        total += e * f_deg
    if total != nf.degree:
        raise InvariantError("sum of e*f does not match the field degree")
    return out


def _eval_int_poly_at_element(nf, coeffs, x):
    acc = nf.zero()
    for c in reversed(coeffs):
        acc = acc * x + nf.from_int(c)
    return acc


def _prime_rows(nf, p, gen):
    rows = []
    m = nf.degree
    for k in range(m):
        basis_el = AlgebraicInt(nf, tuple(1 if i == k else 0 for i in range(m)))
        rows.append([p * c for c in basis_el.coords])
        rows.append(list((gen * basis_el).coords))
    return rows


def _generator_candidates(nf, gen0, p):
    yield gen0
    yield gen0 + nf.from_int(p)
    theta = nf.theta()
    yield gen0 + nf.from_int(p) * theta
    yield gen0 - nf.from_int(p)
    for k in range(nf.degree):
        basis_el = AlgebraicInt(nf, tuple(1 if i == k else 0 for i in range(nf.degree)))
        yield gen0 + nf.from_int(p) * basis_el


def prime_valuation(prime, x, max_val=64):
    """v_p(x) for nonzero x, by iterated ideal membership."""
    if x.is_zero():
        raise ValueError("valuation of zero")
    v = 0
    power = prime.hnf
    while v < max_val:
        if not power.contains(x):
            return v
        v += 1
        power = ideal_mul(power, prime.hnf)
    raise UnsupportedError("valuation exceeds bound %d" % max_val)


def reduce_mod_prime(prime, x):
    """Image of x in the residue field O_K/p (a GF element)."""
    nf = prime.nf
    p = prime.p
    power = nf._to_power(x.coords)
    coeffs = []
    for fr in power:
        fr = Fraction(fr)
        den = fr.denominator % p
        if den == 0:
            raise InvariantError("denominator not invertible mod %d" % p)
        coeffs.append((fr.numerator % p) * pow(den, -1, p) % p)
    F = prime.residue_field
    if F.f == 1:
        # evaluate at the root of the linear factor: theta = -lift[0]
        root = (-prime.factor_lift[0]) % p
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * root + c) % p
        return acc
    prime_field = fpoly.GF(p)
    _, rem = fpoly.pdivmod(coeffs, list(prime.factor_lift), prime_field)
    rem = rem + [0] * (F.f - len(rem))
    return tuple(rem[: F.f])


def crt_reduce(residues):
    """Element congruent to each x_i modulo the corresponding (pairwise
    coprime) ideal, canonically reduced modulo the product."""
    if not residues:
        raise ValueError("at least one residue required")
    nf = residues[0][0].nf
    ideals = [a for _, a in residues]
    for i in range(len(ideals)):
        for j in range(i + 1, len(ideals)):
            stacked = [list(r) for r in ideals[i].basis] + [list(r) for r in ideals[j].basis]
            h = linalg.hnf_square(stacked, nf.degree)
            if abs(linalg.hnf_det(h)) != 1:
                raise ValueError("ideals are not pairwise coprime")
    total = ideals[0]
    for a in ideals[1:]:
        total = ideal_mul(total, a)
    if len(residues) == 1:
        return ideals[0].reduce(residues[0][0])
    acc = nf.zero()
    for i, (x, a) in enumerate(residues):
        comp = None
        for j, b in enumerate(ideals):
            if j != i:
                comp = b if comp is None else ideal_mul(comp, b)
        u = _one_splitter(nf, a, comp)
        acc = acc + u * x
    out = total.reduce(acc)
    for x, a in residues:
        if not a.contains(out - x):
            raise InvariantError("CRT output violates a congruence")
    return out


def _one_splitter(nf, a, comp):
    """Element u in comp with u = 1 mod a (requires a + comp = O_K)."""
    stacked = [list(r) for r in a.basis] + [list(r) for r in comp.basis]
    h, transform = linalg.hnf_with_transform(stacked, nf.degree)
    if len(h) != nf.degree or abs(linalg.hnf_det(h)) != 1:
        raise InvariantError("ideals do not sum to the unit ideal")
    # express 1 over the HNF rows, then split the transform contribution
    target = list(nf.one_coords)
    coeffs = []
    v = list(target)
    for i in range(nf.degree):
        q, r = divmod(v[i], h[i][i])
        if r:
            raise InvariantError("1 not representable over unit-ideal HNF")
        coeffs.append((i, q))
        v = [x - q * y for x, y in zip(v, h[i])]
    if any(v):
        raise InvariantError("1 not in the sum ideal")
    na = len(a.basis)
    u_coords = [0] * nf.degree
    for i, q in coeffs:
        if not q:
            continue
        for l, t in enumerate(transform[i]):
            if t and l >= na:
                row = comp.basis[l - na]
                u_coords = [x + q * t * y for x, y in zip(u_coords, row)]
    u = AlgebraicInt(nf, tuple(u_coords))
    if not comp.contains(u) or not a.contains(u - nf.one()):
        raise InvariantError("CRT splitter incorrect")
    return u


def small_rep(x, a):
    """Representative of x modulo the ideal a with every |sigma(.)| at most
    delta_K * N(a)^(1/m); LLL-reduced lattice plus Babai nearest-plane."""
    nf = x.nf
    m = nf.degree
    if a.norm == 1:
        return nf.zero()
    scale = 1 << _SCALE_BITS
    max_entry = max(abs(c) for row in a.basis for c in row)
    prec = max_entry.bit_length() + 200
    rows_emb = []
    for row in a.basis:
        rows_emb.append(_minkowski_int_vector(nf, row, prec, scale))
    reduced, transform = lattice.lll_reduce(rows_emb)
    target = _minkowski_int_vector(nf, x.coords, max(c.bit_length() for c in x.coords or (1,)) + 200, scale)
    _, coeffs = lattice.babai_nearest_plane(reduced, target)
    v_coords = [0] * m
    for j, c in enumerate(coeffs):
        if not c:
            continue
        for k, t in enumerate(transform[j]):
            if t:
                v_coords = [u + c * t * w for u, w in zip(v_coords, a.basis[k])]
    v = AlgebraicInt(nf, tuple(v_coords))
    if not a.contains(v):
        raise InvariantError("Babai output left the ideal lattice")
    out = x - v
    _assert_small(out, a)
    return out


def _minkowski_int_vector(nf, coords, prec, scale):
    m = nf.degree
    x = AlgebraicInt(nf, tuple(coords))
    vals = nf.embed(x, prec)
    with mpmath.workprec(prec + 32):
        sqrt2 = mpmath.sqrt(2)
        vec = []
        i = 0
        while len(vec) < m:
            z = vals[i]
            if i < nf.real_count:
                vec.append(int(mpmath.floor(z.real * scale + Fraction(1, 2))))
                i += 1
            else:
                vec.append(int(mpmath.floor(z.real * sqrt2 * scale + Fraction(1, 2))))
                vec.append(int(mpmath.floor(z.imag * sqrt2 * scale + Fraction(1, 2))))
                i += 2  # skip the conjugate
    return vec


def _assert_small(out, a):
    nf = out.nf
    m = nf.degree
    bits = max((abs(c).bit_length() for c in out.coords), default=1) + a.norm.bit_length()
    prec = bits + 128
    with mpmath.workprec(prec):
        bound = mpmath.mpf(nf.degree) ** Fraction(3, 2)
        bound *= mpmath.mpf(2) ** (m * (m - 1) // 2)
        bound *= mpmath.sqrt(abs(nf.disc))
        bound *= mpmath.mpf(a.norm) ** Fraction(1, m)
        for val in nf.embed(out, prec):
            if abs(val) > bound:
                raise InvariantError("small representative bound violated")
