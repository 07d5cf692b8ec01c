"""LLL reduction and Babai nearest-plane over exact rationals.

Basis vectors are integer lists; Gram-Schmidt data is kept in Fractions so
the size-reduction and Lovasz conditions are decided exactly.  The reduction
also returns the unimodular transform so callers can express reduced vectors
as exact integer combinations of the input basis.
"""

from fractions import Fraction

from .errors import InvariantError

LLL_DELTA = Fraction(99, 100)


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def _gram_schmidt(basis):
    n = len(basis)
    ortho = []
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        v = [Fraction(c) for c in basis[i]]
        for j in range(i):
            denom = _dot(ortho[j], ortho[j])
            if denom == 0:
                raise InvariantError("linearly dependent lattice basis")
            mu[i][j] = Fraction(_dot([Fraction(c) for c in basis[i]], ortho[j]), 1) / denom
            v = [a - mu[i][j] * b for a, b in zip(v, ortho[j])]
        ortho.append(v)
    return ortho, mu


def _round_half_up(x):
    return (2 * x.numerator + x.denominator) // (2 * x.denominator) if isinstance(x, Fraction) else round(x)


def lll_reduce(basis, delta=LLL_DELTA):
    """Classical LLL.  Returns (reduced_basis, transform) with
    transform * basis == reduced_basis over Z."""
    n = len(basis)
    b = [list(v) for v in basis]
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    ortho, mu = _gram_schmidt(b)
    norms = [_dot(o, o) for o in ortho]
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            r = _round_half_up(mu[k][j])
            if r:
                b[k] = [a - r * c for a, c in zip(b[k], b[j])]
                u[k] = [a - r * c for a, c in zip(u[k], u[j])]
                for l in range(j + 1):
                    mu[k][l] -= r * (mu[j][l] if l < j else 1)
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            u[k], u[k - 1] = u[k - 1], u[k]
            ortho, mu = _gram_schmidt(b)
            norms = [_dot(o, o) for o in ortho]
            k = max(k - 1, 1)
    return b, u


def lll_conditions_hold(basis, delta=LLL_DELTA):
    """Exact check of size reduction and the Lovasz condition."""
    ortho, mu = _gram_schmidt(basis)
    norms = [_dot(o, o) for o in ortho]
    n = len(basis)
    for i in range(n):
        for j in range(i):
            if abs(mu[i][j]) > Fraction(1, 2):
                return False
    for k in range(1, n):
        if norms[k] < (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            return False
    return True


def babai_nearest_plane(basis, target):
    """Lattice vector near `target` (exact rational input accepted).

    Returns (lattice_vector, coefficients) with
    lattice_vector == sum coeff_i * basis_i."""
    ortho, _ = _gram_schmidt(basis)
    n = len(basis)
    w = [Fraction(c) for c in target]
    coeffs = [0] * n
    for i in range(n - 1, -1, -1):
        denom = _dot(ortho[i], ortho[i])
        c = _round_half_up(Fraction(_dot(w, ortho[i]), 1) / denom)
        coeffs[i] = c
        if c:
            w = [a - c * bb for a, bb in zip(w, basis[i])]
    vec = [0] * len(target)
    for i, c in enumerate(coeffs):
        if c:
            vec = [a + c * bb for a, bb in zip(vec, basis[i])]
    return vec, coeffs
