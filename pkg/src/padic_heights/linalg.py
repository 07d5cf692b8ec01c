"""Exact integer matrix utilities: Hermite normal form, modular inversion.

HNF convention: row-style, upper triangular.  Rows span the same Z-module as
the input rows; diagonal entries are positive and entries above a pivot are
reduced into [0, pivot).
"""

from .errors import InvariantError


def hnf(rows, ncols=None):
    """HNF of the Z-module spanned by `rows` (each a list of ints).

    Returns a list of nonzero rows, upper triangular in echelon shape.
    """
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    work = [list(r) for r in rows if any(r)]
    basis = []
    for col in range(ncols):
        # gather rows with leftmost nonzero at `col`
        active = [r for r in work if r[col] != 0]
        rest = [r for r in work if r[col] == 0]
        if not active:
            work = rest
            continue
        # reduce via Euclid on the col entries
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            pivot = active[0]
            new_active = [pivot]
            for r in active[1:]:
                q = r[col] // pivot[col]
                rr = [a - q * b for a, b in zip(r, pivot)]
                if rr[col] != 0:
                    new_active.append(rr)
                elif any(rr):
                    rest.append(rr)
            if len(new_active) == 1:
                break
            active = new_active
        pivot = active[0]
        if pivot[col] < 0:
            pivot = [-a for a in pivot]
        basis.append(pivot)
        work = rest
    # reduce entries above each pivot
    for i in range(len(basis) - 1, -1, -1):
        col = next(j for j, a in enumerate(basis[i]) if a != 0)
        p = basis[i][col]
        for k in range(i):
            q = basis[k][col] // p
            if q:
                basis[k] = [a - q * b for a, b in zip(basis[k], basis[i])]
    return basis


def hnf_square(rows, n):
    """HNF expected to be full rank n x n; raises InvariantError otherwise."""
    h = hnf(rows, n)
    if len(h) != n:
        raise InvariantError("expected full-rank lattice")
    return h


def hnf_det(h):
    d = 1
    for i, row in enumerate(h):
        d *= row[i]
    return d


def hnf_reduce_vector(h, v):
    """Canonical representative of v modulo the row span of square HNF h.

    Rows are upper triangular with pivot h[i][i]; eliminating coordinates in
    ascending order leaves already-normalized coordinates untouched.
    """
    v = list(v)
    for i in range(len(h)):
        q = v[i] // h[i][i]
        if q:
            v = [a - q * b for a, b in zip(v, h[i])]
    return v


def hnf_membership(h, v):
    """True iff integer vector v lies in the row span of square HNF h."""
    v = list(v)
    for i in range(len(h)):
        q, r = divmod(v[i], h[i][i])
        if r:
            return False
        v = [a - q * b for a, b in zip(v, h[i])]
    return not any(v)


def hnf_with_transform(rows, ncols):
    """HNF together with an integer transform U such that U * rows = hnf rows.

    Plain Euclid-style reduction carrying the transform alongside; returns
    (basis_rows, transform_rows) with one transform row per basis row.
    """
    m = len(rows)
    work = [(list(r), [1 if j == i else 0 for j in range(m)]) for i, r in enumerate(rows)]
    work = [(r, t) for r, t in work if any(r)]
    basis = []
    for col in range(ncols):
        active = [(r, t) for r, t in work if r[col] != 0]
        rest = [(r, t) for r, t in work if r[col] == 0]
        if not active:
            work = rest
            continue
        while len(active) > 1:
            active.sort(key=lambda rt: abs(rt[0][col]))
            pr, pt = active[0]
            new_active = [(pr, pt)]
            for r, t in active[1:]:
                q = r[col] // pr[col]
                rr = [a - q * b for a, b in zip(r, pr)]
                tt = [a - q * b for a, b in zip(t, pt)]
                if rr[col] != 0:
                    new_active.append((rr, tt))
                elif any(rr):
                    rest.append((rr, tt))
            if len(new_active) == 1:
                break
            active = new_active
        pr, pt = active[0]
        if pr[col] < 0:
            pr, pt = [-a for a in pr], [-a for a in pt]
        basis.append((pr, pt))
        work = rest
    for i in range(len(basis) - 1, -1, -1):
        col = next(j for j, a in enumerate(basis[i][0]) if a != 0)
        p = basis[i][0][col]
        for k in range(i):
            q = basis[k][0][col] // p
            if q:
                basis[k] = (
                    [a - q * b for a, b in zip(basis[k][0], basis[i][0])],
                    [a - q * b for a, b in zip(basis[k][1], basis[i][1])],
                )
    return [b for b, _ in basis], [t for _, t in basis]


def matinv_mod(mat, modulus):
    """Inverse of a square integer matrix modulo `modulus` (must be unimodular
    mod the smallest prime dividing modulus; pivots must be units)."""
    n = len(mat)
    a = [[x % modulus for x in row] + [1 if j == i else 0 for j in range(n)] for i, row in enumerate(mat)]
    for col in range(n):
        piv = None
        for i in range(col, n):
            try:
                inv = pow(a[i][col], -1, modulus)
            except ValueError:
                continue
            piv = (i, inv)
            break
        if piv is None:
            raise InvariantError("matrix not invertible modulo %d" % modulus)
        i, inv = piv
        a[col], a[i] = a[i], a[col]
        a[col] = [(x * inv) % modulus for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                c = a[r][col]
                a[r] = [(x - c * y) % modulus for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def mat_mul_vec_mod(mat, vec, modulus):
    return [sum(a * b for a, b in zip(row, vec)) % modulus for row in mat]
