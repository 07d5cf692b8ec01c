"""Certified Mahler measures via simultaneous complex root finding.

Pipeline for a monic polynomial with exactly-described coefficients:

  1. initial radii from the upper convex hull of (i, log2 |a_i|) (coefficient
     magnitudes pin the root moduli segment by segment),
  2. a float64 simultaneous-correction warm start on each rescaled segment,
  3. full-precision Weierstrass/Durand-Kerner sweeps with mpmath,
  4. certification: every root of the true polynomial lies in the union of
     the disks D(z_k, deg * |P(z_k)| / prod_{j != k} |z_k - z_j|); when the
     disks are pairwise disjoint each contains exactly one root, and the
     log-Mahler sum inherits a per-root error bound.

Evaluation and coefficient-conversion rounding is absorbed into the disk
radii, so the certificate refers to the exact input polynomial.  On failure
the working precision is doubled a bounded number of times, then the
computation raises instead of returning an uncertified value.
"""

import cmath
import math

import mpmath
import numpy as np

from .errors import PrecisionError

_MAX_RETRIES = 3
_SWEEP_CAP = 120


def int_coeff_fn(coeffs):
    """Coefficient provider for exact integer (or exact-rational-free) input."""

    def fn(prec):
        with mpmath.workprec(prec):
            vals = [mpmath.mpc(c) for c in coeffs]
            errs = [abs(mpmath.mpf(c)) * mpmath.mpf(2) ** (5 - prec) for c in coeffs]
        return vals, errs

    return fn


def log2_abs_int(c):
    x = abs(c)
    if x == 0:
        return None
    e = max(x.bit_length() - 53, 0)
    return math.log2(x >> e if e else x) + e


def _log2_abs_mpc(z):
    a = abs(z)
    if a == 0:
        return None
    return float(mpmath.log(a, 2))


def log_mahler(coeff_fn, degree, target_err=1e-10, base_prec=None):
    """(log Mahler measure, certified error bound) for a monic polynomial.

    `coeff_fn(prec)` must return ascending mpc coefficients together with
    absolute error bounds valid at that precision; the leading coefficient
    must be exactly 1.
    """
    prec = base_prec or 192
    roots_prev = None
    for _ in range(_MAX_RETRIES + 1):
        coeffs, cerrs = coeff_fn(prec + 64)
        with mpmath.workprec(prec + 64):
            if coeffs[-1] != 1:
                raise ValueError("monic polynomial expected")
            # strip exact zero roots (possible only when the constant
            # coefficient is exactly zero by construction)
            shift = 0
            while coeffs and coeffs[0] == 0 and cerrs[0] == 0:
                coeffs = coeffs[1:]
                cerrs = cerrs[1:]
                shift += 1
            deg = len(coeffs) - 1
            if deg + shift != degree:
                raise ValueError("coefficient list does not match the stated degree")
            if deg == 0:
                return 0.0, 0.0
            if roots_prev is None:
                z = _initial_guesses(coeffs, deg, prec)
            else:
                z = [mpmath.mpc(r) for r in roots_prev]
            z = _weierstrass_sweeps(coeffs, z, prec, target_err)
            result = _certify(coeffs, cerrs, z, prec, deg)
            if result is not None:
                logm, err = result
                if err <= target_err:
                    return float(logm), float(err)
            roots_prev = z
        prec *= 2
    raise PrecisionError("root certification did not reach the requested error bound")


def certified_roots(coeff_fn, degree, base_prec=None):
    """Roots with certified inclusion radii (monic, no zero roots)."""
    prec = base_prec or 192
    roots_prev = None
    for _ in range(_MAX_RETRIES + 1):
        coeffs, cerrs = coeff_fn(prec + 64)
        with mpmath.workprec(prec + 64):
            deg = len(coeffs) - 1
            if deg != degree:
                raise ValueError("coefficient list does not match the stated degree")
            z = _initial_guesses(coeffs, deg, prec) if roots_prev is None else [mpmath.mpc(r) for r in roots_prev]
            z = _weierstrass_sweeps(coeffs, z, prec)
            data = _disk_data(coeffs, cerrs, z, prec, deg)
            if data is not None and any(r >= abs(zk) for zk, r in zip(data[0], data[1])):
                data = None
            if data is not None:
                return data
            roots_prev = z
        prec *= 2
    raise PrecisionError("root disks failed to separate")


# ---------------------------------------------------------------------------


def _upper_hull(points):
    """Upper convex hull of (x, y) points sorted by x."""
    hull = []
    for p in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point when it lies on or below the chord
            if (y2 - y1) * (p[0] - x1) <= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


_CLUSTER_SLOPE_GAP = 20.0  # log2 units separating distinct root-modulus clusters


def _initial_guesses(coeffs, deg, prec):
    pts = []
    for i, c in enumerate(coeffs):
        l2 = _log2_abs_mpc(c)
        if l2 is not None:
            pts.append((i, l2))
    hull = _upper_hull(pts)
    # group hull segments whose slopes (log-radii) are close: the slice of
    # coefficients over one modulus cluster is what approximates those roots
    segs = []
    for (i1, y1), (i2, y2) in zip(hull, hull[1:]):
        segs.append((i1, y1, i2, y2, (y1 - y2) / (i2 - i1)))
    if not segs:
        # single hull point: every root sits at the origin within precision
        with mpmath.workprec(prec + 64):
            return [mpmath.mpc(0)] * deg
    clusters = []
    cur = [segs[0]]
    for s in segs[1:]:
        if abs(s[4] - cur[0][4]) <= _CLUSTER_SLOPE_GAP:
            cur.append(s)
        else:
            clusters.append(cur)
            cur = [s]
    clusters.append(cur)
    guesses = []
    with mpmath.workprec(prec + 64):
        for cluster in clusters:
            guesses.extend(_cluster_guesses(coeffs, cluster))
    if len(guesses) != deg:
        # fall back to a single circle
        with mpmath.workprec(prec + 64):
            guesses = [mpmath.exp(2j * mpmath.pi * (k + 0.37) / deg) for k in range(deg)]
    return guesses


def _cluster_guesses(coeffs, cluster):
    """Guesses for one modulus cluster; splits when the rescaled coefficient
    heights would overflow float64."""
    i1, y1 = cluster[0][0], cluster[0][1]
    i2, y2 = cluster[-1][2], cluster[-1][3]
    width = i2 - i1
    lr = (y1 - y2) / width
    spread = max(seg_y + (seg_i - i1) * lr - y1 for seg_i, seg_y, _, _, _ in cluster)
    spread = max(spread, cluster[-1][3] + (cluster[-1][2] - i1) * lr - y1)
    if spread > 480 and len(cluster) > 1:
        mid = len(cluster) // 2
        return _cluster_guesses(coeffs, cluster[:mid]) + _cluster_guesses(coeffs, cluster[mid:])
    seg = coeffs[i1 : i2 + 1]
    ws = _float_stage(seg, y1, lr)
    radius = mpmath.mpf(2) ** lr
    return [radius * mpmath.mpc(w.real, w.imag) for w in ws]


def _float_stage(seg, y0, lr, sweeps=96):
    """float64 roots of a rescaled hull segment (companion eigenvalues, with a
    simultaneous-correction fallback)."""
    L = len(seg) - 1
    b = np.zeros(L + 1, dtype=np.complex128)
    for j, c in enumerate(seg):
        l2 = _log2_abs_mpc(c)
        if l2 is None:
            continue
        s = l2 + j * lr - y0
        if s < -800:
            continue
        scale = 2.0 ** min(s, 600.0)
        phase = complex(c / abs(c))
        b[j] = phase * scale
    circle = [cmath.exp(2j * math.pi * (k + 0.37) / L) for k in range(L)]
    lead = b[L]
    if lead == 0:
        return circle
    b = b / lead
    coeffs_desc = b[::-1]
    try:
        ws = np.roots(coeffs_desc)
    except Exception:
        ws = None
    if ws is None or len(ws) != L or not np.isfinite(ws).all():
        ws = np.array(circle, dtype=np.complex128)
    w = np.asarray(ws, dtype=np.complex128)
    for _ in range(sweeps):
        vals = np.polyval(coeffs_desc, w)
        diffs = w[:, None] - w[None, :]
        np.fill_diagonal(diffs, 1.0)
        denom = np.prod(diffs, axis=1)
        bad = (denom == 0) | ~np.isfinite(denom)
        if bad.any():
            w = w + 1e-9 * (1 + 1j) * np.arange(1, L + 1)
            continue
        step = vals / denom
        nxt = w - step
        if not np.isfinite(nxt).all():
            break
        w = nxt
        if np.max(np.abs(step)) < 1e-14 * max(1.0, np.max(np.abs(w))):
            break
    return [complex(v) for v in w]


def _weierstrass_sweeps(coeffs, z, prec, target_err=None):
    deg = len(coeffs) - 1
    with mpmath.workprec(prec + 64):
        z = list(z)
        tol = mpmath.mpf(2) ** (-(prec - 16))
        if target_err is not None:
            # corrections and certified radii agree up to a factor ~deg, so
            # stopping near the requested error saves full-width sweeps
            tol = max(tol, mpmath.mpf(target_err) / (deg * 4096))
        last = None
        stall = 0
        for _ in range(_SWEEP_CAP):
            w, maxrel = _corrections(coeffs, z)
            z = [zi - wi for zi, wi in zip(z, w)]
            if maxrel < tol:
                break
            if last is not None and maxrel > last * mpmath.mpf("0.9"):
                stall += 1
                if stall > 8:
                    break
            else:
                stall = 0
            last = maxrel
    return z


def _corrections(coeffs, z):
    deg = len(coeffs) - 1
    w = []
    maxrel = mpmath.mpf(0)
    for k, zk in enumerate(z):
        val = mpmath.mpc(0)
        for c in reversed(coeffs):
            val = val * zk + c
        denom = mpmath.mpc(1)
        for j, zj in enumerate(z):
            if j != k:
                denom *= zk - zj
        if denom == 0:
            denom = mpmath.mpf(2) ** (-(mpmath.mp.prec * 2))
        wk = val / denom
        w.append(wk)
        rel = abs(wk) / max(mpmath.mpf(1), abs(zk))
        if rel > maxrel:
            maxrel = rel
    return w, maxrel


def _disk_data(coeffs, cerrs, z, prec, deg):
    """Certified inclusion disks, or None when they fail to separate."""
    with mpmath.workprec(prec + 64):
        u = mpmath.mpf(2) ** (-(prec + 32))
        radii = []
        for zk in z:
            val = mpmath.mpc(0)
            mag = mpmath.mpf(0)
            azk = abs(zk)
            for c, ce in zip(reversed(coeffs), reversed(cerrs)):
                val = val * zk + c
                mag = mag * azk + abs(c) + ce
            # Horner rounding + coefficient uncertainty, folded into |P(z_k)|
            num = abs(val) + mag * (8 * (deg + 1)) * u + sum(cerrs) * max(mpmath.mpf(1), azk) ** deg
            denom = mpmath.mpf(1)
            for zj in z:
                if zj is not zk:
                    denom *= abs(zk - zj)
            denom *= 1 - (4 * deg) * u
            if denom <= 0:
                return None
            radii.append(deg * num / denom)
        for i in range(deg):
            for j in range(i + 1, deg):
                if abs(z[i] - z[j]) <= radii[i] + radii[j]:
                    return None
        return z, radii


def _certify(coeffs, cerrs, z, prec, deg):
    data = _disk_data(coeffs, cerrs, z, prec, deg)
    if data is None:
        return None
    z, radii = data
    with mpmath.workprec(prec + 64):
        total = mpmath.mpf(0)
        err = mpmath.mpf(0)
        for zk, rk in zip(z, radii):
            azk = abs(zk)
            if azk <= rk:
                return None
            if azk + rk <= 1:
                continue
            total += max(mpmath.mpf(0), mpmath.log(azk))
            err += -mpmath.log1p(-rk / azk)
        return total, err
