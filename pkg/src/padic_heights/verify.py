"""Certification of the constructed polynomial.

Nothing in here trusts the builder: splitting certificates re-derive every
valuation inequality from the serialized polynomial and the representative
family, then constructively lift all roots and check pairwise distinctness;
irreducibility is certified by the full factor-degree scan of the reduction
modulo the anchor prime; the height bound is assembled term by term with its
internal inequality chain asserted; the exact height comes from certified
Mahler measures over every archimedean embedding.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from . import croots, fpoly
from .errors import HenselConditionError, InvariantError, PrecisionError, UnsupportedError
from .localfield import condition_report, epoly_derivative, epoly_eval, hensel_root
from .numfield import reduce_mod_prime


@dataclass
class SplittingRootEntry:
    x0: object  # raw
    a: int
    value_val: object  # int or None (precision zero)
    min_slack: object
    lifted: object = None
    ok: bool = True
    failing_condition: object = None


@dataclass
class SplittingCertificate:
    prime_index: int
    b: int
    entries: list = field(default_factory=list)
    separation_max: int = None
    distinct_count: int = 0
    all_ok: bool = False

    def summary(self):
        return {
            "b": self.b,
            "roots_certified": sum(1 for e in self.entries if e.ok),
            "distinct": self.distinct_count,
            "separation_max": self.separation_max,
            "ok": self.all_ok,
        }


@dataclass
class IrreducibilityCertificate:
    ok: bool
    anchor_match: bool
    scanned_to: int
    witness: object = None


@dataclass
class HeightReport:
    log_B: float
    anchor_term: float
    main_term: float
    epsilon_term: float
    error_term: float
    bound_total: float
    coefficient_bound: float  # (log B + log sqrt(deg+1)) / deg
    exact: float = None
    exact_error: float = None
    lower: float = None

    def to_dict(self):
        return dict(self.__dict__)


def verify_splitting(ctx, gpoly, c, index=0):
    """Certify every member of the invariant family as an approximate root
    of g with the lifting hypotheses, then lift all of them and check the
    lifted roots are pairwise distinct."""
    E = ctx.E
    coeffs = ctx.embedding.embed_poly(gpoly.coeffs)
    dcoeffs = epoly_derivative(E, coeffs)
    b = ctx.k + c - 1
    cert = SplittingCertificate(prime_index=index, b=b)
    # pairwise separation witness over the family
    sep = _max_pairwise_valuation(E, ctx.subset)
    cert.separation_max = sep
    if sep is None or sep > b:
        cert.all_ok = False
        return cert
    lifted = []
    for x0 in ctx.subset:
        a = E.rval(epoly_eval(E, dcoeffs, x0))
        if a is None:
            raise PrecisionError("derivative valuation undecidable at a family point")
        entry = SplittingRootEntry(x0=x0, a=a, value_val=None, min_slack=None)
        rep = condition_report(E, coeffs, x0, a, b)
        entry.value_val = rep.value_val
        entry.min_slack = rep.min_slack
        bad = rep.failing_condition()
        if bad is not None:
            entry.ok = False
            entry.failing_condition = bad
            cert.entries.append(entry)
            continue
        try:
            root = hensel_root(E, coeffs, x0, a, b)
        except HenselConditionError as exc:
            entry.ok = False
            entry.failing_condition = exc.condition
            cert.entries.append(entry)
            continue
        entry.lifted = root
        lifted.append(root)
        cert.entries.append(entry)
    keys = {E.rcanon(r, E.N) for r in lifted}
    cert.distinct_count = len(keys)
    cert.all_ok = (
        all(e.ok for e in cert.entries)
        and cert.distinct_count == gpoly.degree
        and len(cert.entries) == gpoly.degree
    )
    return cert


def _max_pairwise_valuation(E, elems):
    worst = 0
    for i in range(len(elems)):
        for j in range(i + 1, len(elems)):
            v = E.rval(E.rsub(elems[i], elems[j]))
            if v is None:
                return None
            if v > worst:
                worst = v
    return worst


def verify_irreducible(nf, gpoly, prime0, g0=None):
    """Reduction modulo the anchor prime matches and is irreducible (full
    factor-degree scan); monic with full-degree irreducible reduction forces
    irreducibility over the field."""
    F0 = prime0.residue_field
    gbar = [reduce_mod_prime(prime0, coeff) for coeff in gpoly.coeffs]
    anchor_match = True
    if g0 is not None:
        g0bar = [reduce_mod_prime(prime0, coeff) for coeff in g0]
        anchor_match = gbar == g0bar
    gbar = fpoly.pnorm(gbar, F0)
    if fpoly.pdeg(gbar) != gpoly.degree:
        return IrreducibilityCertificate(ok=False, anchor_match=anchor_match, scanned_to=0)
    ok, info = fpoly.degree_scan_certificate(gbar, F0)
    if not ok:
        return IrreducibilityCertificate(
            ok=False, anchor_match=anchor_match, scanned_to=0, witness=info
        )
    scanned = info[-1] if info else 0
    return IrreducibilityCertificate(ok=ok and anchor_match, anchor_match=anchor_match, scanned_to=scanned)


def height_bound(nf, plan, contexts, prime0, log_B):
    """Assemble the height bound terms and assert the internal chain that
    links the planned exponents to the displayed bound."""
    m = nf.degree
    deg = plan.degree
    n = plan.n
    C = plan.C
    with mpmath.workprec(80):
        anchor = float(
            (
                mpmath.log(nf.delta)
                + mpmath.log(prime0.hnf.norm) / m
                + mpmath.log(deg + 1) / 2
            )
            / deg
        )
        main = 0.0
        for ctx in contexts:
            main += float(
                ctx.prime.f * mpmath.log(ctx.prime.p) / (m * ctx.rel_e * (ctx.x - 1))
            )
        eps_term = n * plan.epsilon if n > 1 else 0.0
        err_term = float(13 * n * mpmath.mpf(C) ** (2 * n + 2) * mpmath.log(deg) / deg)
        total = main + eps_term + err_term
        coeff_bound = float((mpmath.mpf(log_B) + mpmath.log(deg + 1) / 2) / deg)
    _assert_bound_chain(nf, plan, contexts, prime0, log_B, anchor)
    return HeightReport(
        log_B=float(log_B),
        anchor_term=anchor,
        main_term=main,
        epsilon_term=eps_term,
        error_term=err_term,
        bound_total=total,
        coefficient_bound=coeff_bound,
    )


def _assert_bound_chain(nf, plan, contexts, prime0, log_B, anchor):
    m = nf.degree
    deg = plan.degree
    n = plan.n
    C = plan.C
    c = plan.c
    eps = Fraction(plan.epsilon) if plan.epsilon else Fraction(0)
    for ctx in contexts:
        # exact decomposition of m_i / deg
        lhs = Fraction(ctx.m, deg)
        rhs = (
            Fraction(1, ctx.rel_e) * Fraction(1, ctx.x - 1) * Fraction(ctx.x ** ctx.k - 1, plan.r)
            + Fraction(ctx.k, ctx.rel_e * plan.r)
            + Fraction(2 * c, ctx.rel_e * plan.r)
        )
        if lhs != rhs:
            raise InvariantError("planned exponent decomposition is not exact")
        if Fraction(ctx.x ** ctx.k - 1, plan.r) > 1 + eps:
            raise InvariantError("near-power ratio exceeds 1 + epsilon")
        if 2 * c * deg > 8 * C ** (2 * n + 1) * ctx.rel_e * plan.r:
            raise InvariantError("separation term exceeds its bound")
        with mpmath.workprec(80):
            if mpmath.mpf(ctx.k) / (ctx.rel_e * plan.r) > 3 * mpmath.mpf(C) ** n * mpmath.log(deg) / deg:
                raise InvariantError("exponent term exceeds its bound")
            lhs_f = mpmath.mpf(ctx.m) / deg
            rhs_f = (
                mpmath.mpf(1) / (ctx.rel_e * (ctx.x - 1))
                + mpmath.mpf(plan.epsilon) / (ctx.rel_e * (ctx.x - 1))
                + 11 * mpmath.mpf(C) ** (2 * n + 1) * mpmath.log(deg) / deg
            )
            if lhs_f > rhs_f * (1 + mpmath.mpf(2) ** -40):
                raise InvariantError("per-prime contribution exceeds its bound")
    with mpmath.workprec(80):
        if n >= 1 and mpmath.mpf(anchor) > 2 * n * mpmath.mpf(C) ** (2 * n + 1) * mpmath.log(deg) / deg * (
            1 + mpmath.mpf(2) ** -40
        ):
            raise InvariantError("anchor term exceeds its bound")
        # the coefficient bound splits into the anchor and per-prime parts
        lhs = mpmath.mpf(log_B) / deg + mpmath.log(deg + 1) / (2 * deg)
        rhs = mpmath.mpf(anchor)
        for ctx in contexts:
            rhs += mpmath.mpf(ctx.m) * mpmath.log(ctx.prime.q) / (deg * m)
        if lhs > rhs * (1 + mpmath.mpf(2) ** -38) + mpmath.mpf(2) ** -38:
            raise InvariantError("coefficient bound split leaks")


def exact_height(nf, coeffs, target_err=1e-9):
    """Common height of the roots of a monic irreducible polynomial over the
    field, as the averaged archimedean Mahler contribution.

    Irreducibility over the field makes all roots conjugate over the
    rationals, so every root has the same height and the polynomial height
    divided by its degree is exactly that number (finite places contribute
    nothing for monic integral coefficients).
    """
    m = nf.degree
    deg = len(coeffs) - 1
    if deg < 1 or coeffs[-1] != nf.one():
        raise ValueError("monic nonconstant polynomial expected")
    bits = max(max((abs(x).bit_length() for x in c.coords), default=1) for c in coeffs)
    base_prec = max(192, bits + 96)
    per_place_target = target_err * deg / 2
    total = mpmath.mpf(0)
    total_err = mpmath.mpf(0)
    place_logm = []
    idx = 0
    while idx < m:
        weight = 1 if idx < nf.real_count else 2
        logm, err = croots.log_mahler(
            _embedding_coeff_fn(nf, coeffs, idx),
            deg,
            target_err=per_place_target,
            base_prec=base_prec,
        )
        place_logm.append(logm)
        total += weight * mpmath.mpf(logm)
        total_err += weight * mpmath.mpf(err)
        idx += weight
    h = float(total / (deg * m))
    err = float(total_err / (deg * m))
    if err > target_err:
        raise PrecisionError("height error bound above target")
    return h, err, place_logm


def _embedding_coeff_fn(nf, coeffs, emb_idx):
    def fn(prec):
        with mpmath.workprec(prec + 32):
            roots = nf._roots(prec + 32)
            th = roots[emb_idx]
            vals = []
            errs = []
            for cf in coeffs:
                if cf.is_zero():
                    vals.append(mpmath.mpc(0))
                    errs.append(mpmath.mpf(0))
                    continue
                power = nf._to_power(cf.coords)
                acc = mpmath.mpc(0)
                mag = mpmath.mpf(0)
                for fr in reversed(power):
                    fr = Fraction(fr)
                    term = mpmath.mpf(fr.numerator) / fr.denominator
                    acc = acc * th + term
                    mag = mag * abs(th) + abs(term)
                vals.append(acc)
                errs.append(mag * mpmath.mpf(2) ** (8 - prec) + mpmath.mpf(2) ** (8 - prec))
            # force the leading coefficient exact
            vals[-1] = mpmath.mpc(1)
            errs[-1] = mpmath.mpf(0)
        return vals, errs

    return fn


def lower_bound_value(local_specs):
    """Height floor for the rational base field: half the sum of
    log(p) / (e (p^f + 1)) over the local conditions, with absolute
    ramification and residue data."""
    total = 0.0
    for p, e_abs, f_abs in local_specs:
        total += math.log(p) / (e_abs * (p ** f_abs + 1))
    return total / 2


def lower_bound_for_field(nf, local_specs):
    if nf.degree != 1:
        raise UnsupportedError("height floor implemented for the rational base field only")
    return lower_bound_value(local_specs)


_RATIONALS = None


def rational_poly_min_root_height(f, target_err=1e-9):
    """Minimum root height of a monic squarefree integer polynomial: the
    minimum over its irreducible factors of the factor's common root height."""
    from . import oracle
    from .numfield import nf_init

    global _RATIONALS
    if _RATIONALS is None:
        _RATIONALS = nf_init([-1, 1])
    best = None
    for factor in oracle.factor_monic_z(list(f)):
        coeffs = [_RATIONALS.from_int(c) for c in factor]
        h, _, _ = exact_height(_RATIONALS, coeffs, target_err=target_err)
        if best is None or h < best:
            best = h
    return best
