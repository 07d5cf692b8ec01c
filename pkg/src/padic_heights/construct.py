"""Pipeline assembling the global polynomial with prescribed local splitting.

Per prime: a Galois-stable representative family at the planned level, its
monic product with base-field-certified coefficients, and a global
approximant agreeing to the planned depth.  The per-prime approximants are
merged with an anchor polynomial (irreducible modulo an extra prime) by the
Chinese Remainder Theorem, every coefficient pulled to a short coset
representative.  All structural conditions are re-verified on the finished
polynomial rather than trusted from the builder; precision exhaustion
anywhere triggers a rebuild at doubled working precision.
"""

import hashlib
import random
from dataclasses import dataclass

import mpmath

from . import degree as degree_mod
from . import fpoly
from .embedding import completion_embedding
from .errors import InvariantError, PrecisionError, UnsupportedError
from .localfield import (
    epoly_derivative,
    epoly_eval,
    epoly_product_of_linear,
    f_part,
    galois_group,
    lf_init,
)
from .numfield import (
    crt_reduce,
    decompose_prime,
    ideal_mul,
    ideal_pow,
    reduce_mod_prime,
    small_rep,
)
from .repset import build_repset

_DEFAULT_SLACK = 10
_MAX_RETRIES = 3


@dataclass(frozen=True)
class PrimeSpec:
    """User-facing description of one local condition."""

    p: int
    choice: int = 0
    rel_e: int = 1
    rel_f: int = 1
    unram_poly: tuple = None
    eisenstein_poly: tuple = None


@dataclass
class PrimeContext:
    spec: PrimeSpec
    prime: object
    E: object
    F: object
    G: object
    embedding: object
    x: int
    k: int
    m: int
    N: int
    rep: object = None
    subset: tuple = None
    gtilde: list = None
    g_approx: list = None
    tolerance: int = None

    @property
    def rel_e(self):
        return self.spec.rel_e

    @property
    def rel_f(self):
        return self.spec.rel_f


@dataclass(frozen=True)
class GlobalPolynomial:
    nf: object
    coeffs: tuple  # AlgebraicInt, ascending, monic
    degree: int
    provenance: dict

    def coefficient_coords(self):
        return [list(c.coords) for c in self.coeffs]


@dataclass
class ConstructionResult:
    nf: object
    plan: object
    contexts: list
    prime0: object
    g0: list
    g0_hash: str
    gpoly: GlobalPolynomial
    modulus: object
    log_B: float
    retries: int
    seed: int


def select_invariant_subset(rep, size):
    """The first size/|G| orbits of the family, in construction order."""
    G = rep.galois
    if size % G.size:
        raise InvariantError("subset size must be divisible by the group order")
    if size > len(rep.elements):
        raise ValueError("family too small for the requested subset")
    orbits_needed = size // G.size
    subset = []
    for orbit in rep.orbits[:orbits_needed]:
        for idx in orbit:
            subset.append(rep.elements[idx])
    if len(subset) != size:
        raise InvariantError("orbit bookkeeping mismatch")
    E = rep.field
    level = min(rep.k + rep.c, E.N)
    keys = {E.rcanon(x, level) for x in subset}
    if len(keys) != size:
        raise InvariantError("subset lost injectivity")
    for idx in G.non_identity():
        for x in subset:
            if E.rcanon(G.apply_raw(idx, x), level) not in keys:
                raise InvariantError("subset is not stable under the group action")
    return tuple(subset)


def build_local_poly(E, F, subset):
    """Monic product over the subset, coefficients certified in the base field."""
    coeffs = epoly_product_of_linear(E, subset)
    for c in coeffs:
        f_part(E, F, c)
    return coeffs


def check_derivative_valuations(E, coeffs, subset, bound):
    """Every root's derivative valuation stays at or below the planned bound."""
    dcoeffs = epoly_derivative(E, coeffs)
    worst = -1
    for x in subset:
        v = E.rval(epoly_eval(E, dcoeffs, x))
        if v is None:
            raise PrecisionError("derivative valuation undecidable on the family")
        if v > bound:
            raise InvariantError("derivative valuation exceeds the planned bound")
        worst = max(worst, v)
    return worst


def digit_table(nf, prime, embedding):
    """Short representatives of O_K mod the prime, keyed by residue index."""
    E = embedding.field
    table = {}
    for r in prime.hnf.residues():
        d = small_rep(r, prime.hnf)
        key = E.residue_field.to_index(E.rresidue(embedding.embed(d)))
        if key in table:
            raise InvariantError("digit residues collide")
        table[key] = d
    if len(table) != prime.q:
        raise InvariantError("digit table incomplete")
    return table


def approximate_to_global(nf, prime, embedding, gtilde, m, rel_e):
    """Monic polynomial over O_K within valuation rel_e*m of the local one,
    coefficient by coefficient (uniformizer-adic digit expansion)."""
    E = embedding.field
    tolerance = rel_e * m
    if tolerance + 2 > E.N_int:
        raise PrecisionError("approximation depth exceeds stored precision")
    digits = digit_table(nf, prime, embedding)
    pi_raw = embedding.embed(prime.pi)
    if E.rval(pi_raw) != E.e:
        raise InvariantError("uniformizer image valuation mismatch")
    out = []
    for j, t in enumerate(gtilde):
        if j == len(gtilde) - 1:
            out.append(nf.one())
            continue
        acc_digits = []
        cur = t
        for _ in range(m):
            key = E.residue_field.to_index(E.rresidue(cur))
            if key not in digits:
                raise InvariantError("coefficient residue leaves the base field")
            d = digits[key]
            acc_digits.append(d)
            cur = E.rdiv(E.rsub(cur, embedding.embed(d)), pi_raw)
        coeff = nf.zero()
        for d in reversed(acc_digits):
            coeff = coeff * prime.pi + d
        v = E.rval(E.rsub(embedding.embed(coeff), t))
        if v is not None and v < tolerance:
            raise PrecisionError("approximation tolerance not reached")
        out.append(coeff)
    return out, tolerance


def choose_g0(nf, prime0, degree, rng):
    """Monic polynomial of the given degree whose reduction modulo the anchor
    prime is irreducible (random search, full degree-scan certificate on the
    winner)."""
    F0 = prime0.residue_field
    residues = prime0.hnf.residues()
    while True:
        rbar = [F0.from_index(rng.randrange(F0.q)) for _ in range(degree)] + [F0.one]
        if degree > 1 and F0.is_zero(rbar[0]):
            continue
        if not fpoly.is_irreducible(fpoly.pnorm(rbar, F0), F0):
            continue
        ok, checked = fpoly.degree_scan_certificate(rbar, F0)
        if not ok:
            continue
        g0 = [_lift_residue(nf, prime0, c) for c in rbar[:-1]] + [nf.one()]
        for c, want in zip(g0, rbar):
            if reduce_mod_prime(prime0, c) != want:
                raise InvariantError("anchor coefficient lift mismatch")
        return g0, checked


def _lift_residue(nf, prime, rbar):
    F0 = prime.residue_field
    if F0.f == 1:
        return nf.from_int(int(rbar))
    theta = nf.theta()
    acc = nf.zero()
    for c in reversed(rbar):
        acc = acc * theta + nf.from_int(int(c))
    return acc


def compute_m(d, rel_e, x, k, c):
    geom = (x ** k - 1) // (x - 1)
    if d % rel_e:
        raise InvariantError("group order is not divisible by the ramification index")
    return (d // rel_e) * (geom + k + 2 * c)


def crt_merge(nf, g0, prime0, contexts, plan, seed, g0_hash):
    """Merge the anchor and the per-prime approximants into the global monic
    polynomial with short coefficients."""
    ideals = [prime0.hnf] + [ideal_pow(ctx.prime.hnf, ctx.m) for ctx in contexts]
    modulus = ideals[0]
    for a in ideals[1:]:
        modulus = ideal_mul(modulus, a)
    expected = prime0.hnf.norm
    for ctx in contexts:
        expected *= ctx.prime.hnf.norm ** ctx.m
    if modulus.norm != expected:
        raise InvariantError("modulus norm is not multiplicative")
    degree = plan.degree
    coeffs = []
    for j in range(degree):
        residues = [(g0[j], ideals[0])]
        for ctx, ideal in zip(contexts, ideals[1:]):
            residues.append((ctx.g_approx[j], ideal))
        merged = crt_reduce(residues)
        coeffs.append(small_rep(merged, modulus))
    coeffs.append(nf.one())
    with mpmath.workprec(128):
        log_b = mpmath.log(nf.delta) + mpmath.log(prime0.hnf.norm) / nf.degree
        for ctx in contexts:
            log_b += ctx.m * mpmath.log(ctx.prime.hnf.norm) / nf.degree
        log_b = float(log_b)
    gpoly = GlobalPolynomial(
        nf=nf,
        coeffs=tuple(coeffs),
        degree=degree,
        provenance={
            "rho": plan.rho,
            "epsilon": plan.epsilon,
            "seed": seed,
            "m": [ctx.m for ctx in contexts],
            "p0": prime0.p,
            "g0_sha256": g0_hash,
        },
    )
    check_global_conditions(nf, gpoly, g0, prime0, contexts, ideals, modulus)
    return gpoly, modulus, log_b


def check_global_conditions(nf, gpoly, g0, prime0, contexts, ideals, modulus):
    """Re-verify the four structural conditions independently of the builder."""
    if len(gpoly.coeffs) != gpoly.degree + 1 or gpoly.coeffs[-1] != nf.one():
        raise InvariantError("global polynomial is not monic of the planned degree")
    for j, c in enumerate(gpoly.coeffs):
        other = g0[j] if j < len(g0) else nf.one()
        if not ideals[0].contains(c - other):
            raise InvariantError("anchor congruence fails at coefficient %d" % j)
    for ctx, ideal in zip(contexts, ideals[1:]):
        for j, c in enumerate(gpoly.coeffs[:-1]):
            if not ideal.contains(c - ctx.g_approx[j]):
                raise InvariantError("local congruence fails at coefficient %d" % j)
    # coefficient size bound
    m = nf.degree
    bits = max(
        (max((abs(x).bit_length() for x in c.coords), default=1) for c in gpoly.coeffs),
        default=1,
    )
    prec = bits + modulus.norm.bit_length() + 96
    with mpmath.workprec(prec):
        bound = (
            mpmath.mpf(m) ** mpmath.mpf("1.5")
            * mpmath.mpf(2) ** (m * (m - 1) // 2)
            * mpmath.sqrt(abs(nf.disc))
            * mpmath.mpf(modulus.norm) ** (mpmath.mpf(1) / m)
        )
        for c in gpoly.coeffs[:-1]:
            for val in nf.embed(c, prec):
                if abs(val) > bound:
                    raise InvariantError("coefficient size bound violated")


def run_construction(nf, prime_specs, rho, epsilon, seed, slack=None):
    """Full pipeline; retries at doubled precision on precision exhaustion."""
    slack = _DEFAULT_SLACK if slack is None else slack
    base = _prepare_primes(nf, prime_specs)
    n = len(base)
    d = 1
    for item in base:
        d *= item["d_i"]
    big_c = max(
        [nf.degree, abs(nf.disc)] + [item["d_i"] for item in base] + [item["x"] for item in base] + [2]
    )
    plan = degree_mod.select_degree(
        n=n,
        x=tuple(item["x"] for item in base),
        rho=rho,
        epsilon=epsilon,
        d=d,
        C=big_c,
    )
    retries = 0
    current_slack = slack
    while True:
        try:
            contexts = [
                _build_context(nf, item, plan, d, k, current_slack)
                for item, k in zip(base, plan.k)
            ]
            prime0 = _anchor_prime(nf, [item["spec"].p for item in base])
            rng = random.Random(seed)
            g0, _ = choose_g0(nf, prime0, plan.degree, rng)
            g0_hash = hashlib.sha256(
                repr([list(c.coords) for c in g0]).encode()
            ).hexdigest()
            gpoly, modulus, log_b = crt_merge(nf, g0, prime0, contexts, plan, seed, g0_hash)
            return ConstructionResult(
                nf=nf,
                plan=plan,
                contexts=contexts,
                prime0=prime0,
                g0=g0,
                g0_hash=g0_hash,
                gpoly=gpoly,
                modulus=modulus,
                log_B=log_b,
                retries=retries,
                seed=seed,
            )
        except PrecisionError:
            retries += 1
            if retries > _MAX_RETRIES:
                raise
            current_slack *= 2


def _prepare_primes(nf, prime_specs):
    out = []
    seen = set()
    for spec in prime_specs:
        if spec.p in seen:
            raise ValueError("primes must be distinct")
        seen.add(spec.p)
        primes = decompose_prime(nf, spec.p)
        if spec.choice >= len(primes):
            raise ValueError("choice index out of range for prime %d" % spec.p)
        prime = primes[spec.choice]
        if prime.e != 1:
            raise UnsupportedError("ramified completions are outside the local pipeline")
        if prime.f > 1 and (spec.rel_e != 1 or spec.rel_f != 1):
            raise UnsupportedError("relative extensions over a nontrivial completion")
        d_i = spec.rel_e * spec.rel_f
        x = prime.q ** spec.rel_f
        out.append({"spec": spec, "prime": prime, "d_i": d_i, "x": x})
    return out


def _build_context(nf, item, plan, d, k, slack):
    spec = item["spec"]
    prime = item["prime"]
    c = plan.c
    m = compute_m(d, spec.rel_e, item["x"], k, c)
    N = max(k + c, spec.rel_e * m) + slack
    unram = None
    eis = None
    if prime.f > 1:
        unram = list(prime.factor_lift)
    else:
        if spec.rel_f > 1:
            unram = list(spec.unram_poly) if spec.unram_poly else _default_unram(prime.p, spec.rel_f)
        if spec.rel_e > 1:
            eis = list(spec.eisenstein_poly) if spec.eisenstein_poly else _default_eisenstein(prime.p, spec.rel_e)
    E = lf_init(prime.p, unram, eis, precision=N)
    if E.q_res != item["x"]:
        raise InvariantError("residue field size mismatch")
    F = E if (spec.rel_e == 1 and spec.rel_f == 1) else E.prime_base()
    G = galois_group(E, F)
    if G.size != item["d_i"]:
        raise InvariantError("Galois group order does not match the requested extension")
    emb = completion_embedding(nf, prime, E)
    ctx = PrimeContext(
        spec=spec, prime=prime, E=E, F=F, G=G, embedding=emb, x=item["x"], k=k, m=m, N=N
    )
    ctx.rep = build_repset(E, F, G, d, k)
    if ctx.rep.c > c:
        raise InvariantError("tower separation constant exceeds the global constant")
    ctx.subset = select_invariant_subset(ctx.rep, plan.degree)
    ctx.gtilde = build_local_poly(E, F, ctx.subset)
    geom = (item["x"] ** k - 1) // (item["x"] - 1)
    check_derivative_valuations(E, ctx.gtilde, ctx.subset, d * (geom + c))
    ctx.g_approx, ctx.tolerance = approximate_to_global(nf, prime, emb, ctx.gtilde, m, spec.rel_e)
    return ctx


def _default_unram(p, f):
    return [int(c) for c in fpoly.smallest_irreducible(f, fpoly.GF(p))]


def _default_eisenstein(p, e):
    return [-p] + [0] * (e - 1) + [1]


def _anchor_prime(nf, used):
    p0 = 2
    while p0 in used or not _is_prime(p0):
        p0 += 1
    primes = decompose_prime(nf, p0)
    return min(primes, key=lambda pr: (pr.hnf.norm, pr.choice_index))


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True
