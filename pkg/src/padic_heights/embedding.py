"""Embedding of a ring of integers into a local field at a chosen prime.

Supported completions: primes that are unramified over their rational prime
(any residue degree).  The generator of the field maps to the root of its
minimal polynomial singled out by the chosen irreducible factor; the root is
lifted by Newton iteration from a simple residue root, entirely inside the
completion, so images of global elements are exact representatives.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvariantError, UnsupportedError
from .localfield import LocalField


@dataclass(frozen=True)
class CompletionEmbedding:
    nf: object
    prime: object
    field: LocalField  # the ambient local field E containing the completion
    theta_raw: object

    def embed(self, x):
        """Image of an algebraic integer, as a raw element of the field."""
        E = self.field
        p = self.prime.p
        power = self.nf._to_power(x.coords)
        coeffs = []
        for fr in power:
            fr = Fraction(fr)
            den = fr.denominator
            if den % p == 0:
                raise InvariantError("denominator not a p-unit")
            coeffs.append((fr.numerator * pow(den, -1, E.pM)) % E.pM)
        acc = E.rzero()
        for c in reversed(coeffs):
            acc = E.radd(E.rmul(acc, self.theta_raw), E.rfrom_int(c))
        return acc

    def embed_poly(self, coeffs):
        return [self.embed(c) for c in coeffs]


def completion_embedding(nf, prime, E):
    """Embedding of O_K into E, where E is a local field whose tower starts at
    the completion of K at the given prime."""
    p = prime.p
    if E.p != p:
        raise ValueError("local field has the wrong residue characteristic")
    if prime.e != 1:
        raise UnsupportedError("ramified completions are not supported by the local pipeline")
    min_poly = list(nf.min_poly)
    if prime.f == 1:
        root = _lift_integer_root(min_poly, (-prime.factor_lift[0]) % p, p, E.pM)
        theta_raw = E.rfrom_int(root)
    else:
        if E.f != prime.f or tuple(E.unram) != tuple(c % p for c in prime.factor_lift):
            raise UnsupportedError(
                "local field must be built on the prime's unramified factor polynomial"
            )
        from .localfield import epoly_from_int_coeffs, epoly_derivative, epoly_eval, _newton_simple

        coeffs = epoly_from_int_coeffs(E, min_poly)
        dcoeffs = epoly_derivative(E, coeffs)
        t = E.rgen_t()
        if E.rval(epoly_eval(E, dcoeffs, t)) != 0:
            raise UnsupportedError("field generator is not a simple root at the chosen factor")
        theta_raw = _newton_simple(E, coeffs, dcoeffs, t)
    emb = CompletionEmbedding(nf=nf, prime=prime, field=E, theta_raw=theta_raw)
    _check_embedding(emb)
    return emb


def _lift_integer_root(f, r0, p, pM):
    fp = [i * c for i, c in enumerate(f)][1:]

    def ev(g, x):
        acc = 0
        for c in reversed(g):
            acc = (acc * x + c) % pM
        return acc

    if ev(fp, r0) % p == 0:
        raise UnsupportedError("residue root is not simple; completion undefined here")
    r = r0
    for _ in range(pM.bit_length().bit_length() + 4):
        v = ev(f, r)
        if v == 0:
            break
        r = (r - v * pow(ev(fp, r), -1, pM)) % pM
    if ev(f, r) != 0:
        raise InvariantError("generator image did not converge")
    return r


def _check_embedding(emb):
    E = emb.field
    nf = emb.nf
    # the minimal polynomial must vanish on the image, and the uniformizing
    # generator of the prime must land at valuation e(E/F)
    img = emb.embed(nf.theta())
    acc = E.rzero()
    for c in reversed(list(nf.min_poly)):
        acc = E.radd(E.rmul(acc, img), E.rfrom_int(c))
    if E.rval(acc) is not None and E.rval(acc) < E.N:
        raise InvariantError("minimal polynomial does not vanish on the embedded generator")
    v_pi = E.rval(emb.embed(emb.prime.pi))
    if v_pi != E.e:
        raise InvariantError("uniformizer image has the wrong valuation")
