"""Galois-stable representative families for residue rings of local fields.

Given a Galois extension E/F with group G and a multiple d of |G|, the
construction produces a finite family A inside the ring of integers of E
such that

  (1) A is G-stable as a set,
  (2) every G-orbit in A has full length |G|,
  (3) reduction modulo P^k is d-to-1 and onto O_E/P^k, and
  (4) reduction modulo P^(k+c) is injective,

where the separation constant c depends only on the tower and d.  Orbits of
residues are processed in lexicographic order; a fixed-point repair step
displaces each representative until its orbit separates, after which the
whole orbit is copied out at d/|stabilizer| uniformizer offsets.  All four
properties are re-checked exhaustively on every construction.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvariantError, PrecisionError, UnsupportedError
from .localfield import relative_ef, residue_enum

_EXHAUSTIVE_CAP = 65536


@dataclass(frozen=True)
class RepSet:
    field: object
    galois: object
    d: int
    k: int
    c: int
    c0: int
    c1: int
    alpha: object  # raw primitive element (unused when G is trivial)
    theta: object  # raw uniformizer of the base field
    elements: tuple  # raws
    orbits: tuple  # tuples of indices into elements


def c_constant(E, F, G, d):
    """Separation constant for the tower, with the displacement data used by
    the construction: (c, alpha, theta, c0, c1)."""
    if d % G.size:
        raise ValueError("d must be a multiple of the group order")
    e_rel, _ = relative_ef(E, F)
    theta = E.rfrom_int(E.p) if F is not E else E.runiformizer()
    if G.size == 1:
        alpha = E.rone()
        c0 = 0
    else:
        alpha = E.primitive_element()
        if E.rval(alpha) != 0:
            raise InvariantError("primitive element must be a unit")
        c0 = 0
        for idx in G.non_identity():
            diff = E.rsub(alpha, G.apply_raw(idx, alpha))
            v = E.rval(diff)
            if v is None:
                raise PrecisionError("generator displacement valuation undecidable")
            c0 = max(c0, v)
    c1 = G.size + -(-c0 // e_rel)
    c = e_rel * (d + c1)
    # explicit tower bound (holds whenever alpha generates the ring, which the
    # primitive-element check certifies); F absolute ramification enters
    f_abs_ram = F.e if F is not E else E.e
    bound = Fraction(e_rel) * (d + G.size + Fraction(f_abs_ram, E.p - 1) + 1)
    if G.size > 1 and Fraction(c) > bound:
        raise InvariantError("separation constant exceeds its explicit bound")
    return c, alpha, theta, c0, c1


def build_repset(E, F, G, d, k):
    """Construct the representative family at level k (see module docstring)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    c, alpha, theta, c0, c1 = c_constant(E, F, G, d)
    if k + c > E.N:
        raise PrecisionError("k + c exceeds the certified precision; rebuild the field larger")
    e_rel, _ = relative_ef(E, F)
    k0 = -(-k // e_rel)
    q = E.q_res
    if d * q ** k > _EXHAUSTIVE_CAP:
        raise UnsupportedError("representative family too large for exhaustive certification")
    lifts = residue_enum(E, k)
    seen = set()
    elements = []
    orbits = []
    theta_pows = {}

    def theta_power(n):
        if n not in theta_pows:
            theta_pows[n] = E.rpow(theta, n)
        return theta_pows[n]

    for a0 in lifts:
        key0 = E.rcanon(a0, k)
        if key0 in seen:
            continue
        orbit_keys = {key0}
        for idx in G.non_identity():
            orbit_keys.add(E.rcanon(G.apply_raw(idx, a0), k))
        seen |= orbit_keys
        stab = G.size // len(orbit_keys)
        a = a0
        if G.size > 1:
            n0 = _find_displacement(E, G, a, alpha, e_rel, k0)
            a = E.radd(a, E.rmul(theta_power(n0 + k0), alpha))
        copies = d // stab
        for j in range(copies):
            off = theta_power(k0 + c1 + j)
            orbit_members = []
            for idx in range(G.size):
                elem = E.radd(G.apply_raw(idx, a) if idx != G.identity else a, off)
                orbit_members.append(len(elements))
                elements.append(elem)
            orbits.append(tuple(orbit_members))

    rep = RepSet(
        field=E,
        galois=G,
        d=d,
        k=k,
        c=c,
        c0=c0,
        c1=c1,
        alpha=alpha,
        theta=theta,
        elements=tuple(elements),
        orbits=tuple(orbits),
    )
    check_properties(rep)
    return rep


def _find_displacement(E, G, a, alpha, e_rel, k0):
    """Smallest n >= 0 whose displacement cannot collide with any existing
    difference valuation; bounded by |G| - 1."""
    for n in range(G.size):
        ok = True
        for idx in G.non_identity():
            lhs = E.rval(E.rsub(a, G.apply_raw(idx, a)))
            rhs_shift = E.rval(E.rsub(alpha, G.apply_raw(idx, alpha)))
            if lhs is not None and rhs_shift is not None and lhs == e_rel * (k0 + n) + rhs_shift:
                ok = False
                break
        if ok:
            return n
    raise InvariantError("displacement search exceeded the group order")


def check_properties(rep):
    """Exhaustively verify properties (1)-(4); raises InvariantError."""
    E = rep.field
    G = rep.galois
    level_sep = rep.k + rep.c
    if level_sep > E.N_int:
        raise PrecisionError("certification level beyond stored precision")
    keys_sep = [E.rcanon(x, level_sep) for x in rep.elements]
    # (4) injectivity mod P^(k+c)
    if len(set(keys_sep)) != len(rep.elements):
        raise InvariantError("family is not injective modulo P^(k+c)")
    index_by_key = {key: i for i, key in enumerate(keys_sep)}
    # (1) G-stability as a set, and (2) full orbits
    for i, x in enumerate(rep.elements):
        image_indices = set()
        for idx in range(G.size):
            key = E.rcanon(G.apply_raw(idx, x), level_sep)
            if key not in index_by_key:
                raise InvariantError("family is not stable under the group action")
            image_indices.add(index_by_key[key])
        if len(image_indices) != G.size:
            raise InvariantError("an orbit has length below the group order")
    # (3) d-to-1 and onto mod P^k
    counts = {}
    for x in rep.elements:
        key = E.rcanon(x, rep.k)
        counts[key] = counts.get(key, 0) + 1
    if len(counts) != E.q_res ** rep.k:
        raise InvariantError("reduction mod P^k is not onto")
    if any(v != rep.d for v in counts.values()):
        raise InvariantError("reduction mod P^k is not d-to-1")
    if len(rep.elements) != rep.d * E.q_res ** rep.k:
        raise InvariantError("family has the wrong cardinality")


def injective_at(rep, level):
    """Whether reduction modulo P^level stays injective (monotonicity probe)."""
    E = rep.field
    if level > E.N_int:
        raise PrecisionError("level beyond stored precision")
    keys = {E.rcanon(x, level) for x in rep.elements}
    return len(keys) == len(rep.elements)
