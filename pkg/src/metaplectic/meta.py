"""Genuine-representation parameters and both directions of the
supersingular / twist-invariant-Galois correspondence.

Irreducible genuine representations are stored as finite parameter
records: a supersingular is (r, eta) with 0 <= r <= p-1, r != (p-1)/2
and a tame twist eta; a principal series is classified by the pair of
restrictions to the squares S.  No infinite-dimensional space is ever
materialized; the image formulas are parameter-to-parameter.

The image of a supersingular (r, eta) has underlying degree-4 induced
parameter with exponent (p^2+1)/2 * s' (s' = p - 2r or 3p - 2r), tame
twist r - 1, and unramified value (-1)^{(p-1)/2} (r!)^2 (r'!)^2, all
shifted by eta.  Over a fixed coefficient field the unramified value of
an attainable parameter therefore ranges over a coset of fourth powers;
the enumeration of qualifying Galois parameters carries that norm
condition (an unattainable value becomes attainable after enlarging the
field), and invert_ss_image reports exactly this failure mode.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coeff import FieldSpec, factorial_in
from .chars import SChar, TameChar, char_restrict_S, quadratic_chars
from .galois import (
    InducedParams,
    canonicalize,
    is_half_twist_invariant,
    iso_test,
    lemma1_classify,
    primitive,
    quad_twist,
)
from .metagroup import chi_z

__all__ = [
    "SSRep",
    "PSRep",
    "HeckeExtension",
    "MetaPhiGamma",
    "irr_iso_test",
    "hecke_cokernel",
    "meta_ind",
    "meta_irred_test",
    "ps_image",
    "ss_image",
    "invert_ss_image",
    "verify_bijection",
    "enumerate_tame_chars",
    "least_nonsquare_unit",
    "coset_quad_chars",
    "ss_class_key",
    "theta_candidates",
]


@dataclass(frozen=True)
class SSRep:
    """A genuine supersingular parameter (r, eta)."""

    spec: FieldSpec
    r: int
    eta: TameChar

    def __post_init__(self):
        p = self.spec.p
        if not 0 <= self.r <= p - 1:
            raise ValueError("parameter out of range")
        if self.r == (p - 1) // 2:
            raise ValueError("excluded parameter")

    @classmethod
    def plain(cls, spec, r):
        return cls(spec, r, TameChar.trivial(spec))


@dataclass(frozen=True)
class PSRep:
    """A genuine principal series, classified by the restrictions to S."""

    chi1_s: SChar
    chi2_s: SChar

    @property
    def spec(self):
        return self.chi1_s.spec

    @classmethod
    def from_chars(cls, chi1, chi2):
        return cls(char_restrict_S(chi1), char_restrict_S(chi2))

    @classmethod
    def from_hecke(cls, spec, r, lam, eta=None):
        """The principal series attached to a nonzero Hecke eigenvalue.

        The underlying torus-of-squares character sends diag(p^2, 1) to
        lam^{-1}, diag(1, p^2) to lam and is 1 (x) omega^r on units; a
        twist eta multiplies both components by eta restricted to S.
        """
        if lam.is_zero():
            raise ValueError("nonzero Hecke eigenvalue required")
        if eta is None:
            eta = TameChar.trivial(spec)
        u2 = eta.unram ** 2
        chi1 = SChar(lam.inv() * u2, eta.tame)
        chi2 = SChar(lam * u2, r + eta.tame)
        return cls(chi1, chi2)


@dataclass(frozen=True)
class HeckeExtension:
    """The lambda = 0 cokernel: an extension of two supersingulars.

    constituents is None exactly at r = (p-1)/2, where the quotient is a
    split sum whose pieces fall outside the (r, eta) parameter chart.
    """

    split: bool
    constituents: tuple | None


def hecke_cokernel(spec, r, lam):
    """Cokernel of T - lam on the spherical universal module at weight r."""
    p = spec.p
    if not 0 <= r <= p - 1:
        raise ValueError("parameter out of range")
    if not lam.is_zero():
        return PSRep.from_hecke(spec, r, lam)
    half = (p - 1) // 2
    if r == half:
        return HeckeExtension(split=True, constituents=None)
    constituents = (
        SSRep.plain(spec, r),
        SSRep(spec, p - 1 - r, TameChar.omega_power(spec, r)),
    )
    return HeckeExtension(split=False, constituents=constituents)


def _swap_partner(p, r):
    half = (p - 1) // 2
    if 0 < r < half:
        return half - r
    if half < r < p - 1:
        return 3 * half - r
    return None


def ss_class_key(rep):
    """A canonical isomorphism-class key for a supersingular parameter.

    The class of (r, eta) is determined by r, the tame exponent mod
    (p-1)/2 and the fourth power of eta(p), up to the single partner
    identification (r, tau) ~ (partner(r), tau + r)."""
    p = rep.spec.p
    half = (p - 1) // 2
    tau = rep.eta.tame % half
    w4 = (rep.eta.unram ** 4).coeffs
    cands = [(rep.r, tau, w4)]
    partner = _swap_partner(p, rep.r)
    if partner is not None:
        cands.append((partner, (tau + rep.r) % half, w4))
    return min(cands)


def irr_iso_test(a, b):
    """Isomorphism of absolutely irreducible genuine parameters.

    Supersingular pairs compare through their class keys (the r-partner
    rule with the tame and fourth-power conditions); principal series
    compare through the restrictions to S; mixed comparisons are False.
    """
    if isinstance(a, SSRep) and isinstance(b, SSRep):
        if a.spec != b.spec:
            raise ValueError("incomparable")
        return ss_class_key(a) == ss_class_key(b)
    if isinstance(a, PSRep) and isinstance(b, PSRep):
        return a.chi1_s == b.chi1_s and a.chi2_s == b.chi2_s
    return False


def least_nonsquare_unit(p):
    for u in range(2, p):
        if pow(u, (p - 1) // 2, p) == p - 1:
            return u
    raise ValueError("no nonsquare unit (p must be odd)")


def coset_quad_chars(p):
    """The quadratic characters chi_g for the fixed coset representatives
    {1, u0, p, u0 p} of the squares, u0 the least positive nonsquare."""
    u0 = least_nonsquare_unit(p)
    return [chi_z(g, p) for g in (1, u0, p, u0 * p)]


@dataclass(frozen=True)
class MetaPhiGamma:
    """A metaplectic module in parameter form: the character of the
    squares acting, a base object, and its orbit under the 4 quadratic
    twists (indexed by the coset representatives {1, u0, p, u0 p})."""

    s_char: SChar
    base: object
    summands: tuple


def _summand_params(obj):
    if isinstance(obj, InducedParams):
        return obj
    raise ValueError("undecidable at this rank")


def meta_ind(s_char, base):
    """Induction from the squares: the 4 coset summands of quadratic twists."""
    quads = coset_quad_chars(s_char.spec.p)
    if isinstance(base, InducedParams):
        summands = tuple(quad_twist(base, q) for q in quads)
    elif isinstance(base, TameChar):
        base = InducedParams(1, base.tame, base.unram)
        summands = tuple(quad_twist(base, q) for q in quads)
    else:
        from .phigamma import PhiGammaModule, twist as module_twist
        from .chars import quadchar_to_tame

        if not isinstance(base, PhiGammaModule):
            raise ValueError("undecidable at this rank")
        summands = tuple(
            module_twist(base, quadchar_to_tame(q, base.spec)) for q in quads
        )
    return MetaPhiGamma(s_char, base, summands)


def _primitive_root(p):
    for g in range(2, p):
        seen = {pow(g, k, p) for k in range(1, p)}
        if len(seen) == p - 1:
            return g
    raise ValueError("no primitive root")


def classify_rank1(D):
    """Parameters of a rank-1 module, read off its phi entry and one unit."""
    from .classify import CyclicForm, normalize_cyclic, params_of_normal_form

    if D.n != 1:
        raise ValueError("undecidable at this rank")
    f = D.phi[0][0]
    v = f.valuation
    if v is None:
        raise ValueError("not etale")
    d = f.leading_coeff()
    unit = f.shift(-v).scale(d.inv())
    p = D.spec.p
    g = _primitive_root(p)
    lead = D.gamma_matrix(g)[0][0].leading_coeff()
    b1 = None
    for a in range(p - 1):
        if D.spec.from_int(pow(g, a, p)) == lead:
            b1 = a
            break
    if b1 is None:
        raise ValueError("undecidable at this rank")
    form = CyclicForm(D.spec, 1, (d,), (v,), (b1,), (unit,))
    nf, _ = normalize_cyclic(form, D.prec)
    return params_of_normal_form(nf)


def meta_irred_test(M):
    """Irreducibility of a metaplectic parameter object.

    True when the 4 twist summands are pairwise non-isomorphic, or when
    the orbit collapses onto a single absolutely irreducible base.
    """
    summands = []
    for s in M.summands:
        if isinstance(s, InducedParams):
            summands.append(s)
        else:
            summands.append(classify_rank1(s))
    keys = [canonicalize(s).sort_key() for s in summands]
    if len(set(keys)) == len(keys):
        return True
    base = M.base
    if isinstance(base, tuple):
        return False
    if isinstance(base, InducedParams):
        p = base.spec.p
        H = base.H % (p ** base.n - 1)
        return H != 0 and primitive(H, base.n, p)
    raise ValueError("undecidable at this rank")


def ps_image(chi1, chi2):
    """The metaplectic image of the genuine principal series of (chi1, chi2).

    The S-action is (chi1 chi2)|_S; the base is the rank-1 parameter of
    chi2 and the summands are its 4 quadratic twists, so the underlying
    degree-4 object is the sum of the characters chi2 * epsilon.
    """
    s_char = char_restrict_S(chi1.mul(chi2))
    base = InducedParams(1, chi2.tame, chi2.unram)
    return meta_ind(s_char, base)


def ss_lam0(spec, r):
    """The closed-form fourth power of the unramified value at (r, eta = 1)."""
    p = spec.p
    half = (p - 1) // 2
    r_prime = half - r if r < half else 3 * half - r
    sign = spec.from_int((-1) ** (half % 2))
    return sign * factorial_in(spec, r) ** 2 * factorial_in(spec, r_prime) ** 2


def ss_sprime(p, r):
    half = (p - 1) // 2
    return p - 2 * r if r < half else 3 * p - 2 * r


def ss_image(rep):
    """The metaplectic image of a supersingular parameter (r, eta).

    Base parameter: degree 4, exponent (p^2+1)/2 * s' with the tame
    twist r - 1 + eta absorbed, unramified value lam0(r) eta(p)^4; the
    S-character is omega^r * eta^2 restricted to S.
    """
    spec, r, eta = rep.spec, rep.r, rep.eta
    p = spec.p
    step = (p ** 4 - 1) // (p - 1)
    H = (p * p + 1) // 2 * ss_sprime(p, r) + (r - 1 + eta.tame) * step
    lam = ss_lam0(spec, r) * eta.unram ** 4
    base = InducedParams(4, H, lam)
    s_char = SChar(eta.unram ** 4, r + 2 * eta.tame)
    return meta_ind(s_char, base)


def _r_of_hprime(p, hprime):
    return (p - hprime) // 2 if hprime <= p else (3 * p - hprime) // 2


def _is_fourth_power(x):
    from math import gcd

    q = x.spec.order
    return (x ** ((q - 1) // gcd(4, q - 1))).is_one()


def theta_candidates(M):
    """The four candidate actions of the covering center on a twist-invariant
    image, as a diagnostic.

    When the underlying parameter is absolutely irreducible, any two
    compatible center actions differ by a character of order at most 2;
    the candidates are therefore the quadratic twists of the recorded
    one.  Deciding which candidate extends the Borel action to the full
    cover is out of scope (it needs the functor back to representations),
    so the list is reported rather than resolved.
    """
    spec = M.s_char.spec
    return [(eps, M.s_char) for eps in quadratic_chars(spec)]


def invert_ss_image(M, spec=None):
    """Recover a supersingular parameter from a degree-4 Galois parameter.

    Classifies the twist-invariant exponent to get h' (hence r), then
    solves for the tame twist eta by brute force over the finite family,
    smallest eta first.  Raises when the parameter is not attainable:
    either it is not twist-invariant-irreducible, or its unramified
    value is not a norm from the field (enlarge m).
    """
    if isinstance(M, MetaPhiGamma):
        M = _summand_params(M.base)
    if spec is None:
        spec = M.spec
    p = spec.p
    hprime = lemma1_classify(M)
    if hprime is None:
        raise ValueError("not twist-invariant-irreducible")
    r = _r_of_hprime(p, hprime)
    for tame in range(p - 1):
        for u in spec.nonzero_elements():
            rep = SSRep(spec, r, TameChar(u, tame))
            if iso_test(ss_image(rep).base, M):
                return rep
    raise ValueError("lambda not a norm in field")


def enumerate_tame_chars(spec):
    p = spec.p
    for tame in range(p - 1):
        for u in spec.nonzero_elements():
            if not u.is_zero():
                yield TameChar(u, tame)


def _image_key(rep):
    base = canonicalize(ss_image(rep).base)
    return (base.H, base.Lam.coeffs)


def verify_bijection(spec):
    """Enumerate both sides of the supersingular correspondence and report.

    The supersingular side runs over all (r, eta) with eta in the tame
    family over the field, quotiented by the isomorphism test; the Galois
    side runs over degree-4 parameters that are primitive, invariant
    under the tame quadratic twist and whose unramified value satisfies
    the fourth-power norm condition of the field.  The report carries the
    class counts, injectivity and surjectivity of the forward map, both
    up-to-twist counts and the (r, h') pair table.
    """
    p = spec.p
    mod = p ** 4 - 1
    step = mod // (p - 1)
    admissible = [r for r in range(p) if r != (p - 1) // 2]

    class_to_image = {}
    consistent = True
    for r in admissible:
        for eta in enumerate_tame_chars(spec):
            rep = SSRep(spec, r, eta)
            key = ss_class_key(rep)
            img = _image_key(rep)
            if key in class_to_image:
                if class_to_image[key] != img:
                    consistent = False
            else:
                class_to_image[key] = img
    ss_count = len(class_to_image)
    image_set = set(class_to_image.values())
    injective = len(image_set) == ss_count

    def orbit_min(x):
        return min(x * p ** i % mod for i in range(4))

    canonical_H = set()
    for H in range(1, mod):
        if is_half_twist_invariant(H, p) and primitive(H, 4, p):
            canonical_H.add(orbit_min(H))
    qualifying = set()
    for H in canonical_H:
        hprime = lemma1_classify(InducedParams(4, H, spec.one()))
        assert hprime is not None
        lam0 = ss_lam0(spec, _r_of_hprime(p, hprime))
        for lam in spec.nonzero_elements():
            if _is_fourth_power(lam * lam0.inv()):
                qualifying.add((H, lam.coeffs))
    surjective = image_set == qualifying

    # up-to-twist orbits on the Galois side: closure of the canonical
    # exponents under Frobenius and tame shifts
    seen = set()
    twist_classes = 0
    for H in sorted(canonical_H):
        if H in seen:
            continue
        twist_classes += 1
        seen.add(H)
        stack = [H]
        while stack:
            x = stack.pop()
            for i in range(4):
                y = orbit_min((x * p ** i + step) % mod)
                if y in canonical_H and y not in seen:
                    seen.add(y)
                    stack.append(y)
    ss_twist_keys = set()
    for r in admissible:
        partner = _swap_partner(p, r)
        ss_twist_keys.add(r if partner is None else min(r, partner))
    ss_twist_classes = len(ss_twist_keys)

    pairs = sorted(
        (r, lemma1_classify(ss_image(SSRep.plain(spec, r)).base)) for r in admissible
    )

    from math import gcd

    return {
        "schema": 1,
        "p": p,
        "m": spec.m,
        "ss_classes": ss_count,
        "galois_classes": len(qualifying),
        "galois_classes_all_lam": len(canonical_H) * (spec.order - 1),
        "lam_coset_index": gcd(4, spec.order - 1),
        "injective": injective,
        "surjective": surjective,
        "class_function_consistent": consistent,
        "up_to_twist_ss": ss_twist_classes,
        "up_to_twist_galois": twist_classes,
        "pairs": pairs,
    }
