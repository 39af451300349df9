"""Parameterized mod-p Galois representations induced from unramified subfields.

A parameter (n, H, Lam) stands for the n-dimensional representation
obtained by inducing the H-th power of the level-n fundamental character
from the degree-n unramified subfield and twisting by an unramified
character; only the n-th power Lam of the unramified value is stored,
which is a complete extension-free invariant.  Tame twists are absorbed
into H through omega = (level-n character)^{(p^n-1)/(p-1)}, so the pair
(H mod p^n - 1, Lam) is a unique representation of the parameter.

Isomorphism testing is Frobenius-orbit equality on H together with
equality of Lam; canonicalize picks the minimum of the orbit.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coeff import FieldElem

__all__ = [
    "InducedParams",
    "canonicalize",
    "iso_test",
    "primitive",
    "quad_twist",
    "lemma1_classify",
    "lemma2_reduce",
    "lfield_param",
    "dual_params",
]


@dataclass(frozen=True)
class InducedParams:
    """(degree n, total exponent H mod p^n - 1, unramified value Lam = lambda^n)."""

    n: int
    H: int
    Lam: FieldElem

    def __post_init__(self):
        if self.Lam.is_zero():
            raise ValueError("unramified value must be nonzero")
        mod = self.spec.p ** self.n - 1
        object.__setattr__(self, "H", self.H % mod)

    @property
    def spec(self):
        return self.Lam.spec

    @property
    def p(self):
        return self.Lam.spec.p

    def sort_key(self):
        return (self.n, self.H, self.Lam.coeffs)

    def to_json(self):
        return {"n": self.n, "H": self.H, "Lam": self.Lam.to_json()}


def params_from_json(obj):
    from .coeff import elem_from_json

    return InducedParams(obj["n"], obj["H"], elem_from_json(obj["Lam"]))


def orbit(P):
    """The Frobenius orbit of the exponent H."""
    mod = P.p ** P.n - 1
    return {P.H * P.p ** i % mod for i in range(P.n)}


def canonicalize(P):
    """Replace H by the minimum of its Frobenius orbit; Lam unchanged."""
    return InducedParams(P.n, min(orbit(P)), P.Lam)


def iso_test(P1, P2):
    """Isomorphism of induced parameters: same Frobenius orbit, same Lam."""
    if P1.n != P2.n:
        raise ValueError("incomparable")
    if P1.spec != P2.spec:
        raise ValueError("incomparable")
    return min(orbit(P1)) == min(orbit(P2)) and P1.Lam == P2.Lam


def primitive(h, n, p):
    """Whether (p^n - 1)/(p^d - 1) divides h for no proper divisor d of n."""
    if not 1 <= h <= p ** n - 2:
        raise ValueError("exponent range")
    top = p ** n - 1
    for d in range(1, n):
        if n % d == 0 and h % (top // (p ** d - 1)) == 0:
            return False
    return True


def quad_twist(P, eps):
    """Twist by a quadratic character given as QuadCharParams.

    The tame part shifts H by tame * (p^n - 1)/(p - 1); the unramified
    part multiplies Lam by (+-1)^n.
    """
    p = P.p
    shift = eps.tame * ((p ** P.n - 1) // (p - 1))
    lam = P.Lam if (eps.unram == 1 or P.n % 2 == 0) else -P.Lam
    return InducedParams(P.n, P.H + shift, lam)


def tame_twist(P, a):
    """Twist by omega^a: H shifts by a (p^n - 1)/(p - 1)."""
    p = P.p
    return InducedParams(P.n, P.H + a * ((p ** P.n - 1) // (p - 1)), P.Lam)


def dual_params(P):
    """The dual parameter: H negates, Lam inverts."""
    return InducedParams(P.n, -P.H, P.Lam.inv())


def is_half_twist_invariant(H, p):
    """Invariance under the tame quadratic twist, decided by the congruence

    (p^4 - 1)/2 == (p^i - 1) H  mod p^4 - 1  for some 1 <= i <= 3.
    """
    mod = p ** 4 - 1
    target = mod // 2
    return any((p ** i - 1) * H % mod == target for i in range(1, 4))


def lemma1_classify(P):
    """Classify a 4-dimensional parameter invariant under the tame quadratic twist.

    When P is primitive (hence irreducible) and invariant under twisting
    by the order-2 tame character, it is, up to twist, induced from the
    exponent (p^2 + 1)/2 * h' for an odd h' with 3 <= h' <= 2p - 1; the
    least such h' is returned (for p in {3, 5} the match is unique; for
    larger p distinct windows can be twist-equivalent, e.g. 3 and 5 at
    p = 7, and the minimum is the canonical representative).  None is
    the negative answer.
    """
    if P.n != 4:
        raise ValueError("incomparable")
    p = P.p
    mod = p ** 4 - 1
    H = P.H % mod
    if H == 0 or not primitive(H, 4, p):
        return None
    if not is_half_twist_invariant(H, p):
        return None
    step = mod // (p - 1)
    matches = set()
    for hp in range(3, 2 * p, 2):
        base = (p ** 2 + 1) // 2 * hp
        for a in range(p - 1):
            shifted = (base + a * step) % mod
            for i in range(4):
                if shifted * p ** i % mod == H:
                    matches.add(hp)
    if not matches:
        return None
    return min(matches)


def lemma2_reduce(h, p):
    """Reduce an odd exponent to the window [3, 2p - 1].

    Deterministic implementation of the reduction by base-p digits:
    renormalize mod 2(p^2 - 1); strip the p^2 digit with a half twist;
    choose the unique a making the middle digit 0 or 1; repair a negative
    low digit with +2(p+1) and, in the leftover -1 case, the Frobenius
    intertwining (2p+1 ~ p+2); finally send h' = 1 to p.  Returns (a, h')
    with the induced parameter of (p^2+1)/2 * h isomorphic to the omega^a
    twist of that of (p^2+1)/2 * h'.
    """
    if h % 2 == 0:
        raise ValueError("odd required")
    a_total = 0
    h = h % (2 * (p * p - 1))
    h0, h1, h2 = h % p, (h // p) % p, h // (p * p)
    if h2 == 1:
        a_total += (p - 1) // 2
        h -= p * p - 1
        h0, h1 = h % p, h // p
    a = h1 // 2
    h1p = h1 - 2 * a
    h0p = h0 - 2 * a
    a_total += a
    hp = h0p + p * h1p
    if h1p == 0 and h0p < 0:
        a_total -= 1
        hp = h0p + 2 * (p + 1)
        if h0p == -1:
            # 2p + 1 is Frobenius-equivalent to p + 2
            hp = p + 2
    if hp == 1:
        hp = p
    assert hp % 2 == 1 and 3 <= hp <= 2 * p - 1, (h, hp)
    return a_total % (p - 1), hp


def lfield_param(spec, h):
    """The degree-4 parameter of inducing the h-th power from the ramified
    quadratic-over-quadratic subfield; defined for odd h only."""
    if h % 2 == 0:
        raise ValueError("reducible for even exponent")
    p = spec.p
    return InducedParams(4, (p * p + 1) // 2 * h % (p ** 4 - 1), spec.one())
