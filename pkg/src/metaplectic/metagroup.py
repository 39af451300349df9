"""The two-fold metaplectic cover of GL2(Qp) as executable arithmetic.

Matrices are 2x2 with exact rational entries (p-power denominators are
the typical case; any denominator coprime to p is a p-adic unit and is
handled the same way).  The cover is the set G x {+-1} with multiplication
twisted by the quadratic-Hilbert-symbol 2-cocycle

    sigma(g1, g2) = ( c(g1 g2)/c(g1), c(g1 g2)/c(g2) * det(g1) ),

where c([[a,b],[c,d]]) = c if c != 0 else d, and the Hilbert symbol is
evaluated by the closed formula

    (a, b) = omega((-1)^{v(a) v(b)} * b^{v(a)} / a^{v(b)})^{(p-1)/2}.

Convention: omega, read as a character of Qp^* via the class-field
normalization sending p to a (geometric) Frobenius, takes the value 1 at
p.  This pins chi_z, and the identity chi_z(x) = (z, x) is enforced by
the test suite rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "PMatrix",
    "MetaElem",
    "QuadCharParams",
    "vp",
    "unit_part",
    "hilbert",
    "cocycle",
    "meta_mul",
    "meta_inv",
    "kappa_split",
    "chi_z",
    "quadchar_eval",
    "is_square_qp",
]


def vp(x, p):
    """p-adic valuation of a nonzero rational."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("nonzero required")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def unit_part(x, p):
    """x / p^{v_p(x)} as an exact rational."""
    v = vp(x, p)
    return Fraction(x) / Fraction(p) ** v


def _omega_sign(u, p):
    """omega(u)^{(p-1)/2} in {+1,-1} for a p-adic unit rational u."""
    num, den = u.numerator, u.denominator
    r = num % p * pow(den % p, p - 2, p) % p
    s = pow(r, (p - 1) // 2, p)
    return 1 if s == 1 else -1


def hilbert(a, b, p):
    """The quadratic Hilbert symbol (a, b) in {+1, -1}."""
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("nonzero required")
    va, vb = vp(a, p), vp(b, p)
    r = Fraction(-1) ** (va * vb) * b ** va / a ** vb
    return _omega_sign(r, p)


class PMatrix:
    """An invertible 2x2 matrix over Q with exact rational entries."""

    __slots__ = ("a", "b", "c", "d", "det")

    def __init__(self, a, b, c, d):
        a, b, c, d = Fraction(a), Fraction(b), Fraction(c), Fraction(d)
        det = a * d - b * c
        if det == 0:
            raise ValueError("singular matrix")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "det", det)

    def __setattr__(self, *args):
        raise AttributeError("PMatrix is immutable")

    def __mul__(self, other):
        return PMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inv(self):
        return PMatrix(
            self.d / self.det, -self.b / self.det, -self.c / self.det, self.a / self.det
        )

    def cc(self):
        """The lower-left entry if nonzero, else the lower-right one."""
        return self.c if self.c != 0 else self.d

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    @classmethod
    def scalar(cls, z):
        return cls(z, 0, 0, z)

    def __eq__(self, other):
        return isinstance(other, PMatrix) and self.entries() == other.entries()

    def __hash__(self):
        return hash(self.entries())

    def __repr__(self):
        return f"PMatrix[[{self.a}, {self.b}], [{self.c}, {self.d}]]"

    def to_json(self):
        return [[_frac_str(self.a), _frac_str(self.b)], [_frac_str(self.c), _frac_str(self.d)]]


def _frac_str(x):
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def pmatrix_from_json(rows):
    (a, b), (c, d) = rows
    return PMatrix(Fraction(a), Fraction(b), Fraction(c), Fraction(d))


@dataclass(frozen=True)
class MetaElem:
    """An element (g, zeta) of the cover; zeta in {+1, -1}."""

    g: PMatrix
    zeta: int

    def __post_init__(self):
        if self.zeta not in (1, -1):
            raise ValueError("zeta must be +1 or -1")


def cocycle(g1, g2, p):
    """The 2-cocycle sigma(g1, g2) in {+1, -1}."""
    prod = g1 * g2
    cp = prod.cc()
    return hilbert(cp / g1.cc(), cp / g2.cc() * g1.det, p)


def meta_mul(x, y, p):
    """(g1, z1) * (g2, z2) = (g1 g2, z1 z2 sigma(g1, g2))."""
    return MetaElem(x.g * y.g, x.zeta * y.zeta * cocycle(x.g, y.g, p))


def meta_inv(x, p):
    """The inverse in the cover."""
    ginv = x.g.inv()
    return MetaElem(ginv, x.zeta * cocycle(x.g, ginv, p))


def kappa_split(g, zeta, p):
    """The fixed splitting K x {+-1} -> K~ over the maximal compact.

    Requires integral entries (p-adic sense) and unit determinant; twists
    the sign by (c, d det(g)^{-1}) exactly when c lies in pZp - {0}.
    """
    for entry in g.entries():
        if entry != 0 and vp(entry, p) < 0:
            raise ValueError("not in K")
    if vp(g.det, p) != 0:
        raise ValueError("not in K")
    if g.c != 0 and vp(g.c, p) >= 1:
        return MetaElem(g, zeta * hilbert(g.c, g.d / g.det, p))
    return MetaElem(g, zeta)


@dataclass(frozen=True)
class QuadCharParams:
    """An order <= 2 character of Qp^*: sign at p and tame omega-power."""

    unram: int
    tame: int  # exponent of omega on units, 0 or (p-1)/2

    def __post_init__(self):
        if self.unram not in (1, -1):
            raise ValueError("unram must be +1 or -1")

    def is_trivial(self):
        return self.unram == 1 and self.tame == 0

    def mul(self, other, p):
        return QuadCharParams(self.unram * other.unram, (self.tame + other.tame) % (p - 1))

    def to_json(self):
        return {"unram": self.unram, "tame": self.tame}


def chi_z(z, p):
    """The quadratic character attached to a central element z.

    On units u it is omega(u)^{v(z)(p-1)/2}; at p it takes the value
    ((-1)^{v(z)} omega(unit part of z))^{(p-1)/2} under omega(p) = 1.
    """
    z = Fraction(z)
    if z == 0:
        raise ValueError("nonzero required")
    v = vp(z, p)
    u = unit_part(z, p)
    at_p = _omega_sign(Fraction(-1) ** v * u, p)
    tame = (v * (p - 1) // 2) % (p - 1)
    return QuadCharParams(at_p, tame)


def quadchar_eval(q, x, p):
    """Evaluate a QuadCharParams at a nonzero rational; result in {+1,-1}."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("nonzero required")
    v = vp(x, p)
    u = unit_part(x, p)
    val = q.unram ** (v % 2)
    if q.tame % (p - 1):
        val *= _omega_sign(u, p)
    return val


def is_square_qp(z, p):
    """Whether a nonzero rational is a square in Qp (p odd)."""
    z = Fraction(z)
    if z == 0:
        raise ValueError("nonzero required")
    if vp(z, p) % 2:
        return False
    return _omega_sign(unit_part(z, p), p) == 1
