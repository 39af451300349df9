"""Finite parameter algebra for tame smooth characters of Qp^*.

A tame character is determined by its value at p (a nonzero field
element) and a power of the mod-p cyclotomic character omega on units.
Only tamely ramified characters are representable; every character that
the classification machinery consumes factors through this family, and
wildly ramified input is rejected at parse time.

The subgroup S of squares in Qp^* is generated by p^2 and the squares of
units; a character of S is therefore a value at p^2 together with a tame
exponent mod (p-1)/2.  H is the diagonal torus of GL2(F_p); its
characters are pairs of omega-exponents mod p-1.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coeff import FieldElem
from .metagroup import QuadCharParams

__all__ = [
    "TameChar",
    "SChar",
    "HChar",
    "char_mul",
    "char_restrict_S",
    "quadratic_chars",
    "h_bracket",
    "h_swap",
    "parse_tame_char",
]


@dataclass(frozen=True)
class TameChar:
    """A tame character of Qp^*: unram = value at p, omega^tame on units."""

    unram: FieldElem
    tame: int

    def __post_init__(self):
        if self.unram.is_zero():
            raise ValueError("unram must be nonzero")
        object.__setattr__(self, "tame", self.tame % (self.unram.spec.p - 1))

    @property
    def spec(self):
        return self.unram.spec

    @classmethod
    def trivial(cls, spec):
        return cls(spec.one(), 0)

    @classmethod
    def omega_power(cls, spec, a):
        return cls(spec.one(), a)

    @classmethod
    def unramified(cls, spec, lam):
        return cls(lam, 0)

    def mul(self, other):
        return TameChar(self.unram * other.unram, self.tame + other.tame)

    def inv(self):
        return TameChar(self.unram.inv(), -self.tame)

    def pow(self, e):
        return TameChar(self.unram ** e, self.tame * e)

    def value_at_unit(self, c):
        """The value at an integer unit c: omega(c)^tame."""
        spec = self.spec
        if c % spec.p == 0:
            raise ValueError("not a unit")
        return spec.from_int(pow(c % spec.p, self.tame, spec.p))

    def is_trivial(self):
        return self.unram.is_one() and self.tame == 0

    def square_is_trivial(self):
        p = self.spec.p
        return (self.unram ** 2).is_one() and (2 * self.tame) % (p - 1) == 0

    def sort_key(self):
        return (self.tame, self.unram.coeffs)

    def to_json(self):
        return {"unram": self.unram.to_json(), "tame": self.tame}

    def as_string(self):
        parts = []
        if not self.unram.is_one():
            parts.append(f"mu({self.unram.as_string()})")
        if self.tame:
            parts.append(f"omega^{self.tame}")
        return "*".join(parts) if parts else "1"


@dataclass(frozen=True)
class SChar:
    """A tame character of S (the squares): value at p^2, exponent mod (p-1)/2."""

    val_p2: FieldElem
    tame: int

    def __post_init__(self):
        if self.val_p2.is_zero():
            raise ValueError("val_p2 must be nonzero")
        object.__setattr__(self, "tame", self.tame % ((self.val_p2.spec.p - 1) // 2))

    @property
    def spec(self):
        return self.val_p2.spec

    @classmethod
    def trivial(cls, spec):
        return cls(spec.one(), 0)

    def mul(self, other):
        return SChar(self.val_p2 * other.val_p2, self.tame + other.tame)

    def is_trivial(self):
        return self.val_p2.is_one() and self.tame == 0

    def sort_key(self):
        return (self.tame, self.val_p2.coeffs)

    def to_json(self):
        return {"val_p2": self.val_p2.to_json(), "tame": self.tame}


@dataclass(frozen=True)
class HChar:
    """A character omega^{e1} (x) omega^{e2} of the torus of GL2(F_p)."""

    p: int
    e1: int
    e2: int

    def __post_init__(self):
        object.__setattr__(self, "e1", self.e1 % (self.p - 1))
        object.__setattr__(self, "e2", self.e2 % (self.p - 1))

    def bracket(self, i, j):
        half = (self.p - 1) // 2
        return HChar(self.p, self.e1 + i * half, self.e2 + j * half)

    def swap(self):
        return HChar(self.p, self.e2, self.e1)

    def mul(self, other):
        return HChar(self.p, self.e1 + other.e1, self.e2 + other.e2)


def char_mul(a, b):
    """Componentwise product of two characters of the same kind."""
    return a.mul(b)


def char_restrict_S(chi):
    """Restriction of a tame character of Qp^* to the squares S."""
    return SChar(chi.unram ** 2, chi.tame)


def quadratic_chars(spec):
    """The 4 characters of order dividing 2: 1, mu_{-1}, omega^{(p-1)/2}, product."""
    p = spec.p
    one = spec.one()
    minus = spec.from_int(-1)
    half = (p - 1) // 2
    return [
        TameChar(one, 0),
        TameChar(minus, 0),
        TameChar(one, half),
        TameChar(minus, half),
    ]


def quadchar_to_tame(q, spec):
    """Embed QuadCharParams (sign data) into the tame-character family."""
    return TameChar(spec.from_int(q.unram), q.tame)


def tame_to_quadchar(chi):
    """The inverse embedding for characters of order <= 2."""
    p = chi.spec.p
    if not chi.square_is_trivial() or chi.tame not in (0, (p - 1) // 2):
        raise ValueError("not a quadratic character")
    unram = 1 if chi.unram.is_one() else -1
    if not (chi.unram.is_one() or chi.unram == chi.spec.from_int(-1)):
        raise ValueError("not a quadratic character")
    return QuadCharParams(unram, chi.tame)


def h_bracket(chi, i, j):
    """The bracket twist chi[i, j] shifting both exponents by (p-1)/2 steps."""
    return chi.bracket(i, j)


def h_swap(chi):
    return chi.swap()


def parse_tame_char(text, spec):
    """Parse the CLI shorthand "mu(lambda)*omega^a" into a TameChar.

    lambda is an integer (reduced into the prime field) or a bracketed
    coefficient vector like [1,0,2,0] for extension fields; "1" is the
    trivial character.  Anything else is rejected (wild ramification is
    out of scope).
    """
    text = text.strip().replace(" ", "")
    if text in ("1", ""):
        return TameChar.trivial(spec)
    unram = spec.one()
    tame = 0
    for part in text.split("*"):
        if part.startswith("mu(") and part.endswith(")"):
            inner = part[3:-1]
            if inner.startswith("["):
                coeffs = [int(t) for t in inner.strip("[]").split(",")]
                unram = unram * FieldElem(spec, tuple(coeffs) + (0,) * (spec.m - len(coeffs)))
            else:
                unram = unram * spec.from_int(int(inner))
        elif part.startswith("omega^"):
            tame += int(part[6:])
        elif part == "omega":
            tame += 1
        elif part == "1":
            continue
        else:
            raise ValueError(f"cannot parse character {text!r}")
    return TameChar(unram, tame)
