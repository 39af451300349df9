"""Truncated Laurent series over F_{p^m} with the operators of k((X)).

A series carries an explicit precision N: its coefficients at exponents
e < N are known exactly and everything at e >= N is undetermined.  Every
operation returns the tightest provable output precision.  The zero
series is represented with an empty coefficient table ("zero to
precision N").

The semilinear structure implemented here:

* frobenius(f) = f(X^p), coefficients fixed (the relative Frobenius of
  k((X)) over k);
* gamma_act(c, f) = f((1+X)^c - 1) for an exact positive integer c
  coprime to p, with binomial coefficients taken mod p by Lucas digit
  products;
* one_unit_root(f, n): the unique n-th root of a 1-unit when gcd(n,p)=1;
* phi_basis_decompose(f): the components of f in the basis
  {(1+X)^i}_{0<=i<p} over k((X^p)), which underlies the left inverse
  psi of the Frobenius.
"""

from __future__ import annotations

from .coeff import FieldElem

__all__ = [
    "LaurentSeries",
    "GammaUnit",
    "binom_mod_p",
    "binom_neg_mod_p",
    "gamma_transform",
    "frobenius_phi",
    "gamma_act",
    "invert",
    "one_unit_root",
    "phi_basis_decompose",
    "psi_ring",
]


def binom_mod_p(n, k, p):
    """binom(n, k) mod p for n, k >= 0 via Lucas digit products."""
    if k < 0 or k > n:
        return 0
    result = 1
    while k > 0 or n > 0:
        nd, kd = n % p, k % p
        if kd > nd:
            return 0
        num = den = 1
        for i in range(kd):
            num = num * (nd - i) % p
            den = den * (i + 1) % p
        result = result * num * pow(den, p - 2, p) % p
        n //= p
        k //= p
    return result


def binom_neg_mod_p(j, t, p):
    """binom(-j, t) mod p for j >= 0, t >= 0."""
    if t < 0:
        return 0
    if t == 0:
        return 1
    sign = -1 if t % 2 else 1
    return sign * binom_mod_p(j + t - 1, t, p) % p


class GammaUnit:
    """An exact representative of an element of Gamma = Z_p^*.

    Stored as a positive integer coprime to p; all constructions in scope
    only evaluate the Gamma-action at integer units.
    """

    __slots__ = ("c",)

    def __init__(self, c):
        if c < 1:
            raise ValueError("positive unit required")
        self.c = c

    def check(self, p):
        if self.c % p == 0:
            raise ValueError("unit must be coprime to p")


class LaurentSeries:
    """A Laurent series over F_{p^m} known modulo X^precision."""

    __slots__ = ("spec", "coeffs", "prec")

    def __init__(self, spec, coeffs, prec):
        cleaned = {}
        for e, a in coeffs.items():
            if e < prec and not a.is_zero():
                cleaned[e] = a
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "coeffs", cleaned)
        object.__setattr__(self, "prec", prec)

    def __setattr__(self, *a):
        raise AttributeError("LaurentSeries is immutable")

    # -- constructors ------------------------------------------------

    @classmethod
    def zero(cls, spec, prec):
        return cls(spec, {}, prec)

    @classmethod
    def one(cls, spec, prec):
        return cls(spec, {0: spec.one()}, prec)

    @classmethod
    def monomial(cls, spec, exp, prec, coeff=None):
        if coeff is None:
            coeff = spec.one()
        return cls(spec, {exp: coeff}, prec)

    @classmethod
    def from_int_coeffs(cls, spec, terms, prec):
        return cls(spec, {e: spec.from_int(a) for e, a in terms.items()}, prec)

    # -- basic structure ----------------------------------------------

    def is_zero(self):
        return not self.coeffs

    @property
    def valuation(self):
        """Exact valuation of the known part; None for a known-zero series."""
        if not self.coeffs:
            return None
        return min(self.coeffs)

    def val_or_prec(self):
        return min(self.coeffs) if self.coeffs else self.prec

    def coeff(self, e):
        a = self.coeffs.get(e)
        return a if a is not None else self.spec.zero()

    def leading_coeff(self):
        v = self.valuation
        if v is None:
            raise ValueError("not invertible")
        return self.coeffs[v]

    def truncate(self, prec):
        """Restrict to a lower precision; never extends a claim."""
        if prec >= self.prec:
            return self
        return LaurentSeries(self.spec, {e: a for e, a in self.coeffs.items() if e < prec}, prec)

    def is_one_unit(self):
        return bool(self.coeffs) and self.valuation == 0 and self.coeffs[0].is_one()

    def has_prime_field_coeffs(self):
        return all(a.in_prime_field() for a in self.coeffs.values())

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, FieldElem)):
            other = LaurentSeries(
                self.spec,
                {0: other if isinstance(other, FieldElem) else self.spec.from_int(other)},
                self.prec,
            )
        prec = min(self.prec, other.prec)
        out = dict(self.coeffs)
        for e, a in other.coeffs.items():
            b = out.get(e)
            out[e] = a if b is None else a + b
        return LaurentSeries(self.spec, out, prec)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.spec, {e: -a for e, a in self.coeffs.items()}, self.prec)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, a):
        """Multiply by a field element."""
        if a.is_zero():
            return LaurentSeries.zero(self.spec, self.prec)
        return LaurentSeries(self.spec, {e: a * b for e, b in self.coeffs.items()}, self.prec)

    def shift(self, k):
        """Multiply by X^k (exact)."""
        return LaurentSeries(
            self.spec, {e + k: a for e, a in self.coeffs.items()}, self.prec + k
        )

    def __mul__(self, other):
        if isinstance(other, FieldElem):
            return self.scale(other)
        if isinstance(other, int):
            return self.scale(self.spec.from_int(other))
        v1, v2 = self.val_or_prec(), other.val_or_prec()
        prec = min(v1 + other.prec, v2 + self.prec)
        out = {}
        for e1, a1 in self.coeffs.items():
            for e2, a2 in other.coeffs.items():
                e = e1 + e2
                if e < prec:
                    b = out.get(e)
                    prod = a1 * a2
                    out[e] = prod if b is None else b + prod
        return LaurentSeries(self.spec, out, prec)

    __rmul__ = __mul__

    def invert_series(self):
        """The inverse series; valuation negates, precision drops by 2*val."""
        v = self.valuation
        if v is None:
            raise ValueError("not invertible")
        lead = self.coeffs[v]
        n = self.prec - v  # number of known coefficients of the unit part
        # unit part u = X^{-v} * self / lead, u = 1 + h with h of val >= 1
        lead_inv = lead.inv()
        h = {}
        for e, a in self.coeffs.items():
            if e != v:
                h[e - v] = a * lead_inv
        # invert 1 + h by successive coefficients: b_0 = 1, b_d = -sum h_j b_{d-j}
        b = {0: self.spec.one()}
        for d in range(1, n):
            acc = self.spec.zero()
            for j, hj in h.items():
                if j <= d:
                    bd = b.get(d - j)
                    if bd is not None:
                        acc = acc + hj * bd
            if not acc.is_zero():
                b[d] = -acc
        out = {e - v: a * lead_inv for e, a in b.items()}
        return LaurentSeries(self.spec, out, n - v)

    def pow(self, e):
        """self**e; negative e requires an invertible series.

        For series with prime-field coefficients the base-p digits of e
        are handled through the Frobenius (f^{p^k} = f(X^{p^k})), which
        keeps large exponents cheap and precision tight.
        """
        if e == 0:
            return LaurentSeries.one(self.spec, self.prec - 0)
        if e < 0:
            return self.invert_series().pow(-e)
        p = self.spec.p
        if e >= p and self.has_prime_field_coeffs() and self.val_or_prec() >= 0:
            digits = []
            t = e
            while t:
                digits.append(t % p)
                t //= p
            small = {1: self}
            for d in range(2, p):
                small[d] = small[d - 1] * self
            result = None
            for k, d in enumerate(digits):
                if d == 0:
                    continue
                factor = small[d]
                if k:
                    scale = p ** k
                    factor = LaurentSeries(
                        factor.spec,
                        {ex * scale: a for ex, a in factor.coeffs.items()},
                        factor.prec * scale,
                    )
                result = factor if result is None else result * factor
            return result.truncate(min(result.prec, self.prec + self.val_or_prec() * (e - 1)))
        result = None
        base = self
        t = e
        while t > 0:
            if t & 1:
                result = base if result is None else result * base
            t >>= 1
            if t:
                base = base * base
        return result

    # -- comparisons ----------------------------------------------------

    def agrees_with(self, other, upto=None):
        """Equality of all coefficients below min(precisions, upto)."""
        bound = min(self.prec, other.prec)
        if upto is not None:
            bound = min(bound, upto)
        exps = set(self.coeffs) | set(other.coeffs)
        for e in exps:
            if e < bound and self.coeff(e) != other.coeff(e):
                return False
        return True

    def __eq__(self, other):
        return (
            isinstance(other, LaurentSeries)
            and self.spec == other.spec
            and self.prec == other.prec
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.prec, tuple(sorted((e, a.coeffs) for e, a in self.coeffs.items()))))

    def __repr__(self):
        if not self.coeffs:
            return f"O(X^{self.prec})"
        terms = []
        for e in sorted(self.coeffs):
            a = self.coeffs[e].as_string()
            if e == 0:
                terms.append(a)
            elif e == 1:
                terms.append(f"{a}*X" if a != "1" else "X")
            else:
                terms.append(f"{a}*X^{e}" if a != "1" else f"X^{e}")
        return " + ".join(terms) + f" + O(X^{self.prec})"

    def to_json(self):
        return {
            "valuation": self.valuation if self.coeffs else None,
            "precision": self.prec,
            "coeffs": {str(e): self.coeffs[e].to_json() for e in sorted(self.coeffs)},
        }


def series_from_json(obj, spec):
    from .coeff import elem_from_json

    coeffs = {int(e): elem_from_json(a) for e, a in obj["coeffs"].items()}
    return LaurentSeries(spec, coeffs, obj["precision"])


def frobenius_phi(f):
    """f(X^p) with coefficients unchanged; precision multiplies by p."""
    p = f.spec.p
    return LaurentSeries(f.spec, {e * p: a for e, a in f.coeffs.items()}, f.prec * p)


def gamma_transform(c, spec, prec):
    """(1+X)^c - 1 modulo X^prec for an exact integer unit c >= 1."""
    p = spec.p
    coeffs = {}
    for k in range(1, max(prec, 1)):
        b = binom_mod_p(c, k, p)
        if b:
            coeffs[k] = spec.from_int(b)
    return LaurentSeries(spec, coeffs, prec)


def gamma_act(c, f):
    """f((1+X)^c - 1) to the input precision.

    c is an exact positive integer coprime to p (a GammaUnit or raw int).
    Negative exponents of the substituted variable are handled by series
    inversion at a boosted internal working precision, so no precision is
    lost against the contract.
    """
    if isinstance(c, GammaUnit):
        c = c.c
    spec = f.spec
    if c % spec.p == 0:
        raise ValueError("unit must be coprime to p")
    if c == 1 or f.is_zero():
        return f
    N = f.prec
    v = f.val_or_prec()
    work = N + (2 * (-v) + 2 if v < 0 else 0)
    g = gamma_transform(c, spec, work)
    # unit part of g = X * u with u a unit known to work-1 digits
    u = g.shift(-1)
    u_inv = u.invert_series() if v < 0 else None
    pow_cache = {}

    def g_power(e):
        got = pow_cache.get(e)
        if got is not None:
            return got
        if e >= 0:
            out = g.pow(e) if e else LaurentSeries.one(spec, work)
        else:
            out = u_inv.pow(-e).shift(e)
        pow_cache[e] = out
        return out

    acc = LaurentSeries.zero(spec, N)
    for e in sorted(f.coeffs):
        acc = acc + g_power(e).scale(f.coeffs[e]).truncate(N)
    return acc.truncate(N)


def invert(f):
    """Series inverse (errors on a known-zero series)."""
    return f.invert_series()


def one_unit_root(f, n):
    """The unique g in 1 + X k[[X]] with g^n = f, for gcd(n, p) = 1.

    Computed as f^(n^{-1} mod p^e) where p^e bounds the exponent of the
    group of 1-units modulo X^prec; this agrees with the solve-degree-by-
    degree construction by uniqueness of the root.
    """
    spec = f.spec
    p = spec.p
    if n < 1 or n % p == 0:
        raise ValueError("root not unique")
    v = f.valuation
    if v != 0 or not f.coeffs[0].is_one():
        raise ValueError("not a one-unit")
    e = 0
    while p ** e < f.prec:
        e += 1
    modulus = p ** max(e, 1)
    m = pow(n % modulus, -1, modulus)
    return f.pow(m).truncate(f.prec)


def phi_basis_decompose(f):
    """Components (g_0, ..., g_{p-1}) with f = sum_i (1+X)^i g_i(X^p).

    Exponents of f are grouped by residue mod p and the unipotent Pascal
    matrix binom(i, j) is inverted by its signed counterpart.  The
    guaranteed output precision is floor(N/p) - 1 for input precision N;
    the reported precision is the tightest provable one (at least that).
    """
    spec = f.spec
    p = spec.p
    N = f.prec
    # residue components u_j with f = sum_j X^j u_j(X^p)
    u = [dict() for _ in range(p)]
    for e, a in f.coeffs.items():
        j = e % p
        u[j][(e - j) // p] = a
    # u_j is known modulo X^{Q_j}
    q = [((N - 1 - j) // p) + 1 for j in range(p)]
    # g_i = sum_{j >= i} (-1)^{j-i} binom(j, i) u_j
    out = []
    for i in range(p):
        coeffs = {}
        prec = min(q[i:])
        for j in range(i, p):
            b = binom_mod_p(j, i, p)
            if b == 0:
                continue
            sign = -1 if (j - i) % 2 else 1
            factor = spec.from_int(sign * b)
            for e, a in u[j].items():
                cur = coeffs.get(e)
                term = factor * a
                coeffs[e] = term if cur is None else cur + term
        out.append(LaurentSeries(spec, coeffs, prec))
    return out


def psi_ring(f):
    """psi on the coefficient ring: the 0-component of the (1+X)^i basis."""
    return phi_basis_decompose(f)[0]
