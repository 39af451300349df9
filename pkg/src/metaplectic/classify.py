"""From mirabolic cycle data to induced Galois parameters.

The supersingular parameter r determines a 4-cycle of eigenvectors
v_1, ..., v_4 with torus eigencharacters chi_i, weights (r_i, b_i) and
relations X^{s_i} F(v_i) = c_i v_{i+1}.  Dualizing produces a cyclic
basis f_i with

    phi(f_i) in c_i^{-1} (1 + X k[[X]]) X^{s_i - (p-1)} f_{i+1},
    gamma(f_i) in chi_i(gamma)^{-1} (1 + X k[[X]]) f_i,

which this module normalizes (killing the 1-unit noise by the convergent
change-of-basis product) and converts to induced Galois parameters in
closed form.  A finite-level simulation of the dual Frobenius provides
an independent oracle for the containments above: it builds the actual
finite quotients k[[X]]/(X^{e(i)_m + 1}) with their transition, X, F and
Gamma maps and reconstructs phi(f_i) from functional pairings alone.

Sign bookkeeping: writing gamma(f_i) = omega(gamma)^{b_i} (1-unit) f_i
and phi(f_i) = d_i (1-unit) X^{t_i} f_{i+1}, commutation of phi and gamma
forces b_{i+1} = b_i - t_i mod (p-1); equivalently the eigencharacter
exponents satisfy a_{i+1} = a_i + s_i.  The chain is validated at
construction and on entry to the normalizer.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coeff import FieldElem, FieldSpec, factorial_in
from .chars import HChar
from .galois import InducedParams
from .laurent import LaurentSeries, binom_mod_p, binom_neg_mod_p, frobenius_phi

__all__ = [
    "SSData",
    "CyclicForm",
    "NormalForm",
    "ss_data",
    "dual_basis_form",
    "cycle_form",
    "normalize_cyclic",
    "galois_of_cycle",
    "galois_of_ss",
    "e_exponents",
    "simulate_dual_frobenius",
    "simulate_dual_gamma",
    "params_of_normal_form",
]


@dataclass(frozen=True)
class SSData:
    """The cycle tables attached to a supersingular parameter r."""

    spec: FieldSpec
    r: int
    r_prime: int
    chi: tuple  # 4 HChar eigencharacters
    s: tuple  # 4 cycle exponents, s_i = r_{i+1}
    c: tuple  # 4 nonzero constants
    weights: tuple  # 4 pairs (r_i, b_i)

    @property
    def p(self):
        return self.spec.p

    @property
    def n(self):
        return 4

    def gamma_exponents(self):
        """The Gamma-eigenexponents a_i (first torus exponent of chi_i)."""
        return tuple(ch.e1 for ch in self.chi)

    def to_json(self):
        return {
            "p": self.p,
            "r": self.r,
            "r_prime": self.r_prime,
            "chi": [[ch.e1, ch.e2] for ch in self.chi],
            "s": list(self.s),
            "c": [ci.to_json() for ci in self.c],
            "weights": [list(w) for w in self.weights],
        }


def ss_data(spec, r):
    """All tables for the supersingular parameter r (excluded: r = (p-1)/2)."""
    p = spec.p
    if not 0 <= r <= p - 1:
        raise ValueError("parameter out of range")
    half = (p - 1) // 2
    if r == half:
        raise ValueError("excluded parameter")
    if r < half:
        r_prime = half - r
    else:
        r_prime = 3 * half - r
    chi = HChar(p, r, 0)
    chis = (
        chi,
        chi.swap().bracket(1, 0),
        chi.bracket(1, 1),
        chi.swap().bracket(0, 1),
    )
    weights = ((r, 0), (r_prime, r), (r, half), (r_prime, (r + half) % (p - 1)))
    s = (r_prime, r, r_prime, r)
    rf = factorial_in(spec, r)
    rpf = factorial_in(spec, r_prime)
    sign = lambda e: spec.from_int((-1) ** (e % 2))
    c = (
        sign(r) * rpf,
        sign(half) * rf,
        sign(r + half) * rpf,
        sign(half) * rf,
    )
    data = SSData(spec, r, r_prime, chis, s, c, weights)
    # irreducibility condition: equal eigencharacters force distinct exponents
    for i in range(4):
        for j in range(i + 1, 4):
            if chis[i] == chis[j] and s[i] == s[j]:
                raise ValueError("cycle fails the irreducibility condition")
    return data


@dataclass(frozen=True)
class CyclicForm:
    """A cyclic phi-basis: phi(f_i) = d_i g_i(X) X^{t_i} f_{i+1},
    gamma(f_i) = omega(gamma)^{b_i} (1-unit) f_i."""

    spec: FieldSpec
    n: int
    d: tuple  # nonzero constants
    t: tuple  # integer exponents
    b: tuple  # omega-exponents mod p-1
    noise: tuple  # 1-unit series g_i, or None entries meaning exactly 1

    def __post_init__(self):
        p = self.spec.p
        object.__setattr__(self, "b", tuple(x % (p - 1) for x in self.b))
        for di in self.d:
            if di.is_zero():
                raise ValueError("cycle constants must be nonzero")
        for i in range(self.n):
            if (self.b[(i + 1) % self.n] - self.b[i] + self.t[i]) % (p - 1):
                raise ValueError("not phi-gamma compatible")
        for g in self.noise:
            if g is not None and not g.is_one_unit():
                raise ValueError("noise must be a 1-unit")

    @property
    def p(self):
        return self.spec.p

    def to_json(self):
        return {
            "n": self.n,
            "d": [x.to_json() for x in self.d],
            "t": list(self.t),
            "b": list(self.b),
            "noise": [g.to_json() if g is not None else None for g in self.noise],
        }


@dataclass(frozen=True)
class NormalForm:
    """The noise-free invariants of a cyclic form: total exponent, product
    constant, and the omega-exponent of the first basis vector."""

    spec: FieldSpec
    n: int
    t: int
    d: FieldElem
    b1: int

    def to_json(self):
        return {"n": self.n, "t": self.t, "d": self.d.to_json(), "b1": self.b1}


def cycle_form(spec, s, c, a, noise=None):
    """The dual-basis cyclic form of generic cycle data (s_i, c_i, a_i).

    d_i = c_i^{-1}, t_i = s_i - (p-1), b_i = -a_i; the 1-units of the
    containment are unknown at this level and default to 1 (the
    classification is insensitive to them).
    """
    p = spec.p
    n = len(s)
    if len(c) != n or len(a) != n:
        raise ValueError("cycle data lengths differ")
    if all(si == 0 for si in s):
        raise ValueError("finite-dimensional, dual vanishes")
    for ci in c:
        if ci.is_zero():
            raise ValueError("cycle constants must be nonzero")
    d = tuple(ci.inv() for ci in c)
    t = tuple(si - (p - 1) for si in s)
    b = tuple(-ai % (p - 1) for ai in a)
    if noise is None:
        noise = (None,) * n
    return CyclicForm(spec, n, d, t, b, tuple(noise))


def dual_basis_form(data):
    """The cyclic form of the dual basis attached to supersingular data."""
    return cycle_form(data.spec, data.s, data.c, data.gamma_exponents())


def normalize_cyclic(form, prec):
    """Kill the 1-unit noise and return the NormalForm plus the basis change.

    The change of basis h_i is the convergent product of Frobenius shifts
    of the noise, truncated after ceil(log_p N) + 1 factors; the invariants
    are t = -(sum p^{n-j} t_j)/(p-1), d = prod d_i and b1.
    """
    p = form.spec.p
    n = form.n
    weighted = sum(p ** (n - j) * form.t[j - 1] for j in range(1, n + 1))
    if weighted % (p - 1):
        raise ValueError("inconsistent Gamma data")
    t = -(weighted // (p - 1))
    d = form.spec.one()
    for di in form.d:
        d = d * di
    J = 1
    while p ** (J - 1) < prec:
        J += 1
    hs = []
    for i in range(n):
        h = LaurentSeries.one(form.spec, prec)
        for j in range(1, J + 1):
            g = form.noise[(i - j) % n]
            if g is None:
                continue
            term = g.truncate(prec)
            for _ in range(j - 1):
                term = frobenius_phi(term)
            h = (h * term.truncate(prec)).truncate(prec)
        hs.append(h)
    return NormalForm(form.spec, n, t, d, form.b[0]), hs


def galois_of_cycle(spec, n, s, c, a1):
    """The induced Galois parameter of a cycle: exponent sum(p^{n-j} s_j)/(p-1)
    twisted by omega^{a1 - 1}, with unramified value prod(c_i)."""
    p = spec.p
    weighted = sum(p ** (n - j) * s[j - 1] for j in range(1, n + 1))
    if weighted % (p - 1):
        raise ValueError("inconsistent Gamma data")
    s_tot = weighted // (p - 1)
    lam = spec.one()
    for ci in c:
        if ci.is_zero():
            raise ValueError("cycle constants must be nonzero")
        lam = lam * ci
    step = (p ** n - 1) // (p - 1)
    return InducedParams(n, s_tot + (a1 - 1) * step, lam)


def galois_of_ss(data):
    """The induced parameter of supersingular cycle data (first eigenvector route)."""
    return galois_of_cycle(data.spec, 4, data.s, data.c, data.gamma_exponents()[0])


def params_of_normal_form(nf):
    """The induced parameter encoded by a NormalForm (no dualization)."""
    p = nf.spec.p
    step = (p ** nf.n - 1) // (p - 1)
    return InducedParams(nf.n, nf.t + nf.b1 * step, nf.d)


def e_exponents(data, i, m):
    """The window exponents e(i) = sum_j p^{n-1-j} s_{i+j} and
    e(i)_m = e(i) (1 - p^{nm})/(1 - p^n); i is 1-based."""
    if m < 1:
        raise ValueError("level must be >= 1")
    n = data.n
    p = data.p
    e = sum(p ** (n - 1 - j) * data.s[(i - 1 + j) % n] for j in range(n))
    e_m = e * (p ** (n * m) - 1) // (p ** n - 1)
    return e, e_m


class _CycleQuotient:
    """The finite quotient pi_{i,m} = k[[X]]/(X^{e(i)_m + 1}) of a cycle.

    Elements are sparse exponent -> coefficient tables.  The model
    realizes v_i as X^{e(i)_m}, the functional f_i as extraction of the
    top coefficient, the transition to level m+1 as multiplication by
    X^{p^{nm} e(i)} and F as f(X) -> c_i f(X^p) X^{p^{nm+1} d_i} with
    d_i = (e(i+1) - s_i)/p, all forced by the defining relations.
    """

    def __init__(self, data, i, m):
        self.data = data
        self.i = i  # 1-based
        self.m = m
        _, self.cutoff = e_exponents(data, i, m)

    def reduce(self, elem):
        return {e: a for e, a in elem.items() if e <= self.cutoff and not a.is_zero()}

    def monomial(self, e):
        return {e: self.data.spec.one()}

    def v_vector(self):
        return self.monomial(self.cutoff)

    def top_coeff(self, elem):
        """The value of the functional f_i at this level."""
        return elem.get(self.cutoff, self.data.spec.zero())

    def mul_sparse(self, elem, other):
        out = {}
        for e1, a1 in elem.items():
            for e2, a2 in other.items():
                e = e1 + e2
                if e <= self.cutoff:
                    prod = a1 * a2
                    cur = out.get(e)
                    out[e] = prod if cur is None else cur + prod
        return self.reduce(out)

    def frobenius_map(self, elem):
        """F: level (i, m) -> level (i+1, m+1)."""
        data, p, n = self.data, self.data.p, self.data.n
        e_next, _ = e_exponents(data, self.i % n + 1, 1)
        s_i = data.s[self.i - 1]
        assert (e_next - s_i) % p == 0
        d_i = (e_next - s_i) // p
        shift = p ** (n * self.m + 1) * d_i
        target = _CycleQuotient(data, self.i % n + 1, self.m + 1)
        c_i = data.c[self.i - 1]
        out = {}
        for e, a in elem.items():
            ee = p * e + shift
            if ee <= target.cutoff:
                out[ee] = a * c_i
        return target, target.reduce(out)

    def gamma_map(self, elem, c_exact):
        """The action of a unit with exact integer representative c_exact."""
        data = self.data
        p = data.spec.p
        a_i = data.gamma_exponents()[self.i - 1]
        chi_val = data.spec.from_int(pow(c_exact % p, a_i, p))
        subst = _binomial_substitution(c_exact, data.spec, self.cutoff)
        out = {}
        for e, a in elem.items():
            pw = _sparse_pow(subst, e, self.cutoff, data.spec)
            for ee, b in pw.items():
                term = a * b * chi_val
                cur = out.get(ee)
                out[ee] = term if cur is None else cur + term
        return self.reduce(out)


def _binomial_substitution(c, spec, cutoff):
    """(1+X)^c - 1 as a sparse table up to degree cutoff."""
    p = spec.p
    out = {}
    for k in range(1, cutoff + 1):
        b = binom_mod_p(c, k, p)
        if b:
            out[k] = spec.from_int(b)
    return out


def _sparse_pow(base, e, cutoff, spec):
    if e == 0:
        return {0: spec.one()}
    result = None
    b = base
    t = e

    def mul(x, y):
        out = {}
        for e1, a1 in x.items():
            for e2, a2 in y.items():
                s = e1 + e2
                if s <= cutoff:
                    prod = a1 * a2
                    cur = out.get(s)
                    out[s] = prod if cur is None else cur + prod
        return {k: v for k, v in out.items() if not v.is_zero()}

    while t:
        if t & 1:
            result = b if result is None else mul(result, b)
        t >>= 1
        if t:
            b = mul(b, b)
    return result


def _choose_level(data, i, K):
    p = data.p
    need = p * K + (p - 1)
    m = 1
    while e_exponents(data, i, m)[1] < need:
        m += 1
    return m


def simulate_dual_frobenius(data, i, K, m=None):
    """Finite-level computation of phi(f_i), reported as a Laurent series
    in the coefficient of f_{i+1}, with its 1-unit part exact to K digits.

    Builds the finite quotients, evaluates the functionals
    (1+X)^{-j} X^{s_i} f_{i+1} composed with F on the monomial basis of
    pi_{i,m}, and reconstructs phi(f_i) through the identity

        sum_j (1+X)^j phi(((1+X)^{-j} f) o F) = f  at  f = X^{s_i} f_{i+1}.
    """
    p = data.p
    spec = data.spec
    if m is None:
        m = _choose_level(data, i, K)
    _, e_m = e_exponents(data, i, m)
    if e_m < p * K + (p - 1):
        raise ValueError("window too small")
    s_i = data.s[i - 1]
    digits = (p - 1 + K) // p + 2
    if e_m < digits:
        raise ValueError("window too small")
    source = _CycleQuotient(data, i, m)
    h_tables = []
    for j in range(p):
        coeffs = {}
        for l in range(digits):
            basis_elem = source.monomial(e_m - l)
            target, image = source.frobenius_map(basis_elem)
            # pair against (1+X)^{-j} X^{s_i} f_{i+1}: multiply and read the
            # top coefficient of the target quotient
            acc = spec.zero()
            for e, a in image.items():
                tpow = target.cutoff - s_i - e
                b = binom_neg_mod_p(j, tpow, p)
                if b:
                    acc = acc + a * spec.from_int(b)
            if not acc.is_zero():
                coeffs[l] = acc
        h_tables.append(LaurentSeries(spec, coeffs, digits))
    # A(X) = sum_j (1+X)^j H_j(X^p); phi(f_i) = X^{s_i} A^{-1} f_{i+1}
    acc = None
    for j in range(p):
        hj = frobenius_phi(h_tables[j])
        binomial = LaurentSeries(
            spec,
            {k: spec.from_int(binom_mod_p(j, k, p)) for k in range(j + 1)},
            p * digits,
        )
        term = binomial * hj
        acc = term if acc is None else acc + term
    A = acc.truncate(p - 1 + K)
    return A.invert_series().shift(s_i)


def simulate_dual_gamma(data, i, c, digits=3, m=None):
    """Finite-level computation of gamma(f_i) = H(X) f_i for an integer unit c.

    Returns H as a Laurent series with `digits` known coefficients; its
    leading coefficient is the inverse eigenvalue chi_i(c)^{-1}.
    """
    p = data.p
    spec = data.spec
    if c % p == 0:
        raise ValueError("unit must be coprime to p")
    if m is None:
        m = _choose_level(data, i, max(digits, 2))
    _, e_m = e_exponents(data, i, m)
    if e_m < digits:
        raise ValueError("window too small")
    quotient = _CycleQuotient(data, i, m)
    # exact inverse unit on the truncated quotient
    M = 1
    while p ** M <= e_m + 1:
        M += 1
    c_inv = pow(c, -1, p ** M)
    coeffs = {}
    for l in range(digits):
        image = quotient.gamma_map(quotient.monomial(e_m - l), c_inv)
        val = quotient.top_coeff(image)
        if not val.is_zero():
            coeffs[l] = val
    return LaurentSeries(spec, coeffs, digits)
