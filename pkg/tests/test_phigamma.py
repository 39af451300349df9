import random

import pytest

from metaplectic.coeff import field_make
from metaplectic.chars import TameChar, quadratic_chars
from metaplectic.laurent import LaurentSeries, frobenius_phi, psi_ring
from metaplectic.phigamma import (
    dual,
    etale_check,
    identity_matrix,
    make_induced,
    make_rank1,
    mat_mul,
    module_from_json,
    module_to_json,
    phi_gamma_commutes,
    psi,
    tensor,
    twist,
)

F3 = field_make(3)
F5 = field_make(5)

rng = random.Random(31)


def rand_vec(D, prec, terms=4, lo=-3, hi=12):
    out = []
    for _ in range(D.n):
        coeffs = {}
        for _ in range(terms):
            coeffs[rng.randrange(lo, hi)] = D.spec.from_int(rng.randrange(D.spec.p))
        out.append(LaurentSeries(D.spec, coeffs, prec))
    return out


def rand_scalar(spec, prec, lo=-2, hi=10, density=0.5):
    coeffs = {
        e: spec.from_int(rng.randrange(spec.p))
        for e in range(lo, hi)
        if rng.random() < density
    }
    return LaurentSeries(spec, coeffs, prec)


def test_make_rank1_examples():
    D = make_rank1(TameChar.trivial(F3), 20)
    assert D.phi[0][0].agrees_with(LaurentSeries.one(F3, 20))
    assert D.gamma_matrix(2)[0][0].agrees_with(LaurentSeries.one(F3, 20))
    D = make_rank1(TameChar.unramified(F3, F3.from_int(2)), 20)
    assert int(D.phi[0][0].coeff(0)) == 2
    assert D.gamma_matrix(2)[0][0].agrees_with(LaurentSeries.one(F3, 20))
    D = make_rank1(TameChar.omega_power(F3, 1), 20)
    assert D.phi[0][0].agrees_with(LaurentSeries.one(F3, 20))
    assert int(D.gamma_matrix(2)[0][0].coeff(0)) == 2


def test_make_induced_shape():
    D = make_induced(F5, 4, 39, prec=30)
    assert D.phi[0][3].valuation == -156
    assert D.phi[1][0].agrees_with(LaurentSeries.one(F5, 30))
    ok, cert = etale_check(D)
    assert ok and cert["det_valuation"] == -156
    D1 = make_induced(F3, 1, 0, prec=20)
    assert D1.phi[0][0].agrees_with(LaurentSeries.one(F3, 20))
    with pytest.raises(ValueError, match="insufficient precision"):
        make_induced(F3, 2, 1, prec=1)


def test_phi_gamma_commutation():
    for spec, h in ((F3, 5), (F5, 5)):
        D = make_induced(spec, 4, h, prec=30)
        for c in (2, 1 + spec.p, 1 + spec.p ** 2):
            assert phi_gamma_commutes(D, c)
    D = make_induced(F3, 1, 2, prec=25)
    assert phi_gamma_commutes(D, 2)
    D = make_rank1(TameChar(F5.from_int(2), 3), 25)
    assert phi_gamma_commutes(D, 7)


def test_twist():
    chi1 = TameChar(F5.from_int(2), 1)
    chi2 = TameChar(F5.from_int(3), 2)
    Da = twist(make_rank1(chi1, 15), chi2)
    Db = make_rank1(chi1.mul(chi2), 15)
    assert Da.phi[0][0].agrees_with(Db.phi[0][0])
    assert Da.gamma_matrix(2)[0][0].agrees_with(Db.gamma_matrix(2)[0][0])
    base = make_rank1(chi1, 15)
    for eps in quadratic_chars(F5):
        Dc = twist(twist(base, eps), eps)
        assert Dc.phi[0][0].agrees_with(base.phi[0][0])
        assert Dc.gamma_matrix(3)[0][0].agrees_with(base.gamma_matrix(3)[0][0])


def test_dual():
    chi = TameChar(F5.from_int(2), 1)
    Dd = dual(make_rank1(chi, 15))
    assert Dd.phi[0][0].agrees_with(make_rank1(chi.inv(), 15).phi[0][0])
    # evaluation equivariance: (phi-matrix of dual)^T . phi-matrix = identity
    D = make_induced(F5, 4, 5, prec=20)
    Ddual = dual(D)
    prod = mat_mul([list(r) for r in zip(*Ddual.phi)], D.phi)
    ident = identity_matrix(F5, 4, 10)
    for i in range(4):
        for j in range(4):
            assert prod[i][j].agrees_with(ident[i][j], upto=8)
    with pytest.raises(ValueError, match="not etale"):
        zero = LaurentSeries.zero(F5, 10)
        from metaplectic.phigamma import PhiGammaModule

        dual(PhiGammaModule(F5, [[zero]], lambda c, n: [[zero]], 10))


def test_tensor():
    D = make_induced(F5, 4, 5, prec=20)
    triv = make_rank1(TameChar.trivial(F5), 20)
    Dt = tensor(D, triv)
    for i in range(4):
        for j in range(4):
            assert Dt.phi[i][j].agrees_with(D.phi[i][j])
    chi1 = TameChar(F5.from_int(2), 1)
    chi2 = TameChar(F5.from_int(3), 2)
    Dt = tensor(make_rank1(chi1, 15), make_rank1(chi2, 15))
    assert Dt.phi[0][0].agrees_with(make_rank1(chi1.mul(chi2), 15).phi[0][0])


def test_etale_check_degenerate():
    from metaplectic.phigamma import PhiGammaModule

    zero = LaurentSeries.zero(F3, 8)
    D = PhiGammaModule(F3, [[zero]], lambda c, n: [[zero]], 8)
    ok, cert = etale_check(D)
    assert not ok and cert["det_valuation"] is None
    x = LaurentSeries.monomial(F3, 1, 8)
    D = PhiGammaModule(F3, [[x]], lambda c, n: [[LaurentSeries.one(F3, n)]], 8)
    ok, cert = etale_check(D)
    assert ok and cert["det_valuation"] == 1


def test_psi_examples():
    D = make_rank1(TameChar.trivial(F3), 30)
    out = psi(D, [LaurentSeries.from_int_coeffs(F3, {0: 1, 1: 1}, 30)])
    assert out[0].is_zero()
    out = psi(D, [LaurentSeries.monomial(F3, -1, 30)])
    assert out[0].agrees_with(LaurentSeries.monomial(F3, -1, out[0].prec))


def test_psi_phi_round_trip():
    for D in (
        make_induced(F3, 4, 5, prec=60),
        make_induced(F5, 4, 39, prec=80),
        make_rank1(TameChar(F3.from_int(2), 1), 60),
    ):
        for _ in range(15):
            v = rand_vec(D, 40)
            back = psi(D, D.apply_phi(v))
            for a, b in zip(back, v):
                assert a.agrees_with(b)
                assert min(a.prec, b.prec) > 5


def test_projection_formulas():
    D = make_induced(F5, 4, 5, prec=50)
    for _ in range(10):
        v = rand_vec(D, 45)
        f = rand_scalar(F5, 45)
        lhs = psi(D, [f * w for w in D.apply_phi(v)])
        s = psi_ring(f)
        for a, b in zip(lhs, [s * w for w in v]):
            assert a.agrees_with(b)
        lhs2 = psi(D, [frobenius_phi(f) * w for w in v])
        rhs2 = [f * w for w in psi(D, v)]
        for a, b in zip(lhs2, rhs2):
            assert a.agrees_with(b)


def test_psi_gamma_equivariance():
    D = make_induced(F5, 4, 5, prec=50)
    for c in (2, 7):
        for _ in range(6):
            v = rand_vec(D, 45)
            lhs = psi(D, D.apply_gamma(c, v))
            rhs = D.apply_gamma(c, psi(D, v))
            for a, b in zip(lhs, rhs):
                assert a.agrees_with(b, upto=5)


def test_rank1_lattice_stability():
    D = make_rank1(TameChar(F3.from_int(2), 0), 30)
    leads = set()
    for a in range(30):
        out = psi(D, [LaurentSeries.monomial(F3, a, 30)])[0]
        if not out.is_zero():
            assert out.valuation >= 0
            leads.add(out.valuation)
    assert leads >= set(range(9))


def test_module_serialization():
    D = make_induced(F3, 2, 3, prec=12)
    obj = module_to_json(D, units=(2, 4))
    D2 = module_from_json(obj, F3)
    assert D2.n == 2 and D2.prec == 12
    for i in range(2):
        for j in range(2):
            assert D2.phi[i][j].agrees_with(D.phi[i][j])
            assert D2.gamma_matrix(2)[i][j].agrees_with(D.gamma_matrix(2)[i][j])
    with pytest.raises(ValueError, match="no gamma sample"):
        D2.gamma_matrix(7)
