import pytest
from hypothesis import given, strategies as st

from knotcone.ring import (
    AlgebraElement, UPoly, WZPoly, alg_mul, alg_sigma, alg_tau, alg_ut, alg_wz, elliptic_E,
    format_algebra, format_wz, parse_algebra, parse_wz, phi_sigma, phi_tau, poly_mul,
    swap_wz, upow, ut, ut_mul, varpi_ut, wz,
)

exps = st.integers(0, 6)
wz_polys = st.frozensets(st.tuples(exps, exps), max_size=5).map(WZPoly)
ut_polys = st.frozensets(st.tuples(exps, st.integers(-5, 5)), max_size=5).map(
    lambda s: alg_ut(s).body).map(lambda b: frozenset(b))
sigma_tau = st.frozensets(st.tuples(exps, st.integers(-5, 5), st.sampled_from("st")), max_size=4)


def element(sector):
    if sector == (0, 0):
        return wz_polys.map(alg_wz)
    if sector == (1, 1):
        return ut_polys.map(alg_ut)
    return sigma_tau.map(lambda b: AlgebraElement(1, 0, b))


@given(wz_polys, wz_polys, wz_polys)
def test_wz_ring_laws(a, b, c):
    assert poly_mul(a, b) == poly_mul(b, a)
    assert poly_mul(poly_mul(a, b), c) == poly_mul(a, poly_mul(b, c))
    assert poly_mul(a, b + c) == poly_mul(a, b) + poly_mul(a, c)
    assert a + a == WZPoly()


@given(wz_polys, wz_polys)
def test_swap_is_ring_involution(a, b):
    assert swap_wz(swap_wz(a)) == a
    assert swap_wz(poly_mul(a, b)) == poly_mul(swap_wz(a), swap_wz(b))


@given(wz_polys, wz_polys)
def test_phi_maps_are_ring_homomorphisms(a, b):
    for phi in (phi_sigma, phi_tau):
        assert phi(poly_mul(a, b)) == ut_mul(phi(a), phi(b))
        assert phi(a + b) == phi(a) + phi(b)


@given(st.sampled_from([((1, 1), (1, 1), (1, 0)), ((1, 1), (1, 0), (0, 0)),
                        ((1, 0), (0, 0), (0, 0)), ((0, 0), (0, 0), (0, 0)),
                        ((1, 1), (1, 1), (1, 1))]).flatmap(
    lambda secs: st.tuples(*(element(s) for s in secs))))
def test_algebra_associative(triple):
    a, b, c = triple
    assert alg_mul(alg_mul(a, b), c) == alg_mul(a, alg_mul(b, c))


@given(element((1, 0)), element((0, 0)))
def test_elliptic_involution_is_multiplicative(s, a):
    assert elliptic_E(elliptic_E(s)) == s
    assert elliptic_E(alg_mul(s, a)) == alg_mul(elliptic_E(s), elliptic_E(a))


def test_sigma_commutation_rule():
    # sigma * W = U T^-1 sigma and tau * W = T^-1 tau
    W = alg_wz(wz(1, 0))
    assert alg_mul(alg_sigma(), W) == alg_sigma(1, -1)
    assert alg_mul(alg_tau(), W) == alg_tau(0, -1)
    Z = alg_wz(wz(0, 1))
    assert alg_mul(alg_sigma(), Z) == alg_sigma(0, 1)
    assert alg_mul(alg_tau(), Z) == alg_tau(1, 1)


def test_forbidden_sector():
    with pytest.raises(ValueError):
        AlgebraElement(0, 1, frozenset())
    assert not alg_mul(alg_wz(wz()), alg_sigma())


@given(wz_polys)
def test_wz_text_round_trip(p):
    assert parse_wz(format_wz(p)) == p


@given(element((1, 0)))
def test_algebra_text_round_trip(a):
    assert parse_algebra(format_algebra(a), sector=(1, 0)) == a


def test_parse_examples():
    a = parse_algebra("T s + U T^2 t")
    assert a.sector == (1, 0)
    assert a.body == {(0, 1, "s"), (1, 2, "t")}
    with pytest.raises(ValueError):
        parse_wz("U")


def test_u_polys_and_varpi():
    assert upow(2) * upow(3) == upow(5)
    assert (upow(1) + upow(1)) == UPoly()
    with pytest.raises(ValueError):
        upow(-1)
    with pytest.raises(ValueError):
        ut(-1, 0)
    assert varpi_ut(ut(2, 3)) == ut(0, 0) * ut(2, -3)
