from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from knotcone.knotlib import PERIODIC, SI, parse_knot
from knotcone.local_equiv import correction_terms, lens_d
from knotcone.mapping_cone import (
    IOTA, involutive_summand, V_invariant, WindowError, alpha, beta, build_cone, check_window,
    class_representative, local_rep, ni_wu_d, parse_surgery, z_localized,
)

knots = st.sampled_from(["unknot", "torus:1", "torus:2", "fig8", "mirror(torus:1)",
                         "torus:1#torus:1", "mirror(fig8)#torus:1"])


def cone(K, n):
    # sums carry no iota; any flip gives the same plain d
    return build_cone(K, n, IOTA if K.iota is not None else SI)


@given(knots, st.integers(1, 4))
def test_cone_matches_closed_formula(spec, n):
    K = parse_knot(spec)
    c = cone(K, n)
    for i in range(n):
        assert c.d_invariant(class_representative(i, n)) == ni_wu_d(K, n, i)


@given(knots, st.integers(1, 3))
def test_negative_surgery_is_minus_mirror(spec, n):
    K = parse_knot(spec)
    M = parse_knot(f"mirror({spec})")
    neg = cone(K, -n)
    pos = cone(M, n)
    got = sorted(neg.d_invariant(class_representative(i, -n)) for i in range(n))
    want = sorted(-pos.d_invariant(class_representative(i, n)) for i in range(n))
    assert got == want


@given(knots, st.integers(0, 3))
def test_v_is_monotone(spec, s):
    K = parse_knot(spec)
    assert V_invariant(K, s) >= V_invariant(K, s + 1) >= V_invariant(K, s) - 1


def test_unknot_gives_lens_spaces():
    U = parse_knot("unknot")
    for p in (1, 2, 5):
        cone = build_cone(U, p)
        assert sorted(cone.d_invariant(class_representative(i, p)) for i in range(p)) == sorted(
            lens_d(p, 1, i) for i in range(p))


def test_truncation_window_is_checked():
    cone = build_cone(parse_knot("torus:2"), 1)
    with pytest.raises(WindowError):
        check_window(cone, 0, 0)
    check_window(cone, -cone.default_bound(), cone.default_bound())
    assert cone.truncate(-3, 3).verify().ok


def test_anchors_are_rational():
    for n in (1, 2, 3, -2):
        for s in range(-2, 3):
            assert isinstance(alpha(n, s), Fraction)
            assert isinstance(beta(n, s), Fraction)


def test_parse_surgery():
    assert parse_surgery("1/2") == (1, 2)
    assert parse_surgery(3) == (3, 1)
    assert parse_surgery("-3") == (-3, 1)
    with pytest.raises(ValueError):
        parse_surgery("1/0")


@pytest.mark.parametrize("spec,surgery,kind,expect", [
    ("torus:1", 1, SI, (-2, -2)),
    ("fig8", "1/2", PERIODIC, (-2, 0)),
])
def test_involutive_correction_terms(spec, surgery, kind, expect):
    rep = local_rep(parse_knot(spec), surgery, kind)
    assert rep.is_true()
    assert correction_terms(rep) == tuple(Fraction(e) for e in expect)


def test_involutions_on_truncations_square_to_identity():
    for spec, kind in (("torus:2", SI), ("fig8", PERIODIC), ("fig8", SI)):
        whole = involutive_summand(parse_knot(spec), 2, kind)
        assert whole.complex.verify().ok
        assert whole.phi.is_chain_map()[0]
        assert whole.is_true()

@pytest.mark.parametrize("spec,kind,symmetry", [
    ("torus:1", SI, None), ("torus:2", SI, None), ("fig8", PERIODIC, None),
    ("fig8", SI, "sigma"), ("fig8", SI, "sigma_prime"),
])
@pytest.mark.parametrize("n", [1, 2])
def test_local_formula_agrees_with_full_cone(spec, kind, symmetry, n):
    K = parse_knot(spec)
    plain = build_cone(K, n)
    for residue in range(n):
        whole = involutive_summand(K, n, kind, residue, symmetry)
        local = local_rep(K, n, kind, residue, symmetry)
        lo, hi = correction_terms(whole)
        assert (lo, hi) == correction_terms(local)
        assert lo <= plain.d_invariant(class_representative(residue, n)) <= hi


@pytest.mark.parametrize("spec,n,symmetry", [("torus:1", 2, None), ("fig8", 2, "sigma"), ("torus:2", 4, None)])
def test_two_wedge_forms_agree(spec, n, symmetry):
    K = parse_knot(spec)
    vv = local_rep(K, n, SI, n // 2, symmetry)
    hv = local_rep(K, n, SI, n // 2, symmetry, wedge="hv")
    assert correction_terms(vv) == correction_terms(hv)


@pytest.mark.parametrize("n", [3, 4])
def test_periodic_negative_representative_matches_full_cone(n):
    K = parse_knot("fig8")
    for residue in range(n):
        whole = involutive_summand(K, n, PERIODIC, residue)
        assert correction_terms(whole) == correction_terms(local_rep(K, n, PERIODIC, residue))
