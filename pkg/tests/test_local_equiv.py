from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from knotcone.local_equiv import (
    PhiComplex, build_standard, correction_terms, cyclic_sample, dual_params, find_local_map,
    format_params, lens_d, lens_d_closed, locally_equivalent, match_standard, normalize_params,
    odd_order_trivialize, phi_n, trivial_complex,
)

pairs = st.tuples(st.sampled_from([-1, 1]), st.sampled_from([-3, -2, -1, 1, 2, 3]))
# sign and step of opposite sign: tensor products stay within a two-pair search
opposed = pairs.filter(lambda p: p[0] * p[1] < 0)


@given(pairs)
def test_standard_complex_is_recognized(params):
    C = build_standard(params)
    assert match_standard(C, bound=4) == normalize_params(params)
    assert match_standard(C.dual(), bound=4) == dual_params(params)


@given(pairs)
def test_phi_n_changes_sign_under_duality(params):
    for n in range(1, 5):
        assert phi_n(dual_params(params), n) == -phi_n(params, n)


@settings(max_examples=10)
@given(opposed, opposed)
def test_phi_n_is_additive_under_tensor(a, b):
    C = build_standard(a).tensor(build_standard(b))
    got = match_standard(C, bound=4)
    assert got is not None
    for n in range(1, 5):
        assert phi_n(got, n) == phi_n(a, n) + phi_n(b, n)


def test_standard_examples():
    C = build_standard((-1, 3))
    assert C.almost
    assert C.complex.differential == {"t2": {"t1": frozenset({3})}}
    with pytest.raises(ValueError):
        correction_terms(C)
    assert format_params((-1, 3)) == "C(-, 3)"
    with pytest.raises(ValueError):
        build_standard((-2, 1))


def test_local_maps_in_one_direction():
    triv = trivial_complex()
    C = build_standard((-1, 1))
    assert find_local_map(triv, C) is None
    cert = find_local_map(C, triv)
    assert cert is not None and cert.verify()
    there, back = locally_equivalent(triv, triv)
    assert there.verify() and back.verify()


def test_trivial_is_unit_for_tensor():
    C = build_standard((-1, 2))
    assert match_standard(C.tensor(trivial_complex()), bound=3) == (-1, 2)


@given(st.integers(1, 12).flatmap(lambda p: st.tuples(st.just(p), st.integers(0, p - 1))))
def test_lens_recursion_matches_closed_form(pi):
    p, i = pi
    assert lens_d(p, 1, i) == lens_d_closed(p, i) == Fraction((2 * i - p) ** 2 - p, 4 * p)
    assert lens_d(p, 1, i) == lens_d(p, 1, (p - i) % p)


def test_lens_general_q():
    assert lens_d(5, 2, 1) == Fraction(2, 5)
    # L(p, q) and L(p, q + p) agree
    assert lens_d(7, 3, 2) == lens_d(7, 10, 2)
    with pytest.raises(ValueError):
        lens_d(0, 1, 0)


@pytest.mark.parametrize("order", [3, 5])
def test_odd_order_average_is_local(order):
    sample = cyclic_sample(order)
    there, back = odd_order_trivialize(sample, order)
    assert there.verify() and back.verify()


@pytest.mark.parametrize("make", [lambda: cyclic_sample(3), lambda: build_standard((-1, 2))])
def test_phi_complex_json_round_trip(make):
    p = make()
    again = PhiComplex.from_json(p.to_json())
    assert again.to_json() == p.to_json()
    assert again.almost == p.almost


def test_phi_complex_rejects_bad_input():
    with pytest.raises(ValueError):
        PhiComplex.from_json({"complex": 3})


def true_complexes():
    from knotcone.knotlib import PERIODIC, SI, parse_knot
    from knotcone.mapping_cone import involutive_summand, local_rep
    yield cyclic_sample(3)
    yield local_rep(parse_knot("torus:1"), 1, SI)
    yield local_rep(parse_knot("fig8"), "1/2", PERIODIC)
    yield local_rep(parse_knot("fig8"), 2, SI, 1, "sigma")
    yield involutive_summand(parse_knot("torus:2"), 2, SI, 1)
    yield local_rep(parse_knot("box:3"), 1, SI)


@pytest.mark.parametrize("index", range(6))
def test_duality_swaps_correction_terms(index):
    P = list(true_complexes())[index]
    lo, hi = correction_terms(P)
    dlo, dhi = correction_terms(P.dual())
    assert lo <= hi
    assert (lo, hi) == (-dhi, -dlo)


def test_inverse_in_the_local_group():
    C = build_standard((-1, 3))
    assert match_standard(C.tensor(C.dual()), bound=4) == ()
    assert match_standard(trivial_complex(), bound=2) == ()


def test_certificates_preserve_correction_terms():
    from knotcone.knotlib import SI, parse_knot
    from knotcone.mapping_cone import local_rep
    rep = local_rep(parse_knot("fig8"), "1/2", SI, symmetry="sigma")
    triv = trivial_complex(rep.tower_grading)
    there, back = locally_equivalent(rep, triv)
    assert there.verify() and back.verify()
    assert correction_terms(rep) == correction_terms(triv)
