from hypothesis import given, strategies as st

from knotcone.complex import (
    EQUIVARIANT, SKEW, BigradedComplex, Generator, Map, UComplex, add, compose, dual,
    dual_map, swap_complex, tensor, tensor_maps,
)
from knotcone.knotlib import parse_knot
from knotcone.ring import wz

SMALL = ["unknot", "trefoil", "fig8", "torus:2", "mirror(torus:1)", "box:1"]
knots = st.sampled_from(SMALL)


@given(knots, knots)
def test_tensor_of_complexes_is_a_complex(a, b):
    c = tensor(parse_knot(a).complex, parse_knot(b).complex)
    assert c.verify().ok
    assert c.rank == parse_knot(a).rank * parse_knot(b).rank


@given(knots)
def test_dual_and_swap_are_complexes(spec):
    c = parse_knot(spec).complex
    assert dual(c).verify().ok
    assert swap_complex(c).verify().ok
    assert dual(dual(c, "*"), "*").rank == c.rank


@given(knots)
def test_dual_map_of_symmetries_is_chain_map(spec):
    K = parse_knot(spec)
    c = K.complex
    cd = dual(c)
    for f in K.maps().values():
        assert dual_map(f, cd, cd).is_chain_map()[0]


with_iota = st.sampled_from([k for k in SMALL if not k.startswith("box")])


@given(with_iota, with_iota)
def test_tensor_of_iotas_is_skew_chain_map(a, b):
    Ka, Kb = parse_knot(a), parse_knot(b)
    c = tensor(Ka.complex, Kb.complex)
    f = tensor_maps(Ka.iota, Kb.iota, c, c)
    assert f.variance == SKEW
    assert f.is_chain_map()[0]


def test_differential_shift_and_defect():
    c = parse_knot("trefoil").complex
    dmap = c.differential_map()
    assert compose(dmap, dmap).is_zero()
    ident = c.identity()
    assert add(ident, ident).is_zero()
    assert ident.is_chain_map() == (True, None)


def test_verify_catches_bad_gradings():
    gens = [Generator("a", 0, 0), Generator("b", 0, 0)]
    bad = BigradedComplex(gens, {"a": {"b": wz(1, 0)}})
    assert not bad.verify().ok
    gens = [Generator("a", 0, 0), Generator("b", 1, -1)]
    good = BigradedComplex(gens, {"a": {"b": wz(1, 0)}})
    assert good.verify().ok


def test_skew_map_transports_coefficients():
    K = parse_knot("trefoil")
    iota = K.iota
    assert iota.variance == SKEW
    assert not iota.homogeneity_violations()
    g = K.complex.ids[0]
    plain = iota.apply({g: wz(0, 0)})
    moved = iota.apply({g: wz(1, 0)})
    assert {h: {(w, z + 1) for (w, z) in p} for h, p in plain.items()} == {
        h: set(p) for h, p in moved.items()}


@given(knots)
def test_json_round_trip(spec):
    c = parse_knot(spec).complex
    again = BigradedComplex.from_json(c.to_json())
    assert again.to_json() == c.to_json()


def test_ucomplex_json_and_shift():
    from knotcone.mapping_cone import alexander_slice
    A = alexander_slice(parse_knot("torus:2").complex, 0)
    B = UComplex.from_json(A.to_json())
    assert B.to_json() == A.to_json()
    s = A.shifted(2)
    assert all(s.grading(g) == A.grading(g) + 2 for g in A.ids)
