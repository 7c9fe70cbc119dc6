import pytest
from hypothesis import given, strategies as st

from knotcone.knotlib import SI, parse_knot
from knotcone.mapping_cone import IOTA, SI as SI_FLIP, build_cone
from knotcone.ring import alg_sigma
from knotcone.surgery_algebra import (
    TypeDModule, TypeDMorphism, box_morphism, box_tensor_D, compose_morphisms,
    induced_morphism, is_null_homotopic, tensor_E, type_d_from_cfk,
)

framed = st.tuples(st.sampled_from(["unknot", "torus:1", "torus:2", "fig8", "mirror(torus:1)"]),
                   st.sampled_from([-3, -2, -1, 1, 2, 3]))


@given(framed)
def test_modules_satisfy_structure_relation(kn):
    spec, n = kn
    X = type_d_from_cfk(parse_knot(spec), n)
    assert X.verify().ok
    E = tensor_E(X)
    assert E.verify().ok
    assert tensor_E(E).to_json()["delta1"] == X.to_json()["delta1"]


@given(framed)
def test_module_json_round_trip(kn):
    spec, n = kn
    X = type_d_from_cfk(parse_knot(spec), n)
    assert TypeDModule.from_json(X.to_json()).to_json() == X.to_json()


@pytest.mark.parametrize("spec,n", [("torus:1", 1), ("torus:2", 2), ("fig8", 1)])
def test_induced_morphism_is_a_homogeneous_cycle(spec, n):
    K = parse_knot(spec)
    X = type_d_from_cfk(K, n)
    f = induced_morphism(K.symmetry(SI), X)
    assert f.is_cycle()
    assert not f.homogeneity_violations()
    assert f.target.name.endswith("[E]")


def test_identity_is_cycle_and_not_null():
    X = type_d_from_cfk(parse_knot("torus:1"), 1)
    ident = X.identity()
    assert ident.is_cycle()
    assert compose_morphisms(ident, ident).entries == ident.entries
    assert is_null_homotopic(ident) is None


def test_sector_checks():
    X = type_d_from_cfk(parse_knot("torus:1"), 1)
    with pytest.raises(ValueError):
        TypeDMorphism(X, X, {"p": {"x0": alg_sigma()}})
    with pytest.raises(ValueError):
        type_d_from_cfk(parse_knot("torus:1"), 0)


@pytest.mark.parametrize("spec,n,flip", [("torus:2", 1, IOTA), ("fig8", 2, IOTA), ("box:2", 1, SI_FLIP)])
def test_box_tensor_is_a_complex_equal_to_cone(spec, n, flip):
    K = parse_knot(spec)
    X = type_d_from_cfk(K, n, flip)
    bt = box_tensor_D(X, (-3, 3))
    assert bt.complex.verify().ok
    cone = build_cone(K, n, flip, collapsed=True).truncate(-3, 3)
    assert sorted(bt.cone_label(g) for g in bt.complex.ids) == sorted(cone.ids)


def test_box_morphism_of_symmetry_is_chain_map():
    K = parse_knot("torus:2")
    X = type_d_from_cfk(K, 1)
    f = induced_morphism(K.symmetry(SI), X)
    bt = box_tensor_D(X, (-2, 2))
    m = box_morphism(f, bt, bt, collapse=True)
    assert m.is_chain_map()[0]
