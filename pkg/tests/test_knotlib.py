import pytest
from hypothesis import given, strategies as st

from knotcone.complex import EQUIVARIANT, SKEW, compose
from knotcone.knotlib import (
    PERIODIC, SI, KnotModel, KnotSpecError, basepoint_Phi, basepoint_Psi, parse_knot,
    sarkar_xi, staircase_torus, swap_involution,
)
from knotcone.linalg import homotopic, homology_towers
from knotcone.mapping_cone import alexander_slice, z_localized

atoms = st.sampled_from(["unknot", "trefoil", "fig8", "torus:1", "torus:2", "torus:3", "box:1", "box:2"])


@st.composite
def specs(draw, depth=2):
    base = draw(atoms)
    if depth == 0:
        return base
    op = draw(st.sampled_from(["atom", "mirror", "reverse", "sum"]))
    if op == "atom":
        return base
    if op == "sum":
        return f"{base}#{draw(specs(depth=0))}"
    return f"{op}({draw(specs(depth=depth - 1))})"


@given(specs())
def test_every_parsed_knot_is_a_complex_with_chain_maps(spec):
    K = parse_knot(spec)
    assert K.complex.verify().ok
    for name, f in K.maps().items():
        ok, where = f.is_chain_map()
        assert ok, (name, where)
        assert not f.homogeneity_violations()


@given(specs())
def test_one_free_tower_in_each_slice(spec):
    c = parse_knot(spec).complex
    assert len(homology_towers(z_localized(c)).free) == 1
    assert homology_towers(z_localized(c)).d == 0


@given(specs())
def test_knot_json_round_trip(spec):
    K = parse_knot(spec)
    again = KnotModel.from_json(K.to_json())
    assert again.to_json() == K.to_json()


def test_variance_of_shipped_maps():
    K = parse_knot("fig8")
    assert K.iota.variance == SKEW
    assert K.symmetry(PERIODIC).variance == EQUIVARIANT
    assert K.symmetry(SI).variance == SKEW


@pytest.mark.parametrize("n", range(1, 7))
def test_staircase_ranks_and_genus(n):
    K = staircase_torus(n)
    assert K.rank == 4 * n - 1
    alex = [K.complex.alexander(g) for g in K.complex.ids]
    # T(2n, 2n+1) has genus n(2n - 1)
    assert max(alex) == -min(alex) == n * (2 * n - 1)


def test_basepoint_maps_and_xi():
    c = parse_knot("fig8").complex
    Phi, Psi = basepoint_Phi(c), basepoint_Psi(c)
    for f in (Phi, Psi):
        assert f.is_chain_map()[0]
    xi = sarkar_xi(c)
    assert homotopic(compose(xi, xi), c.identity()).homotopic


def test_swap_involution_squares_to_identity_for_the_trefoil():
    cc, phi = swap_involution(staircase_torus(1))
    assert cc.rank == 9
    assert homotopic(compose(phi, phi), cc.identity()).homotopic


def test_mirror_negates_v0():
    from knotcone.mapping_cone import V_invariant
    assert V_invariant(parse_knot("torus:2"), 0) == 3
    assert V_invariant(parse_knot("mirror(torus:2)"), 0) == 0
    A = alexander_slice(parse_knot("torus:2").complex, 0)
    assert homology_towers(A).d == -6


@pytest.mark.parametrize("bad", ["torus:0", "knot", "mirror(fig8", "fig8)", "fig8#"])
def test_bad_specs(bad):
    with pytest.raises(KnotSpecError):
        parse_knot(bad)
