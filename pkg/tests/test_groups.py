import pytest
from hypothesis import given, settings, strategies as st

from sixterm import groups as gr

GROUPS = {
    "C1": gr.trivial(),
    "C6": gr.cyclic(6),
    "D4": gr.dihedral(4),
    "D6": gr.dihedral(6),
    "V4": gr.klein_four(),
    "S4": gr.symmetric(4),
    "C2xC4": gr.direct_product(gr.cyclic(2), gr.cyclic(4)),
}


@pytest.mark.parametrize("name", GROUPS)
def test_builders_validate(name):
    G = GROUPS[name]
    assert G.validate() is G
    assert G.identity == 0


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(list(GROUPS)), st.data())
def test_associativity_and_inverses(name, data):
    G = GROUPS[name]
    a, b, c = (data.draw(st.integers(0, G.order - 1)) for _ in range(3))
    assert G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))
    assert G.mul(a, G.inv(a)) == 0
    assert G.power(a, G.element_order(a)) == 0


def test_orders():
    assert gr.dihedral(4).order == 8
    assert gr.symmetric(4).order == 24
    assert not gr.dihedral(4).is_abelian()
    assert gr.direct_product(gr.cyclic(2), gr.cyclic(2)).is_abelian()


def test_build_group_specs():
    assert gr.build_group("cyclic:5").order == 5
    assert gr.build_group("dihedral:4").order == 8
    assert gr.build_group("klein_four").order == 4
    assert gr.build_group("trivial").order == 1
    with pytest.raises(gr.GroupError):
        gr.build_group("dihedral")
    with pytest.raises(gr.GroupError):
        gr.build_group("mystery:3")


def test_bad_table_rejected():
    import numpy as np
    with pytest.raises(gr.GroupError):
        gr.FiniteGroup(np.array([[0, 1], [1, 1]]), "bad").validate()


def test_dihedral_stabilizers():
    D = gr.dihedral(4)
    V, E = gr.vertices(D), gr.edges(D)
    assert V.size == 4 and E.size == 4
    assert V.orbits == [(0, 1, 2, 3)]
    assert V.stabilizer(0).elements == (0, 4)
    assert E.stabilizer(0).elements == (0, 5)
    assert gr.flags(D).size == 8


def test_subgroup_and_quotient():
    D = gr.dihedral(4)
    H = gr.subgroup(D, [2])
    assert H.elements == (0, 2)
    assert H.index == 4
    assert gr.is_normal(D, H)
    assert gr.quotient_group(D, H).order == 4
    assert gr.center(D).elements == (0, 2)
    assert not gr.is_normal(D, gr.subgroup(D, [4]))


@pytest.mark.parametrize("name", ["D4", "S4", "C6"])
def test_cosets_partition(name):
    G = GROUPS[name]
    H = gr.subgroup(G, [1])
    pts = sorted(g for c in H.right_cosets for g in c)
    assert pts == list(range(G.order))
    assert len(H.right_cosets) == H.index
    assert gr.cosets(H).size == H.index


@pytest.mark.parametrize("name", ["D4", "D6", "S4"])
def test_regular_gset(name):
    G = GROUPS[name]
    X = gr.regular(G)
    assert X.validate() is X
    assert X.is_transitive()
    assert X.stabilizer(0).order == 1


def test_index_two_subgroup_of_dihedral():
    e = gr.dihedral_index2(8, "vertex_transitive")
    assert e.image.order == 8
    assert gr.is_normal(gr.dihedral(8), e.image)
