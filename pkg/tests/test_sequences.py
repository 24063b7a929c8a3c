import numpy as np
import pytest

from sixterm import gmodules as gm, groups as gr, quadruples as qd, sequences as seq


def four_term(name, params, coeff="trivial"):
    Q = qd.catalog_build(name, params)
    if Q.homotopy is None:
        Q = qd.solve_homotopy(Q)
    m = Q.scalar
    T2 = gm.trivial_module(Q.group, m * m) if coeff == "trivial" else gm.twisted_coefficients(Q.group, m)
    return Q, T2, qd.tensor_with(Q, T2, m)


def triples(F):
    SQ = seq.split_quadruple(F)
    return SQ, (SQ.first, SQ.second)


def test_split_triple_connecting_vanishes():
    X2 = gm.trivial_module(gr.cyclic(2), 4)
    T = seq.split_triple(X2, 2)
    assert T.exact() and T.homotopy_ok() and T.homotopy_identities()
    delta, rhs = seq.connecting_identity_sides(T, 0)
    assert delta.is_zero() and rhs.is_zero()


@pytest.mark.parametrize("name,params", [("cyclic", {"k": 2}), ("cyclic", {"k": 3}), ("sigma", {"k": 4, "m": 2}), ("dihedral", {"k": 4})])
@pytest.mark.parametrize("coeff", ["trivial", "twist"])
def test_triples_of_a_quadruple(name, params, coeff):
    Q, T2, F = four_term(name, params, coeff)
    SQ, (T1, T2_) = triples(F)
    for T in (T1, T2_):
        assert T.exact()
        assert T.homotopy_ok()
        assert T.homotopy_identities()
        for n in (0, 1):
            assert seq.connecting_identity_check(T, n)
        assert seq.extension_identity_check(T)


def test_extension_check_catches_a_zero_homotopy():
    _, _, F = four_term("cyclic", {"k": 2})
    SQ, (T, _) = triples(F)
    bad = seq.TripleWithHomotopy(T.i, T.p, np.zeros_like(T.h_YX), T.h_ZY, T.m, "zeroed")
    assert not bad.homotopy_ok()
    w = seq.extension_identity(bad)
    assert not w.ok
    assert not w.bijective


@pytest.mark.parametrize("name,params", [("cyclic", {"k": 2}), ("cyclic", {"k": 4}), ("sigma", {"k": 4, "m": 2}), ("biquadratic", {})])
def test_six_term_exact_under_gates(name, params):
    Q, T2, _ = four_term(name, params)
    for n in (0, 1):
        r = seq.six_term(Q, T2, n, Q.scalar)
        assert r.nu.consistent
        assert r.N.exact and r.N.equivariant and r.N.splits
        if r.preconditions:
            assert r.exact, r.as_dict()["exact_at"]
            assert r.verdict is True
        else:
            assert r.verdict is None


def test_six_term_gate_failure_is_a_real_failure():
    # cyclic(3) with trivial Z/9 at n = 1: beta^1 does not vanish and the
    # sequence is not exact, so the hypothesis cannot be dropped
    Q = qd.build_cyclic(3)
    r = seq.six_term(Q, gm.trivial_module(Q.group, 9), 1, 3)
    assert not r.preconditions
    assert not r.exact


def test_missing_homotopy_is_solved_or_refused():
    Q = qd.build_sigma(4, 2)
    bare = qd.ExactQuadruple(Q.group, *Q.modules, *Q.maps, None, None, Q.name, Q.params)
    assert seq.six_term(bare, gm.trivial_module(Q.group, 4), 0, 2).exact
    # cyclic(4) admits no homotopy with scalar 2
    C = qd.build_cyclic(4)
    with pytest.raises((seq.SequenceError, qd.CatalogError)):
        seq.six_term(C, gm.trivial_module(C.group, 4), 0, 2)


def test_report_dict_is_plain():
    Q = qd.build_cyclic(2)
    d = seq.six_term(Q, gm.trivial_module(Q.group, 4), 0, 2).as_dict()
    assert d["labels"][0].startswith("H^0")
    assert len(d["groups"]) == 6 and len(d["maps"]) == 5
    assert set(d["exact_at"]) == set(d["labels"][1:5])


@pytest.mark.parametrize("name,params", [("cyclic", {"k": 2}), ("sigma", {"k": 4, "m": 2})])
def test_nu_does_not_depend_on_the_homotopy(name, params):
    Q, T2, F = four_term(name, params)
    alt = qd.solve_homotopy(Q, Q.scalar, variant=1)
    F2 = seq.with_homotopy(F, [qd.tensor_with(alt, T2, Q.scalar).homotopy[i].matrix for i in range(3)])
    same_nu, iso = seq.nu_independence(F, F2, 0)
    assert same_nu and iso
