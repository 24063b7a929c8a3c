"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Every check here is exact (integer or modular arithmetic); the runtime limits
are asserted alongside the verdicts.
"""

import subprocess
import sys
import time

import numpy as np
import pytest

import oracles
from sixterm import cohomology as coh, gmodules as gm, groups as gr, quadruples as qd
from sixterm import sequences as seq, subgroup_sequences as ss

CATALOG_SETS = (
    [("cyclic", {"k": k}) for k in range(2, 13)]
    + [("dihedral", {"k": k}) for k in (4, 8, 12)]
    + [("sigma", {"k": k, "m": m}) for k, m in [(4, 2), (8, 2), (8, 4), (9, 3)]]
    + [("selfdual", {"k": k, "m": m}) for k, m in [(4, 2), (8, 2), (6, 3)]]
    + [("biquadratic", {}), ("biquadratic2", {}), ("s4", {})]
)
# the six-term sweep also covers the index-two restriction of dihedral(8)
SIXTERM_SETS = CATALOG_SETS + [("dihedral_plus", {"k": 8})]


def announce(capsys, num, title, failures, elapsed, limit=None, note=""):
    ok = not failures and (limit is None or elapsed < limit)
    budget = f" (limit {limit:.0f}s)" if limit is not None else ""
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {num:>2}: {title}: {elapsed:.1f}s{budget}{note}")
        for f in failures[:10]:
            print(f"         {f}")
    assert not failures, failures
    if limit is not None:
        assert elapsed < limit, f"took {elapsed:.1f}s, limit {limit}s"


def label(name, params):
    return f"{name}({', '.join(f'{k}={v}' for k, v in params.items())})"


def with_homotopy(name, params):
    Q = qd.catalog_build(name, params)
    return Q if Q.homotopy is not None else qd.solve_homotopy(Q)


def coefficient_choices(G, m):
    out = [("trivial", gm.trivial_module(G, m * m))]
    tw = gm.twisted_coefficients(G, m)
    if tw is not None:
        out.append(("twist", tw))
    return out


def test_criterion_01_catalog_integrity(capsys):
    t = time.perf_counter()
    failures = []
    for name, params in CATALOG_SETS:
        Q = qd.catalog_build(name, params)
        rep = qd.verify(Q)
        if not (rep.complex_ok and rep.exact and rep.equivariant):
            failures.append(f"{label(name, params)}: {rep.as_dict()}")
        if Q.homotopy is not None and rep.homotopy_ok is not True:
            failures.append(f"{label(name, params)}: stored homotopy fails")
    announce(capsys, 1, f"catalog integrity over {len(CATALOG_SETS)} entries", failures,
             time.perf_counter() - t, 30)


def test_criterion_02_homotopy_solver(capsys):
    t = time.perf_counter()
    failures = []
    cases = [("sigma", {"k": 4, "m": 2}, 2), ("sigma", {"k": 8, "m": 2}, 2), ("selfdual", {"k": 4, "m": 2}, 2), ("s4", {}, 2)]
    for name, params, s in cases:
        Q = qd.catalog_build(name, params)
        bare = qd.ExactQuadruple(Q.group, *Q.modules, *Q.maps, None, None, Q.name, dict(Q.params))
        R = qd.solve_homotopy(bare, s)
        if R is None:
            failures.append(f"{label(name, params)}: no homotopy with scalar {s}")
            continue
        if not all(h.is_equivariant() for h in R.homotopy) or qd.verify(R).homotopy_ok is not True:
            failures.append(f"{label(name, params)}: solved homotopy does not verify")
    announce(capsys, 2, "homotopy solver at the asserted scalars", failures, time.perf_counter() - t, 60)


def test_criterion_03_cohomology_oracle(capsys):
    t = time.perf_counter()
    failures = []
    count = 0
    for k in range(1, 9):
        G = gr.cyclic(k)
        for m in (2, 3, 4):
            M = gm.trivial_module(G, m)
            periodic = oracles.cyclic_cohomology(k, m, nmax=3)
            for n in range(4):
                got = list(coh.cohomology(G, M, n).divisors)
                closed = oracles.trivial_cyclic_formula(k, m, n)
                count += 1
                if not (got == periodic[n] == closed):
                    failures.append(f"C{k} Z/{m} n={n}: bar {got}, periodic {periodic[n]}, closed {closed}")
    announce(capsys, 3, f"bar cohomology equals the periodic oracle ({count} groups)", failures,
             time.perf_counter() - t, 60)


def test_criterion_04_transfer(capsys):
    t = time.perf_counter()
    failures = []
    D4 = gr.dihedral(4)
    cases = [
        ("Z/4 > Z/2", gr.cyclic(4), [2]),
        ("Z/2xZ/2 > Z/2", gr.klein_four(), [1]),
        ("D4 > rotations", D4, [gr.rotation(4, 1)]),
    ]
    for title, G, gens in cases:
        H = gr.subgroup(G, gens)
        mods = [("trivial Z/2", gm.trivial_module(G, 2)),
                ("sign-twisted Z/4", gm.character_twist(gm.trivial_module(G, 4), gm.sign_characters(G)[0]))]
        for mname, M in mods:
            for n in range(3):
                comp = coh.cor(H, G, M, n) @ coh.res(G, H, M, n)
                S = comp.source
                ident = coh.CohomologyMap(S, S, H.index * np.eye(S.rank, dtype=np.int64))
                if not comp.equals(ident):
                    failures.append(f"{title}, {mname}, n={n}")
    announce(capsys, 4, "cor . res = [G:H]", failures, time.perf_counter() - t)


def test_criterion_05_bockstein(capsys):
    t = time.perf_counter()
    failures = []
    groups = [(gr.cyclic(2), 2), (gr.cyclic(4), 2), (gr.cyclic(3), 3), (gr.cyclic(9), 3),
              (gr.klein_four(), 2), (gr.dihedral(4), 2)]
    squares = 0
    for G, m in groups:
        T = gm.trivial_module(G, m * m)
        # coefficients reducing a Z-lattice: beta . beta = 0
        for T2 in [T] + [gm.character_twist(T, chi) for chi in gm.sign_characters(G)]:
            for n in range(2):
                squares += 1
                if not (coh.bockstein(T2, m, n + 1) @ coh.bockstein(T2, m, n)).is_zero():
                    failures.append(f"{G.name} {T2.name}: beta beta != 0 at n={n}")
        if not coh.bockstein(T, m, 0).is_zero():
            failures.append(f"{G.name}: beta^0 != 0 for trivial action")
    # the 1 + m twist lifts to no lattice and is checked against the oracle instead
    for k, m, u in [(3, 3, 4), (9, 3, 4)]:
        chi = np.array([pow(u, j, m * m) for j in range(k)])
        T2 = gm.character_twist(gm.trivial_module(gr.cyclic(k), m * m), chi)
        for n in range(2):
            nz = not (coh.bockstein(T2, m, n + 1) @ coh.bockstein(T2, m, n)).is_zero()
            if nz != oracles.cyclic_bockstein_square_nonzero(k, m, u, n):
                failures.append(f"C{k} u={u}: beta beta disagrees with the oracle at n={n}")
    # naturality along augmentations of permutation modules, defined over Z/m^2
    for G, gens in [(gr.cyclic(4), [2]), (gr.dihedral(4), [2]), (gr.dihedral(4), [4])]:
        m = 2
        P2 = gm.perm_module(gr.cosets(gr.subgroup(G, gens)), 4)
        T2 = gm.trivial_module(G, 4)
        f2 = gm.ModuleMap(P2, T2, np.ones((1, P2.rank), dtype=np.int64))
        f1 = gm.reduce_map(f2, m)
        for n in range(2):
            lhs = coh.bockstein(T2, m, n, T1=f1.target) @ coh.induced(f1, n)
            rhs = coh.induced(f1, n + 1) @ coh.bockstein(P2, m, n, T1=f1.source)
            if not lhs.equals(rhs):
                failures.append(f"{G.name} Z[G/<{gens}>] -> Z: naturality fails at n={n}")
    announce(capsys, 5, f"Bockstein square ({squares} liftable cases), naturality, beta^0", failures,
             time.perf_counter() - t)


def test_criterion_06_connecting_and_extension_identities(capsys):
    t = time.perf_counter()
    failures = []
    checked = big = 0
    for name, params in CATALOG_SETS:
        Q = with_homotopy(name, params)
        m = Q.scalar
        res = seq.pipeline_resolution(Q.group, m)
        for cname, T2 in coefficient_choices(Q.group, m):
            SQ = seq.split_quadruple(qd.tensor_with(Q, T2, m))
            for T in (SQ.first, SQ.second):
                tag = f"{label(name, params)} {cname} {T.name}"
                for n in (0, 1):
                    if not seq.connecting_identity_check(T, n, res):
                        failures.append(f"{tag}: connecting identity fails at n={n}")
                # required up to order 4096; the check is cheap, so run it on all
                checked += 1
                big += T.N ** T.Y2.rank > 4096
                if not seq.extension_identity_check(T):
                    failures.append(f"{tag}: extension identity fails")
    announce(capsys, 6, f"connecting and extension identities ({checked} triples, {big} above order 4096)",
             failures, time.perf_counter() - t, 300)


def test_criterion_07_six_term(capsys):
    t = time.perf_counter()
    failures = []
    gated = total = 0
    for name, params in SIXTERM_SETS:
        Q = with_homotopy(name, params)
        m = Q.scalar
        T2 = gm.trivial_module(Q.group, m * m)
        for n in (0, 1):
            r = seq.six_term(Q, T2, n, m)
            total += 1
            if not r.preconditions:
                continue
            gated += 1
            tag = f"{label(name, params)} n={n}"
            if not r.exact:
                failures.append(f"{tag}: not exact at {[p.name for p in r.positions if not p.exact]}")
            if not (r.N.equivariant and r.N.exact and r.N.splits):
                failures.append(f"{tag}: N extension invalid")
            if not r.nu.consistent:
                failures.append(f"{tag}: the two descriptions of nu differ")
    if gated == 0:
        failures.append("no instance satisfied the Bockstein hypotheses")
    announce(capsys, 7, f"six-term exactness ({gated} of {total} instances pass the gates)", failures,
             time.perf_counter() - t, 600)


def test_criterion_08_cyclic_quotient_and_sigma(capsys):
    t = time.perf_counter()
    failures = []
    checked = 0
    for k_G, hgens, m in [(2, [], 2), (4, [2], 4), (4, [], 4)]:
        G = gr.cyclic(k_G)
        H = gr.subgroup(G, hgens)
        T2 = gm.trivial_module(G, m * m)
        for n in (0, 1):
            r = ss.cyclic_quotient_sequence(G, H, T2, m, n)
            if n == 0 and not r.preconditions:
                failures.append(f"cyclic quotient C{k_G}/{H.order}: gates fail at n=0")
            if r.preconditions:
                checked += 1
                if not r.exact:
                    failures.append(f"cyclic quotient C{k_G}/{H.order} m={m} n={n}: {r.exact_at}")
            if r.extras["k"] == m:
                # the unscaled display: res, cor, u cup, res, cor straight from the bar complex
                T = gm.trivial_module(G, m)
                if r.extras["arrows"] != ["res", "cor", "u cup", "res", "cor"]:
                    failures.append(f"C{k_G} k=m: arrows {r.extras['arrows']}")
                if H.order == 1:
                    u = coh.character_class(G, H, m)
                    direct = [coh.res(G, H, T, n).matrix, coh.cor(H, G, T, n).matrix, coh.cup1(G, u, T, n).matrix,
                              coh.res(G, H, T, n + 1).matrix, coh.cor(H, G, T, n + 1).matrix]
                    for j, (a, b) in enumerate(zip(r.maps, direct)):
                        A = np.asarray(a) % m
                        if A.shape != b.shape or not np.array_equal(A, np.asarray(b) % m):
                            failures.append(f"C{k_G} k=m n={n}: arrow {j} differs from the direct map")
    for k_G, hgens, m in [(4, [], 2), (8, [], 2), (8, [4], 2)]:
        G = gr.cyclic(k_G)
        T2 = gm.trivial_module(G, m * m)
        for r in ss.sigma_sequences(G, gr.subgroup(G, hgens), T2, m, 0):
            checked += 1
            if not (r.preconditions and r.exact):
                failures.append(f"sigma C{k_G}/{len(hgens) and 2 or 1} {r.name}: {r.exact_at}")
    announce(capsys, 8, f"cyclic-quotient and sigma displays ({checked} sequences)", failures,
             time.perf_counter() - t)


def test_criterion_09_dihedral_and_biquadratic(capsys):
    t = time.perf_counter()
    failures = []
    G8 = gr.dihedral(8)
    first = ss.dihedral_first_sequence(8, gm.trivial_module(G8, 4), 2, 0)
    if not (first.preconditions and first.exact):
        failures.append(f"first display on D8: {first.exact_at}")
    G4 = gr.dihedral(4)
    second = ss.dihedral_second_sequence(4, gm.trivial_module(G4, 4), 2, 0)
    if not (second.preconditions and second.exact):
        failures.append(f"second display on D4: {second.exact_at}")
    # Q_Gamma+ is the restriction of dihedral(8) to an index-two dihedral subgroup
    Qp = qd.catalog_build("dihedral_plus", {"k": 8})
    r = seq.six_term(Qp, gm.trivial_module(Qp.group, 4), 0, 2)
    if not (r.preconditions and r.exact):
        failures.append("six-term sequence of dihedral_plus(8) at n=0")
    K = gr.klein_four()
    gated = 0
    for n in (0, 1):
        b = ss.biquadratic_sequence(gm.trivial_module(K, 4), 2, n)
        if b.preconditions:
            gated += 1
            if not b.exact:
                failures.append(f"biquadratic n={n}: {b.exact_at}")
    if gated == 0:
        failures.append("biquadratic: gates fail at every degree")
    announce(capsys, 9, f"dihedral and biquadratic displays (biquadratic gated at {gated} of 2 degrees)", failures,
             time.perf_counter() - t)


def test_criterion_10_nu_independence(capsys):
    t = time.perf_counter()
    failures = []
    for name, params in [("cyclic", {"k": 2}), ("cyclic", {"k": 4}), ("sigma", {"k": 4, "m": 2})]:
        Q = qd.catalog_build(name, params)
        m = Q.scalar if Q.scalar else params["m"]
        a, b = qd.solve_homotopy(Q, m, 0), qd.solve_homotopy(Q, m, 1)
        if not (qd.verify(a).homotopy_ok and qd.verify(b).homotopy_ok):
            failures.append(f"{label(name, params)}: a homotopy does not verify")
            continue
        if all(np.array_equal(x.matrix, y.matrix) for x, y in zip(a.homotopy, b.homotopy)):
            failures.append(f"{label(name, params)}: the two homotopies coincide")
        T2 = gm.trivial_module(Q.group, m * m)
        Fa, Fb = qd.tensor_with(a, T2, m), qd.tensor_with(b, T2, m)
        for n in (0, 1):
            same_nu, iso = seq.nu_independence(Fa, Fb, n)
            if not (same_nu and iso):
                failures.append(f"{label(name, params)} n={n}: nu equal {same_nu}, N isomorphic {iso}")
    announce(capsys, 10, "nu and N independent of the homotopy", failures, time.perf_counter() - t)


COMMANDS = [
    ["catalog", "list"],
    ["verify", "dihedral", "--k", "8"],
    ["verify", "sigma", "--k", "4", "--m", "2", "--solve-homotopy", "2"],
    ["verify", "dihedral", "--k", "6"],
    ["cohomology", "--group", "dihedral:4", "--coeff", "trivial:2", "--nmax", "2"],
    ["cohomology", "--group", "cyclic:4", "--coeff", "twist:2", "--nmax", "2", "--resolution", "free"],
    ["sixterm", "--quadruple", "cyclic", "--k", "2", "--coeff", "trivial", "--m", "2", "--n", "0"],
    ["sixterm", "--variant", "sigma", "--group", "cyclic:8", "--m", "2", "--n", "0"],
    ["sixterm", "--variant", "cyclic_quotient", "--group", "cyclic:4", "--subgroup", "2", "--m", "4", "--n", "1"],
    ["sixterm", "--variant", "dihedral", "--k", "8", "--n", "0"],
    ["sixterm", "--variant", "biquadratic", "--n", "1"],
]


def _run(argv, cwd):
    p = subprocess.run([sys.executable, "-m", "sixterm.cli", *argv, "--format", "json"],
                       capture_output=True, cwd=cwd, timeout=300)
    return p.returncode, p.stdout


def test_criterion_11_determinism(capsys, tmp_path):
    t = time.perf_counter()
    failures = []
    for argv in COMMANDS:
        (c1, o1), (c2, o2) = _run(argv, tmp_path), _run(argv, tmp_path)
        if c1 != c2 or o1 != o2 or not o1:
            failures.append(f"{' '.join(argv)}: outputs differ (exit {c1}/{c2})")
    blobs = []
    for i in range(2):
        out = tmp_path / f"q{i}.json"
        _run(["export", "dihedral", "--k", "4", "--out", str(out)], tmp_path)
        blobs.append(out.read_bytes())
    if blobs[0] != blobs[1]:
        failures.append("export: files differ")
    imports = [_run(["import", str(tmp_path / "q0.json")], tmp_path) for _ in range(2)]
    if imports[0] != imports[1]:
        failures.append("import: outputs differ")
    announce(capsys, 11, f"byte-identical JSON over {len(COMMANDS) + 2} commands", failures, time.perf_counter() - t)
