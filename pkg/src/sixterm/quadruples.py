"""Exact quadruples of permutational modules and their homotopies.

A quadruple is ``A -> B -> C -> D`` over Z (each term a direct sum of
permutation modules and copies of Z), optionally with a homotopy
``h = (h_BA, h_CB, h_DC)`` satisfying ``dh + hd = s`` at all four terms.

Block matrices follow one convention: the block ``U[i][j]`` maps the j-th
summand of the source to the i-th summand of the target.

Dihedral maps are written on the 2k-cycle of vertices and edges: vertex
``v_i`` sits at position ``2i`` and edge ``e_i`` at ``2i+1``, so the half
rotation is the shift by one position and a Laurent polynomial in ``y``
(with ``y^2 = s``) acts by shifts.  Quotients by a rotation subgroup live on
the shorter cycle of their orbit indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import gmodules as gm
from . import groups as gr
from .linalg import integer as zla


class CatalogError(ValueError):
    pass


# --- polynomial helpers ------------------------------------------------------


def cyclic_homotopy_poly(k):
    """f with k - (1 + x + ... + x^(k-1)) = (1 - x) f(x), by long division."""
    num = [k - 1] + [-1] * (k - 1)  # coefficients of k - N(x), low degree first
    # divide by (1 - x): q_j = sum_{i<=j} num_i
    q = np.cumsum(num)[:-1]
    if np.cumsum(num)[-1] != 0:
        raise CatalogError("division by 1 - x is not exact")
    return [int(c) for c in q]


def laurent_divide(num, den):
    """Exact division of Laurent polynomials given as {exponent: coeff} dicts."""
    num = {e: c for e, c in num.items() if c}
    den = {e: c for e, c in den.items() if c}
    dlo, dhi = min(den), max(den)
    if abs(den[dhi]) != 1:
        raise CatalogError("divisor must have a unit leading coefficient")
    lo = min(num) - dlo if num else 0
    q = {}
    while num:
        hi = max(num)
        c = num[hi] // den[dhi]
        e = hi - dhi
        if c * den[dhi] != num[hi] or e < lo:
            raise CatalogError("Laurent division is not exact")
        q[e] = q.get(e, 0) + c
        for de, dc in den.items():
            num[e + de] = num.get(e + de, 0) - c * dc
            if num[e + de] == 0:
                del num[e + de]
    return q


def dihedral_laurent_poly(k):
    """f with (x^-1/2 + x^1/2)^2 f = 1 + sum_{|i| < k/2} x^i."""
    num = {0: 1}
    for i in range(-k // 2 + 1, k // 2):
        num[i] = num.get(i, 0) + 1
    den = {-1: 1, 0: 2, 1: 1}
    q = laurent_divide(num, den)
    return {e: c for e, c in sorted(q.items()) if c}


def poly_mul(p, q):
    out = {}
    for a, x in p.items():
        for b, y in q.items():
            out[a + b] = out.get(a + b, 0) + x * y
    return {e: c for e, c in out.items() if c}


# --- matrices on cycles ----------------------------------------------------


def cycle_map(poly, n_src, src_par, n_tgt, tgt_par):
    """Shifts on a cycle of 2n positions, vertices even and edges odd.

    ``poly`` maps exponents (in half steps) to coefficients.  Sources and
    targets are the vertex (parity 0) or edge (parity 1) points.
    """
    if n_src != n_tgt:
        raise CatalogError("cycle maps need equal point counts")
    n = n_src
    L = 2 * n
    M = np.zeros((n, n), dtype=np.int64)
    for j, c in poly.items():
        if (src_par + j - tgt_par) % 2:
            raise CatalogError("shift parity does not match the target")
        for i in range(n):
            p = (2 * i + src_par + j) % L
            M[(p - tgt_par) // 2, i] += c
    return M


def projection(cls, n_orbits):
    M = np.zeros((n_orbits, len(cls)), dtype=np.int64)
    M[cls, np.arange(len(cls))] = 1
    return M


def ones(r, c):
    return np.ones((r, c), dtype=np.int64)


# --- quadruples -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ExactQuadruple:
    group: gr.FiniteGroup
    A: gm.GModule
    B: gm.GModule
    C: gm.GModule
    D: gm.GModule
    d_AB: gm.ModuleMap
    d_BC: gm.ModuleMap
    d_CD: gm.ModuleMap
    homotopy: tuple = None
    scalar: int = None
    name: str = "Q"
    params: dict = field(default_factory=dict)

    @property
    def modules(self):
        return (self.A, self.B, self.C, self.D)

    @property
    def maps(self):
        return (self.d_AB, self.d_BC, self.d_CD)

    def with_homotopy(self, h, scalar):
        return ExactQuadruple(self.group, *self.modules, *self.maps, tuple(h), scalar, self.name, dict(self.params))


@dataclass
class QuadrupleReport:
    equivariant: bool
    complex_ok: bool
    injective_A: bool
    exact_B: bool
    exact_C: bool
    surjective_D: bool
    homotopy_ok: object
    details: list

    @property
    def exact(self):
        return self.injective_A and self.exact_B and self.exact_C and self.surjective_D

    @property
    def ok(self):
        return (
            self.equivariant
            and self.complex_ok
            and self.exact
            and self.homotopy_ok is not False
        )

    def as_dict(self):
        return {
            "equivariant": self.equivariant,
            "complex_ok": self.complex_ok,
            "injective_A": self.injective_A,
            "exact_B": self.exact_B,
            "exact_C": self.exact_C,
            "surjective_D": self.surjective_D,
            "homotopy_ok": self.homotopy_ok,
            "details": list(self.details),
        }


def _mk(G, parts, name):
    mods = [p for _, p in parts]
    M = gm.direct_sum(*mods, name=name)
    return gm.GModule(G, 0, M.action, name, tuple((lab, p.rank) for lab, p in parts)).validate(), mods


def _Z(G):
    return gm.trivial_module(G, 0, 1, "Z")


def _assemble(G, name, params, Aparts, Bparts, Cparts, Dparts, dAB, dBC, dCD, h=None, scalar=None):
    A, Am = _mk(G, Aparts, "A")
    B, Bm = _mk(G, Bparts, "B")
    C, Cm = _mk(G, Cparts, "C")
    D, Dm = _mk(G, Dparts, "D")
    maps = [
        gm.block_map(Am, Bm, dAB, A, B),
        gm.block_map(Bm, Cm, dBC, B, C),
        gm.block_map(Cm, Dm, dCD, C, D),
    ]
    hom = None
    # without a homotopy, scalar records the one a homotopy is expected for
    if h is not None:
        hBA, hCB, hDC = h
        hom = (
            gm.block_map(Bm, Am, hBA, B, A),
            gm.block_map(Cm, Bm, hCB, C, B),
            gm.block_map(Dm, Cm, hDC, D, C),
        )
    return ExactQuadruple(G, A, B, C, D, *maps, hom, scalar, name, params)


def build_cyclic(k):
    if k < 2:
        raise CatalogError("cyclic quadruple needs k >= 2")
    G = gr.cyclic(k)
    R = gm.perm_module(gr.regular(G), 0, "Z[S]")
    Z = _Z(G)
    N = ones(k, 1)
    one_minus = np.eye(k, dtype=np.int64) - R.action[1]
    f = cyclic_homotopy_poly(k)
    fs = sum(c * R.action[j] for j, c in enumerate(f))
    h = ([[ones(1, k)]], [[fs]], [[N]])
    return _assemble(
        G, "cyclic", {"k": k},
        [("Z", Z)], [("Z[S]", R)], [("Z[S]", R)], [("Z", Z)],
        [[N]], [[one_minus]], [[ones(1, k)]], h, k,
    )


def build_sigma(k, m):
    if k < 1 or m < 1 or k % m:
        raise CatalogError("sigma quadruple needs m | k")
    G = gr.cyclic(k)
    R = gm.perm_module(gr.regular(G), 0, "Z[S]")
    P = gr.subgroup(G, [k // m]) if m > 1 else gr.Subgroup(G, (0,))
    Xq, cls = gr.orbits_mod(P, gr.regular(G))
    Rq = gm.perm_module(Xq, 0, "Z[S/P]")
    Z = _Z(G)
    q = k // m
    pr = projection(cls, q)
    sig_bar = Rq.action[1]
    dAB = [[ones(k, 1)], [-m * ones(1, 1)]]
    U = [[np.eye(k, dtype=np.int64) - R.action[1], None], [pr, ones(q, 1)]]
    dCD = [[pr, -np.eye(q, dtype=np.int64) + sig_bar]]
    return _assemble(
        G, "sigma", {"k": k, "m": m},
        [("Z", Z)], [("Z[S]", R), ("Z", Z)], [("Z[S]", R), ("Z[S/P]", Rq)], [("Z[S/P]", Rq)],
        dAB, U, dCD, None, m,
    )


def _dihedral_sets(k, P):
    G = gr.dihedral(k)
    V, E = gr.vertices(G), gr.edges(G)
    Vq, cv = gr.orbits_mod(P, V)
    Eq, ce = gr.orbits_mod(P, E)
    return G, V, E, Vq, cv, Eq, ce


def build_dihedral(k):
    if k < 4 or k % 4:
        raise CatalogError("dihedral quadruple needs k divisible by 4")
    G = gr.dihedral(k)
    P = gr.subgroup(G, [k // 2])
    G, V, E, Vq, cv, Eq, ce = _dihedral_sets(k, P)
    h = k // 2
    ZV, ZE = gm.perm_module(V, 0, "Z[V]"), gm.perm_module(E, 0, "Z[E]")
    ZVq, ZEq = gm.perm_module(Vq, 0, "Z[V/P]"), gm.perm_module(Eq, 0, "Z[E/P]")
    Z = _Z(G)
    half = {-1: 1, 1: 1}
    dAB = [[ones(k, 1)], [-2 * ones(1, 1)]]
    U = [
        [cycle_map(half, k, 0, k, 1), ones(k, 1)],
        [projection(cv, h), ones(h, 1)],
    ]
    dCD = [[projection(ce, h), -cycle_map(half, h, 0, h, 1)]]
    f = dihedral_laurent_poly(k)
    psi = poly_mul(half, {2 * e: c for e, c in f.items()})
    # both augmentations out of Z[V] and Z[E] enter with a minus sign
    hBA = [[-ones(1, k), (-h - 1) * ones(1, 1)]]
    Hm = [
        [cycle_map(psi, k, 1, k, 0), projection(cv, h).T],
        [-ones(1, k), None],
    ]
    norm_bar = {2 * t + 1: 1 for t in range(h)}
    right = {}
    for e, c in norm_bar.items():
        right[e] = right.get(e, 0) + c
    for e, c in psi.items():
        right[e] = right.get(e, 0) - c
    hDC = [[projection(ce, h).T], [cycle_map(right, h, 1, h, 0)]]
    return _assemble(
        G, "dihedral", {"k": k},
        [("Z", Z)], [("Z[V]", ZV), ("Z", Z)], [("Z[E]", ZE), ("Z[V/P]", ZVq)], [("Z[E/P]", ZEq)],
        dAB, U, dCD, (hBA, Hm, hDC), 2,
    )


# --- verification -----------------------------------------------------------


def _same_lattice(X, Y):
    """Row lattices of the integer matrices X and Y agree."""
    return np.array_equal(zla.row_lattice(X), zla.row_lattice(Y))


def _kernel_rows(M):
    K = zla.kernel(M)  # columns
    return np.asarray(K, dtype=object).T.reshape(-1, M.shape[1])


def _image_rows(M):
    return np.asarray(M, dtype=object).T.reshape(-1, M.shape[0])


def homotopy_defects(Q):
    """The four matrices dh + hd - s, from the leftmost term to the rightmost."""
    if Q.homotopy is None:
        return None
    hBA, hCB, hDC = (h.matrix for h in Q.homotopy)
    dAB, dBC, dCD = (d.matrix for d in Q.maps)
    s = Q.scalar
    eye = lambda n: np.eye(n, dtype=np.int64)
    return [
        hBA @ dAB - s * eye(Q.A.rank),
        dAB @ hBA + hCB @ dBC - s * eye(Q.B.rank),
        dBC @ hCB + hDC @ dCD - s * eye(Q.C.rank),
        dCD @ hDC - s * eye(Q.D.rank),
    ]


def verify(Q):
    """Check equivariance, d.d = 0, exactness over Z and the homotopy."""
    details = []
    eq = all(m.is_equivariant() for m in Q.maps)
    if Q.homotopy is not None:
        eq = eq and all(h.is_equivariant() for h in Q.homotopy)
    if not eq:
        details.append("a map is not equivariant")
    dAB, dBC, dCD = (d.matrix for d in Q.maps)
    cx = not (np.any(dBC @ dAB) or np.any(dCD @ dBC))
    if not cx:
        details.append("d.d is not zero")
    inj = _kernel_rows(dAB).shape[0] == 0
    exB = cx and _same_lattice(_image_rows(dAB), _kernel_rows(dBC))
    exC = cx and _same_lattice(_image_rows(dBC), _kernel_rows(dCD))
    surj = _same_lattice(_image_rows(dCD), np.eye(Q.D.rank, dtype=np.int64))
    for ok, what in [(inj, "not injective at A"), (exB, "not exact at B"), (exC, "not exact at C"), (surj, "not surjective at D")]:
        if not ok:
            details.append(what)
    hom = None
    if Q.homotopy is not None:
        bad = [t for t, E in zip("ABCD", homotopy_defects(Q)) if np.any(E)]
        hom = not bad
        if bad:
            details.append("homotopy identity fails at " + ",".join(bad))
    return QuadrupleReport(eq, cx, inj, exB, exC, surj, hom, details)


# --- homotopy solver --------------------------------------------------------


def _perms(M):
    """ρ(g) as index permutations, or None if M is not permutational."""
    a = np.asarray(M.action)
    if not (np.all((a == 0) | (a == 1)) and np.all(a.sum(axis=1) == 1)):
        return None
    return a.argmax(axis=1)  # perm[g, i] = index of ρ(g) e_i


def hom_basis(X, Y):
    """Z-basis of Hom_G(X, Y) as a list of (Y.rank, X.rank) matrices."""
    px, py = _perms(X), _perms(Y)
    if px is None or py is None:
        G = X.group
        eqs = []
        n = Y.rank * X.rank
        for g in range(G.order):
            # M ρ_X(g) - ρ_Y(g) M, vectorized over M in row-major order
            eqs.append(np.kron(np.eye(Y.rank, dtype=np.int64), X.action[g].T) - np.kron(Y.action[g], np.eye(X.rank, dtype=np.int64)))
        K = zla.kernel(np.vstack(eqs)) if n else np.zeros((0, 0), dtype=object)
        return [zla.as_int64(K[:, j]).reshape(Y.rank, X.rank) for j in range(K.shape[1])]
    seen = np.full((Y.rank, X.rank), -1)
    out = []
    for y in range(Y.rank):
        for x in range(X.rank):
            if seen[y, x] >= 0:
                continue
            B = np.zeros((Y.rank, X.rank), dtype=np.int64)
            B[py[:, y], px[:, x]] = 1
            seen[B == 1] = len(out)
            out.append(B)
    return out


def _homotopy_system(Q, s):
    bases = [hom_basis(Q.B, Q.A), hom_basis(Q.C, Q.B), hom_basis(Q.D, Q.C)]
    dAB, dBC, dCD = (d.matrix for d in Q.maps)
    cols = []
    zA = np.zeros((Q.A.rank, Q.A.rank), np.int64)
    zD = np.zeros((Q.D.rank, Q.D.rank), np.int64)
    zB = np.zeros((Q.B.rank, Q.B.rank), np.int64)
    zC = np.zeros((Q.C.rank, Q.C.rank), np.int64)
    for t, basis in enumerate(bases):
        for H in basis:
            if t == 0:
                parts = [H @ dAB, dAB @ H, zC, zD]
            elif t == 1:
                parts = [zA, H @ dBC, dBC @ H, zD]
            else:
                parts = [zA, zB, H @ dCD, dCD @ H]
            cols.append(np.concatenate([p.ravel() for p in parts]))
    rhs = np.concatenate([s * np.eye(M.rank, dtype=np.int64).ravel() for M in Q.modules])
    A = np.array(cols, dtype=np.int64).T if cols else np.zeros((rhs.size, 0), np.int64)
    return bases, A, rhs


def _unpack(Q, bases, x):
    mats = []
    i = 0
    for basis, (S, T) in zip(bases, [(Q.B, Q.A), (Q.C, Q.B), (Q.D, Q.C)]):
        M = np.zeros((T.rank, S.rank), dtype=np.int64)
        for H in basis:
            M += int(x[i]) * H
            i += 1
        mats.append(M)
    return mats


def homotopy_space(Q, s):
    """(particular solution or None, homogeneous basis) of the homotopy equations."""
    bases, A, rhs = _homotopy_system(Q, s)
    x = zla.solve(A, rhs)
    K = zla.kernel(A)
    return bases, x, [K[:, j] for j in range(K.shape[1])]


def solve_homotopy(Q, s=None, variant=0):
    """An equivariant homotopy dh + hd = s, or None if there is none.

    ``variant`` 0 is the canonical reduced solution; ``variant`` v > 0 adds
    the (v-1)-th homogeneous solution (cyclically), giving a different
    homotopy whenever the solution is not unique.
    """
    s = Q.scalar if s is None else s
    if s is None:
        raise CatalogError("no homotopy scalar given")
    bases, x, hom = homotopy_space(Q, s)
    if x is None:
        return None
    if variant and hom:
        x = x + hom[(variant - 1) % len(hom)]
    mats = _unpack(Q, bases, x)
    h = tuple(gm.ModuleMap(S, T, M) for M, (S, T) in zip(mats, [(Q.B, Q.A), (Q.C, Q.B), (Q.D, Q.C)]))
    return Q.with_homotopy(h, s)


def minimal_homotopy_scalar(Q, bound=64):
    """Smallest s > 0 up to ``bound`` admitting an equivariant homotopy."""
    bases, A, _ = _homotopy_system(Q, 1)
    for s in range(1, bound + 1):
        rhs = np.concatenate([s * np.eye(M.rank, dtype=np.int64).ravel() for M in Q.modules])
        if zla.solve(A, rhs) is not None:
            return s
    return None


# --- operations on quadruples ------------------------------------------------


def orbit_shape(M):
    """Orbits of the basis of a permutational module, with stabilizer sizes."""
    perm = _perms(M)
    if perm is None:
        raise CatalogError(f"{M.name} is not permutational")
    seen, out = set(), []
    for x in range(M.rank):
        if x in seen:
            continue
        orb = sorted(set(int(y) for y in perm[:, x]))
        seen.update(orb)
        out.append({"points": orb, "size": len(orb), "stabilizer": M.group.order // len(orb)})
    return out


def shape(Q):
    """Orbit sizes of each term, e.g. ``[[1], [4, 1], [2, 2, 2], [1, 1]]``."""
    return [[o["size"] for o in orbit_shape(M)] for M in Q.modules]


def _rebuild(Q, mods, maps, hom, name=None, params=None, scalar=None):
    A, B, C, D = mods
    hmaps = None
    if hom is not None:
        hmaps = tuple(gm.ModuleMap(S, T, H) for H, (S, T) in zip(hom, [(B, A), (C, B), (D, C)]))
    dmaps = [gm.ModuleMap(S, T, M) for M, (S, T) in zip(maps, [(A, B), (B, C), (C, D)])]
    return ExactQuadruple(
        A.group, A, B, C, D, *dmaps, hmaps,
        Q.scalar if scalar is None else scalar,
        name or Q.name, dict(Q.params if params is None else params),
    )


def restrict_quadruple(Q, emb, name=None):
    """Restrict every term and map along a group embedding (or Subgroup)."""
    mods = [gm.restrict(M, emb) for M in Q.modules]
    hom = None if Q.homotopy is None else [h.matrix for h in Q.homotopy]
    return _rebuild(Q, mods, [d.matrix for d in Q.maps], hom, name or f"{Q.name}|{getattr(emb, 'source', emb).name if hasattr(emb, 'source') else 'H'}")


def inflate_quadruple(Q, hom, name=None):
    """Pull a quadruple back along a homomorphism into Q's group."""
    mods = [gm.inflate(M, hom) for M in Q.modules]
    h = None if Q.homotopy is None else [x.matrix for x in Q.homotopy]
    return _rebuild(Q, mods, [d.matrix for d in Q.maps], h, name or Q.name)


def dualize(Q):
    """Hom_Z(-, Z) of Q: D* -> C* -> B* -> A* with transposed maps."""
    mods = [gm.dual(M) for M in (Q.D, Q.C, Q.B, Q.A)]
    maps = [Q.d_CD.matrix.T, Q.d_BC.matrix.T, Q.d_AB.matrix.T]
    hom = None
    if Q.homotopy is not None:
        hBA, hCB, hDC = (h.matrix for h in Q.homotopy)
        hom = [hDC.T, hCB.T, hBA.T]
    return _rebuild(Q, mods, maps, hom, f"{Q.name}*")


def corrupt(Q, entry=(0, 0)):
    """Negative control: flip the sign of one entry of the first differential."""
    M = Q.d_AB.matrix.copy()
    M[entry] = -M[entry]
    if not M[entry]:
        raise CatalogError("chosen entry is zero")
    bad = gm.unchecked(Q.A, Q.B, M)
    return ExactQuadruple(Q.group, Q.A, Q.B, Q.C, Q.D, bad, Q.d_BC, Q.d_CD, Q.homotopy, Q.scalar, f"{Q.name}!", dict(Q.params))


def cancel(Q, b, c):
    """Gaussian elimination of a unit entry d_BC[c, b] between fixed points.

    The basis vectors b of B and c of C must both span trivial summands.
    With d_BC = [[phi, beta], [gamma, delta]] (phi the cancelled entry) the
    new middle map is delta - gamma phi^-1 beta; the outer maps keep their
    components away from b and c.  The homotopy is dropped.
    """
    pb, pc = _perms(Q.B), _perms(Q.C)
    if np.any(pb[:, b] != b) or np.any(pc[:, c] != c):
        raise CatalogError("cancelled basis vectors must be fixed points")
    U = Q.d_BC.matrix
    phi = int(U[c, b])
    if abs(phi) != 1:
        raise CatalogError("cancelled entry is not a unit")
    keepB = [i for i in range(Q.B.rank) if i != b]
    keepC = [i for i in range(Q.C.rank) if i != c]
    beta = U[np.ix_([c], keepB)]
    gamma = U[np.ix_(keepC, [b])]
    delta = U[np.ix_(keepC, keepB)]
    newU = delta - phi * gamma @ beta
    B1 = _submodule(Q.B, keepB)
    C1 = _submodule(Q.C, keepC)
    maps = [Q.d_AB.matrix[keepB], newU, Q.d_CD.matrix[:, keepC]]
    return _rebuild(Q, [Q.A, B1, C1, Q.D], maps, None, f"{Q.name}/~", scalar=None)


def _submodule(M, keep):
    """The span of a G-stable subset of basis vectors of a permutational module."""
    a = M.action[np.ix_(range(M.group.order), keep, keep)]
    summ = []
    o = 0
    keep = set(keep)
    for lab, r in M.summands:
        n = sum(1 for i in range(o, o + r) if i in keep)
        if n:
            summ.append((lab, n))
        o += r
    return gm.GModule(M.group, M.modulus, a, M.name, tuple(summ)).validate()


# --- the remaining entries ------------------------------------------------------


def build_dihedral_plus(k):
    Q = build_dihedral(k)
    emb = gr.dihedral_index2(k, "vertex_transitive")
    out = restrict_quadruple(Q, emb, "dihedral_plus")
    return _rebuild(out, out.modules, [d.matrix for d in out.maps], [h.matrix for h in out.homotopy], "dihedral_plus", {"k": k})


def build_biquadratic():
    Q = build_dihedral(4)
    out = restrict_quadruple(Q, gr.klein_in_dihedral4("vertex_transitive"))
    return _rebuild(out, out.modules, [d.matrix for d in out.maps], [h.matrix for h in out.homotopy], "biquadratic", {})


def build_biquadratic2():
    Q = restrict_quadruple(build_dihedral(4), gr.klein_in_dihedral4("edge_transitive"))
    # the trivial Z of B maps isomorphically onto the first point of Z[V/P]
    b = Q.B.rank - 1
    c = Q.C.rank - 2
    R = cancel(Q, b, c)
    R = _rebuild(R, R.modules, [d.matrix for d in R.maps], None, "biquadratic2", {}, scalar=2)
    return solve_homotopy(R, 2)


def build_selfdual(k, m):
    if k < 1 or m < 1 or k % m:
        raise CatalogError("selfdual quadruple needs m | k")
    q = k // m
    if q < 1:
        raise CatalogError("selfdual quadruple needs m | k")
    G = gr.dihedral(k)
    P = gr.subgroup(G, [q]) if m > 1 else gr.Subgroup(G, (0,))
    G, V, E, Vq, cv, Eq, ce = _dihedral_sets(k, P)
    odd = q % 2 == 1
    W, Wq, cw, wpar, wlab = (V, Vq, cv, 0, "Z[V]") if odd else (E, Eq, ce, 1, "Z[E]")
    ZV, ZW = gm.perm_module(V, 0, "Z[V]"), gm.perm_module(W, 0, wlab)
    ZVq, ZWq = gm.perm_module(Vq, 0, "Z[V/P]"), gm.perm_module(Wq, 0, wlab[:-1] + "/P]")
    Z = _Z(G)
    dAB = [[projection(cv, q).T], [-ones(1, q)]]
    sym = {j: 1 for j in range(-(q - 1), q, 2)}
    U = [
        [cycle_map(sym, k, 0, k, wpar), ones(k, 1)],
        [ones(1, k), m * ones(1, 1)],
    ]
    dCD = [[projection(cw, q), -ones(q, 1)]]
    return _assemble(
        G, "selfdual", {"k": k, "m": m},
        [("Z[V/P]", ZVq)], [("Z[V]", ZV), ("Z", Z)], [(wlab, ZW), ("Z", Z)], [(wlab[:-1] + "/P]", ZWq)],
        dAB, U, dCD, None, m,
    )


def build_s4():
    G = gr.symmetric(4)
    X4 = gr.natural(G)
    X6, pairs = gr.two_subsets(X4)
    X3, cls = gr.complement_quotient(X6, pairs)
    Z = _Z(G)
    Z4, Z6, Z3 = (gm.perm_module(X, 0, f"Z[X{X.size}]") for X in (X4, X6, X3))
    inc = np.zeros((6, 4), dtype=np.int64)
    for i, (a, b) in enumerate(pairs):
        inc[i, a] = inc[i, b] = 1
    dAB = [[ones(4, 1)], [-2 * ones(1, 1)]]
    # the two off-diagonal components typecheck only as pr: Z[X4] -> Z and #X6: Z -> Z[X6]
    U = [[inc, ones(6, 1)], [ones(1, 4), 2 * ones(1, 1)]]
    dCD = [[projection(cls, 3), -ones(3, 1)]]
    return _assemble(
        G, "s4", {},
        [("Z", Z)], [("Z[X4]", Z4), ("Z", Z)], [("Z[X6]", Z6), ("Z", Z)], [("Z[X3]", Z3)],
        dAB, U, dCD, None, 2,
    )


# --- isomorphisms of quadruples -------------------------------------------------


@dataclass
class QuadrupleIsomorphism:
    """Basis permutations P_X: X1 -> X2 with P d1 = d2 P at every arrow.

    ``automorphism[g]`` is the group element with P rho_1(g) = rho_2(aut[g]) P;
    the identity automorphism means the isomorphism is equivariant.
    """
    source: ExactQuadruple
    target: ExactQuadruple
    matrices: tuple
    automorphism: np.ndarray

    def check(self):
        P = self.matrices
        d1 = [d.matrix for d in self.source.maps]
        d2 = [d.matrix for d in self.target.maps]
        if not all(np.array_equal(P[i + 1] @ d1[i], d2[i] @ P[i]) for i in range(3)):
            return False
        aut = _automorphism(self.source, self.target, P)
        return aut is not None and np.array_equal(aut, self.automorphism)

    def is_equivariant(self):
        return bool(np.array_equal(self.automorphism, np.arange(len(self.automorphism))))


def _is_signed_perm(P):
    return P.shape[0] == P.shape[1] and np.all(np.abs(P).sum(axis=0) == 1) and np.all(np.abs(P).sum(axis=1) == 1)


def _automorphism(Q1, Q2, P):
    G = Q1.group
    if Q2.group is not G or not all(_is_signed_perm(p) for p in P):
        return None
    aut = np.empty(G.order, dtype=np.int64)
    for g in range(G.order):
        hits = [
            t for t in range(G.order)
            if all(np.array_equal(p @ M1.action[g], M2.action[t] @ p) for p, M1, M2 in zip(P, Q1.modules, Q2.modules))
        ]
        if not hits:
            return None
        aut[g] = hits[0]
    if not np.array_equal(G.table[aut][:, aut], aut[G.table]) or len(set(aut.tolist())) != G.order:
        return None
    return aut


def find_isomorphism(Q1, Q2, candidates):
    """The first candidate tuple of matrices that is an isomorphism Q1 -> Q2."""
    for P in candidates:
        P = tuple(np.asarray(p, dtype=np.int64) for p in P)
        if any(p.shape != (M2.rank, M1.rank) for p, M1, M2 in zip(P, Q1.modules, Q2.modules)):
            continue
        aut = _automorphism(Q1, Q2, P)
        if aut is None:
            continue
        iso = QuadrupleIsomorphism(Q1, Q2, P, aut)
        if iso.check():
            return iso
    return None


def _blockdiag(*bs):
    r = sum(b.shape[0] for b in bs)
    c = sum(b.shape[1] for b in bs)
    out = np.zeros((r, c), dtype=np.int64)
    i = j = 0
    for b in bs:
        out[i : i + b.shape[0], j : j + b.shape[1]] = b
        i += b.shape[0]
        j += b.shape[1]
    return out


def selfdual_witness(k, m):
    """Witness dualize(selfdual(k, m)) ~ selfdual(k, m) by a basis permutation.

    When k/m is odd the identity works.  When k/m is even the dual swaps
    vertices and edges, and a half-step shift of the 2k-cycle undoes it; that
    shift normalizes the group, so the isomorphism is equivariant up to the
    automorphism it induces.
    """
    Q = build_selfdual(k, m)
    Qd = dualize(Q)
    q = k // m
    wpar = 0 if q % 2 else 1
    cands = []
    steps = [0] if wpar == 0 else [1, -1]
    for j in steps:
        # A' = Z[W/P] -> Z[V/P], B' = Z[W]+Z -> Z[V]+Z, C' = Z[V]+Z -> Z[W]+Z, D' = Z[V/P] -> Z[W/P]
        one = np.eye(1, dtype=np.int64)
        PA = cycle_map({j: 1}, q, wpar, q, 0)
        PB = _blockdiag(cycle_map({j: 1}, k, wpar, k, 0), one)
        PC = _blockdiag(cycle_map({j: 1}, k, 0, k, wpar), one)
        PD = cycle_map({j: 1}, q, 0, q, wpar)
        cands.append((PA, PB, PC, PD))
    iso = find_isomorphism(Qd, Q, cands)
    if iso is None:
        raise CatalogError("no self-duality found among the half-step shifts")
    return iso


# --- coefficients ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FourTerm:
    """Q tensor T over Z/m^2: 0 -> A2 -> B2 -> C2 -> D2 -> 0 with dh + hd = m."""
    group: gr.FiniteGroup
    A: gm.GModule
    B: gm.GModule
    C: gm.GModule
    D: gm.GModule
    d_AB: gm.ModuleMap
    d_BC: gm.ModuleMap
    d_CD: gm.ModuleMap
    homotopy: tuple
    m: int
    coefficients: gm.GModule
    quadruple: ExactQuadruple

    @property
    def modulus(self):
        return self.m * self.m

    @property
    def modules(self):
        return (self.A, self.B, self.C, self.D)

    @property
    def maps(self):
        return (self.d_AB, self.d_BC, self.d_CD)


def _isqrt_exact(N):
    m = int(round(N ** 0.5))
    for c in (m - 1, m, m + 1):
        if c > 0 and c * c == N:
            return c
    raise CatalogError(f"coefficient modulus {N} is not a square")


def tensor_with(Q, T2, m=None, hom=None, solve=True):
    """Tensor Q with coefficients T2 over Z/m^2.

    ``hom`` pulls Q back along a homomorphism T2.group -> Q.group when the
    groups differ.  A stored homotopy with scalar s | m is rescaled by m/s;
    without one, a homotopy with scalar m is solved for when ``solve``.
    """
    N = T2.modulus
    if m is None:
        m = _isqrt_exact(N)
    if m * m != N:
        raise CatalogError(f"coefficients over Z/{N} are not over Z/{m}^2")
    if T2.group is not Q.group:
        if hom is None:
            raise CatalogError("coefficients live on another group and no homomorphism was given")
        Q = inflate_quadruple(Q, hom)
    H = None
    if Q.homotopy is not None:
        s = Q.scalar
        if m % s:
            raise CatalogError(f"cannot rescale a homotopy with scalar {s} to {m}")
        H = [(m // s) * h.matrix for h in Q.homotopy]
    elif solve:
        S = solve_homotopy(Q, m)
        if S is not None:
            H = [h.matrix for h in S.homotopy]
    mods = [gm.tensor(gm.change_ring(M, N), T2, name=f"{M.name}2") for M in Q.modules]
    r = T2.rank
    kr = lambda M: np.kron(M, np.eye(r, dtype=np.int64))
    A, B, C, D = mods
    dmaps = [gm.ModuleMap(S, T, kr(d.matrix)) for d, (S, T) in zip(Q.maps, [(A, B), (B, C), (C, D)])]
    hmaps = None
    if H is not None:
        hmaps = tuple(gm.ModuleMap(S, T, kr(h)) for h, (S, T) in zip(H, [(B, A), (C, B), (D, C)]))
    return FourTerm(Q.group, A, B, C, D, *dmaps, hmaps, m, T2, Q)


def four_term_defects(F):
    """dh + hd - m at the four terms, reduced mod m^2."""
    if F.homotopy is None:
        return None
    N = F.modulus
    hBA, hCB, hDC = (h.matrix for h in F.homotopy)
    dAB, dBC, dCD = (d.matrix for d in F.maps)
    I = lambda M: F.m * np.eye(M.rank, dtype=np.int64)
    return [
        (hBA @ dAB - I(F.A)) % N,
        (dAB @ hBA + hCB @ dBC - I(F.B)) % N,
        (dBC @ hCB + hDC @ dCD - I(F.C)) % N,
        (dCD @ hDC - I(F.D)) % N,
    ]


# --- registry ---------------------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    builder: object
    params: tuple
    constraint: str
    defaults: dict


CATALOG = {
    e.name: e
    for e in [
        CatalogEntry("cyclic", build_cyclic, ("k",), "k >= 2", {"k": 2}),
        CatalogEntry("sigma", build_sigma, ("k", "m"), "m | k", {"k": 4, "m": 2}),
        CatalogEntry("dihedral", build_dihedral, ("k",), "4 | k", {"k": 4}),
        CatalogEntry("dihedral_plus", build_dihedral_plus, ("k",), "4 | k", {"k": 8}),
        CatalogEntry("biquadratic", build_biquadratic, (), "none", {}),
        CatalogEntry("biquadratic2", build_biquadratic2, (), "none", {}),
        CatalogEntry("selfdual", build_selfdual, ("k", "m"), "m | k", {"k": 4, "m": 2}),
        CatalogEntry("s4", build_s4, (), "none", {}),
    ]
}


def catalog_build(name, params=None):
    if name not in CATALOG:
        raise CatalogError(f"unknown quadruple {name!r}; known: {', '.join(CATALOG)}")
    e = CATALOG[name]
    p = dict(e.defaults)
    p.update(params or {})
    extra = set(p) - set(e.params)
    if extra:
        raise CatalogError(f"{name} takes no parameter {sorted(extra)[0]!r}")
    return e.builder(*(int(p[k]) for k in e.params))
