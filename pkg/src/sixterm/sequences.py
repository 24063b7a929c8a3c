"""Six-term cohomology sequences from exact quadruples with a homotopy.

Given ``0 -> A2 -> B2 -> C2 -> D2 -> 0`` over Z/m^2 with dh + hd = m, let
L2 be the image of B2 -> C2.  The quadruple splits into two exact triples
A2 -> B2 -> L2 and L2 -> C2 -> D2, each with an induced homotopy.  Reducing
mod m, a triple X -> Y -> Z with homotopy h gives a map h_XZ: Z1 -> X1 with
h_XZ p1 = h1 and i1 h_XZ = -h1, and its connecting map satisfies

    delta_XZ = beta_X H(h_XZ) - H(h_XZ) beta_Z.

Combining the two triples gives the sequence

    H^n(B1 + D1) -> H^n(C1) -> H^n(D1) -> H^n+1(A1) -> H^n+1(B1) -> H^n+1(A1 + C1)

with middle map nu = delta_AL H(h_LD), exact whenever the four Bocksteins
beta^n of A, B, C, D vanish.  Everything here is computed on one free
resolution over Z/m^2, which serves the Z/m modules as well.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import cohomology as coh
from . import gmodules as gm
from . import quadruples as qd
from . import resolutions
from .linalg import abelian
from .linalg import integer as zla
from .linalg import modular as mla


class SequenceError(ValueError):
    pass


def _mod(A, N):
    return np.asarray(A, dtype=np.int64) % N


def pipeline_resolution(G, m):
    return resolutions.free(G, m * m)


# --- linear solving for equivariant maps ------------------------------------------


def solve_equivariant(S, T, constraints, N):
    """An equivariant X: S -> T over Z/N with post @ X @ pre = rhs for each
    (pre, post, rhs) in ``constraints``, or None.
    """
    r, c = T.rank, S.rank
    rows, rhs = [], []
    G = S.group
    for g in range(G.order):
        rows.append(np.kron(np.eye(r, dtype=np.int64), S.action[g].T) - np.kron(T.action[g], np.eye(c, dtype=np.int64)))
        rhs.append(np.zeros(r * c, dtype=np.int64))
    for pre, post, b in constraints:
        pre = np.asarray(pre, dtype=np.int64).reshape(c, -1)
        post = np.asarray(post, dtype=np.int64).reshape(-1, r)
        rows.append(np.kron(post, pre.T))
        rhs.append(np.asarray(b, dtype=np.int64).ravel())
    x = mla.solve(np.vstack(rows) % N, np.concatenate(rhs) % N, N)
    if x is None:
        return None
    return np.asarray(x, dtype=np.int64).reshape(r, c)


def _section(p, N):
    """Some matrix S with p S = I over Z/N (p surjective onto a free module)."""
    cols = []
    for j in range(p.shape[0]):
        e = np.zeros(p.shape[0], dtype=np.int64)
        e[j] = 1
        x = mla.solve(p, e, N)
        if x is None:
            raise SequenceError("map is not surjective")
        cols.append(x)
    return np.array(cols, dtype=np.int64).T.reshape(p.shape[1], p.shape[0])


# --- triples ----------------------------------------------------------------------


@dataclass(eq=False)
class TripleWithHomotopy:
    """Exact X2 --i--> Y2 --p--> Z2 over Z/m^2 with h_YX, h_ZY: dh + hd = m."""

    i: gm.ModuleMap
    p: gm.ModuleMap
    h_YX: np.ndarray
    h_ZY: np.ndarray
    m: int
    name: str = "triple"

    @property
    def X2(self):
        return self.i.source

    @property
    def Y2(self):
        return self.i.target

    @property
    def Z2(self):
        return self.p.target

    @property
    def N(self):
        return self.m * self.m

    def __post_init__(self):
        m = self.m
        self.X1 = gm.change_ring(self.X2, m)
        self.Y1 = gm.change_ring(self.Y2, m)
        self.Z1 = gm.change_ring(self.Z2, m)
        self.i1 = gm.ModuleMap(self.X1, self.Y1, self.i.matrix)
        self.p1 = gm.ModuleMap(self.Y1, self.Z1, self.p.matrix)
        self.h1_YX = gm.ModuleMap(self.Y1, self.X1, self.h_YX)
        self.h1_ZY = gm.ModuleMap(self.Z1, self.Y1, self.h_ZY)
        S = _section(self.p1.matrix, m)
        self.h_XZ = gm.ModuleMap(self.Z1, self.X1, _mod(self.h_YX @ S, m))

    def homotopy_ok(self):
        N, m = self.N, self.m
        i, p = self.i.matrix, self.p.matrix
        return (
            not np.any(_mod(self.h_YX @ i - m * np.eye(self.X2.rank, dtype=np.int64), N))
            and not np.any(_mod(i @ self.h_YX + self.h_ZY @ p - m * np.eye(self.Y2.rank, dtype=np.int64), N))
            and not np.any(_mod(p @ self.h_ZY - m * np.eye(self.Z2.rank, dtype=np.int64), N))
        )

    def exact(self):
        try:
            coh._check_triple(self.i, self.p)
        except gm.ModuleError:
            return False
        return True

    def homotopy_identities(self):
        """h_XZ p1 = h1 on Y1 and i1 h_XZ = -h1 on Z1, and h_XZ equivariant."""
        m = self.m
        a = not np.any(_mod(self.h_XZ.matrix @ self.p1.matrix - self.h1_YX.matrix, m))
        b = not np.any(_mod(self.i1.matrix @ self.h_XZ.matrix + self.h1_ZY.matrix, m))
        return a and b and self.h_XZ.is_equivariant()

    def connecting(self, n, res):
        return coh.connecting(self.i1, self.p1, n, res)


def split_triple(X2, m, name="split"):
    """X2 -> X2 + X2 -> X2 with the splitting homotopy times m."""
    Y2 = gm.direct_sum(X2, X2)
    r = X2.rank
    I, Z = np.eye(r, dtype=np.int64), np.zeros((r, r), dtype=np.int64)
    i = gm.ModuleMap(X2, Y2, np.vstack([I, Z]))
    p = gm.ModuleMap(Y2, X2, np.hstack([Z, I]))
    return TripleWithHomotopy(i, p, m * np.hstack([I, Z]), m * np.vstack([Z, I]), m, name)


# --- splitting a quadruple ----------------------------------------------------------


@dataclass(eq=False)
class SplitQuadruple:
    F: qd.FourTerm
    L2: gm.GModule
    incl: gm.ModuleMap  # L2 -> C2
    first: TripleWithHomotopy  # A2 -> B2 -> L2
    second: TripleWithHomotopy  # L2 -> C2 -> D2

    @property
    def rank(self):
        return self.L2.rank


def split_quadruple(F):
    """The two exact triples A2 -> B2 -> L2 and L2 -> C2 -> D2 of a FourTerm."""
    if F.homotopy is None:
        raise SequenceError("the four-term sequence carries no homotopy")
    Q = F.quadruple
    N, m = F.modulus, F.m
    dBC = Q.d_BC.matrix
    Lb = np.asarray(zla.image(dBC), dtype=np.int64)  # saturated: it is ker d_CD
    LZ = gm._free_on_columns(Q.C, Lb, "L") if Lb.shape[1] else gm.GModule(Q.group, 0, np.zeros((Q.group.order, 0, 0)), "L")
    coords = np.zeros((Lb.shape[1], Q.B.rank), dtype=np.int64)
    for j in range(Q.B.rank):
        x = zla.solve(Lb, dBC[:, j]) if Lb.shape[1] else np.zeros(0)
        if x is None:
            raise SequenceError("image basis does not span the image")
        coords[:, j] = np.asarray(x, dtype=np.int64)
    r = F.coefficients.rank
    kr = lambda M: np.kron(M, np.eye(r, dtype=np.int64))
    L2 = gm.tensor(gm.change_ring(LZ, N), F.coefficients, name="L2")
    inc = kr(Lb)
    if mla.span_order(inc.T % N, N) != N ** L2.rank:
        raise SequenceError("the image of the middle map is not free")
    incl = gm.ModuleMap(L2, F.C, inc)
    p = gm.ModuleMap(F.B, L2, kr(coords))
    hBA, hCB, hDC = (h.matrix for h in F.homotopy)
    h_LB = _mod(hCB @ inc, N)
    h_CL = _mod(kr(coords) @ hCB, N)
    first = TripleWithHomotopy(F.d_AB, p, hBA, h_LB, m, "A->B->L")
    second = TripleWithHomotopy(incl, F.d_CD, h_CL, hDC, m, "L->C->D")
    return SplitQuadruple(F, L2, incl, first, second)


# --- the connecting map of a triple with homotopy -----------------------------


def connecting_identity_sides(T, n, res=None):
    """(delta_XZ, beta_X H(h_XZ) - H(h_XZ) beta_Z) as maps H^n(Z1) -> H^n+1(X1)."""
    res = res or pipeline_resolution(T.X2.group, T.m)
    delta = T.connecting(n, res)
    bX = coh.bockstein(T.X2, T.m, n, res, T.X1)
    bZ = coh.bockstein(T.Z2, T.m, n, res, T.Z1)
    hn = coh.induced(T.h_XZ, n, res)
    hn1 = coh.induced(T.h_XZ, n + 1, res)
    return delta, bX @ hn - hn1 @ bZ


def connecting_identity_check(T, n, res=None):
    delta, rhs = connecting_identity_sides(T, n, res)
    return bool(delta.equals(rhs))


def _as_finite(M2, m):
    """M2 / m M2 as a FiniteModule over Z/m^2."""
    r = M2.rank
    return gm.subquotient(M2, np.eye(r, dtype=np.int64), m * np.eye(r, dtype=np.int64), M2.name + "1")


@dataclass
class ExtensionWitness:
    middle: gm.FiniteModule
    f: np.ndarray
    well_defined: bool
    equivariant: bool
    bijective: bool
    left_ok: bool
    right_ok: bool

    @property
    def ok(self):
        return self.well_defined and self.equivariant and self.bijective and self.left_ok and self.right_ok


def extension_identity(T):
    """Build the difference of the two Bockstein extensions and the map f.

    The middle module is the homology of

        X1 -> (X2 x_X1 Z1) + (X1 +_Z1 Z2) -> Z1,

    the fiber product taken over pi: X2 -> X1 and h_XZ, the pushout under
    h_XZ and the inclusion m: Z1 -> Z2.  Everything sits in the free
    Z/m^2-module W = X2 + Z1 + X1 + Z2 with the Z/m summands cut out by m.
    """
    m, N = T.m, T.N
    x, z = T.X2.rank, T.Z2.rank
    W = gm.direct_sum(T.X2, T.Z2, T.X2, T.Z2, name="W")
    I_x, I_z = np.eye(x, dtype=np.int64), np.eye(z, dtype=np.int64)
    h = T.h_XZ.matrix
    Zxz, Zzx = np.zeros((x, z), np.int64), np.zeros((z, x), np.int64)
    # x2 = h_XZ z1 and z1 = pi(z2), both mod m
    cond = np.block([[I_x, -h, np.zeros((x, x), np.int64), Zxz], [Zzx, I_z, Zzx, -I_z]])
    K = mla.kernel(_mod(m * cond, N), N)
    rel = [
        np.vstack([Zxz, m * I_z, Zxz, np.zeros((z, z), np.int64)]),  # Z1 is killed by m
        np.vstack([np.zeros((x, x), np.int64), Zzx, m * I_x, Zzx]),  # X1 is killed by m
        np.vstack([Zxz, np.zeros((z, z), np.int64), h, -m * I_z]),  # pushout relation
        np.vstack([m * I_x, Zzx, I_x, Zzx]),  # image of X1
    ]
    H = gm.subquotient(W, K, np.hstack(rel), "middle")
    hYX, p = T.h_YX, T.p.matrix
    F = _mod(np.vstack([hYX, p, hYX, p]), N)
    Y1 = _as_finite(T.Y2, m)
    X1 = _as_finite(T.X2, m)
    Z1 = _as_finite(T.Z2, m)
    fm = gm.fmap_matrix(F, Y1, H)
    yA, hA = abelian.AbelianGroup(Y1.divisors), abelian.AbelianGroup(H.divisors)
    wd = abelian.is_well_defined(fm, yA, hA)
    eq = all(
        np.array_equal(H.reduce(H.action[g] @ fm), H.reduce(gm.fmap_matrix(F @ T.Y2.action[g], Y1, H)))
        for g in range(T.Y2.group.order)
    )
    bij = abelian.image_order(fm, yA, hA) == hA.order and yA.order == hA.order
    J = np.vstack([m * I_x, Zzx, np.zeros((x, x), np.int64), Zzx])
    left = np.array_equal(H.reduce(gm.fmap_matrix(F @ T.i.matrix, X1, H)), H.reduce(gm.fmap_matrix(J, X1, H)))
    q = np.hstack([Zzx, I_z, Zzx, np.zeros((z, z), np.int64)])
    right = np.array_equal(
        Z1.reduce(gm.fmap_matrix(q, H, Z1) @ fm), Z1.reduce(gm.fmap_matrix(p, Y1, Z1))
    )
    return ExtensionWitness(H, fm, bool(wd), bool(eq), bool(bij), bool(left), bool(right))


def extension_identity_check(T):
    return extension_identity(T).ok


# --- the extension N and the map nu ----------------------------------------------


@dataclass(eq=False)
class NExtension:
    """0 -> A1 -> N -> D1 -> 0 with N = B1 x_L1 D1 over p1 and h_LD."""

    extension: gm.ModuleExtension
    inclusion: np.ndarray  # N -> B1 + D1
    pushout_section: np.ndarray  # r: N -> B1 with r inj = d_AB
    pullback_section: np.ndarray  # s: C1 -> N with surj s = d_CD
    equivariant: bool
    exact: bool

    @property
    def module(self):
        return self.extension.middle

    @property
    def splits(self):
        return self.pushout_section is not None and self.pullback_section is not None

    def connecting(self, n, res):
        return coh.connecting(self.extension.inj, self.extension.surj, n, res)


def build_N(SQ):
    T1, T2 = SQ.first, SQ.second
    m = T1.m
    A1, B1, L1, D1 = T1.X1, T1.Y1, T1.Z1, T2.Z1
    h_LD = T2.h_XZ
    if not h_LD.is_equivariant():
        raise SequenceError("h_LD is not equivariant; the homotopy was not equivariant")
    BD = gm.direct_sum(B1, D1)
    diff = gm.ModuleMap(BD, L1, np.hstack([T1.p1.matrix, -h_LD.matrix]))
    sub = gm.kernel_module(diff, "N")
    Nmod, J = sub.module, sub.inclusion.matrix
    b = B1.rank
    # inj: a -> (d_AB a, 0), expressed in the basis of N
    target = np.vstack([T1.i1.matrix, np.zeros((D1.rank, A1.rank), np.int64)])
    cols = [mla.solve(J, target[:, j], m) for j in range(A1.rank)]
    if any(c is None for c in cols):
        raise SequenceError("A1 does not map into N")
    inj = gm.ModuleMap(A1, Nmod, np.array(cols, dtype=np.int64).T.reshape(Nmod.rank, A1.rank))
    surj = gm.ModuleMap(Nmod, D1, J[b:])
    ext = gm.ModuleExtension(A1, Nmod, D1, inj, surj)
    try:
        ext.validate()
        exact = True
    except gm.ModuleError:
        exact = False
    equivariant = inj.is_equivariant() and surj.is_equivariant()
    dAB = T1.i1.matrix
    dCD = T2.p1.matrix
    C1 = T2.Y1
    r = solve_equivariant(Nmod, B1, [(inj.matrix, np.eye(B1.rank, dtype=np.int64), dAB)], m)
    s = solve_equivariant(C1, Nmod, [(np.eye(C1.rank, dtype=np.int64), surj.matrix, dCD)], m)
    return NExtension(ext, J, r, s, bool(equivariant), exact)


@dataclass(eq=False)
class NuData:
    nu: coh.CohomologyMap  # delta_AL H(h_LD)
    nu_alt: coh.CohomologyMap  # -H(h_AL) delta_LD
    nu_ext: coh.CohomologyMap  # connecting map of the N extension

    @property
    def consistent(self):
        return bool(self.nu.equals(self.nu_alt) and self.nu.equals(self.nu_ext))


def nu_maps(SQ, n, NX=None, res=None):
    T1, T2 = SQ.first, SQ.second
    res = res or pipeline_resolution(T1.X2.group, T1.m)
    d_AL = T1.connecting(n, res)
    d_LD = T2.connecting(n, res)
    nu = d_AL @ coh.induced(T2.h_XZ, n, res)
    alt = -(coh.induced(T1.h_XZ, n + 1, res) @ d_LD)
    NX = NX or build_N(SQ)
    return NuData(nu, alt, NX.connecting(n, res))


# --- the six-term sequence ----------------------------------------------------------


@dataclass
class Position:
    name: str
    exact: bool


@dataclass(eq=False)
class SixTermReport:
    name: str
    n: int
    m: int
    groups: list  # six CohomologyGroups
    maps: list  # five CohomologyMaps
    labels: list
    bockstein: dict  # term -> beta^n vanishes
    positions: list  # four interior Positions
    nu: NuData = None
    N: NExtension = None
    extras: dict = field(default_factory=dict)

    @property
    def preconditions(self):
        return all(self.bockstein.values())

    @property
    def exact(self):
        return all(p.exact for p in self.positions)

    @property
    def verdict(self):
        """True or False when the Bockstein hypotheses hold, None otherwise."""
        return self.exact if self.preconditions else None

    def as_dict(self):
        return {
            "name": self.name,
            "n": self.n,
            "m": self.m,
            "labels": list(self.labels),
            "groups": [list(g.divisors) for g in self.groups],
            "maps": [np.asarray(f.matrix, dtype=np.int64).tolist() for f in self.maps],
            "bockstein_vanishes": dict(self.bockstein),
            "preconditions": self.preconditions,
            "exact_at": {p.name: p.exact for p in self.positions},
            "exact": self.exact,
            "verdict": self.verdict,
            **({"nu_consistent": self.nu.consistent} if self.nu is not None else {}),
            **(
                {"N": {"order": int(self.m ** self.N.module.rank), "exact": self.N.exact,
                       "equivariant": self.N.equivariant, "splits": self.N.splits}}
                if self.N is not None else {}
            ),
            **self.extras,
        }


def exactness(groups, maps, names=None):
    """Exactness verdicts at the interior terms of a chain of group maps."""
    out = []
    for j in range(1, len(groups) - 1):
        f, g = maps[j - 1], maps[j]
        ok = abelian.is_exact(f.matrix, g.matrix, groups[j - 1].abelian, groups[j].abelian, groups[j + 1].abelian)
        out.append(Position(names[j] if names else str(j), bool(ok)))
    return out


def bockstein_verdicts(F, n, res):
    m = F.m
    return {
        t: bool(coh.bockstein_vanishes(M, m, n, res, gm.change_ring(M, m)))
        for t, M in zip("ABCD", F.modules)
    }


def six_term_from(F, n, name=None, with_N=True):
    """The six-term sequence of a FourTerm at degree n."""
    m = F.m
    res = pipeline_resolution(F.group, m)
    SQ = split_quadruple(F)
    A1, B1, C1, D1 = (gm.change_ring(M, m) for M in F.modules)
    hBA, hCB, hDC = (h.matrix for h in F.homotopy)
    dAB, dBC, dCD = (d.matrix for d in F.maps)
    BD = gm.direct_sum(B1, D1, name="B1+D1")
    AC = gm.direct_sum(A1, C1, name="A1+C1")
    f0 = gm.ModuleMap(BD, C1, np.hstack([dBC, hDC]))
    f1 = gm.ModuleMap(C1, D1, dCD)
    f3 = gm.ModuleMap(A1, B1, dAB)
    f4 = gm.ModuleMap(B1, AC, np.vstack([hBA, dBC]))
    NX = build_N(SQ) if with_N else None
    nu = nu_maps(SQ, n, NX, res)
    maps = [coh.induced(f0, n, res), coh.induced(f1, n, res), nu.nu, coh.induced(f3, n + 1, res), coh.induced(f4, n + 1, res)]
    groups = [maps[0].source] + [f.target for f in maps]
    labels = [f"H^{n}(B1+D1)", f"H^{n}(C1)", f"H^{n}(D1)", f"H^{n + 1}(A1)", f"H^{n + 1}(B1)", f"H^{n + 1}(A1+C1)"]
    pos = exactness(groups, maps, labels)
    return SixTermReport(
        name or F.quadruple.name, n, m, groups, maps, labels,
        bockstein_verdicts(F, n, res), pos, nu, NX,
    )


def six_term(Q, T2, n, m=None, hom=None, with_N=True):
    F = qd.tensor_with(Q, T2, m, hom)
    if F.homotopy is None:
        raise SequenceError(f"no homotopy with scalar {F.m} for {Q.name}")
    return six_term_from(F, n, Q.name, with_N)


def nu_independence(F, F_alt, n):
    """nu and the N extension agree for two homotopies on the same sequence."""
    m = F.m
    res = pipeline_resolution(F.group, m)
    S1, S2 = split_quadruple(F), split_quadruple(F_alt)
    N1, N2 = build_N(S1), build_N(S2)
    nu1 = nu_maps(S1, n, N1, res).nu
    nu2 = nu_maps(S2, n, N2, res).nu
    e1, e2 = N1.extension, N2.extension
    iso = solve_equivariant(
        e1.middle, e2.middle,
        [
            (e1.inj.matrix, np.eye(e2.middle.rank, dtype=np.int64), e2.inj.matrix),
            (np.eye(e1.middle.rank, dtype=np.int64), e2.surj.matrix, e1.surj.matrix),
        ],
        m,
    )
    return bool(nu1.equals(nu2)), iso is not None


def with_homotopy(F, homotopy_matrices):
    """The same FourTerm with another homotopy (given as matrices)."""
    h = tuple(gm.ModuleMap(S, T, M) for M, (S, T) in zip(homotopy_matrices, [(F.B, F.A), (F.C, F.B), (F.D, F.C)]))
    return qd.FourTerm(F.group, *F.modules, *F.maps, h, F.m, F.coefficients, F.quadruple)
