"""Cohomology groups, induced maps, connecting maps and Bocksteins.

A :class:`CohomologyGroup` is ``ker d^n / im d^(n-1)`` on a cochain complex
built from a resolution (see :mod:`sixterm.resolutions`), described by its
elementary divisors, canonical cocycle representatives and a projection
from cocycles to coordinates.  A :class:`CohomologyMap` is an integer
matrix in those coordinates.

Restriction, transfer, conjugation and cup products with degree-one classes
are cochain formulas on the bar resolution, so they take bar groups.
Induced maps, connecting maps and Bocksteins work over any resolution, as
long as all groups involved share it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from . import resolutions
from .gmodules import GModule, ModuleError, ModuleMap, bockstein_pair, change_ring, restrict
from .groups import Subgroup, is_normal, quotient_map
from .linalg import abelian
from .linalg import modular as mla

DEGREE_CAP = 3


class CochainComplex:
    def __init__(self, resolution, module):
        if module.modulus == 0:
            raise ModuleError("cochains are computed with Z/N coefficients")
        if resolution.group is not module.group:
            raise ModuleError("resolution and module are over different groups")
        self.resolution = resolution
        self.module = module
        self.N = module.modulus
        self._d = {}
        self._aug = {}

    @property
    def group(self):
        return self.module.group

    def dim(self, n):
        return self.resolution.cells(n) * self.module.rank

    def d(self, n):
        if n not in self._d:
            self._d[n] = self.resolution.coboundary(n, self.module) % self.N
        return self._d[n]

    def aug(self, n):
        """Howell data of d^n: kernel = cocycles Z^n, span = coboundaries B^(n+1)."""
        if n not in self._aug:
            D = self.d(n)
            if D.shape[1] == 0:
                raise ValueError("empty cochain space")
            self._aug[n] = mla.AugmentedHowell(D.T, self.N)
        return self._aug[n]

    def _zero(self, n):
        return mla.HowellForm(self.N, np.zeros((0, self.dim(n)), np.int64), [])

    def cocycles(self, n):
        if self.dim(n) == 0:
            return self._zero(n)
        return self.aug(n).kernel

    def coboundaries(self, n):
        if n == 0 or self.dim(n - 1) == 0:
            return self._zero(n)
        return self.aug(n - 1).span

    def is_cocycle(self, n, X):
        if self.dim(n) == 0:
            return True
        X = np.asarray(X, dtype=np.int64).reshape(self.dim(n), -1)
        return not np.any((self.d(n) @ X) % self.N)

    def is_coboundary(self, n, X):
        if self.dim(n) == 0:
            return True
        X = np.asarray(X, dtype=np.int64).reshape(self.dim(n), -1)
        if n == 0:
            return not np.any(X % self.N)
        return self.coboundaries(n).contains(X.T)

    def check(self, n):
        """d^(n+1) d^n == 0"""
        return not np.any((self.d(n + 1) @ self.d(n)) % self.N)


@lru_cache(maxsize=None)
def cochain_complex(resolution, module):
    return CochainComplex(resolution, module)


@dataclass(eq=False)
class CohomologyGroup:
    complex: CochainComplex
    n: int
    structure: mla.SubquotientStructure

    @property
    def divisors(self):
        return self.structure.divisors

    @property
    def order(self):
        return self.structure.order

    @property
    def rank(self):
        return len(self.divisors)

    @property
    def module(self):
        return self.complex.module

    @cached_property
    def reps(self):
        """Canonical cocycle representatives, as columns."""
        return self.structure.rep_basis.T.copy()

    def project(self, X):
        """Coordinates of cocycle columns X."""
        X = np.asarray(X, dtype=np.int64)
        if self.complex.dim(self.n) == 0:
            return np.zeros((0, X.shape[-1] if X.ndim == 2 else 1), dtype=np.int64)
        X = X.reshape(self.complex.dim(self.n), -1)
        if self.rank == 0:
            if not self.complex.is_cocycle(self.n, X):
                raise ValueError("not a cocycle")
            return np.zeros((0, X.shape[1]), dtype=np.int64)
        return self.structure.project(X.T).T.reshape(self.rank, -1)

    @property
    def abelian(self):
        return abelian.AbelianGroup(self.divisors)

    def describe(self):
        return " + ".join(f"Z/{d}" for d in self.divisors) or "0"

    def cls(self, coords):
        return CohomologyClass(self, self.abelian.reduce(np.asarray(coords)))

    def same_as(self, other):
        return self.divisors == other.divisors and np.array_equal(self.reps, other.reps)


@dataclass(eq=False)
class CohomologyClass:
    group: CohomologyGroup
    coords: np.ndarray

    @property
    def cochain(self):
        return (self.group.reps @ self.coords) % self.group.complex.N


@dataclass(eq=False)
class CohomologyMap:
    source: CohomologyGroup
    target: CohomologyGroup
    matrix: np.ndarray

    def __post_init__(self):
        M = np.asarray(self.matrix, dtype=np.int64).reshape(self.target.rank, self.source.rank)
        self.matrix = abelian.reduce_map(M, self.source.abelian, self.target.abelian)

    def __matmul__(self, other):
        if not other.target.same_as(self.source):
            raise ValueError("cohomology maps do not compose")
        return CohomologyMap(other.source, self.target, self.matrix @ other.matrix)

    def __add__(self, other):
        return CohomologyMap(self.source, self.target, self.matrix + other.matrix)

    def __neg__(self):
        return CohomologyMap(self.source, self.target, -self.matrix)

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c):
        return CohomologyMap(self.source, self.target, c * self.matrix)

    def is_zero(self):
        return not np.any(self.matrix)

    def equals(self, other):
        return (
            self.source.same_as(other.source)
            and self.target.same_as(other.target)
            and np.array_equal(self.matrix, other.matrix)
        )


def _default_resolution(G, resolution):
    return resolutions.bar(G) if resolution is None else resolution


def cohomology(G, M, n, resolution=None, degree_cap=DEGREE_CAP):
    """H^n(G, M) on the given resolution (bar by default)."""
    if M.group is not G:
        raise ModuleError("module is not over this group")
    if n < 0:
        raise ValueError("negative degree")
    if n > degree_cap:
        raise resolutions.ResourceError(f"degree {n} exceeds the cap {degree_cap}")
    C = cochain_complex(_default_resolution(G, resolution), M)
    return _group(C, n)


@lru_cache(maxsize=None)
def _group(C, n):
    Z = C.cocycles(n)
    B = C.coboundaries(n)
    return CohomologyGroup(C, n, mla.quotient_structure(Z.rows, B.rows, C.N))


def group_of(C, n):
    return _group(C, n)


def from_cochain_map(S, T, F):
    """Class-level matrix of the cochain map F: C^n(S) -> C^m(T)."""
    F = np.asarray(F, dtype=np.int64)
    img = (F @ S.reps) % T.complex.N if S.rank else np.zeros((F.shape[0], 0), dtype=np.int64)
    return CohomologyMap(S, T, T.project(img) if S.rank else np.zeros((T.rank, 0)))


def cochain_map(f, cells):
    return np.kron(np.eye(cells, dtype=np.int64), f.matrix)


def induced(f, n, resolution=None, degree_cap=DEGREE_CAP):
    """H^n(f): H^n(G, source) -> H^n(G, target)."""
    G = f.source.group
    res = _default_resolution(G, resolution)
    S = cohomology(G, f.source, n, res, degree_cap)
    T = cohomology(G, f.target, n, res, degree_cap)
    return from_cochain_map(S, T, cochain_map(f, res.cells(n)) % T.complex.N)


def _check_triple(i, p):
    X, Y, Z = i.source, i.target, p.target
    if p.source is not Y:
        raise ModuleError("maps of the triple do not compose")
    if np.any((p.matrix @ i.matrix) % Z.modulus):
        raise ModuleError("composite of the triple is not zero")
    Nz = Z.modulus
    if mla.span_order(p.matrix.T, Nz) != Nz ** Z.rank:
        raise ModuleError("lift failure: second map is not surjective")
    if mla.span_order((i.matrix % Y.modulus).T, Y.modulus) != X.modulus ** X.rank:
        raise ModuleError("first map of the triple is not injective")
    if Y.modulus ** Y.rank != X.modulus ** X.rank * Nz ** Z.rank:
        raise ModuleError("triple is not exact in the middle")


def connecting_cochains(i, p, n, X_cochains, resolution):
    """Snake construction on cochain columns of C^n(Z); returns C^(n+1)(X) columns."""
    X, Y, Z = i.source, i.target, p.target
    cells = resolution.cells(n)
    cells1 = resolution.cells(n + 1)
    V = np.asarray(X_cochains, dtype=np.int64).reshape(cells, Z.rank, -1)
    b = V.shape[2]
    rows = V.transpose(2, 0, 1).reshape(-1, Z.rank)
    lift_solver = mla.AugmentedHowell(p.matrix.T % Z.modulus, Z.modulus)
    Yl, ok = lift_solver.express(rows)
    if not np.all(ok):
        raise ModuleError("lift failure")
    y = Yl.reshape(b, cells * Y.rank).T % Y.modulus
    dy = (cochain_complex(resolution, Y).d(n) @ y) % Y.modulus
    back = mla.AugmentedHowell(i.matrix.T % Y.modulus, Y.modulus)
    xr, ok = back.express(dy.T.reshape(-1, Y.rank))
    if not np.all(ok):
        raise ModuleError("coboundary of the lift does not come from the submodule")
    return xr.reshape(b, cells1 * X.rank).T % X.modulus


def connecting(i, p, n, resolution=None, degree_cap=DEGREE_CAP):
    """delta: H^n(G, Z) -> H^(n+1)(G, X) of the triple X --i--> Y --p--> Z."""
    _check_triple(i, p)
    G = i.source.group
    res = _default_resolution(G, resolution)
    S = cohomology(G, p.target, n, res, degree_cap)
    T = cohomology(G, i.source, n + 1, res, degree_cap)
    if S.rank == 0:
        return CohomologyMap(S, T, np.zeros((T.rank, 0)))
    return CohomologyMap(S, T, T.project(connecting_cochains(i, p, n, S.reps, res)))


def connecting_vanishes(i, p, n, resolution=None, degree_cap=DEGREE_CAP):
    """Is delta^n zero?  Only needs coboundaries in degree n+1."""
    _check_triple(i, p)
    G = i.source.group
    res = _default_resolution(G, resolution)
    S = cohomology(G, p.target, n, res, degree_cap)
    if S.rank == 0:
        return True
    X = connecting_cochains(i, p, n, S.reps, res)
    return cochain_complex(res, i.source).is_coboundary(n + 1, X)


def bockstein(T2, m, n, resolution=None, T1=None, degree_cap=DEGREE_CAP):
    """beta^n: H^n(G, T1) -> H^(n+1)(G, T1) for T1 = T2 / m."""
    bp = bockstein_pair(T2, m, T1)
    return connecting(bp.tau, bp.pi, n, resolution, degree_cap)


def bockstein_vanishes(T2, m, n, resolution=None, T1=None, degree_cap=DEGREE_CAP):
    bp = bockstein_pair(T2, m, T1)
    return connecting_vanishes(bp.tau, bp.pi, n, resolution, degree_cap)


# --- bar-only operations ---------------------------------------------------


def _bar_group(G, M, n):
    return cohomology(G, M, n, resolutions.bar(G))


def _cell_index(tuples, q):
    """Index of n-tuples of non-identity labels (1..q) in lexicographic order."""
    t = np.asarray(tuples, dtype=np.int64)
    if t.shape[-1] == 0:
        return np.zeros(t.shape[:-1], dtype=np.int64)
    w = q ** np.arange(t.shape[-1] - 1, -1, -1)
    return (t - 1) @ w


def _all_cells(order, n):
    q = order - 1
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.meshgrid(*([np.arange(1, order)] * n), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1).reshape(q ** n, n)


def res(G, H: Subgroup, M, n):
    """Restriction H^n(G, M) -> H^n(H, M|_H) on bar cochains."""
    MH = restrict(M, H)
    S = _bar_group(G, M, n)
    T = _bar_group(H.as_group, MH, n)
    r = M.rank
    cellsH = _all_cells(H.order, n)
    elems = np.array(H.elements, dtype=np.int64)
    idxG = _cell_index(elems[cellsH], G.order - 1) if n else np.zeros(1, dtype=np.int64)
    F = np.zeros((T.complex.dim(n), S.complex.dim(n)), dtype=np.int64)
    for c, gc in enumerate(np.atleast_1d(idxG)):
        F[c * r : (c + 1) * r, gc * r : (gc + 1) * r] = np.eye(r, dtype=np.int64)
    return from_cochain_map(S, T, F)


def transfer_cochains(G, H: Subgroup, M, n):
    """Matrix of the cochain transfer C^n(H, M|_H) -> C^n(G, M).

    cor f(g1..gn) = sum_t t^-1 f(r(t g1), r(t g1)^-1 r(t g1 g2), ...), where
    t runs over right coset representatives and r(x) = x * rep(Hx)^-1.
    """
    r = M.rank
    pos = {g: i for i, g in enumerate(H.elements)}
    coset_of = {}
    for c in H.right_cosets:
        for g in c:
            coset_of[g] = c[0]
    retract = [G.mul(x, G.inv(coset_of[x])) for x in range(G.order)]
    qG, qH = G.order - 1, H.order - 1
    cellsG = _all_cells(G.order, n)
    F = np.zeros((qG ** n * r, qH ** n * r), dtype=np.int64)
    for c, tup in enumerate(cellsG):
        for t in H.right_reps:
            prefix = t
            prev = retract[t]
            args = []
            for g in tup:
                prefix = G.mul(prefix, int(g))
                cur = retract[prefix]
                args.append(pos[G.mul(G.inv(prev), cur)])
                prev = cur
            if any(a == 0 for a in args):
                continue
            hc = int(_cell_index(args, qH)) if n else 0
            F[c * r : (c + 1) * r, hc * r : (hc + 1) * r] += M.action[G.inv(t)]
    return F


def cor(H: Subgroup, G, M, n):
    """Corestriction H^n(H, M|_H) -> H^n(G, M)."""
    MH = restrict(M, H)
    S = _bar_group(H.as_group, MH, n)
    T = _bar_group(G, M, n)
    return from_cochain_map(S, T, transfer_cochains(G, H, M, n) % M.modulus)


def conjugation_cochains(G, H: Subgroup, M, s, n):
    """(s.c)(h1..hn) = s c(s^-1 h1 s, ..., s^-1 hn s) on C^n(H, M|_H)."""
    r = M.rank
    pos = {g: i for i, g in enumerate(H.elements)}
    cells = _all_cells(H.order, n)
    qH = H.order - 1
    F = np.zeros((qH ** n * r, qH ** n * r), dtype=np.int64)
    for c, tup in enumerate(cells):
        src = [pos[G.conj(s, H.elements[int(h)])] for h in tup]
        sc = int(_cell_index(src, qH)) if n else 0
        F[c * r : (c + 1) * r, sc * r : (sc + 1) * r] = M.action[s]
    return F


def sigma_action(G, H: Subgroup, M, n):
    """Action of G/H on H^n(H, M|_H): one CohomologyMap per coset (by index)."""
    if not is_normal(G, H):
        raise ValueError("conjugation action needs a normal subgroup")
    MH = restrict(M, H)
    S = _bar_group(H.as_group, MH, n)
    out = []
    for c in H.left_cosets:
        out.append(from_cochain_map(S, S, conjugation_cochains(G, H, M, c[0], n) % M.modulus))
    return out


@dataclass
class ClassSub:
    """A subgroup of a cohomology group: coordinates and inclusion matrix."""

    ambient: CohomologyGroup
    group: abelian.AbelianGroup
    inclusion: np.ndarray
    coords: object


@dataclass
class ClassQuotient:
    ambient: CohomologyGroup
    group: abelian.AbelianGroup
    projection: np.ndarray
    section: np.ndarray


def sigma_invariants(G, H, M, n):
    acts = sigma_action(G, H, M, n)
    S = acts[0].source
    A = S.abelian
    if S.rank == 0:
        return ClassSub(S, A, np.zeros((0, 0), np.int64), lambda x: np.zeros(0, np.int64))
    stack = np.vstack([a.matrix - np.eye(S.rank, dtype=np.int64) for a in acts])
    big = abelian.direct_sum(*([A] * len(acts)))
    L = abelian.kernel_lattice(stack, A, big)
    sub, incl, coords = abelian.subgroup(A, L.T)
    return ClassSub(S, sub, incl, coords)


def sigma_coinvariants(G, H, M, n):
    acts = sigma_action(G, H, M, n)
    S = acts[0].source
    A = S.abelian
    if S.rank == 0:
        return ClassQuotient(S, A, np.zeros((0, 0), np.int64), np.zeros((0, 0), np.int64))
    rel = np.hstack([a.matrix - np.eye(S.rank, dtype=np.int64) for a in acts])
    Q, proj, sec = abelian.quotient(A, rel)
    return ClassQuotient(S, Q, proj, sec)


def cup1_cochains(G, u, M, n):
    """Cochain matrix of c -> u cup c, (u cup c)(g1..) = u(g1) g1.c(g2..)."""
    r = M.rank
    q = G.order - 1
    u = np.asarray(u, dtype=np.int64) % M.modulus
    F = np.zeros((q ** (n + 1) * r, q ** n * r), dtype=np.int64)
    rest = q ** n
    for g1 in range(1, G.order):
        blk = (u[g1] * M.action[g1]) % M.modulus
        for c in range(rest):
            row = (g1 - 1) * rest + c
            F[row * r : (row + 1) * r, c * r : (c + 1) * r] = blk
    return F


def cup1(G, u, M, n):
    """u cup: H^n(G, M) -> H^(n+1)(G, M) for a homomorphism u: G -> Z/m (array)."""
    u = np.asarray(u, dtype=np.int64).ravel()
    if u.shape != (G.order,):
        raise ValueError("u needs one value per group element")
    m = M.modulus
    if np.any((u[G.table] - u[:, None] - u[None, :]) % m):
        raise ValueError("u is not a 1-cocycle with trivial coefficients")
    S = _bar_group(G, M, n)
    T = _bar_group(G, M, n + 1)
    return from_cochain_map(S, T, cup1_cochains(G, u, M, n))


def character_class(G, K: Subgroup, m):
    """The homomorphism G -> G/K = Z/m -> Z/m for a normal K with cyclic quotient.

    The generator of the quotient is the coset of the smallest element whose
    image generates it; values are returned as an array over G.
    """
    proj = quotient_map(G, K)
    reps = K.left_reps
    k = len(reps)
    if k == 1:
        return np.zeros(G.order, dtype=np.int64)
    if m % k:
        raise ValueError("quotient order must divide m")
    gen = next(x for x in range(G.order) if _generates(G, x, proj, k))
    val = {}
    y = 0
    for j in range(k):
        val[int(proj[y])] = j
        y = G.mul(y, gen)
    return np.array([(m // k) * val[int(proj[g])] for g in range(G.order)], dtype=np.int64)


def _generates(G, x, proj, k):
    seen, y = set(), 0
    for _ in range(k):
        seen.add(int(proj[y]))
        y = G.mul(y, x)
    return len(seen) == k


def cup_cochains_deg1(G, u, v, m):
    """(u cup v)(g1, g2) = u(g1) v(g2) for 1-cocycles with trivial coefficients."""
    q = G.order - 1
    out = np.zeros(q * q, dtype=np.int64)
    for a in range(1, G.order):
        for b in range(1, G.order):
            out[(a - 1) * q + (b - 1)] = u[a] * v[b] % m
    return out
