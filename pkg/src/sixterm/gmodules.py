"""Free G-modules over Z or Z/N given by action matrices, and their maps.

A module of rank r carries ``action[g]``, an r x r integer matrix acting on
column vectors.  ``modulus == 0`` means the ring Z.  Maps are stored as
target-rank x source-rank matrices.  Finite sub- and quotient modules that
need not be free are :class:`FiniteModule` objects that carry coordinates
from a :class:`~sixterm.linalg.modular.SubquotientStructure`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd

import numpy as np

from .groups import FiniteGroup, GroupEmbedding, GSet, Subgroup
from .groups import subgroup as _subgroup
from .linalg import integer as zla
from .linalg import modular as mla


class ModuleError(ValueError):
    pass


def _red(A, N):
    A = np.asarray(A, dtype=np.int64)
    return A % N if N else A


def ring_name(N):
    return "Z" if N == 0 else f"Z/{N}"


@dataclass(frozen=True, eq=False)
class GModule:
    group: FiniteGroup
    modulus: int
    action: np.ndarray
    name: str = "M"
    summands: tuple = ()  # (label, rank) pairs recording a direct-sum decomposition

    def __post_init__(self):
        r = np.asarray(self.action).shape[-1] if np.asarray(self.action).size else 0
        a = _red(np.asarray(self.action, dtype=np.int64).reshape(self.group.order, r, r), self.modulus)
        a.setflags(write=False)
        object.__setattr__(self, "action", a)
        if not self.summands:
            object.__setattr__(self, "summands", ((self.name, r),))

    @property
    def rank(self):
        return self.action.shape[1]

    @property
    def ring(self):
        return ring_name(self.modulus)

    def rho(self, g):
        return self.action[g]

    def validate(self):
        G, N, a = self.group, self.modulus, self.action
        if not np.array_equal(a[0], np.eye(self.rank, dtype=np.int64)):
            raise ModuleError("identity does not act as the identity")
        # rho(g) rho(h) == rho(gh) for every pair
        prod = _red(np.einsum("gij,hjk->ghik", a, a), N)
        if not np.array_equal(prod, a[G.table]):
            raise ModuleError("action is not a homomorphism")
        if sum(r for _, r in self.summands) != self.rank:
            raise ModuleError("summand ranks do not add up")
        return self

    def identity(self):
        return ModuleMap(self, self, np.eye(self.rank, dtype=np.int64))

    def zero_to(self, other):
        return ModuleMap(self, other, np.zeros((other.rank, self.rank), dtype=np.int64))

    def scalar(self, c):
        return ModuleMap(self, self, c * np.eye(self.rank, dtype=np.int64))

    def with_name(self, name, summands=None):
        return GModule(self.group, self.modulus, self.action, name, summands or ((name, self.rank),))

    def describe(self):
        return {
            "name": self.name,
            "rank": self.rank,
            "ring": self.ring,
            "action": {str(g): self.action[g].tolist() for g in range(self.group.order)},
        }


@dataclass(frozen=True, eq=False)
class ModuleMap:
    source: GModule
    target: GModule
    matrix: np.ndarray
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        M = np.asarray(self.matrix, dtype=np.int64).reshape(self.target.rank, self.source.rank)
        M = _red(M, self.target.modulus)
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)
        if self.source.group is not self.target.group:
            raise ModuleError("maps must be between modules over the same group")
        if self.check:
            self.validate()

    def validate(self):
        s, t = self.source.modulus, self.target.modulus
        M = self.matrix
        if t and s and np.any((s * M) % t):
            raise ModuleError(f"matrix does not descend from {ring_name(s)} to {ring_name(t)}")
        if t == 0 and s and np.any(M):
            raise ModuleError("no nonzero maps from a torsion module to Z")
        lhs = _red(np.einsum("ij,gjk->gik", M, self.source.action), t)
        rhs = _red(np.einsum("gij,jk->gik", self.target.action, M), t)
        if not np.array_equal(lhs, rhs):
            raise ModuleError("map is not equivariant")
        return self

    def is_equivariant(self):
        try:
            self.validate()
        except ModuleError:
            return False
        return True

    def __matmul__(self, other):
        """self after other."""
        if other.target is not self.source and other.target.rank != self.source.rank:
            raise ModuleError("maps do not compose")
        return ModuleMap(other.source, self.target, self.matrix @ other.matrix, check=self.check and other.check)

    def __add__(self, other):
        return ModuleMap(self.source, self.target, self.matrix + other.matrix, check=False)

    def __neg__(self):
        return ModuleMap(self.source, self.target, -self.matrix, check=False)

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c):
        return ModuleMap(self.source, self.target, c * self.matrix, check=False)

    def is_zero(self):
        return not np.any(self.matrix)

    def equals(self, other):
        return np.array_equal(self.matrix, _red(other.matrix, self.target.modulus))


def unchecked(source, target, matrix):
    """A map whose equivariance is not checked (set sections, lifts)."""
    return ModuleMap(source, target, matrix, check=False)


# --- constructors -----------------------------------------------------------


def perm_module(X: GSet, modulus=0, name=None):
    n = X.size
    a = np.zeros((X.group.order, n, n), dtype=np.int64)
    for g in range(X.group.order):
        a[g, X.act[:, g], np.arange(n)] = 1
    name = name or f"Z[{X.name}]"
    return GModule(X.group, modulus, a, name, ((name, n),)).validate()


def trivial_module(G, modulus=0, rank=1, name=None):
    a = np.broadcast_to(np.eye(rank, dtype=np.int64), (G.order, rank, rank))
    name = name or ring_name(modulus)
    return GModule(G, modulus, a, name, ((name, rank),)).validate()


def character_twist(M, chi, name=None):
    """Twist the action by a multiplicative character chi: G -> units."""
    N = M.modulus
    G = M.group
    chi = np.asarray(chi, dtype=np.int64).ravel()
    if chi.shape != (G.order,):
        raise ModuleError("character needs one value per group element")
    chi = _red(chi, N)
    for x in chi.tolist():
        if (N and gcd(x, N) != 1) or (not N and x not in (1, -1)):
            raise ModuleError(f"character value {x} is not a unit of {ring_name(N)}")
    if not np.array_equal(_red(chi[:, None] * chi[None, :], N), chi[G.table]):
        raise ModuleError("character is not multiplicative")
    a = chi[:, None, None] * M.action
    return GModule(G, N, a, name or f"{M.name}(chi)", M.summands).validate()


def _same_ring(*ms):
    G, N = ms[0].group, ms[0].modulus
    for M in ms:
        if M.group is not G:
            raise ModuleError("modules over different groups")
        if M.modulus != N:
            raise ModuleError("modules over different rings")
    return G, N


def direct_sum(*ms, name=None):
    G, N = _same_ring(*ms)
    r = sum(M.rank for M in ms)
    a = np.zeros((G.order, r, r), dtype=np.int64)
    o = 0
    summands = []
    for M in ms:
        a[:, o : o + M.rank, o : o + M.rank] = M.action
        o += M.rank
        summands.extend(M.summands)
    name = name or " + ".join(M.name for M in ms)
    return GModule(G, N, a, name, tuple(summands))


def block_map(source_parts, target_parts, blocks, source=None, target=None, check=True):
    """Assemble a map between direct sums from blocks[i][j]: source_j -> target_i.

    Entries may be None (zero) or integer matrices.
    """
    src = source or direct_sum(*source_parts)
    tgt = target or direct_sum(*target_parts)
    M = np.zeros((tgt.rank, src.rank), dtype=np.int64)
    ro = 0
    for i, T in enumerate(target_parts):
        co = 0
        for j, S in enumerate(source_parts):
            b = blocks[i][j]
            if b is not None:
                M[ro : ro + T.rank, co : co + S.rank] = np.asarray(b, dtype=np.int64).reshape(T.rank, S.rank)
            co += S.rank
        ro += T.rank
    return ModuleMap(src, tgt, M, check=check)


def tensor(M, N_, name=None):
    G, n = _same_ring(M, N_)
    a = np.einsum("gij,gkl->gikjl", M.action, N_.action).reshape(G.order, M.rank * N_.rank, M.rank * N_.rank)
    return GModule(G, n, a, name or f"{M.name} x {N_.name}").validate()


def tensor_map(f, T):
    """f tensor id_T."""
    src, tgt = tensor(f.source, T), tensor(f.target, T)
    return ModuleMap(src, tgt, np.kron(f.matrix, np.eye(T.rank, dtype=np.int64)))


def dual(M, name=None):
    a = M.action[M.group.inverse].transpose(0, 2, 1)
    summ = tuple((f"{lab}*", r) for lab, r in M.summands)
    return GModule(M.group, M.modulus, a, name or f"{M.name}*", summ).validate()


def dual_map(f, source=None, target=None):
    """Transpose of f, from target* to source*."""
    src = source or dual(f.target)
    tgt = target or dual(f.source)
    return ModuleMap(src, tgt, f.matrix.T)


def change_ring(M, modulus):
    """Reduce a module over Z or Z/N to Z/modulus (modulus | N)."""
    if M.modulus and modulus and M.modulus % modulus:
        raise ModuleError(f"cannot reduce {M.ring} to {ring_name(modulus)}")
    if M.modulus and not modulus:
        raise ModuleError("cannot lift a torsion module to Z")
    return GModule(M.group, modulus, M.action, M.name, M.summands).validate()


def reduce_map(f, modulus, source=None, target=None):
    src = source or change_ring(f.source, modulus)
    tgt = target or change_ring(f.target, modulus)
    return ModuleMap(src, tgt, f.matrix)


reduce_mod = change_ring


def restrict(M, emb):
    """Restrict the action along an embedding (or the inclusion of a Subgroup)."""
    if isinstance(emb, Subgroup):
        emb = emb.inclusion
    if emb.target is not M.group:
        raise ModuleError("embedding target is not the module's group")
    return GModule(emb.source, M.modulus, M.action[emb.images], M.name, M.summands).validate()


def restrict_map(f, emb, source=None, target=None):
    src = source or restrict(f.source, emb)
    tgt = target or restrict(f.target, emb)
    return ModuleMap(src, tgt, f.matrix)


def inflate(M, hom: GroupEmbedding):
    """Pull back along a (not necessarily injective) homomorphism G -> M.group."""
    return GModule(hom.source, M.modulus, M.action[hom.images], M.name, M.summands).validate()


@dataclass(frozen=True)
class BocksteinPair:
    """0 -> T1 --tau--> T2 --pi--> T1 -> 0 with tau.pi = m on T2."""

    m: int
    T2: GModule
    T1: GModule
    tau: ModuleMap
    pi: ModuleMap


def bockstein_pair(T2, m, T1=None):
    if T2.modulus != m * m:
        raise ModuleError(f"Bockstein pair needs a module over Z/{m * m}")
    if T1 is None:
        T1 = change_ring(T2, m)
    elif T1.modulus != m or not np.array_equal(T1.action, T2.action % m):
        raise ModuleError("T1 is not the reduction of T2")
    r = T2.rank
    tau = ModuleMap(T1, T2, m * np.eye(r, dtype=np.int64))
    pi = ModuleMap(T2, T1, np.eye(r, dtype=np.int64))
    return BocksteinPair(m, T2, T1, tau, pi)


# --- finite sub- and quotient modules ------------------------------------


@dataclass(frozen=True, eq=False)
class FiniteModule:
    """span(K)/span(I) inside a free module over Z/N, in divisor coordinates.

    ``action[g]`` acts on coordinate vectors (columns) modulo the divisors.
    """

    ambient: GModule
    structure: mla.SubquotientStructure
    action: np.ndarray
    name: str = "S"

    @property
    def group(self):
        return self.ambient.group

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
    def reps(self):
        """Representatives in the ambient module, as columns."""
        return self.structure.rep_basis.T

    def coords(self, V):
        """Coordinates of ambient columns V."""
        V = np.asarray(V, dtype=np.int64)
        if V.ndim == 1:
            return self.structure.project(V)
        return self.structure.project(V.T).T

    def reduce(self, C):
        d = np.array(self.divisors, dtype=np.int64).reshape(-1, *([1] * (np.ndim(C) - 1)))
        return np.asarray(C, dtype=np.int64) % d if self.rank else np.asarray(C)

    def validate(self):
        k = self.rank
        a = self.action
        if not np.array_equal(self.reduce(a[0]), self.reduce(np.eye(k, dtype=np.int64))):
            raise ModuleError("identity does not act as identity")
        for g in range(self.group.order):
            for h in range(self.group.order):
                lhs = self.reduce(a[g] @ a[h])
                if not np.array_equal(lhs, self.reduce(a[self.group.mul(g, h)])):
                    raise ModuleError("action on subquotient is not a homomorphism")
        return self


def subquotient(M, K, I=None, name="S"):
    """span of columns K modulo span of columns I inside the free module M over Z/N.

    Both spans must be G-invariant; the induced action is computed in
    coordinates.
    """
    N = M.modulus
    if not N:
        raise ModuleError("subquotients are only formed over Z/N")
    K = _red(np.asarray(K, dtype=np.int64).reshape(M.rank, -1), N)
    I = np.zeros((M.rank, 0), dtype=np.int64) if I is None else _red(np.asarray(I).reshape(M.rank, -1), N)
    S = mla.quotient_structure(K.T, I.T, N)
    k = len(S.divisors)
    act = np.zeros((M.group.order, k, k), dtype=np.int64)
    Kform = mla.howell_basis(K.T, N) if K.shape[1] else None
    for g in range(M.group.order):
        gK = (M.action[g] @ K) % N
        if Kform is not None and not Kform.contains(gK.T):
            raise ModuleError("generating span is not invariant")
        if I.shape[1]:
            gI = (M.action[g] @ I) % N
            if not S.is_zero_class(gI.T):
                raise ModuleError("relation span is not invariant")
        if k:
            act[g] = S.project(((M.action[g] @ S.rep_basis.T) % N).T).T
    return FiniteModule(M, S, act, name).validate()


def fmap_matrix(f_ambient, src: FiniteModule, tgt: FiniteModule):
    """Coordinate matrix of the map induced by an ambient matrix."""
    img = (np.asarray(f_ambient, dtype=np.int64) @ src.reps) % tgt.ambient.modulus
    if not src.rank:
        return np.zeros((tgt.rank, 0), dtype=np.int64)
    return tgt.coords(img).reshape(tgt.rank, src.rank)


def _free_on_columns(M, B, name):
    """The submodule of M with basis columns B (assumed invariant), as a GModule."""
    N = M.modulus
    r = B.shape[1]
    a = np.zeros((M.group.order, r, r), dtype=np.int64)
    for g in range(M.group.order):
        img = _red(M.action[g] @ B, N)
        for j in range(r):
            x = zla.solve(B, img[:, j]) if not N else mla.solve(B, img[:, j], N)
            if x is None:
                raise ModuleError("span is not invariant")
            a[g, :, j] = np.asarray(x, dtype=np.int64)
    return GModule(M.group, N, a, name).validate()


@dataclass(frozen=True, eq=False)
class Sub:
    """A free submodule with its inclusion."""

    module: GModule
    inclusion: ModuleMap


def image_module(f, name=None):
    """Image of f as a free module (over Z always; over Z/N only when free)."""
    N = f.target.modulus
    if N:
        B = _free_basis_mod(f.matrix, N)
    else:
        B = np.asarray(zla.image(f.matrix), dtype=np.int64)
    L = _free_on_columns(f.target, B, name or f"im({f.target.name})")
    return Sub(L, ModuleMap(L, f.target, B))


def kernel_module(f, name=None):
    N = f.source.modulus
    if N:
        B = _free_basis_mod(mla.kernel(f.matrix, N), N)
    else:
        B = np.asarray(zla.kernel(f.matrix), dtype=np.int64)
    K = _free_on_columns(f.source, B, name or f"ker({f.source.name})")
    return Sub(K, ModuleMap(K, f.source, B))


def _free_basis_mod(G, N):
    """Basis (columns) of span(columns of G) over Z/N; raises unless free."""
    G = np.asarray(G, dtype=np.int64)
    S = mla.quotient_structure(G.T, np.zeros((0, G.shape[0]), np.int64), N)
    if any(d != N for d in S.divisors):
        raise ModuleError("span is not a free module")
    return S.rep_basis.T.copy()


def fiber_product(f, g):
    """M x_P N for f: M -> P, g: N -> P; returns (module or FiniteModule, projections)."""
    _same_ring(f.source, g.source, f.target)
    S = direct_sum(f.source, g.source)
    diff = ModuleMap(S, f.target, np.hstack([f.matrix, -g.matrix]))
    if S.modulus:
        K = mla.kernel(diff.matrix, S.modulus)
        FM = subquotient(S, K, None, "fiber")
        return FM, S
    sub = kernel_module(diff, "fiber")
    return sub, S


def pushout(f, g):
    """M +_P N for f: P -> M, g: P -> N as a FiniteModule over Z/N."""
    _same_ring(f.target, g.target, f.source)
    S = direct_sum(f.target, g.target)
    if not S.modulus:
        raise ModuleError("pushouts are formed over Z/N only")
    rel = np.vstack([f.matrix, -g.matrix])
    FM = subquotient(S, np.eye(S.rank, dtype=np.int64), rel, "pushout")
    return FM, S


def invariants(M):
    """Fixed points, as a Sub over Z; over Z/N returns a FiniteModule."""
    stack = np.vstack([M.action[g] - np.eye(M.rank, dtype=np.int64) for g in range(M.group.order)])
    if M.modulus:
        K = mla.kernel(stack, M.modulus)
        return subquotient(M, K, None, f"{M.name}^G")
    B = np.asarray(zla.kernel(stack), dtype=np.int64)
    sub = _free_on_columns(M, B, f"{M.name}^G")
    return Sub(sub, ModuleMap(sub, M, B))


def coinvariants(M):
    """M / span(g m - m) as a FiniteModule over Z/N, or (divisors, projection) over Z."""
    rel = np.hstack([M.action[g] - np.eye(M.rank, dtype=np.int64) for g in range(M.group.order)])
    if M.modulus:
        return subquotient(M, np.eye(M.rank, dtype=np.int64), rel, f"{M.name}_G")
    U, S, V = zla.snf(rel)
    return [int(S[i, i]) for i in range(min(S.shape))], U


@dataclass(frozen=True, eq=False)
class ModuleExtension:
    """0 -> left --inj--> middle --surj--> right -> 0."""

    left: GModule
    middle: GModule
    right: GModule
    inj: ModuleMap
    surj: ModuleMap

    def validate(self):
        N = self.middle.modulus
        if np.any(_red(self.surj.matrix @ self.inj.matrix, N)):
            raise ModuleError("composite of extension maps is not zero")
        if np.any(mla.kernel(self.inj.matrix, N)):
            raise ModuleError("injection has a kernel")
        if mla.span_order(self.surj.matrix.T, N) != N ** self.right.rank:
            raise ModuleError("surjection is not onto")
        if N ** self.middle.rank != N ** self.left.rank * N ** self.right.rank:
            raise ModuleError("orders do not multiply")
        ker = mla.howell_basis(mla.kernel(self.surj.matrix, N).T, N)
        if not ker.contains(self.inj.matrix.T) or ker.order() != N ** self.left.rank:
            raise ModuleError("extension is not exact in the middle")
        return self


# --- standard coefficient twists ------------------------------------------------------


def sign_characters(G):
    """All nontrivial characters G -> {1, -1}, via G / <squares>."""
    squares = sorted({G.mul(g, g) for g in range(G.order)})
    S = _subgroup(G, squares)
    basis, span = [], S
    for g in range(G.order):
        if g not in span:
            basis.append(g)
            span = _subgroup(G, squares + basis)
    coords = {}
    for bits in itertools.product((0, 1), repeat=len(basis)):
        x = G.identity
        for b, e in zip(basis, bits):
            if e:
                x = G.mul(x, b)
        for s in S.elements:
            coords[G.mul(x, s)] = np.array(bits)
    out = []
    for v in itertools.product((0, 1), repeat=len(basis)):
        if any(v):
            out.append(np.array([(-1) ** int(np.dot(v, coords[g])) for g in range(G.order)], dtype=np.int64))
    return out


def twisted_coefficients(G, m, rank=1):
    """Z/m^2 twisted by a nontrivial character, or None if there is none.

    A sign character is used when one exists; otherwise, for a cyclic group
    whose order is divisible by m, the generator acts by 1 + m.
    """
    N = m * m
    T = trivial_module(G, N, rank, f"Z/{N}")
    chars = sign_characters(G)
    if chars:
        return character_twist(T, chars[0], f"Z/{N}(sign)")
    gen = next((g for g in range(G.order) if G.element_order(g) == G.order), None)
    if gen is None or G.order % m or m == 1:
        return None
    chi = np.zeros(G.order, dtype=np.int64)
    x = G.identity
    for j in range(G.order):
        chi[x] = pow(1 + m, j, N)
        x = G.mul(x, gen)
    return character_twist(T, chi, f"Z/{N}(1+{m})")
