"""Finite groups as multiplication tables, subgroups, and finite G-sets.

Elements are indices ``0..order-1`` with 0 the identity.  ``table[a, b]``
is the product ``a*b``.  G-sets act on the left: ``act[x, g] = g.x``.

Dihedral conventions: ``dihedral(k)`` has elements ``s^j r^e`` stored at
index ``j + k*e``, where ``s`` rotates vertex ``v_i`` to ``v_{i+1}`` and
``r`` is the reflection ``v_i -> v_{-i}``.  Edge ``e_i`` joins ``v_i`` and
``v_{i+1}``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

MAX_ORDER = 48


class GroupError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    table: np.ndarray
    name: str = "G"
    generators: tuple = ()

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.int64)
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    @property
    def order(self):
        return self.table.shape[0]

    @property
    def identity(self):
        return 0

    @cached_property
    def inverse(self):
        inv = np.argmax(self.table == 0, axis=1)
        inv.setflags(write=False)
        return inv

    def mul(self, a, b):
        return int(self.table[a, b])

    def inv(self, a):
        return int(self.inverse[a])

    def power(self, a, e):
        x = 0
        base = a if e >= 0 else self.inv(a)
        for _ in range(abs(e)):
            x = self.mul(x, base)
        return x

    def element_order(self, a):
        x, n = a, 1
        while x != 0:
            x = self.mul(x, a)
            n += 1
        return n

    def validate(self):
        t = self.table
        n = self.order
        if t.ndim != 2 or t.shape != (n, n):
            raise GroupError("table must be square")
        if t.min() < 0 or t.max() >= n:
            raise GroupError("table entries out of range")
        ar = np.arange(n)
        if not (np.all(t[0] == ar) and np.all(t[:, 0] == ar)):
            raise GroupError("index 0 is not an identity")
        for row in t:
            if len(set(row.tolist())) != n:
                raise GroupError("table is not a Latin square")
        # (ab)c == a(bc) for all triples at once
        lhs = t[t[:, :, None], ar[None, None, :]]
        rhs = t[ar[:, None, None], t[None, :, :]]
        if not np.array_equal(lhs, rhs):
            raise GroupError("multiplication is not associative")
        return self

    def is_abelian(self):
        return bool(np.array_equal(self.table, self.table.T))

    def conj(self, s, h):
        """s^-1 h s"""
        return self.mul(self.inv(s), self.mul(h, s))

    def describe(self):
        return {"name": self.name, "order": self.order, "table": self.table.tolist()}


# Builders are memoized: modules compare groups by identity, and the tables
# are immutable, so sharing one object per group is safe.


def _group(table, name, gens=()):
    if len(table) > MAX_ORDER:
        raise GroupError(f"group order {len(table)} exceeds {MAX_ORDER}")
    return FiniteGroup(np.asarray(table, dtype=np.int64), name, tuple(gens)).validate()


@lru_cache(maxsize=None)
def trivial():
    return _group([[0]], "1")


@lru_cache(maxsize=None)
def cyclic(k):
    if k < 1:
        raise GroupError("cyclic group needs k >= 1")
    if k == 1:
        return trivial()
    a = np.arange(k)
    return _group((a[:, None] + a[None, :]) % k, f"C{k}", (1,))


@lru_cache(maxsize=None)
def dihedral(k):
    """Symmetries of the k-gon, order 2k."""
    if k < 1:
        raise GroupError("dihedral group needs k >= 1")
    n = 2 * k
    t = np.zeros((n, n), dtype=np.int64)
    for x in range(n):
        a, e = x % k, x // k
        for y in range(n):
            b, f = y % k, y // k
            t[x, y] = (a + (-1) ** e * b) % k + k * ((e + f) % 2)
    return _group(t, f"D{k}", (1 % n, k))


def rotation(k, j):
    return j % k


def reflection(k, j=0):
    """The element s^j r."""
    return j % k + k


@lru_cache(maxsize=None)
def klein_four():
    """{1, a, b, c} with a, b, c at indices 1, 2, 3."""
    a = np.arange(4)
    return _group(a[:, None] ^ a[None, :], "V4", (1, 2))


@lru_cache(maxsize=None)
def symmetric(n):
    if n > 4:
        raise GroupError("symmetric groups supported only for n <= 4")
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    t = [[index[tuple(p[q[x]] for x in range(n))] for q in perms] for p in perms]
    return _group(t, f"S{n}")


def permutations_of(G):
    """For symmetric(n): the tuple of images of each element."""
    n = next(n for n in range(1, 5) if len(list(itertools.permutations(range(n)))) == G.order)
    return list(itertools.permutations(range(n)))


def direct_product(G, H):
    n, m = G.order, H.order
    t = np.zeros((n * m, n * m), dtype=np.int64)
    for a, b in itertools.product(range(n), range(m)):
        for c, d in itertools.product(range(n), range(m)):
            t[a * m + b, c * m + d] = G.table[a, c] * m + H.table[b, d]
    return _group(t, f"{G.name}x{H.name}")


def build_group(spec):
    """Parse ``trivial``, ``cyclic:k``, ``dihedral:k``, ``klein_four``, ``symmetric:n``."""
    name, _, arg = spec.partition(":")
    builders = {"cyclic": cyclic, "dihedral": dihedral, "symmetric": symmetric}
    if name == "trivial" and not arg:
        return trivial()
    if name in ("klein_four", "klein") and not arg:
        return klein_four()
    if name in builders and arg:
        return builders[name](int(arg))
    raise GroupError(f"unknown group spec {spec!r}")


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    elements: tuple

    @classmethod
    def generated(cls, G, gens):
        elems = {0}
        frontier = [0]
        gens = [int(g) for g in gens]
        for g in gens:
            if not 0 <= g < G.order:
                raise GroupError("generator index out of range")
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = G.mul(x, g)
                if y not in elems:
                    elems.add(y)
                    frontier.append(y)
        return cls(G, tuple(sorted(elems)))

    @classmethod
    def whole(cls, G):
        return cls(G, tuple(range(G.order)))

    @property
    def order(self):
        return len(self.elements)

    @property
    def index(self):
        return self.parent.order // self.order

    def __contains__(self, g):
        return g in self._set

    @cached_property
    def _set(self):
        return frozenset(self.elements)

    def validate(self):
        G = self.parent
        if 0 not in self._set:
            raise GroupError("subgroup must contain the identity")
        for a in self.elements:
            if G.inv(a) not in self._set:
                raise GroupError("subgroup not closed under inverse")
            for b in self.elements:
                if G.mul(a, b) not in self._set:
                    raise GroupError("subgroup not closed under product")
        if G.order % self.order:
            raise GroupError("subgroup order does not divide group order")
        return self

    @cached_property
    def right_cosets(self):
        """Cosets H g as sorted tuples, ordered by their minimal element."""
        seen, out = set(), []
        for g in range(self.parent.order):
            if g in seen:
                continue
            c = tuple(sorted(self.parent.mul(h, g) for h in self.elements))
            seen.update(c)
            out.append(c)
        return out

    @cached_property
    def left_cosets(self):
        """Cosets g H, ordered by their minimal element."""
        seen, out = set(), []
        for g in range(self.parent.order):
            if g in seen:
                continue
            c = tuple(sorted(self.parent.mul(g, h) for h in self.elements))
            seen.update(c)
            out.append(c)
        return out

    @property
    def right_reps(self):
        return [c[0] for c in self.right_cosets]

    @property
    def left_reps(self):
        return [c[0] for c in self.left_cosets]

    @cached_property
    def as_group(self):
        """The subgroup as a FiniteGroup, element i <-> elements[i]."""
        pos = {g: i for i, g in enumerate(self.elements)}
        t = [[pos[self.parent.mul(a, b)] for b in self.elements] for a in self.elements]
        return FiniteGroup(np.array(t, dtype=np.int64), f"sub({self.parent.name})").validate()

    @cached_property
    def inclusion(self):
        return GroupEmbedding(self.as_group, self.parent, np.array(self.elements, dtype=np.int64))


def subgroup(G, gens):
    return Subgroup.generated(G, gens).validate()


def is_normal(G, H):
    return all(G.conj(s, h) in H for s in range(G.order) for h in H.elements)


def quotient_map(G, N):
    """Projection G -> G/N as an index array; cosets ordered by minimal element."""
    if not is_normal(G, N):
        raise GroupError("quotient by a non-normal subgroup")
    proj = np.zeros(G.order, dtype=np.int64)
    for i, c in enumerate(N.left_cosets):
        proj[list(c)] = i
    return proj


def quotient_group(G, N):
    proj = quotient_map(G, N)
    reps = N.left_reps
    t = [[int(proj[G.mul(a, b)]) for b in reps] for a in reps]
    Q = FiniteGroup(np.array(t, dtype=np.int64), f"{G.name}/N").validate()
    # well-definedness: proj is a homomorphism
    for a in range(G.order):
        for b in range(G.order):
            if proj[G.mul(a, b)] != Q.table[proj[a], proj[b]]:
                raise GroupError("quotient multiplication is not well defined")
    return Q


def center(G):
    return Subgroup(G, tuple(z for z in range(G.order) if all(G.mul(z, g) == G.mul(g, z) for g in range(G.order))))


@dataclass(frozen=True, eq=False)
class GroupEmbedding:
    source: FiniteGroup
    target: FiniteGroup
    images: np.ndarray

    def __post_init__(self):
        im = np.asarray(self.images, dtype=np.int64)
        im.setflags(write=False)
        object.__setattr__(self, "images", im)

    def validate(self, injective=True):
        S, T, f = self.source, self.target, self.images
        if f.shape != (S.order,):
            raise GroupError("embedding must map every source element")
        if not np.array_equal(f[S.table], T.table[f[:, None], f[None, :]]):
            raise GroupError("map is not a homomorphism")
        if injective and len(set(f.tolist())) != S.order:
            raise GroupError("map is not injective")
        return self

    def __call__(self, g):
        return int(self.images[g])

    @cached_property
    def image(self):
        return Subgroup(self.target, tuple(sorted(set(self.images.tolist()))))


def homomorphism(S, T, images):
    """Unchecked-injectivity homomorphism (e.g. inflation maps)."""
    return GroupEmbedding(S, T, images).validate(injective=False)


# --- G-sets -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GSet:
    group: FiniteGroup
    act: np.ndarray
    name: str = "X"

    def __post_init__(self):
        a = np.asarray(self.act, dtype=np.int64).reshape(-1, self.group.order)
        a.setflags(write=False)
        object.__setattr__(self, "act", a)

    @property
    def size(self):
        return self.act.shape[0]

    def validate(self):
        a, G = self.act, self.group
        n = self.size
        if n and (a.min() < 0 or a.max() >= n):
            raise GroupError("action table out of range")
        if not np.array_equal(a[:, 0], np.arange(n)):
            raise GroupError("identity does not act trivially")
        # g.(h.x) == (gh).x
        lhs = a[a, :]  # lhs[x, h, g] = g.(h.x)
        rhs = a[:, G.table.T]  # rhs[x, h, g] = (g h).x
        if not np.array_equal(lhs, rhs):
            raise GroupError("action is not a homomorphism")
        return self

    @cached_property
    def orbits(self):
        seen, out = set(), []
        for x in range(self.size):
            if x in seen:
                continue
            orb = tuple(sorted(set(self.act[x].tolist())))
            seen.update(orb)
            out.append(orb)
        return out

    def is_transitive(self):
        return len(self.orbits) == 1

    def stabilizer(self, x):
        return Subgroup(self.group, tuple(int(g) for g in np.flatnonzero(self.act[x] == x)))

    def restrict(self, emb):
        """Pull back the action along an embedding or a Subgroup."""
        if isinstance(emb, Subgroup):
            emb = emb.inclusion
        if emb.target is not self.group:
            raise GroupError("embedding target is not the acting group")
        return GSet(emb.source, self.act[:, emb.images], self.name).validate()

    def sub(self, points):
        """Invariant subset as a GSet (points renumbered in the given order)."""
        points = list(points)
        pos = {p: i for i, p in enumerate(points)}
        try:
            act = [[pos[int(y)] for y in self.act[p]] for p in points]
        except KeyError:
            raise GroupError("subset is not invariant") from None
        return GSet(self.group, np.array(act, dtype=np.int64).reshape(len(points), -1), self.name).validate()

    def describe(self):
        return {"name": self.name, "size": self.size, "action": self.act.tolist()}


def regular(G):
    return GSet(G, G.table.T.copy(), f"{G.name}").validate()


def single_point(G):
    return GSet(G, np.zeros((1, G.order), dtype=np.int64), "pt").validate()


def _dihedral_k(G):
    if G.order % 2 or not G.name.startswith("D"):
        raise GroupError("dihedral G-sets need a dihedral group")
    return G.order // 2


def vertices(G):
    k = _dihedral_k(G)
    act = np.zeros((k, 2 * k), dtype=np.int64)
    for i in range(k):
        for g in range(2 * k):
            a, e = g % k, g // k
            act[i, g] = (a + (-1) ** e * i) % k
    return GSet(G, act, "V").validate()


def edges(G):
    k = _dihedral_k(G)
    act = np.zeros((k, 2 * k), dtype=np.int64)
    for i in range(k):
        for g in range(2 * k):
            a, e = g % k, g // k
            act[i, g] = (a + i) % k if e == 0 else (a - i - 1) % k
    return GSet(G, act, "E").validate()


def flags(G):
    """Pairs (edge e_i, one of its vertices): 2i -> (e_i, v_i), 2i+1 -> (e_i, v_{i+1})."""
    k = _dihedral_k(G)
    V, E = vertices(G), edges(G)
    code = {}
    for i in range(k):
        code[(i, i)] = 2 * i
        code[(i, (i + 1) % k)] = 2 * i + 1
    pts = sorted(code, key=code.get)
    act = np.zeros((2 * k, 2 * k), dtype=np.int64)
    for (ei, vi) in pts:
        for g in range(2 * k):
            act[code[(ei, vi)], g] = code[(int(E.act[ei, g]), int(V.act[vi, g]))]
    return GSet(G, act, "F").validate()


def cosets(H):
    """G/H (left cosets) with the left multiplication action."""
    G = H.parent
    cs = H.left_cosets
    pos = {}
    for i, c in enumerate(cs):
        for g in c:
            pos[g] = i
    act = np.array([[pos[G.mul(g, c[0])] for g in range(G.order)] for c in cs], dtype=np.int64)
    return GSet(G, act, f"{G.name}/H").validate()


def orbits_mod(P, X):
    """X/P: orbits of the subgroup P, acted on by the whole group.

    Requires the orbit partition to be invariant (always true for normal P).
    Points are ordered by their minimal element.
    """
    if P.parent is not X.group:
        raise GroupError("subgroup and G-set live over different groups")
    cls = {}
    blocks = []
    for x in range(X.size):
        if x in cls:
            continue
        b = tuple(sorted({int(X.act[x, p]) for p in P.elements}))
        for y in b:
            cls[y] = len(blocks)
        blocks.append(b)
    act = np.zeros((len(blocks), X.group.order), dtype=np.int64)
    for i, b in enumerate(blocks):
        for g in range(X.group.order):
            imgs = {cls[int(X.act[y, g])] for y in b}
            if len(imgs) != 1:
                raise GroupError("orbit partition is not invariant")
            act[i, g] = imgs.pop()
    return GSet(X.group, act, f"{X.name}/P").validate(), np.array(
        [cls[x] for x in range(X.size)], dtype=np.int64
    )


def two_subsets(X):
    pairs = list(itertools.combinations(range(X.size), 2))
    pos = {p: i for i, p in enumerate(pairs)}
    act = np.array(
        [[pos[tuple(sorted((int(X.act[a, g]), int(X.act[b, g]))))] for g in range(X.group.order)] for a, b in pairs],
        dtype=np.int64,
    )
    return GSet(X.group, act, f"{X.name}2").validate(), pairs


def complement_quotient(X, pairs):
    """Two-subsets of a 4-point set modulo complementation."""
    base = sorted({x for p in pairs for x in p})
    if len(base) != 4:
        raise GroupError("complement quotient needs two-subsets of a 4-point set")
    cls, blocks = {}, []
    for i, p in enumerate(pairs):
        if i in cls:
            continue
        comp = tuple(x for x in base if x not in p)
        j = pairs.index(comp)
        for t in (i, j):
            cls[t] = len(blocks)
        blocks.append((i, j))
    act = np.array([[cls[int(X.act[b[0], g])] for g in range(X.group.order)] for b in blocks], dtype=np.int64)
    return GSet(X.group, act, f"{X.name}/*").validate(), np.array([cls[i] for i in range(len(pairs))])


def natural(G):
    """symmetric(n) acting on {0..n-1}."""
    perms = permutations_of(G)
    n = len(perms[0])
    act = np.array([[p[x] for p in perms] for x in range(n)], dtype=np.int64)
    return GSet(G, act, f"X{n}").validate()


def build_gset(spec, G, **kw):
    table = {
        "regular": regular,
        "point": single_point,
        "vertices": vertices,
        "edges": edges,
        "flags": flags,
        "natural": natural,
    }
    if spec not in table:
        raise GroupError(f"unknown G-set {spec!r}")
    return table[spec](G)


# --- embeddings ------------------------------------------------------------


def dihedral_index2(k, variant):
    """D_{k/2} inside D_k, transitive on vertices or on edges of the k-gon."""
    if k % 2 or k < 2:
        raise GroupError("index-2 dihedral embedding needs even k")
    h = k // 2
    S, T = dihedral(h), dihedral(k)
    refl = {"vertex_transitive": reflection(k, 1), "edge_transitive": reflection(k, 0)}
    if variant not in refl:
        raise GroupError(f"unknown variant {variant!r}")
    r = refl[variant]
    images = []
    for x in range(2 * h):
        a, e = x % h, x // h
        g = rotation(k, 2 * a)
        images.append(T.mul(g, r) if e else g)
    emb = GroupEmbedding(S, T, np.array(images)).validate()
    _check_transitive(emb, variant)
    return emb


def klein_in_dihedral4(variant):
    """The Klein four group inside D4, regular on vertices or on edges.

    a maps to the half turn s^2; b and c are two reflections.
    """
    T = dihedral(4)
    refl = {"vertex_transitive": (reflection(4, 1), reflection(4, 3)),
            "edge_transitive": (reflection(4, 0), reflection(4, 2))}
    if variant not in refl:
        raise GroupError(f"unknown variant {variant!r}")
    b, c = refl[variant]
    emb = GroupEmbedding(klein_four(), T, np.array([0, 2, b, c])).validate()
    _check_transitive(emb, variant)
    return emb


def _check_transitive(emb, variant):
    X = vertices(emb.target) if variant == "vertex_transitive" else edges(emb.target)
    if not X.restrict(emb).is_transitive():
        raise GroupError(f"embedding is not {variant.replace('_', '-')}")


def embed(spec, *args):
    if spec == "dihedral_index2":
        return dihedral_index2(*args)
    if spec == "klein_in_dihedral4":
        return klein_in_dihedral4(*args)
    raise GroupError(f"unknown embedding {spec!r}")


def half_rotation(k, sign):
    """Maps V -> E and E -> V whose two composites are s^sign."""
    if k < 3:
        raise GroupError("half rotations need k >= 3")
    i = np.arange(k)
    if sign > 0:
        ve, ev = i.copy(), (i + 1) % k
    else:
        ve, ev = (i - 1) % k, i.copy()
    shift = (i + sign) % k
    if not (np.array_equal(ev[ve], shift) and np.array_equal(ve[ev], shift)):
        raise GroupError("half rotation does not square to a rotation")
    return ve, ev
