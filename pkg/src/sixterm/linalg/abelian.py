"""Finite abelian groups in elementary-divisor coordinates.

A group is ``Z/d1 + ... + Z/dk``; a homomorphism is an integer matrix
(target coordinates x source coordinates).  Subgroups are compared as
lattices of Z^k containing ``diag(d) Z^k``, so all checks are exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import integer as zla


@dataclass(frozen=True)
class AbelianGroup:
    divisors: tuple

    @property
    def rank(self):
        return len(self.divisors)

    @property
    def order(self):
        out = 1
        for d in self.divisors:
            out *= d
        return out

    def reduce(self, v):
        v = np.asarray(v, dtype=np.int64)
        if not self.divisors:
            return v[..., :0]
        return np.mod(v, np.array(self.divisors, dtype=np.int64))

    def describe(self):
        if not self.divisors:
            return "0"
        return " + ".join(f"Z/{d}" for d in self.divisors)


def _diag(G):
    return np.diag(np.array(G.divisors, dtype=object)) if G.rank else np.zeros((0, 0), dtype=object)


def _lattice(G, gens):
    """Canonical basis of span(gens) + diag(G) as HNF rows."""
    if G.rank == 0:
        return np.zeros((0, 0), dtype=object)
    gens = np.asarray(gens, dtype=object).reshape(G.rank, -1)
    M = np.hstack([gens, _diag(G)])
    return zla.row_lattice(M.T)


def reduce_map(f, src, tgt):
    f = np.asarray(f, dtype=np.int64).reshape(tgt.rank, src.rank)
    if tgt.rank == 0:
        return f
    return np.mod(f, np.array(tgt.divisors, dtype=np.int64)[:, None])


def image_lattice(f, src, tgt):
    f = np.asarray(f, dtype=object).reshape(tgt.rank, src.rank)
    return _lattice(tgt, f)


def kernel_lattice(g, src, tgt):
    """Lattice of x in Z^k(src) with g x = 0 in tgt, including diag(src)."""
    g = np.asarray(g, dtype=object).reshape(tgt.rank, src.rank)
    if tgt.rank == 0 or src.rank == 0:
        return _lattice(src, np.eye(src.rank, dtype=object))
    M = np.hstack([g, -_diag(tgt)])
    K = zla.kernel(M)
    return _lattice(src, K[: src.rank])


def lattices_equal(L1, L2):
    return L1.shape == L2.shape and bool(np.all(L1 == L2))


def is_zero_map(f, src, tgt):
    return not np.any(reduce_map(f, src, tgt))


def is_well_defined(f, src, tgt):
    """Does the integer matrix kill diag(src), i.e. define a homomorphism?"""
    f = np.asarray(f, dtype=object).reshape(tgt.rank, src.rank)
    return is_zero_map(np.dot(f, _diag(src)) if src.rank else f, src, tgt)


def is_exact(f, g, A, B, C):
    """Exactness of A --f--> B --g--> C at B."""
    return lattices_equal(image_lattice(f, A, B), kernel_lattice(g, B, C))


def image_order(f, src, tgt):
    L = image_lattice(f, src, tgt)
    return _index(L, tgt)


def kernel_order(g, src, tgt):
    L = kernel_lattice(g, src, tgt)
    return _index(L, src)


def _index(L, G):
    """|L / diag(G) Z^k| for a full-rank lattice L containing diag(G)."""
    d = abs(zla.det(L)) if L.shape[0] else 1
    return G.order // d


def compose(g, f):
    return np.dot(np.asarray(g, dtype=object), np.asarray(f, dtype=object))


def _coords(B, x):
    y = zla.solve(B, x)
    if y is None:
        raise ValueError("vector outside lattice")
    return y


def subgroup(G, gens):
    """Subgroup generated by columns of ``gens``.

    Returns ``(S, inclusion, coords)`` where ``inclusion`` is the matrix
    S -> G and ``coords(x)`` gives S-coordinates of an element x of G lying in
    the subgroup.
    """
    L = _lattice(G, gens)
    BL = L.T  # columns are a basis of the lattice
    Dk = np.column_stack([_coords(BL, col) for col in _diag(G).T]) if G.rank else BL
    U, S, V = zla.snf(Dk)
    s = [int(S[i, i]) for i in range(S.shape[0])]
    keep = [i for i, d in enumerate(s) if d != 1]
    S_grp = AbelianGroup(tuple(s[i] for i in keep))
    gens_S = np.dot(BL, U)[:, keep]
    Uinv_cache = {}

    def coords(x):
        y = _coords(BL, np.asarray(x, dtype=object).ravel())
        if "Ui" not in Uinv_cache:
            Uinv_cache["Ui"] = np.column_stack(
                [zla.solve(U, e) for e in np.eye(U.shape[0], dtype=object)]
            ) if U.shape[0] else U
        z = np.dot(Uinv_cache["Ui"], y)
        return np.array([int(z[i]) % s[i] for i in keep], dtype=np.int64)

    incl = reduce_map(np.array(gens_S, dtype=np.int64), S_grp, G) if keep else np.zeros(
        (G.rank, 0), dtype=np.int64
    )
    return S_grp, incl, coords


def quotient(G, gens):
    """Quotient of G by the subgroup generated by columns of ``gens``.

    Returns ``(Q, projection, section)``: projection ``G -> Q`` and a matrix
    ``Q -> G`` of chosen lifts of the generators.
    """
    L = _lattice(G, gens)
    BL = L.T
    U, S, V = zla.snf(BL)
    s = [int(S[i, i]) for i in range(S.shape[0])]
    keep = [i for i, d in enumerate(s) if d != 1]
    Q = AbelianGroup(tuple(s[i] for i in keep))
    Ui = np.column_stack([zla.solve(U, e) for e in np.eye(U.shape[0], dtype=object)]) if U.shape[0] else U
    proj = np.array(Ui, dtype=object)[keep, :] if keep else np.zeros((0, G.rank), dtype=object)
    proj = reduce_map(np.array(proj, dtype=np.int64), G, Q) if keep else np.zeros((0, G.rank), np.int64)
    sec = np.array(U, dtype=object)[:, keep] if keep else np.zeros((G.rank, 0), dtype=object)
    sec = reduce_map(np.array(sec, dtype=np.int64), Q, G) if keep else np.zeros((G.rank, 0), np.int64)
    return Q, proj, sec


def direct_sum(*groups):
    divs = []
    for G in groups:
        divs.extend(G.divisors)
    return AbelianGroup(tuple(divs))
