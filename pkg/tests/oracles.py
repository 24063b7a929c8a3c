"""Independent brute-force oracles.

Nothing here imports sixterm: these routines enumerate elements directly so
that the package's Howell/Smith machinery is checked against plain counting.
"""

import itertools
from math import gcd


def span(rows, N, ncols=None):
    """All Z/N-linear combinations of the given rows, as a set of tuples."""
    rows = [tuple(int(x) % N for x in r) for r in rows]
    if ncols is None:
        ncols = len(rows[0])
    out = {tuple([0] * ncols)}
    for r in rows:
        new = set()
        for v in out:
            for c in range(N):
                new.add(tuple((a + c * b) % N for a, b in zip(v, r)))
        out = new
    return out


def _apply(A, v, N):
    return tuple(sum(a * x for a, x in zip(row, v)) % N for row in A)


def _elements(r, N):
    return itertools.product(range(N), repeat=r)


def _primes(n):
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def invariant_factors(orders):
    """Invariant factors (ascending, no 1s) of a finite abelian group.

    ``orders`` is the multiset of element orders.  For each prime the
    partition is read off from |{x : p^j x = 0}|.
    """
    total = len(orders)
    parts = {}
    for p in _primes(total):
        E, t = 0, total
        while t % p == 0:
            t //= p
            E += 1
        counts = [sum(1 for o in orders if (p ** j) % o == 0) for j in range(E + 1)]
        at_least = []
        for i in range(1, len(counts)):
            e, ratio = 0, counts[i] // counts[i - 1]
            while ratio > 1:
                ratio //= p
                e += 1
            at_least.append(e)
        # at_least[j-1] = number of cyclic p-parts of exponent >= j
        exps = []
        for j in range(len(at_least)):
            nxt = at_least[j + 1] if j + 1 < len(at_least) else 0
            exps += [j + 1] * (at_least[j] - nxt)
        parts[p] = sorted(exps, reverse=True)
    width = max((len(v) for v in parts.values()), default=0)
    out = []
    for i in range(width):
        d = 1
        for p, exps in parts.items():
            if i < len(exps):
                d *= p ** exps[i]
        out.append(d)
    return sorted(out)


def subquotient(kernel_of, image_of, r, N):
    """ker(kernel_of)/im(image_of) inside (Z/N)^r by enumeration.

    Both arguments are functions on tuples; ``image_of`` is given as the set
    of its values.
    """
    Z = [v for v in _elements(r, N) if not any(kernel_of(v))]
    B = set(image_of)
    cosets = {}
    for v in Z:
        key = min(tuple((a - b) % N for a, b in zip(v, w)) for w in B)
        cosets.setdefault(key, v)
    orders = []
    for v in cosets.values():
        k = 1
        while tuple((k * x) % N for x in v) not in B:
            k += 1
        orders.append(k)
    return invariant_factors(orders)


def cyclic_cohomology(k, N, action=None, nmax=3):
    """H^n(Z/k, M), n = 0..nmax, from the periodic resolution.

    M = (Z/N)^r with the generator acting by ``action`` (identity by
    default, r = 1).  Cochains are M in every degree; d^0 = t - 1,
    then alternately the norm and t - 1.
    """
    if action is None:
        action = [[1]]
    r = len(action)

    def power(e):
        P = [[int(i == j) for j in range(r)] for i in range(r)]
        for _ in range(e):
            P = [[sum(P[i][l] * action[l][j] for l in range(r)) % N for j in range(r)] for i in range(r)]
        return P

    T = power(1)
    Tm1 = [[(T[i][j] - (i == j)) % N for j in range(r)] for i in range(r)]
    Nrm = [[0] * r for _ in range(r)]
    for e in range(k):
        P = power(e)
        Nrm = [[(Nrm[i][j] + P[i][j]) % N for j in range(r)] for i in range(r)]
    zero = [[0] * r for _ in range(r)]

    def d(n):
        if n < 0:
            return zero
        return Tm1 if n % 2 == 0 else Nrm

    out = []
    for n in range(nmax + 1):
        Dn, Dp = d(n), d(n - 1)
        img = {_apply(Dp, v, N) for v in _elements(r, N)}
        out.append(subquotient(lambda v, D=Dn: _apply(D, v, N), img, r, N))
    return out


def trivial_cyclic_formula(k, m, n):
    """Closed form for trivial Z/m: Z/m in degree 0, Z/gcd(k, m) above."""
    g = m if n == 0 else gcd(k, m)
    return [g] if g > 1 else []


def cyclic_bockstein_square_nonzero(k, m, u, n):
    """Is beta^(n+1) . beta^n nonzero for Z/m^2 over Z/k, generator acting by u?

    Computed on the periodic complex: cochains are Z/m^2 in every degree,
    beta(x) = d(lift x) / m, and a degree-(n+2) cocycle is zero in
    cohomology when it lies in the image of the reduced differential.
    """
    N2 = m * m
    norm = sum(pow(u, j, N2) for j in range(k)) % N2

    def d(j):
        return (u - 1) % N2 if j % 2 == 0 else norm

    def beta(x, j):
        y = (d(j) * x) % N2
        assert y % m == 0
        return (y // m) % m

    cocycles = [x for x in range(m) if (d(n) * x) % m == 0]
    image = {(d(n + 1) * y) % m for y in range(m)}
    return any(beta(beta(x, n), n + 1) not in image for x in cocycles)
