"""Exact vertex enumeration and volume for small rational polytopes.

Vertices come from the double description method on the homogenised
cone; volume from a pulling triangulation built on the facet incidences.
"""

from fractions import Fraction
from math import gcd


def _rank(rows):
    a = [list(r) for r in rows]
    if not a:
        return 0
    r = 0
    ncol = len(a[0])
    for c in range(ncol):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, len(a)):
            if a[i][c]:
                f = a[i][c] / a[r][c]
                for j in range(c, ncol):
                    a[i][j] -= f * a[r][j]
        r += 1
    return r


def _det(rows):
    a = [[Fraction(v) for v in r] for r in rows]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] / a[c][c]
                for j in range(c, n):
                    a[i][j] -= f * a[c][j]
    return det


def _solve(rows, rhs):
    """Solve a square nonsingular system exactly."""
    n = len(rows)
    a = [[Fraction(v) for v in r] + [Fraction(b)] for r, b in zip(rows, rhs)]
    for c in range(n):
        piv = next(i for i in range(c, n) if a[i][c] != 0)
        a[c], a[piv] = a[piv], a[c]
        p = a[c][c]
        a[c] = [v / p for v in a[c]]
        for i in range(n):
            if i != c and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [a[i][n] for i in range(n)]


def _primitive(v):
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    return tuple(Fraction(x // g) for x in ints) if g else tuple(Fraction(0) for _ in ints)


def vertices(A, c):
    """Vertices of the bounded polytope {y : A y <= c}.

    Returns a list of tuples of Fractions (empty if the polytope is empty).
    """
    k = len(A[0])
    H = [[Fraction(v) for v in a] + [-Fraction(b)] for a, b in zip(A, c)]
    H.append([Fraction(0)] * k + [Fraction(-1)])
    dim = k + 1
    # pick dim independent rows for the starting simplicial cone
    chosen = []
    for i in range(len(H)):
        if _rank([H[j] for j in chosen + [i]]) > len(chosen):
            chosen.append(i)
        if len(chosen) == dim:
            break
    if len(chosen) < dim:
        raise ValueError("polytope is unbounded")
    R = [H[i] for i in chosen]
    rays = []
    for col in range(dim):
        e = [Fraction(int(col == j)) for j in range(dim)]
        # ray r with R r = -e_col
        r = _solve(R, [-x for x in e])
        rays.append(_primitive(r))
    added = list(chosen)

    def zeros(r):
        return frozenset(i for i in added if sum(h * x for h, x in zip(H[i], r)) == 0)

    for i in range(len(H)):
        if i in chosen:
            continue
        h = H[i]
        vals = [sum(a * x for a, x in zip(h, r)) for r in rays]
        pos = [j for j, v in enumerate(vals) if v > 0]
        neg = [j for j, v in enumerate(vals) if v < 0]
        if not pos:
            added.append(i)
            continue
        zs = [zeros(r) for r in rays]
        new = [rays[j] for j in range(len(rays)) if vals[j] <= 0]
        for p in pos:
            for q in neg:
                common = zs[p] & zs[q]
                if len(common) < dim - 2:
                    continue
                if any(common <= zs[s] for s in range(len(rays)) if s != p and s != q):
                    continue
                r = [vals[p] * y - vals[q] * x for x, y in zip(rays[p], rays[q])]
                new.append(_primitive(r))
        rays = new
        added.append(i)
        if not rays:
            return []
    out = set()
    for r in rays:
        t = r[-1]
        if t > 0:
            out.add(tuple(x / t for x in r[:-1]))
    return sorted(out)


def affine_dim(points):
    if not points:
        return -1
    base = points[0]
    return _rank([[a - b for a, b in zip(p, base)] for p in points[1:]])


def triangulate(points, A, c):
    """Pulling triangulation of conv(points); simplices as index tuples.

    ``A y <= c`` must be an inequality description of the same polytope so
    facets can be read off from tight constraints.
    """
    tight = [frozenset(i for i, (a, b) in enumerate(zip(A, c))
                       if sum(x * y for x, y in zip(a, p)) == b) for p in points]
    dim_cache = {}

    def dim_of(face):
        if face not in dim_cache:
            dim_cache[face] = affine_dim([points[i] for i in sorted(face)])
        return dim_cache[face]

    memo = {}

    def rec(face, d):
        if face in memo:
            return memo[face]
        if len(face) == d + 1:
            memo[face] = [tuple(sorted(face))]
            return memo[face]
        v0 = min(face)
        facets = set()
        for i in range(len(A)):
            sub = frozenset(v for v in face if i in tight[v])
            if v0 in sub or not sub or sub == face:
                continue
            if dim_of(sub) == d - 1:
                facets.add(sub)
        out = []
        for f in sorted(facets, key=sorted):
            for s in rec(f, d - 1):
                out.append((v0,) + s)
        memo[face] = out
        return out

    full = frozenset(range(len(points)))
    d = dim_of(full)
    return rec(full, d), d


def volume(A, c):
    """Lattice-normalised volume of {y : A y <= c} (unit simplex has volume 1).

    Lower-dimensional or empty polytopes have volume 0.
    """
    pts = vertices(A, c)
    if not pts:
        return Fraction(0)
    k = len(A[0])
    simplices, d = triangulate(pts, A, c)
    if d < k:
        return Fraction(0)
    total = Fraction(0)
    for s in simplices:
        base = pts[s[0]]
        total += abs(_det([[a - b for a, b in zip(pts[j], base)] for j in s[1:]]))
    return total
