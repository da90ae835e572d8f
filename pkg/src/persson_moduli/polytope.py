"""Hypersimplices, matroid polytopes, b-cuts and matroid tilings.

Points live in R^n on the hyperplane sum(x) = d.  Vertices of matroid
polytopes are 0/1 tuples.  A flat constraint ``(I, k)`` means
``sum(x_i for i in I) <= k`` with 1-based indices.

Tilings of the b-cut are found in three stages: build the pool of
candidate pieces cut out by hyperplanes through the open cut, find every
collection whose interiors partition a set of generic sample points, then
verify survivors exactly (face-fitting and volume).
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations

from . import hull
from .lp import OPTIMAL, linprog


class SearchLimitError(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class FlatConstraint:
    I: tuple
    k: int

    def to_json(self):
        return {"I": list(self.I), "k": self.k}

    @classmethod
    def from_json(cls, obj):
        return cls(tuple(sorted(obj["I"])), int(obj["k"]))

    def value(self, x):
        return sum(x[i - 1] for i in self.I)


@dataclass(frozen=True)
class MatroidPolytope:
    d: int
    n: int
    vertices: frozenset
    constraints: tuple = ()

    def to_json(self):
        return {"constraints": [c.to_json() for c in self.constraints]}


@dataclass(frozen=True)
class Tiling:
    d: int
    n: int
    pieces: tuple

    def to_json(self):
        return {"d": self.d, "n": self.n, "pieces": [p.to_json() for p in self.pieces]}

    @classmethod
    def from_json(cls, obj):
        d, n = obj["d"], obj["n"]
        pieces = tuple(polytope_from_constraints(d, n, [FlatConstraint.from_json(c) for c in p["constraints"]])
                       for p in obj["pieces"])
        return cls(d, n, pieces)

    def constraint_sets(self):
        return frozenset(frozenset(p.constraints) for p in self.pieces)


@dataclass
class TilingClass:
    tiling: Tiling
    orbit_size: int
    verified: dict = field(default_factory=dict)


def parse_weight(b, n=None):
    if isinstance(b, str):
        vals = [Fraction(s) for s in b.split(",")]
    elif isinstance(b, (int, Fraction)):
        vals = [Fraction(b)]
    else:
        vals = [Fraction(v) for v in b]
    if len(vals) == 1 and n:
        vals = vals * n
    if any(not 0 < v <= 1 for v in vals):
        raise ValueError("weights must lie in (0, 1]")
    return tuple(vals)


# vertices and constraints ----------------------------------------------------


def hypersimplex_vertices(d, n):
    if not 1 <= d <= n:
        raise ValueError("need 1 <= d <= n")
    return frozenset(tuple(int(i in I) for i in range(n)) for I in combinations(range(n), d))


def polytope_from_constraints(d, n, cs):
    cs = tuple(sorted(FlatConstraint(tuple(sorted(c.I)), c.k) for c in cs))
    verts = frozenset(v for v in hypersimplex_vertices(d, n) if all(c.value(v) <= c.k for c in cs))
    if not verts:
        raise ValueError("constraints cut out no vertex")
    return MatroidPolytope(d, n, verts, cs)


def matroid_from_vectors(vectors):
    vecs = [[Fraction(x) for x in v] for v in vectors]
    if any(all(x == 0 for x in v) for v in vecs):
        raise ValueError("zero vector")
    d, n = len(vecs[0]), len(vecs)
    verts = frozenset(
        tuple(int(i in I) for i in range(n))
        for I in combinations(range(n), d)
        if hull._det([vecs[i] for i in I]) != 0
    )
    return MatroidPolytope(d, n, verts)


# edges --------------------------------------------------------------------


def _support(v):
    return frozenset(i for i, x in enumerate(v) if x)


def _midpoint_split(u, v, vset):
    """Two other vertices w, z with w + z = u + v, if any."""
    su, sv = _support(u), _support(v)
    common = su & sv
    sym = sorted(su ^ sv)
    need = len(su) - len(common)
    n = len(u)
    for T in combinations(sym, need):
        w = common | set(T)
        z = common | (set(sym) - set(T))
        if w == su or w == sv:
            continue
        wv = tuple(int(i in w) for i in range(n))
        zv = tuple(int(i in z) for i in range(n))
        if wv in vset and zv in vset:
            return wv, zv
    return None


def is_edge(u, v, verts):
    """Exact adjacency test: the midpoint of an edge has no convex
    representation putting weight on any third vertex."""
    verts = sorted(verts)
    n = len(u)
    cols = len(verts)
    A_eq = [[Fraction(w[i]) for w in verts] for i in range(n)] + [[Fraction(1)] * cols]
    b_eq = [Fraction(u[i] + v[i], 2) for i in range(n)] + [Fraction(1)]
    c = [Fraction(int(w == u or w == v)) for w in verts]
    res = linprog(c, A_eq=A_eq, b_eq=b_eq, maximize=False)
    return res.status == OPTIMAL and res.value == 1


def non_root_edges(verts, first_only=False):
    """Edges of conv(verts) not parallel to any e_i - e_j."""
    verts = sorted(verts)
    vset = set(verts)
    bad = []
    for a, b in combinations(verts, 2):
        diff = sum(1 for x, y in zip(a, b) if x != y)
        if diff <= 2:
            continue
        if _midpoint_split(a, b, vset):
            continue
        if is_edge(a, b, verts):
            bad.append((a, b))
            if first_only:
                break
    return bad


def is_matroid_polytope(P):
    verts = P.vertices if isinstance(P, MatroidPolytope) else frozenset(tuple(v) for v in P)
    if not verts:
        raise ValueError("empty vertex set")
    if len({sum(v) for v in verts}) != 1 or any(x not in (0, 1) for v in verts for x in v):
        return False
    return not non_root_edges(verts, first_only=True)


# LP helpers ---------------------------------------------------------------


def _points_fit(P, Q):
    """Whether conv(P) and conv(Q) meet in a common proper face (or not at all).

    Decided by searching for a hyperplane that weakly separates the two
    point sets and contains exactly their common points.
    """
    P, Q = set(P), set(Q)
    if P == Q:
        return False
    common = P & Q
    if common == P or common == Q:
        return False
    n = len(next(iter(P)))
    # variables: a_1..a_n, c (free), t
    nv = n + 2
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for p in sorted(P - common):
        A_ub.append([Fraction(x) for x in p] + [Fraction(-1), Fraction(1)])
        b_ub.append(0)
    for q in sorted(Q - common):
        A_ub.append([Fraction(-x) for x in q] + [Fraction(1), Fraction(1)])
        b_ub.append(0)
    for v in sorted(common):
        A_eq.append([Fraction(x) for x in v] + [Fraction(-1), Fraction(0)])
        b_eq.append(0)
    A_ub.append([Fraction(0)] * (nv - 1) + [Fraction(1)])
    b_ub.append(1)
    c = [0] * (nv - 1) + [1]
    res = linprog(c, A_ub, b_ub, A_eq, b_eq, free=range(n + 1))
    return res.status == OPTIMAL and res.value > 0


def face_fitting(P, Q, b=None):
    """Whether two matroid polytopes meet in a common proper face.

    With a weight ``b`` the test is applied to the tiles P and Q cut down
    to the b-cut instead of to the polytopes themselves.
    """
    if b is None:
        return _points_fit(P.vertices, Q.vertices)
    b = parse_weight(b, P.n)
    return _points_fit(constraint_vertices(P.d, P.n, P.constraints, b),
                       constraint_vertices(Q.d, Q.n, Q.constraints, b))


def bcut_interior_meets(P, b):
    """Whether conv(P) contains a point with 0 < x_i < b_i for all i."""
    b = parse_weight(b, P.n)
    verts = sorted(P.vertices)
    m = len(verts)
    # variables: lambda_v (m), t (free)
    A_ub, b_ub = [], []
    for i in range(P.n):
        A_ub.append([Fraction(-v[i]) for v in verts] + [Fraction(1)])
        b_ub.append(0)
        A_ub.append([Fraction(v[i]) for v in verts] + [Fraction(1)])
        b_ub.append(b[i])
    A_ub.append([Fraction(0)] * m + [Fraction(1)])
    b_ub.append(1)
    res = linprog([0] * m + [1], A_ub, b_ub, [[1] * m + [0]], [1], free=[m])
    return res.status == OPTIMAL and res.value > 0


def _region_rows(d, n, b, cs):
    """Inequalities (in x-space) of the b-cut intersected with constraints."""
    rows, rhs = [], []
    for i in range(n):
        e = [0] * n
        e[i] = -1
        rows.append(e)
        rhs.append(Fraction(0))
        e = [0] * n
        e[i] = 1
        rows.append(e)
        rhs.append(b[i])
    for c in cs:
        rows.append([int(i + 1 in c.I) for i in range(n)])
        rhs.append(Fraction(c.k))
    return rows, rhs


def _slack_center(d, n, b, cs, flip=None, on=()):
    """Maximise the common slack t of all region inequalities.

    ``flip`` (an index into ``cs``) reverses one constraint; ``on`` lists
    (I, k) hyperplanes the point must lie on.  Returns (t, x).
    """
    rows, rhs = _region_rows(d, n, b, cs)
    A_ub, b_ub = [], []
    nbox = 2 * n
    for j, (r, h) in enumerate(zip(rows, rhs)):
        if flip is not None and j == nbox + flip:
            A_ub.append([-Fraction(x) for x in r] + [Fraction(1)])
            b_ub.append(-h)
        else:
            A_ub.append([Fraction(x) for x in r] + [Fraction(1)])
            b_ub.append(h)
    A_ub.append([Fraction(0)] * n + [Fraction(1)])
    b_ub.append(Fraction(1))
    A_eq = [[Fraction(1)] * n + [Fraction(0)]]
    b_eq = [Fraction(d)]
    for I, k in on:
        A_eq.append([Fraction(int(i + 1 in I)) for i in range(n)] + [Fraction(0)])
        b_eq.append(Fraction(k))
    res = linprog([0] * n + [1], A_ub, b_ub, A_eq, b_eq, free=[n])
    if res.status != OPTIMAL:
        return Fraction(-1), None
    return res.value, res.x[:n]


def region_volume(d, n, b, cs):
    """Normalised volume of the b-cut intersected with the constraints."""
    rows, rhs = _region_rows(d, n, b, cs)
    A, c = [], []
    for r, h in zip(rows, rhs):
        # eliminate x_n = d - sum of the others
        A.append([r[i] - r[n - 1] for i in range(n - 1)])
        c.append(h - r[n - 1] * d)
    return hull.volume(A, c)


def constraint_vertices(d, n, cs, b=None):
    """All vertices of the polyhedron Delta(d, n) (or its b-cut) cut by ``cs``."""
    ones = tuple([Fraction(1)] * n) if b is None else b
    rows, rhs = _region_rows(d, n, ones, cs)
    A = [[r[i] - r[n - 1] for i in range(n - 1)] for r in rows]
    c = [h - r[n - 1] * d for r, h in zip(rows, rhs)]
    out = []
    for y in hull.vertices(A, c):
        out.append(tuple(y) + (d - sum(y),))
    return out


# tiling search ------------------------------------------------------------


def _sym_classes(b):
    classes = {}
    for i, v in enumerate(b):
        classes.setdefault(v, []).append(i + 1)
    return list(classes.values())


def _orbit_key(b, family):
    """Complete invariant of a list of (I, k, tag) under b-preserving permutations."""
    n = len(b)
    best = None
    for order in permutations(range(len(family))):
        fam = [family[j] for j in order]
        cells = {}
        for i in range(1, n + 1):
            pattern = tuple(i in f[0] for f in fam)
            cells.setdefault(pattern, []).append(b[i - 1])
        key = (tuple(f[1:] for f in fam), tuple(sorted((p, tuple(sorted(v))) for p, v in cells.items())))
        if best is None or key < best:
            best = key
    return best


def _canonical_hyperplane(I, k, d, n):
    comp = tuple(i for i in range(1, n + 1) if i not in I)
    return min((len(I), tuple(I), k), (len(comp), comp, d - k))[1:]


def cut_hyperplanes(d, n, b):
    """Hyperplanes x_I = k (1 <= k <= d-1) meeting the open b-cut.

    Over the open cut, x_I ranges over the open interval
    (max(0, d - b(complement)), min(b(I), d)), so the test is exact.
    """
    out = set()
    total = sum(b)
    for size in range(2, n - 1):
        for I in combinations(range(1, n + 1), size):
            bI = sum(b[i - 1] for i in I)
            lo, hi = max(Fraction(0), d - (total - bI)), min(bI, Fraction(d))
            for k in range(1, d):
                if lo < k < hi:
                    out.add(_canonical_hyperplane(I, k, d, n))
    return sorted(out)


def _crosses(d, n, b, h1, h2, cache):
    key = _orbit_key(b, [(set(h1[0]), h1[1]), (set(h2[0]), h2[1])])
    if key not in cache:
        t, _ = _slack_center(d, n, b, [], on=[h1, h2])
        cache[key] = t > 0
    return cache[key]


def _families(hyperplanes, crossing, limit):
    """All sets of pairwise non-crossing hyperplanes (including the empty set)."""
    m = len(hyperplanes)
    ok = [[not crossing(i, j) for j in range(m)] for i in range(m)]
    out = [()]

    def grow(fam, start):
        for j in range(start, m):
            if all(ok[i][j] for i in fam):
                nf = fam + (j,)
                out.append(nf)
                if len(out) > limit:
                    raise SearchLimitError(f"more than {limit} hyperplane families")
                grow(nf, j + 1)

    grow((), 0)
    return out


def _side_constraint(h, above, d, n):
    I, k = h
    if not above:
        return FlatConstraint(tuple(I), k)
    comp = tuple(i for i in range(1, n + 1) if i not in I)
    return FlatConstraint(comp, d - k)


def candidate_pieces(d, n, b, limit=100000):
    """Matroid polytopes cut from Delta(d, n) by non-crossing hyperplanes
    through the open b-cut, each constraint irredundant on the cut."""
    hyper = cut_hyperplanes(d, n, b)
    cross_cache = {}
    fams = _families(hyper, lambda i, j: _crosses(d, n, b, hyper[i], hyper[j], cross_cache), limit)
    cache = {}
    pieces = []
    for fam in fams:
        for sides in range(2 ** len(fam)):
            cs = [_side_constraint(hyper[j], (sides >> s) & 1, d, n) for s, j in enumerate(fam)]
            key = _orbit_key(b, [(set(c.I), c.k) for c in cs])
            if key not in cache:
                cache[key] = _piece_ok(d, n, b, cs)
            if cache[key]:
                pieces.append(polytope_from_constraints(d, n, cs))
    return pieces, hyper


def _piece_ok(d, n, b, cs):
    t, _ = _slack_center(d, n, b, cs)
    if t <= 0:
        return False
    for j in range(len(cs)):
        t, _ = _slack_center(d, n, b, cs, flip=j)
        if t <= 0:
            return False
    try:
        P = polytope_from_constraints(d, n, cs)
    except ValueError:
        return False
    return is_matroid_polytope(P) and bcut_interior_meets(P, b)


def _strictly_inside(x, d, n, b, cs):
    return all(0 < v < bi for v, bi in zip(x, b)) and all(c.value(x) < c.k for c in cs)


def _sample_points(d, n, b, hyper, pieces, count, seed):
    """Rational points of the open cut lying on none of the hyperplanes."""
    rng = random.Random(seed)

    def generic(x):
        return (sum(x) == d and all(0 < v < bi for v, bi in zip(x, b))
                and all(sum(x[i - 1] for i in I) != k for I, k in hyper))

    def jitter(x, radius):
        for _ in range(200):
            delta = [Fraction(rng.randint(-1000, 1000), 1000) for _ in range(n)]
            mean = sum(delta) / n
            delta = [v - mean for v in delta]
            scale = radius / (2 * n)
            y = [xi + scale * di for xi, di in zip(x, delta)]
            if generic(y):
                return y
        return None

    pts = []
    _, center = _slack_center(d, n, b, [])
    x = [float(v) for v in center]
    for _ in range(count):
        # hit-and-run in floating point, then rationalised and checked exactly
        for _ in range(n):
            dirn = [rng.gauss(0, 1) for _ in range(n)]
            mean = sum(dirn) / n
            dirn = [v - mean for v in dirn]
            lo, hi = -1e9, 1e9
            for xi, di, bi in zip(x, dirn, b):
                if di > 0:
                    hi = min(hi, (float(bi) - xi) / di)
                    lo = max(lo, -xi / di)
                elif di < 0:
                    lo = max(lo, (float(bi) - xi) / di)
                    hi = min(hi, -xi / di)
            s = rng.uniform(lo, hi) * 0.999
            x = [xi + s * di for xi, di in zip(x, dirn)]
        y = [Fraction(v).limit_denominator(10 ** 6) for v in x[:-1]]
        y.append(d - sum(y))
        if generic(y):
            pts.append(y)
    for P in pieces:
        if not any(_strictly_inside(p, d, n, b, P.constraints) for p in pts):
            t, c = _slack_center(d, n, b, list(P.constraints))
            y = jitter(c, t)
            if y is not None:
                pts.append(y)
    return pts


def _exact_covers(masks, universe, limit):
    """Every set of masks partitioning ``universe`` (bit sets as ints)."""
    bits = [1 << i for i in range(universe.bit_length()) if universe >> i & 1]
    by_bit = {bit: [j for j, m in enumerate(masks) if m & bit] for bit in bits}
    out = []
    nodes = [0]

    def rec(covered, chosen):
        nodes[0] += 1
        if nodes[0] > limit:
            raise SearchLimitError(f"exact cover search exceeded {limit} nodes")
        if covered == universe:
            out.append(tuple(sorted(chosen)))
            return
        best = None
        for bit in bits:
            if covered & bit:
                continue
            opts = [j for j in by_bit[bit] if not masks[j] & covered]
            if best is None or len(opts) < len(best):
                best = opts
                if not opts:
                    return
        for j in best:
            rec(covered | masks[j], chosen + [j])

    rec(0, [])
    return out


def _apply_perm(perm, cs):
    return frozenset(frozenset(FlatConstraint(tuple(sorted(perm[i] for i in c.I)), c.k) for c in piece)
                     for piece in cs)


def _sort_key(cs):
    return sorted(sorted((c.I, c.k) for c in piece) for piece in cs)


def symmetry_generators(b):
    gens = []
    n = len(b)
    for cls in _sym_classes(b):
        for a, c in zip(cls, cls[1:]):
            perm = {i: i for i in range(1, n + 1)}
            perm[a], perm[c] = c, a
            gens.append(perm)
    return gens


def orbit(cs, gens):
    seen = {cs}
    frontier = [cs]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = _apply_perm(g, x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def verify_tiling(t, b):
    """Exact checks: pairwise face-fitting of the tiles inside the b-cut,
    integrality of each piece's constraint description, and volume
    coverage of the b-cut."""
    d, n = t.d, t.n
    fits = all(face_fitting(P, Q, b) for P, Q in combinations(t.pieces, 2))
    integral = True
    for P in t.pieces:
        vs = constraint_vertices(d, n, P.constraints)
        integral &= all(x.denominator == 1 for v in vs for x in v) and len(vs) == len(P.vertices)
    total = region_volume(d, n, b, [])
    vols = [region_volume(d, n, b, P.constraints) for P in t.pieces]
    return {"face_fitting": fits, "integral_pieces": integral,
            "volume_sum": sum(vols), "cut_volume": total, "covers": sum(vols) == total,
            "ok": fits and integral and sum(vols) == total}


def enumerate_tilings(d, n, b, samples=400, seed=0, limit=200000):
    """Matroid tilings of the b-cut, one representative per symmetry class.

    Symmetries are the coordinate permutations preserving ``b``.  Each
    class comes with its orbit size and the exact verification record of
    its representative.
    """
    b = parse_weight(b, n)
    if sum(b) <= d:
        raise ValueError("weights must sum to more than d")
    pieces, hyper = candidate_pieces(d, n, b, limit)
    pts = _sample_points(d, n, b, hyper, pieces, samples, seed)
    masks = []
    for P in pieces:
        m = 0
        for j, p in enumerate(pts):
            if _strictly_inside(p, d, n, b, P.constraints):
                m |= 1 << j
        masks.append(m)
    universe = (1 << len(pts)) - 1
    covers = _exact_covers(masks, universe, limit)
    found = {frozenset(frozenset(pieces[j].constraints) for j in cov) for cov in covers}
    gens = symmetry_generators(b)
    classes = []
    remaining = set(found)
    while remaining:
        start = min(remaining, key=_sort_key)
        orb = orbit(start, gens)
        if not orb <= found:
            raise AssertionError("symmetric image of a tiling was not found")
        remaining -= orb
        rep_cs = min(orb, key=_sort_key)
        rep = Tiling(d, n, tuple(polytope_from_constraints(d, n, sorted(p))
                                 for p in sorted(rep_cs, key=lambda p: sorted((c.I, c.k) for c in p))))
        check = verify_tiling(rep, b)
        if check["ok"]:
            classes.append(TilingClass(rep, len(orb), check))
    classes.sort(key=lambda c: (len(c.tiling.pieces), _sort_key(c.tiling.constraint_sets())))
    return classes
