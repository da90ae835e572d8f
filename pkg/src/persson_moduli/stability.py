"""Log canonical and GIT tests for weighted line arrangements, and walls
of the weight domain.

Weights may be rationals or infinitesimally perturbed rationals
(:class:`Eps`), so that weights such as 1/2 - eps are handled exactly.
"""

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from itertools import combinations


class OnWall(ValueError):
    def __init__(self, walls):
        super().__init__(f"weight lies on {len(walls)} wall(s)")
        self.walls = walls


@total_ordering
class Eps:
    """value + coeff * eps with eps a positive infinitesimal."""

    __slots__ = ("value", "coeff")

    def __init__(self, value, coeff=0):
        self.value = Fraction(value)
        self.coeff = Fraction(coeff)

    @staticmethod
    def lift(x):
        return x if isinstance(x, Eps) else Eps(x)

    def __add__(self, other):
        o = Eps.lift(other)
        return Eps(self.value + o.value, self.coeff + o.coeff)

    __radd__ = __add__

    def __neg__(self):
        return Eps(-self.value, -self.coeff)

    def __sub__(self, other):
        return self + (-Eps.lift(other))

    def __rsub__(self, other):
        return Eps.lift(other) - self

    def __mul__(self, k):
        if isinstance(k, Eps):
            if k.coeff and self.coeff:
                raise ValueError("products of infinitesimals are not tracked")
            return Eps(self.value * k.value, self.value * k.coeff + self.coeff * k.value)
        k = Fraction(k)
        return Eps(self.value * k, self.coeff * k)

    __rmul__ = __mul__

    def _key(self):
        return (self.value, self.coeff)

    def __eq__(self, other):
        if not isinstance(other, (Eps, int, Fraction)):
            return NotImplemented
        return self._key() == Eps.lift(other)._key()

    def __lt__(self, other):
        return self._key() < Eps.lift(other)._key()

    def __hash__(self):
        return hash(self.value) if not self.coeff else hash(self._key())

    def sign(self):
        return (self > 0) - (self < 0)

    def __repr__(self):
        if not self.coeff:
            return str(self.value)
        op = "+" if self.coeff > 0 else "-"
        c = abs(self.coeff)
        return f"{self.value}{op}{'' if c == 1 else c}eps"


_WEIGHT = re.compile(r"^\s*([-+]?\d+(?:/\d+)?)\s*(?:([-+])\s*(\d+(?:/\d+)?)?\s*\*?\s*eps)?\s*$")


def parse_weight_value(s):
    """``"1/2"`` -> Fraction(1, 2); ``"1/2-eps"`` -> Eps(1/2, -1).  Floats are rejected."""
    if isinstance(s, (int, Fraction, Eps)):
        return s
    if isinstance(s, float):
        raise ValueError("floating point weights are not accepted")
    m = _WEIGHT.match(s)
    if not m:
        raise ValueError(f"bad weight {s!r}")
    v = Fraction(m.group(1))
    if not m.group(2):
        return v
    c = Fraction(m.group(3) or 1)
    return Eps(v, c if m.group(2) == "+" else -c)


def parse_weights(spec, n=None):
    vals = [parse_weight_value(x) for x in spec.split(",")] if isinstance(spec, str) else [
        parse_weight_value(x) for x in spec]
    if len(vals) == 1 and n:
        vals = vals * n
    if n is not None and len(vals) != n:
        raise ValueError(f"expected {n} weights, got {len(vals)}")
    for v in vals:
        if not (0 < v <= 1):
            raise ValueError("weights must lie in (0, 1]")
    return tuple(vals)


# arrangements -------------------------------------------------------------


def _normalize(v):
    v = [Fraction(x) for x in v]
    lead = next((x for x in v if x != 0), None)
    if lead is None:
        raise ValueError("zero coefficient triple")
    return tuple(x / lead for x in v)


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


@dataclass
class WeightedArrangement:
    lines: list                    # (id, multiplicity)
    points: list                   # (point id, tuple of incident line ids)
    weights: dict = field(default_factory=dict)
    coords: dict = field(default_factory=dict)

    def __post_init__(self):
        ids = {i for i, _ in self.lines}
        for _, m in self.lines:
            if m < 1:
                raise ValueError("multiplicities must be positive")
        for _, inc in self.points:
            if not set(inc) <= ids:
                raise ValueError("point references an unknown line")

    def multiplicity(self, i):
        return dict(self.lines)[i]

    def with_weights(self, weights):
        if not isinstance(weights, dict):
            weights = dict(zip([i for i, _ in self.lines], parse_weights(weights, len(self.lines))))
        return WeightedArrangement(self.lines, self.points, dict(weights), self.coords)

    def weighted_mult(self, ids):
        mult = dict(self.lines)
        return sum((self.weights[i] * mult[i] for i in ids), Fraction(0))

    def total_weight(self):
        return self.weighted_mult([i for i, _ in self.lines])

    def to_json(self):
        out = {"schema": "arrangement/1",
               "lines": [{"id": i, "mult": m} for i, m in self.lines],
               "points": [{"id": p, "lines": list(inc)} for p, inc in self.points]}
        if self.coords:
            for entry in out["lines"]:
                entry["coeffs"] = [str(x) for x in self.coords[entry["id"]]]
        if self.weights:
            out["weights"] = {str(i): str(w) for i, w in self.weights.items()}
        return out

    @classmethod
    def from_json(cls, obj):
        if obj.get("schema", "arrangement/1") != "arrangement/1":
            raise ValueError("unsupported arrangement schema")
        for entry in obj["lines"]:
            for x in entry.get("coeffs", []):
                if not isinstance(x, str):
                    raise ValueError("coefficients must be rational strings")
        if obj.get("points") is not None and not all("coeffs" in e for e in obj["lines"]):
            lines = [(e.get("id", k + 1), e.get("mult", 1)) for k, e in enumerate(obj["lines"])]
            points = [(p.get("id", k + 1), tuple(p["lines"])) for k, p in enumerate(obj["points"])]
            arr = cls(lines, points)
        else:
            triples = []
            for e in obj["lines"]:
                triples += [[Fraction(x) for x in e["coeffs"]]] * e.get("mult", 1)
            arr = incidence_from_lines(triples)
            if obj.get("points") is not None:
                arr.points = [(p.get("id", k + 1), tuple(p["lines"])) for k, p in enumerate(obj["points"])]
        if "weights" in obj:
            w = obj["weights"]
            if isinstance(w, dict):
                arr = arr.with_weights({int(k): parse_weight_value(v) for k, v in w.items()})
            else:
                arr = arr.with_weights(w)
        return arr


def incidence_from_lines(triples):
    """Merge proportional triples and compute all multiple points exactly."""
    merged = {}
    order = []
    for t in triples:
        key = _normalize(t)
        if key not in merged:
            merged[key] = 0
            order.append(key)
        merged[key] += 1
    ids = {key: k + 1 for k, key in enumerate(order)}
    pts = {}
    for a, b in combinations(order, 2):
        p = _normalize(_cross(a, b))
        pts.setdefault(p, set()).update((ids[a], ids[b]))
    points = [(k + 1, tuple(sorted(inc))) for k, (_, inc) in enumerate(sorted(pts.items()))]
    lines = [(ids[key], merged[key]) for key in order]
    return WeightedArrangement(lines, points, {}, {ids[key]: key for key in order})


def transform_lines(triples, M):
    """Image of line coefficient vectors under the point map x -> M x.

    Lines transform by the inverse transpose; any nonzero multiple works,
    so the adjugate is used.
    """
    adj = [[Fraction(0)] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            r = [k for k in range(3) if k != j]
            c = [k for k in range(3) if k != i]
            minor = M[r[0]][c[0]] * M[r[1]][c[1]] - M[r[0]][c[1]] * M[r[1]][c[0]]
            adj[i][j] = (-1) ** (i + j) * minor
    # lines l with l . x = 0 go to l . adj(M) (row vector times adjugate)
    return [[sum(Fraction(l[k]) * adj[k][j] for k in range(3)) for j in range(3)] for l in triples]


# verdicts -----------------------------------------------------------------

LC, NOT_LC = "LC", "NotLC"
STABLE, SEMISTABLE, UNSTABLE = "Stable", "Semistable", "Unstable"


@dataclass
class StabilityVerdict:
    verdict: str
    violations: list

    def to_json(self):
        return {"verdict": self.verdict,
                "violations": [{"locus": list(loc), "sum": str(s), "bound": str(b)}
                               for loc, s, b in self.violations]}


def _check(a, line_bound, point_bound, strict):
    bad = []
    for i, m in a.lines:
        s = a.weights[i] * m
        if s > line_bound or (strict and s == line_bound):
            bad.append((("line", i), s, line_bound))
    for p, inc in a.points:
        s = a.weighted_mult(inc)
        if s > point_bound or (strict and s == point_bound):
            bad.append((("point", p), s, point_bound))
    return bad


def is_log_canonical(a):
    bad = _check(a, 1, 2, strict=False)
    return StabilityVerdict(NOT_LC if bad else LC, bad)


def is_git_semistable(a):
    """Numerical criterion for lines in P2 with the linearisation given by
    the weights: points carry at most two thirds of the total weight and
    lines at most one third.  Equality everywhere-strict means stable."""
    total = a.total_weight()
    lb, pb = total * Fraction(1, 3), total * Fraction(2, 3)
    bad = _check(a, lb, pb, strict=False)
    if bad:
        return StabilityVerdict(UNSTABLE, bad)
    tight = _check(a, lb, pb, strict=True)
    return StabilityVerdict(SEMISTABLE if tight else STABLE, tight)


# test configurations --------------------------------------------------------


def _generic_line(rng, through=None):
    if through is None:
        return [Fraction(rng.randint(-97, 97)) for _ in range(3)]
    # random line through the point ``through``
    while True:
        u = [Fraction(rng.randint(-97, 97)) for _ in range(3)]
        c = _cross(u, through)
        if any(c):
            return list(c)


def configuration(pencils, generic=(), shared=0, seed=0):
    """Lines from prescribed coincidences.

    ``pencils`` is a list of one or two lists of multiplicities: lines
    through (0:0:1) and through (1:0:0).  ``shared`` is the multiplicity
    of the line y = 0 through both centres (0 for none).  ``generic`` lists
    multiplicities of further lines in general position.  Random choices
    are retried until no unintended coincidence remains.
    """
    centers = [(0, 0, 1), (1, 0, 0)]
    want = sum(len(p) for p in pencils) + len(generic) + (1 if shared else 0)
    rng = random.Random(seed)
    for _ in range(1000):
        triples, keys = [], []
        for c, mults in zip(centers, pencils):
            for m in mults:
                t = _generic_line(rng, c)
                triples += [t] * m
                keys.append(_normalize(t))
        for m in generic:
            t = _generic_line(rng)
            triples += [t] * m
            keys.append(_normalize(t))
        if shared:
            triples += [[0, 1, 0]] * shared
            keys.append(_normalize([0, 1, 0]))
        if len(set(keys)) != want:
            continue
        arr = incidence_from_lines(triples)
        expected_big = {}
        for k, c in enumerate(centers[:len(pencils)]):
            size = len(pencils[k]) + (1 if shared else 0)
            if size >= 3:
                expected_big[_normalize(c)] = size
        big = {}
        for key_a, key_b in combinations(set(keys), 2):
            p = _normalize(_cross(key_a, key_b))
            big.setdefault(p, set()).update((key_a, key_b))
        found = {p: len(s) for p, s in big.items() if len(s) >= 3}
        if found == expected_big:
            return triples, arr
    raise RuntimeError("could not realise the configuration generically")


def _compositions(total, parts=(1, 2)):
    """Multisets of multiplicities from ``parts`` summing to total (sorted descending)."""
    out = []

    def rec(left, maxp, acc):
        if left == 0:
            out.append(tuple(acc))
            return
        for p in sorted(parts, reverse=True):
            if p <= min(left, maxp):
                rec(left - p, p, acc + [p])

    rec(total, max(parts), [])
    return out


def incidence_corpus(n=8, parts=(1, 2), seed=0):
    """Realisations of every incidence type built from at most two
    multiple points (possibly sharing a line) with line multiplicities in
    ``parts``; each entry is (description, triples, arrangement)."""
    corpus = []
    seen = set()
    k = 0
    for shared in (0,) + tuple(parts):
        for a in range(n - shared + 1):
            for b in range(min(a, n - shared - a) + 1):
                for pa in _compositions(a, parts):
                    for pb in _compositions(b, parts):
                        for g in _compositions(n - shared - a - b, parts):
                            # a "pencil" needs at least two distinct lines through its centre
                            extra = 1 if shared else 0
                            p1, p2, rest = pa, pb, g
                            if len(p1) + extra < 2 and p1:
                                rest, p1 = tuple(sorted(rest + p1, reverse=True)), ()
                            if len(p2) + extra < 2 and p2:
                                rest, p2 = tuple(sorted(rest + p2, reverse=True)), ()
                            p1, p2 = sorted([p1, p2], reverse=True)
                            key = (shared, p1, p2, rest)
                            if key in seen:
                                continue
                            seen.add(key)
                            k += 1
                            pencils = [list(p1), list(p2)]
                            triples, arr = configuration(pencils, rest, shared, seed + k)
                            desc = {"pencils": pencils, "shared": shared, "generic": list(rest)}
                            corpus.append((desc, triples, arr))
    return corpus


# walls and chambers -------------------------------------------------------


@dataclass(frozen=True, order=True)
class Wall:
    I: tuple
    k: int

    def to_json(self):
        return {"I": list(self.I), "k": self.k}


def all_walls(n, d):
    return [Wall(I, k) for size in range(2, n - 1) for I in combinations(range(1, n + 1), size)
            for k in range(1, d)]


def _level(b, wall):
    return sum((b[i - 1] for i in wall.I), Fraction(0)) - wall.k


def _check_domain(b, d):
    total = sum(b, Fraction(0))
    if total < d:
        raise ValueError("weight lies outside the weight domain")


def walls_containing(b, d):
    b = parse_weights(b)
    _check_domain(b, d)
    return [w for w in all_walls(len(b), d) if _level(b, w) == 0]


def crossed_walls(b1, b2, d):
    """Walls strictly crossed by the open segment b1 -> b2, and walls touched
    only at an endpoint."""
    b1, b2 = parse_weights(b1), parse_weights(b2)
    _check_domain(b1, d)
    _check_domain(b2, d)
    crossed, touched = [], []
    for w in all_walls(len(b1), d):
        s1, s2 = _sign(_level(b1, w)), _sign(_level(b2, w))
        if s1 * s2 < 0:
            crossed.append(w)
        elif (s1 == 0) != (s2 == 0):
            touched.append(w)
    return crossed, touched


def _sign(x):
    return (x > 0) - (x < 0)


def chamber_signature(b, d):
    b = parse_weights(b)
    return tuple(_sign(_level(b, w)) for w in all_walls(len(b), d))


def same_chamber(b1, b2, d):
    b1, b2 = parse_weights(b1), parse_weights(b2)
    for b in (b1, b2):
        if sum(b, Fraction(0)) <= d:
            raise ValueError("weight must lie strictly inside the weight domain")
        on = walls_containing(b, d)
        if on:
            raise OnWall(on)
    return chamber_signature(b1, d) == chamber_signature(b2, d)


def closure_contains(a, b, d):
    """Whether b lies in the closure of the (relatively open) cell of a."""
    sa, sb = chamber_signature(a, d), chamber_signature(b, d)
    return all(y == 0 or x == y for x, y in zip(sa, sb)) and all(
        y == 0 for x, y in zip(sa, sb) if x == 0)
