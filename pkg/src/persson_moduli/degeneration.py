"""Stable degenerations of the eight-line Persson cover read off from tilings.

Ambient components are encoded by a Picard basis, its intersection matrix
and the canonical class.  Branch curves carry a class, a weight and (when
known) a group label; double curves are the curves along which components
are glued.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import combinations

from . import gf2core as gf
from .cover import HalfIntegralDegree, persson_building_data
from .polytope import Tiling

TYPE0, TYPE_I, TYPE_II, TYPE_II_PRIME = "Type0", "TypeI", "TypeII", "TypeIIPrime"
NO_RELATION, LENGTH4, LENGTH3 = "NoRelation", "Length4", "Length3"


class NotInFamily(ValueError):
    pass


@dataclass(frozen=True)
class BranchCurve:
    cls: tuple
    weight: Fraction = Fraction(1, 2)
    label: tuple = None
    double: bool = False   # also a double curve of the degenerate ambient
    line: int = None       # index of the arrangement line it comes from


@dataclass
class AmbientComponent:
    kind: str
    basis: tuple
    intersection: tuple
    canonical: tuple
    branch: list = field(default_factory=list)

    def dot(self, u, v):
        M = self.intersection
        n = len(self.basis)
        if len(u) != n or len(v) != n:
            raise ValueError("class vector has the wrong length")
        return sum(Fraction(u[i]) * M[i][j] * Fraction(v[j]) for i in range(n) for j in range(n))

    def double_curves(self):
        return [b for b in self.branch if b.double]


def p2(branch=()):
    return AmbientComponent("P2", ("H",), ((1,),), (-3,), list(branch))


def f1(branch=()):
    # basis: fibre F and negative section s-; s+ = s- + F
    return AmbientComponent("F1", ("F", "s-"), ((0, 1), (1, -1)), (-3, -2), list(branch))


def p1xp1(branch=()):
    return AmbientComponent("P1xP1", ("F1", "F2"), ((0, 1), (1, 0)), (-2, -2), list(branch))


H = (1,)
FIB, SMINUS, SPLUS = (1, 0), (0, 1), (1, 1)
RULE1, RULE2 = (1, 0), (0, 1)


def log_canonical_class(c):
    """K + sum of weight * class over all branch curves."""
    out = [Fraction(x) for x in c.canonical]
    for b in c.branch:
        for i, x in enumerate(b.cls):
            out[i] += b.weight * x
    return tuple(out)


def pullback_canonical_square(c, group_order):
    for b in c.branch:
        if len(b.cls) != len(c.basis):
            raise ValueError("class vector has the wrong length")
    L = log_canonical_class(c)
    v = group_order * c.dot(L, L)
    return v.numerator if v.denominator == 1 else v


def gluing_degree(c, curve):
    """(K + double curves + weighted other branch) . curve, the degree that has
    to agree on both sides of a double curve."""
    out = [Fraction(x) for x in c.canonical]
    for b in c.branch:
        w = 1 if b.double else b.weight
        for i, x in enumerate(b.cls):
            out[i] += w * x
    return c.dot(out, curve.cls)


# invariants of covers of the components --------------------------------------


def _h0(c, D):
    """h^0 of a line bundle on P2, F1 or P1xP1."""
    if c.kind == "P2":
        k = D[0]
        return (k + 1) * (k + 2) // 2 if k >= 0 else 0
    if c.kind == "P1xP1":
        a, b = D
        return (a + 1) * (b + 1) if a >= 0 and b >= 0 else 0
    if c.kind == "F1":
        a, b = D
        if b < 0:
            return 0
        # a F + b s- = b s+ + (a - b) F, and the direct image of O(s+) is O + O(1)
        return sum(max(0, a - b + i + 1) for i in range(b + 1))
    raise ValueError(f"unknown ambient {c.kind}")


def _euler(c, D):
    """Riemann-Roch on a rational surface."""
    Dm = tuple(x - k for x, k in zip(D, c.canonical))
    v = 1 + c.dot(D, Dm) / 2
    return int(v)


def component_invariants(c, group_order=16):
    """chi(O), p_g, q and K^2 of the cover of one component, computed from
    the labelled branch curves through the eigensheaf decomposition."""
    if any(b.label is None for b in c.branch):
        raise ValueError("component has unlabelled branch curves")
    m = len(c.branch[0].label)
    chiO = pg = 0
    for chi in gf.all_vectors(m):
        L2 = [0] * len(c.basis)
        for b in c.branch:
            if gf.dot(chi, b.label):
                for i, x in enumerate(b.cls):
                    L2[i] += x
        if any(x % 2 for x in L2):
            raise HalfIntegralDegree(chi)
        L = [x // 2 for x in L2]
        chiO += _euler(c, [-x for x in L])
        pg += _h0(c, [k + x for k, x in zip(c.canonical, L)])
    q = 1 + pg - chiO
    return {"chiO": chiO, "pg": pg, "q": q, "K2": pullback_canonical_square(c, group_order)}


def singular_point_count(group_order, labels):
    """Points of the cover over a point whose local labels are ``labels``."""
    return group_order // 2 ** gf.rank(list(labels))


# classification -------------------------------------------------------------


@dataclass
class DegenerationType:
    tag: str
    components: list
    concurrency: dict = field(default_factory=dict)
    marker: dict = field(default_factory=dict)

    def kinds(self):
        return [c.kind for c in self.components]

    def to_json(self):
        out = {"tag": self.tag, "components": self.kinds(),
               "concurrency": {k: _plain(v) for k, v in self.concurrency.items()}}
        if self.marker:
            out["marker"] = self.marker
        return out


def _plain(v):
    return [_plain(x) for x in v] if isinstance(v, (tuple, list)) else v


def _label_sum(labels):
    out = gf.zero(len(labels[0]))
    for g in labels:
        out = gf.add(out, g)
    return out


def _line_with_label(labels, g):
    return next(i for i, h in labels.items() if h == g)


def classify_tiling(t, data=None):
    """Degeneration type of a tiling of the half-weighted b-cut of Delta(3, 8).

    ``data`` supplies branch labels (the Persson datum by default) so that
    components carry labelled branch curves.
    """
    if (t.d, t.n) != (3, 8):
        raise NotInFamily("only tilings of Delta(3, 8) are classified")
    data = data or persson_building_data()
    labels = {ln.line: ln.label for ln in data.branch.lines}
    every = set(range(1, 9))
    cs = [sorted(p.constraints) for p in t.pieces]

    if len(cs) == 1 and not cs[0]:
        comp = p2([BranchCurve(H, label=labels[i], line=i) for i in sorted(every)])
        return DegenerationType(TYPE0, [comp])

    if len(cs) == 2:
        small = [p for p in cs if len(p) == 1 and len(p[0].I) == 3 and p[0].k == 1]
        big = [p for p in cs if len(p) == 1 and len(p[0].I) == 5 and p[0].k == 2]
        if len(small) != 1 or len(big) != 1 or set(small[0][0].I) | set(big[0][0].I) != every \
                or set(small[0][0].I) & set(big[0][0].I):
            raise NotInFamily("two-piece tiling outside the classified family")
        I = small[0][0].I
        five = big[0][0].I
        gj = _label_sum([labels[i] for i in I])
        j = _line_with_label(labels, gj)
        y1 = p2([BranchCurve(H, label=labels[i], line=i) for i in five]
                + [BranchCurve(H, label=gj, double=True)])
        y2 = f1([BranchCurve(SPLUS, label=labels[i], line=i) for i in I]
                + [BranchCurve(FIB, label=labels[i], line=i) for i in five]
                + [BranchCurve(SMINUS, label=gj, double=True)])
        order = {id(p): k for k, p in enumerate(cs)}
        return DegenerationType(TYPE_I, [y1, y2], {"three_set": I, "five_set": five, "joined_line": j,
                                                   "pieces": [order[id(small[0])], order[id(big[0])]]})

    if len(cs) == 3:
        outer = [p for p in cs if len(p) == 1 and len(p[0].I) == 3 and p[0].k == 1]
        middle = [p for p in cs if len(p) == 2 and all(len(c.I) == 5 and c.k == 2 for c in p)]
        if len(outer) != 2 or len(middle) != 1:
            raise NotInFamily("three-piece tiling outside the classified family")
        I, J = sorted(o[0].I for o in outer)
        comps = {frozenset(every - set(c.I)) for c in middle[0]}
        if set(I) & set(J) or comps != {frozenset(I), frozenset(J)}:
            raise NotInFamily("three-piece tiling outside the classified family")
        hI = _label_sum([labels[i] for i in I])
        hJ = _label_sum([labels[i] for i in J])
        pair = tuple(sorted(every - set(I) - set(J)))

        def outer_component(S, h_own):
            # lines of S coincide in the double curve; the rest stay lines
            return p2([BranchCurve(H, label=labels[i], line=i) for i in sorted(every - set(S))]
                      + [BranchCurve(H, label=h_own, double=True)])

        y1 = outer_component(I, hI)
        y3 = outer_component(J, hJ)
        # the pair lines through both centres are contracted; the exceptional
        # curves become adjacent rulings, and lines of I cross the one over
        # the centre of J
        y2 = p1xp1([BranchCurve(RULE2, label=labels[i], line=i) for i in I]
                   + [BranchCurve(RULE1, label=labels[i], line=i) for i in J]
                   + [BranchCurve(RULE1, label=hJ, double=True),
                      BranchCurve(RULE2, label=hI, double=True)])
        return DegenerationType(TYPE_II, [y1, y2, y3], {"three_sets": (I, J), "double_pair": pair,
                                                          "joined_labels": (gf.bitstring(hI), gf.bitstring(hJ))})

    raise NotInFamily("tiling outside the classified family")


def type_ii_prime(dt):
    """Type II with the marker recording the perturbed weight used to make
    the ambient Q-Gorenstein."""
    if dt.tag != TYPE_II:
        raise ValueError("only Type II degenerations have a primed variant")
    return DegenerationType(TYPE_II_PRIME, dt.components, dt.concurrency,
                            {"weight": ["1/2"] * 7 + ["1/2-eps"]})


# component profiles ---------------------------------------------------------


def _sing(kind, count):
    return {"type": kind, "count": count}


def _cover_kind(inv):
    if inv["K2"] > 0:
        return "general type"
    if inv["pg"] == 1 and inv["q"] == 0:
        return "K3"
    if inv["pg"] == 1 and inv["q"] == 2:
        return "abelian"
    if inv["pg"] >= 2:
        return "elliptic"
    return "unclassified"


def _crossings(c, group_order, skip=()):
    """A1 points over crossings of a double curve with a branch curve of the
    same label."""
    n = 0
    for d in c.double_curves():
        for b in c.branch:
            if not b.double and b.line not in skip and b.label == d.label:
                n += int(c.dot(b.cls, d.cls)) * singular_point_count(group_order, [b.label, d.label])
    return n


def _triple_point(labels, group_order):
    # two lines and a double curve through one point: A3 if one line shares
    # the curve's label, otherwise the local cover is a quadric cone
    kind = "A3" if gf.rank(list(labels)) == 2 else "A1"
    return kind, singular_point_count(group_order, labels)


def component_cover_profile(dt, generic=True, group_order=16):
    """Per-component description of the generic cover: invariants from the
    eigensheaf computation, Hodge number h11 of the minimal resolution from
    Noether's formula, and the rational double points over special points."""
    if not generic:
        raise ValueError("only generic degenerations are described")
    if dt.tag not in (TYPE0, TYPE_I, TYPE_II, TYPE_II_PRIME):
        raise ValueError(f"unknown degeneration type {dt.tag}")
    pair = dt.concurrency.get("double_pair", ())
    out = []
    for c in dt.components:
        inv = component_invariants(c, group_order)
        sings = {}
        a1 = _crossings(c, group_order, skip=pair if c.kind == "P2" else ())
        if a1:
            sings["A1"] = a1
        if pair and c.kind == "P2":
            by_line = {b.line: b.label for b in c.branch if b.line is not None}
            kind, n = _triple_point([by_line[i] for i in pair] + [c.double_curves()[0].label], group_order)
            sings[kind] = sings.get(kind, 0) + n
        # Noether on the minimal resolution; rational double points are crepant
        e = 12 * inv["chiO"] - inv["K2"]
        h11 = e - 2 + 4 * inv["q"] - 2 * inv["pg"]
        out.append({"ambient": c.kind, "coverKind": _cover_kind(inv), "chiO": inv["chiO"], "pg": inv["pg"],
                    "q": inv["q"], "h11": h11, "K2": inv["K2"],
                    "singularities": [_sing(k, v) for k, v in sorted(sings.items())],
                    "glue": ["elliptic curve"] * len(c.double_curves())})
    return out


def gluing_check(dt):
    """For each double curve, the log canonical degree on both sides agrees."""
    pairs = []
    if dt.tag == TYPE_I:
        y1, y2 = dt.components
        pairs.append((gluing_degree(y1, y1.double_curves()[0]), gluing_degree(y2, y2.double_curves()[0])))
    elif dt.tag in (TYPE_II, TYPE_II_PRIME):
        y1, y2, y3 = dt.components
        c1, c2 = y2.double_curves()
        pairs.append((gluing_degree(y1, y1.double_curves()[0]), gluing_degree(y2, c1)))
        pairs.append((gluing_degree(y3, y3.double_curves()[0]), gluing_degree(y2, c2)))
    return pairs


# local singularity data -----------------------------------------------------


@dataclass
class LocalSingularityDatum:
    labels: tuple
    relation_class: str
    boundary: bool
    table_labels: list
    status: str

    def to_json(self):
        return {"labels": [gf.bitstring(g) for g in self.labels], "relation": self.relation_class,
                "boundary": self.boundary, "tableLabels": self.table_labels, "status": self.status}


_TABLE = None


def singularity_table():
    global _TABLE
    if _TABLE is None:
        text = resources.files("persson_moduli").joinpath("data/singularity_table.json").read_text()
        _TABLE = json.loads(text)["cells"]
    return _TABLE


def relation_class(labels):
    labels = [gf.vec(g) for g in labels]
    m = len(labels[0])
    zero = gf.zero(m)
    if len(labels) >= 4 and any(_label_sum(list(s)) == zero for s in combinations(labels, 4)):
        return LENGTH4
    if len(labels) >= 3 and any(_label_sum(list(s)) == zero for s in combinations(labels, 3)):
        return LENGTH3
    return NO_RELATION


def local_singularity_class(labels, on_double_locus=False, degeneration=TYPE0, locus=None):
    """Relation class of the labels at a point and the candidate table labels.

    ``locus`` is "point", "double" or "triple" (the point where three
    components meet); by default it follows ``on_double_locus``.
    """
    labels = tuple(gf.vec(g) for g in labels)
    if not 2 <= len(labels) <= 4:
        raise ValueError("total multiplicity must be between 2 and 4")
    rel = relation_class(labels)
    locus = locus or ("double" if on_double_locus else "point")
    for cell in singularity_table():
        if cell["degeneration"] == degeneration and cell["locus"] == locus \
                and cell["relation"] in ("*", rel):
            return LocalSingularityDatum(labels, rel, on_double_locus, list(cell["labels"]), cell["status"])
    return LocalSingularityDatum(labels, rel, on_double_locus, [], "unresolved")


def tiling_from_constraint_sets(sets, d=3, n=8):
    from .polytope import polytope_from_constraints
    return Tiling(d, n, tuple(polytope_from_constraints(d, n, s) for s in sets))
