"""Building data of abelian (Z/2)^m covers of the projective plane.

A cover is given by labelled branch lines.  Over P2 the Picard group has
no torsion, so each eigensheaf is determined by its degree:
``2 deg L_chi = sum of deg D_g over labels with chi(g) = -1``.
"""

from dataclasses import dataclass, field
from itertools import product

from . import gf2core as gf


class HalfIntegralDegree(ValueError):
    def __init__(self, chi):
        super().__init__(f"odd branch degree for character {gf.bitstring(chi)}")
        self.chi = chi


@dataclass(frozen=True)
class BranchLine:
    label: tuple
    line: int
    deg: int = 1


@dataclass(frozen=True)
class BranchData:
    m: int
    lines: tuple

    def __post_init__(self):
        ids = [ln.line for ln in self.lines]
        if len(set(ids)) != len(ids):
            raise ValueError("line ids must be distinct")
        for ln in self.lines:
            if len(ln.label) != self.m:
                raise ValueError("label length does not match the group rank")
            if not any(ln.label):
                raise ValueError("branch labels must be nonzero")

    @classmethod
    def from_labels(cls, labels, line_ids=None):
        labels = [gf.vec(g) for g in labels]
        if not labels:
            raise ValueError("no labels")
        ids = line_ids or range(1, len(labels) + 1)
        return cls(len(labels[0]), tuple(BranchLine(g, i) for g, i in zip(labels, ids)))

    def branch_degree(self, chi):
        return sum(ln.deg for ln in self.lines if gf.dot(chi, ln.label))

    def lines_for(self, chi):
        return [ln for ln in self.lines if gf.dot(chi, ln.label)]


@dataclass(frozen=True)
class BuildingData:
    branch: BranchData
    bundles: dict = field(hash=False)

    @property
    def m(self):
        return self.branch.m

    def degree_multiset(self):
        return sorted(self.bundles.values(), reverse=True)

    def to_json(self):
        return {
            "m": self.m,
            "lines": [{"label": gf.bitstring(ln.label), "line": ln.line, "deg": ln.deg}
                      for ln in self.branch.lines],
            "bundles": {gf.bitstring(chi): d for chi, d in sorted(self.bundles.items())},
        }

    @classmethod
    def from_json(cls, obj):
        branch = BranchData(obj["m"], tuple(BranchLine(gf.vec(x["label"]), x["line"], x.get("deg", 1))
                                            for x in obj["lines"]))
        data = solve_line_bundles(branch)
        given = {gf.vec(k): v for k, v in obj.get("bundles", {}).items()}
        if given and given != data.bundles:
            raise ValueError("bundle degrees disagree with the branch data")
        return data


def solve_line_bundles(branch):
    bundles = {}
    for chi in gf.all_vectors(branch.m):
        total = branch.branch_degree(chi)
        if total % 2:
            raise HalfIntegralDegree(chi)
        bundles[chi] = total // 2
    return BuildingData(branch, bundles)


def persson_building_data(line_ids=None, labeling=None):
    """The (Z/2)^4 datum on eight lines labelled by {1} x F2^3.

    ``labeling`` maps line ids to labels; by default line i gets
    (1, binary digits of i - 1).
    """
    line_ids = list(line_ids) if line_ids is not None else list(range(1, 9))
    if len(line_ids) != 8 or len(set(line_ids)) != 8:
        raise ValueError("need eight distinct line ids")
    if labeling is None:
        labeling = dict(zip(line_ids, gf.persson_labels()))
    labels = [gf.vec(labeling[i]) for i in line_ids]
    if sorted(labels) != sorted(gf.persson_labels()):
        raise ValueError("labeling must be a bijection onto {1} x F2^3")
    return solve_line_bundles(BranchData.from_labels(labels, line_ids))


# the explicit (Z/2)^5 lift used for the etale double cover
ZL_LABELS = ["10000", "10011", "10100", "10110", "11001", "11010", "11101", "11111"]


def zl_building_data():
    return solve_line_bundles(BranchData.from_labels(ZL_LABELS))


def degree_three_partition(data):
    """Pairs of lines left out by each degree-3 character of a lifted datum."""
    pairs = []
    for chi, d in sorted(data.bundles.items()):
        if d == 3:
            fixed = [ln.label[:-1] for ln in data.branch.lines if not gf.dot(chi, ln.label)]
            pairs.append(tuple(sorted(fixed)))
    return sorted(pairs)


def _lift_is_valid(data, fifth):
    lines = tuple(gf_line(ln, fifth[ln.label]) for ln in data.branch.lines)
    try:
        lifted = solve_line_bundles(BranchData(5, lines))
    except HalfIntegralDegree:
        return None
    return lifted if lifted.degree_multiset().count(3) == 4 else None


def _base_lift(data, part):
    # first one-per-pair choice (in mask order) that solves consistently
    for s in range(16):
        fifth = {}
        for i, (a, b) in enumerate(part.pairs):
            fifth[a], fifth[b] = (1, 0) if (s >> i) & 1 else (0, 1)
        if _lift_is_valid(data, fifth):
            return fifth
    raise AssertionError("no valid lift for this partition")


def etale_lift(data, part, swap_mask):
    """Append a fifth coordinate to the labels of a Persson datum.

    The valid fifth coordinates for a given pair partition form a coset of
    the affine functions on F2^3: a fixed base choice plus
    ``c0 + c1 x1 + c2 x2 + c3 x3`` where ``c_i`` is bit i of ``swap_mask``
    and x is the label without its leading 1.
    """
    if data.m != 4:
        raise ValueError("expected a (Z/2)^4 datum")
    bits = [(swap_mask >> i) & 1 for i in range(4)] if isinstance(swap_mask, int) else list(swap_mask)
    base = _base_lift(data, part)
    fifth = {g: base[g] ^ bits[0] ^ (bits[1] & g[1]) ^ (bits[2] & g[2]) ^ (bits[3] & g[3])
             for g in base}
    lifted = _lift_is_valid(data, fifth)
    assert lifted is not None, "lift without four degree-3 bundles"
    degs = lifted.degree_multiset()
    assert degs.count(1) == 4
    assert degree_three_partition(lifted) == sorted(part.pairs)
    return lifted


def gf_line(ln, bit):
    return BranchLine(ln.label + (bit,), ln.line, ln.deg)


def restrict_to_first(data, m):
    """Drop trailing label coordinates (the quotient by the last factors)."""
    lines = tuple(BranchLine(ln.label[:m], ln.line, ln.deg) for ln in data.branch.lines
                  if any(ln.label[:m]))
    return solve_line_bundles(BranchData(m, lines))


def is_connected_cover(branch):
    labels = [ln.label for ln in branch.lines if ln.deg > 0]
    if branch.m == 0:
        return True
    return gf.rank(labels) == branch.m if labels else False


# intermediate quotients ------------------------------------------------------

CAMPEDELLI = "Campedelli"
ENRIQUES = "EnriquesD16"
DEL_PEZZO_2 = "DelPezzo2"
HORIKAWA = "HorikawaSpecial"
K3_DOUBLE = "K3double"
PLANE_112 = "WeightedPlane112"
PERSSON = "Persson"
ZL = "ZL"
OTHER = "Other"


@dataclass(frozen=True)
class SurfaceTag:
    kind: str
    note: str = ""


def quotient_data(data, sub):
    """Building data of the intermediate cover with character group ``sub``.

    A line survives when some character of ``sub`` is -1 on its label; its
    new label records the values of the basis characters.
    """
    basis = list(sub.basis)
    lines = []
    for ln in data.branch.lines:
        label = tuple(gf.dot(chi, ln.label) for chi in basis)
        if any(label):
            lines.append(BranchLine(label, ln.line, ln.deg))
    return solve_line_bundles(BranchData(len(basis), tuple(lines)))


def classify_intermediate(data, sub):
    if not isinstance(sub, gf.Subgroup):
        sub = gf.Subgroup.from_generators(data.m, [gf.vec(c) for c in sub])
    if sub.m != data.m:
        raise ValueError("subgroup lives in a different character group")
    q = quotient_data(data, sub)
    n = sum(ln.deg for ln in q.branch.lines)
    r = sub.rank
    kind = OTHER
    if r == 1:
        deg = data.bundles[sub.basis[0]]
        kind = {4: HORIKAWA, 3: K3_DOUBLE, 2: DEL_PEZZO_2, 1: PLANE_112}.get(deg, OTHER)
    elif r == 2 and n == 6 and sorted(q.bundles.values()) == [0, 2, 2, 2]:
        kind = ENRIQUES
    elif r == 3 and n == 7 and sorted(q.bundles.values()) == [0] + [2] * 7:
        kind = CAMPEDELLI
    note = ""
    if r == 1 and data.m == 5 and kind == DEL_PEZZO_2:
        note = "inherited" if sub.basis[0][-1] == 0 else "new"
    return SurfaceTag(kind, note), q


def intermediate_census(data, ranks=(1, 2, 3)):
    """Counts of tagged intermediate surfaces over all character subgroups.

    For five-coordinate data the degree-2 double planes are split by
    whether the character is pulled back from the first four coordinates.
    """
    counts = {}
    for r in ranks:
        for sub in gf.enumerate_subgroups(data.m, r):
            tag, _ = classify_intermediate(data, sub)
            if tag.kind == OTHER:
                continue
            counts[tag.kind] = counts.get(tag.kind, 0) + 1
            if tag.note:
                key = f"{tag.kind}:{tag.note}"
                counts[key] = counts.get(key, 0) + 1
    return counts


def all_lifts(data):
    """Every (partition, mask) lift of a Persson datum."""
    labels = [ln.label for ln in data.branch.lines]
    return [(part, mask, etale_lift(data, part, mask))
            for part in gf.partitions_into_parallel_pairs(labels)
            for mask in range(16)]


def fundamental_relation_holds(data):
    """deg L_a + deg L_b = deg L_(a+b) + sum of deg D_g with a(g) = b(g) = -1."""
    for a, b in product(gf.all_vectors(data.m), repeat=2):
        both = sum(ln.deg for ln in data.branch.lines if gf.dot(a, ln.label) and gf.dot(b, ln.label))
        if data.bundles[a] + data.bundles[b] != data.bundles[gf.add(a, b)] + both:
            return False
    return True
