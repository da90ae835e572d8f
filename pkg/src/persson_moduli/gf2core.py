"""Linear algebra over F2 and the small finite groups built from it.

Group elements and characters are tuples of 0/1 ints, first coordinate
first.  Characters pair with elements by the dot product mod 2.  Matrices
act on group elements as column vectors, so a matrix ``A`` fixes the
character ``chi`` (as a functional) when ``chi . A == chi``.

Everything here is brute force; the groups involved have at most a few
thousand elements.
"""

from dataclasses import dataclass
from itertools import combinations, permutations, product


class LabelSetError(ValueError):
    pass


def vec(bits):
    """Parse ``"1010"`` or any 0/1 iterable into a tuple."""
    if isinstance(bits, str):
        return tuple(int(c) for c in bits)
    return tuple(int(b) & 1 for b in bits)


def bitstring(v):
    return "".join(str(b) for b in v)


def add(a, b):
    if len(a) != len(b):
        raise ValueError("length mismatch")
    return tuple(x ^ y for x, y in zip(a, b))


def dot(a, b):
    if len(a) != len(b):
        raise ValueError("length mismatch")
    return sum(x & y for x, y in zip(a, b)) & 1


def pairing(chi, g):
    """Value of the character ``chi`` on ``g``: +1 or -1."""
    return -1 if dot(chi, g) else 1


def zero(m):
    return (0,) * m


def all_vectors(m):
    return [tuple(v) for v in product((0, 1), repeat=m)]


def nonzero_vectors(m):
    return [v for v in all_vectors(m) if any(v)]


def rref(rows):
    """Reduced row echelon form over F2; zero rows dropped."""
    rows = [list(r) for r in rows]
    if not rows:
        return []
    m = len(rows[0])
    out = []
    col = 0
    for col in range(m):
        piv = next((r for r in rows if r[col]), None)
        if piv is None:
            continue
        rows.remove(piv)
        for r in rows + out:
            if r[col]:
                for j in range(m):
                    r[j] ^= piv[j]
        out.append(piv)
    return sorted((tuple(r) for r in out), reverse=True)


def rank(rows):
    return len(rref(rows))


def span(basis, m=None):
    if not basis:
        return {zero(m or 0)}
    m = len(basis[0])
    out = set()
    for coeffs in product((0, 1), repeat=len(basis)):
        v = zero(m)
        for c, b in zip(coeffs, basis):
            if c:
                v = add(v, b)
        out.add(v)
    return out


@dataclass(frozen=True)
class Subgroup:
    """A subspace of F2^m, stored by its reduced echelon basis."""

    m: int
    basis: tuple

    @classmethod
    def from_generators(cls, m, gens):
        return cls(m, tuple(rref(gens)))

    @property
    def rank(self):
        return len(self.basis)

    def elements(self):
        return span(list(self.basis), self.m)

    def __contains__(self, v):
        return rank(list(self.basis) + [tuple(v)]) == self.rank


def gaussian_binomial(m, r):
    num = den = 1
    for i in range(r):
        num *= 2 ** (m - i) - 1
        den *= 2 ** (i + 1) - 1
    return num // den


def enumerate_subgroups(m, rank_, exclude=None):
    """All subspaces of F2^m of the given rank, each once.

    With ``exclude`` set, subspaces containing that vector are dropped.
    """
    if not 0 <= rank_ <= m:
        raise ValueError("rank out of range")
    seen = set()
    out = []
    vectors = nonzero_vectors(m)
    for gens in combinations(vectors, rank_):
        basis = tuple(rref(gens))
        if len(basis) != rank_ or basis in seen:
            continue
        seen.add(basis)
        sub = Subgroup(m, basis)
        if exclude is not None and tuple(exclude) in sub:
            continue
        out.append(sub)
    out.sort(key=lambda s: s.basis)
    return out


# matrices -----------------------------------------------------------------


def mat_vec(A, v):
    return tuple(sum(a & x for a, x in zip(row, v)) & 1 for row in A)


def mat_mul(A, B):
    cols = list(zip(*B))
    return tuple(tuple(sum(a & b for a, b in zip(row, c)) & 1 for c in cols) for row in A)


def identity(m):
    return tuple(tuple(int(i == j) for j in range(m)) for i in range(m))


def is_invertible(A):
    return rank(A) == len(A)


def row_times(chi, A):
    return tuple(sum(chi[i] & A[i][j] for i in range(len(chi))) & 1 for j in range(len(A)))


def induced_permutation(A, labels):
    """The permutation of ``labels`` (a sorted tuple) induced by ``A``, or None."""
    index = {g: i for i, g in enumerate(labels)}
    perm = []
    for g in labels:
        j = index.get(mat_vec(A, g))
        if j is None:
            return None
        perm.append(j)
    return tuple(perm)


@dataclass
class MatrixGroup:
    """A finite matrix group listed element by element."""

    elements: list
    generators: list

    @property
    def order(self):
        return len(self.elements)


def _generators(elements, m):
    """A small generating set picked greedily from a listed group."""
    gens = []
    closure = {identity(m)}
    for g in elements:
        if g in closure:
            continue
        gens.append(g)
        frontier = list(closure)
        closure = set(closure)
        while frontier:
            nxt = []
            for x in frontier:
                for h in gens:
                    y = mat_mul(x, h)
                    if y not in closure:
                        closure.add(y)
                        nxt.append(y)
            frontier = nxt
        if len(closure) == len(elements):
            break
    return gens


def stabilizer_of_label_set(labels, fixed_character=None):
    """Matrices in GL(F2, m) fixing ``fixed_character`` and the label set.

    ``fixed_character`` defaults to (1, 0, ..., 0).  Candidates are all
    matrices whose rows realise that functional, so the search is over
    2^(m(m-1)) matrices.
    """
    labels = sorted({vec(g) for g in labels})
    if not labels:
        raise LabelSetError("empty label set")
    m = len(labels[0])
    chi0 = vec(fixed_character) if fixed_character is not None else (1,) + (0,) * (m - 1)
    if any(dot(chi0, g) != 1 for g in labels):
        raise LabelSetError("every label must pair to -1 with the fixed character")
    if chi0 != (1,) + (0,) * (m - 1):
        raise NotImplementedError("only the first coordinate functional is supported")
    label_set = set(labels)
    elements = []
    first = chi0
    for rest in product((0, 1), repeat=m * (m - 1)):
        A = (first,) + tuple(tuple(rest[i * m:(i + 1) * m]) for i in range(m - 1))
        if not all(mat_vec(A, g) in label_set for g in labels):
            continue
        if is_invertible(A):
            elements.append(A)
    return MatrixGroup(elements, _generators(elements, m))


def persson_labels():
    """The eight labels {1} x F2^3."""
    return [(1,) + v for v in all_vectors(3)]


# structure checks ---------------------------------------------------------


def _is_elementary_abelian_2(elems):
    for a in elems:
        if mat_mul(a, a) != identity(len(a)):
            return False
        for b in elems:
            if mat_mul(a, b) != mat_mul(b, a):
                return False
    return True


def _inverse(A):
    I = identity(len(A))
    B = A
    while mat_mul(B, A) != I:
        B = mat_mul(B, A)
    return B


def _is_normal(sub, generators):
    # conjugation by a generating set is enough
    subset = set(sub)
    for g in generators:
        gi = _inverse(g)
        for n in sub:
            if mat_mul(mat_mul(g, n), gi) not in subset:
                return False
    return True


def verify_affine_structure(group, labels):
    """Check that ``group`` acts on ``labels`` as the full affine group.

    Labels are (1, x) with x in F2^k; a matrix then acts as x -> Ax + b.
    Returns a dict of the verified facts; ``ok`` is their conjunction.
    """
    labels = tuple(sorted(vec(g) for g in labels))
    m = len(labels[0])
    k = m - 1
    perms = {induced_permutation(A, labels) for A in group.elements}
    faithful = len(perms) == group.order
    orbit = {mat_vec(A, labels[0]) for A in group.elements}
    transitive = orbit == set(labels)
    translations = [A for A in group.elements
                    if all(A[i + 1][j + 1] == int(i == j) for i in range(k) for j in range(k))]
    linear_parts = {tuple(tuple(A[i + 1][j + 1] for j in range(k)) for i in range(k))
                    for A in group.elements}
    gl_order = 1
    for i in range(k):
        gl_order *= 2 ** k - 2 ** i
    facts = {
        "faithful": faithful,
        "transitive": transitive,
        "translations": len(translations) == 2 ** k and _is_elementary_abelian_2(translations),
        "translations_normal": _is_normal(translations, group.generators),
        "quotient_is_gl": len(linear_parts) == gl_order and all(is_invertible(L) for L in linear_parts),
        "order": group.order == 2 ** k * gl_order,
    }
    facts["ok"] = all(facts.values())
    return facts


# pair partitions ----------------------------------------------------------


@dataclass(frozen=True)
class PairPartition:
    """Four disjoint pairs {g, g + v} covering an affine 3-space of labels."""

    pairs: tuple
    difference: tuple

    def block_of(self, g):
        return next(i for i, p in enumerate(self.pairs) if g in p)


def _check_affine_space(labels):
    labels = sorted({vec(g) for g in labels})
    if len(labels) != 8:
        raise LabelSetError("need exactly eight distinct labels")
    base = labels[0]
    diffs = [add(g, base) for g in labels]
    if rank(diffs) != 3 or len(span(rref(diffs))) != 8:
        raise LabelSetError("labels do not form an affine 3-space")
    if set(diffs) != span(rref(diffs)):
        raise LabelSetError("labels do not form an affine 3-space")
    return labels, [d for d in sorted(span(rref(diffs))) if any(d)]


def partition_for_difference(labels, v):
    labels = sorted({vec(g) for g in labels})
    v = vec(v)
    pairs = set()
    for g in labels:
        h = add(g, v)
        if h not in labels:
            raise LabelSetError("difference vector does not preserve the label set")
        pairs.add(tuple(sorted((g, h))))
    return PairPartition(tuple(sorted(pairs)), v)


def partitions_into_parallel_pairs(labels):
    labels, diffs = _check_affine_space(labels)
    return [partition_for_difference(labels, v) for v in diffs]


def _block_action(A, part):
    return tuple(part.block_of(mat_vec(A, p[0])) for p in part.pairs)


def _preserves(A, part):
    blocks = [frozenset(p) for p in part.pairs]
    return all(frozenset(mat_vec(A, g) for g in b) in blocks for b in blocks)


def stabilizer_of_partition(part, group):
    """Elements of ``group`` permuting the pairs of ``part`` among themselves.

    Verifies that the kernel of the action on the four pairs is an
    elementary abelian normal subgroup of order 8 and the image is all of S4.
    """
    elems = [A for A in group.elements if _preserves(A, part)]
    kernel = [A for A in elems if _block_action(A, part) == (0, 1, 2, 3)]
    image = {_block_action(A, part) for A in elems}
    facts = {
        "kernel_order_8": len(kernel) == 8,
        "kernel_elementary_abelian": _is_elementary_abelian_2(kernel),
        "kernel_normal": _is_normal(kernel, _generators(elems, len(elems[0]))),
        "image_is_s4": image == set(permutations(range(4))),
    }
    facts["ok"] = all(facts.values())
    tag = "(Z/2)^3 : S4" if facts["ok"] else "unverified"
    return {"order": len(elems), "tag": tag, "facts": facts, "elements": elems}


def partition_orbits(group, partitions):
    """Orbits of ``group`` on a list of pair partitions."""
    key = {frozenset(frozenset(p) for p in part.pairs): i for i, part in enumerate(partitions)}
    seen, orbits = set(), []
    for i, part in enumerate(partitions):
        if i in seen:
            continue
        orbit = set()
        for A in group.elements:
            img = frozenset(frozenset(mat_vec(A, g) for g in p) for p in part.pairs)
            orbit.add(key[img])
        seen |= orbit
        orbits.append(sorted(orbit))
    return orbits


# label lifts and induced permutations --------------------------------------


def label_lift_count(labels):
    """Number of ways to append a 5th bit so that exactly four characters
    of the lifted data have line bundle degree 3."""
    from .cover import BranchData, HalfIntegralDegree, solve_line_bundles

    labels = sorted(vec(g) for g in labels)
    count = 0
    for bits in product((0, 1), repeat=len(labels)):
        lifted = [g + (b,) for g, b in zip(labels, bits)]
        try:
            data = solve_line_bundles(BranchData.from_labels(lifted))
        except HalfIntegralDegree:
            continue
        if sum(1 for d in data.bundles.values() if d == 3) == 4:
            count += 1
    return count


def is_induced_by_stabilizer(perm, labels=None, group=None):
    """Whether a permutation of the labels comes from the label stabilizer.

    ``perm`` maps each label to its image (a dict), or is a tuple of indices
    into the sorted label list.
    """
    labels = tuple(sorted(vec(g) for g in (labels or persson_labels())))
    if isinstance(perm, dict):
        index = {g: i for i, g in enumerate(labels)}
        perm = tuple(index[vec(perm.get(g, g))] for g in labels)
    group = group or stabilizer_of_label_set(labels)
    return tuple(perm) in _induced(group, labels)


_INDUCED_CACHE = {}


def _induced(group, labels):
    key = (id(group), labels)
    if key not in _INDUCED_CACHE:
        _INDUCED_CACHE[key] = {induced_permutation(A, labels) for A in group.elements}
    return _INDUCED_CACHE[key]


def swap_permutation(part, which, labels):
    """Permutation of sorted ``labels`` swapping the pairs listed in ``which``."""
    labels = tuple(sorted(labels))
    index = {g: i for i, g in enumerate(labels)}
    perm = list(range(len(labels)))
    for i in which:
        a, b = part.pairs[i]
        perm[index[a]], perm[index[b]] = index[b], index[a]
    return tuple(perm)


def torelli_index(labels=None, part=None, group=None):
    """Index of the stabilizer-induced swaps inside the group of all pair swaps.

    The swaps s_1..s_4 exchange the two labels of each pair of ``part``;
    they generate (Z/2)^4 and the induced ones form a subgroup.
    """
    labels = tuple(sorted(vec(g) for g in (labels or persson_labels())))
    group = group or stabilizer_of_label_set(labels)
    if part is None:
        part = partition_for_difference(labels, (0, 1, 0, 0))
    induced = _induced(group, labels)
    swaps = [swap_permutation(part, which, labels)
             for r in range(5) for which in combinations(range(4), r)]
    hit = [s for s in swaps if s in induced]
    return len(swaps) // len(hit)
