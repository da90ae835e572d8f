"""Integral quadratic lattices given by Gram matrices.

Signatures come from exact congruence diagonalisation over the rationals,
determinants from fraction-free elimination, and discriminant groups from
the Smith normal form.
"""

import re
from dataclasses import dataclass
from fractions import Fraction

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

# Cartan matrix of E8 in the Bourbaki numbering: chain 1-3-4-5-6-7-8, node 2 on 4
_E8_EDGES = [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)]
E8_GRAM = tuple(
    tuple(2 if i == j else (-1 if (i + 1, j + 1) in _E8_EDGES or (j + 1, i + 1) in _E8_EDGES else 0)
          for j in range(8))
    for i in range(8)
)
U_GRAM = ((0, 1), (1, 0))
A1_GRAM = ((2,),)
BLOCKS = {"U": U_GRAM, "E8": E8_GRAM, "A1": A1_GRAM}


class DegenerateLattice(ValueError):
    pass


class NotAnInvolution(ValueError):
    pass


@dataclass(frozen=True)
class IntegralLattice:
    gram: tuple

    def __post_init__(self):
        g = self.gram
        if any(len(row) != len(g) for row in g):
            raise ValueError("Gram matrix must be square")
        if any(g[i][j] != g[j][i] for i in range(len(g)) for j in range(len(g))):
            raise ValueError("Gram matrix must be symmetric")

    @property
    def rank(self):
        return len(self.gram)

    def to_json(self):
        return [list(r) for r in self.gram]

    @classmethod
    def from_json(cls, rows):
        return cls(tuple(tuple(int(x) for x in r) for r in rows))


@dataclass(frozen=True)
class LatticeInvariants:
    rank: int
    signature: tuple
    even: bool
    det: int
    discriminant: tuple

    def to_json(self):
        return {"rank": self.rank, "signature": list(self.signature),
                "parity": "even" if self.even else "odd", "det": self.det,
                "discriminant": list(self.discriminant)}


def direct_sum(*grams):
    n = sum(len(g) for g in grams)
    out = [[0] * n for _ in range(n)]
    off = 0
    for g in grams:
        for i, row in enumerate(g):
            for j, v in enumerate(row):
                out[off + i][off + j] = v
        off += len(g)
    return tuple(tuple(r) for r in out)


def scaled(g, k):
    return tuple(tuple(k * v for v in row) for row in g)


_TERM = re.compile(r"^(U|E8|A1)(?:\((-?\d+)\))?(?:\^(\d+))?$")


def parse_expr(expr):
    """``"U^7 + E8(-1)^2"`` -> [("U", 1, 7), ("E8", -1, 2)]."""
    terms = []
    for raw in expr.replace(" ", "").split("+"):
        if not raw:
            continue
        m = _TERM.match(raw)
        if not m:
            raise ValueError(f"unknown lattice block {raw!r}")
        terms.append((m.group(1), int(m.group(2) or 1), int(m.group(3) or 1)))
    return terms


def format_expr(terms):
    parts = []
    for name, k, c in terms:
        s = name if k == 1 else f"{name}({k})"
        parts.append(s if c == 1 else f"{s}^{c}")
    return " + ".join(parts)


def build(expr):
    terms = parse_expr(expr) if isinstance(expr, str) else list(expr)
    grams = []
    for name, k, count in terms:
        if name not in BLOCKS:
            raise ValueError(f"unknown lattice block {name!r}")
        grams += [scaled(BLOCKS[name], k)] * count
    return IntegralLattice(direct_sum(*grams))


# invariants ----------------------------------------------------------------


def diagonalize(gram):
    """Diagonal entries of a rational congruence diagonalisation."""
    a = [[Fraction(v) for v in row] for row in gram]
    n = len(a)
    diag = []
    for k in range(n):
        if a[k][k] == 0:
            j = next((j for j in range(k + 1, n) if a[j][j] != 0), None)
            if j is not None:
                a[k], a[j] = a[j], a[k]
                for row in a:
                    row[k], row[j] = row[j], row[k]
            else:
                j = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
                if j is not None:
                    # e_k -> e_k + e_j gives diagonal entry 2 a_kj
                    for c in range(n):
                        a[k][c] += a[j][c]
                    for r in range(n):
                        a[r][k] += a[r][j]
        p = a[k][k]
        diag.append(p)
        if p == 0:
            continue
        for i in range(k + 1, n):
            f = a[i][k] / p
            if f:
                for c in range(k, n):
                    a[i][c] -= f * a[k][c]
                for r in range(k, n):
                    a[r][i] -= f * a[r][k]
    return diag


def determinant(gram):
    """Bareiss fraction-free determinant."""
    a = [list(r) for r in gram]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            j = next((j for j in range(k + 1, n) if a[j][k] != 0), None)
            if j is None:
                return 0
            a[k], a[j] = a[j], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def lattice_invariants(L):
    det = determinant(L.gram)
    if det == 0:
        raise DegenerateLattice("Gram matrix is singular")
    diag = diagonalize(L.gram)
    pos = sum(1 for x in diag if x > 0)
    neg = sum(1 for x in diag if x < 0)
    even = all(L.gram[i][i] % 2 == 0 for i in range(L.rank))
    if L.rank:
        factors = invariant_factors(Matrix(L.gram), domain=ZZ)
        disc = tuple(abs(int(f)) for f in factors if abs(int(f)) != 1)
    else:
        disc = ()
    return LatticeInvariants(L.rank, (pos, neg), even, det, disc)


def same_invariants(L1, L2):
    return lattice_invariants(L1) == lattice_invariants(L2)


def classify_even_unimodular(signature):
    p, q = signature
    if p < 1 or q < 1:
        raise ValueError("signature must be indefinite")
    if (p - q) % 8:
        raise ValueError("p - q must be divisible by 8")
    a, b = min(p, q), abs(p - q) // 8
    terms = [("U", 1, a)]
    if b:
        terms.append(("E8", 1 if p > q else -1, b))
    return format_expr(terms)


# isometries ----------------------------------------------------------------


def _matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))]
            for i in range(len(A))]


def _transpose(A):
    return [list(r) for r in zip(*A)]


def is_isometry(L, M):
    return _matmul(_matmul(_transpose(M), [list(r) for r in L.gram]), M) == [list(r) for r in L.gram]


def integer_kernel(A):
    """Basis (as columns) of {x in Z^n : A x = 0} by unimodular column reduction."""
    a = [list(r) for r in A]
    rows = len(a)
    n = len(a[0]) if rows else 0
    U = [[int(i == j) for j in range(n)] for i in range(n)]

    def colop(j, k, q):
        # column j -= q * column k
        for r in a:
            r[j] -= q * r[k]
        for r in U:
            r[j] -= q * r[k]

    def swap(j, k):
        for r in a:
            r[j], r[k] = r[k], r[j]
        for r in U:
            r[j], r[k] = r[k], r[j]

    pc = 0
    for i in range(rows):
        if pc >= n:
            break
        while True:
            nz = [j for j in range(pc, n) if a[i][j]]
            if not nz:
                break
            j = min(nz, key=lambda c: abs(a[i][c]))
            swap(pc, j)
            done = True
            for c in range(pc + 1, n):
                if a[i][c]:
                    colop(c, pc, a[i][c] // a[i][pc])
                    if a[i][c]:
                        done = False
            if done:
                break
        if any(a[i][j] for j in range(pc, n)):
            pc += 1
    return [[U[r][c] for r in range(n)] for c in range(pc, n)]


def sublattice(L, basis):
    """Induced Gram matrix on the span of integer vectors ``basis``."""
    G = L.gram
    gram = tuple(tuple(sum(u[i] * G[i][j] * v[j] for i in range(len(u)) for j in range(len(v)) if u[i] and v[j])
                       for v in basis) for u in basis)
    return IntegralLattice(gram)


def fixed_and_antifixed(L, M):
    n = L.rank
    I = [[int(i == j) for j in range(n)] for i in range(n)]
    if _matmul(M, M) != I:
        raise NotAnInvolution("matrix does not square to the identity")
    if not is_isometry(L, M):
        raise NotAnInvolution("matrix is not an isometry")
    minus = [[M[i][j] - I[i][j] for j in range(n)] for i in range(n)]
    plus = [[M[i][j] + I[i][j] for j in range(n)] for i in range(n)]
    return sublattice(L, integer_kernel(minus)), sublattice(L, integer_kernel(plus))


def block_involution(block_sizes, swaps=(), negate=()):
    """Signed block permutation: swap the listed block pairs, negate the listed blocks."""
    offs = [0]
    for s in block_sizes:
        offs.append(offs[-1] + s)
    n = offs[-1]
    target = list(range(len(block_sizes)))
    for a, b in swaps:
        if block_sizes[a] != block_sizes[b]:
            raise ValueError("swapped blocks must have equal size")
        target[a], target[b] = b, a
    M = [[0] * n for _ in range(n)]
    for blk, tgt in enumerate(target):
        s = -1 if blk in negate else 1
        for k in range(block_sizes[blk]):
            M[offs[tgt] + k][offs[blk] + k] = s
    return M


def double_cover_involution():
    """The lattice U^15 + E8(-1)^4 with the involution that swaps U-blocks
    1<->2, ..., 13<->14, negates the 15th U-block and swaps the E8-blocks
    in pairs."""
    L = build("U^15 + E8(-1)^4")
    sizes = [2] * 15 + [8] * 4
    swaps = [(2 * i, 2 * i + 1) for i in range(7)] + [(15, 16), (17, 18)]
    return L, block_involution(sizes, swaps, negate=(14,))
