"""Numerical invariants of abelian covers of P2 and of their eigenspaces."""

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from . import gf2core as gf
from .cover import is_connected_cover


class DisconnectedCover(ValueError):
    pass


class UnsupportedSingularity(ValueError):
    pass


def h0(k):
    """h^0(O_P2(k))."""
    return (k + 1) * (k + 2) // 2 if k >= 0 else 0


def h1(k):
    return 0


def h2(k):
    return h0(-k - 3)


def euler_char(k):
    """chi(O_P2(k)) = (k+1)(k+2)/2 for every integer k."""
    return (k + 1) * (k + 2) // 2


@dataclass(frozen=True)
class SurfaceInvariants:
    K2: int
    chiO: int
    pg: int
    q: int
    chi_top: int
    h11: int
    signature: tuple

    def to_json(self):
        return {"K2": self.K2, "chiO": self.chiO, "pg": self.pg, "q": self.q,
                "chiTop": self.chi_top, "h11": self.h11, "signature": list(self.signature)}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["K2"], obj["chiO"], obj["pg"], obj["q"], obj["chiTop"], obj["h11"],
                   tuple(obj["signature"]))

    @property
    def general_type(self):
        return self.K2 > 0


def _as_int(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


def cover_invariants(data, weight=Fraction(1, 2)):
    """K^2, chi(O), p_g, q, topological Euler number, h^11 and signature.

    Assumes the branch lines are in general position so that the cover is
    smooth.  A non-positive K^2 is returned as is (not general type).
    """
    if not is_connected_cover(data.branch):
        raise DisconnectedCover("branch labels do not generate the group")
    degs = list(data.bundles.values())
    chiO = sum(euler_char(-d) for d in degs)
    pg = sum(h0(d - 3) for d in degs)
    q = sum(h1(-d) for d in degs)
    branch_deg = sum(ln.deg for ln in data.branch.lines)
    K2 = _as_int(2 ** data.m * (Fraction(-3) + Fraction(weight) * branch_deg) ** 2)
    chi_top = 12 * chiO - K2
    h11 = chi_top - 2 + 4 * q - 2 * pg
    signature = (2 * pg + 1, h11 - 1)
    return SurfaceInvariants(K2, chiO, pg, q, chi_top, h11, signature)


def check_consistency(inv):
    """Noether and Hirzebruch identities; returns a list of failures."""
    bad = []
    if 12 * inv.chiO - inv.K2 != inv.chi_top:
        bad.append("noether")
    if Fraction(inv.K2 - 2 * inv.chi_top, 3) != inv.signature[0] - inv.signature[1]:
        bad.append("signature")
    return bad


# eigenspaces ---------------------------------------------------------------


@dataclass(frozen=True)
class HodgeTriple:
    h20: int
    h11: int
    h02: int

    def as_list(self):
        return [self.h20, self.h11, self.h02]

    def __add__(self, other):
        return HodgeTriple(self.h20 + other.h20, self.h11 + other.h11, self.h02 + other.h02)


def double_cover_prim_hodge(n, point_multiplicities=None):
    """Primitive Hodge numbers of the double plane branched along n lines.

    Only ordinary double points are supported (A1 points upstairs); the
    values are those of the singular model.
    """
    if n <= 0 or n % 2:
        raise ValueError("need a positive even number of lines")
    if point_multiplicities is None:
        point_multiplicities = [2] * comb(n, 2)
    if any(k > 2 for k in point_multiplicities):
        raise UnsupportedSingularity("points of multiplicity > 2 are not handled")
    nodes = len(point_multiplicities)
    d = n // 2
    pg = (d - 1) * (d - 2) // 2
    e_branch = 2 * n - nodes
    e_cover = 2 * (3 - e_branch) + e_branch
    h11 = e_cover - 2 - 2 * pg
    return HodgeTriple(pg, h11 - 1, pg)


def eigen_decomposition(data):
    """Hodge triple of each character eigenspace.

    A nonzero character contributes the primitive cohomology of the double
    plane branched along the lines it is -1 on; the trivial character
    contributes the pulled-back hyperplane class.
    """
    out = {}
    for chi in gf.all_vectors(data.m):
        if not any(chi):
            out[chi] = HodgeTriple(0, 1, 0)
        else:
            out[chi] = double_cover_prim_hodge(data.branch.branch_degree(chi))
    return out


def eigen_totals(decomp, chars=None):
    chars = decomp.keys() if chars is None else chars
    total = HodgeTriple(0, 0, 0)
    for chi in chars:
        total = total + decomp[chi]
    return total


def deformation_dimension(n):
    """Dimension of the space of n general lines modulo PGL(3)."""
    if n < 4:
        raise ValueError("need at least four lines")
    return 2 * (n - 4)
