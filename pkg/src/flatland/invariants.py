"""Invariants of labeled points on P^1 and their pullbacks to P^2.

Bracket monomials are written as strings of 1-based label pairs, e.g.
"12 34 56" is [12][34][56]; "|" separates the terms of a sum.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .errors import (
    CenterOnPoint, DegenerateConfig, DegenerateQuadruple, DimMismatch, PointsNotOnConic, UnsupportedN,
)
from .linalg import EPS_REL, as_array, harmonize, is_exact, is_zero, is_zero_vector, to_float
from .poly import Conic, _on_curve
from .projective import (
    PPoint, _coords, as_config, bracket2, bracket3, bracket_scale, proportional,
)
from .serialize import scalar_to_json


@dataclass(frozen=True)
class MatchingGraph:
    """Multigraph on [n] read as the bracket monomial prod [ij] over its edges."""
    n: int
    edges: tuple  # 0-based ordered pairs

    @classmethod
    def parse(cls, text, n):
        return cls(n, tuple((int(e[0]) - 1, int(e[1]) - 1) for e in text.split()))

    @property
    def degree(self):
        deg = [0] * self.n
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return tuple(deg)

    @property
    def is_perfect_matching(self):
        return all(d == 1 for d in self.degree)

    @property
    def is_noncrossing(self):
        """No two edges cross when the labels sit on a circle in order."""
        for (a, b), (c, d) in combinations([tuple(sorted(e)) for e in self.edges], 2):
            if a < c < b < d or c < a < d < b:
                return False
        return True

    def evaluate(self, bracket):
        """Product of bracket(i, j) over the edges."""
        out = 1
        for i, j in self.edges:
            out = out * bracket(i, j)
        return out

    def __str__(self):
        return "".join(f"[{i + 1}{j + 1}]" for i, j in self.edges)


def _sum_of(text, n):
    return tuple(MatchingGraph.parse(t, n) for t in text.split("|"))


# n = 4: the pair ([13][24], [14][23])
N4_BASIS = (_sum_of("13 24", 4), _sum_of("14 23", 4))

# n = 5: the six lowest-degree monomials
N5_BASIS = tuple(_sum_of(s, 5) for s in (
    "12 23 34 45 15",
    "12 25 15 34 34",
    "12 23 13 45 45",
    "23 34 24 15 15",
    "34 45 35 12 12",
    "14 45 15 23 23",
))

# n = 6: Joubert invariants A..F.  The last term of B is [46][53][12]; a
# literal [46][53][26] would not be a perfect matching.
JOUBERT = tuple(_sum_of(s, 6) for s in (
    "12 34 56|13 46 25|14 26 35|15 24 36|16 23 45",
    "45 31 26|43 16 52|41 56 32|42 51 36|46 53 12",
    "15 64 23|16 43 52|14 53 62|12 54 63|13 56 42",
    "14 36 52|13 62 45|16 42 35|15 46 32|12 43 65",
    "16 32 54|13 24 65|12 64 35|15 62 34|14 63 25",
    "42 61 53|46 13 25|41 23 65|45 21 63|43 26 15",
))

# Covariant cubics a(u)..f(u): [ij] stands for [i j u].  Coble's scalars reuse
# the same label triples, reading each term as [(ij)(kl)(rs)].
COVARIANT = tuple(_sum_of(s, 6) for s in (
    "25 13 46|51 42 36|14 35 26|43 21 56|32 54 16",
    "53 12 46|14 23 56|25 34 16|31 45 26|42 51 36",
    "53 41 26|34 25 16|42 13 56|21 54 36|15 32 46",
    "45 31 26|53 24 16|41 25 36|32 15 46|21 43 56",
    "31 24 56|12 53 46|25 41 36|54 32 16|43 15 26",
    "42 35 16|23 14 56|31 52 46|15 43 26|54 21 36",
))

# Non-crossing perfect matchings m1..m5 on the hexagon and the crossing m0
M0 = MatchingGraph.parse("14 25 36", 6)
NONCROSSING6 = tuple(MatchingGraph.parse(s, 6) for s in (
    "12 34 56", "12 36 45", "14 23 56", "16 23 45", "16 25 34"))

BASIS_TAGS = {4: "n4-pair", 5: "n5-kempe", 6: "n6-joubert"}
_P1_BASES = {4: N4_BASIS, 5: N5_BASIS, 6: JOUBERT}
_P2_BASES = {4: N4_BASIS, 5: N5_BASIS, 6: COVARIANT}


@dataclass(frozen=True)
class GVector:
    n: int
    entries: tuple

    @property
    def basis(self):
        return BASIS_TAGS[self.n]

    def array(self):
        if all(isinstance(e, Fraction) for e in self.entries):
            return as_array(list(self.entries))
        return np.array([complex(e) for e in self.entries])

    def is_zero(self):
        return is_zero_vector(self.array())

    def proportional(self, other):
        if self.n != other.n:
            raise DimMismatch("g-vectors of different n")
        u, v = harmonize(self.array(), other.array())
        if is_zero_vector(u) or is_zero_vector(v):
            raise DegenerateConfig("g-vector vanishes identically")
        return proportional(u, v)

    def to_dict(self):
        return {"basis": self.basis, "entries": [scalar_to_json(e) for e in self.entries]}


def _bracket_table(points):
    pts = harmonize(*[_coords(p) for p in points])
    n = len(pts)
    table = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            table[i][j] = pts[i][0] * pts[j][1] - pts[j][0] * pts[i][1]
    return table


def _pullback_table(X, a):
    pts = harmonize(*[_coords(p) for p in X], _coords(a))
    a = pts[-1]
    n = len(pts) - 1
    table = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = bracket3(pts[i], pts[j], a)
            table[i][j] = v
            table[j][i] = -v
    return table


def _evaluate_basis(basis, table):
    br = lambda i, j: table[i][j]
    out = []
    for terms in basis:
        total = 0
        for g in terms:
            total = total + g.evaluate(br)
        out.append(total)
    return tuple(out)


def cross_ratio(p1, p2, p3, p4):
    """[13][24] / ([14][23])."""
    den = bracket2(p1, p4) * bracket2(p2, p3)
    if is_zero(den, bracket_scale(p1, p2, p3, p4) ** 2):
        raise DegenerateQuadruple("[14][23] vanishes")
    return bracket2(p1, p3) * bracket2(p2, p4) / den


def planar_cross_ratio(x1, x2, x3, x4, x5):
    """Cross-ratio of the four lines x5 x_i: [135][245] / ([145][235])."""
    den = bracket3(x1, x4, x5) * bracket3(x2, x3, x5)
    if is_zero(den, bracket_scale(x1, x2, x3, x4, x5, x5)):
        raise DegenerateConfig("[145][235] vanishes")
    return bracket3(x1, x3, x5) * bracket3(x2, x4, x5) / den


def six_on_conic(x1, x2, x3, x4, x5, x6):
    """[135][245][146][236] == [136][246][145][235]."""
    lhs = bracket3(x1, x3, x5) * bracket3(x2, x4, x5) * bracket3(x1, x4, x6) * bracket3(x2, x3, x6)
    rhs = bracket3(x1, x3, x6) * bracket3(x2, x4, x6) * bracket3(x1, x4, x5) * bracket3(x2, x3, x5)
    if isinstance(lhs, Fraction) and isinstance(rhs, Fraction):
        return lhs == rhs
    scale = bracket_scale(x1, x2, x3, x4, x5, x6) ** 2
    return abs(lhs - rhs) <= EPS_REL * scale


SAMPLE_DIRECTIONS = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (1, -1, 2), (2, 3, -1), (3, -2, 5),
                     (-4, 1, 3), (5, 7, 2), (1, 5, -6))


def point_on_conic(omega, base, index=0, avoid=()):
    """Second intersection of omega with a line through base (a conic point).

    Lines are taken toward a fixed sequence of directions; `index` selects the
    index-th usable one.  Exact for rational data.
    """
    base = _coords(base)
    Q = omega.matrix
    if not is_exact(Q) or not is_exact(base):
        Q, base = to_float(Q), to_float(base)
    found = 0
    for d in SAMPLE_DIRECTIONS:
        q = as_array(list(d)) if is_exact(base) else to_float(as_array(list(d)))
        fq = q.dot(Q).dot(q)
        bq = base.dot(Q).dot(q)
        p = fq * base - 2 * bq * q
        if is_zero_vector(p) or is_zero(fq, np.max(np.abs(to_float(Q)))):
            continue
        if proportional(p, base) or any(proportional(p, x) for x in avoid):
            continue
        if found == index:
            return PPoint(p)
        found += 1
    raise DegenerateConfig("could not sample a point on the conic")


def conic_cross_ratio(x1, x2, x3, x4, omega, sample=0):
    """Planar cross-ratio of x1..x4 seen from another point of the conic omega."""
    if not isinstance(omega, Conic):
        omega = Conic(omega)
    pts = [x1, x2, x3, x4]
    if not all(_on_curve(omega, _coords(p)) for p in pts):
        raise PointsNotOnConic("the four points are not on the conic")
    Q = omega.matrix
    from .linalg import det
    if is_zero(det(Q), float(np.max(np.abs(to_float(Q)))) ** 3):
        raise PointsNotOnConic("the conic is degenerate")
    x = point_on_conic(omega, x1, sample, avoid=pts)
    return planar_cross_ratio(x1, x2, x3, x4, x)


def _check_n(n):
    if n not in (4, 5, 6):
        raise UnsupportedN(f"g-vectors are defined for n = 4, 5, 6 (got {n})")


def g_vector(points):
    points = list(points)
    _check_n(len(points))
    return GVector(len(points), _evaluate_basis(_P1_BASES[len(points)], _bracket_table(points)))


def _check_distinct(points):
    for i, j in combinations(range(len(points)), 2):
        if proportional(points[i], points[j]):
            raise DegenerateConfig(f"points {i} and {j} coincide")


def orbits_equal(P, Q):
    """Same SL(2)-orbit test via proportionality of g-vectors."""
    P, Q = list(P), list(Q)
    if len(P) != len(Q):
        raise DimMismatch("configurations of different size")
    _check_n(len(P))
    _check_distinct(P)
    _check_distinct(Q)
    return g_vector(P).proportional(g_vector(Q))


def g_pullback(X, a):
    """g-vector with every [ij] replaced by [i j a]."""
    X = list(X)
    _check_n(len(X))
    for i, x in enumerate(X):
        if proportional(x, a):
            raise CenterOnPoint(f"center coincides with point {i}")
    return GVector(len(X), _evaluate_basis(_P2_BASES[len(X)], _pullback_table(X, a)))


def same_image_test(X, a, Y, b):
    """Whether cameras centered at a and b can give X and Y a common image."""
    return g_pullback(X, a).proportional(g_pullback(Y, b))


def coble_bracket(X, ij, kl, rs):
    """[(ij)(kl)(rs)] = [ijr][kls] - [ijs][klr]; vanishes iff the three lines concur."""
    x = list(X)
    i, j = ij
    k, l = kl
    r, s = rs
    return (bracket3(x[i], x[j], x[r]) * bracket3(x[k], x[l], x[s])
            - bracket3(x[i], x[j], x[s]) * bracket3(x[k], x[l], x[r]))


def coble_terms(X):
    """Every [(ij)(kl)(rs)] entering the Coble scalars: (label, value, scale)."""
    X = list(as_config(X))
    out = []
    for terms in COVARIANT:
        for g in terms:
            value = coble_bracket(X, *g.edges)
            scale = bracket_scale(*(X[v] for e in g.edges for v in e))
            out.append((tuple(g.edges), value, scale))
    return out


def coble_scalars(X):
    """Coble's six scalars (bar-a .. bar-f) of six points in the plane."""
    X = list(as_config(X))
    if len(X) != 6:
        raise UnsupportedN("Coble scalars need six points")
    out = []
    for terms in COVARIANT:
        total = 0
        for g in terms:
            total = total + coble_bracket(X, *g.edges)
        out.append(total)
    return tuple(out)


def pullback_brackets(X, a):
    """Table of [i j a] values (used by the n = 6 cubic forms)."""
    return _pullback_table(list(X), a)
