"""Seven points: at most three center pairs; eight or more: emptiness certificates."""

from dataclasses import dataclass

import numpy as np

from ..epipolar import constraint_space, fundamental_from_centers
from ..errors import DegenerateConfig, GenericityFailure, InconsistentCenters, NonGeneric, RouteMismatch, \
    SharedComponent, UnsupportedN
from ..linalg import Backend, det, harmonize, is_exact, is_zero, left_nullspace, max_abs, nullspace, to_float
from ..poly import Conic, Poly, binary_roots, cluster_points, pencil_determinant, pencil_intersect_conics, \
    rational_roots
from ..projective import PPoint, as_config, cross_vec
from ..serialize import matrix_to_json, scalar_to_json

MATCH_TOL = 1e-6


@dataclass
class Finite7:
    """Center pairs of seven-point data plus the conics of each plane that carry them."""
    pairs: list
    exact: list
    conics_a: tuple
    conics_b: tuple
    pencil: tuple

    @property
    def count(self):
        return len(self.pairs)

    def real_pairs(self, tol=1e-8):
        return [(a, b) for a, b in self.pairs if _is_real(a, tol) and _is_real(b, tol)]


def _is_real(p, tol=1e-8):
    v = np.asarray(p.canonical().coords if hasattr(p, "canonical") else p)
    if is_exact(v):
        return True
    v = v / v[int(np.argmax(np.abs(v)))]
    return float(np.max(np.abs(v.imag))) <= tol


def _basis(X, Y):
    cs = constraint_space(X, Y)
    if cs.dim != 2:
        raise NonGeneric(f"constraint space has dimension {cs.dim}, expected 2")
    return cs.basis


def _quadratic_form(N):
    """a^T N a as a polynomial."""
    terms = {}
    for r in range(3):
        for c in range(r, 3):
            e = [0, 0, 0]
            e[r] += 1
            e[c] += 1
            terms[tuple(e)] = N[r, c] if r == c else N[r, c] + N[c, r]
    return Poly(terms, 3)


def cross_conics(F1, F2):
    """The three conics of a given by the components of F1 a x F2 a."""
    F1, F2 = harmonize(F1, F2)
    out = []
    for k in range(3):
        i, j = (k + 1) % 3, (k + 2) % 3
        # (F1 a)_i (F2 a)_j - (F1 a)_j (F2 a)_i
        N = np.outer(F1[i], F2[j]) - np.outer(F1[j], F2[i])
        out.append(Conic(_quadratic_form(N)))
    return tuple(out)


def distinguished_point(F1, F2, k):
    """Common extra point of the conics other than k: f1_k x f2_k (never a center)."""
    F1, F2 = harmonize(F1, F2)
    return PPoint(cross_vec(F1[k], F2[k]))


def _null_pair(F):
    """(a, b) with F a = 0 and b^T F = 0 for a rank-2 matrix F."""
    if is_exact(F):
        ra, lb = nullspace(F), left_nullspace(F)
        if len(ra) != 1 or len(lb) != 1:
            raise NonGeneric("pencil member has rank below 2")
        return PPoint(ra[0]), PPoint(lb[0])
    F = np.asarray(F, dtype=complex)
    _, s, vh = np.linalg.svd(F)
    if s[1] <= 1e-8 * s[0]:
        raise NonGeneric("pencil member has rank below 2")
    _, s2, vh2 = np.linalg.svd(F.T)
    return PPoint(vh[-1].conj()), PPoint(vh2[-1].conj())


def _det_route(F1, F2):
    """Roots of det(s F1 + t F2), exact where rational; list of (root, exact flag)."""
    g = pencil_determinant(F1, F2)
    if g.is_zero():
        raise NonGeneric("every member of the pencil is singular")
    numeric = list(binary_roots(g))
    flags = [False] * len(numeric)
    if g.backend is Backend.EXACT:
        for r in rational_roots(g):
            rv = to_float(r.coords)
            best = min((k for k in range(len(numeric)) if not flags[k]),
                       key=lambda k: abs(rv[0] * numeric[k].coords[1] - rv[1] * numeric[k].coords[0])
                       / (np.linalg.norm(rv) * np.linalg.norm(numeric[k].coords)))
            numeric[best] = r
            flags[best] = True
    return numeric, flags


def _conic_route(F1, F2, conics):
    """Centers a from conics 0 and 1, minus the distinguished point, filtered by conic 2."""
    Ff1, Ff2 = to_float(F1), to_float(F2)
    pts = pencil_intersect_conics(conics[0], conics[1])
    dist = distinguished_point(Ff1, Ff2, 2)
    clusters = cluster_points(pts, radius=MATCH_TOL)
    third = conics[2].to_float()
    out = []
    removed = False
    for p, m in clusters:
        if not removed and _close(p, dist):
            removed = True
            m -= 1
        v = p.coords / np.linalg.norm(p.coords)
        if m > 0 and abs(third(v)) <= 1e-6 * float(third.scale()):
            out.extend([p] * m)
    if not removed:
        raise RouteMismatch("conic intersection misses the distinguished point")
    return out


def _close(p, q, tol=MATCH_TOL):
    u, v = to_float(np.asarray(p.coords)), to_float(np.asarray(q.coords))
    u, v = u / np.linalg.norm(u), v / np.linalg.norm(v)
    m = np.outer(u, v) - np.outer(v, u)
    return np.linalg.norm(m) / np.sqrt(2) <= tol


def solve_n7(X, Y, verify=True):
    """All center pairs (a, b) for seven-point data (three, counted with multiplicity)."""
    X, Y = as_config(X, "X"), as_config(Y, "Y")
    if X.n != 7 or Y.n != 7:
        raise NonGeneric("solve_n7 needs seven points per plane")
    F1, F2 = _basis(X, Y)
    roots, flags = _det_route(F1, F2)
    pairs = []
    for r, exact in zip(roots, flags):
        s, t = r.coords
        if exact:
            F = s * F1 + t * F2
        else:
            F = complex(s) * to_float(F1) + complex(t) * to_float(F2)
        pairs.append(_null_pair(F))
    conics_a = cross_conics(F1, F2)
    conics_b = cross_conics(F1.T, F2.T)
    if verify:
        try:
            alt = _conic_route(F1, F2, conics_a)
        except SharedComponent as exc:
            raise NonGeneric(str(exc)) from None
        if len(alt) != len(pairs) or not _same_multiset([a for a, _ in pairs], alt):
            raise RouteMismatch("determinant and conic routes give different centers")
        for a, b in pairs:
            try:
                fundamental_from_centers(a, b, X, Y)
            except (InconsistentCenters, DegenerateConfig) as exc:
                raise RouteMismatch(f"pair fails the incidence constraints: {exc}") from None
    return Finite7(pairs, flags, conics_a, conics_b, (F1, F2))


def _same_multiset(ps, qs):
    left = list(qs)
    for p in ps:
        k = next((k for k, q in enumerate(left) if _close(p, q)), None)
        if k is None:
            return False
        left.pop(k)
    return not left


@dataclass
class EmptinessCertificate:
    """Why no center pair exists: the constraint space and the determinant of its generator."""
    n: int
    dim: int
    determinant: object
    matrix: object

    def to_dict(self):
        return {"n": self.n, "constraint_dim": self.dim,
                "determinant": None if self.determinant is None else scalar_to_json(self.determinant),
                "matrix": None if self.matrix is None else matrix_to_json(self.matrix)}


def emptiness_n8(X, Y):
    """Certificate that n >= 8 generic pairs admit no fundamental matrix."""
    X, Y = as_config(X, "X"), as_config(Y, "Y")
    if X.n < 8 or X.n != Y.n:
        raise UnsupportedN("emptiness certificates need n >= 8 paired points")
    cs = constraint_space(X, Y)
    if cs.dim == 0:
        return EmptinessCertificate(X.n, 0, None, None)
    if cs.dim > 1:
        raise GenericityFailure(f"constraint space has dimension {cs.dim}; a rank-2 member exists")
    F = cs.basis[0]
    d = det(F)
    if is_zero(d, max_abs(F) ** 3):
        err = GenericityFailure("the constraint space contains a rank-2 matrix; the data are consistent")
        err.matrix = F
        raise err
    return EmptinessCertificate(X.n, 1, d, F)
