"""Flatland cameras, fundamental matrices, two-view reconstruction and multiview checks."""

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

import numpy as np

from .errors import (
    DegenerateConfig, InconsistentCenters, InconsistentPair, NoCommonImage, RankDeficientCamera, WrongRank,
)
from .linalg import (
    Backend, as_array, det, eye, harmonize, inv, is_exact, is_zero, is_zero_vector, left_nullspace,
    nullspace, rank, to_float, zeros,
)
from .projective import PPoint, ProjMap, _coords, as_config, column_matrix, proportional
from .serialize import matrix_to_json, vector_to_json


def _matrix(M):
    if isinstance(M, (ProjMap, Camera)):
        return M.matrix
    if isinstance(M, np.ndarray) and M.dtype != object:
        return as_array(M) if M.dtype.kind in "iu" else M.astype(np.complex128)
    return M if isinstance(M, np.ndarray) else as_array(M)


class Camera:
    """Full-rank linear projection P^l -> P^(l-1), given by an l x (l+1) matrix."""

    def __init__(self, M):
        M = _matrix(M)
        if M.ndim != 2 or M.shape[1] != M.shape[0] + 1:
            raise RankDeficientCamera(f"a camera matrix is l x (l+1), got {M.shape}")
        if rank(M) != M.shape[0]:
            raise RankDeficientCamera("camera matrix is not of full rank")
        M = M.copy()
        M.setflags(write=False)
        self.matrix = M

    @property
    def backend(self):
        return Backend.EXACT if is_exact(self.matrix) else Backend.FLOAT

    @cached_property
    def center(self):
        return PPoint(nullspace(self.matrix)[0])

    def image(self, x):
        """Image coordinates of x (possibly the zero vector)."""
        M, v = harmonize(self.matrix, _coords(x))
        return M.dot(v)

    def __call__(self, x):
        return PPoint(self.image(x))

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    def to_float(self):
        return type(self)(to_float(self.matrix))

    def __repr__(self):
        return f"{type(self).__name__}({self.matrix.tolist()})"


class FlatCamera(Camera):
    """Rank-2 projection P^2 -> P^1."""

    def __init__(self, M):
        super().__init__(M)
        if self.matrix.shape != (2, 3):
            raise RankDeficientCamera("a flatland camera is a 2 x 3 matrix")


class PinholeCamera(Camera):
    """Rank-3 projection P^3 -> P^2."""

    def __init__(self, M):
        super().__init__(M)
        if self.matrix.shape != (3, 4):
            raise RankDeficientCamera("a pinhole camera is a 3 x 4 matrix")


def _camera(M):
    return M if isinstance(M, Camera) else Camera(M)


class FundamentalMatrix:
    """Rank-2 3x3 matrix F; right epipole a (F a = 0), left epipole b (F^T b = 0)."""

    def __init__(self, F):
        F = _matrix(F)
        if F.shape != (3, 3):
            raise WrongRank("a fundamental matrix is 3 x 3")
        r = rank(F)
        if r != 2:
            raise WrongRank(f"fundamental matrix must have rank 2, got {r}")
        F = F.copy()
        F.setflags(write=False)
        self.matrix = F

    @property
    def backend(self):
        return Backend.EXACT if is_exact(self.matrix) else Backend.FLOAT

    @cached_property
    def epipoles(self):
        return PPoint(nullspace(self.matrix)[0]), PPoint(left_nullspace(self.matrix)[0])

    def constraint(self, x, y):
        F, xv, yv = harmonize(self.matrix, _coords(x), _coords(y))
        return yv.dot(F).dot(xv)

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    def __repr__(self):
        return f"FundamentalMatrix({self.matrix.tolist()})"


def fundamental_from_cameras(A, B):
    """F = b2 a1^T - b1 a2^T, so that y^T F x = det[Ax | By]."""
    A, B = FlatCamera(A) if not isinstance(A, FlatCamera) else A, FlatCamera(B) if not isinstance(B, FlatCamera) else B
    MA, MB = harmonize(A.matrix, B.matrix)
    F = np.outer(MB[1], MA[0]) - np.outer(MB[0], MA[1])
    return FundamentalMatrix(F)


def _rank2_factor(F):
    """F = U V^T with U, V of shape 3x2."""
    if is_exact(F):
        best = None
        for rows in combinations(range(3), 2):
            for cols in combinations(range(3), 2):
                m = F[np.ix_(rows, cols)]
                d = abs(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
                if best is None or d > best[0]:
                    best = (d, rows, cols)
        _, rows, cols = best
        M = F[np.ix_(rows, cols)]
        U = F[:, list(cols)].dot(inv(M))
        V = F[list(rows), :].T
        return U, V
    u, s, vh = np.linalg.svd(F)
    return u[:, :2] * s[:2], vh[:2].T


def cameras_from_fundamental(F):
    """Flatland cameras A = [-v2^T; v1^T], B = [u1^T; u2^T] from F = U V^T."""
    F = F if isinstance(F, FundamentalMatrix) else FundamentalMatrix(F)
    U, V = _rank2_factor(F.matrix)
    A = np.array([-V[:, 1], V[:, 0]])
    B = np.array([U[:, 0], U[:, 1]])
    return FlatCamera(A), FlatCamera(B)


def _standard_fundamental(a, b):
    """diag(a) [a * b]_x diag(b)."""
    c = a * b
    cx = np.array([[0 * c[0], -c[2], c[1]], [c[2], 0 * c[0], -c[0]], [-c[1], c[0], 0 * c[0]]], dtype=c.dtype)
    return (a[:, None] * cx) * b[None, :]


def fundamental_through(a, b, xs, ys):
    """The F with right epipole a, left epipole b and y_i^T F x_i = 0 for three pairs."""
    a, b = harmonize(_coords(a), _coords(b))
    Cx = column_matrix(xs[:3])
    Cy = column_matrix(ys[:3])
    Cx, Cy, a, b = harmonize(Cx, Cy, a, b)
    try:
        Hx, Hy = inv(Cx), inv(Cy)
    except np.linalg.LinAlgError:
        raise DegenerateConfig("the first three points are collinear") from None
    F = Hy.T.dot(_standard_fundamental(Hx.dot(a), Hy.dot(b))).dot(Hx)
    return FundamentalMatrix(F)


def _incidence_ok(F, x, y):
    F, x, y = harmonize(F, _coords(x), _coords(y))
    v = y.dot(F).dot(x)
    if is_exact(F):
        return v == 0
    scale = np.max(np.abs(F)) * np.max(np.abs(x)) * np.max(np.abs(y))
    return abs(v) <= 1e-8 * scale


def fundamental_from_centers(a, b, X, Y):
    """Fundamental matrix with epipoles (a, b) fitting every pair (x_i, y_i)."""
    X, Y = as_config(X, "X"), as_config(Y, "Y")
    if X.n != Y.n or X.n < 3:
        raise DegenerateConfig("need n >= 3 paired points")
    F = fundamental_through(a, b, list(X), list(Y))
    for i in range(3, X.n):
        if not _incidence_ok(F.matrix, X[i], Y[i]):
            raise InconsistentCenters(f"centers violate the constraint of pair {i}")
    return F


@dataclass
class ConstraintSpace:
    n: int
    basis: list

    @property
    def dim(self):
        return len(self.basis)


def constraint_space(X, Y):
    """Basis of {F : y_i^T F x_i = 0 for all i} (reduced echelon basis when exact)."""
    X, Y = as_config(X, "X"), as_config(Y, "Y")
    rows = []
    for x, y in zip(X, Y):
        xv, yv = harmonize(x.coords, y.coords)
        rows.append(np.outer(yv, xv).ravel())
    if not rows:
        return ConstraintSpace(0, [m.reshape(3, 3) for m in np.eye(9, dtype=object if X.backend is Backend.EXACT
                                                                         else complex)])
    M = np.array(rows, dtype=rows[0].dtype)
    basis = [v.reshape(3, 3) for v in nullspace(M)]
    return ConstraintSpace(X.n, basis)


def verify_common_image(A, B, X, Y):
    """A x_i ~ B y_i for every i, with no image equal to zero."""
    A, B = _camera(A), _camera(B)
    for x, y in zip(as_config(X, "X"), as_config(Y, "Y")):
        ax, by = A.image(x), B.image(y)
        if is_zero_vector(ax) or is_zero_vector(by) or not proportional(ax, by):
            return False
    return True


@dataclass
class Reconstruction:
    Z: list
    Aprime: Camera
    Bprime: Camera
    baseline: tuple

    def to_dict(self):
        return {"Z": [vector_to_json(z.coords) for z in self.Z],
                "Aprime": matrix_to_json(self.Aprime.matrix),
                "Bprime": matrix_to_json(self.Bprime.matrix)}


def _right_inverse(M):
    return M.T.dot(inv(M.dot(M.T)))


def _first_common_ratio(u, v):
    """lambda with u = lambda v, read off the first index where both are nonzero."""
    for k in range(len(u)):
        if not is_zero(u[k], np.max(np.abs(to_float(u)))) and not is_zero(v[k], np.max(np.abs(to_float(v)))):
            return u[k] / v[k]
    raise NoCommonImage("images are not proportional")


def reconstruct_two_view(X, Y, A, B):
    """Lift a common image to a scene in P^(l+1) with two cameras reproducing X and Y.

    A and B are moved to coordinate projections by T_x = [a | A^+] and
    T_y = [B^+ | b]; each pair lifts to z = (x'_0, ..., x'_l, lambda y'_l).
    """
    A, B = _camera(A), _camera(B)
    X, Y = as_config(X, "X"), as_config(Y, "Y")
    if not verify_common_image(A, B, X, Y):
        raise NoCommonImage("the cameras do not map the point sets to a common image")
    MA, MB = harmonize(A.matrix, B.matrix)
    l = MA.shape[0]
    a = nullspace(MA)[0]
    b = nullspace(MB)[0]
    Tx = np.column_stack([a, _right_inverse(MA)])
    Ty = np.column_stack([_right_inverse(MB), b])
    Tx_inv, Ty_inv = inv(Tx), inv(Ty)
    Z = []
    for x, y in zip(X, Y):
        xv, yv = harmonize(x.coords, y.coords, MA)[:2]
        xp = Tx_inv.dot(xv)
        yp = Ty_inv.dot(yv)
        lam = _first_common_ratio(xp[1:], yp[:l])
        z = np.concatenate([xp, [lam * yp[l]]])
        Z.append(PPoint(z))
    backend = Backend.EXACT if is_exact(MA) else Backend.FLOAT
    Ix = np.concatenate([eye(l + 1, backend), zeros((l + 1, 1), backend)], axis=1)
    Iy = np.concatenate([zeros((l + 1, 1), backend), eye(l + 1, backend)], axis=1)
    cls = PinholeCamera if l == 2 else Camera
    Ap, Bp = cls(Tx.dot(Ix)), cls(Ty.dot(Iy))
    e_first = zeros(l + 2, backend)
    e_last = zeros(l + 2, backend)
    e_first[0] = 1
    e_last[-1] = 1
    return Reconstruction(Z, Ap, Bp, (PPoint(e_first), PPoint(e_last)))


def reprojection_residual(rec, X, Y):
    """Largest 2x2 minor between reprojected and given points (0 means exact)."""
    worst = 0
    for z, x, y in zip(rec.Z, X, Y):
        for cam, target in ((rec.Aprime, x), (rec.Bprime, y)):
            u, v = harmonize(cam.image(z), _coords(target))
            minors = np.outer(u, v) - np.outer(v, u)
            m = max(abs(c) for c in minors.ravel())
            worst = max(worst, m)
    return worst


def on_baseline(rec, z):
    M = np.array([rec.baseline[0].coords, rec.baseline[1].coords, _coords(z)])
    return rank(M) < 3


@dataclass
class MultiviewResult:
    consistent: bool
    cameras: list = field(default_factory=list)
    fundamentals: dict = field(default_factory=dict)
    violation: tuple = None


def _pair_fundamental(ai, aj, Xi, Xj):
    """F^{ij} with left epipole a_i, right epipole a_j: (x^i)^T F x^j = 0.

    Tries the first three correspondences, then every other triple, keeping the
    one satisfying the most constraints.  Returns (F, first violated k or None).
    """
    n = Xi.n
    best = None
    triples = [(0, 1, 2)] + [t for t in combinations(range(n), 3) if t != (0, 1, 2)]
    for t in triples:
        try:
            F = fundamental_through(aj, ai, [Xj[k] for k in t], [Xi[k] for k in t])
        except (DegenerateConfig, WrongRank):
            continue
        bad = [k for k in range(n) if not _incidence_ok(F.matrix, Xj[k], Xi[k])]
        if not bad:
            return F, None
        if best is None or len(bad) < len(best[1]):
            best = (F, bad)
    if best is None:
        raise DegenerateConfig("no usable triple of correspondences")
    return best[0], best[1][0]


def _align(reference, other):
    """2x2 H with H @ other ~ reference, for two cameras with the same center."""
    R, O = harmonize(reference.matrix, other.matrix)
    # Solve H O = R using two columns where O is invertible.
    for cols in combinations(range(3), 2):
        Oc = O[:, list(cols)]
        if not is_zero(det(Oc), np.max(np.abs(to_float(O))) ** 2):
            return R[:, list(cols)].dot(inv(Oc))
    raise DegenerateConfig("camera has no invertible 2x2 block")


def multiview_consistency(configs, centers, strict=True):
    """Pairwise epipolar consistency of m views with the given camera centers.

    On success returns one camera per view, expressed in the image frame of
    view 0 so that all images of point k coincide literally.
    """
    configs = [as_config(c, f"X{j}") for j, c in enumerate(configs)]
    m = len(configs)
    if m < 2 or len(centers) != m:
        raise DegenerateConfig("need at least two views and one center per view")
    if len({c.n for c in configs}) != 1:
        raise DegenerateConfig("views have different numbers of points")
    fundamentals = {}
    for i, j in combinations(range(m), 2):
        F, k = _pair_fundamental(centers[i], centers[j], configs[i], configs[j])
        if k is not None:
            if strict:
                raise InconsistentPair(i, j, k)
            return MultiviewResult(False, [], fundamentals, (i, j, k))
        fundamentals[(i, j)] = F
    # Gauge: cameras of view 0 from F^{0j} all share center a_0; align them.
    ref = None
    cameras = [None] * m
    for j in range(1, m):
        # F^{0j} has left epipole a_0, so its second camera belongs to view 0.
        Aj, A0 = cameras_from_fundamental(fundamentals[(0, j)])
        if ref is None:
            ref = A0
            cameras[0] = A0
            cameras[j] = Aj
        else:
            H = _align(ref, A0)
            cameras[j] = FlatCamera(H.dot(harmonize(H, Aj.matrix)[1]))
    for i, j in combinations(range(m), 2):
        for k in range(configs[0].n):
            u, v = cameras[i].image(configs[i][k]), cameras[j].image(configs[j][k])
            if is_zero_vector(u) or is_zero_vector(v) or not proportional(u, v):
                if strict:
                    raise InconsistentPair(i, j, k)
                return MultiviewResult(False, [], fundamentals, (i, j, k))
    return MultiviewResult(True, cameras, fundamentals, None)
