"""Seeded generators of synthetic data: random points, cameras and two-view scenes.

Every generator takes a ``numpy.random.Generator``; coordinates are small
integers so that the exact backend stays fast.
"""

from dataclasses import dataclass

import numpy as np

from .epipolar import FlatCamera, PinholeCamera
from .linalg import Backend, as_array, inv, nullspace, rank
from .projective import LabeledConfig, PPoint, genericity_report

LO, HI = -9, 9


def random_vector(rng, size, lo=LO, hi=HI):
    while True:
        v = rng.integers(lo, hi + 1, size=size)
        if np.any(v):
            return as_array([int(c) for c in v])


def random_point(rng, dim=2, lo=LO, hi=HI):
    return PPoint(random_vector(rng, dim + 1, lo, hi))


def random_matrix(rng, rows, cols, full_rank=True, lo=LO, hi=HI):
    while True:
        M = as_array([[int(c) for c in row] for row in rng.integers(lo, hi + 1, size=(rows, cols))])
        if not full_rank or rank(M) == min(rows, cols):
            return M


def random_config(rng, n, plane="X", lo=LO, hi=HI):
    """n integer points of P^2 with no three collinear."""
    while True:
        cfg = LabeledConfig([random_point(rng, 2, lo, hi) for _ in range(n)], plane)
        if genericity_report(cfg).clean:
            return cfg


def random_flat_camera(rng):
    return FlatCamera(random_matrix(rng, 2, 3))


def random_homography(rng, size=3):
    return random_matrix(rng, size, size)


def as_backend(cfg, backend):
    return cfg.to_float() if backend is Backend.FLOAT else cfg


@dataclass
class TwoViewScene:
    """Points Z of P^3 seen by two pinhole cameras, plus the induced flat data."""
    Z: list
    Aprime: PinholeCamera
    Bprime: PinholeCamera
    X: LabeledConfig
    Y: LabeledConfig
    A: FlatCamera
    B: FlatCamera

    @property
    def epipoles(self):
        """(a, b) = (A' b', B' a') with a', b' the pinhole centers."""
        return self.Aprime(self.Bprime.center), self.Bprime(self.Aprime.center)


def _flat_from_pinholes(Ap, Bp):
    """Flat cameras A, B with A x ~ B y whenever x = A' z and y = B' z.

    W is a 2x4 matrix vanishing on both pinhole centers; A = W A'^+ and B = W B'^+.
    """
    W = np.array(nullspace(np.array([Ap.center.coords, Bp.center.coords])), dtype=object)
    A = W.dot(Ap.matrix.T).dot(inv(Ap.matrix.dot(Ap.matrix.T)))
    B = W.dot(Bp.matrix.T).dot(inv(Bp.matrix.dot(Bp.matrix.T)))
    return FlatCamera(A), FlatCamera(B)


def two_view_scene(rng, n, generic=True, lo=LO, hi=HI):
    """Random scene; with generic=True images have no three collinear points."""
    while True:
        Ap = PinholeCamera(random_matrix(rng, 3, 4, lo=lo, hi=hi))
        Bp = PinholeCamera(random_matrix(rng, 3, 4, lo=lo, hi=hi))
        if rank(np.array([Ap.center.coords, Bp.center.coords])) < 2:
            continue
        Z = [random_point(rng, 3, lo, hi) for _ in range(n)]
        if any(rank(np.array([Ap.center.coords, Bp.center.coords, z.coords])) < 3 for z in Z):
            continue
        X = LabeledConfig([Ap(z) for z in Z], "X")
        Y = LabeledConfig([Bp(z) for z in Z], "Y")
        if generic and not (genericity_report(X).clean and genericity_report(Y).clean):
            continue
        A, B = _flat_from_pinholes(Ap, Bp)
        scene = TwoViewScene(Z, Ap, Bp, X, Y, A, B)
        a, b = scene.epipoles
        if generic and any(x == a for x in X) or any(y == b for y in Y):
            continue
        return scene


def random_instance(rng, n, lo=LO, hi=HI):
    """Unrelated random data X, Y (no common-image structure)."""
    return random_config(rng, n, "X", lo, hi), random_config(rng, n, "Y", lo, hi)


@dataclass
class MultiviewScene:
    configs: list
    cameras: list
    centers: list


def multiview_scene(rng, m, n, lo=LO, hi=HI):
    """m views of n points with a common P^1 image: x_k^j = A_j^+ p_k + t a_j."""
    while True:
        cams = [random_flat_camera(rng) for _ in range(m)]
        images = [random_vector(rng, 2, lo, hi) for _ in range(n)]
        configs = []
        for A in cams:
            pinv = A.matrix.T.dot(inv(A.matrix.dot(A.matrix.T)))
            a = A.center.coords
            pts = []
            for p in images:
                t = int(rng.integers(lo, hi + 1))
                pts.append(PPoint(pinv.dot(p) + t * a))
            configs.append(LabeledConfig(pts, f"X{len(configs)}"))
        if all(genericity_report(c).clean for c in configs):
            return MultiviewScene(configs, cams, [A.center for A in cams])


def perturb_point(cfg, k, rng, lo=LO, hi=HI):
    """Copy of cfg with point k replaced by a random point."""
    pts = list(cfg.points)
    while True:
        q = random_point(rng, cfg.dim, lo, hi)
        if not any(q == p for p in pts):
            pts[k] = q
            return LabeledConfig(pts, cfg.plane, cfg.backend)
