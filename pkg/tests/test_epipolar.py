import numpy as np
import pytest

from flatland.epipolar import (
    Camera, FlatCamera, cameras_from_fundamental, constraint_space, fundamental_from_cameras,
    fundamental_from_centers, multiview_consistency, on_baseline, reconstruct_two_view,
    reprojection_residual, verify_common_image,
)
from flatland.errors import InconsistentCenters, InconsistentPair, RankDeficientCamera
from flatland.linalg import as_array, inv, rank
from flatland.projective import LabeledConfig, PPoint, point, proportional
from flatland.scenes import (
    multiview_scene, perturb_point, random_flat_camera, random_instance, random_point, two_view_scene,
)

E1, E2, E3, E4 = point(1, 0, 0), point(0, 1, 0), point(0, 0, 1), point(1, 1, 1)


def _det2(u, v):
    return u[0] * v[1] - u[1] * v[0]


def test_fundamental_from_cameras_example():
    A = FlatCamera([[0, 1, 0], [0, 0, 1]])
    B = FlatCamera([[1, 0, 0], [0, 1, 0]])
    F = fundamental_from_cameras(A, B)
    a, b = F.epipoles
    assert a == E1 and b == E3


def test_fundamental_identity_and_rank(rng):
    for _ in range(50):
        A, B = random_flat_camera(rng), random_flat_camera(rng)
        F = fundamental_from_cameras(A, B)
        assert rank(F.matrix) == 2
        for _ in range(20):
            x, y = random_point(rng), random_point(rng)
            assert F.constraint(x, y) == _det2(A.matrix.dot(x.coords), B.matrix.dot(y.coords))


def test_rank_one_camera_rejected():
    with pytest.raises(RankDeficientCamera):
        FlatCamera([[1, 2, 3], [2, 4, 6]])


def test_cameras_from_fundamental_round_trip(rng):
    for _ in range(50):
        F = fundamental_from_cameras(random_flat_camera(rng), random_flat_camera(rng))
        A, B = cameras_from_fundamental(F)
        G = fundamental_from_cameras(A, B)
        assert proportional(G.matrix.ravel(), F.matrix.ravel())
        assert A.center == F.epipoles[0]
        # correspondences drawn from y on the line F x
        for _ in range(5):
            x = random_point(rng)
            line = F.matrix.dot(x.coords)
            y = PPoint(np.cross(line, [1, 2, 3]).astype(object))
            assert F.constraint(x, y) == 0
            if all(v == 0 for v in A.matrix.dot(x.coords)) or all(v == 0 for v in B.matrix.dot(y.coords)):
                continue
            assert proportional(A.image(x), B.image(y))


def test_fundamental_from_centers_example():
    F = fundamental_from_centers(point(1, 2, 3), point(4, 5, 6), [E1, E2, E3], [E1, E2, E3]).matrix
    assert proportional(F.ravel(), [0, -90, 60, 144, 0, -48, -120, 60, 0])
    assert all(v == 0 for v in F.dot([1, 2, 3])) and all(v == 0 for v in F.T.dot([4, 5, 6]))


def test_fundamental_from_centers_inconsistent(rng):
    X, Y = random_instance(rng, 4)
    with pytest.raises(InconsistentCenters):
        fundamental_from_centers(random_point(rng), random_point(rng), X, Y)


def test_constraint_space_dimensions(rng):
    for n in range(3, 9):
        for _ in range(10):
            X, Y = random_instance(rng, n)
            cs = constraint_space(X, Y)
            assert cs.dim == 9 - n
            for F in cs.basis:
                assert all(y.coords.dot(F).dot(x.coords) == 0 for x, y in zip(X, Y))


def test_scene_epipoles_and_common_image(rng):
    for _ in range(30):
        s = two_view_scene(rng, 6)
        assert verify_common_image(s.A, s.B, s.X, s.Y)
        a, b = s.epipoles
        assert s.A.center == a and s.B.center == b
        Y = perturb_point(s.Y, 2, rng)
        assert not verify_common_image(s.A, s.B, s.X, Y)


def test_reconstruct_two_view_exact(rng):
    for n in (3, 5, 8):
        s = two_view_scene(rng, n)
        rec = reconstruct_two_view(s.X, s.Y, s.A, s.B)
        assert reprojection_residual(rec, s.X, s.Y) == 0
        assert not any(on_baseline(rec, z) for z in rec.Z)


def test_reconstruct_higher_dimension(rng):
    # l = 3: points of P^3 seen by rank-3 3x4 cameras, x = A^+ p + t a
    A = Camera(as_array([[1, 0, 0, 2], [0, 1, 0, -1], [0, 0, 1, 3]]))
    B = Camera(as_array([[2, 1, 0, 0], [0, 1, 1, 0], [1, 0, 0, 1]]))
    X, Y = [], []
    for _ in range(6):
        p = as_array([int(v) for v in rng.integers(-5, 6, size=3)])
        if all(v == 0 for v in p):
            continue
        pts = []
        for C in (A, B):
            pinv = C.matrix.T.dot(inv(C.matrix.dot(C.matrix.T)))
            pts.append(PPoint(pinv.dot(p) + int(rng.integers(1, 5)) * C.center.coords))
        X.append(pts[0])
        Y.append(pts[1])
    rec = reconstruct_two_view(LabeledConfig(X), LabeledConfig(Y), A, B)
    assert reprojection_residual(rec, X, Y) == 0
    assert len(rec.Z[0]) == 5


def test_multiview(rng):
    s = multiview_scene(rng, 4, 5)
    res = multiview_consistency(s.configs, s.centers)
    assert res.consistent and len(res.cameras) == 4
    configs = list(s.configs)
    configs[2] = perturb_point(configs[2], 4, rng)
    with pytest.raises(InconsistentPair) as info:
        multiview_consistency(configs, s.centers)
    assert (info.value.i, info.value.j, info.value.k) == (0, 2, 4)
    res = multiview_consistency(configs, s.centers, strict=False)
    assert not res.consistent and res.violation == (0, 2, 4)


def test_two_view_multiview_matches_verify(rng):
    s = two_view_scene(rng, 5)
    res = multiview_consistency([s.X, s.Y], [s.A.center, s.B.center])
    assert res.consistent
    A, B = cameras_from_fundamental(res.fundamentals[(0, 1)])
    assert verify_common_image(B, A, s.X, s.Y)
