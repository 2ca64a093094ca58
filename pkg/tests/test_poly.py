from fractions import Fraction

import numpy as np
import pytest
import sympy

from flatland.errors import InconsistentEvaluator, NonUniqueConic, SharedComponent
from flatland.linalg import to_float
from flatland.poly import (
    BinaryForm, Conic, Cubic, Poly, binary_roots, conic_through_five, forms_proportional, fourth_intersection,
    interpolate_form, line_curve_intersection, pencil_determinant, pencil_intersect_conics, rational_roots,
    restrict_to_line, tangent_line, transform_curve,
)
from flatland.projective import PPoint, bracket3, point, proportional
from flatland.scenes import random_homography, random_point

E1, E2, E3, E4 = point(1, 0, 0), point(0, 1, 0), point(0, 0, 1), point(1, 1, 1)
x, y, z = (Poly.var(i, 3) for i in range(3))


def _ratios(roots):
    return sorted(complex(r.coords[1] / r.coords[0]).real for r in roots)


def test_binary_roots_examples():
    st = binary_roots(BinaryForm([0, 1, 0]))
    assert {tuple(np.round(np.abs(r.coords), 12)) for r in st} == {(1.0, 0.0), (0.0, 1.0)}
    # (t - s)(t - 2s)(t - 3s): coeffs multiply s^i t^(3-i)
    assert np.allclose(_ratios(binary_roots(BinaryForm([1, -6, 11, -6]))), [1, 2, 3])


def test_binary_roots_against_sympy(rng):
    s = sympy.symbols("s")
    for _ in range(30):
        c = [int(v) for v in rng.integers(-9, 10, size=6)]
        if c[0] == 0:
            continue
        key = lambda w: (round(w.real, 6), w.imag)
        want = sorted((complex(r) for r in sympy.Poly(c, s).nroots(n=30)), key=key)
        got = sorted((complex(r.coords[1] / r.coords[0]) for r in binary_roots(BinaryForm(c))), key=key)
        assert np.allclose(want, got, atol=1e-6)


def test_clustered_roots_are_separated():
    # (t - a s)(t - b s)(t - c s) with roots 1e-5 apart
    a, b, c = Fraction(14175, 10000), Fraction(141751, 100000), Fraction(141752, 100000)
    coeffs = [1, -(a + b + c), a * b + a * c + b * c, -a * b * c]
    got = _ratios(binary_roots(BinaryForm(coeffs)))
    assert np.allclose(got, [float(a), float(b), float(c)], rtol=0, atol=1e-12)
    assert sorted(r.coords[1] / r.coords[0] for r in rational_roots(BinaryForm(coeffs))) == [a, b, c]


def test_rational_roots():
    f = BinaryForm([6, -5, 1])  # 6 t^2 - 5 s t + s^2 = (2t - s)(3t - s)
    assert sorted(r.coords[1] / r.coords[0] for r in rational_roots(f)) == [Fraction(1, 3), Fraction(1, 2)]
    assert rational_roots(BinaryForm([1, 0, -2])) == []


def test_conic_through_five():
    C = conic_through_five(E1, E2, E3, E4, point(1, 2, 3))
    for p in (E1, E2, E3, E4, point(1, 2, 3)):
        assert C(p.coords) == 0
    with pytest.raises(NonUniqueConic):
        conic_through_five(point(1, 0, 1), point(2, 0, 1), point(3, 0, 1), point(4, 0, 1), E2)


def test_conic_scale_unique_under_permutation(rng):
    pts = [random_point(rng) for _ in range(5)]
    assert forms_proportional(conic_through_five(*pts), conic_through_five(*pts[::-1]))


def test_pencil_intersection():
    C1, C2 = Conic(x * z - y * y), Conic(x * x - y * z)
    pts = pencil_intersect_conics(C1, C2)
    assert len(pts) == 4
    for p in pts:
        v = p.coords / np.linalg.norm(p.coords)
        assert abs(C1.to_float()(v)) <= 1e-8 and abs(C2.to_float()(v)) <= 1e-8
    assert any(proportional(p, point(1.0, 1.0, 1.0)) for p in pts)
    with pytest.raises(SharedComponent):
        pencil_intersect_conics(C1, C1)


def test_pencil_contains_shared_points():
    q = point(2, -3, 7)
    C1 = conic_through_five(E1, E2, E3, q, point(1, 2, 5))
    C2 = conic_through_five(E1, E2, E3, q, point(3, -1, 2))
    pts = pencil_intersect_conics(C1, C2)
    for want in (E1, E2, E3, q):
        assert any(proportional(p, to_float(want.coords)) for p in pts)


def test_fourth_intersection(rng):
    for _ in range(20):
        a, x1, x2, x3, x4, x5 = (random_point(rng) for _ in range(6))
        try:
            C1 = conic_through_five(a, x1, x2, x3, x4)
            C2 = conic_through_five(a, x1, x2, x3, x5)
        except NonUniqueConic:
            continue
        if any(bracket3(*t) == 0 for t in ((x1, x2, x3), (a, x1, x2), (a, x1, x3), (a, x2, x3))):
            continue
        got = fourth_intersection(x1, x2, x3, C1, C2)
        assert got == a
        assert C1(got.coords) == 0 and C2(got.coords) == 0
        # independent of the auxiliary point
        for aux in ((2, 3, 7), (1, -5, 4), (3, 3, -2)):
            try:
                assert fourth_intersection(x1, x2, x3, C1, C2, aux=as_list(aux)) == a
            except Exception as exc:
                assert type(exc).__name__ == "PreconditionFailed"


def as_list(t):
    from flatland.linalg import as_array
    return as_array(list(t))


def test_transform_curve(rng):
    C = Conic(x * z - y * y)
    I = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert forms_proportional(transform_curve(I, C), C)
    H1, H2 = random_homography(rng), random_homography(rng)
    assert forms_proportional(transform_curve(H2, transform_curve(H1, C)), transform_curve(H2.dot(H1), C))
    for k in range(1, 200):
        p = point(k * k, k, 1)  # on xz = y^2
        assert transform_curve(H1, C)(H1.dot(p.coords)) == 0


def test_interpolate_form():
    lin = interpolate_form(1, lambda p: bracket3(E1, E2, p))
    assert forms_proportional(lin, Poly.var(2, 3))
    f = Cubic(x * x * y - 3 * y * z * z + z ** 3)
    assert interpolate_form(3, lambda p: f(p.coords)) == f
    with pytest.raises(InconsistentEvaluator):
        interpolate_form(2, lambda p: f(p.coords))


def test_line_curve_intersection():
    C = conic_through_five(E1, E2, E3, E4, point(1, 2, 3))
    pts = line_curve_intersection(E1, E4, C)
    assert len(pts) == 2
    assert {tuple(np.round(p.canonical().to_float().coords.real, 9)) for p in pts} == {(1, 0, 0), (1, 1, 1)}
    cub = Cubic(x ** 3 + y ** 3 - z ** 3 + x * y * z)
    assert len(line_curve_intersection(point(1, 2, 3), point(-2, 1, 5), cub.to_float())) == 3


def test_tangent_gives_double_root():
    C = Conic(x * z - y * y)
    p = point(1, 1, 1)
    t = tangent_line(C, p.coords)
    q = PPoint(np.cross(np.array(t, dtype=object), [1, 0, 0]))
    g = restrict_to_line(C, p, q)
    roots = binary_roots(g)
    assert len(roots) == 2 and proportional(roots[0], roots[1])


def test_pencil_determinant_degree(rng):
    M1 = np.array([[1, 0, 0], [0, 1, 0], [0, 0, 0]], dtype=object)
    M2 = np.array([[0, 0, 0], [0, 1, 0], [0, 0, 1]], dtype=object)
    g = pencil_determinant(M1, M2)
    # det(s M1 + t M2) = s (s + t) t
    assert g.form_degree == 3
    assert [int(c) for c in g.coeffs] == [0, 1, 1, 0]
