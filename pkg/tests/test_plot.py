import re

import pytest

from flatland.errors import EmptyWindow
from flatland.loci import cubics_n6, solve_n7
from flatland.plot import Picture, Window, affine, curve_branches
from flatland.poly import Conic, Poly
from flatland.projective import point
from flatland.scenes import random_instance, two_view_scene

x, y, z = (Poly.var(i, 3) for i in range(3))


def test_window():
    w = Window(-1, 1, -1, 1, size=101)
    assert w.to_pixel(-1, 1) == (0, 0)
    assert w.to_pixel(1, -1) == (100, 100)
    for bad in ((1, 1, 0, 1), (0, 1, 2, -2), (0, float("nan"), 0, 1)):
        with pytest.raises(EmptyWindow):
            Window(*bad)


def test_affine():
    assert affine(point(2, 4, 2)) == (1.0, 2.0)
    assert affine(point(1, 0, 0)) is None


def test_circle_branches():
    w = Window(-2, 2, -2, 2, size=201)
    branches = curve_branches(Conic(x * x + y * y - z * z), w)
    assert len(branches) == 1
    pts = branches[0]
    # pixel radius of the unit circle is 50
    r = ((pts[:, 0] - 100) ** 2 + (pts[:, 1] - 100) ** 2) ** 0.5
    assert abs(r.mean() - 50) < 0.5


def _circles(svg, cls):
    return [(float(a), float(b)) for a, b in re.findall(rf'class="{cls}" id="[^"]*" cx="([\d.]+)" cy="([\d.]+)"', svg)]


def test_n6_picture_marks_data_on_curve(rng):
    X, Y = random_instance(rng, 6)
    Cx, _ = cubics_n6(X, Y)
    xs = [affine(p) for p in X if affine(p) is not None]
    lim = max(max(abs(c) for c in xy) for xy in xs) + 1
    w = Window(-lim, lim, -lim, lim, size=400)
    svg = Picture(w, [("Cx", Cx)], [(f"x{i}", p) for i, p in enumerate(X)]).svg()
    marks = _circles(svg, "data")
    assert len(marks) == len(xs)
    branch_pts = [tuple(p) for b in curve_branches(Cx, w) for p in b]
    for c, r in marks:
        assert min((c - u) ** 2 + (r - v) ** 2 for u, v in branch_pts) ** 0.5 < 2.0


def test_n7_picture_marks_real_centers(rng):
    s = two_view_scene(rng, 7)
    res = solve_n7(s.X, s.Y)
    w = Window(-1e4, 1e4, -1e4, 1e4, size=300)
    svg = Picture(w, [(f"w{k}", c) for k, c in enumerate(res.conics_a)], [],
                  [(f"c{k}", a) for k, (a, _) in enumerate(res.pairs)]).svg()
    n_real = sum(affine(a) is not None and w.contains(*affine(a)) for a, _ in res.pairs)
    assert len(_circles(svg, "center")) == n_real >= 1
