"""Four points: the bidegree-(2,2) surface of center pairs."""

import numpy as np

from ..errors import CenterOnPoint, DegenerateConfig, DegenerateConstruction, NonGeneric
from ..linalg import harmonize, is_zero, is_zero_vector, to_float
from ..poly import BiForm, Conic, Poly
from ..projective import PPoint, _coords, as_config, bracket3, bracket_scale, cross_vec, proportional, \
    standard_position_homography


def _standard_e4():
    """a3(a1 - a2) b1 b2 + a2(a3 - a1) b1 b3 + a1(a2 - a3) b2 b3 in (a1, a2, a3, b1, b2, b3)."""
    v = [Poly.var(i, 6) for i in range(6)]
    a1, a2, a3, b1, b2, b3 = v
    return a3 * (a1 - a2) * b1 * b2 + a2 * (a3 - a1) * b1 * b3 + a1 * (a2 - a3) * b2 * b3


def _homographies(X, Y):
    try:
        return standard_position_homography(*X[:4]), standard_position_homography(*Y[:4])
    except DegenerateConfig as exc:
        raise NonGeneric(str(exc)) from None


def e4_form(X, Y):
    """Defining form of the n = 4 locus: E(H_x a, H_y b) for the standard-position form E."""
    X, Y = as_config(X, "X"), as_config(Y, "Y")
    if X.n != 4 or Y.n != 4:
        raise NonGeneric("e4_form needs four points per plane")
    Hx, Hy = _homographies(X, Y)
    Mx, My = harmonize(Hx.matrix, Hy.matrix)
    subs = []
    for M, off in ((Mx, 0), (My, 3)):
        for i in range(3):
            coeffs = [0] * 6
            for j in range(3):
                coeffs[off + j] = M[i, j]
            subs.append(Poly.linear(coeffs))
    return BiForm(_standard_e4().compose(subs), (2, 2))


def _linear_bracket(p, q):
    """[p q u] as a linear form in u."""
    return Poly.linear(list(cross_vec(p, q)))


def conic_of_b_given_a_n4(X, Y, a):
    """Conic of centers b through y1..y4 whose conic cross-ratio matches a.

    [13b][24b] [14a][23a] - [14b][23b] [13a][24a] = 0.
    """
    X, Y = as_config(X, "X"), as_config(Y, "Y")
    for i, x in enumerate(X):
        if proportional(x, a):
            raise CenterOnPoint(f"a coincides with x[{i}]")
    x1, x2, x3, x4 = X
    y1, y2, y3, y4 = Y
    K = bracket3(x1, x4, a) * bracket3(x2, x3, a)
    L = bracket3(x1, x3, a) * bracket3(x2, x4, a)
    scale = bracket_scale(x1, x2, x3, x4, a, a)
    if is_zero(K, scale) or is_zero(L, scale):
        raise NonGeneric("a lies on a line through two data points; the conic degenerates",
                         ["K" if is_zero(K, scale) else "L"])
    f = _linear_bracket(y1, y3) * _linear_bracket(y2, y4) * K - _linear_bracket(y1, y4) * _linear_bracket(y2, y3) * L
    return Conic(f)


def _meet(u, v):
    w = cross_vec(u, v)
    if is_zero_vector(w):
        raise DegenerateConstruction("required intersection is undefined")
    return w


def _incident(p, line):
    p, line = harmonize(_coords(p), _coords(line))
    return is_zero(p.dot(line), np.max(np.abs(to_float(p))) * np.max(np.abs(to_float(line))))


def construct_b_perspectivity_n4(X, Y, a, lx):
    """Straightedge construction of a center b for a, using the auxiliary line lx.

    Project x_i from a onto lx, carry the four images to the line y1 y2 by the
    perspectivity with center O = (x1' y1) meet (x2' y2), and intersect the
    lines y3 y3' and y4 y4'.
    """
    X, Y = as_config(X, "X"), as_config(Y, "Y")
    a, lx = _coords(a), _coords(lx)
    xs = [_coords(x) for x in X]
    ys = [_coords(y) for y in Y]
    if _incident(a, lx):
        raise DegenerateConstruction("a lies on the auxiliary line")
    xp = [_meet(_meet(a, x), lx) for x in xs]
    ly = _meet(ys[0], ys[1])
    if proportional(ly, lx):
        raise DegenerateConstruction("the auxiliary line equals y1 y2")
    if _incident(ys[0], lx) or _incident(ys[1], lx):
        raise DegenerateConstruction("the auxiliary line passes through y1 or y2")
    O = _meet(_meet(xp[0], ys[0]), _meet(xp[1], ys[1]))
    if _incident(O, lx) or _incident(O, ly):
        raise DegenerateConstruction("perspectivity center lies on one of the lines")
    yp = [_meet(_meet(O, xp[k]), ly) for k in (2, 3)]
    b = _meet(_meet(ys[2], yp[0]), _meet(ys[3], yp[1]))
    return PPoint(b)
