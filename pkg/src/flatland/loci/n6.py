"""Six points: the cubic curves Cx, Cy and the point transfer between them."""

from dataclasses import dataclass

import numpy as np

from ..epipolar import constraint_space
from ..errors import DegenerateConfig, NonGeneric, NotOnCurve, RankAnomaly, RouteMismatch
from ..invariants import COVARIANT, _evaluate_basis, _pullback_table, coble_scalars
from ..linalg import Backend, as_array, det, harmonize, is_exact, is_zero, is_zero_vector, left_nullspace, max_abs, \
    nullspace, to_float
from ..poly import Cubic, forms_proportional, fourth_intersection, interpolate_form, conic_through_five, \
    line_curve_intersection
from ..projective import PPoint, _coords, as_config, proportional, standard_position_homography
from .n5 import Transfer5


def _basis(X, Y):
    cs = constraint_space(X, Y)
    if cs.dim != 3:
        raise NonGeneric(f"constraint space has dimension {cs.dim}, expected 3")
    return cs.basis


def _stack(Fs, a, transpose=False):
    cols = [(F.T if transpose else F).dot(a) for F in Fs]
    return np.array(cols, dtype=cols[0].dtype).T


def _det_evaluator(Fs, transpose):
    def ev(p):
        Fs_h = harmonize(*Fs, p.coords)
        return det(_stack(Fs_h[:-1], Fs_h[-1], transpose))
    return ev


def _mixed_evaluator(X, Y):
    # sum_k cbar_k(Y) * cov_k(X; u): vanishes where the X-pullback meets Y's Coble hyperplane
    cbar = coble_scalars(Y)

    def ev(p):
        cov = _evaluate_basis(COVARIANT, _pullback_table(list(X), p))
        total = 0
        for c, v in zip(cbar, cov):
            total = total + c * v
        return total
    return ev


def _check_six(X, Y):
    X, Y = as_config(X, "X"), as_config(Y, "Y")
    if X.n != 6 or Y.n != 6:
        raise NonGeneric("the n = 6 routines need six points per plane")
    return X, Y


def cubics_n6(X, Y, cross_check=True):
    """(Cx, Cy): Cx = {det[F1 a | F2 a | F3 a] = 0}, Cy likewise with transposes.

    Each determinant cubic is checked against the mixed Coble cubic.
    """
    X, Y = _check_six(X, Y)
    Fs = _basis(X, Y)
    Cx = Cubic(interpolate_form(3, _det_evaluator(Fs, False)))
    Cy = Cubic(interpolate_form(3, _det_evaluator(Fs, True)))
    if Cx.is_zero() or Cy.is_zero():
        raise NonGeneric("the determinant cubic vanishes identically")
    if cross_check:
        for C, (P, Q) in ((Cx, (X, Y)), (Cy, (Y, X))):
            mixed = interpolate_form(3, _mixed_evaluator(P, Q))
            if mixed.is_zero():
                raise NonGeneric("Coble scalars vanish; the mixed cubic is undefined")
            if not forms_proportional(C, mixed):
                raise RouteMismatch("determinant cubic and mixed Coble cubic differ")
    return Cx, Cy


def _transfer(Fs, cfg, p, transpose):
    v = _coords(p)
    for i, x in enumerate(cfg):
        if proportional(v, x):
            raise RankAnomaly(f"point coincides with data point {i}; it lies outside the locus")
    Fh = harmonize(*Fs, v)
    v = Fh[-1]
    M = _stack(Fh[:-1], v, transpose)
    scale = max_abs(M) ** 3 if max_abs(M) else 1.0
    if not is_zero(det(M), scale):
        raise NotOnCurve("point is not on the cubic")
    ker = nullspace(M)
    if len(ker) != 1:
        raise RankAnomaly(f"transfer nullspace has dimension {len(ker)}")
    s = ker[0]
    F = sum((s[k] * Fh[k] for k in range(1, 3)), s[0] * Fh[0])
    if transpose:
        F = F.T
    out = left_nullspace(F)
    if len(out) != 1:
        raise RankAnomaly("fundamental matrix of the transfer does not have rank 2")
    return PPoint(out[0])


def b_given_a_n6(X, Y, a):
    """b paired with a point a of Cx."""
    X, Y = _check_six(X, Y)
    return _transfer(_basis(X, Y), X, a, False)


def a_given_b_n6(X, Y, b):
    X, Y = _check_six(X, Y)
    return _transfer(_basis(X, Y), Y, b, True)


def _closed_form_hats(X, Y):
    """x-hat_i and y-hat_i as the exceptional points of the five-point subsets."""
    xs, ys = [], []
    for i in range(6):
        keep = [k for k in range(6) if k != i]
        try:
            c = Transfer5(X.subset(keep), Y.subset(keep))
        except DegenerateConfig as exc:
            raise NonGeneric(str(exc)) from None
        xs.append(c.xhat)
        ys.append(c.yhat)
    return xs, ys


def _omega(cfg, i):
    """Conic through all points of cfg except the i-th."""
    pts = [cfg[k] for k in range(6) if k != i]
    return conic_through_five(*pts)


def _transport_conic(src, dst, i, j, omega):
    """Image of omega under the homography taking src_k -> dst_k for k not in {i, j}."""
    from ..poly import transform_curve
    keep = [k for k in range(6) if k not in (i, j)]
    Hs = standard_position_homography(*[src[k] for k in keep])
    Hd = standard_position_homography(*[dst[k] for k in keep])
    H = Hd.inverse() @ Hs
    return transform_curve(H.matrix, omega)


def _conic_route_hat(src, dst, i):
    """Common point of the conics omega_{dst, ij} for j != i (checks all five)."""
    others = [j for j in range(6) if j != i]
    omega = _omega(src, i)
    conics = {j: _transport_conic(src, dst, i, j, omega) for j in others}
    j0, j1 = others[0], others[1]
    shared = [dst[k] for k in range(6) if k not in (i, j0, j1)]
    p = fourth_intersection(shared[0], shared[1], shared[2], conics[j0], conics[j1])
    for j in others[2:]:
        if not _on_conic(conics[j], p):
            raise RouteMismatch(f"conic omega_{i}{j} misses the exceptional point")
    return p


def _on_conic(C, p):
    v = _coords(p)
    val = C(v)
    if is_exact(v) and C.backend is Backend.EXACT:
        return val == 0
    return abs(val) <= 1e-7 * float(C.to_float().scale() or 1) * float(np.max(np.abs(to_float(v)))) ** 2


def exceptional_points_n6(X, Y, curves=None):
    """(x-hat_1..6, y-hat_1..6), computed by two routes that must agree."""
    X, Y = _check_six(X, Y)
    xs, ys = _closed_form_hats(X, Y)
    for i in range(6):
        try:
            px = _conic_route_hat(Y, X, i)
            py = _conic_route_hat(X, Y, i)
        except DegenerateConfig as exc:
            raise NonGeneric(str(exc)) from None
        if not (px == xs[i] and py == ys[i]):
            raise RouteMismatch(f"exceptional point {i}: closed form and conic route disagree")
    Cx, Cy = curves if curves is not None else cubics_n6(X, Y, cross_check=False)
    for C, pts, name in ((Cx, xs, "Cx"), (Cy, ys, "Cy")):
        for i, p in enumerate(pts):
            if not _on_cubic(C, p):
                raise NonGeneric(f"exceptional point {i} is off {name}")
    return xs, ys


def _on_cubic(C, p):
    v = _coords(p)
    val = C(v)
    if is_exact(v) and C.backend is Backend.EXACT:
        return val == 0
    return abs(val) <= 1e-7 * float(C.to_float().scale() or 1) * float(np.max(np.abs(to_float(v)))) ** 3


def chord_point(C, p, q):
    """Third point of the line pq on the cubic C, where p and q lie on C (exact when inputs are)."""
    from ..poly import restrict_to_line
    g = restrict_to_line(C, p, q)
    c = g.coeffs
    # g(s, t) = c0 t^3 + c1 s t^2 + c2 s^2 t + c3 s^3 vanishes at [1:0] (p) and [0:1] (q)
    if not (is_zero(c[0], max_abs(as_array(list(c))) or 1) and is_zero(c[3], max_abs(as_array(list(c))) or 1)):
        raise NotOnCurve("chord endpoints are not on the cubic")
    # remaining factor c1 t + c2 s vanishes at s = c1, t = -c2
    p, q = harmonize(_coords(p), _coords(q))
    s, t = c[1], -c[2]
    w = s * p + t * q
    if is_zero_vector(w):
        raise NotOnCurve("line is tangent to the cubic at both points")
    return PPoint(w)


@dataclass
class Curves6Sampler:
    """Points (a, b) of E6: random lines meet Cx, the other point follows by transfer."""
    X: object
    Y: object
    Cx: object

    def sample(self, rng, count):
        from ..scenes import random_point
        out = []
        Fs = _basis(self.X, self.Y)
        while len(out) < count:
            p0, p1 = random_point(rng).to_float(), random_point(rng).to_float()
            try:
                pts = line_curve_intersection(p0, p1, self.Cx.to_float())
            except Exception:
                continue
            for a in pts:
                try:
                    b = _transfer(Fs, self.X, a, False)
                except (RankAnomaly, NotOnCurve):
                    continue
                out.append((a, b))
        return out[:count]
