"""Five points: the degree-5 Cremona map a -> b and its base points."""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm

import numpy as np

from ..errors import BasePoint, DegenerateConfig, NonGeneric
from ..linalg import Backend, as_array, harmonize, inv, is_exact, is_zero, is_zero_vector, to_float
from ..poly import Poly, TrinaryForm, fourth_intersection
from ..projective import PPoint, _coords, as_config, proportional, standard_position_homography
from ..serialize import form_to_json, vector_to_json
from .n4 import conic_of_b_given_a_n4

E = ((1, 0, 0), (0, 1, 0), (0, 0, 1))

# Points of the homaloidal net used to certify base-point multiplicities
NET_WEIGHTS = ((1, 2, 3), (2, -1, 5), (-3, 4, 1))


def quadratic_cremona(p):
    """[x1 : x2 : x3] -> [x2 x3 : x1 x3 : x1 x2]."""
    v = _coords(p)
    for i, e in enumerate(E):
        if proportional(v, as_array(list(e))):
            raise BasePoint(f"e{i + 1}")
    return PPoint(np.array([v[1] * v[2], v[0] * v[2], v[0] * v[1]], dtype=v.dtype))


def _unit(v):
    """Float vectors rescaled to largest entry 1 (exact vectors unchanged)."""
    if is_exact(v):
        return v
    m = np.max(np.abs(v))
    return v / m if m > 0 else v


def _standard_quadrics(x5, y5):
    """q1, q2, q3 in standard position (x_i = y_i = e_i for i <= 4) as forms in a.

    b = [a1 q2 q3 : a2 q1 q3 : a3 q1 q2].  They come from crossing the two
    lines in f_q-coordinates that carry b, so every coefficient is a 2x2 minor
    of the fifth points.
    """
    x1, x2, x3 = x5
    y1, y2, y3 = y5
    a = [Poly.var(i, 3) for i in range(3)]
    q1 = -(a[0] * a[0] * (x2 * y3 - x3 * y2) + a[0] * a[1] * (x3 * y2 - x1 * y3)
           + a[0] * a[2] * (x1 * y2 - x2 * y3) + a[1] * a[2] * (x1 * y3 - x1 * y2))
    q2 = (a[1] * a[1] * (x1 * y3 - x3 * y1) + a[0] * a[1] * (x3 * y1 - x2 * y3)
          + a[0] * a[2] * (x2 * y3 - x2 * y1) + a[1] * a[2] * (x2 * y1 - x1 * y3))
    q3 = (a[2] * a[2] * (x2 * y1 - x1 * y2) + a[0] * a[1] * (x3 * y1 - x3 * y2)
          + a[0] * a[2] * (x3 * y2 - x2 * y1) + a[1] * a[2] * (x1 * y2 - x3 * y1))
    return q1, q2, q3


def _exceptional_standard(x5, y5):
    """Sixth base point of the standard-position map (x5, y5 in standard coordinates)."""
    x1, x2, x3 = x5
    y1, y2, y3 = y5
    dens = (y3 * x2 - x3 * y2, y3 * x1 - x3 * y1, y1 * x2 - x1 * y2)
    nums = (y3 - y2, y3 - y1, y1 - y2)
    scale = max(abs(complex(v)) for v in list(x5) + list(y5)) ** 2
    if any(is_zero(d, scale) for d in dens):
        raise NonGeneric("exceptional point is undefined (vanishing minor of the fifth points)")
    return np.array([n / d for n, d in zip(nums, dens)], dtype=x5.dtype)


@dataclass
class CremonaMap:
    """Rational map of P^2 given by three forms, with its base points.

    `base_points` holds (ident, point, multiplicity); idents are data-point
    indices (0-based) or "exceptional".
    """
    forms: tuple
    base_points: list = field(default_factory=list)

    @property
    def degree(self):
        return self.forms[0].form_degree

    def image_vec(self, p):
        return np.array([f(p) for f in self.forms])

    def __call__(self, p):
        v = _coords(p)
        for ident, q, _ in self.base_points:
            if proportional(v, q):
                raise BasePoint(ident)
        img = self.image_vec(v)
        if is_zero_vector(img):
            raise BasePoint(None, "all coordinate forms vanish")
        return PPoint(img)

    def net_member(self, weights):
        total = Poly({}, 3)
        for w, f in zip(weights, self.forms):
            total = total + f * w
        return total

    def to_dict(self):
        return {"degree": self.degree, "forms": [form_to_json(f) for f in self.forms],
                "base_points": [{"id": ident, "point": vector_to_json(p.coords), "multiplicity": m}
                                for ident, p, m in self.base_points]}


class Transfer5:
    """The n = 5 transfer a -> b, b -> a, with exceptional points x-hat and y-hat."""

    def __init__(self, X, Y):
        X, Y = as_config(X, "X"), as_config(Y, "Y")
        if X.n != 5 or Y.n != 5:
            raise NonGeneric("the Cremona map needs five points per plane")
        try:
            Hx = standard_position_homography(*X[:4])
            Hy = standard_position_homography(*Y[:4])
        except DegenerateConfig as exc:
            raise NonGeneric(str(exc)) from None
        Mx, My, x5, y5 = harmonize(Hx.matrix, Hy.matrix, X[4].coords, Y[4].coords)
        self.X, self.Y = X, Y
        self.Hx, self.Hy = Mx, My
        self.Hx_inv, self.Hy_inv = inv(Mx), inv(My)
        self.x5, self.y5 = _unit(Mx.dot(x5)), _unit(My.dot(y5))
        if any(is_zero(c, np.max(np.abs(to_float(self.x5)))) for c in self.x5) or \
                any(is_zero(c, np.max(np.abs(to_float(self.y5)))) for c in self.y5):
            raise NonGeneric("fifth point lies on a side of the reference triangle")
        self.q = _standard_quadrics(self.x5, self.y5)
        self.q_back = _standard_quadrics(self.y5, self.x5)
        self.xhat = PPoint(self.Hx_inv.dot(_exceptional_standard(self.x5, self.y5)))
        self.yhat = PPoint(self.Hy_inv.dot(_exceptional_standard(self.y5, self.x5)))

    # pointwise evaluation in standard coordinates
    @staticmethod
    def _apply(q, v):
        q1, q2, q3 = (f(v) for f in q)
        return np.array([v[0] * q2 * q3, v[1] * q1 * q3, v[2] * q1 * q2], dtype=v.dtype if is_exact(v)
                        else complex)

    def _transfer(self, p, forward):
        cfg, H, Hinv_other, q, hat = ((self.X, self.Hx, self.Hy_inv, self.q, self.xhat) if forward
                                      else (self.Y, self.Hy, self.Hx_inv, self.q_back, self.yhat))
        v = _coords(p)
        for i, x in enumerate(cfg):
            if proportional(v, x):
                raise BasePoint(i)
        if proportional(v, hat):
            raise BasePoint("exceptional")
        H, v = harmonize(H, v)
        img = self._apply(q, _unit(H.dot(v)))
        if is_zero_vector(img):
            raise BasePoint(None, "all coordinate forms vanish")
        Hinv_other, img = harmonize(Hinv_other, _unit(img))
        return PPoint(_unit(Hinv_other.dot(img)))

    def forward(self, a):
        return self._transfer(a, True)

    def backward(self, b):
        return self._transfer(b, False)

    def _map(self, forward):
        H, Hinv_other, q = (self.Hx, self.Hy_inv, self.q) if forward else (self.Hy, self.Hx_inv, self.q_back)
        lin = [Poly.linear(list(H[i])) for i in range(3)]
        q1, q2, q3 = (f.compose(lin) for f in q)
        std = [lin[0] * q2 * q3, lin[1] * q1 * q3, lin[2] * q1 * q2]
        forms = []
        for i in range(3):
            total = Poly({}, 3)
            for j in range(3):
                total = total + std[j] * Hinv_other[i, j]
            forms.append(total)
        forms = [TrinaryForm(f, 5) for f in _common_primitive(forms)]
        cfg, hat = (self.X, self.xhat) if forward else (self.Y, self.yhat)
        base = [(i, x, 2) for i, x in enumerate(cfg)] + [("exceptional", hat, 2)]
        return CremonaMap(tuple(forms), base)

    @cached_property
    def forward_map(self):
        return self._map(True)

    @cached_property
    def backward_map(self):
        return self._map(False)


def _common_primitive(polys):
    """Rescale forms by one common factor: integer coefficients without common divisor when exact,
    unit largest coefficient otherwise."""
    coeffs = [c for f in polys for c in f.terms.values()]
    if all(isinstance(c, Fraction) for c in coeffs):
        den = lcm(*[c.denominator for c in coeffs])
        g = gcd(*[int(c * den) for c in coeffs]) or 1
        k = Fraction(den, g)
    else:
        k = 1.0 / max(abs(complex(c)) for c in coeffs)
    return [f * k for f in polys]


def cremona5_forward(X, Y, a):
    """b with (a, b) a center pair for five-point data."""
    return Transfer5(X, Y).forward(a)


def cremona5_backward(X, Y, b):
    return Transfer5(X, Y).backward(b)


def b_by_conics_n5(X, Y, a):
    """b as the fourth common point of two n = 4 conics (subsets 1234 and 1235)."""
    X, Y = as_config(X, "X"), as_config(Y, "Y")
    w1 = conic_of_b_given_a_n4(X.subset([0, 1, 2, 3]), Y.subset([0, 1, 2, 3]), a)
    w2 = conic_of_b_given_a_n4(X.subset([0, 1, 2, 4]), Y.subset([0, 1, 2, 4]), a)
    return fourth_intersection(Y[0], Y[1], Y[2], w1, w2)


def _vanishing_order_ok(f, p):
    """f and its first partials vanish at p, some second partial does not."""
    v = _coords(p)
    exact = is_exact(v) and f.backend is Backend.EXACT

    def zero(x, g):
        if exact:
            return x == 0
        return abs(x) <= 1e-8 * float(g.scale() or 1) * float(np.max(np.abs(to_float(v)))) ** max(g.degree, 0)

    if not zero(f(v), f):
        return False
    firsts = [f.partial(i) for i in range(3)]
    if not all(zero(g(v), g) for g in firsts):
        return False
    seconds = [g.partial(j) for g in firsts for j in range(3)]
    return any(not zero(h(v), h) for h in seconds if not h.is_zero())


def cremona5_base_points(X, Y):
    """The six base points x1..x5, x-hat of the forward map, each verified of multiplicity 2."""
    c = Transfer5(X, Y)
    fmap = c.forward_map
    nets = [fmap.net_member(w) for w in NET_WEIGHTS]
    for ident, p, _ in fmap.base_points:
        if not all(_vanishing_order_ok(h, p) for h in nets):
            raise NonGeneric(f"base point {ident} does not have multiplicity 2")
    return list(fmap.base_points)
