"""Sparse polynomials, dense low-degree forms, root finding and curve intersections."""

from fractions import Fraction
from functools import lru_cache
from numbers import Integral

import numpy as np

from .errors import (
    InconsistentEvaluator, LineOnCurve, NonUniqueConic, PreconditionFailed, ProportionalInputs,
    SharedComponent, SingularHomography,
)
from .linalg import (
    EPS_ABS, EPS_REL, Backend, as_array, harmonize, inv, is_exact, is_zero_vector, max_abs, nullspace,
    solve, to_float,
)
from .projective import PPoint, ProjMap, _coords, cross_vec, proportional, standard_position_homography

CLUSTER_RADIUS = 1e-6


@lru_cache(maxsize=None)
def monomials(nvars, degree):
    """Exponent tuples of the given total degree, graded-lex (x1 first)."""
    if nvars == 1:
        return ((degree,),)
    out = []
    for e in range(degree, -1, -1):
        for rest in monomials(nvars - 1, degree - e):
            out.append((e,) + rest)
    return tuple(out)


def _zero_like(c):
    return Fraction(0) if isinstance(c, Fraction) else 0j


class Poly:
    """Polynomial as a dict {exponent tuple: coefficient}."""

    def __init__(self, terms, nvars):
        self.nvars = nvars
        # integers are exact coefficients
        self.terms = {tuple(e): Fraction(int(c)) if isinstance(c, Integral) and not isinstance(c, bool) else c
                      for e, c in terms.items() if c != 0}

    # construction helpers
    @classmethod
    def const(cls, c, nvars):
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def var(cls, i, nvars):
        e = [0] * nvars
        e[i] = 1
        return cls({tuple(e): Fraction(1)}, nvars)

    @classmethod
    def linear(cls, coeffs):
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            e = [0] * n
            e[i] = 1
            terms[tuple(e)] = c
        return cls(terms, n)

    # arithmetic
    def _coerce(self, other):
        return other if isinstance(other, Poly) else Poly.const(other, self.nvars)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms[e] + c if e in terms else c
        return Poly(terms, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return Poly({e: -c for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly({e: c * other for e, c in self.terms.items()}, self.nvars)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms[e] + c1 * c2 if e in terms else c1 * c2
        return Poly(terms, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = Poly.const(Fraction(1), self.nvars)
        for _ in range(k):
            out = out * self
        return out

    # inspection
    def is_zero(self):
        return not self.terms

    @property
    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self, d=None):
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1 and (d is None or not degs or degs == {d})

    @property
    def backend(self):
        return Backend.EXACT if all(isinstance(c, Fraction) for c in self.terms.values()) else Backend.FLOAT

    def to_float(self):
        return Poly({e: complex(c) for e, c in self.terms.items()}, self.nvars)

    def scale(self):
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def __call__(self, *values):
        vals = values[0] if len(values) == 1 else values
        vals = _coords(vals) if not isinstance(vals, np.ndarray) else vals
        if any(not isinstance(c, Fraction) for c in self.terms.values()) or not is_exact(vals):
            vals = to_float(vals)
        powers = {}
        total = None
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in powers:
                        powers[key] = vals[i] ** k
                    term = term * powers[key]
            total = term if total is None else total + term
        if total is None:
            return Fraction(0) if is_exact(vals) else 0j
        return total

    def partial(self, i):
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                terms[tuple(f)] = c * e[i]
        return Poly(terms, self.nvars)

    def compose(self, subs):
        """Substitute variable i by the polynomial subs[i]."""
        m = subs[0].nvars
        cache = {}
        out = Poly({}, m)
        for e, c in self.terms.items():
            term = Poly.const(c, m)
            for i, k in enumerate(e):
                if k:
                    if (i, k) not in cache:
                        cache[(i, k)] = subs[i] ** k
                    term = term * cache[(i, k)]
            out = out + term
        return out

    def coeff(self, e):
        return self.terms.get(tuple(e), 0)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    __hash__ = None

    def __repr__(self):
        return f"Poly({self.terms!r}, nvars={self.nvars})"


def _dense(poly, monos, backend):
    zero = Fraction(0) if backend is Backend.EXACT else 0j
    return [poly.terms.get(m, zero) for m in monos]


def _poly_from_dense(coeffs, monos, nvars):
    coeffs = list(as_array(list(coeffs))) if not isinstance(coeffs, np.ndarray) else list(coeffs)
    if len(coeffs) != len(monos):
        raise ValueError(f"expected {len(monos)} coefficients, got {len(coeffs)}")
    return Poly(dict(zip(monos, coeffs)), nvars)


class TrinaryForm(Poly):
    """Homogeneous form of degree d in three variables."""

    def __init__(self, source, degree=None):
        if isinstance(source, Poly):
            if source.nvars != 3:
                raise ValueError("a trinary form has three variables")
            if degree is None:
                degree = source.degree
            if not source.is_homogeneous(degree):
                raise ValueError(f"polynomial is not homogeneous of degree {degree}")
            super().__init__(source.terms, 3)
        else:
            coeffs = list(source)
            if degree is None:
                degree = next(d for d in range(64) if (d + 1) * (d + 2) // 2 >= len(coeffs))
            super().__init__(_poly_from_dense(coeffs, monomials(3, degree), 3).terms, 3)
        self.form_degree = degree

    @property
    def monomials(self):
        return monomials(3, self.form_degree)

    @property
    def coeffs(self):
        return _dense(self, self.monomials, self.backend)

    def coeff_array(self):
        return as_array(self.coeffs) if self.backend is Backend.EXACT else np.array(self.coeffs, dtype=complex)

    def to_float(self):
        return type(self)(Poly.to_float(self), self.form_degree)

    def gradient(self, p):
        return [self.partial(i)(p) for i in range(3)]

    def __repr__(self):
        return f"{type(self).__name__}(degree={self.form_degree}, coeffs={self.coeffs})"


class Conic(TrinaryForm):
    def __init__(self, source):
        if isinstance(source, np.ndarray) and source.ndim == 2:
            source = Conic._from_matrix(source)
        super().__init__(source, 2)
        if self.is_zero():
            raise ValueError("zero conic")

    @staticmethod
    def _from_matrix(Q):
        return Poly({(2, 0, 0): Q[0, 0], (1, 1, 0): 2 * Q[0, 1], (1, 0, 1): 2 * Q[0, 2],
                     (0, 2, 0): Q[1, 1], (0, 1, 1): 2 * Q[1, 2], (0, 0, 2): Q[2, 2]}, 3)

    @classmethod
    def from_matrix(cls, Q):
        return cls(np.asarray(Q))

    @property
    def matrix(self):
        c = self.coeffs
        half = Fraction(1, 2) if self.backend is Backend.EXACT else 0.5
        Q = [[c[0], c[1] * half, c[2] * half],
             [c[1] * half, c[3], c[4] * half],
             [c[2] * half, c[4] * half, c[5]]]
        return np.array(Q, dtype=object if self.backend is Backend.EXACT else complex)

    def to_float(self):
        return Conic(Poly.to_float(self))


class Cubic(TrinaryForm):
    def __init__(self, source):
        super().__init__(source, 3)
        if self.is_zero():
            raise ValueError("zero cubic")

    def to_float(self):
        return Cubic(Poly.to_float(self))


def as_form(poly, degree=None):
    degree = poly.degree if degree is None else degree
    if degree == 2:
        return Conic(poly)
    if degree == 3:
        return Cubic(poly)
    return TrinaryForm(poly, degree)


class BiForm(Poly):
    """Bihomogeneous form in (a1, a2, a3; b1, b2, b3) of bidegree (d1, d2)."""

    def __init__(self, source, bidegree):
        d1, d2 = bidegree
        if isinstance(source, Poly):
            if source.nvars != 6:
                raise ValueError("a biform has six variables")
            for e in source.terms:
                if sum(e[:3]) != d1 or sum(e[3:]) != d2:
                    raise ValueError(f"term {e} is not of bidegree {bidegree}")
            super().__init__(source.terms, 6)
        else:
            super().__init__(_poly_from_dense(list(source), bimonomials(d1, d2), 6).terms, 6)
        self.bidegree = (d1, d2)

    @property
    def coeffs(self):
        return _dense(self, bimonomials(*self.bidegree), self.backend)

    def _slice(self, vec, first):
        vec = _coords(vec)
        if not is_exact(vec) or self.backend is Backend.FLOAT:
            vec = to_float(vec)
        terms = {}
        for e, c in self.terms.items():
            fixed, free = (e[:3], e[3:]) if first else (e[3:], e[:3])
            v = c
            for i, k in enumerate(fixed):
                if k:
                    v = v * vec[i] ** k
            terms[free] = terms[free] + v if free in terms else v
        return as_form(Poly(terms, 3), self.bidegree[1] if first else self.bidegree[0])

    def slice_a(self, a):
        """The form in b obtained by fixing a."""
        return self._slice(a, True)

    def slice_b(self, b):
        return self._slice(b, False)

    def evaluate(self, a, b):
        a, b = _coords(a), _coords(b)
        return self(np.concatenate(harmonize(a, b)))


@lru_cache(maxsize=None)
def bimonomials(d1, d2):
    return tuple(ma + mb for ma in monomials(3, d1) for mb in monomials(3, d2))


class BinaryForm(Poly):
    """Form in (s, t); coeffs[i] multiplies s^i t^(d-i)."""

    def __init__(self, source, degree=None):
        if isinstance(source, Poly):
            if source.nvars != 2:
                raise ValueError("a binary form has two variables")
            degree = source.degree if degree is None else degree
            if not source.is_homogeneous(degree):
                raise ValueError("not homogeneous")
            super().__init__(source.terms, 2)
        else:
            coeffs = list(source)
            degree = len(coeffs) - 1
            super().__init__({(i, degree - i): c for i, c in enumerate(coeffs)}, 2)
        self.form_degree = degree

    @property
    def coeffs(self):
        zero = Fraction(0) if self.backend is Backend.EXACT else 0j
        return [self.terms.get((i, self.form_degree - i), zero) for i in range(self.form_degree + 1)]


# Root finding

def chordal_distance(p, q):
    p, q = to_float(_coords(p)), to_float(_coords(q))
    return abs(p[0] * q[1] - p[1] * q[0]) / (np.linalg.norm(p) * np.linalg.norm(q))


def cluster_points(points, radius=CLUSTER_RADIUS):
    """Group nearby projective points: list of (representative, multiplicity)."""
    groups = []
    for p in points:
        v = to_float(_coords(p))
        v = v / np.linalg.norm(v)
        for g in groups:
            w = g[0]
            if np.linalg.norm(np.outer(v, w) - np.outer(w, v)) / np.sqrt(2) <= radius:
                g[1].append(v)
                break
        else:
            groups.append((v, [v]))
    out = []
    for rep, members in groups:
        # align phases before averaging
        k = int(np.argmax(np.abs(rep)))
        aligned = [m / m[k] * abs(m[k]) for m in members]
        out.append((PPoint(np.mean(aligned, axis=0)), len(members)))
    return out


def _expand_clusters(clusters):
    return [p for p, m in clusters for _ in range(m)]


def binary_roots(f):
    """All roots [s:t] of a binary form, repeated according to multiplicity.

    Companion-matrix eigenvalues of f(1, t) plus [0:1] for each vanishing
    leading coefficient.  Roots within CLUSTER_RADIUS are merged.
    """
    if not isinstance(f, BinaryForm):
        f = BinaryForm(f)
    if f.is_zero():
        raise ValueError("zero binary form has no finite root set")
    c = [complex(v) for v in f.coeffs]
    exact = f.backend is Backend.EXACT
    scale = max(abs(v) for v in c)
    k = 0
    while k < len(c) and (f.coeffs[k] == 0 if exact else abs(c[k]) <= EPS_ABS * scale):
        k += 1
    roots = [PPoint(np.array([0j, 1 + 0j])) for _ in range(k)]
    tail = c[k:]
    if len(tail) > 1:
        zs = _companion_roots(tail)
        if exact:
            ex = [Fraction(v) for v in f.coeffs[k:]]
            zs = [_polish(ex, z) for z in _separate_clusters(ex, zs)]
        roots.extend(PPoint(np.array([1 + 0j, complex(t)])) for t in zs)
    return _expand_clusters(cluster_points(roots))


def _companion_roots(coeffs):
    """Roots of sum coeffs[i] z^(m - i) as companion-matrix eigenvalues."""
    c = np.array([complex(v) for v in coeffs])
    m = len(c) - 1
    comp = np.zeros((m, m), dtype=np.complex128)
    comp[0, :] = -c[1:] / c[0]
    comp[1:, :-1] = np.eye(m - 1)
    return list(np.linalg.eigvals(comp))


def _shifted(coeffs, a, b):
    """Exact coefficients (highest first) of p(a + b u) for p given highest first."""
    out = [Fraction(0)]
    for ci in coeffs:
        # out <- out * (a + b u) + ci
        nxt = [Fraction(0)] * (len(out) + 1)
        for i, v in enumerate(out):
            nxt[i] += v * b
            nxt[i + 1] += v * a
        nxt[-1] += ci
        out = nxt
    return out[1:]


CLUSTER_SPLIT = 1e-3


def _gauss_eval(coeffs, z):
    """(p(z), p'(z)) for exact coefficients at a Gaussian rational z = (re, im)."""
    pr, pi_, dr, di = Fraction(0), Fraction(0), Fraction(0), Fraction(0)
    zr, zi = z
    for c in coeffs:
        dr, di = dr * zr - di * zi + pr, dr * zi + di * zr + pi_
        pr, pi_ = pr * zr - pi_ * zi + c, pr * zi + pi_ * zr
    return (pr, pi_), (dr, di)


def _polish(coeffs, z, steps=2):
    """Newton steps with exactly evaluated residuals; stops at simple-root failure."""
    for _ in range(steps):
        zz = (Fraction(float(z.real)), Fraction(float(z.imag)))
        (pr, pi_), (dr, di) = _gauss_eval(coeffs, zz)
        den = dr * dr + di * di
        if den == 0:
            break
        step = complex(float((pr * dr + pi_ * di) / den), float((pi_ * dr - pr * di) / den))
        if not abs(step) <= 1e-6 * (1 + abs(z)):
            break
        z = complex(float(zz[0]), float(zz[1])) - step
    return z


def _separate_clusters(coeffs, zs):
    """Re-solve tight groups of roots of an exact polynomial on a recentered, rescaled copy.

    Roots closer than CLUSTER_SPLIT (relative) are badly conditioned in the
    original chart; substituting z = c + d u with c a rational center and d
    the group spread makes them well separated in u.
    """
    zs = list(zs)
    groups, seen = [], set()
    for i, z in enumerate(zs):
        if i in seen:
            continue
        g = [j for j in range(len(zs)) if j not in seen and abs(zs[j] - z) <= CLUSTER_SPLIT * (1 + abs(z))]
        seen.update(g)
        if len(g) > 1:
            groups.append(g)
    for g in groups:
        center = np.mean([zs[j] for j in g])
        spread = max(abs(zs[j] - center) for j in g)
        if spread == 0 or abs(center.imag) > 10 * spread:
            continue
        a, d = Fraction(float(center.real)), Fraction(float(spread))
        h = _shifted(coeffs, a, d)
        big = max(abs(v) for v in h)
        if big == 0 or h[0] == 0:
            continue
        us = _companion_roots([float(v / big) for v in h])
        target = (center - float(a)) / float(d)
        us.sort(key=lambda u: abs(u - target))
        for j, u in zip(g, us[:len(g)]):
            zs[j] = complex(float(a)) + complex(u) * float(d)
    return zs


def root_multiplicities(points):
    return cluster_points(points)


def restrict_to_line(f, p0, p1):
    """Binary form g(s, t) = f(s p0 + t p1)."""
    p0, p1 = harmonize(_coords(p0), _coords(p1))
    if f.backend is Backend.FLOAT and is_exact(p0):
        p0, p1 = to_float(p0), to_float(p1)
    if not is_exact(p0):
        f = Poly.to_float(f)
    subs = [Poly({(1, 0): p0[i], (0, 1): p1[i]}, 2) for i in range(3)]
    g = f.compose(subs)
    return BinaryForm(g, f.degree if not f.is_zero() else 0)


def line_curve_intersection(p0, p1, f):
    """Points of the line through p0, p1 on the curve f = 0 (with multiplicity)."""
    if proportional(p0, p1):
        raise ProportionalInputs("a line needs two distinct points")
    g = restrict_to_line(f, p0, p1)
    d = f.degree
    scale = float(f.scale()) * (max_abs(to_float(_coords(p0))) + max_abs(to_float(_coords(p1)))) ** d
    if g.is_zero() or (g.backend is Backend.FLOAT and g.scale() <= EPS_REL * scale):
        raise LineOnCurve("the line lies on the curve")
    g = BinaryForm(g, d)
    q0, q1 = harmonize(to_float(_coords(p0)), to_float(_coords(p1)))
    return [PPoint(r[0] * q0 + r[1] * q1) for r in (np.asarray(p) for p in binary_roots(g))]


# Conics

def conic_through_five(p1, p2, p3, p4, p5):
    pts = harmonize(*[_coords(p) for p in (p1, p2, p3, p4, p5)])
    monos = monomials(3, 2)
    rows = [[np.prod([p[i] ** e[i] for i in range(3)]) for e in monos] for p in pts]
    M = np.array(rows, dtype=pts[0].dtype)
    ns = nullspace(M)
    if len(ns) != 1:
        raise NonUniqueConic(f"conic through the five points is not unique (nullity {len(ns)})")
    v = ns[0]
    if not is_exact(v):
        v = v / v[int(np.argmax(np.abs(v)))]
    return Conic(Poly(dict(zip(monos, v)), 3))


def _poly_det3(M):
    return (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
            - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
            + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]))


def pencil_determinant(M1, M2):
    """Binary cubic det(s M1 + t M2)."""
    M1, M2 = harmonize(np.asarray(M1), np.asarray(M2))
    entries = [[Poly({(1, 0): M1[i, j], (0, 1): M2[i, j]}, 2) for j in range(3)] for i in range(3)]
    return BinaryForm(_poly_det3(entries), 3)


def _split_degenerate(D):
    """Two lines whose union is the degenerate conic D (complex symmetric)."""
    s = np.linalg.svd(D, compute_uv=False)
    if s[1] <= 1e-6 * s[0]:
        i = int(np.argmax(np.abs(np.diag(D))))
        line = D[:, i]
        return line, line
    B = np.array([[D[(j + 1) % 3, (k + 1) % 3] * D[(j + 2) % 3, (k + 2) % 3]
                   - D[(j + 1) % 3, (k + 2) % 3] * D[(j + 2) % 3, (k + 1) % 3]
                   for j in range(3)] for k in range(3)])
    i = int(np.argmax(np.abs(np.diag(B))))
    beta = np.sqrt(-B[i, i])
    p = B[:, i] / beta
    Px = np.array([[0, p[2], -p[1]], [-p[2], 0, p[0]], [p[1], -p[0], 0]])
    C = D + Px
    r, c = np.unravel_index(int(np.argmax(np.abs(C))), C.shape)
    return C[r, :], C[:, c]


def _line_points(line):
    c = int(np.argmax(np.abs(line)))
    others = [k for k in range(3) if k != c]
    return [np.cross(line, np.eye(3)[k]) for k in others]


def pencil_intersect_conics(C1, C2):
    """The four intersection points of two conics, repeated by multiplicity."""
    if forms_proportional(C1, C2):
        raise SharedComponent("the conics coincide")
    Q1, Q2 = to_float(C1.matrix), to_float(C2.matrix)
    Q1, Q2 = Q1 / np.max(np.abs(Q1)), Q2 / np.max(np.abs(Q2))
    g = pencil_determinant(Q1, Q2)
    if g.is_zero() or g.scale() <= 1e-12:
        raise SharedComponent("the conics share a component")
    best = None
    for r in binary_roots(g):
        lam, mu = np.asarray(r)
        D = lam * Q1 + mu * Q2
        s = np.linalg.svd(D, compute_uv=False)
        quality = s[1] / s[0]
        if best is None or quality > best[0]:
            best = (quality, lam, mu, D)
    _, lam, mu, D = best
    target = Conic(Poly.to_float(C2)) if abs(lam) >= abs(mu) else Conic(Poly.to_float(C1))
    out = []
    for line in _split_degenerate(D):
        p0, p1 = _line_points(line)
        try:
            out.extend(line_curve_intersection(p0, p1, target))
        except LineOnCurve:
            raise SharedComponent("a line of the pencil lies on both conics") from None
    return _expand_clusters(cluster_points(out))


def fq_vec(v):
    """Standard quadratic Cremona map on coordinate vectors."""
    return np.array([v[1] * v[2], v[0] * v[2], v[0] * v[1]], dtype=v.dtype)


AUX_POINTS = ((1, 1, 1), (1, 2, 3), (2, -1, 1), (1, 3, -2), (3, 1, 2), (-1, 2, 5), (2, 5, -3),
              (4, -3, 1), (1, -2, 7), (5, 2, -1), (3, -4, 2), (2, 7, 5))


def _on_curve(f, p):
    v = f(p)
    if f.backend is Backend.EXACT and is_exact(_coords(p)):
        return v == 0
    return abs(v) <= 1e-8 * f.scale() * max_abs(to_float(_coords(p))) ** f.degree


def fourth_intersection(y1, y2, y3, C1, C2, aux=None):
    """Fourth common point of two conics that share y1, y2, y3.

    Moves y1, y2, y3 (plus an auxiliary point) to standard position, where each
    conic becomes a line under the quadratic Cremona map; intersects the lines
    and maps back.
    """
    ys = [_coords(y) for y in (y1, y2, y3)]
    for C in (C1, C2):
        if not all(_on_curve(C, y) for y in ys):
            raise PreconditionFailed("conic does not pass through the three given points")
    candidates = [aux] if aux is not None else AUX_POINTS
    for cand in candidates:
        y4 = as_array(list(cand)) if not isinstance(cand, np.ndarray) else cand
        if _on_curve(C1, y4) or _on_curve(C2, y4):
            continue
        try:
            H = standard_position_homography(*ys, y4)
        except Exception:
            continue
        break
    else:
        raise PreconditionFailed("no usable auxiliary point")
    lines = []
    for C in (C1, C2):
        Ct = transform_curve(H, C)
        lines.append(np.array([Ct.coeff((0, 1, 1)), Ct.coeff((1, 0, 1)), Ct.coeff((1, 1, 0))],
                              dtype=object if Ct.backend is Backend.EXACT else complex))
    lines = harmonize(*lines)
    if is_zero_vector(lines[0]) or is_zero_vector(lines[1]) or proportional(lines[0], lines[1]):
        raise PreconditionFailed("the conics do not meet in a unique fourth point")
    u = cross_vec(lines[0], lines[1])
    x = fq_vec(u)
    if is_zero_vector(x):
        raise PreconditionFailed("fourth point lies on a side of the reference triangle")
    Hinv = inv(H.matrix)
    Hinv, x = harmonize(Hinv, x)
    return PPoint(Hinv.dot(x))


def transform_curve(H, f):
    """f o H^{-1}: the curve whose zero set is H applied to the zero set of f."""
    H = H if isinstance(H, ProjMap) else ProjMap(np.asarray(H) if isinstance(H, np.ndarray) else as_array(H))
    try:
        Hinv = inv(H.matrix)
    except np.linalg.LinAlgError:
        raise SingularHomography("homography is singular") from None
    if f.backend is Backend.FLOAT:
        Hinv = to_float(Hinv)
    elif not is_exact(Hinv):
        f = Poly.to_float(f)
    subs = [Poly.linear(list(Hinv[i])) for i in range(3)]
    g = f.compose(subs)
    return as_form(g, f.degree)


GRID_EXTRA = ((1, 2, 3), (2, -1, 5), (-3, 1, 2), (4, 5, -1), (1, -4, -2))


def _mono_row(p, monos):
    return [np.prod([p[i] ** e[i] for i in range(3)]) for e in monos]


def interpolate_form(degree, evaluator):
    """Recover a degree-d ternary form from point evaluations.

    Samples the lattice {(i, j, k): i + j + k = d}, solves for the
    coefficients and checks the result at five further points.
    """
    monos = monomials(3, degree)
    grid = [as_array([i, j, k]) for (i, j, k) in monos]
    values = [evaluator(PPoint(p)) for p in grid]
    exact = all(isinstance(v, (Fraction, int)) for v in values)
    if exact:
        values = [Fraction(v) for v in values]
        V = np.array([_mono_row(p, monos) for p in grid], dtype=object)
        coeffs = solve(V, np.array(values, dtype=object))
    else:
        V = np.array([[complex(v) for v in _mono_row(p, monos)] for p in grid], dtype=complex)
        coeffs = np.linalg.solve(V, np.array([complex(v) for v in values]))
    form = as_form(Poly(dict(zip(monos, coeffs)), 3), degree) if any(c != 0 for c in coeffs) \
        else TrinaryForm(Poly({}, 3), degree)
    scale = max([abs(complex(v)) for v in values] + [1e-300])
    for q in GRID_EXTRA:
        p = as_array(list(q))
        want = evaluator(PPoint(p))
        got = form(p)
        if exact and isinstance(want, (Fraction, int)):
            ok = got == want
        else:
            ok = abs(complex(got) - complex(want)) <= 1e-7 * max(scale, abs(complex(want)))
        if not ok:
            raise InconsistentEvaluator(f"evaluator is not a form of degree {degree}")
    return form


def forms_proportional(f, g):
    """Coefficient-vector proportionality of two forms of equal degree."""
    monos = sorted(set(f.terms) | set(g.terms))
    zero_f = Fraction(0) if f.backend is Backend.EXACT else 0j
    zero_g = Fraction(0) if g.backend is Backend.EXACT else 0j
    u = [f.terms.get(m, zero_f) for m in monos]
    v = [g.terms.get(m, zero_g) for m in monos]
    if not monos:
        return True
    u = as_array(u) if f.backend is Backend.EXACT else np.array(u, dtype=complex)
    v = as_array(v) if g.backend is Backend.EXACT else np.array(v, dtype=complex)
    if is_zero_vector(u) or is_zero_vector(v):
        return is_zero_vector(u) and is_zero_vector(v)
    return proportional(u, v)


def tangent_line(f, p):
    """Coefficients of the tangent line of f at p."""
    return np.array(f.gradient(p))


def _integer_coeffs(coeffs):
    from math import lcm
    den = lcm(*[Fraction(c).denominator for c in coeffs])
    return [int(Fraction(c) * den) for c in coeffs]


def rational_roots(f, max_denominator=10 ** 8):
    """Exact rational roots [s:t] of a rational binary form, without multiplicity.

    Each numeric root (already polished against the exact coefficients) is
    rounded to fractions of growing denominator; a candidate is kept only when it
    annihilates f exactly.
    """
    if not isinstance(f, BinaryForm):
        f = BinaryForm(f)
    if f.backend is not Backend.EXACT:
        raise TypeError("rational_roots needs an exact form")
    c = _integer_coeffs(f.coeffs)
    found = []
    if c[0] == 0:
        found.append(PPoint(as_array([0, 1])))
    # p(z) = f(1, z); c[i] multiplies z^(d - i)

    def p(t):
        out = Fraction(0)
        for ci in c:
            out = out * t + ci
        return out

    for r in binary_roots(f):
        s, t = np.asarray(r)
        if abs(s) < 1e-12 * abs(t):
            continue
        z = t / s
        if abs(z.imag) > 1e-6 * (1 + abs(z)):
            continue
        x = float(z.real)
        den = 1
        while den <= max_denominator:
            cand = Fraction(x).limit_denominator(den)
            if p(cand) == 0:
                pt = PPoint(as_array([Fraction(1), cand]))
                if not any(pt == q for q in found):
                    found.append(pt)
                break
            den *= 10
    return found
