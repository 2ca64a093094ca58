"""Projective points, projective maps, labeled configurations and brackets."""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations

import numpy as np

from .errors import DegenerateConfig, DimMismatch, ProportionalInputs, SingularHomography, ZeroVector
from .linalg import (
    EPS_REL, Backend, as_array, backend_of, det, harmonize, inv, is_exact, is_zero,
    is_zero_vector, rank, to_float,
)


def _coords(p):
    if isinstance(p, PPoint):
        return p.coords
    if isinstance(p, np.ndarray) and p.dtype != object and p.dtype.kind in "fc":
        return p.astype(np.complex128)
    if isinstance(p, np.ndarray) and p.dtype == object:
        return p
    return as_array(p)


def _canonical_array(v):
    if is_exact(v):
        k = next(i for i, c in enumerate(v) if c != 0)
        piv = v[k]
        return np.array([c / piv for c in v], dtype=object)
    k = int(np.argmax(np.abs(v)))
    return v / v[k]


class PPoint:
    """A point of P^k stored as its (k+1) input coordinates.

    Equality is projective: two points are equal when their coordinate
    vectors are proportional.
    """

    def __init__(self, coords, backend=None):
        arr = as_array(coords, backend) if backend is not None else _coords(coords)
        if arr.ndim != 1 or arr.size < 2:
            raise DimMismatch(f"a projective point needs at least 2 coordinates, got shape {arr.shape}")
        if is_zero_vector(arr):
            raise ZeroVector("all coordinates vanish")
        arr = arr.copy()
        arr.setflags(write=False)
        self.coords = arr

    @property
    def dim(self):
        return self.coords.size - 1

    @property
    def backend(self):
        return Backend.EXACT if is_exact(self.coords) else Backend.FLOAT

    def canonical(self):
        return PPoint(_canonical_array(self.coords))

    def to_float(self):
        return PPoint(to_float(self.coords))

    def __array__(self, dtype=None, copy=None):
        return self.coords if dtype is None else self.coords.astype(dtype)

    def __len__(self):
        return self.coords.size

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, k):
        return self.coords[k]

    def __eq__(self, other):
        if not isinstance(other, PPoint):
            return NotImplemented
        return self.dim == other.dim and proportional(self, other)

    def __hash__(self):
        if self.backend is Backend.EXACT:
            return hash(tuple(_canonical_array(self.coords)))
        return hash(self.dim)

    def __repr__(self):
        body = ", ".join(str(c) if isinstance(c, Fraction) else repr(complex(c)) for c in self.coords)
        return f"PPoint([{body}])"


def point(*coords, backend=None):
    """Shorthand: point(1, 2, 3) or point([1, 2, 3])."""
    if len(coords) == 1:
        coords = coords[0]
    return PPoint(as_array(list(coords) if isinstance(coords, tuple) else coords, backend))


def canonicalize(p):
    return PPoint(_coords(p)).canonical()


def proportional(u, v):
    """u ~ v.  Floats: every 2x2 minor below EPS_REL relative to |u||v|."""
    u, v = _coords(u), _coords(v)
    if u.size != v.size:
        raise DimMismatch(f"dimension {u.size - 1} vs {v.size - 1}")
    if is_zero_vector(u) or is_zero_vector(v):
        raise ZeroVector("zero vector is not a projective point")
    if is_exact(u) and is_exact(v):
        a, b = _canonical_array(u), _canonical_array(v)
        return all(x == y for x, y in zip(a, b))
    u, v = to_float(u), to_float(v)
    scale = np.max(np.abs(u)) * np.max(np.abs(v))
    minors = np.outer(u, v) - np.outer(v, u)
    return bool(np.max(np.abs(minors)) <= EPS_REL * scale)


def bracket2(p, q):
    p, q = harmonize(_coords(p), _coords(q))
    if p.size != 2 or q.size != 2:
        raise DimMismatch("bracket2 needs points of P^1")
    return p[0] * q[1] - q[0] * p[1]


def bracket3(p, q, r):
    p, q, r = harmonize(_coords(p), _coords(q), _coords(r))
    if p.size != 3 or q.size != 3 or r.size != 3:
        raise DimMismatch("bracket3 needs points of P^2")
    return (p[0] * (q[1] * r[2] - q[2] * r[1])
            - q[0] * (p[1] * r[2] - p[2] * r[1])
            + r[0] * (p[1] * q[2] - p[2] * q[1]))


def cross_vec(u, v):
    """Raw cross product of two 3-vectors (no projective checks)."""
    u, v = harmonize(_coords(u), _coords(v))
    out = np.array([u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]],
                   dtype=u.dtype)
    return out


def cross3(u, v):
    """Point (or line) orthogonal to both inputs: the join of two points / meet of two lines."""
    if proportional(u, v):
        raise ProportionalInputs("cross3 of proportional vectors")
    return PPoint(cross_vec(u, v))


def bracket_scale(*pts):
    """Magnitude used to decide whether a float bracket is zero."""
    return float(np.prod([np.max(np.abs(to_float(_coords(p)))) for p in pts]))


def bracket_vanishes(*pts):
    b = bracket3(*pts) if len(pts) == 3 else bracket2(*pts)
    return is_zero(b, bracket_scale(*pts))


class ProjMap:
    """Matrix of a linear map between projective spaces."""

    def __init__(self, entries, backend=None):
        if isinstance(entries, ProjMap):
            entries = entries.matrix
        M = as_array(entries, backend) if backend is not None or not isinstance(entries, np.ndarray) \
            else (entries if entries.dtype == object else entries.astype(np.complex128))
        if M.ndim != 2:
            raise DimMismatch("a projective map needs a 2D matrix")
        M = M.copy()
        M.setflags(write=False)
        self.matrix = M

    @property
    def shape(self):
        return self.matrix.shape

    @property
    def rows(self):
        return self.matrix.shape[0]

    @property
    def cols(self):
        return self.matrix.shape[1]

    @property
    def backend(self):
        return Backend.EXACT if is_exact(self.matrix) else Backend.FLOAT

    @cached_property
    def rank(self):
        return rank(self.matrix)

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    def apply_vec(self, p):
        M, v = harmonize(self.matrix, _coords(p))
        return M.dot(v)

    def __call__(self, p):
        img = self.apply_vec(p)
        if is_zero_vector(img):
            raise ZeroVector("point lies in the kernel of the map")
        return PPoint(img)

    def __matmul__(self, other):
        A, B = harmonize(self.matrix, np.asarray(other))
        return ProjMap(A.dot(B))

    def inverse(self):
        if self.rows != self.cols:
            raise SingularHomography("only square maps can be inverted")
        try:
            return ProjMap(inv(self.matrix))
        except np.linalg.LinAlgError as exc:
            raise SingularHomography(str(exc)) from None

    def to_float(self):
        return ProjMap(to_float(self.matrix))

    def __repr__(self):
        return f"ProjMap({self.rows}x{self.cols}, rank={self.rank})"


def column_matrix(points):
    cols = harmonize(*[_coords(p) for p in points])
    return np.array(cols, dtype=cols[0].dtype).T


def standard_position_homography(x1, x2, x3, x4):
    """Homography H with H x_i ~ e_i (i <= 3) and H x4 ~ (1, 1, 1).

    H = (C D)^{-1} with C = [x1 x2 x3] and D = diag([x4 x2 x3], [x1 x4 x3], [x1 x2 x4]).
    """
    C = column_matrix([x1, x2, x3])
    x4 = harmonize(C, _coords(x4))[1]
    d = [bracket3(x4, C[:, 1], C[:, 2]), bracket3(C[:, 0], x4, C[:, 2]), bracket3(C[:, 0], C[:, 1], x4)]
    scale = bracket_scale(x1, x2, x3, x4) / max(np.max(np.abs(to_float(x4))), 1e-300)
    detC = det(C)
    if is_zero(detC, bracket_scale(x1, x2, x3)) or any(is_zero(v, scale) for v in d):
        raise DegenerateConfig("three of the four points are collinear")
    Cinv = inv(C)
    rows = [[Cinv[i, j] / d[i] for j in range(3)] for i in range(3)]
    return ProjMap(np.array(rows, dtype=C.dtype))


# Labeled configurations and their genericity flags

@dataclass(frozen=True)
class Flag:
    kind: str        # "duplicate" | "collinear" | "coble"
    plane: str
    indices: tuple   # 0-based point labels

    def to_dict(self):
        return {"kind": self.kind, "plane": self.plane, "indices": list(self.indices)}


@dataclass(frozen=True)
class GenericityReport:
    flags: tuple = ()

    @property
    def clean(self):
        return not self.flags

    def of_kind(self, kind):
        return [f for f in self.flags if f.kind == kind]

    @property
    def collinear(self):
        return [f.indices for f in self.of_kind("collinear")]

    @property
    def duplicates(self):
        return [f.indices for f in self.of_kind("duplicate")]

    @property
    def coble(self):
        return [f.indices for f in self.of_kind("coble")]

    def __add__(self, other):
        return GenericityReport(self.flags + other.flags)

    def to_list(self):
        return [f.to_dict() for f in self.flags]


class LabeledConfig:
    """n labeled points of one plane ("X" or "Y")."""

    def __init__(self, points, plane="X", backend=None):
        pts = [p if isinstance(p, PPoint) else PPoint(as_array(p, backend) if backend else _coords(p))
               for p in points]
        if backend is None:
            backend = backend_of(*[p.coords for p in pts]) if pts else Backend.EXACT
        if backend is Backend.FLOAT:
            pts = [p if p.backend is Backend.FLOAT else p.to_float() for p in pts]
        elif any(p.backend is Backend.FLOAT for p in pts):
            raise TypeError("float points in an exact configuration")
        if len({p.dim for p in pts}) > 1:
            raise DimMismatch("points of different dimensions")
        self.points = tuple(pts)
        self.plane = plane
        self.backend = backend

    @property
    def n(self):
        return len(self.points)

    @property
    def dim(self):
        return self.points[0].dim if self.points else 2

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, k):
        if isinstance(k, slice):
            return LabeledConfig(self.points[k], self.plane, self.backend)
        return self.points[k]

    def subset(self, indices):
        return LabeledConfig([self.points[i] for i in indices], self.plane, self.backend)

    @cached_property
    def matrix(self):
        return column_matrix(self.points)

    def to_float(self):
        return LabeledConfig(self.points, self.plane, Backend.FLOAT)

    @cached_property
    def genericity(self):
        return genericity_report(self)

    def __repr__(self):
        return f"LabeledConfig(plane={self.plane!r}, n={self.n}, backend={self.backend.value})"


def as_config(obj, plane="X"):
    return obj if isinstance(obj, LabeledConfig) else LabeledConfig(obj, plane)


def genericity_report(cfg, paired=None):
    """Vanishing brackets of a configuration (and of its partner, if given).

    Flags repeated points, collinear triples and, for paired six-point data,
    vanishing Coble brackets.  An empty report means generic.
    """
    cfg = as_config(cfg)
    flags = []
    for c in [cfg] + ([as_config(paired, "Y")] if paired is not None else []):
        for i, j in combinations(range(c.n), 2):
            if proportional(c[i], c[j]):
                flags.append(Flag("duplicate", c.plane, (i, j)))
        if c.dim == 2:
            for t in combinations(range(c.n), 3):
                if bracket_vanishes(*(c[i] for i in t)):
                    flags.append(Flag("collinear", c.plane, t))
        if paired is not None and c.n == 6:
            from .invariants import coble_terms
            for label, value, scale in coble_terms(c):
                if is_zero(value, scale):
                    flags.append(Flag("coble", c.plane, label))
    return GenericityReport(tuple(flags))
