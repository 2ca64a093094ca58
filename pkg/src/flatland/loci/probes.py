"""Numeric checks of E_n: multidegrees by slicing, witness samplers and ideal slice dimensions."""

from math import comb, prod

import numpy as np

from ..errors import BasePoint, DimensionMismatch, InsufficientSamples, NonGeneric
from ..linalg import as_array, harmonize, is_exact, rank, to_float
from ..poly import BinaryForm, Poly, bimonomials, binary_roots, line_curve_intersection, restrict_to_line
from ..projective import PPoint, _coords, as_config, cross_vec, proportional

SLICE_RTOL = 1e-7


def locus_dimension(n):
    """dim E_n = min(4, 7 - n); None when E_n is empty (n >= 8)."""
    return min(4, 7 - n) if n <= 7 else None


def _random_line(rng, avoid=()):
    """Random integer line through none of the points in `avoid`."""
    from ..scenes import random_vector
    while True:
        line = random_vector(rng, 3)
        if not any(_coords(p).dot(line) == 0 if is_exact(_coords(p))
                   else abs(complex(_coords(p).dot(line))) <= 1e-12 for p in avoid):
            return line


def _line_points(line):
    """Two points spanning the line with coordinates `line`."""
    line = _coords(line)
    k = int(np.argmax([abs(complex(c)) for c in line]))
    basis = [as_array([1 if m == r else 0 for m in range(3)]) for r in range(3) if r != k]
    return [PPoint(cross_vec(line, e)) for e in basis]


def _meet_lines(l1, l2):
    w = cross_vec(l1, l2)
    return PPoint(w)


def _count_common_point(lines):
    """Number of points on all given lines of P^2 (0 or 1 for generic lines)."""
    if len(lines) <= 1:
        raise DimensionMismatch("fewer than two lines leave a positive-dimensional set")
    M = np.array([_coords(l) for l in lines], dtype=object)
    return 1 if rank(M) == 2 else 0


def probe_points(X, Y, i, j, seed):
    """Points of E_n cut out by i random lines in the a-plane and j in the b-plane."""
    X, Y = as_config(X, "X"), as_config(Y, "Y")
    n = X.n
    dim = locus_dimension(n)
    if dim is None or i + j != dim or i < 0 or j < 0:
        raise DimensionMismatch(f"need i + j = dim E_{n} = {dim}, got ({i}, {j})")
    rng = np.random.default_rng(seed)
    la = [_random_line(rng, X) for _ in range(i)]
    lb = [_random_line(rng, Y) for _ in range(j)]
    if n <= 3:
        return _probe_full(la, lb)
    if n == 4:
        return _probe_n4(X, Y, la, lb)
    if n == 5:
        return _probe_n5(X, Y, la, lb)
    if n == 6:
        return _probe_n6(X, Y, la, lb)
    from .n7 import solve_n7
    return list(solve_n7(X, Y).pairs)


def multidegree_probe(X, Y, i, j, seed):
    """d_(i,j)(E_n): the number of complex points met by i lines in a and j lines in b."""
    return len(probe_points(X, Y, i, j, seed))


def _probe_full(la, lb):
    if len(la) > 2 or len(lb) > 2:
        return []
    return [(_meet_lines(*la), _meet_lines(*lb))]


def _probe_n4(X, Y, la, lb):
    from .n4 import conic_of_b_given_a_n4
    if len(la) == 3 or len(lb) == 3:
        return []
    if len(la) == 2:
        a = _meet_lines(*la)
        omega = conic_of_b_given_a_n4(X, Y, a)
        return [(a, b) for b in line_curve_intersection(*_line_points(lb[0]), omega)]
    b = _meet_lines(*lb)
    omega = conic_of_b_given_a_n4(Y, X, b)
    return [(a, b) for a in line_curve_intersection(*_line_points(la[0]), omega)]


def quintic_on_line(X, Y, la, lb):
    """l_b(Phi(s p0 + t p1)) for the forward Cremona map Phi: a binary quintic."""
    from .n5 import Transfer5
    c = Transfer5(X, Y)
    p0, p1 = _line_points(la)
    lb = _coords(lb)
    forms = c.forward_map.forms
    total = Poly({}, 3)
    for k in range(3):
        total = total + forms[k] * lb[k]
    return BinaryForm(restrict_to_line(total, p0, p1), 5), (p0, p1), c


def _probe_n5(X, Y, la, lb):
    from .n5 import Transfer5
    if len(la) == 2:
        a = _meet_lines(*la)
        return [(a, Transfer5(X, Y).forward(a))]
    if len(lb) == 2:
        b = _meet_lines(*lb)
        return [(Transfer5(X, Y).backward(b), b)]
    g, (p0, p1), c = quintic_on_line(X, Y, la[0], lb[0])
    q0, q1 = harmonize(to_float(p0.coords), to_float(p1.coords))
    out = []
    for r in binary_roots(g):
        s, t = np.asarray(r)
        a = PPoint(s * q0 + t * q1)
        out.append((a, PPoint(c.forward_map.image_vec(a.coords))))
    return out


def _probe_n6(X, Y, la, lb):
    from .n6 import a_given_b_n6, b_given_a_n6, cubics_n6
    Cx, Cy = cubics_n6(X, Y, cross_check=False)
    out = []
    if la:
        for a in line_curve_intersection(*_line_points(la[0]), Cx):
            out.append((a, b_given_a_n6(X, Y, a)))
    else:
        for b in line_curve_intersection(*_line_points(lb[0]), Cy):
            out.append((a_given_b_n6(X, Y, b), b))
    return out


# Samplers of witness pairs (a, b) on E_n

def sample_e4(X, Y, rng, count):
    """Random a; b is the second point of a random line through y1 on the conic of a (exact)."""
    from ..scenes import random_point
    from .n4 import conic_of_b_given_a_n4
    X, Y = as_config(X, "X"), as_config(Y, "Y")
    out = []
    while len(out) < count:
        a = random_point(rng)
        q = random_point(rng)
        try:
            omega = conic_of_b_given_a_n4(X, Y, a)
        except (NonGeneric, BasePoint, Exception):
            continue
        if proportional(q, Y[0]):
            continue
        g = restrict_to_line(omega, Y[0], q)
        c = g.coeffs
        # g = c0 t^2 + c1 s t + c2 s^2 vanishes at [1:0] (y1), so c2 = 0 and the second root is [c0 : -c1]
        y1, qv = harmonize(Y[0].coords, q.coords)
        b = c[0] * y1 - c[1] * qv
        if not np.any([v != 0 for v in b]) or proportional(b, y1):
            continue
        if any(proportional(b, y) for y in Y) or any(proportional(a, x) for x in X):
            continue
        out.append((a, PPoint(b)))
    return out


def sample_e5(X, Y, rng, count):
    """Random a pushed through the degree-5 Cremona map (exact for rational data)."""
    from ..scenes import random_point
    from .n5 import Transfer5
    c = Transfer5(X, Y)
    out = []
    while len(out) < count:
        a = random_point(rng)
        try:
            out.append((a, c.forward(a)))
        except BasePoint:
            continue
    return out


def sample_e6(X, Y, rng, count):
    """Random lines meet Cx; the partner b follows by transfer (float)."""
    from .n6 import Curves6Sampler, cubics_n6
    Cx, _ = cubics_n6(X, Y, cross_check=False)
    return Curves6Sampler(as_config(X, "X"), as_config(Y, "Y"), Cx).sample(rng, count)


def sample_e7(X, Y, rng=None, count=None):
    """The (at most three) pairs of E7; rng and count are ignored."""
    from .n7 import solve_n7
    return list(solve_n7(X, Y).pairs)


SAMPLERS = {4: sample_e4, 5: sample_e5, 6: sample_e6, 7: sample_e7}


def sample_locus(X, Y, rng, count):
    X = as_config(X, "X")
    if X.n not in SAMPLERS:
        raise DimensionMismatch(f"no sampler for n = {X.n}")
    return SAMPLERS[X.n](X, Y, rng, count)


def _bimonomial_row(a, b, monos):
    return [prod(a[k] ** e[k] for k in range(3)) * prod(b[k] ** e[3 + k] for k in range(3)) for e in monos]


def _primitive(v):
    """Integer vector proportional to a rational one."""
    from fractions import Fraction
    from math import gcd, lcm
    v = [Fraction(c) for c in v]
    den = lcm(*[c.denominator for c in v])
    ints = [int(c * den) for c in v]
    g = gcd(*ints) or 1
    return [k // g for k in ints]


def ideal_slice_dimension(samples, bidegree, exhaustive=False):
    """Dimension of the bidegree-(d1, d2) forms vanishing on every sample pair.

    Requires at least twice as many samples as monomials unless the samples
    are the whole (finite) locus (`exhaustive`).  Exact rank when every
    sample is rational, otherwise singular values below 1e-7 sigma_max count
    as zero.
    """
    d1, d2 = bidegree
    N = comb(d1 + 2, 2) * comb(d2 + 2, 2)
    if not exhaustive and len(samples) < 2 * N:
        raise InsufficientSamples(f"need {2 * N} samples for bidegree {bidegree}, got {len(samples)}")
    monos = bimonomials(d1, d2)
    exact = all(is_exact(_coords(a)) and is_exact(_coords(b)) for a, b in samples)
    if exact:
        rows = []
        for a, b in samples:
            a, b = _primitive(_coords(a)), _primitive(_coords(b))
            rows.append(_bimonomial_row(a, b, monos))
        M = np.array(rows, dtype=object)
        r = rank(M)
    else:
        rows = []
        for a, b in samples:
            a = to_float(_coords(a)).astype(complex)
            b = to_float(_coords(b)).astype(complex)
            rows.append(_bimonomial_row(a / np.linalg.norm(a), b / np.linalg.norm(b), monos))
        s = np.linalg.svd(np.array(rows, dtype=complex), compute_uv=False)
        r = int(np.sum(s > SLICE_RTOL * s[0])) if s.size and s[0] > 0 else 0
    return N - r
