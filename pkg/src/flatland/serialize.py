"""JSON encoding of scalars, points, matrices and forms.

Rationals become strings "p/q" (or "p"), complex numbers become [re, im]
pairs; forms list their coefficients in the fixed graded-lex monomial order.
"""

from fractions import Fraction
from numbers import Integral

import numpy as np

from .errors import ParseError
from .poly import BiForm, TrinaryForm, bimonomials, monomials
from .projective import PPoint, _coords


def scalar_to_json(x):
    if isinstance(x, (Fraction, Integral)):
        return str(Fraction(x))
    z = complex(x)
    return [float(z.real) + 0.0, float(z.imag) + 0.0]


def vector_to_json(v):
    return [scalar_to_json(c) for c in np.asarray(_coords(v) if isinstance(v, PPoint) else v).ravel()]


def point_to_json(p):
    """Canonical coordinates: the largest (float) or first nonzero (exact) entry scaled to 1."""
    return vector_to_json(PPoint(_coords(p)).canonical().coords)


def matrix_to_json(M):
    M = np.asarray(M)
    return [[scalar_to_json(c) for c in row] for row in M]


def form_to_json(f):
    if isinstance(f, BiForm):
        monos = bimonomials(*f.bidegree)
        return {"bidegree": list(f.bidegree), "monomials": [list(m) for m in monos],
                "coeffs": [scalar_to_json(c) for c in f.coeffs]}
    d = f.form_degree if isinstance(f, TrinaryForm) else f.degree
    monos = monomials(3, d)
    zero = Fraction(0) if all(isinstance(c, Fraction) for c in f.terms.values()) else 0j
    return {"degree": d, "monomials": [list(m) for m in monos],
            "coeffs": [scalar_to_json(f.terms.get(m, zero)) for m in monos]}


def parse_scalar(v):
    """int or "p/q" string -> Fraction; float -> float; anything else is a ParseError."""
    if isinstance(v, bool):
        raise ParseError(f"boolean is not a coordinate: {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        return v
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"not a rational literal: {v!r}") from None
    if isinstance(v, list) and len(v) == 2 and all(isinstance(c, (int, float)) and not isinstance(c, bool)
                                                   for c in v):
        return complex(v[0], v[1])
    raise ParseError(f"not a coordinate: {v!r}")


def parse_vector(v, size=3):
    if not isinstance(v, list) or len(v) != size:
        raise ParseError(f"expected a list of {size} coordinates, got {v!r}")
    return [parse_scalar(c) for c in v]
