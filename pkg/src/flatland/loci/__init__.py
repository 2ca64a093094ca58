"""Loci of camera-center pairs (a, b) for n labeled point pairs.

compute_loci dispatches on n:
  n <= 3  every pair (a, b) works
  n = 4   a bidegree-(2, 2) surface
  n = 5   the graph of a degree-5 Cremona map
  n = 6   a pair of cubic curves with a point transfer
  n = 7   at most three pairs
  n >= 8  nothing, with a determinant certificate
"""

from dataclasses import dataclass, field

import numpy as np

from ..errors import NonGeneric
from ..linalg import is_exact
from ..projective import _coords, as_config, genericity_report
from ..serialize import form_to_json, point_to_json
from .n4 import conic_of_b_given_a_n4, construct_b_perspectivity_n4, e4_form
from .n5 import CremonaMap, Transfer5, b_by_conics_n5, cremona5_backward, cremona5_base_points, cremona5_forward, \
    quadratic_cremona
from .n6 import a_given_b_n6, b_given_a_n6, chord_point, cubics_n6, exceptional_points_n6
from .n7 import EmptinessCertificate, Finite7, cross_conics, distinguished_point, emptiness_n8, solve_n7
from .probes import ideal_slice_dimension, locus_dimension, multidegree_probe, probe_points, quintic_on_line, \
    sample_locus


@dataclass
class FullSpace:
    tag = "FullSpace"

    def to_dict(self):
        return {}


@dataclass
class Surface4:
    e4form: object
    tag = "Surface4"

    def to_dict(self):
        return {"e4form": form_to_json(self.e4form)}


@dataclass
class Cremona5:
    forward: CremonaMap
    backward: CremonaMap
    exceptional: tuple
    transfer: Transfer5 = field(repr=False, default=None)
    tag = "Cremona5"

    def to_dict(self):
        return {"forward": self.forward.to_dict(), "backward": self.backward.to_dict(),
                "exceptional": {"x": point_to_json(self.exceptional[0]), "y": point_to_json(self.exceptional[1])}}


@dataclass
class Curves6:
    Cx: object
    Cy: object
    exceptional: tuple
    X: object = field(repr=False, default=None)
    Y: object = field(repr=False, default=None)
    tag = "Curves6"

    def b_given_a(self, a):
        return b_given_a_n6(self.X, self.Y, a)

    def a_given_b(self, b):
        return a_given_b_n6(self.X, self.Y, b)

    def to_dict(self):
        return {"Cx": form_to_json(self.Cx), "Cy": form_to_json(self.Cy),
                "exceptional": {"x": [point_to_json(p) for p in self.exceptional[0]],
                                "y": [point_to_json(p) for p in self.exceptional[1]]}}


def _finite7_dict(res):
    return {"pairs": [{"a": point_to_json(a), "b": point_to_json(b), "exact": e}
                      for (a, b), e in zip(res.pairs, res.exact)],
            "conics_a": [form_to_json(c) for c in res.conics_a],
            "conics_b": [form_to_json(c) for c in res.conics_b]}


@dataclass
class Empty8:
    certificate: EmptinessCertificate
    tag = "Empty8"

    def to_dict(self):
        return {"certificate": self.certificate.to_dict()}


Finite7.tag = "Finite7"
Finite7.to_dict = _finite7_dict


@dataclass
class LociResult:
    n: int
    variant: object
    witnesses: list = field(default_factory=list)

    @property
    def dimension(self):
        return locus_dimension(self.n)

    def to_dict(self):
        return {"n": self.n, "variant": self.variant.tag,
                "dimension": self.dimension if self.dimension is not None else "empty",
                "locus": self.variant.to_dict(),
                "witnesses": [{"a": point_to_json(a), "b": point_to_json(b)} for a, b in self.witnesses]}


def _is_real_point(p, tol=1e-8):
    v = _coords(p)
    if is_exact(v):
        return True
    v = v / v[int(np.argmax(np.abs(v)))]
    return float(np.max(np.abs(np.imag(v)))) <= tol


def _full_space_witnesses(rng, count):
    from ..scenes import random_point
    return [(random_point(rng), random_point(rng)) for _ in range(count)]


def compute_loci(X, Y, samples=0, rng=None, real_only=False):
    """The locus of center pairs for paired data X, Y, with `samples` witness pairs."""
    X, Y = as_config(X, "X"), as_config(Y, "Y")
    if X.n != Y.n:
        raise NonGeneric(f"X has {X.n} points but Y has {Y.n}")
    n = X.n
    report = genericity_report(X) + genericity_report(Y)
    if not report.clean:
        raise NonGeneric("data are not in general position", report.to_list())
    rng = rng if rng is not None else np.random.default_rng(0)
    if n <= 3:
        variant = FullSpace()
    elif n == 4:
        variant = Surface4(e4_form(X, Y))
    elif n == 5:
        t = Transfer5(X, Y)
        cremona5_base_points(X, Y)
        variant = Cremona5(t.forward_map, t.backward_map, (t.xhat, t.yhat), t)
    elif n == 6:
        Cx, Cy = cubics_n6(X, Y)
        variant = Curves6(Cx, Cy, exceptional_points_n6(X, Y, (Cx, Cy)), X, Y)
    elif n == 7:
        variant = solve_n7(X, Y)
    else:
        variant = Empty8(emptiness_n8(X, Y))
    witnesses = []
    if samples and n <= 7:
        if n <= 3:
            witnesses = _full_space_witnesses(rng, samples)
        elif n == 7:
            witnesses = list(variant.pairs)
        else:
            witnesses = sample_locus(X, Y, rng, samples)
        if real_only:
            witnesses = [(a, b) for a, b in witnesses if _is_real_point(a) and _is_real_point(b)]
        witnesses = witnesses[:samples]
    return LociResult(n, variant, witnesses)


__all__ = [
    "LociResult", "FullSpace", "Surface4", "Cremona5", "Curves6", "Finite7", "Empty8", "CremonaMap",
    "compute_loci", "e4_form", "conic_of_b_given_a_n4", "construct_b_perspectivity_n4", "quadratic_cremona",
    "cremona5_forward", "cremona5_backward", "cremona5_base_points", "b_by_conics_n5", "Transfer5",
    "cubics_n6", "b_given_a_n6", "a_given_b_n6", "exceptional_points_n6", "chord_point",
    "solve_n7", "cross_conics", "distinguished_point", "emptiness_n8", "EmptinessCertificate",
    "multidegree_probe", "probe_points", "quintic_on_line", "ideal_slice_dimension", "sample_locus",
    "locus_dimension",
]
