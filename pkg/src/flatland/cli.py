"""Command line front end: flatland {check, reconstruct, loci, map, plot} PROBLEM.json

Exit codes: 0 success, 2 parse error, 3 non-generic data, 4 no common image,
5 base point or degenerate query.
"""

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .epipolar import cameras_from_fundamental, fundamental_from_centers, reconstruct_two_view, \
    reprojection_residual, on_baseline, verify_common_image, FundamentalMatrix
from .errors import (
    BasePoint, CenterOnPoint, DegenerateConfig, EmptyWindow, FlatlandError, GenericityFailure, InconsistentCenters,
    NoCommonImage, NonGeneric, NotOnCurve, ParseError, RankAnomaly, UnsupportedN, WrongRank,
)
from .linalg import Backend, as_array, is_exact
from .projective import LabeledConfig, PPoint, genericity_report
from .serialize import matrix_to_json, parse_scalar, parse_vector, point_to_json, scalar_to_json

VERSION = "1"

EXIT_OK, EXIT_PARSE, EXIT_NONGENERIC, EXIT_NO_IMAGE, EXIT_DEGENERATE = 0, 2, 3, 4, 5


@dataclass
class ProblemFile:
    n: int
    X: LabeledConfig
    Y: LabeledConfig
    backend: Backend
    seed: int = None
    extra: dict = field(default_factory=dict)
    version: str = VERSION

    @property
    def dim(self):
        return self.X.dim


def _parse_points(raw, name, size):
    if not isinstance(raw, list):
        raise ParseError(f"{name} must be a list of coordinate arrays")
    pts = []
    for k, v in enumerate(raw):
        coords = parse_vector(v, size)
        if all(c == 0 for c in coords):
            raise ParseError(f"{name}[{k}] has all coordinates zero")
        pts.append(coords)
    return pts


def parse_problem(text, backend=None, general_dim=False):
    """ProblemFile from JSON text; `backend` overrides the file's choice."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ParseError("problem must be a JSON object")
    if str(data.get("version")) != VERSION:
        raise ParseError(f"unsupported version {data.get('version')!r}")
    for key in ("n", "X", "Y"):
        if key not in data:
            raise ParseError(f"missing field {key!r}")
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError("n must be a positive integer")
    if not isinstance(data["X"], list) or not data["X"] or not isinstance(data["X"][0], list):
        raise ParseError("X must be a non-empty list of coordinate arrays")
    size = len(data["X"][0])
    if size != 3 and not (general_dim and size >= 3):
        raise ParseError("coordinate arrays must have length 3")
    X = _parse_points(data["X"], "X", size)
    Y = _parse_points(data["Y"], "Y", size)
    if len(X) != n or len(Y) != n:
        raise ParseError(f"n = {n} but |X| = {len(X)} and |Y| = {len(Y)}")
    has_float = any(isinstance(c, float) for p in X + Y for c in p)
    declared = data.get("backend", "float" if has_float else "exact")
    chosen = backend or declared
    if chosen not in ("exact", "float"):
        raise ParseError(f"unknown backend {chosen!r}")
    if chosen == "exact" and has_float:
        raise ParseError("float coordinates cannot be used with the exact backend")
    be = Backend.EXACT if chosen == "exact" else Backend.FLOAT
    seed = data.get("seed")
    if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool)):
        raise ParseError("seed must be an integer")
    extra = {k: v for k, v in data.items() if k not in ("version", "n", "X", "Y", "backend", "seed")}
    return ProblemFile(n, LabeledConfig(X, "X", be), LabeledConfig(Y, "Y", be), be, seed, extra)


def _parse_matrix(raw, name, backend):
    if not isinstance(raw, list) or not raw or not all(isinstance(r, list) for r in raw):
        raise ParseError(f"{name} must be a matrix")
    rows = [parse_vector(r, len(raw[0])) for r in raw]
    return as_array(rows, backend)


def _literal(text):
    """Command-line coordinate: integer or p/q stays exact, anything else is a float."""
    try:
        return parse_scalar(int(text) if text.lstrip("+-").isdigit() else text)
    except ParseError:
        try:
            return float(text)
        except ValueError:
            raise ParseError(f"bad coordinate {text!r}") from None


def _parse_point_arg(raw, backend):
    vals = [_literal(p.strip()) for p in raw.split(",")] if isinstance(raw, str) else parse_vector(raw)
    if len(vals) != 3 or all(v == 0 for v in vals):
        raise ParseError("a point needs three coordinates, not all zero")
    if backend is Backend.EXACT and any(isinstance(v, float) for v in vals):
        raise ParseError("float coordinates cannot be used with the exact backend")
    return PPoint(as_array(vals, backend))


# Witness construction for `check`

def _pad(cfg, rng, plane):
    from .scenes import random_point
    pts = list(cfg.points)
    while len(pts) < 3:
        q = random_point(rng)
        if cfg.backend is Backend.FLOAT:
            q = q.to_float()
        trial = LabeledConfig(pts + [q], plane, cfg.backend)
        if genericity_report(trial).clean:
            pts.append(q)
    return LabeledConfig(pts, plane, cfg.backend)


def _candidates(X, Y, rng):
    """Candidate center pairs on the locus, exact whenever the data are."""
    from .loci.probes import sample_e4, sample_e5
    from .scenes import random_point
    n = X.n
    if n <= 3:
        while True:
            yield random_point(rng), random_point(rng)
    elif n == 4:
        while True:
            yield from sample_e4(X, Y, rng, 1)
    elif n == 5:
        while True:
            yield from sample_e5(X, Y, rng, 1)
    elif n == 6:
        from .loci.n6 import b_given_a_n6, chord_point, cubics_n6
        Cx, _ = cubics_n6(X, Y, cross_check=False)
        for i in range(6):
            for j in range(i + 1, 6):
                try:
                    a = chord_point(Cx, X[i], X[j])
                    yield a, b_given_a_n6(X, Y, a)
                except (RankAnomaly, NotOnCurve, DegenerateConfig):
                    continue
    else:
        from .loci.n7 import solve_n7
        res = solve_n7(X, Y)
        ranked = sorted(zip(res.pairs, res.exact), key=lambda pe: (not pe[1], _imag_size(pe[0])))
        for (a, b), exact in ranked:
            yield (a, b) if exact else (_real_part(a), _real_part(b))


def _imag_size(pair):
    out = 0.0
    for p in pair:
        v = np.asarray(p.coords)
        if not is_exact(v):
            v = v / v[int(np.argmax(np.abs(v)))]
            out = max(out, float(np.max(np.abs(v.imag))))
    return out


def _real_part(p):
    v = np.asarray(p.coords, dtype=complex)
    v = v / v[int(np.argmax(np.abs(v)))]
    return PPoint(v.real.astype(complex))


MAX_TRIES = 50


def find_witness(X, Y, rng):
    """(a, b, F, A, B) with verify_common_image(A, B, X, Y), or None."""
    Xp, Yp = (_pad(X, rng, "X"), _pad(Y, rng, "Y")) if X.n < 3 else (X, Y)
    tries = 0
    for a, b in _candidates(X, Y, rng):
        tries += 1
        if tries > MAX_TRIES:
            break
        try:
            if any(a == x for x in Xp) or any(b == y for y in Yp):
                continue
            F = fundamental_from_centers(a, b, Xp, Yp)
            A, B = cameras_from_fundamental(F)
        except (InconsistentCenters, DegenerateConfig, WrongRank):
            continue
        if verify_common_image(A, B, X, Y):
            return a, b, F, A, B
    return None


def _witness_json(a, b, F, A, B):
    return {"a": point_to_json(a), "b": point_to_json(b), "F": matrix_to_json(F.matrix),
            "A": matrix_to_json(A.matrix), "B": matrix_to_json(B.matrix), "verified": True}


def _report(problem):
    return genericity_report(problem.X) + genericity_report(problem.Y)


def cmd_check(problem, rng):
    """Verdict "yes" with a witness (A, B, F), "no" with a certificate, or "non-generic"."""
    from .loci.n7 import emptiness_n8
    X, Y = problem.X, problem.Y
    report = _report(problem)
    if not report.clean:
        raise NonGeneric("data are not in general position", report.to_list())
    if X.n >= 8:
        try:
            cert = emptiness_n8(X, Y)
        except GenericityFailure as exc:
            F = getattr(exc, "matrix", None)
            if F is None:
                raise NonGeneric(str(exc)) from None
            A, B = cameras_from_fundamental(FundamentalMatrix(F))
            if not verify_common_image(A, B, X, Y):
                raise NonGeneric("rank-2 member does not give a common image") from None
            a, b = FundamentalMatrix(F).epipoles
            return {"verdict": "yes", "witness": _witness_json(a, b, FundamentalMatrix(F), A, B)}
        return {"verdict": "no", "certificate": cert.to_dict()}
    found = find_witness(X, Y, rng)
    if found is None:
        raise NonGeneric("no witness found on the locus")
    return {"verdict": "yes", "witness": _witness_json(*found)}


def _cameras_for(problem, rng):
    be = problem.backend
    if "A" in problem.extra and "B" in problem.extra:
        return _parse_matrix(problem.extra["A"], "A", be), _parse_matrix(problem.extra["B"], "B", be)
    if problem.dim != 2:
        raise ParseError("general-dimension input needs cameras A and B in the problem file")
    res = cmd_check(problem, rng)
    if res["verdict"] != "yes":
        raise NoCommonImage("no pair of cameras gives a common image")
    w = res["witness"]
    return _parse_matrix(w["A"], "A", be), _parse_matrix(w["B"], "B", be)


def cmd_reconstruct(problem, rng):
    A, B = _cameras_for(problem, rng)
    rec = reconstruct_two_view(problem.X, problem.Y, A, B)
    res = reprojection_residual(rec, problem.X, problem.Y)
    out = rec.to_dict()
    out.update({
        "dims": {"image": problem.dim, "scene": problem.dim + 1},
        "residual": scalar_to_json(res),
        "exact": bool(is_exact(np.asarray(rec.Aprime.matrix))),
        "baseline": [point_to_json(p) for p in rec.baseline],
        "on_baseline": [i for i, z in enumerate(rec.Z) if on_baseline(rec, z)],
    })
    return out


def cmd_loci(problem, rng, samples=0, real_only=False):
    from .loci import compute_loci
    return compute_loci(problem.X, problem.Y, samples=samples, rng=rng, real_only=real_only).to_dict()


def cmd_map(problem, point, inverse=False):
    from .loci.n5 import Transfer5
    if problem.n != 5:
        raise UnsupportedN("map needs n = 5")
    t = Transfer5(problem.X, problem.Y)
    out = t.backward(point) if inverse else t.forward(point)
    return {"direction": "inverse" if inverse else "forward", "input": point_to_json(point),
            "output": point_to_json(out)}


def cmd_plot(problem, window, plane="x", point=None):
    """Picture of the real locus: the cubic for n = 6, the three conics and centers for n = 7."""
    from .plot import Picture
    X, Y = problem.X, problem.Y
    cfg = X if plane == "x" else Y
    pic = Picture(window, points=[(f"{plane}{i}", p) for i, p in enumerate(cfg)])
    if problem.n == 6:
        from .loci.n6 import cubics_n6
        Cx, Cy = cubics_n6(X, Y, cross_check=False)
        pic.curves.append((f"C{plane}", Cx if plane == "x" else Cy))
    elif problem.n == 7:
        from .loci.n7 import solve_n7
        res = solve_n7(X, Y)
        conics = res.conics_a if plane == "x" else res.conics_b
        pic.curves.extend((f"omega_{plane}{k}", c) for k, c in enumerate(conics))
        pic.markers.extend((f"center{k}", (a if plane == "x" else b)) for k, (a, b) in enumerate(res.pairs))
    elif problem.n == 4 and point is not None:
        from .loci.n4 import conic_of_b_given_a_n4
        if plane == "x":
            pic = Picture(window, points=[(f"y{i}", p) for i, p in enumerate(Y)])
            pic.curves.append(("omega", conic_of_b_given_a_n4(X, Y, point)))
        else:
            pic = Picture(window, points=[(f"x{i}", p) for i, p in enumerate(X)])
            pic.curves.append(("omega", conic_of_b_given_a_n4(Y, X, point)))
    else:
        raise UnsupportedN("plot supports n = 6, n = 7, and n = 4 with --point")
    return pic


# Envelope and dispatch

def exit_code_for(exc):
    if isinstance(exc, (ParseError, UnsupportedN)):
        return EXIT_PARSE
    if isinstance(exc, NoCommonImage):
        return EXIT_NO_IMAGE
    if isinstance(exc, (BasePoint, CenterOnPoint, EmptyWindow, NotOnCurve, RankAnomaly)):
        return EXIT_DEGENERATE
    if isinstance(exc, (NonGeneric, DegenerateConfig, GenericityFailure)):
        return EXIT_NONGENERIC
    return 1


def _error_json(exc):
    out = {"type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, BasePoint):
        out["base_point"] = exc.ident
    if isinstance(exc, NonGeneric) and exc.offending:
        out["offending"] = list(exc.offending)
    return out


def _dump(obj):
    return json.dumps(obj, indent=2) + "\n"


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("problem", help="problem JSON file, or - for stdin")
    common.add_argument("--backend", choices=["exact", "float"], default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--out", default=None, help="write the result here instead of stdout")
    common.add_argument("--timing", action="store_true", help="record wall time in the envelope")

    p = argparse.ArgumentParser(prog="flatland", description="Two flatland cameras and their common images.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("check", parents=[common], help="is there a camera pair with a common image?")
    sub.add_parser("reconstruct", parents=[common], help="lift a common image to a scene")
    lp = sub.add_parser("loci", parents=[common], help="locus of camera-center pairs")
    lp.add_argument("--samples", type=int, default=0)
    lp.add_argument("--real-only", action="store_true")
    mp = sub.add_parser("map", parents=[common], help="n = 5 center transfer a -> b")
    mp.add_argument("--point", default=None, help="comma separated coordinates, e.g. 1,2,3")
    mp.add_argument("--inverse", action="store_true", help="map b -> a instead")
    pp = sub.add_parser("plot", parents=[common], help="SVG of the real locus")
    pp.add_argument("--window", type=float, nargs=4, default=[-10.0, 10.0, -10.0, 10.0],
                    metavar=("XMIN", "XMAX", "YMIN", "YMAX"))
    pp.add_argument("--size", type=int, default=512)
    pp.add_argument("--plane", choices=["x", "y"], default="x")
    pp.add_argument("--point", default=None, help="center for the n = 4 conic")
    return p


def _read(path):
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None


def _write(text, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv=None):
    """Run the CLI; returns (exit code, stdout text)."""
    from .plot import Window
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    envelope = {"command": args.command, "version": VERSION}
    try:
        problem = parse_problem(_read(args.problem), args.backend, general_dim=args.command == "reconstruct")
        seed = args.seed if args.seed is not None else (problem.seed if problem.seed is not None else 0)
        rng = np.random.default_rng(np.random.SeedSequence(seed))
        envelope.update({"seed": seed, "backend": problem.backend.value, "n": problem.n})
        envelope["genericity"] = _report(problem).to_list() if problem.dim == 2 else []
        if args.command == "check":
            result = cmd_check(problem, rng)
        elif args.command == "reconstruct":
            result = cmd_reconstruct(problem, rng)
        elif args.command == "loci":
            result = cmd_loci(problem, rng, args.samples, args.real_only)
        elif args.command == "map":
            key = "b" if args.inverse else "a"
            raw = args.point if args.point is not None else problem.extra.get(key)
            if raw is None:
                raise ParseError(f"map needs --point or a field {key!r}")
            result = cmd_map(problem, _parse_point_arg(raw, problem.backend), args.inverse)
        else:
            if problem.backend is Backend.EXACT and args.backend != "exact":
                problem = ProblemFile(problem.n, problem.X.to_float(), problem.Y.to_float(), Backend.FLOAT,
                                      problem.seed, problem.extra)
                envelope["backend"] = "float"
            window = Window(*args.window, size=args.size)
            point = _parse_point_arg(args.point, problem.backend) if args.point else None
            svg = cmd_plot(problem, window, args.plane, point).svg()
            if args.out:
                _write(svg, args.out)
                result = {"svg": args.out, "window": list(args.window), "size": args.size}
            else:
                return EXIT_OK, svg
        envelope["result"] = result
        code = EXIT_OK
    except FlatlandError as exc:
        code = exit_code_for(exc)
        if isinstance(exc, NonGeneric) and args.command == "check":
            envelope["result"] = {"verdict": "non-generic", "reason": str(exc)}
        envelope["error"] = _error_json(exc)
    if args.timing:
        envelope["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    text = _dump(envelope)
    if args.out and args.command != "plot" and code == EXIT_OK:
        _write(text, args.out)
        return code, ""
    return code, text


def main(argv=None):
    code, text = run(argv)
    if text:
        sys.stdout.write(text)
    if code:
        err = json.loads(text).get("error", {}) if text.startswith("{") else {}
        print(f"flatland: {err.get('type', 'error')}: {err.get('message', '')}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
