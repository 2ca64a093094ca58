"""Small dense linear algebra over two backends.

Exact arrays are numpy object arrays of ``fractions.Fraction``; float arrays are
``complex128``.  Exact routines run plain Gaussian elimination on Python lists,
float routines defer to numpy's SVD / LU.
"""

from enum import Enum
from fractions import Fraction
from math import lcm
from numbers import Integral, Rational

import numpy as np

EPS_REL = 1e-9
EPS_ABS = 1e-12
EPS_IM = 1e-8


class Backend(Enum):
    EXACT = "exact"
    FLOAT = "float"


def _exact_scalar(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (bool, np.bool_)):
        raise TypeError("booleans are not coordinates")
    if isinstance(v, (Integral, Rational, np.integer)):
        return Fraction(int(v)) if isinstance(v, (Integral, np.integer)) else Fraction(v)
    if isinstance(v, str):
        return Fraction(v.strip())
    raise TypeError(f"not an exact scalar: {v!r}")


def _is_exact_literal(v):
    return isinstance(v, (Fraction, Integral, np.integer, str)) and not isinstance(v, (bool, np.bool_))


def _leaves(obj):
    if isinstance(obj, np.ndarray):
        if obj.dtype != object:
            yield from ()
            return
        yield from obj.ravel()
        return
    if isinstance(obj, (list, tuple)):
        for item in obj:
            yield from _leaves(item)
        return
    if hasattr(obj, "coords"):
        yield from _leaves(obj.coords)
        return
    yield obj


def infer_backend(values):
    """EXACT when every entry is an int / Fraction / "p/q" string, FLOAT otherwise."""
    if isinstance(values, np.ndarray) and values.dtype != object:
        return Backend.EXACT if values.dtype.kind in "iu" else Backend.FLOAT
    if hasattr(values, "coords"):
        return infer_backend(values.coords)
    for leaf in _leaves(values):
        if isinstance(leaf, np.ndarray):
            if leaf.dtype.kind not in "iu":
                return Backend.FLOAT
            continue
        if not _is_exact_literal(leaf):
            return Backend.FLOAT
    return Backend.EXACT


def _unwrap(values):
    if hasattr(values, "coords"):
        return values.coords
    if isinstance(values, (list, tuple)):
        return [_unwrap(v) for v in values]
    return values


def as_array(values, backend=None):
    """Convert nested numbers (or PPoints) to an array of the requested backend."""
    values = _unwrap(values)
    if backend is None:
        backend = infer_backend(values)
    if backend is Backend.EXACT:
        if isinstance(values, np.ndarray) and values.dtype.kind in "fc":
            raise TypeError("float data cannot enter the exact backend")
        arr = np.array(values, dtype=object)
        flat = arr.ravel()
        for k, v in enumerate(flat):
            if isinstance(v, (float, complex, np.floating, np.complexfloating)):
                raise TypeError("float data cannot enter the exact backend")
            flat[k] = _exact_scalar(v)
        return flat.reshape(arr.shape)
    if isinstance(values, np.ndarray) and values.dtype != object:
        return values.astype(np.complex128)
    arr = np.array(values, dtype=object)
    flat = arr.ravel()
    out = np.empty(flat.shape, dtype=np.complex128)
    for k, v in enumerate(flat):
        out[k] = complex(float(v)) if isinstance(v, (Fraction, str)) else complex(v)
    return out.reshape(arr.shape)


def is_exact(arr):
    return isinstance(arr, np.ndarray) and arr.dtype == object


def backend_of(*arrays):
    return Backend.EXACT if all(is_exact(a) for a in arrays) else Backend.FLOAT


def to_float(arr):
    if is_exact(arr):
        return as_array(arr, Backend.FLOAT)
    return np.asarray(arr, dtype=np.complex128)


def harmonize(*arrays):
    """Bring arrays to a common backend (float wins)."""
    if all(is_exact(a) for a in arrays):
        return arrays
    return tuple(to_float(a) for a in arrays)


def zeros(shape, backend):
    if backend is Backend.EXACT:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros(shape, dtype=np.complex128)


def eye(n, backend):
    out = zeros((n, n), backend)
    for i in range(n):
        out[i, i] = Fraction(1) if backend is Backend.EXACT else 1.0
    return out


def max_abs(arr):
    arr = np.asarray(arr)
    if arr.size == 0:
        return 0.0
    if is_exact(arr):
        return max(abs(v) for v in arr.ravel())
    return float(np.max(np.abs(arr)))


def is_zero(x, scale=1.0):
    """Exact zero test, or |x| <= max(EPS_ABS, EPS_REL * scale) for floats."""
    if isinstance(x, Fraction) or isinstance(x, Integral):
        return x == 0
    return abs(x) <= max(EPS_ABS, EPS_REL * float(scale))


def is_zero_vector(v):
    v = np.asarray(v)
    if is_exact(v):
        return all(c == 0 for c in v.ravel())
    return bool(np.all(np.abs(v) <= EPS_ABS))


# Exact elimination kernels (Python lists of Fractions)

def _rref_rows(rows, ncols):
    rows = [[Fraction(v) for v in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        if piv != 1:
            rows[r] = [v / piv for v in rows[r]]
        pr = rows[r]
        for i in range(len(rows)):
            if i != r:
                f = rows[i][c]
                if f != 0:
                    rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
    return rows, pivots


def rref(M):
    """Reduced row echelon form of an exact matrix: (R, pivot_columns)."""
    M = np.asarray(M)
    rows, piv = _rref_rows(M.tolist(), M.shape[1])
    return np.array(rows, dtype=object).reshape(M.shape), piv


def _det_exact(M):
    n = M.shape[0]
    if n == 1:
        return M[0, 0]
    if n == 2:
        return M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    if n == 3:
        return (M[0, 0] * (M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1])
                - M[0, 1] * (M[1, 0] * M[2, 2] - M[1, 2] * M[2, 0])
                + M[0, 2] * (M[1, 0] * M[2, 1] - M[1, 1] * M[2, 0]))
    rows = [[Fraction(v) for v in r] for r in M.tolist()]
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            det = -det
        piv = rows[c][c]
        det *= piv
        for i in range(c + 1, n):
            f = rows[i][c] / piv
            if f != 0:
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return det


def det(M):
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("det needs a square matrix")
    if is_exact(M):
        return _det_exact(M)
    return complex(np.linalg.det(M))


def _integer_row(row):
    row = [Fraction(v) for v in row]
    den = lcm(*[v.denominator for v in row]) if row else 1
    return [int(v * den) for v in row]


def _rank_integer(rows, ncols):
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    rows = [list(r) for r in rows]
    r, prev = 0, 1
    for c in range(ncols):
        if r == len(rows):
            break
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        for i in range(r + 1, len(rows)):
            f = rows[i][c]
            rows[i] = [(piv * a - f * b) // prev for a, b in zip(rows[i], rows[r])]
        prev = piv
        r += 1
    return r


def rank(M, rtol=EPS_REL):
    M = np.asarray(M)
    if M.size == 0:
        return 0
    if is_exact(M):
        return _rank_integer([_integer_row(r) for r in M.tolist()], M.shape[1])
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def nullspace(M, rtol=EPS_REL):
    """Basis of the right nullspace as a list of vectors.

    Exact: the reduced-echelon basis (free variable set to 1).  Float: right
    singular vectors whose singular value is below rtol * sigma_max.
    """
    M = np.asarray(M)
    ncols = M.shape[1]
    if is_exact(M):
        rows, piv = _rref_rows(M.tolist(), ncols)
        free = [c for c in range(ncols) if c not in piv]
        basis = []
        for f in free:
            v = [Fraction(0)] * ncols
            v[f] = Fraction(1)
            for r, pc in enumerate(piv):
                v[pc] = -rows[r][f]
            basis.append(np.array(v, dtype=object))
        return basis
    if M.shape[0] == 0:
        return [row for row in np.eye(ncols, dtype=np.complex128)]
    _, s, vh = np.linalg.svd(M)
    smax = s[0] if s.size else 0.0
    k = int(np.sum(s > rtol * smax)) if smax > 0 else 0
    return [vh[i].conj() for i in range(k, ncols)]


def left_nullspace(M, rtol=EPS_REL):
    return nullspace(np.asarray(M).T, rtol)


def inv(M):
    M = np.asarray(M)
    n = M.shape[0]
    if is_exact(M):
        aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M.tolist())]
        rows, piv = _rref_rows(aug, 2 * n)
        if piv[:n] != list(range(n)) or len(piv) < n:
            raise np.linalg.LinAlgError("singular matrix")
        return np.array([r[n:] for r in rows], dtype=object)
    if rank(M) < n:
        raise np.linalg.LinAlgError("singular matrix")
    return np.linalg.inv(M)


def solve(M, b):
    M = np.asarray(M)
    if is_exact(M):
        return inv(M).dot(b)
    return np.linalg.solve(M, b)


def matmul(A, B):
    """Matrix product that keeps object arrays exact."""
    A, B = harmonize(np.asarray(A), np.asarray(B))
    return A.dot(B)
