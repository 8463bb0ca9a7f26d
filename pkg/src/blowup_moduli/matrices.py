"""Exact dense linear algebra.

Two layers live here:

* ``MatrixC`` -- small dense matrices over Q(i) (or its quadratic
  extension), used by the configuration calculus.  Everything is a pure
  function of immutable values.
* integer matrices as numpy ``object`` arrays -- Smith normal form,
  ranks, kernels and cokernels over Z, used by the spectral sequence
  engine.  Object dtype keeps Python's arbitrary-precision integers
  while still getting vectorised row/column operations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeMismatch, SingularMatrix
from .scalars import (
    GaussianRational,
    QuadExtScalar,
    as_gaussian,
    as_quadext,
    gaussian_sqrt,
)


def _entry(x):
    g = as_gaussian(x)
    if g is not NotImplemented:
        return g
    if isinstance(x, QuadExtScalar):
        return x
    raise TypeError(f"unsupported matrix entry {x!r}")


class MatrixC:
    """Dense matrix with exact scalar entries (Q(i) by default)."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data, cols=None):
        data = [[_entry(x) for x in row] for row in data]
        self.rows = len(data)
        self.cols = (len(data[0]) if data else 0) if cols is None else cols
        if any(len(row) != self.cols for row in data):
            raise ShapeMismatch("ragged rows")
        self.data = data

    # -- constructors ---------------------------------------------------

    @classmethod
    def zeros(cls, rows, cols):
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def diag(cls, *entries):
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_blocks(cls, grid):
        """Assemble from a 2D grid of MatrixC blocks."""
        rows = []
        for block_row in grid:
            height = block_row[0].rows
            if any(b.rows != height for b in block_row):
                raise ShapeMismatch("block heights differ")
            for i in range(height):
                row = []
                for b in block_row:
                    row.extend(b.data[i])
                rows.append(row)
        return cls(rows)

    @classmethod
    def row_vector(cls, entries):
        return cls([list(entries)])

    @classmethod
    def col_vector(cls, entries):
        return cls([[x] for x in entries])

    # -- access ---------------------------------------------------------

    def __getitem__(self, idx):
        i, j = idx
        return self.data[i][j]

    def row(self, i):
        return list(self.data[i])

    def col(self, j):
        return [self.data[i][j] for i in range(self.rows)]

    def submatrix(self, row_range, col_range):
        return MatrixC([[self.data[i][j] for j in col_range] for i in row_range])

    def shape(self):
        return (self.rows, self.cols)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, MatrixC):
            return NotImplemented
        if self.shape() != other.shape():
            raise ShapeMismatch(f"add {self.shape()} vs {other.shape()}")
        return MatrixC(
            [
                [self.data[i][j] + other.data[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ]
        )

    def __sub__(self, other):
        if not isinstance(other, MatrixC):
            return NotImplemented
        if self.shape() != other.shape():
            raise ShapeMismatch(f"sub {self.shape()} vs {other.shape()}")
        return MatrixC(
            [
                [self.data[i][j] - other.data[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ]
        )

    def __neg__(self):
        return self.scale(-1)

    def __mul__(self, other):
        if isinstance(other, MatrixC):
            if self.cols != other.rows:
                raise ShapeMismatch(f"mul {self.shape()} vs {other.shape()}")
            out = []
            for i in range(self.rows):
                row = []
                for j in range(other.cols):
                    acc = None
                    for t in range(self.cols):
                        term = self.data[i][t] * other.data[t][j]
                        acc = term if acc is None else acc + term
                    row.append(acc if acc is not None else _entry(0))
                out.append(row)
            return MatrixC(out)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, scalar):
        s = _entry(scalar)
        return MatrixC(
            [[s * self.data[i][j] for j in range(self.cols)] for i in range(self.rows)]
        )

    def __eq__(self, other):
        if not isinstance(other, MatrixC):
            return NotImplemented
        return self.shape() == other.shape() and all(
            self.data[i][j] == other.data[i][j]
            for i in range(self.rows)
            for j in range(self.cols)
        )

    def __hash__(self):
        return hash(tuple(tuple(row) for row in self.data))

    def is_zero(self):
        return all(not self.data[i][j] for i in range(self.rows) for j in range(self.cols))

    def transpose(self):
        return MatrixC([[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in row) for row in self.data)
        return f"MatrixC[{body}]"


def commutator(a: MatrixC, b: MatrixC) -> MatrixC:
    return a * b - b * a


def mat_arith(op: str, a: MatrixC, b=None) -> MatrixC:
    """Tagged dispatch used by the CLI: add, sub, multiply, scalar, commutator."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "multiply":
        return a * b
    if op == "scalar":
        return a.scale(b)
    if op == "commutator":
        return commutator(a, b)
    raise ValueError(f"unknown matrix operation {op!r}")


# -- elimination over the exact scalar field --------------------------------


def _echelon(rows):
    """In-place forward elimination; returns pivot column list."""
    if not rows:
        return []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def rank(m: MatrixC) -> int:
    rows = [list(r) for r in m.data]
    return len(_echelon(rows))


def kernel_basis(m: MatrixC) -> list[list]:
    """Basis vectors (length cols) of the right kernel."""
    rows = [list(r) for r in m.data]
    pivots = _echelon(rows)
    free = [c for c in range(m.cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [_entry(0)] * m.cols
        v[fc] = _entry(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][fc]
        basis.append(v)
    return basis


def inverse(m: MatrixC) -> MatrixC:
    if m.rows != m.cols:
        raise ShapeMismatch("inverse of a non-square matrix")
    n = m.rows
    aug = [list(m.data[i]) + [_entry(1 if i == j else 0) for j in range(n)] for i in range(n)]
    pivots = _echelon(aug)
    if pivots != list(range(n)):
        raise SingularMatrix("matrix is singular")
    return MatrixC([row[n:] for row in aug])


@dataclass(frozen=True)
class Eig2:
    """Eigen-data of a 2x2 matrix, exact over at most one extension."""

    values: tuple
    vectors: tuple
    distinct: bool
    in_gaussians: bool
    diagonalizable: bool
    disc: GaussianRational


def eig2(m: MatrixC) -> Eig2:
    """Exact eigenvalues/eigenvectors of a 2x2 matrix over Q(i).

    Roots of the characteristic polynomial come from the quadratic
    formula; whether they stay in Q(i) is decided by exact square-root
    detection.  A defective matrix reports one eigenvector.
    """
    if m.shape() != (2, 2):
        raise ShapeMismatch("eig2 expects a 2x2 matrix")
    a, b = m[0, 0], m[0, 1]
    c, d = m[1, 0], m[1, 1]
    tr = a + d
    det = a * d - b * c
    disc = tr * tr - 4 * det
    root = gaussian_sqrt(disc)
    half = as_gaussian(1) / 2
    if root is not None:
        lam1 = as_quadext((tr + root) * half)
        lam2 = as_quadext((tr - root) * half)
        in_gaussians = True
    else:
        lam1 = QuadExtScalar(tr * half, half, disc)
        lam2 = QuadExtScalar(tr * half, -half, disc)
        in_gaussians = False
    distinct = bool(disc)

    def eigvec(lam):
        # rows of (m - lam I) are dependent; read a kernel vector off a row
        r1 = (as_quadext(a) - lam, as_quadext(b))
        if r1[0] or r1[1]:
            return (r1[1], -r1[0])
        r2 = (as_quadext(c), as_quadext(d) - lam)
        if r2[0] or r2[1]:
            return (r2[1], -r2[0])
        return None  # scalar matrix

    if distinct:
        vectors = (eigvec(lam1), eigvec(lam2))
        return Eig2((lam1, lam2), vectors, True, in_gaussians, True, disc)
    v = eigvec(lam1)
    if v is None:
        basis = (
            (as_quadext(1), as_quadext(0)),
            (as_quadext(0), as_quadext(1)),
        )
        return Eig2((lam1, lam2), basis, False, in_gaussians, True, disc)
    return Eig2((lam1, lam2), (v,), False, in_gaussians, False, disc)


# -- integer matrices ---------------------------------------------------------


@dataclass(frozen=True)
class IntMatrix:
    """Immutable dense integer matrix (thin wrapper over nested lists)."""

    entries: tuple

    def __init__(self, entries):
        rows = tuple(tuple(int(x) for x in row) for row in entries)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ShapeMismatch("ragged rows")
        object.__setattr__(self, "entries", rows)

    @property
    def rows(self):
        return len(self.entries)

    @property
    def cols(self):
        return len(self.entries[0]) if self.entries else 0

    def to_array(self) -> np.ndarray:
        return as_object_array(self.entries, self.rows, self.cols)

    def __str__(self):
        return "\n".join(" ".join(str(x) for x in row) for row in self.entries)


def as_object_array(rows, nrows=None, ncols=None) -> np.ndarray:
    if isinstance(rows, np.ndarray):
        return rows.astype(object)
    if isinstance(rows, IntMatrix):
        nrows, ncols = rows.rows, rows.cols
        rows = rows.entries
    rows = list(rows)
    nrows = len(rows) if nrows is None else nrows
    ncols = (len(rows[0]) if rows else 0) if ncols is None else ncols
    a = np.empty((nrows, ncols), dtype=object)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            a[i, j] = int(x)
    if nrows and ncols and a[0, 0] is None:
        a.fill(0)
    return a


def _obj_eye(n):
    a = np.zeros((n, n), dtype=object)
    for i in range(n):
        a[i, i] = 1
    return a


def _pivot_argmin(sub):
    """Index of a nonzero entry of least magnitude, or None.

    Unit entries are taken immediately; they dominate the incidence-like
    matrices this code sees and they make the division steps trivial."""
    units = (sub == 1) | (sub == -1)
    if units.any():
        flat = int(np.argmax(units))
        return divmod(flat, sub.shape[1])
    nz = sub != 0
    if not nz.any():
        return None
    mags = np.abs(sub)
    sentinel = mags.max() + 1
    mags = np.where(nz, mags, sentinel)
    flat = int(np.argmin(mags))
    return divmod(flat, sub.shape[1])


def _snf_core(a, want_transforms):
    """Diagonalise ``a`` in place by unimodular row/column operations."""
    m, n = a.shape
    U = _obj_eye(m) if want_transforms else None
    V = _obj_eye(n) if want_transforms else None
    t = 0
    while t < min(m, n):
        pos = _pivot_argmin(a[t:, t:])
        if pos is None:
            break
        while True:
            i, j = pos
            i += t
            j += t
            if i != t:
                a[[t, i], :] = a[[i, t], :]
                if want_transforms:
                    U[[t, i], :] = U[[i, t], :]
            if j != t:
                a[:, [t, j]] = a[:, [j, t]]
                if want_transforms:
                    V[:, [t, j]] = V[:, [j, t]]
            p = a[t, t]
            col = a[t + 1 :, t]
            if (col != 0).any():
                q = col // p
                # columns before t are already zero in every involved row
                a[t + 1 :, t:] -= np.outer(q, a[t, t:])
                if want_transforms:
                    U[t + 1 :, :] -= np.outer(q, U[t, :])
            row = a[t, t + 1 :]
            if (row != 0).any():
                q = row // p
                a[t:, t + 1 :] -= np.outer(a[t:, t], q)
                if want_transforms:
                    V[:, t + 1 :] -= np.outer(V[:, t], q)
            if (a[t + 1 :, t] != 0).any() or (a[t, t + 1 :] != 0).any():
                pos = _pivot_argmin(a[t:, t:])
                continue
            # pivot must divide the remaining block for the invariant chain
            rem = a[t + 1 :, t + 1 :]
            if rem.size and p != 1 and p != -1:
                bad = np.argwhere(rem % p != 0)
                if len(bad):
                    i, j = bad[0]
                    a[t, t:] += a[t + 1 + i, t:]
                    if want_transforms:
                        U[t, :] += U[t + 1 + i, :]
                    pos = _pivot_argmin(a[t:, t:])
                    continue
            break
        if a[t, t] < 0:
            a[t, :] = -a[t, :]
            if want_transforms:
                U[t, :] = -U[t, :]
        t += 1
    return U, V


def snf_invariants(mat) -> list[int]:
    """Invariant factors d1 | d2 | ... (all positive), no transforms."""
    a = as_object_array(mat).copy()
    if a.size == 0:
        return []
    _snf_core(a, want_transforms=False)
    out = []
    for t in range(min(a.shape)):
        if a[t, t] == 0:
            break
        out.append(int(a[t, t]))
    return out


@dataclass(frozen=True)
class SmithNormalForm:
    invariants: tuple
    rank: int
    U: IntMatrix
    V: IntMatrix
    diagonal: IntMatrix


def smith_normal_form(mat) -> SmithNormalForm:
    """U*M*V diagonal with positive invariants d1 | d2 | ... and U, V unimodular."""
    if isinstance(mat, IntMatrix):
        a = mat.to_array().copy()
    else:
        a = as_object_array(mat).copy()
    if a.size == 0:
        m, n = a.shape
        return SmithNormalForm((), 0, IntMatrix(_obj_eye(m)), IntMatrix(_obj_eye(n)), IntMatrix(a))
    U, V = _snf_core(a, want_transforms=True)
    inv = []
    for t in range(min(a.shape)):
        if a[t, t] == 0:
            break
        inv.append(int(a[t, t]))
    return SmithNormalForm(tuple(inv), len(inv), IntMatrix(U), IntMatrix(V), IntMatrix(a))


def integer_rank(mat) -> int:
    return len(snf_invariants(mat))


def kernel_rank_over_Z(mat) -> tuple[int, list[int]]:
    """(kernel rank, nontrivial cokernel invariants) of an integer matrix."""
    if isinstance(mat, IntMatrix):
        ncols = mat.cols
    else:
        arr = as_object_array(mat)
        ncols = arr.shape[1]
        mat = arr
    inv = snf_invariants(mat)
    torsion = [d for d in inv if d != 1]
    return ncols - len(inv), torsion


def integer_kernel_basis(mat) -> np.ndarray:
    """Columns span the full kernel lattice (a saturated subgroup)."""
    a = as_object_array(mat)
    snf = smith_normal_form(a)
    V = snf.V.to_array()
    return V[:, snf.rank :]


def cokernel_invariants(mat) -> tuple[int, list[int]]:
    """(free rank, torsion invariants) of Z^rows / column span."""
    a = as_object_array(mat)
    inv = snf_invariants(a)
    return a.shape[0] - len(inv), [d for d in inv if d != 1]


def solve_integer(mat, rhs) -> np.ndarray | None:
    """One integer solution x of M x = rhs, or None."""
    a = as_object_array(mat)
    snf = smith_normal_form(a)
    u = snf.U.to_array()
    v = snf.V.to_array()
    b = u @ as_object_array([list(r) for r in rhs]) if isinstance(rhs, (list, tuple)) else u @ rhs
    x = np.zeros((a.shape[1], b.shape[1]), dtype=object)
    for t in range(min(a.shape)):
        d = snf.diagonal.entries[t][t] if t < snf.rank else 0
        if d:
            if (b[t, :] % d != 0).any():
                return None
            x[t, :] = b[t, :] // d
        elif (b[t, :] != 0).any():
            return None
    if (b[min(a.shape) :, :] != 0).any():
        return None
    return v @ x


def lattice_contains(big, small) -> bool:
    """Does the column lattice of ``big`` contain every column of ``small``?"""
    small = as_object_array(small)
    if small.size == 0:
        return True
    return solve_integer(big, small) is not None


def lattice_equal(a, b) -> bool:
    return lattice_contains(a, b) and lattice_contains(b, a)


def determinant(mat) -> int:
    """Bareiss fraction-free determinant (exact)."""
    a = as_object_array(mat).copy()
    n, m = a.shape
    if n != m:
        raise ShapeMismatch("determinant of a non-square matrix")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k, k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i, k] != 0), None)
            if swap is None:
                return 0
            a[[k, swap], :] = a[[swap, k], :]
            sign = -sign
        piv = a[k, k]
        block = a[k + 1 :, k + 1 :]
        a[k + 1 :, k + 1 :] = (piv * block - np.outer(a[k + 1 :, k], a[k, k + 1 :])) // prev
        prev = piv
    return sign * int(a[n - 1, n - 1])
