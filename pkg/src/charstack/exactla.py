"""Exact linear algebra over the rationals.

Dense matrices of :class:`fractions.Fraction` and canonical subspaces.
Every elimination uses the same pivot rule (leftmost nonzero column,
topmost nonzero entry in it), so echelon forms and therefore
:class:`Subspace` values are reproducible and comparable with ``==``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

try:  # GMP rationals are a drop-in for Fraction and much faster
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    Q = Fraction

_RATIONAL_TYPES = (Fraction, type(Q(0)))


class DimensionError(ValueError):
    """Raised when operand shapes or ambient dimensions do not match."""


def to_fraction(x):
    """Coerce ints, Fractions and ``"p/q"`` strings to an exact rational."""
    if isinstance(x, _RATIONAL_TYPES):
        return Q(x)
    if isinstance(x, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(x, int):
        return Q(x)
    if isinstance(x, str):
        try:
            return Q(Fraction(x.strip()))
        except ValueError:
            raise ValueError(f"invalid rational literal {x!r}") from None
    raise TypeError(f"cannot use {x!r} as an exact rational (floats are rejected)")


def fraction_str(x) -> str:
    """Serialize as ``"p/q"``, or ``"p"`` when the denominator is 1."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class QMatrix:
    """Immutable dense matrix with exact rational entries."""

    __slots__ = ("rows", "cols", "_data", "_hash")

    def __init__(self, rows: int, cols: int, data: Iterable[Iterable] | None = None):
        if rows < 0 or cols < 0:
            raise DimensionError("negative matrix dimension")
        self.rows = rows
        self.cols = cols
        if data is None:
            self._data = tuple((Q(0),) * cols for _ in range(rows))
        else:
            self._data = tuple(tuple(to_fraction(x) for x in row) for row in data)
            if len(self._data) != rows or any(len(r) != cols for r in self._data):
                raise DimensionError(f"data does not have shape {rows}x{cols}")
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "QMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, rows)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "QMatrix":
        columns = [list(c) for c in columns]
        for c in columns:
            if len(c) != rows:
                raise DimensionError("column length mismatch")
        return cls(rows, len(columns), [[c[i] for c in columns] for i in range(rows)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        one, zero = Q(1), Q(0)
        return cls(n, n, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, entries: Sequence) -> "QMatrix":
        n = len(entries)
        return cls(n, n, [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def _raw(cls, rows: int, cols: int, data: tuple) -> "QMatrix":
        # trusted fast path: data is already a tuple of tuples of Fractions
        m = cls.__new__(cls)
        m.rows, m.cols, m._data, m._hash = rows, cols, data, None
        return m

    # -- access ---------------------------------------------------------
    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple:
        return self._data[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self._data)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.cols)]

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def T(self) -> "QMatrix":
        return QMatrix._raw(self.cols, self.rows, tuple(zip(*self._data)) if self.rows else
                            tuple(() for _ in range(self.cols)))

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._data for x in r)

    def is_square(self) -> bool:
        return self.rows == self.cols

    # -- arithmetic -----------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._data))
        return self._hash

    def __add__(self, other: "QMatrix") -> "QMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return QMatrix._raw(self.rows, self.cols, tuple(
            tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)))

    def __neg__(self) -> "QMatrix":
        return QMatrix._raw(self.rows, self.cols, tuple(tuple(-a for a in r) for r in self._data))

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        return self + (-other)

    def scale(self, c) -> "QMatrix":
        c = to_fraction(c)
        return QMatrix._raw(self.rows, self.cols, tuple(tuple(c * a for a in r) for r in self._data))

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.columns()
        zero = Q(0)
        out = []
        for r in self._data:
            nz = [(k, a) for k, a in enumerate(r) if a]
            out.append(tuple(sum((a * c[k] for k, a in nz), zero) for c in cols))
        return QMatrix._raw(self.rows, other.cols, tuple(out))

    def apply(self, vec: Sequence) -> tuple:
        """Matrix times a column vector given as a sequence."""
        if len(vec) != self.cols:
            raise DimensionError("vector length mismatch")
        zero = Q(0)
        nz = [(k, a) for k, a in enumerate(vec) if a]
        return tuple(sum((r[k] * a for k, a in nz), zero) for r in self._data)

    def __pow__(self, k: int) -> "QMatrix":
        if not self.is_square():
            raise DimensionError("power of a non-square matrix")
        if k < 0:
            return self.inverse() ** (-k)
        result, base = QMatrix.identity(self.rows), self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def det(self) -> Fraction:
        if not self.is_square():
            raise DimensionError("determinant of a non-square matrix")
        a = self.tolist()
        n = self.rows
        det = Q(1)
        for c in range(n):
            p = next((r for r in range(c, n) if a[r][c] != 0), None)
            if p is None:
                return Q(0)
            if p != c:
                a[c], a[p] = a[p], a[c]
                det = -det
            det *= a[c][c]
            inv = 1 / a[c][c]
            for r in range(c + 1, n):
                f = a[r][c] * inv
                if f:
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return det

    def inverse(self) -> "QMatrix":
        if not self.is_square():
            raise DimensionError("inverse of a non-square matrix")
        n = self.rows
        aug = hstack(self, QMatrix.identity(n))
        red, pivots = rref(aug)
        if pivots[:n] != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return QMatrix._raw(n, n, tuple(tuple(r[n:]) for r in red[:n]))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "QMatrix":
        return QMatrix._raw(len(rows), len(cols),
                            tuple(tuple(self._data[i][j] for j in cols) for i in rows))

    # -- serialization --------------------------------------------------
    def to_json(self) -> list[list[str]]:
        return [[fraction_str(x) for x in r] for r in self._data]

    @classmethod
    def from_json(cls, data, cols: int | None = None) -> "QMatrix":
        return cls.from_rows(data, cols)

    def __repr__(self):
        body = "; ".join(" ".join(fraction_str(x) for x in r) for r in self._data)
        return f"QMatrix({self.rows}x{self.cols}: [{body}])"


def hstack(*ms: QMatrix) -> QMatrix:
    if not ms:
        raise DimensionError("nothing to stack")
    rows = ms[0].rows
    if any(m.rows != rows for m in ms):
        raise DimensionError("hstack row mismatch")
    data = tuple(tuple(x for m in ms for x in m.row(i)) for i in range(rows))
    return QMatrix._raw(rows, sum(m.cols for m in ms), data)


def vstack(*ms: QMatrix) -> QMatrix:
    if not ms:
        raise DimensionError("nothing to stack")
    cols = ms[0].cols
    if any(m.cols != cols for m in ms):
        raise DimensionError("vstack column mismatch")
    return QMatrix._raw(sum(m.rows for m in ms), cols, tuple(r for m in ms for r in m._data))


def block_diag(*ms: QMatrix) -> QMatrix:
    rows = sum(m.rows for m in ms)
    cols = sum(m.cols for m in ms)
    out = [[Q(0)] * cols for _ in range(rows)]
    r0 = c0 = 0
    for m in ms:
        for i in range(m.rows):
            out[r0 + i][c0:c0 + m.cols] = m.row(i)
        r0 += m.rows
        c0 += m.cols
    return QMatrix._raw(rows, cols, tuple(tuple(r) for r in out))


def block_matrix(blocks: Sequence[Sequence[QMatrix]]) -> QMatrix:
    return vstack(*(hstack(*row) for row in blocks))


def rref(m: QMatrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form by Gauss-Jordan elimination.

    Returns the reduced rows (as lists) and the pivot column indices.
    """
    a = m.tolist()
    nrows, ncols = m.rows, m.cols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
        pr = a[r]
        inv = 1 / pr[c]
        if inv != 1:
            pr = a[r] = [x * inv for x in pr]
        nz = [k for k in range(c, ncols) if pr[k]]
        for i in range(nrows):
            if i != r:
                f = a[i][c]
                if f:
                    row = a[i]
                    for k in nz:
                        row[k] -= f * pr[k]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: QMatrix) -> int:
    """Rank of ``m``."""
    if m.rows == 0 or m.cols == 0:
        return 0
    # eliminate along the shorter side
    if m.rows > m.cols:
        m = m.T
    return len(rref(m)[1])


class Subspace:
    """A subspace of Q^ambient_dim in canonical form.

    ``basis`` holds one basis vector per column and its transpose is in
    reduced row echelon form, so two Subspace values are equal exactly
    when they are the same subspace.
    """

    __slots__ = ("ambient_dim", "basis", "_pivots")

    def __init__(self, ambient_dim: int, vectors: Iterable[Sequence] = ()):
        vectors = [tuple(to_fraction(x) for x in v) for v in vectors]
        for v in vectors:
            if len(v) != ambient_dim:
                raise DimensionError(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
        self.ambient_dim = ambient_dim
        if vectors:
            red, pivots = rref(QMatrix._raw(len(vectors), ambient_dim, tuple(vectors)))
            rows = red[:len(pivots)]
        else:
            rows, pivots = [], []
        self._pivots = tuple(pivots)
        self.basis = QMatrix._raw(len(rows), ambient_dim, tuple(tuple(r) for r in rows)).T \
            if rows else QMatrix(ambient_dim, 0)

    @classmethod
    def span_of_columns(cls, m: QMatrix) -> "Subspace":
        return cls(m.rows, m.columns())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, QMatrix.identity(n).columns())

    @property
    def dim(self) -> int:
        return self.basis.cols

    def vectors(self) -> list[tuple]:
        return self.basis.columns()

    def contains(self, vec: Sequence) -> bool:
        vec = tuple(to_fraction(x) for x in vec)
        c = [vec[p] for p in self._pivots]
        return self.basis.apply(c) == vec

    def contains_space(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.vectors())

    def coordinates(self, vec: Sequence) -> tuple:
        """Coordinates of ``vec`` in ``basis``; raises if ``vec`` is not in the span."""
        vec = tuple(to_fraction(x) for x in vec)
        c = tuple(vec[p] for p in self._pivots)
        if self.basis.apply(c) != vec:
            raise ValueError("vector is not in the subspace")
        return c

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def kernel(m: QMatrix) -> Subspace:
    """Null space of ``m`` as a subspace of Q^cols."""
    n = m.cols
    if m.rows == 0:
        return Subspace.full(n)
    red, pivots = rref(m)
    pivot_set = set(pivots)
    vecs = []
    for free in range(n):
        if free in pivot_set:
            continue
        v = [Q(0)] * n
        v[free] = Q(1)
        for r, p in enumerate(pivots):
            v[p] = -red[r][free]
        vecs.append(v)
    return Subspace(n, vecs)


def image(m: QMatrix) -> Subspace:
    """Column span of ``m``."""
    return Subspace.span_of_columns(m)


def _check_same_ambient(s1: Subspace, s2: Subspace) -> None:
    if s1.ambient_dim != s2.ambient_dim:
        raise DimensionError(f"ambient dimensions differ: {s1.ambient_dim} vs {s2.ambient_dim}")


def subspace_sum(s1: Subspace, s2: Subspace) -> Subspace:
    _check_same_ambient(s1, s2)
    return Subspace(s1.ambient_dim, s1.vectors() + s2.vectors())


def intersect(s1: Subspace, s2: Subspace) -> Subspace:
    _check_same_ambient(s1, s2)
    if s1.dim == 0 or s2.dim == 0:
        return Subspace(s1.ambient_dim)
    # x = B1 a = B2 b  <=>  [B1 | -B2] (a, b) = 0
    ker = kernel(hstack(s1.basis, -s2.basis))
    vecs = [s1.basis.apply(k[:s1.dim]) for k in ker.vectors()]
    return Subspace(s1.ambient_dim, vecs)


def restrict(m: QMatrix, s: Subspace) -> QMatrix:
    """``m`` precomposed with the inclusion of ``s``, domain in ``s``'s basis."""
    if s.ambient_dim != m.cols:
        raise DimensionError(f"cannot restrict a map with {m.cols} columns to a subspace of Q^{s.ambient_dim}")
    return m @ s.basis


def complement_basis(sub: Subspace, ambient: Subspace | None = None) -> list[tuple]:
    """Vectors of ``ambient`` completing a basis of ``sub`` to one of ``ambient``.

    The greedy choice scans ``ambient``'s canonical basis in order, so the
    result is deterministic.
    """
    if ambient is None:
        ambient = Subspace.full(sub.ambient_dim)
    _check_same_ambient(sub, ambient)
    current = sub
    extra = []
    for v in ambient.vectors():
        if current.dim == ambient.dim:
            break
        if not current.contains(v):
            extra.append(v)
            current = Subspace(sub.ambient_dim, current.vectors() + [v])
    return extra


def solve(a: QMatrix, b: Sequence) -> tuple | None:
    """One solution x of ``a x = b`` (free variables set to zero), or None."""
    b = [to_fraction(x) for x in b]
    if len(b) != a.rows:
        raise DimensionError("right-hand side length mismatch")
    aug = hstack(a, QMatrix(a.rows, 1, [[x] for x in b]))
    red, pivots = rref(aug)
    if a.cols in pivots:
        return None
    x = [Q(0)] * a.cols
    for r, p in enumerate(pivots):
        x[p] = red[r][a.cols]
    return tuple(x)
