"""Matrix groups SL(n), GL(n) over Q and their Lie algebras.

The sl(n) basis is ordered: strictly upper triangular ``E_ij`` (row-major),
then ``H_i = E_ii - E_(i+1)(i+1)``, then strictly lower ``E_ij``
(row-major).  For n = 2 this is ``(e, h, f)``.  The gl(n) basis is all
``E_ij`` in row-major order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from functools import cached_property
from typing import Sequence

from .chaincx import CochainComplex
from .exactla import (
    Q,
    QMatrix,
    Subspace,
    complement_basis,
    hstack,
    image,
    kernel,
    rank,
    rref,
    vstack,
)


class GroupError(ValueError):
    """Bad group data: wrong determinant, mismatched contexts, noncommuting input."""


def _unit(n: int, i: int, j: int) -> QMatrix:
    rows = [[0] * n for _ in range(n)]
    rows[i][j] = 1
    return QMatrix.from_rows(rows)


def _flatten(m: QMatrix) -> tuple:
    return tuple(x for i in range(m.rows) for x in m.row(i))


@dataclass(frozen=True)
class LieContext:
    """A matrix group together with a basis of its Lie algebra and an invariant form.

    ``trace_form[i, j] = tr(g_basis[i] @ g_basis[j])`` unless a form is
    supplied explicitly (for externally defined groups).
    """

    kind: str
    n: int
    g_basis: tuple
    trace_form: QMatrix = field(default=None)

    def __post_init__(self):
        basis = tuple(self.g_basis)
        object.__setattr__(self, "g_basis", basis)
        for b in basis:
            if b.shape != (self.n, self.n):
                raise GroupError("basis elements must be n x n matrices")
        if rank(self._basis_matrix) != len(basis):
            raise GroupError("Lie algebra basis is linearly dependent")
        if self.trace_form is None:
            form = [[_trace(a @ b) for b in basis] for a in basis]
            object.__setattr__(self, "trace_form", QMatrix.from_rows(form, len(basis)))
        tf = self.trace_form
        if tf.shape != (len(basis), len(basis)) or tf != tf.T:
            raise GroupError("invariant form must be a symmetric dim g x dim g matrix")
        if rank(tf) != len(basis):
            raise GroupError("invariant form is degenerate")

    @classmethod
    def sl(cls, n: int) -> "LieContext":
        if n < 2:
            raise GroupError("SL(n) needs n >= 2")
        upper = [_unit(n, i, j) for i in range(n) for j in range(n) if i < j]
        cartan = [_unit(n, i, i) - _unit(n, i + 1, i + 1) for i in range(n - 1)]
        lower = [_unit(n, i, j) for i in range(n) for j in range(n) if i > j]
        return cls("SL", n, tuple(upper + cartan + lower))

    @classmethod
    def gl(cls, n: int) -> "LieContext":
        if n < 1:
            raise GroupError("GL(n) needs n >= 1")
        return cls("GL", n, tuple(_unit(n, i, j) for i in range(n) for j in range(n)))

    @classmethod
    def from_kind(cls, kind: str, n: int) -> "LieContext":
        kind = kind.upper()
        if kind == "SL":
            return cls.sl(n)
        if kind == "GL":
            return cls.gl(n)
        raise GroupError(f"unknown group kind {kind!r} (expected SL or GL)")

    @property
    def dim(self) -> int:
        return len(self.g_basis)

    @cached_property
    def _basis_matrix(self) -> QMatrix:
        # n^2 x dim g, one flattened basis matrix per column
        return QMatrix.from_columns([_flatten(b) for b in self.g_basis], self.n * self.n)

    @cached_property
    def _coordinate_rows(self) -> tuple[tuple[int, ...], QMatrix]:
        _, pivots = rref(self._basis_matrix.T)
        sub = self._basis_matrix.submatrix(pivots, range(self.dim))
        return tuple(pivots), sub.inverse()

    def coordinates(self, x: QMatrix) -> tuple:
        """Coordinates of the n x n matrix ``x`` in ``g_basis``."""
        flat = _flatten(x)
        rows, inv = self._coordinate_rows
        c = inv.apply([flat[r] for r in rows])
        if self._basis_matrix.apply(c) != flat:
            raise GroupError("matrix does not lie in the Lie algebra")
        return c

    def from_coordinates(self, c: Sequence) -> QMatrix:
        flat = self._basis_matrix.apply(c)
        return QMatrix.from_rows([flat[i * self.n:(i + 1) * self.n] for i in range(self.n)])

    def element(self, matrix) -> "GroupElement":
        if not isinstance(matrix, QMatrix):
            matrix = QMatrix.from_rows(matrix)
        return GroupElement(self, matrix)

    def identity(self) -> "GroupElement":
        return GroupElement(self, QMatrix.identity(self.n))

    def to_json(self) -> dict:
        return {"kind": self.kind, "n": self.n}

    def __repr__(self):
        return f"LieContext({self.kind}({self.n}), dim g = {self.dim})"


def _trace(m: QMatrix) :
    return sum((m[i, i] for i in range(m.rows)), Q(0))


@dataclass(frozen=True)
class GroupElement:
    ctx: LieContext
    matrix: QMatrix

    def __post_init__(self):
        n = self.ctx.n
        if self.matrix.shape != (n, n):
            raise GroupError(f"expected a {n}x{n} matrix, got {self.matrix.shape}")
        det = self.matrix.det()
        if self.ctx.kind == "SL" and det != 1:
            raise GroupError(f"determinant {det} != 1 for an element of SL({n})")
        if det == 0:
            raise GroupError("singular matrix is not a group element")

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        _same_ctx(self, other)
        return GroupElement(self.ctx, self.matrix @ other.matrix)

    def inverse(self) -> "GroupElement":
        return GroupElement(self.ctx, self.inv_matrix)

    @cached_property
    def inv_matrix(self) -> QMatrix:
        return self.matrix.inverse()

    def conjugate_by(self, g: "GroupElement | QMatrix") -> "GroupElement":
        """``g λ g^-1``; ``g`` may be any invertible rational matrix."""
        gm = g.matrix if isinstance(g, GroupElement) else g
        return GroupElement(self.ctx, gm @ self.matrix @ gm.inverse())

    @cached_property
    def ad(self) -> QMatrix:
        return _ad_matrix(self)

    def to_json(self) -> dict:
        return {"group": self.ctx.to_json(), "matrix": self.matrix.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "GroupElement":
        g = data["group"]
        ctx = LieContext.from_kind(g["kind"], int(g["n"]))
        return ctx.element(QMatrix.from_rows(data["matrix"]))

    def __repr__(self):
        return f"GroupElement({self.ctx.kind}({self.ctx.n}), {self.matrix!r})"


def _same_ctx(a: GroupElement, b: GroupElement) -> None:
    if a.ctx != b.ctx:
        raise GroupError("group elements live in different contexts")


def _ad_matrix(lam: GroupElement) -> QMatrix:
    ctx = lam.ctx
    m, minv = lam.matrix, lam.inv_matrix
    cols = [ctx.coordinates(m @ b @ minv) for b in ctx.g_basis]
    return QMatrix.from_columns(cols, ctx.dim)


def ad_group(lam: GroupElement) -> QMatrix:
    """Matrix of ``X -> λ X λ^-1`` on g in the context basis."""
    return lam.ad


def defect(lam: GroupElement) -> QMatrix:
    """``Id - Ad(λ)``; its kernel is the Lie algebra of the centralizer of λ."""
    return QMatrix.identity(lam.ctx.dim) - lam.ad


def centralizer(lam: GroupElement) -> Subspace:
    return kernel(defect(lam))


def commutes(a: GroupElement, b: GroupElement) -> bool:
    _same_ctx(a, b)
    return a.matrix @ b.matrix == b.matrix @ a.matrix


# -- polynomials over Q, coefficient lists low degree first -------------

def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mod(a: list, b: list) -> list:
    a = _trim(list(a))
    b = _trim(list(b))
    while len(a) >= len(b) and a:
        f = a[-1] / b[-1]
        off = len(a) - len(b)
        for i, c in enumerate(b):
            a[off + i] -= f * c
        _trim(a)
    return a


def poly_gcd(a: Sequence, b: Sequence) -> list:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b)
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def minimal_polynomial(m: QMatrix) -> list:
    """Monic minimal polynomial of a square matrix, low degree first."""
    n = m.rows
    powers = [_flatten(QMatrix.identity(n))]
    current = QMatrix.identity(n)
    for k in range(1, n + 1):
        current = current @ m
        flat = _flatten(current)
        basis = kernel(QMatrix.from_columns(powers + [flat], n * n))
        if basis.dim:
            # the relation with last coefficient 1
            v = basis.vectors()[0]
            lead = v[-1]
            return [c / lead for c in v]
        powers.append(flat)
    raise AssertionError("Cayley-Hamilton bound exceeded")  # pragma: no cover


def is_semisimple(lam: GroupElement | QMatrix) -> bool:
    """Diagonalizable over the algebraic closure, i.e. squarefree minimal polynomial."""
    m = lam.matrix if isinstance(lam, GroupElement) else lam
    p = minimal_polynomial(m)
    dp = [i * c for i, c in enumerate(p)][1:]
    return len(poly_gcd(p, dp)) == 1


def is_unipotent(lam: GroupElement | QMatrix) -> bool:
    m = lam.matrix if isinstance(lam, GroupElement) else lam
    n = m.rows
    return ((m - QMatrix.identity(n)) ** n).is_zero()


# -- Z and Z^2 group cohomology of g --------------------------------------

@dataclass(frozen=True)
class ZCohomology:
    """Cohomology of Z acting on g through ``1 - u``: invariants and coinvariants."""

    h0: Subspace
    h1_representatives: tuple

    @property
    def dims(self) -> tuple[int, int]:
        return (self.h0.dim, len(self.h1_representatives))


def z_cohomology(u: QMatrix) -> ZCohomology:
    if not u.is_square():
        raise GroupError("z_cohomology needs a square matrix")
    return ZCohomology(kernel(u), tuple(complement_basis(image(u))))


def koszul_z2(u: QMatrix, v: QMatrix) -> CochainComplex:
    """``g -> g⊕g -> g`` in degrees -1, 0, 1 for commuting ``u, v``.

    ``d(z) = (u z, v z)`` and ``d(a, b) = v a - u b``.
    """
    if not (u.is_square() and v.is_square() and u.rows == v.rows):
        raise GroupError("koszul_z2 needs two square matrices of equal size")
    if u @ v != v @ u:
        raise GroupError("koszul_z2 needs commuting endomorphisms")
    d0 = vstack(u, v)
    d1 = hstack(v, -u)
    dim = u.rows
    return CochainComplex(-1, [dim, 2 * dim, dim], [d0, d1])
