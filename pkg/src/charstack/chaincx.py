"""Bounded cochain complexes of finite-dimensional rational vector spaces.

Conventions used throughout the package:

* ``shift(C, k)`` is ``C[k]``: ``shift(C, k)^n = C^(n+k)`` and the
  differential picks up the sign ``(-1)^k``.
* ``cone(f)^n = src^(n+1) + tgt^n`` with ``d(a, b) = (-d a, f(a) + d b)``.
* ``fiber(f) = cone(f)[-1]``, so ``fiber(f)^n = src^n + tgt^(n-1)`` with
  ``d(a, b) = (d a, -f(a) - d b)``.
* ``dual(C)^n = (C^-n)^*`` with transposed differentials.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .exactla import (
    QMatrix,
    Subspace,
    block_diag,
    block_matrix,
    complement_basis,
    hstack,
    image,
    kernel,
    rank,
    solve,
)


class ComplexError(ValueError):
    """Invalid complex or chain-map data (shape mismatch, d∘d ≠ 0, ...)."""


@dataclass(frozen=True)
class Cohomology:
    """Cohomology in one degree with explicit representatives."""

    degree: int
    cocycles: Subspace
    coboundaries: Subspace
    representatives: tuple  # cocycle vectors spanning a complement of the coboundaries

    @property
    def dim(self) -> int:
        return len(self.representatives)

    def coordinates(self, cocycle: Sequence) -> tuple:
        """Coordinates of the class of ``cocycle`` in ``representatives``."""
        reps = list(self.representatives)
        if not reps:
            if not self.cocycles.contains(cocycle):
                raise ValueError("not a cocycle")
            return ()
        n = self.cocycles.ambient_dim
        a = hstack(QMatrix.from_columns(reps, n), self.coboundaries.basis)
        x = solve(a, cocycle)
        if x is None:
            raise ValueError("not a cocycle")
        return x[:len(reps)]


class CochainComplex:
    """A cochain complex concentrated in degrees ``lo..hi``.

    ``differentials[i]`` is ``d^(lo+i)``, a ``dims[i+1] x dims[i]`` matrix.
    """

    __slots__ = ("lo", "dims", "differentials", "_cohomology")

    def __init__(self, lo: int, dims: Sequence[int], differentials: Sequence[QMatrix] | None = None):
        dims = tuple(int(d) for d in dims)
        if not dims:
            raise ComplexError("a complex needs at least one degree")
        if any(d < 0 for d in dims):
            raise ComplexError("negative dimension")
        if differentials is None:
            differentials = [QMatrix.zeros(dims[i + 1], dims[i]) for i in range(len(dims) - 1)]
        differentials = tuple(differentials)
        if len(differentials) != len(dims) - 1:
            raise ComplexError(f"expected {len(dims) - 1} differentials, got {len(differentials)}")
        for i, d in enumerate(differentials):
            if d.shape != (dims[i + 1], dims[i]):
                raise ComplexError(
                    f"d^{lo + i} has shape {d.shape}, expected {(dims[i + 1], dims[i])}")
        for i in range(len(differentials) - 1):
            if not (differentials[i + 1] @ differentials[i]).is_zero():
                raise ComplexError(f"d^{lo + i + 1} ∘ d^{lo + i} != 0")
        self.lo = lo
        self.dims = dims
        self.differentials = differentials
        self._cohomology = {}

    @property
    def hi(self) -> int:
        return self.lo + len(self.dims) - 1

    @property
    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def dim(self, n: int) -> int:
        if self.lo <= n <= self.hi:
            return self.dims[n - self.lo]
        return 0

    def d(self, n: int) -> QMatrix:
        """The differential ``C^n -> C^(n+1)`` (a zero map outside the range)."""
        if self.lo <= n < self.hi:
            return self.differentials[n - self.lo]
        return QMatrix.zeros(self.dim(n + 1), self.dim(n))

    def euler_characteristic(self) -> int:
        return sum((-1) ** (n % 2) * self.dim(n) for n in self.degrees)

    def cohomology(self, n: int) -> Cohomology:
        if n not in self._cohomology:
            z = kernel(self.d(n))
            b = image(self.d(n - 1))
            reps = tuple(complement_basis(b, z))
            self._cohomology[n] = Cohomology(n, z, b, reps)
        return self._cohomology[n]

    def cohomology_dims(self) -> dict[int, int]:
        """``{n: dim H^n}`` computed from ranks alone."""
        ranks = {n: rank(self.d(n)) for n in range(self.lo - 1, self.hi + 1)}
        return {n: self.dim(n) - ranks[n] - ranks[n - 1] for n in self.degrees}

    def h_dims(self, degrees: Sequence[int] | None = None) -> list[int]:
        table = self.cohomology_dims()
        if degrees is None:
            degrees = self.degrees
        return [table.get(n, 0) for n in degrees]

    def is_acyclic(self) -> bool:
        return all(v == 0 for v in self.cohomology_dims().values())

    def __eq__(self, other):
        if not isinstance(other, CochainComplex):
            return NotImplemented
        return (self.lo, self.dims, self.differentials) == (other.lo, other.dims, other.differentials)

    def __hash__(self):
        return hash((self.lo, self.dims, self.differentials))

    def __repr__(self):
        return f"CochainComplex(degrees=[{self.lo},{self.hi}], dims={list(self.dims)})"

    def to_json(self) -> dict:
        return {
            "degrees": [self.lo, self.hi],
            "dims": list(self.dims),
            "differentials": [d.to_json() for d in self.differentials],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "CochainComplex":
        lo, hi = data["degrees"]
        dims = list(data["dims"])
        if hi - lo + 1 != len(dims):
            raise ComplexError("degree range does not match the number of dims")
        diffs = [QMatrix.from_json(m, dims[i]) for i, m in enumerate(data["differentials"])]
        return cls(lo, dims, diffs)


def zero_complex(lo: int = 0) -> CochainComplex:
    return CochainComplex(lo, [0])


def concentrated(dim: int, degree: int) -> CochainComplex:
    """``Q^dim`` placed in a single degree."""
    return CochainComplex(degree, [dim])


def two_term(d: QMatrix, lo: int) -> CochainComplex:
    """``source --d--> target`` in degrees ``lo, lo+1``."""
    return CochainComplex(lo, [d.cols, d.rows], [d])


def shift(c: CochainComplex, k: int) -> CochainComplex:
    sign = -1 if k % 2 else 1
    diffs = [d if sign == 1 else -d for d in c.differentials]
    return CochainComplex(c.lo - k, c.dims, diffs)


def dual(c: CochainComplex) -> CochainComplex:
    dims = list(reversed(c.dims))
    # (C^*)^n -> (C^*)^(n+1) is the transpose of d^(-n-1)
    diffs = [c.d(-n - 1).T for n in range(-c.hi, -c.lo)]
    return CochainComplex(-c.hi, dims, diffs)


def direct_sum(*cs: CochainComplex) -> CochainComplex:
    if not cs:
        raise ComplexError("empty direct sum")
    lo = min(c.lo for c in cs)
    hi = max(c.hi for c in cs)
    dims = [sum(c.dim(n) for c in cs) for n in range(lo, hi + 1)]
    diffs = [block_diag(*(c.d(n) for c in cs)) for n in range(lo, hi)]
    return CochainComplex(lo, dims, diffs)


class ChainMap:
    """A degree-0 map of cochain complexes, validated on construction.

    ``components`` maps each degree to a ``target.dim(n) x source.dim(n)``
    matrix; missing degrees are zero maps.
    """

    __slots__ = ("source", "target", "_components")

    def __init__(self, source: CochainComplex, target: CochainComplex,
                 components: Mapping[int, QMatrix]):
        self.source = source
        self.target = target
        comps = {}
        for n in range(min(source.lo, target.lo), max(source.hi, target.hi) + 1):
            m = components.get(n)
            shape = (target.dim(n), source.dim(n))
            if m is None:
                m = QMatrix.zeros(*shape)
            elif m.shape != shape:
                raise ComplexError(f"component in degree {n} has shape {m.shape}, expected {shape}")
            comps[n] = m
        extra = set(components) - set(comps)
        for n in extra:
            if components[n].rows and components[n].cols:
                raise ComplexError(f"component in degree {n} lies outside both complexes")
        self._components = comps
        for n in comps:
            lhs = self.component(n + 1) @ source.d(n)
            rhs = target.d(n) @ self.component(n)
            if lhs != rhs:
                raise ComplexError(f"chain map square does not commute in degree {n}")

    def component(self, n: int) -> QMatrix:
        m = self._components.get(n)
        if m is None:
            return QMatrix.zeros(self.target.dim(n), self.source.dim(n))
        return m

    @property
    def degrees(self) -> range:
        return range(min(self.source.lo, self.target.lo), max(self.source.hi, self.target.hi) + 1)

    @classmethod
    def identity(cls, c: CochainComplex) -> "ChainMap":
        return cls(c, c, {n: QMatrix.identity(c.dim(n)) for n in c.degrees})

    @classmethod
    def zero(cls, source: CochainComplex, target: CochainComplex) -> "ChainMap":
        return cls(source, target, {})

    def compose(self, other: "ChainMap") -> "ChainMap":
        """``self ∘ other``."""
        if other.target != self.source:
            raise ComplexError("chain maps are not composable")
        degs = set(self.degrees) | set(other.degrees)
        return ChainMap(other.source, self.target,
                        {n: self.component(n) @ other.component(n) for n in degs})

    def induced_map(self, n: int) -> QMatrix:
        """Matrix of ``H^n(source) -> H^n(target)`` in the representative bases."""
        hs = self.source.cohomology(n)
        ht = self.target.cohomology(n)
        f = self.component(n)
        cols = [ht.coordinates(f.apply(v)) for v in hs.representatives]
        return QMatrix.from_columns(cols, ht.dim) if cols else QMatrix.zeros(ht.dim, 0)


def cone(f: ChainMap) -> CochainComplex:
    src, tgt = f.source, f.target
    lo = min(src.lo - 1, tgt.lo)
    hi = max(src.hi - 1, tgt.hi)
    dims = [src.dim(n + 1) + tgt.dim(n) for n in range(lo, hi + 1)]
    diffs = []
    for n in range(lo, hi):
        diffs.append(block_matrix([
            [-src.d(n + 1), QMatrix.zeros(src.dim(n + 2), tgt.dim(n))],
            [f.component(n + 1), tgt.d(n)],
        ]))
    return CochainComplex(lo, dims, diffs)


def fiber(f: ChainMap) -> CochainComplex:
    return shift(cone(f), -1)


def is_quasi_iso(f: ChainMap) -> bool:
    """True iff ``f`` induces isomorphisms on every cohomology group."""
    for n in f.degrees:
        hs = f.source.cohomology(n).dim
        ht = f.target.cohomology(n).dim
        if hs != ht:
            return False
        if hs and rank(f.induced_map(n)) != hs:
            return False
    return True
