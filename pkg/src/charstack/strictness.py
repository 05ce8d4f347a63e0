"""Strict commuting pairs.

For a commuting pair ``(λ1, λ2)`` put ``u = 1 - Ad(λ1)`` and
``v = 1 - Ad(λ2)``.  The pair is strict when ``v(ker u) = Im(v) ∩ ker u``.
Three independent tests are provided and cross-checked:

* :func:`is_strict_direct` compares the two subspaces;
* :func:`is_strict_complex` checks ``H^0 = 0`` for the tangent complex of
  the Lagrangian intersection of the two centralizer quotients;
* :func:`phi_map` tests injectivity of the map from the five-term sequence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .chaincx import ChainMap, CochainComplex, fiber, two_term
from .exactla import (
    QMatrix,
    Subspace,
    block_diag,
    complement_basis,
    hstack,
    image,
    intersect,
    kernel,
    rank,
    restrict,
)
from .liealg import (
    GroupElement,
    GroupError,
    commutes,
    defect,
    is_semisimple,
    is_unipotent,
    koszul_z2,
)


class NonCommutingPair(GroupError):
    """Raised when an operation that needs a commuting pair gets one that is not."""


class NotStrictError(ValueError):
    """Raised by constructions that are only defined for strict pairs."""


class CriteriaDisagree(AssertionError):
    """The three strictness tests returned different answers (an implementation bug)."""


def _endos(l1: GroupElement, l2: GroupElement) -> tuple[QMatrix, QMatrix]:
    if not commutes(l1, l2):
        raise NonCommutingPair("the pair does not commute")
    return defect(l1), defect(l2)


def is_strict_direct(l1: GroupElement, l2: GroupElement) -> bool:
    u, v = _endos(l1, l2)
    ker_u = kernel(u)
    return image(restrict(v, ker_u)) == intersect(image(v), ker_u)


def _restricted(m: QMatrix, s: Subspace) -> QMatrix:
    """Matrix of ``m`` on an invariant subspace ``s``, in ``s``'s basis both sides."""
    cols = [s.coordinates(m.apply(b)) for b in s.vectors()]
    return QMatrix.from_columns(cols, s.dim) if cols else QMatrix.zeros(s.dim, 0)


@dataclass(frozen=True)
class IntersectionModel:
    """The pieces of the intersection tangent complex, kept for reuse."""

    u: QMatrix
    v: QMatrix
    ker_u: Subspace
    ker_v: Subspace
    source: CochainComplex   # T_A ⊕ T_B
    target: CochainComplex   # Koszul complex of (u, v)
    inclusion: ChainMap
    complex: CochainComplex  # fiber of the inclusion


def intersection_model(l1: GroupElement, l2: GroupElement) -> IntersectionModel:
    u, v = _endos(l1, l2)
    dim = u.rows
    ker_u, ker_v = kernel(u), kernel(v)
    # T_A: centralizer of λ2 with differential u; T_B: centralizer of λ1 with v
    t_a = two_term(_restricted(u, ker_v), -1)
    t_b = two_term(_restricted(v, ker_u), -1)
    src = CochainComplex(-1, [ker_v.dim + ker_u.dim] * 2,
                         [block_diag(t_a.d(-1), t_b.d(-1))])
    tgt = koszul_z2(u, v)
    incl = ChainMap(src, tgt, {
        -1: hstack(ker_v.basis, ker_u.basis),
        0: block_diag(ker_v.basis, ker_u.basis) if dim else QMatrix.zeros(0, src.dim(0)),
    })
    return IntersectionModel(u, v, ker_u, ker_v, src, tgt, incl, fiber(incl))


def intersection_tangent_complex(l1: GroupElement, l2: GroupElement) -> CochainComplex:
    """Tangent complex (degrees -1..2) of the fiber product of the two
    centralizer quotients over the commuting variety, at ``(λ1, λ2)``."""
    model = intersection_model(l1, l2)
    t = model.complex
    h = t.cohomology_dims()
    joint = intersect(model.ker_u, model.ker_v).dim
    cokernel = model.u.rows - rank(hstack(model.u, model.v))
    if h[-1] != joint or h[2] != cokernel:
        raise CriteriaDisagree(
            f"extremal cohomology {h[-1]}, {h[2]} does not match ker u ∩ ker v = {joint}, "
            f"g/(Im u + Im v) = {cokernel}")
    return t


def is_strict_complex(l1: GroupElement, l2: GroupElement) -> bool:
    return _vanishing_h0(intersection_tangent_complex(l1, l2).cohomology_dims())


def _vanishing_h0(h: dict) -> bool:
    if (h[0] == 0) != (h[1] == 0):
        raise CriteriaDisagree(f"H^0 = {h[0]} but H^1 = {h[1]}; duality violated")
    return h[0] == 0


@dataclass(frozen=True)
class PhiMap:
    matrix: QMatrix
    domain_dims: tuple[int, int]
    codomain_dim: int
    injective: bool

    @property
    def kernel_dim(self) -> int:
        return self.matrix.cols - rank(self.matrix)


def phi_map(l1: GroupElement, l2: GroupElement) -> PhiMap:
    """``coker(v|ker u) ⊕ coker(u|ker v) -> H^0(Koszul(u, v))``.

    A representative ``c ∈ ker u`` goes to the class of ``(0, -c)``, and
    ``c' ∈ ker v`` to the class of ``(c', 0)``.
    """
    u, v = _endos(l1, l2)
    dim = u.rows
    ker_u, ker_v = kernel(u), kernel(v)
    reps_x = complement_basis(image(restrict(v, ker_u)), ker_u)
    reps_y = complement_basis(image(restrict(u, ker_v)), ker_v)
    zero = (0,) * dim
    cocycles = [zero + tuple(-c for c in r) for r in reps_x] + [tuple(r) + zero for r in reps_y]
    h = koszul_z2(u, v).cohomology(0)
    cols = [h.coordinates(z) for z in cocycles]
    m = QMatrix.from_columns(cols, h.dim) if cols else QMatrix.zeros(h.dim, 0)
    return PhiMap(m, (len(reps_x), len(reps_y)), h.dim, rank(m) == len(cols))


@dataclass
class PairReport:
    commuting: bool
    semisimple_flags: tuple[bool, bool]
    unipotent_flags: tuple[bool, bool]
    strict_direct: Optional[bool] = None
    strict_complex: Optional[bool] = None
    strict_phi: Optional[bool] = None
    h_dims: Optional[tuple[int, int, int, int]] = None
    joint_centralizer_dim: Optional[int] = None
    phi_kernel_dim: Optional[int] = None

    @property
    def strict(self) -> Optional[bool]:
        return self.strict_direct

    @property
    def criteria_agree(self) -> Optional[bool]:
        if not self.commuting:
            return None
        return self.strict_direct == self.strict_complex == self.strict_phi

    def to_json(self) -> dict:
        out = {
            "commuting": self.commuting,
            "semisimple_flags": list(self.semisimple_flags),
            "unipotent_flags": list(self.unipotent_flags),
        }
        if self.commuting:
            out.update({
                "strict_direct": self.strict_direct,
                "strict_complex": self.strict_complex,
                "strict_phi": self.strict_phi,
                "h_dims": list(self.h_dims),
                "joint_centralizer_dim": self.joint_centralizer_dim,
                "phi_kernel_dim": self.phi_kernel_dim,
            })
        return out


def classify_pair(l1: GroupElement, l2: GroupElement, check: bool = True) -> PairReport:
    """Run all three strictness tests; with ``check`` a disagreement raises."""
    report = PairReport(
        commuting=commutes(l1, l2),
        semisimple_flags=(is_semisimple(l1), is_semisimple(l2)),
        unipotent_flags=(is_unipotent(l1), is_unipotent(l2)),
    )
    if not report.commuting:
        return report
    t = intersection_tangent_complex(l1, l2)
    h = t.cohomology_dims()
    phi = phi_map(l1, l2)
    report.strict_direct = is_strict_direct(l1, l2)
    report.strict_complex = _vanishing_h0(h)
    report.strict_phi = phi.injective
    report.h_dims = tuple(h[n] for n in (-1, 0, 1, 2))
    report.joint_centralizer_dim = intersect(kernel(defect(l1)), kernel(defect(l2))).dim
    report.phi_kernel_dim = phi.kernel_dim
    if check and not report.criteria_agree:
        raise CriteriaDisagree(
            f"direct={report.strict_direct} complex={report.strict_complex} phi={report.strict_phi}")
    return report
