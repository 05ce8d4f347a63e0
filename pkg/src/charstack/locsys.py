"""Tangent complexes of G-local systems at a representation.

A space is modelled by a group presentation (a presentation 2-complex),
optionally with boundary words marking boundary circles.  Words are tuples
of nonzero ints: ``i`` is generator ``i-1`` and ``-i`` its inverse.

The tangent complex at ``ρ`` is ``g -> g^p -> g^q`` in degrees -1, 0, 1:
``d(x) = (x - Ad ρ(x_i) x)_i`` and ``d`` on 1-cochains is the Fox Jacobian
of the relators evaluated through ``Ad∘ρ``.  A 1-cochain ``y ∈ g^p`` is the
crossed homomorphism with ``f(x_i) = y_i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .chaincx import ChainMap, CochainComplex, direct_sum, fiber, two_term
from .exactla import QMatrix, block_diag, hstack, intersect, kernel, rank, vstack
from .liealg import GroupElement, LieContext, defect
from .strictness import (
    NotStrictError,
    intersection_model,
    is_strict_direct,
    phi_map,
    _vanishing_h0,
)


class PresentationError(ValueError):
    """Malformed presentation or word."""


class RelatorViolation(ValueError):
    """A relator does not evaluate to the identity under the representation."""


class BoundaryClassMismatch(ValueError):
    """A prescribed conjugacy class does not contain the boundary monodromy."""


class SurfaceError(ValueError):
    """The presentation is not of the surface type an operation needs."""


class DualityError(AssertionError):
    """A duality pairing that must be perfect turned out degenerate."""


Word = tuple[int, ...]


# -- words ---------------------------------------------------------------

def parse_word(text: str, generators: Sequence[str]) -> Word:
    """Parse ``"a b A B"``; an upper-case token is the inverse of its lower-case
    generator.  ``"a^-1"`` is also accepted, and ``"1"`` or ``""`` is the
    empty word."""
    index = {g: i + 1 for i, g in enumerate(generators)}
    word = []
    for tok in text.split():
        if tok == "1":
            continue
        inv = False
        if tok.endswith("^-1"):
            tok, inv = tok[:-3], True
        if tok in index:
            word.append(-index[tok] if inv else index[tok])
        elif tok.lower() in index and tok != tok.lower():
            word.append(index[tok.lower()] if inv else -index[tok.lower()])
        else:
            raise PresentationError(f"unknown generator {tok!r} in word {text!r}")
    return tuple(word)


def format_word(word: Word, generators: Sequence[str]) -> str:
    out = []
    for s in word:
        g = generators[abs(s) - 1]
        out.append(g if s > 0 else (g.upper() if g.upper() != g else g + "^-1"))
    return " ".join(out) if out else "1"


def is_reduced(word: Word) -> bool:
    return all(a != -b for a, b in zip(word, word[1:]))


def invert_word(word: Word) -> Word:
    return tuple(-s for s in reversed(word))


def commutator(a: int, b: int) -> Word:
    return (a, b, -a, -b)


# -- presentations ---------------------------------------------------------

@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...] = ()
    boundary_words: Optional[tuple[Word, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relators", tuple(tuple(w) for w in self.relators))
        if self.boundary_words is not None:
            object.__setattr__(self, "boundary_words", tuple(tuple(w) for w in self.boundary_words))
        if len(set(self.generators)) != len(self.generators):
            raise PresentationError("duplicate generator names")
        p = len(self.generators)
        for w in self.relators + (self.boundary_words or ()):
            for s in w:
                if s == 0 or abs(s) > p:
                    raise PresentationError(f"letter {s} out of range for {p} generators")
            if not is_reduced(w):
                raise PresentationError(f"word {format_word(w, self.generators)!r} is not reduced")
        for w in self.boundary_words or ():
            if not w:
                raise PresentationError("boundary words must be nonempty")

    @property
    def generator_count(self) -> int:
        return len(self.generators)

    @property
    def euler_characteristic(self) -> int:
        """Euler characteristic ``1 - p + q`` of the presentation 2-complex."""
        return 1 - len(self.generators) + len(self.relators)

    @classmethod
    def from_strings(cls, generators: Sequence[str], relators: Sequence[str] = (),
                     boundary_words: Optional[Sequence[str]] = None) -> "GroupPresentation":
        gens = tuple(generators)
        rels = tuple(parse_word(r, gens) for r in relators)
        bws = None if boundary_words is None else tuple(parse_word(b, gens) for b in boundary_words)
        return cls(gens, rels, bws)

    def to_json(self) -> dict:
        out = {
            "generators": list(self.generators),
            "relators": [format_word(w, self.generators) for w in self.relators],
        }
        if self.boundary_words is not None:
            out["boundary_words"] = [format_word(w, self.generators) for w in self.boundary_words]
        return out


def free_group(p: int, names: Sequence[str] | None = None) -> GroupPresentation:
    return GroupPresentation(tuple(names) if names else _default_names(p))


def _default_names(p: int) -> tuple[str, ...]:
    if p <= 26:
        return tuple("abcdefghijklmnopqrstuvwxyz"[:p])
    return tuple(f"x{i}" for i in range(1, p + 1))


def surface_group(genus: int) -> GroupPresentation:
    """``<a1, b1, ..., ag, bg | [a1,b1]...[ag,bg]>``."""
    gens = tuple(n for i in range(1, genus + 1) for n in (f"a{i}", f"b{i}"))
    rel = tuple(s for i in range(genus) for s in commutator(2 * i + 1, 2 * i + 2))
    return GroupPresentation(gens, (rel,) if genus else ())


def punctured_surface(genus: int, punctures: int) -> GroupPresentation:
    """Free group on ``a_i, b_i, c_1..c_(k-1)`` with boundary words
    ``c_1, ..., c_(k-1)`` and ``([a1,b1]...[ag,bg] c_1...c_(k-1))^-1``."""
    if punctures < 1:
        raise PresentationError("need at least one puncture")
    gens = tuple(n for i in range(1, genus + 1) for n in (f"a{i}", f"b{i}"))
    gens += tuple(f"c{j}" for j in range(1, punctures))
    prod = tuple(s for i in range(genus) for s in commutator(2 * i + 1, 2 * i + 2))
    cs = tuple(2 * genus + j for j in range(1, punctures))
    boundary = tuple((c,) for c in cs) + (invert_word(prod + cs),)
    return GroupPresentation(gens, (), boundary)


def once_punctured_torus() -> GroupPresentation:
    """``F(a, b)`` with the single boundary word ``a b A B``."""
    return GroupPresentation(("a", "b"), (), (commutator(1, 2),))


def pair_of_pants() -> GroupPresentation:
    """``F(a, b)`` with boundary words ``a``, ``b``, ``(ab)^-1``."""
    return GroupPresentation(("a", "b"), (), ((1,), (2,), (-2, -1)))


# -- representations -------------------------------------------------------

@dataclass(frozen=True)
class Representation:
    presentation: GroupPresentation
    images: tuple[GroupElement, ...]

    def __post_init__(self):
        imgs = tuple(self.images)
        object.__setattr__(self, "images", imgs)
        if len(imgs) != self.presentation.generator_count:
            raise PresentationError(
                f"{len(imgs)} images for {self.presentation.generator_count} generators")
        if imgs and any(g.ctx != imgs[0].ctx for g in imgs):
            raise PresentationError("all images must lie in the same group")
        for r in self.presentation.relators:
            if self.evaluate(r) != QMatrix.identity(self.ctx.n):
                raise RelatorViolation(
                    f"relator {format_word(r, self.presentation.generators)!r} is not sent to 1")

    @property
    def ctx(self) -> LieContext:
        return self.images[0].ctx

    @classmethod
    def trivial(cls, presentation: GroupPresentation, ctx: LieContext) -> "Representation":
        return cls(presentation, (ctx.identity(),) * presentation.generator_count)

    def evaluate(self, word: Word) -> QMatrix:
        m = QMatrix.identity(self.ctx.n)
        for s in word:
            g = self.images[abs(s) - 1]
            m = m @ (g.matrix if s > 0 else g.inv_matrix)
        return m

    def element(self, word: Word) -> GroupElement:
        return GroupElement(self.ctx, self.evaluate(word))

    def conjugate(self, g: QMatrix) -> "Representation":
        return Representation(self.presentation, tuple(x.conjugate_by(g) for x in self.images))

    def _ad(self, s: int) -> QMatrix:
        g = self.images[abs(s) - 1]
        return g.ad if s > 0 else g.inverse().ad

    def fox_row(self, word: Word) -> QMatrix:
        """``[∂w/∂x_1 ... ∂w/∂x_p]`` through ``Ad∘ρ``: a ``dim g x p·dim g`` matrix
        sending a 1-cochain ``y`` to the value ``f(w)`` of its crossed homomorphism."""
        return _PrefixWalk(self, word).fox

    def ad_of(self, word: Word) -> QMatrix:
        m = QMatrix.identity(self.ctx.dim)
        for s in word:
            m = m @ self._ad(s)
        return m


class _PrefixWalk:
    """Walk a word letter by letter, tracking ``Ad(prefix)`` and the Fox row of the prefix."""

    def __init__(self, rho: Representation, word: Word):
        dim = rho.ctx.dim
        p = rho.presentation.generator_count
        self.prefix_ad = []   # Ad of p_(k-1) before letter k
        self.prefix_fox = []  # Fox row of p_(k-1) before letter k
        self.letter_fox = []  # Fox row of the k-th letter
        ad = QMatrix.identity(dim)
        fox = QMatrix.zeros(dim, p * dim)
        for s in word:
            i = abs(s) - 1
            if s > 0:
                blk = QMatrix.identity(dim)
            else:
                blk = -rho._ad(s)
            letter = hstack(*[blk if j == i else QMatrix.zeros(dim, dim) for j in range(p)]) \
                if p else QMatrix.zeros(dim, 0)
            self.prefix_ad.append(ad)
            self.prefix_fox.append(fox)
            self.letter_fox.append(letter)
            fox = fox + ad @ letter
            ad = ad @ rho._ad(s)
        self.fox = fox
        self.ad = ad


def _fox_matrix(rho: Representation, words: Sequence[Word]) -> QMatrix:
    dim, p = rho.ctx.dim, rho.presentation.generator_count
    if not words:
        return QMatrix.zeros(0, p * dim)
    return vstack(*(rho.fox_row(w) for w in words))


# -- tangent complexes ------------------------------------------------------

def tangent_complex_at(rho: Representation) -> CochainComplex:
    ctx = rho.ctx
    dim = ctx.dim
    p = rho.presentation.generator_count
    q = len(rho.presentation.relators)
    eye = QMatrix.identity(dim)
    d_minus = vstack(*(eye - g.ad for g in rho.images)) if p else QMatrix.zeros(0, dim)
    d_zero = _fox_matrix(rho, rho.presentation.relators)
    return CochainComplex(-1, [dim, p * dim, q * dim], [d_minus, d_zero])


def sphere_tangent(m: int, ctx: LieContext, lam: GroupElement | None = None) -> CochainComplex:
    """Tangent complex of local systems on the m-sphere.

    ``m = 1``: ``g --(1 - Ad λ)--> g`` in degrees -1, 0 (λ defaults to 1).
    ``m >= 2``: ``g`` in degrees -1 and ``m - 1`` with zero differential.
    """
    if m < 1:
        raise ValueError("sphere dimension must be at least 1")
    if m == 1:
        lam = lam if lam is not None else ctx.identity()
        if lam.ctx != ctx:
            raise ValueError("element lives in a different group")
        return two_term(defect(lam), -1)
    if lam is not None and lam.matrix != QMatrix.identity(ctx.n):
        raise ValueError("local systems on a simply connected sphere are trivial")
    dims = [0] * (m + 1)
    dims[0] = dims[-1] = ctx.dim
    return CochainComplex(-1, dims)


def _require_boundary(rho: Representation) -> tuple[Word, ...]:
    bws = rho.presentation.boundary_words
    if not bws:
        raise SurfaceError("presentation has no boundary words")
    return bws


def boundary_complex(rho: Representation) -> CochainComplex:
    """``⊕_i (g --(1 - Ad μ_i)--> g)`` for the boundary monodromies ``μ_i``."""
    return direct_sum(*(two_term(defect(rho.element(w)), -1) for w in _require_boundary(rho)))


def restriction_map(rho: Representation) -> ChainMap:
    bws = _require_boundary(rho)
    dim = rho.ctx.dim
    src = tangent_complex_at(rho)
    tgt = boundary_complex(rho)
    return ChainMap(src, tgt, {
        -1: vstack(*([QMatrix.identity(dim)] * len(bws))),
        0: _fox_matrix(rho, bws),
    })


def relative_complex(rho: Representation) -> CochainComplex:
    """``fiber(restriction_map(ρ))``: relative cochains shifted into degrees -1..1."""
    return fiber(restriction_map(rho))


@dataclass(frozen=True)
class LefschetzCheck:
    relative_dims: tuple[int, int, int]
    absolute_dims: tuple[int, int, int]

    @property
    def holds(self) -> bool:
        # H^i(relative) pairs with H^(-i) of the tangent complex (group degree 1 - i)
        return self.relative_dims == tuple(reversed(self.absolute_dims))


def lefschetz_check(rho: Representation) -> LefschetzCheck:
    rel = relative_complex(rho).h_dims([-1, 0, 1])
    absolute = tangent_complex_at(rho).h_dims([-1, 0, 1])
    return LefschetzCheck(tuple(rel), tuple(absolute))


# -- cup products -------------------------------------------------------------

def _staircase_terms(rho: Representation, word: Word) -> list[tuple[int, QMatrix, QMatrix, QMatrix]]:
    """Bar 2-chain of a word as ``(coefficient, Fox(g), Ad(g), Fox(h))`` terms ``[g|h]``.

    The chain is ``Σ_k [p_(k-1) | y_k] - Σ_(y_k inverse) [x | x^-1]``; its
    boundary is ``Σ_i e_i(w) [x_i] - [w]`` with ``e_i`` the exponent sums.
    """
    walk = _PrefixWalk(rho, word)
    dim, p = rho.ctx.dim, rho.presentation.generator_count
    terms = []
    for k, s in enumerate(word):
        terms.append((1, walk.prefix_fox[k], walk.prefix_ad[k], walk.letter_fox[k]))
        if s < 0:
            i = abs(s) - 1
            x_fox = hstack(*[QMatrix.identity(dim) if j == i else QMatrix.zeros(dim, dim)
                             for j in range(p)])
            x_ad = rho._ad(-s)
            inv_fox = hstack(*[-rho._ad(s) if j == i else QMatrix.zeros(dim, dim)
                               for j in range(p)])
            terms.append((-1, x_fox, x_ad, inv_fox))
    return terms


def _cup_form(rho: Representation, terms) -> QMatrix:
    """Bilinear form on 1-cochains: ``y1, y2 -> Σ c·B(f1(g), Ad(g) f2(h))``."""
    dim, p = rho.ctx.dim, rho.presentation.generator_count
    tf = rho.ctx.trace_form
    total = QMatrix.zeros(p * dim, p * dim)
    for c, fox_g, ad_g, fox_h in terms:
        if fox_g.is_zero() or fox_h.is_zero():
            continue
        t = fox_g.T @ tf @ ad_g @ fox_h
        total = total + (t if c == 1 else -t)
    return total


def surface_genus(pres: GroupPresentation) -> int:
    """Genus of a closed orientable one-relator surface presentation.

    Raises :class:`SurfaceError` unless the single relator uses every
    generator exactly once with each sign and the polygon gluing has one vertex.
    """
    if len(pres.relators) != 1 or pres.boundary_words:
        raise SurfaceError("closed surface presentations have one relator and no boundary")
    (r,) = pres.relators
    p = pres.generator_count
    if p == 0 or p % 2:
        raise SurfaceError("a closed orientable surface word has an even, positive number of generators")
    for i in range(1, p + 1):
        if r.count(i) != 1 or r.count(-i) != 1:
            raise SurfaceError("each generator must occur once with each orientation")
    # corners of the 2p-gon: corner k sits at the start of edge k
    n = len(r)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    ends = {}
    for k, s in enumerate(r):
        start, end = k, (k + 1) % n
        tail, head = (start, end) if s > 0 else (end, start)
        ends.setdefault(abs(s), []).append((tail, head))
    for (t1, h1), (t2, h2) in ends.values():
        parent[find(t1)] = find(t2)
        parent[find(h1)] = find(h2)
    if len({find(k) for k in range(n)}) != 1:
        raise SurfaceError("the relator does not glue to a one-vertex surface")
    return p // 2


def goldman_pairing(rho: Representation) -> QMatrix:
    """Cup-product pairing on ``H^1(Γ, ad ρ)`` of a closed surface group.

    Returned in the basis of representative cocycles of
    ``tangent_complex_at(ρ).cohomology(0)``.  At the trivial representation
    this basis is the standard one and the matrix is
    ``(intersection form) ⊗ (trace form)``.
    """
    surface_genus(rho.presentation)
    form = _cup_form(rho, _staircase_terms(rho, rho.presentation.relators[0]))
    h1 = tangent_complex_at(rho).cohomology(0)
    reps = QMatrix.from_columns(h1.representatives, form.rows) if h1.dim else \
        QMatrix.zeros(form.rows, 0)
    pairing = reps.T @ form @ reps
    if pairing != -pairing.T:
        raise DualityError("cup-product pairing is not antisymmetric")
    return pairing


def _exponent_sums(word: Word, p: int) -> list[int]:
    sums = [0] * p
    for s in word:
        sums[abs(s) - 1] += 1 if s > 0 else -1
    return sums


@dataclass(frozen=True)
class LefschetzPairing:
    """Perfect pairing ``H^0(relative) x H^0(tangent) -> Q`` (group degree 1)."""

    matrix: QMatrix               # rows: relative classes, columns: absolute classes
    projection: QMatrix           # relative classes pushed to absolute classes
    relative: CochainComplex
    absolute: CochainComplex


def lefschetz_pairing(rho: Representation) -> LefschetzPairing:
    pres = rho.presentation
    bws = _require_boundary(rho)
    if pres.relators:
        raise SurfaceError("the Lefschetz pairing is implemented for free (punctured-surface) presentations")
    p, dim = pres.generator_count, rho.ctx.dim
    concat = tuple(s for w in bws for s in w)
    if any(_exponent_sums(concat, p)):
        raise SurfaceError("boundary words do not multiply into the commutator subgroup")
    # relative fundamental class c = E - D_W with ∂c = Σ_j [w_j]
    terms = []
    prefix: Word = ()
    for j, w in enumerate(bws):
        if j:
            terms.append((1, rho.fox_row(prefix), rho.ad_of(prefix), rho.fox_row(w)))
        prefix = prefix + w
    terms += [(-c, fg, ag, fh) for c, fg, ag, fh in _staircase_terms(rho, concat)]
    cup = _cup_form(rho, terms)
    # boundary correction: -Σ_j B(z_j, f'(w_j))
    tf = rho.ctx.trace_form
    corr = vstack(*(tf @ rho.fox_row(w) for w in bws))

    rel = relative_complex(rho)
    absolute = tangent_complex_at(rho)
    h_rel = rel.cohomology(0)
    h_abs = absolute.cohomology(0)
    if h_rel.dim != h_abs.dim:
        raise DualityError(f"H^1(X, ∂X) has dim {h_rel.dim} but H^1(X) has dim {h_abs.dim}")
    n_abs = p * dim
    rows, proj_cols = [], []
    for r in h_rel.representatives:
        y, z = r[:n_abs], r[n_abs:]
        left = cup.T.apply(y)
        cz = corr.T.apply(z)
        rows.append([sum((left[i] - cz[i]) * a[i] for i in range(n_abs)) for a in h_abs.representatives])
        proj_cols.append(h_abs.coordinates(y))
    k = h_abs.dim
    matrix = QMatrix.from_rows(rows, k) if rows else QMatrix.zeros(0, 0)
    projection = QMatrix.from_columns(proj_cols, k) if proj_cols else QMatrix.zeros(k, 0)
    if rank(matrix) != k:
        raise DualityError("Lefschetz pairing is degenerate")
    return LefschetzPairing(matrix, projection, rel, absolute)


def poisson_bivector(rho: Representation) -> QMatrix:
    """The bivector on ``H^1(X, ad ρ)`` for a surface with boundary.

    Inverts the Lefschetz pairing to a copairing and pushes its relative
    factor to ``H^1(X)``.  Basis: representatives of
    ``tangent_complex_at(ρ).cohomology(0)``.
    """
    lp = lefschetz_pairing(rho)
    if lp.matrix.rows == 0:
        return QMatrix.zeros(0, 0)
    p = lp.projection @ lp.matrix.inverse().T
    if p != -p.T:
        raise DualityError("bivector is not antisymmetric")
    return p


# -- symplectic leaves ---------------------------------------------------------

@dataclass
class LeafReport:
    h_dims: tuple[int, int, int]
    boundary_monodromies: tuple[QMatrix, ...]
    conjugacy_data: tuple[QMatrix, ...]
    complex: CochainComplex = field(repr=False, default=None)
    pairing: Optional[QMatrix] = None

    @property
    def duality_holds(self) -> bool:
        hm1, h0, h1 = self.h_dims
        return hm1 == h1 and h0 % 2 == 0

    def to_json(self) -> dict:
        out = {
            "h_dims": list(self.h_dims),
            "duality_holds": self.duality_holds,
            "boundary_monodromies": [m.to_json() for m in self.boundary_monodromies],
            "conjugacy_data": [m.to_json() for m in self.conjugacy_data],
        }
        if self.pairing is not None:
            out["pairing"] = self.pairing.to_json()
        return out


def leaf_tangent(rho: Representation, lambdas: Sequence[GroupElement],
                 conjugators: Sequence[QMatrix | None] | None = None) -> LeafReport:
    """Tangent complex of the leaf with boundary monodromies in the classes of ``λ_i``.

    Each ``λ_i`` must equal the boundary monodromy ``μ_i`` or satisfy
    ``λ_i = c_i μ_i c_i^-1`` for the supplied rational ``c_i``.
    """
    bws = _require_boundary(rho)
    if len(lambdas) != len(bws):
        raise BoundaryClassMismatch(f"{len(lambdas)} classes for {len(bws)} boundary circles")
    conjugators = list(conjugators) if conjugators is not None else [None] * len(bws)
    mus = [rho.element(w) for w in bws]
    for i, (lam, mu, c) in enumerate(zip(lambdas, mus, conjugators)):
        if c is None:
            ok = lam.matrix == mu.matrix
        else:
            ok = c.det() != 0 and lam.matrix == c @ mu.matrix @ c.inverse()
        if not ok:
            raise BoundaryClassMismatch(f"boundary {i}: monodromy is not conjugate to λ by the given data")
    restr = restriction_map(rho)
    cents = [kernel(defect(mu)) for mu in mus]
    bg = CochainComplex(-1, [sum(c.dim for c in cents)])
    src = direct_sum(restr.source, bg)
    incl = block_diag(*(c.basis for c in cents)) if cents else QMatrix.zeros(0, 0)
    comps = {
        -1: hstack(restr.component(-1), incl),
        0: restr.component(0),
    }
    t_leaf = fiber(ChainMap(src, restr.target, comps))
    h = tuple(t_leaf.h_dims([-1, 0, 1]))
    return LeafReport(h, tuple(mu.matrix for mu in mus), tuple(l.matrix for l in lambdas), t_leaf)


def double_point_leaf_model(l1: GroupElement, l2: GroupElement) -> CochainComplex:
    """Fiber of ``(ker u ∩ ker v)[1] -> T`` for a strict pair, T the intersection complex.

    Degrees -1..3; for a strict pair the cohomology is concentrated in
    degree 3 where it has the dimension of ``ker u ∩ ker v``.
    """
    if not is_strict_direct(l1, l2):
        phi = phi_map(l1, l2)
        raise NotStrictError(
            f"pair is not strict: Im(v|ker u) != Im v ∩ ker u; ker φ has dim {phi.kernel_dim}")
    model = intersection_model(l1, l2)
    t = model.complex
    if not _vanishing_h0(t.cohomology_dims()):  # pragma: no cover - guarded by the criteria check
        raise NotStrictError("pair is not strict: H^0 of the intersection complex is nonzero")
    joint = intersect(model.ker_u, model.ker_v)
    # z -> (z in ker v, -z in ker u): the degree -1 cocycles of T
    cols = [tuple(model.ker_v.coordinates(z)) + tuple(-c for c in model.ker_u.coordinates(z))
            for z in joint.vectors()]
    k = CochainComplex(-1, [joint.dim])
    f = ChainMap(k, t, {-1: QMatrix.from_columns(cols, t.dim(-1)) if cols
                        else QMatrix.zeros(t.dim(-1), 0)})
    return fiber(f)
