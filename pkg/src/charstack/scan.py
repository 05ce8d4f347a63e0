"""Seeded generators of commuting pairs and the strictness scan."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from .exactla import Q
from typing import Callable

from .exactla import QMatrix, block_diag
from .liealg import GroupElement, LieContext
from .strictness import PairReport, classify_pair

FAMILIES = ("diagonal", "polynomial_in", "block", "block_sl2", "unipotent_diagonal_pair")

_EIGENVALUES = [Q(x) for x in ("2", "1/2", "3", "1/3", "-1", "-2", "-1/2", "3/2", "2/3", "1")]


class UnknownFamily(ValueError):
    pass


def _rational(rng: random.Random) -> object:
    return Q(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 1, 2, 3]))


def random_conjugator(rng: random.Random, n: int) -> QMatrix:
    """An invertible integer matrix with small entries."""
    while True:
        m = QMatrix.from_rows([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)])
        if m.det() != 0:
            return m


def jordan_block(t, size: int) -> QMatrix:
    return QMatrix.from_rows([[t if i == j else (1 if j == i + 1 else 0) for j in range(size)]
                              for i in range(size)])


def _partition(rng: random.Random, n: int, min_part: int = 1) -> list[int]:
    parts, left = [], n
    while left:
        s = rng.randint(1, left)
        parts.append(s)
        left -= s
    if max(parts) < min_part:
        parts = [min_part] + [1] * (n - min_part)
    rng.shuffle(parts)
    return parts


def _det_one_eigenvalues(rng: random.Random, parts: list[int]) -> list:
    """Eigenvalues per Jordan block with ``prod t_i^(s_i) = 1``."""
    for _ in range(20):
        ts = [rng.choice(_EIGENVALUES) for _ in parts]
        free = [i for i, s in enumerate(parts) if s == 1]
        if free:
            i = free[-1]
            ts[i] = Q(1)
            prod = Q(1)
            for t, s in zip(ts, parts):
                prod *= t ** s
            ts[i] = 1 / prod
            return ts
        prod = Q(1)
        for t, s in zip(ts, parts):
            prod *= t ** s
        if prod == 1:
            return ts
    return [Q(1)] * len(parts)


def _conjugate_pair(rng, ctx, m1: QMatrix, m2: QMatrix, conjugate: bool) -> tuple[GroupElement, GroupElement]:
    if conjugate:
        g = random_conjugator(rng, ctx.n)
        gi = g.inverse()
        m1, m2 = g @ m1 @ gi, g @ m2 @ gi
    return ctx.element(m1), ctx.element(m2)


def diagonal_pair(rng: random.Random, ctx: LieContext) -> tuple[GroupElement, GroupElement]:
    """Two diagonal matrices; eigenvalues drawn from a small pool so repeats occur."""
    def diag():
        d = [rng.choice(_EIGENVALUES) for _ in range(ctx.n)]
        if ctx.kind == "SL":
            prod = Q(1)
            for x in d[:-1]:
                prod *= x
            d[-1] = 1 / prod
        return QMatrix.diagonal(d)
    return _conjugate_pair(rng, ctx, diag(), diag(), conjugate=False)


def _unipotent_polynomial(rng: random.Random, nil: QMatrix, n: int) -> QMatrix:
    # 1 + c1 N + c2 N^2 + ... with c1 != 0 is unipotent
    out = QMatrix.identity(n)
    power = QMatrix.identity(n)
    for k in range(1, n):
        power = power @ nil
        c = _rational(rng) if k == 1 else rng.choice([0, 0, _rational(rng)])
        out = out + power.scale(c)
    return out


def polynomial_pair(rng: random.Random, ctx: LieContext) -> tuple[GroupElement, GroupElement]:
    """``λ1`` a conjugated Jordan matrix and ``λ2`` a polynomial in ``λ1``."""
    n = ctx.n
    parts = _partition(rng, n)
    if ctx.kind == "SL":
        ts = _det_one_eigenvalues(rng, parts)
    else:
        ts = [rng.choice(_EIGENVALUES) for _ in parts]
    m1 = block_diag(*(jordan_block(t, s) for t, s in zip(ts, parts)))
    ident = QMatrix.identity(n)
    mode = rng.choice(["power", "power", "unipotent", "general"])
    if mode == "unipotent" and all(t == 1 for t in ts):
        m2 = _unipotent_polynomial(rng, m1 - ident, n)
    elif mode == "general" and ctx.kind == "GL":
        while True:
            coeffs = [_rational(rng) for _ in range(rng.randint(1, n))]
            m2 = QMatrix.zeros(n, n)
            power = ident
            for c in coeffs:
                m2 = m2 + power.scale(c)
                power = power @ m1
            if m2.det() != 0:
                break
    else:
        m2 = m1 ** rng.choice([-2, -1, 2, 3])
    if rng.random() < 0.5:
        m1, m2 = m2, m1
    return _conjugate_pair(rng, ctx, m1, m2, conjugate=rng.random() < 0.7)


def _small_commuting_block(rng: random.Random, size: int, det_one: bool) -> tuple[QMatrix, QMatrix]:
    ident = QMatrix.identity(size)
    kind = rng.choice(["jordan", "jordan", "diag", "scalar"])
    if kind == "jordan" or size == 1:
        t = Q(1) if det_one or rng.random() < 0.5 else rng.choice(_EIGENVALUES)
        if det_one and size == 2:
            t = rng.choice([Q(1), Q(-1)])
        j = jordan_block(t, size)
        k = rng.choice([-1, 1, 2])
        other = j ** k if rng.random() < 0.6 else ident.scale(rng.choice([1, -1]) if det_one else _rational(rng))
        if det_one and other.det() != 1:
            other = j ** k
        return (j, other) if rng.random() < 0.5 else (other, j)
    if kind == "diag":
        def d():
            a = rng.choice(_EIGENVALUES)
            b = 1 / a if det_one else rng.choice(_EIGENVALUES)
            return QMatrix.diagonal([a, b] + [1] * (size - 2))
        return d(), d()
    return ident.scale(rng.choice([1, -1])), jordan_block(1, size)


def block_pair(rng: random.Random, ctx: LieContext) -> tuple[GroupElement, GroupElement]:
    """Block-diagonal pairs built from commuting 2x2 (and 1x1) blocks."""
    n = ctx.n
    sizes = []
    left = n
    while left:
        s = 2 if left >= 2 and rng.random() < 0.8 else 1
        sizes.append(s)
        left -= s
    for _ in range(50):
        blocks = [_small_commuting_block(rng, s, ctx.kind == "SL" and s == 2) for s in sizes]
        m1 = block_diag(*(a for a, _ in blocks))
        m2 = block_diag(*(b for _, b in blocks))
        if ctx.kind != "SL" or (m1.det() == 1 and m2.det() == 1):
            break
    else:
        m1 = m2 = QMatrix.identity(n)
    return _conjugate_pair(rng, ctx, m1, m2, conjugate=rng.random() < 0.5)


def block_sl2_pair(rng: random.Random, ctx: LieContext) -> tuple[GroupElement, GroupElement]:
    """``(J ⊕ 1, 1 ⊕ J)`` from two commuting copies of SL(2), conjugated."""
    n = ctx.n
    if n < 4:
        raise ValueError("block_sl2 needs n >= 4")
    k1, k2 = rng.choice([1, 2, -1]), rng.choice([1, 3, -2])
    rest = QMatrix.identity(n - 4)
    m1 = block_diag(jordan_block(1, 2) ** k1, QMatrix.identity(2), rest)
    m2 = block_diag(QMatrix.identity(2), jordan_block(1, 2) ** k2, rest)
    return _conjugate_pair(rng, ctx, m1, m2, conjugate=rng.random() < 0.8)


def unipotent_diagonal_pair(rng: random.Random, ctx: LieContext) -> tuple[GroupElement, GroupElement]:
    """``(λ, λ)`` for a nontrivial unipotent ``λ``."""
    n = ctx.n
    parts = _partition(rng, n, min_part=2)
    u = block_diag(*(jordan_block(1, s) for s in parts))
    if rng.random() < 0.5:
        u = _unipotent_polynomial(rng, u - QMatrix.identity(n), n)
    g = random_conjugator(rng, n)
    m = g @ u @ g.inverse()
    return ctx.element(m), ctx.element(m)


GENERATORS: dict[str, Callable[[random.Random, LieContext], tuple[GroupElement, GroupElement]]] = {
    "diagonal": diagonal_pair,
    "polynomial_in": polynomial_pair,
    "block": block_pair,
    "block_sl2": block_sl2_pair,
    "unipotent_diagonal_pair": unipotent_diagonal_pair,
}


def generate_pairs(family: str, ctx: LieContext, count: int, seed: int) -> list[tuple[GroupElement, GroupElement]]:
    if family not in GENERATORS:
        raise UnknownFamily(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    rng = random.Random(f"{family}/{ctx.kind}{ctx.n}/{seed}")
    gen = GENERATORS[family]
    return [gen(rng, ctx) for _ in range(count)]


def parse_group(text: str) -> LieContext:
    """``"SL:4"`` -> ``LieContext.sl(4)``."""
    try:
        kind, n = text.split(":")
        return LieContext.from_kind(kind, int(n))
    except ValueError as exc:
        raise ValueError(f"bad group {text!r}; expected KIND:n such as SL:4") from exc


@dataclass
class ScanSummary:
    family: str
    group: str
    count: int
    seed: int
    strict_count: int = 0
    agreement_count: int = 0
    semisimple_member_count: int = 0
    semisimple_member_strict: int = 0
    h_dims_histogram: Counter = field(default_factory=Counter)
    reports: list[PairReport] = field(default_factory=list, repr=False)

    @property
    def all_agree(self) -> bool:
        return self.agreement_count == self.count

    def to_json(self, include_pairs: bool = False) -> dict:
        out = {
            "family": self.family,
            "group": self.group,
            "count": self.count,
            "seed": self.seed,
            "strict_count": self.strict_count,
            "strict_fraction": f"{self.strict_count}/{self.count}",
            "agreement_count": self.agreement_count,
            "criteria_agree_all": self.all_agree,
            "semisimple_member_count": self.semisimple_member_count,
            "semisimple_member_strict": self.semisimple_member_strict,
            "h_dims_histogram": {" ".join(map(str, k)): v
                                 for k, v in sorted(self.h_dims_histogram.items())},
        }
        if include_pairs:
            out["pairs"] = [r.to_json() for r in self.reports]
        return out


def strict_scan(family: str, count: int, seed: int, ctx: LieContext) -> ScanSummary:
    summary = ScanSummary(family, f"{ctx.kind}:{ctx.n}", count, seed)
    for l1, l2 in generate_pairs(family, ctx, count, seed):
        report = classify_pair(l1, l2, check=False)
        summary.reports.append(report)
        summary.strict_count += bool(report.strict)
        summary.agreement_count += bool(report.criteria_agree)
        if any(report.semisimple_flags):
            summary.semisimple_member_count += 1
            summary.semisimple_member_strict += bool(report.strict)
        summary.h_dims_histogram[tuple(report.h_dims)] += 1
    return summary
