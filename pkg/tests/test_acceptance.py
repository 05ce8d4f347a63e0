"""The thirteen acceptance criteria, each checked exactly and logged as one line."""

from __future__ import annotations

import subprocess
import sys
import time
from functools import lru_cache
from pathlib import Path

import pytest

import corpus
from charstack.exactla import QMatrix, block_diag, intersect, kernel, rank
from charstack.liealg import LieContext, defect, is_semisimple, is_unipotent
from charstack.locsys import (
    Representation,
    goldman_pairing,
    lefschetz_check,
    leaf_tangent,
    once_punctured_torus,
    sphere_tangent,
    surface_genus,
    surface_group,
    tangent_complex_at,
    double_point_leaf_model,
)
from charstack.scan import generate_pairs
from charstack.strictness import (
    NotStrictError,
    classify_pair,
    intersection_model,
    phi_map,
)

ROOT = Path(__file__).resolve().parents[1]
BATTERY_GROUPS = ("SL:2", "SL:3", "SL:4", "GL:2")
BATTERY_FAMILIES = ("diagonal", "polynomial_in", "block")
PER_CELL = 20
SEED = 2024


def _ctx(text: str) -> LieContext:
    kind, n = text.split(":")
    return LieContext.from_kind(kind, int(n))


@lru_cache(maxsize=None)
def battery():
    """``(label, λ1, λ2, report, seconds)`` for every seeded pair in the battery."""
    rows = []
    for g in BATTERY_GROUPS:
        ctx = _ctx(g)
        for fam in BATTERY_FAMILIES:
            for k, (l1, l2) in enumerate(generate_pairs(fam, ctx, PER_CELL, SEED)):
                start = time.perf_counter()
                report = classify_pair(l1, l2, check=False)
                rows.append((f"{g}/{fam}/{k}", l1, l2, report, time.perf_counter() - start))
    return tuple(rows)


def test_criterion_01_criteria_equivalence(record_criterion):
    rows = battery()
    elapsed = sum(r[4] for r in rows)
    bad = [label for label, _, _, rep, _ in rows if not (rep.commuting and rep.criteria_agree)]
    ok = len(rows) >= 200 and not bad and elapsed < 30
    record_criterion(1, "three strictness criteria agree on the seeded battery", ok,
                     f"{len(rows)} pairs, {len(bad)} disagreements, {elapsed:.1f}s")


def test_criterion_02_semisimple_member_strict(record_criterion):
    rows = [r for r in battery() if is_semisimple(r[1]) or is_semisimple(r[2])]
    bad = [r[0] for r in rows if r[3].strict_direct is not True]
    record_criterion(2, "pairs with a semisimple member are strict", bool(rows) and not bad,
                     f"{len(rows) - len(bad)}/{len(rows)} strict")


def test_criterion_03_block_pairs_strict(record_criterion):
    j = QMatrix.from_rows([[1, 1], [0, 1]])
    i2 = QMatrix.identity(2)
    pairs = []
    for g in ("SL:4", "GL:4"):
        ctx = _ctx(g)
        pairs.append((ctx.element(block_diag(j, i2)), ctx.element(block_diag(i2, j))))
        pairs += generate_pairs("block_sl2", ctx, 20, SEED)
    reports = [classify_pair(a, b, check=False) for a, b in pairs]
    strict = sum(1 for r in reports if r.strict_direct and r.criteria_agree)
    record_criterion(3, "(J⊕I, I⊕J) and seeded conjugates in SL4/GL4 are strict",
                     strict == len(pairs), f"{strict}/{len(pairs)} strict")


def test_criterion_04_unipotent_diagonal_non_strict(record_criterion):
    total = nonstrict = 0
    for n in (2, 3, 4):
        ctx = LieContext.sl(n)
        for lam, same in generate_pairs("unipotent_diagonal_pair", ctx, 20, SEED):
            assert lam == same and is_unipotent(lam)
            assert lam.matrix != QMatrix.identity(n)
            r = classify_pair(lam, lam, check=False)
            total += 1
            nonstrict += r.strict_direct is False and r.criteria_agree
    record_criterion(4, "(λ, λ) with λ nontrivial unipotent in SL2..SL4 is non-strict",
                     nonstrict == total, f"{nonstrict}/{total} non-strict")


def test_criterion_05_shifted_duality(record_criterion):
    bad = []
    for label, l1, l2, _, _ in battery():
        model = intersection_model(l1, l2)
        h = model.complex.cohomology_dims()
        joint = intersect(kernel(defect(l1)), kernel(defect(l2))).dim
        if not (h[-1] == h[2] and h[0] == h[1] and model.complex.euler_characteristic() == 0
                and h[-1] == joint):
            bad.append(label)
    n = len(battery())
    record_criterion(5, "H^-1 = H^2, H^0 = H^1, χ = 0, H^-1 = ker u ∩ ker v", not bad,
                     f"{n - len(bad)}/{n} pairs")


def test_criterion_06_five_term_exactness(record_criterion):
    bad = []
    for label, l1, l2, _, _ in battery():
        h0 = intersection_model(l1, l2).complex.cohomology(0).dim
        if h0 != phi_map(l1, l2).kernel_dim:
            bad.append(label)
    n = len(battery())
    record_criterion(6, "dim H^0(T) = dim ker φ", not bad, f"{n - len(bad)}/{n} pairs")


def test_criterion_07_sphere_models(record_criterion):
    bad = []
    for ctx in (LieContext.sl(2), LieContext.sl(3)):
        for m in (1, 2, 3):
            lam = ctx.identity() if m == 1 else None
            h = sphere_tangent(m, ctx, lam).cohomology_dims()
            support = {n: d for n, d in h.items() if d}
            if support != {-1: ctx.dim, m - 1: ctx.dim}:
                bad.append(f"sl{ctx.n}/S^{m}")
    record_criterion(7, "sphere tangent complexes concentrated in degrees -1 and m-1", not bad,
                     f"{6 - len(bad)}/6 cases")


def test_criterion_08_fox_euler(record_criterion):
    reps = corpus.closed_corpus() + corpus.punctured_corpus()
    per_presentation: dict = {}
    bad = []
    for name, rho in reps:
        per_presentation.setdefault(rho.presentation, 0)
        per_presentation[rho.presentation] += 1
        chi = tangent_complex_at(rho).euler_characteristic()
        if chi != -rho.presentation.euler_characteristic * rho.ctx.dim:
            bad.append(name)
    enough = len(per_presentation) >= 10 and min(per_presentation.values()) >= 3
    record_criterion(8, "χ(tangent complex) = -χ(X)·dim g", enough and not bad,
                     f"{len(per_presentation)} presentations, {len(reps)} representations, {len(bad)} failures")


def _standard_goldman(genus: int, tf: QMatrix) -> QMatrix:
    j = QMatrix.from_rows([[0, 1], [-1, 0]])
    form = block_diag(*([j] * genus))
    k = tf.rows
    return QMatrix.from_rows([[form[i // k, c // k] * tf[i % k, c % k] for c in range(form.cols * k)]
                              for i in range(form.rows * k)])


def test_criterion_09_goldman(record_criterion):
    antisym = []
    for name, rho in corpus.closed_corpus():
        try:
            surface_genus(rho.presentation)
        except ValueError:
            continue
        p = goldman_pairing(rho)
        antisym.append(p == -p.T)
    sl2 = LieContext.sl(2)
    trivial_ok = []
    for g in (1, 2):
        p = goldman_pairing(Representation.trivial(surface_group(g), sl2))
        trivial_ok.append(rank(p) == 6 * g and p == _standard_goldman(g, sl2.trace_form))
    ok = all(antisym) and all(trivial_ok)
    record_criterion(9, "Goldman pairing antisymmetric; trivial rep = intersection form ⊗ trace form", ok,
                     f"{sum(antisym)}/{len(antisym)} antisymmetric, genus 1,2 trivial: {trivial_ok}")


def test_criterion_10_lefschetz(record_criterion):
    reps = corpus.punctured_corpus()
    bad = [name for name, rho in reps if not lefschetz_check(rho).holds]
    record_criterion(10, "Lefschetz duality dims on punctured surfaces", not bad,
                     f"{len(reps) - len(bad)}/{len(reps)} representations")


def test_criterion_11_leaf(record_criterion):
    sl2 = LieContext.sl(2)
    rho = Representation(once_punctured_torus(),
                         (sl2.element([[2, 0], [0, "1/2"]]), sl2.element([[0, 1], [-1, 0]])))
    example = leaf_tangent(rho, [sl2.element([[4, 0], [0, "1/4"]])]).h_dims
    bad = []
    for name, r in corpus.punctured_corpus():
        lams = [r.element(w) for w in r.presentation.boundary_words]
        if not leaf_tangent(r, lams).duality_holds:
            bad.append(name)
    ok = example == (0, 2, 0) and not bad
    record_criterion(11, "punctured-torus leaf has H = (0, 2, 0); leaves satisfy duality", ok,
                     f"example {example}, {len(bad)} duality failures")


def test_criterion_12_double_point(record_criterion):
    strict_rows = [r for r in battery() if r[3].strict_direct]
    bad = [label for label, l1, l2, _, _ in strict_rows
           if double_point_leaf_model(l1, l2).h_dims([-1, 0, 1]) != [0, 0, 0]]
    sl2 = LieContext.sl(2)
    j = sl2.element([[1, 1], [0, 1]])
    try:
        double_point_leaf_model(j, j)
        raised = False
    except NotStrictError:
        raised = True
    record_criterion(12, "double-point model acyclic in -1..1 for strict pairs; (J, J) rejected",
                     not bad and raised and bool(strict_rows),
                     f"{len(strict_rows) - len(bad)}/{len(strict_rows)} acyclic, (J,J) rejected: {raised}")


def _cli_suite() -> bytes:
    cmd = [sys.executable, "-m", "charstack.cli"]
    out = subprocess.run(cmd + ["run", str(ROOT / "problems" / "demo.json")],
                         capture_output=True, check=True).stdout
    for fam, group in [("diagonal", "SL:3"), ("polynomial_in", "GL:2"), ("block", "SL:4"),
                       ("block_sl2", "SL:4"), ("unipotent_diagonal_pair", "SL:3")]:
        out += subprocess.run(cmd + ["scan", "--family", fam, "--count", "10", "--seed", str(SEED),
                                     "--group", group, "--pairs"],
                              capture_output=True, check=True).stdout
    return out


def test_criterion_13_determinism(record_criterion):
    first, second = _cli_suite(), _cli_suite()
    record_criterion(13, "two CLI runs with the same seed are byte-identical",
                     first == second and len(first) > 0, f"{len(first)} bytes")


if __name__ == "__main__":  # pragma: no cover
    sys.exit(pytest.main([__file__, "-q"]))
