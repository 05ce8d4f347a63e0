"""JSON problem files: schema, name resolution and task execution.

A problem file looks like::

    {
      "spec_version": 1,
      "group": {"kind": "SL", "n": 2},
      "elements": {"J": [["1", "1"], ["0", "1"]]},
      "presentations": {"T": {"builtin": "once_punctured_torus"}},
      "representations": {"rho": {"presentation": "T", "images": {"a": "J", "b": "J"}}},
      "tasks": [{"kind": "classify_pair", "pair": ["J", "J"]}]
    }

Objects are only built when a task needs them, so a mathematical failure in
one task (a relator that is violated, a noncommuting pair) does not stop the
others.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Callable

import jsonschema

from . import locsys
from .exactla import QMatrix, rank
from .liealg import GroupElement, GroupError, LieContext
from .scan import FAMILIES, UnknownFamily, parse_group, strict_scan
from .strictness import NonCommutingPair, NotStrictError, classify_pair

TASK_KINDS = ("classify_pair", "strict_scan", "tangent", "sphere", "restriction",
              "relative", "goldman", "bivector", "leaf", "double_point_leaf")

BUILTINS = ("free", "surface", "punctured", "once_punctured_torus", "pair_of_pants")


def _requires(kind: str, keys: list[str]) -> dict:
    return {"if": {"properties": {"kind": {"const": kind}}},
            "then": {"required": keys}}


_RATIONAL = {"oneOf": [
    {"type": "string", "pattern": r"^\s*[+-]?\d+(\s*/\s*[+-]?\d+)?\s*$"},
    {"type": "integer"},
]}
_MATRIX = {"type": "array", "minItems": 1, "items": {"type": "array", "minItems": 1, "items": _RATIONAL}}
_NAME_OR_MATRIX = {"oneOf": [{"type": "string"}, _MATRIX]}
_GROUP = {
    "type": "object",
    "required": ["kind", "n"],
    "properties": {"kind": {"enum": ["SL", "GL"]}, "n": {"type": "integer", "minimum": 1}},
    "additionalProperties": False,
}

SCHEMA = {
    "type": "object",
    "required": ["spec_version", "group", "tasks"],
    "additionalProperties": False,
    "properties": {
        "spec_version": {"const": 1},
        "group": _GROUP,
        "elements": {"type": "object", "additionalProperties": _MATRIX},
        "presentations": {"type": "object", "additionalProperties": {
            "type": "object",
            "oneOf": [
                {"required": ["generators"], "not": {"required": ["builtin"]}},
                {"required": ["builtin"], "not": {"required": ["generators"]}},
            ],
            "properties": {
                "generators": {"type": "array", "items": {"type": "string", "pattern": r"^[a-z]\w*$"}},
                "relators": {"type": "array", "items": {"type": "string"}},
                "boundary_words": {"type": "array", "items": {"type": "string"}},
                "builtin": {"enum": list(BUILTINS)},
                "rank": {"type": "integer", "minimum": 0},
                "genus": {"type": "integer", "minimum": 0},
                "punctures": {"type": "integer", "minimum": 1},
            },
            "additionalProperties": False,
        }},
        "representations": {"type": "object", "additionalProperties": {
            "type": "object",
            "required": ["presentation"],
            "oneOf": [{"required": ["images"]}, {"required": ["trivial"]}],
            "properties": {
                "presentation": {"type": "string"},
                "images": {"type": "object", "additionalProperties": _NAME_OR_MATRIX},
                "trivial": {"const": True},
                "conjugate_by": _NAME_OR_MATRIX,
            },
            "additionalProperties": False,
        }},
        "tasks": {"type": "array", "items": {
            "type": "object",
            "required": ["kind"],
            "properties": {
                "kind": {"enum": list(TASK_KINDS)},
                "name": {"type": "string"},
                "pair": {"type": "array", "items": {"type": "string"}, "minItems": 2, "maxItems": 2},
                "representation": {"type": "string"},
                "family": {"enum": list(FAMILIES)},
                "count": {"type": "integer", "minimum": 0},
                "seed": {"type": "integer"},
                "group": {"type": "string", "pattern": r"^(SL|GL):\d+$"},
                "m": {"type": "integer", "minimum": 1},
                "element": {"type": "string"},
                "lambdas": {"type": "array", "items": {"type": "string"}},
                "conjugators": {"type": "array", "items": {"oneOf": [{"type": "null"}, _NAME_OR_MATRIX]}},
                "options": {
                    "type": "object",
                    "properties": {
                        "require_commuting": {"type": "boolean"},
                        "include_pairs": {"type": "boolean"},
                        "include_matrix": {"type": "boolean"},
                    },
                    "additionalProperties": False,
                },
            },
            "additionalProperties": False,
            "allOf": [
                _requires("classify_pair", ["pair"]),
                _requires("double_point_leaf", ["pair"]),
                _requires("strict_scan", ["family", "count", "seed"]),
                _requires("sphere", ["m"]),
                _requires("leaf", ["representation", "lambdas"]),
                *(_requires(k, ["representation"]) for k in
                  ("tangent", "restriction", "relative", "goldman", "bivector")),
            ],
        }},
    },
}



class ProblemError(Exception):
    """A malformed problem file (exit code 2)."""

    def __init__(self, message: str, path: tuple = (), line: int | None = None,
                 column: int | None = None):
        super().__init__(message)
        self.message = message
        self.path = tuple(path)
        self.line = line
        self.column = column

    def __str__(self):
        where = []
        if self.line is not None:
            where.append(f"line {self.line}, column {self.column}")
        if self.path:
            where.append("at " + "/".join(map(str, self.path)))
        return (", ".join(where) + ": " if where else "") + self.message


# -- locating a JSON path in the source text -----------------------------------

_decoder = json.JSONDecoder()


def _skip_ws(text: str, i: int) -> int:
    while i < len(text) and text[i] in " \t\r\n":
        i += 1
    return i


def _child_offset(text: str, i: int, key) -> int | None:
    """Offset of the value at ``key`` inside the container starting at ``i``."""
    i = _skip_ws(text, i)
    if text[i] == "{":
        i = _skip_ws(text, i + 1)
        while text[i] != "}":
            k, i = _decoder.raw_decode(text, i)
            i = _skip_ws(text, _skip_ws(text, i) + 1)  # past ':'
            if k == key:
                return i
            _, i = _decoder.raw_decode(text, i)
            i = _skip_ws(text, i)
            if text[i] == ",":
                i = _skip_ws(text, i + 1)
        return None
    if text[i] == "[":
        i = _skip_ws(text, i + 1)
        n = 0
        while text[i] != "]":
            if n == key:
                return i
            _, i = _decoder.raw_decode(text, i)
            i = _skip_ws(text, i)
            if text[i] == ",":
                i = _skip_ws(text, i + 1)
            n += 1
    return None


def locate(text: str, path) -> tuple[int, int]:
    """Line and column (1-based) of the deepest existing node on ``path``."""
    i = _skip_ws(text, 0)
    for key in path:
        try:
            nxt = _child_offset(text, i, key)
        except (ValueError, IndexError):
            break
        if nxt is None:
            break
        i = nxt
    line = text.count("\n", 0, i) + 1
    return line, i - (text.rfind("\n", 0, i) + 1) + 1


# -- loading --------------------------------------------------------------------

def _builtin_presentation(entry: dict) -> locsys.GroupPresentation:
    kind = entry["builtin"]
    if kind == "free":
        return locsys.free_group(entry.get("rank", 2))
    if kind == "surface":
        return locsys.surface_group(entry.get("genus", 1))
    if kind == "punctured":
        return locsys.punctured_surface(entry.get("genus", 1), entry.get("punctures", 1))
    if kind == "once_punctured_torus":
        return locsys.once_punctured_torus()
    return locsys.pair_of_pants()


@dataclass
class Problem:
    """A validated problem file with lazily built group data."""

    data: dict
    text: str
    ctx: LieContext
    presentations: dict[str, locsys.GroupPresentation]
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def tasks(self) -> list[dict]:
        return self.data["tasks"]

    def _matrix(self, ref) -> QMatrix:
        if isinstance(ref, str):
            return QMatrix.from_rows(self.data["elements"][ref])
        return QMatrix.from_rows(ref)

    def element(self, ref) -> GroupElement:
        key = ("element", json.dumps(ref))
        if key not in self._cache:
            self._cache[key] = self.ctx.element(self._matrix(ref))
        return self._cache[key]

    def representation(self, name: str) -> locsys.Representation:
        key = ("rep", name)
        if key not in self._cache:
            entry = self.data["representations"][name]
            pres = self.presentations[entry["presentation"]]
            if entry.get("trivial"):
                rho = locsys.Representation.trivial(pres, self.ctx)
            else:
                imgs = tuple(self.element(entry["images"][g]) for g in pres.generators)
                rho = locsys.Representation(pres, imgs)
            if "conjugate_by" in entry:
                g = self._matrix(entry["conjugate_by"])
                if g.det() == 0:
                    raise GroupError(f"conjugating matrix of {name!r} is singular")
                rho = rho.conjugate(g)
            self._cache[key] = rho
        return self._cache[key]


def _error(text: str, message: str, path) -> ProblemError:
    line, col = locate(text, path)
    return ProblemError(message, tuple(path), line, col)


def load_problem(text: str) -> Problem:
    """Parse, validate against :data:`SCHEMA` and resolve every name."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError(f"invalid JSON: {exc.msg}", (), exc.lineno, exc.colno) from None
    best = jsonschema.exceptions.best_match(jsonschema.Draft202012Validator(SCHEMA).iter_errors(data))
    if best is not None:
        raise _error(text, best.message, best.absolute_path)
    try:
        ctx = LieContext.from_kind(data["group"]["kind"], data["group"]["n"])
    except GroupError as exc:
        raise _error(text, str(exc), ("group",)) from None
    n = ctx.n
    elements = data.setdefault("elements", {})
    presentation_entries = data.setdefault("presentations", {})
    reps = data.setdefault("representations", {})

    def check_matrix(ref, path):
        if isinstance(ref, str):
            if ref not in elements:
                raise _error(text, f"undefined element {ref!r}", path)
            ref = elements[ref]
        if len(ref) != n or any(len(r) != n for r in ref):
            raise _error(text, f"expected a {n}x{n} matrix", path)

    for name, m in elements.items():
        check_matrix(m, ("elements", name))

    presentations = {}
    for name, entry in presentation_entries.items():
        path = ("presentations", name)
        try:
            if "builtin" in entry:
                presentations[name] = _builtin_presentation(entry)
            else:
                presentations[name] = locsys.GroupPresentation.from_strings(
                    entry["generators"], entry.get("relators", ()), entry.get("boundary_words"))
        except locsys.PresentationError as exc:
            raise _error(text, str(exc), path) from None

    for name, entry in reps.items():
        path = ("representations", name)
        if entry["presentation"] not in presentations:
            raise _error(text, f"undefined presentation {entry['presentation']!r}", path + ("presentation",))
        gens = presentations[entry["presentation"]].generators
        if "images" in entry:
            images = entry["images"]
            missing = [g for g in gens if g not in images]
            extra = [g for g in images if g not in gens]
            if missing or extra:
                raise _error(text, f"images must cover exactly the generators {list(gens)}", path + ("images",))
            for g, ref in images.items():
                check_matrix(ref, path + ("images", g))
        if "conjugate_by" in entry:
            check_matrix(entry["conjugate_by"], path + ("conjugate_by",))

    for i, task in enumerate(data["tasks"]):
        path = ("tasks", i)
        for j, ref in enumerate(task.get("pair", ())):
            check_matrix(ref, path + ("pair", j))
        if "element" in task:
            check_matrix(task["element"], path + ("element",))
        for j, ref in enumerate(task.get("lambdas", ())):
            check_matrix(ref, path + ("lambdas", j))
        for j, ref in enumerate(task.get("conjugators", ())):
            if ref is not None:
                check_matrix(ref, path + ("conjugators", j))
        if "representation" in task and task["representation"] not in reps:
            raise _error(text, f"undefined representation {task['representation']!r}", path + ("representation",))
    return Problem(data, text, ctx, presentations)


# -- tasks ----------------------------------------------------------------------

#: failures of mathematical preconditions (exit code 3)
MATH_ERRORS = (GroupError, NotStrictError, locsys.RelatorViolation, locsys.BoundaryClassMismatch,
               locsys.SurfaceError, locsys.PresentationError, UnknownFamily, ValueError)


def _pair(problem: Problem, task: dict) -> tuple[GroupElement, GroupElement]:
    a, b = task["pair"]
    return problem.element(a), problem.element(b)


def _classify(problem: Problem, task: dict) -> dict:
    l1, l2 = _pair(problem, task)
    report = classify_pair(l1, l2)
    if task.get("options", {}).get("require_commuting") and not report.commuting:
        raise NonCommutingPair("the pair does not commute (require_commuting is set)")
    out = report.to_json()
    if report.commuting:
        out["strict"] = report.strict
        out["criteria_agree"] = report.criteria_agree
    return out


def _scan(problem: Problem, task: dict) -> dict:
    ctx = parse_group(task["group"]) if "group" in task else problem.ctx
    summary = strict_scan(task["family"], task["count"], task["seed"], ctx)
    return summary.to_json(include_pairs=task.get("options", {}).get("include_pairs", False))


def _complex_json(c, degrees=None) -> dict:
    degrees = list(degrees if degrees is not None else c.degrees)
    return {
        "degrees": [degrees[0], degrees[-1]],
        "dims": [c.dim(n) for n in degrees],
        "h_dims": c.h_dims(degrees),
        "euler_characteristic": c.euler_characteristic(),
    }


def _tangent(problem: Problem, task: dict) -> dict:
    rho = problem.representation(task["representation"])
    out = _complex_json(locsys.tangent_complex_at(rho), [-1, 0, 1])
    expected = -rho.presentation.euler_characteristic * rho.ctx.dim
    out["expected_euler_characteristic"] = expected
    out["euler_check"] = out["euler_characteristic"] == expected
    return out


def _sphere(problem: Problem, task: dict) -> dict:
    lam = problem.element(task["element"]) if "element" in task else None
    m = task["m"]
    c = locsys.sphere_tangent(m, problem.ctx, lam)
    out = {"m": m}
    out.update(_complex_json(c))
    return out


def _restriction(problem: Problem, task: dict) -> dict:
    rho = problem.representation(task["representation"])
    r = locsys.restriction_map(rho)
    return {
        "source_h_dims": r.source.h_dims([-1, 0, 1]),
        "target_h_dims": r.target.h_dims([-1, 0]),
        "induced_ranks": [rank(r.induced_map(n)) for n in (-1, 0)],
    }


def _relative(problem: Problem, task: dict) -> dict:
    rho = problem.representation(task["representation"])
    check = locsys.lefschetz_check(rho)
    rel = locsys.relative_complex(rho)
    out = _complex_json(rel, [-1, 0, 1])
    out["absolute_h_dims"] = list(check.absolute_dims)
    out["lefschetz_holds"] = check.holds
    return out


def _matrix_result(m: QMatrix, task: dict) -> dict:
    out = {"dim": m.rows, "rank": rank(m), "antisymmetric": m == -m.T}
    if task.get("options", {}).get("include_matrix", True):
        out["matrix"] = m.to_json()
    return out


def _goldman(problem: Problem, task: dict) -> dict:
    rho = problem.representation(task["representation"])
    out = {"genus": locsys.surface_genus(rho.presentation)}
    out.update(_matrix_result(locsys.goldman_pairing(rho), task))
    return out


def _bivector(problem: Problem, task: dict) -> dict:
    rho = problem.representation(task["representation"])
    return _matrix_result(locsys.poisson_bivector(rho), task)


def _leaf(problem: Problem, task: dict) -> dict:
    rho = problem.representation(task["representation"])
    lambdas = [problem.element(r) for r in task["lambdas"]]
    conj = task.get("conjugators")
    if conj is not None:
        conj = [None if c is None else problem._matrix(c) for c in conj]
    return locsys.leaf_tangent(rho, lambdas, conj).to_json()


def _double_point(problem: Problem, task: dict) -> dict:
    l1, l2 = _pair(problem, task)
    c = locsys.double_point_leaf_model(l1, l2)
    out = _complex_json(c)
    out["acyclic_in_-1_to_1"] = c.h_dims([-1, 0, 1]) == [0, 0, 0]
    return out


RUNNERS: dict[str, Callable[[Problem, dict], dict]] = {
    "classify_pair": _classify,
    "strict_scan": _scan,
    "tangent": _tangent,
    "sphere": _sphere,
    "restriction": _restriction,
    "relative": _relative,
    "goldman": _goldman,
    "bivector": _bivector,
    "leaf": _leaf,
    "double_point_leaf": _double_point,
}


def run_task(problem: Problem, index: int) -> dict[str, Any]:
    """Run one task; mathematical failures are captured in the result record."""
    task = problem.tasks[index]
    record = {"index": index, "kind": task["kind"]}
    if "name" in task:
        record["name"] = task["name"]
    try:
        result = RUNNERS[task["kind"]](problem, task)
    except MATH_ERRORS as exc:
        record["status"] = "error"
        record["error"] = {"type": type(exc).__name__, "message": str(exc)}
    else:
        record["status"] = "ok"
        record["result"] = result
    return record
