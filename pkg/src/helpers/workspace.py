"""Definition documents to library objects (``from_``) and back (``to_``).

A document is ``{"objects": {name: definition, ...}, "tasks": [...]}``; any
definition field may hold either an inline definition or the name of an
entry in ``objects``. Rationals are integers or "p/q" strings.
"""
import dataclasses
import re
from fractions import Fraction
from typing import Any, Callable, NamedTuple

from relproj import linalg
from relproj.amod import (
    ModuleInC,
    ModuleMap,
    base_change,
    free_rank,
    ideal_module,
    module_from_structure,
    module_map,
    o_module_from_degree_zero,
    quotient_module,
    regular_module,
)
from relproj.calg import (
    AlgebraInC,
    AlgebraMap,
    algebra_from_structure,
    algebra_map,
    dual_numbers,
    endo,
    generated_ideal,
    ground_algebra,
    identity_algebra_map,
    localize,
    octonions,
    product_of_fields,
    quotient_algebra,
    twisted_group_algebra,
)
from relproj.cochain_core import (
    Cochain2,
    GradingGroup,
    cochain_from_entries,
    octonion_cochain,
    super_cochain,
    trivial_cochain,
    z2_cubed,
)
from relproj.errors import InputError
from relproj.graded_linear import GradedSpace
from relproj.linalg import Vector
from relproj.linedesc import Covering, DescentDatum, descent_datum, dual_module, product_algebra, product_module
from relproj.proj import point_from_chart, unit_epi, unit_mono, verify_point, verify_quotient
from relproj.report import CheckReport

_RATIONAL = re.compile(r"-?\d+(/\d+)?")


def rational(value, where: str = "") -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise InputError(f"expected an integer or a \"p/q\" string, got {value!r}", location=where)
    if isinstance(value, str) and not _RATIONAL.fullmatch(value.strip()):
        raise InputError(f"malformed rational {value!r}", location=where)
    try:
        return Fraction(value)
    except ZeroDivisionError:
        raise InputError(f"zero denominator in {value!r}", location=where)


def vector(values, size: int, where: str = "") -> Vector:
    if not isinstance(values, list) or len(values) != size:
        raise InputError(f"expected a list of {size} rationals", location=where)
    return tuple(rational(v, f"{where}[{k}]") for k, v in enumerate(values))


def element(A: AlgebraInC, value, where: str = "") -> Vector:
    """A list of coordinates, or a single rational meaning that multiple of the unit."""
    if isinstance(value, list):
        return vector(value, A.dimension, where)
    c = rational(value, where)
    return tuple(c * u for u in A.unit)


def rows(values, shape: tuple[int, int], where: str = "") -> list[list[Fraction]]:
    if not isinstance(values, list) or len(values) != shape[0]:
        raise InputError(f"expected {shape[0]} rows", location=where)
    return [list(vector(row, shape[1], f"{where}[{r}]")) for r, row in enumerate(values)]


class PointSpec(NamedTuple):
    """The data of a point before verification."""

    algebra: AlgebraInC
    n: int
    line: ModuleInC
    map: ModuleMap
    quotient: bool


def verify_spec(spec: PointSpec) -> tuple[Any, CheckReport]:
    """ProjPoint or QuotPoint (None when a condition fails) and the verdict."""
    verify = verify_quotient if spec.quotient else verify_point
    return verify(spec.algebra, spec.n, spec.line, spec.map)


class Workspace:
    def __init__(self, document: dict | None = None):
        document = document or {}
        if not isinstance(document, dict):
            raise InputError("a document must be a JSON object")
        self.objects: dict = document.get("objects", {})
        self.tasks: list = document.get("tasks", [])
        self._built: dict[str, Any] = {}
        self._resolving: list[str] = []

    def get(self, ref, where: str = "", kind: str | None = None) -> Any:
        if isinstance(ref, dict):
            return self.build(ref, where, kind)
        if not isinstance(ref, str):
            raise InputError(f"expected a definition or a name, got {ref!r}", location=where)
        if ref in self._built:
            return self._built[ref]
        if ref not in self.objects:
            if ref in _SHORTHANDS.get(kind, ()):
                self._built[ref] = self.build({kind: ref}, where, kind)
                return self._built[ref]
            raise InputError(f"unknown object {ref!r}", location=where)
        if ref in self._resolving:
            raise InputError("cyclic reference: " + " -> ".join(self._resolving + [ref]), location=where)
        self._resolving.append(ref)
        try:
            obj = self.build(self.objects[ref], f"objects.{ref}", kind)
        finally:
            self._resolving.pop()
        self._built[ref] = obj
        return obj

    def typed(self, ref, cls: type, where: str) -> Any:
        obj = self.get(ref, where, _KINDS.get(cls))
        if not isinstance(obj, cls):
            raise InputError(f"expected a {cls.__name__}", location=where)
        return obj

    def build(self, definition: dict, where: str = "", kind: str | None = None) -> Any:
        if not isinstance(definition, dict):
            raise InputError("a definition must be a JSON object", location=where)
        kind = definition.get("kind", kind)
        builder = _BUILDERS.get(kind)
        if builder is None:
            raise InputError(f"unknown kind {kind!r}", location=f"{where}.kind")
        return builder(self, definition, where)

    def algebra(self, definition: dict, where: str, default: Callable[[], AlgebraInC] | None = None) -> AlgebraInC:
        if "algebra" not in definition and default is not None:
            return default()
        return self.typed(definition["algebra"], AlgebraInC, f"{where}.algebra")

    def task_objects(self, task: dict, key: str, kind: str, where: str) -> Any:
        """A task field naming an object, or the task itself when it carries the definition inline."""
        if key in task:
            return self.get(task[key], f"{where}.{key}", kind)
        return self.build(task, where, kind)


def _group_ref(ws: Workspace, value, where: str) -> GradingGroup:
    if isinstance(value, list):
        return GradingGroup(tuple(value))
    if value == "z2_cubed" and value not in ws.objects:
        return z2_cubed()
    return ws.typed(value, GradingGroup, where)


def _dims(group: GradingGroup, value, where: str) -> GradedSpace:
    """A flat list of per-degree dimensions, ``{"degree", "dim"}`` entries, or one identity-degree dimension."""
    if isinstance(value, int) and not isinstance(value, bool):
        dims = [0] * group.size
        dims[group.index(group.identity)] = value
        return GradedSpace(group, tuple(dims))
    if not isinstance(value, list):
        raise InputError("dims must be a list", location=where)
    if all(isinstance(entry, dict) for entry in value) and value:
        dims = [0] * group.size
        for entry in value:
            dims[group.index(entry["degree"])] += int(entry["dim"])
        return GradedSpace(group, tuple(dims))
    return GradedSpace(group, tuple(value))


def _group(ws: Workspace, d: dict, where: str) -> GradingGroup:
    if d.get("builtin") == "z2_cubed":
        return z2_cubed()
    orders = d.get("orders")
    if not isinstance(orders, list):
        raise InputError("a group needs its cyclic orders", location=f"{where}.orders")
    return GradingGroup(tuple(orders))


_COCHAINS = ("octonion", "super", "trivial")


def _cochain(ws: Workspace, d: dict, where: str) -> Cochain2:
    inline = d.get("cochain")
    builtin = d.get("builtin") or (inline if isinstance(inline, str) else None)
    if builtin == "octonion":
        return octonion_cochain()
    if builtin == "super":
        return super_cochain()
    if builtin is not None and builtin not in _COCHAINS:
        raise InputError(f"unknown cochain {builtin!r}", location=f"{where}.builtin")
    group = _group_ref(ws, d["group"], f"{where}.group")
    if builtin == "trivial":
        return trivial_cochain(group)
    source = inline if isinstance(inline, dict) else d
    entries = [
        (x, y, rational(value, f"{where}.entries[{k}]"))
        for k, (x, y, value) in enumerate(source.get("entries", []))
    ]
    F = cochain_from_entries(group, entries)
    if "parity" in source:
        F = dataclasses.replace(F, parity=tuple(source["parity"]))
    return F


def _cochain_of(ws: Workspace, d: dict, where: str) -> Cochain2 | None:
    """The cochain an algebra definition lives over; a bare group means the trivial cochain."""
    value = d.get("cochain")
    if value is None:
        return trivial_cochain(_group_ref(ws, d["group"], f"{where}.group")) if "group" in d else None
    if isinstance(value, str) and value in _COCHAINS and value not in ws.objects:
        return _cochain(ws, {"builtin": value, "group": d.get("group", [])}, f"{where}.cochain")
    if isinstance(value, dict) and "kind" not in value:
        return _cochain(ws, {**value, "group": value.get("group", d.get("group"))}, f"{where}.cochain")
    return ws.typed(value, Cochain2, f"{where}.cochain")


def _algebra(ws: Workspace, d: dict, where: str) -> AlgebraInC:
    builtin = d.get("builtin") or (d["algebra"] if isinstance(d.get("algebra"), str) else None)
    if builtin in ("octonion", "octonions"):
        return octonions()
    if "target_of" in d:
        return ws.typed(d["target_of"], AlgebraMap, f"{where}.target_of").target
    if builtin == "quotient":
        A = ws.typed(d["of"], AlgebraInC, f"{where}.of")
        gens = [element(A, g, f"{where}.generators[{k}]") for k, g in enumerate(d["generators"])]
        return quotient_algebra(A, generated_ideal(A, gens))[0]
    cochain = _cochain_of(ws, d, where)
    if builtin == "ground":
        return ground_algebra(cochain)
    if builtin == "product_of_fields":
        return product_of_fields(int(d["n"]), cochain)
    if builtin == "dual_numbers":
        return dual_numbers(cochain)
    if builtin == "twisted_group_algebra":
        if cochain is None:
            raise InputError("a twisted group algebra needs a cochain", location=f"{where}.cochain")
        return twisted_group_algebra(cochain.group, cochain, d.get("name", ""))
    if builtin is not None:
        raise InputError(f"unknown algebra {builtin!r}", location=f"{where}.algebra")
    if cochain is None:
        raise InputError("an explicit algebra needs a group or a cochain", location=where)
    carrier = _dims(cochain.group, d.get("carrier", d.get("dims")), f"{where}.carrier")
    n = carrier.total
    products = {
        (int(i), int(j)): vector(v, n, f"{where}.mult[{k}]")
        for k, (i, j, v) in enumerate(d.get("mult", d.get("products", [])))
    }
    return algebra_from_structure(cochain, carrier, products, vector(d["unit"], n, f"{where}.unit"), d.get("name", ""))


_MODULES = ("regular", "free", "ideal", "quotient", "dual", "base_change", "product", "o_from_degree_zero")


def _module(ws: Workspace, d: dict, where: str) -> ModuleInC:
    builtin = d.get("builtin")
    if builtin is None and d.get("module") in _MODULES and d["module"] not in ws.objects:
        builtin = d["module"]
    if builtin == "dual":
        M = ws.typed(d["of"], ModuleInC, f"{where}.of")
        return dual_module(M.algebra, M)
    if builtin == "base_change":
        u = ws.typed(d["map"], AlgebraMap, f"{where}.map")
        return base_change(u, ws.typed(d["of"], ModuleInC, f"{where}.of")).module
    if builtin == "product":
        factors = [ws.typed(M, ModuleInC, f"{where}.factors[{k}]") for k, M in enumerate(d["factors"])]
        return product_module(product_algebra([M.algebra for M in factors]), factors)
    if builtin == "o_from_degree_zero":
        A = ws.algebra(d, where, default=octonions)
        dim = int(d["dim"])
        isos = {
            tuple(g): rows(m, (dim, dim), f"{where}.isos[{k}]") for k, (g, m) in enumerate(d.get("isos", []))
        }
        return o_module_from_degree_zero(dim, isos, A)
    A = ws.algebra(d, where)
    if builtin == "regular":
        return regular_module(A)
    if builtin == "free":
        return free_rank(A, int(d["rank"])).module
    if builtin in ("ideal", "quotient"):
        gens = [element(A, g, f"{where}.generators[{k}]") for k, g in enumerate(d["generators"])]
        I = generated_ideal(A, gens)
        return ideal_module(I)[0] if builtin == "ideal" else quotient_module(regular_module(A), I.subspace)[0]
    if builtin is not None:
        raise InputError(f"unknown module {builtin!r}", location=f"{where}.module")
    carrier = _dims(A.group, d.get("carrier", d.get("dims")), f"{where}.carrier")
    n = carrier.total
    action = {(int(p), int(c)): vector(v, n, f"{where}.action[{k}]") for k, (p, c, v) in enumerate(d["action"])}
    return module_from_structure(A, carrier, action, d.get("name", ""))


def _module_map(ws: Workspace, d: dict, where: str) -> ModuleMap:
    builtin = d.get("builtin")
    if builtin in ("unit_mono", "unit_epi"):
        A = ws.algebra(d, where, default=ground_algebra)
        values = [element(A, v, f"{where}.values[{k}]") for k, v in enumerate(d["values"])]
        return unit_mono(A, values) if builtin == "unit_mono" else unit_epi(A, values)
    if builtin is not None:
        raise InputError(f"unknown module map {builtin!r}", location=f"{where}.builtin")
    source = ws.typed(d["source"], ModuleInC, f"{where}.source")
    target = ws.typed(d["target"], ModuleInC, f"{where}.target")
    shape = (target.carrier.total, source.carrier.total)
    return module_map(source, target, linalg.matrix(rows(d["matrix"], shape, f"{where}.matrix"), shape))


def _idempotent_projection(A: AlgebraInC, k: int, where: str) -> AlgebraMap:
    if not 0 <= k < A.dimension:
        raise InputError(f"no basis vector {k}", location=where)
    e = A.basis(k)
    if A.multiply(e, e) != e or not A.is_degree_zero(e):
        raise InputError(f"basis vector {k} is not an identity-degree idempotent", location=where)
    complement = tuple(u - v for u, v in zip(A.unit, e))
    return quotient_algebra(A, generated_ideal(A, [complement]), kind="projection")[1]


def _algebra_map(ws: Workspace, d: dict, where: str) -> AlgebraMap:
    builtin = d.get("builtin")
    if builtin is not None:
        A = ws.algebra(d, where)
        if builtin == "identity":
            return identity_algebra_map(A)
        if builtin == "localization":
            return localize(A, endo(A, element(A, d["element"], f"{where}.element"))).map
        if builtin == "projection":
            return _idempotent_projection(A, int(d["index"]), f"{where}.index")
        if builtin == "quotient":
            gens = [element(A, g, f"{where}.generators[{k}]") for k, g in enumerate(d["generators"])]
            return quotient_algebra(A, generated_ideal(A, gens))[1]
        raise InputError(f"unknown algebra map {builtin!r}", location=f"{where}.builtin")
    source = ws.typed(d["source"], AlgebraInC, f"{where}.source")
    target = ws.typed(d["target"], AlgebraInC, f"{where}.target")
    shape = (target.dimension, source.dimension)
    return algebra_map(source, target, linalg.matrix(rows(d["matrix"], shape, f"{where}.matrix"), shape))


def _covering(ws: Workspace, d: dict, where: str) -> Covering:
    base = ws.typed(d["base"], AlgebraInC, f"{where}.base")
    legs = tuple(ws.typed(leg, AlgebraMap, f"{where}.legs[{k}]") for k, leg in enumerate(d["legs"]))
    return Covering(base, legs)


def transition_value(ws: Workspace, value, where: str):
    if isinstance(value, list):
        return [[rational(v, f"{where}[{r}][{c}]") for c, v in enumerate(row)] for r, row in enumerate(value)]
    if isinstance(value, dict) or (isinstance(value, str) and value in ws.objects):
        return ws.typed(value, ModuleMap, where)
    return rational(value, where)


def _descent(ws: Workspace, d: dict, where: str) -> DescentDatum:
    if "covering" in d:
        cov = ws.typed(d["covering"], Covering, f"{where}.covering")
    else:
        cov = _covering(ws, d, where)
    given = d.get("locals") or ["regular"] * len(cov.legs)
    if len(given) != len(cov.legs):
        raise InputError(f"expected {len(cov.legs)} local modules", location=f"{where}.locals")
    locals_ = [
        regular_module(u.target) if ref == "regular" else ws.typed(ref, ModuleInC, f"{where}.locals[{k}]")
        for k, (ref, u) in enumerate(zip(given, cov.legs))
    ]
    transitions = {}
    for k, entry in enumerate(d.get("transitions", [])):
        i, j, value = entry
        transitions[int(i), int(j)] = transition_value(ws, value, f"{where}.transitions[{k}]")
    return descent_datum(cov, locals_, transitions)


def _point(ws: Workspace, d: dict, where: str) -> PointSpec:
    A = ws.algebra(d, where, default=ground_algebra)
    quotient = d.get("kind") == "quotient_point" or "epi" in d
    if "chart" in d:
        if quotient:
            raise InputError("quotient points are given by an epi", location=f"{where}.chart")
        coords = [element(A, c, f"{where}.coords[{k}]") for k, c in enumerate(d["coords"])]
        p = point_from_chart(A, len(coords), int(d["chart"]), coords)
        return PointSpec(A, p.n, p.line, p.mono, False)
    if "values" in d:
        values = [element(A, v, f"{where}.values[{k}]") for k, v in enumerate(d["values"])]
        f = unit_epi(A, values) if quotient else unit_mono(A, values)
        return PointSpec(A, len(values) - 1, regular_module(A), f, quotient)
    key = "epi" if quotient else "mono"
    f = ws.typed(d[key], ModuleMap, f"{where}.{key}")
    free = f.source if quotient else f.target
    line = f.target if quotient else f.source
    if "line" in d:
        line = ws.typed(d["line"], ModuleInC, f"{where}.line")
    n = int(d.get("n", free.carrier.total // A.dimension - 1))
    return PointSpec(A, n, line, f, quotient)


_BUILDERS: dict[str, Callable[[Workspace, dict, str], Any]] = {
    "group": _group,
    "cochain": _cochain,
    "algebra": _algebra,
    "module": _module,
    "module_map": _module_map,
    "algebra_map": _algebra_map,
    "covering": _covering,
    "descent": _descent,
    "point": _point,
    "quotient_point": _point,
}

_SHORTHANDS = {
    "algebra": ("octonion", "octonions", "ground", "dual_numbers"),
    "cochain": _COCHAINS,
}

_KINDS: dict[type, str] = {
    GradingGroup: "group",
    Cochain2: "cochain",
    AlgebraInC: "algebra",
    ModuleInC: "module",
    ModuleMap: "module_map",
    AlgebraMap: "algebra_map",
    Covering: "covering",
    DescentDatum: "descent",
}


def from_(document: dict | None) -> Workspace:
    return Workspace(document)


class Subject(NamedTuple):
    label: str
    object: Any
    task: dict
    workspace: Workspace


def subjects(document: dict, kind: str, command: str) -> list[Subject]:
    """Every task of ``command``; a bare definition is its own single task."""
    if not isinstance(document, dict):
        raise InputError("a document must be a JSON object")
    if "objects" not in document:
        ws = Workspace()
        return [Subject("document", ws.build(document, "document", kind), document, ws)]
    ws = Workspace(document)
    found = []
    for k, task in enumerate(ws.tasks):
        if task.get("command", command) != command:
            continue
        where = f"tasks[{k}]"
        found.append(Subject(task.get("name", where), ws.task_objects(task, kind, kind, where), task, ws))
    if not found:
        raise InputError(f"no {command} tasks in the document", location="tasks")
    return found


def to_vector(v) -> list[Fraction]:
    return [Fraction(x) for x in v]


def to_matrix(m) -> list[list[Fraction]]:
    return linalg.entries(m)


def to_module(M: ModuleInC) -> dict:
    return {"name": M.name, "algebra": M.algebra.name, "dims": list(M.carrier.dims)}


def to_algebra(A: AlgebraInC) -> dict:
    return {"name": A.name, "dims": list(A.carrier.dims), "unit": to_vector(A.unit)}


def to_coords(coords) -> list[list[Fraction]]:
    return [to_vector(c) for c in coords]


def to_point(p) -> dict:
    """ProjPoint or QuotPoint."""
    body = {"algebra": p.algebra.name, "n": p.n, "line": to_module(p.line)}
    if hasattr(p, "mono"):
        body["mono"] = to_matrix(p.mono.map.matrix)
        body["retraction"] = to_matrix(p.retraction.map.matrix)
    else:
        body["epi"] = to_matrix(p.epi.map.matrix)
        body["section"] = to_matrix(p.section.map.matrix)
    return body
