"""JSON documents for models, Lie presentations, paths, forms and groups.

Rationals travel as ``"p/q"`` strings and complex numbers as ``[re, im]``.
Every loader raises :class:`InterchangeError` naming the offending location.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .bar import CoefficientCoalgebra, DGAModel
from .exactla import format_rational, rational
from .free_lie import FreeLieAlgebra, LiePresentation, PresentedLie, _standard_factorization
from .groups import FiniteGroup
from .relcomp import Irrep
from .transport import (
    ArcMove,
    ArcSegment,
    DlogForm,
    LieValuedOneForm,
    PiecewisePath,
    PolyForm,
    PolynomialSegment,
)

__all__ = [
    "InterchangeError",
    "read_json",
    "load_dga",
    "dump_dga",
    "load_presentation",
    "dump_presentation",
    "load_path",
    "dump_path",
    "load_forms",
    "dump_forms",
    "load_group",
    "dump_group",
    "load_irreps",
    "dump_irreps",
    "format_complex",
]


class InterchangeError(ValueError):
    """Malformed input document; the message starts with its location."""


def read_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InterchangeError(f"{path}: cannot read ({exc.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InterchangeError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def _need(doc: Any, key: str, where: str, kind: type | tuple = object):
    if not isinstance(doc, dict):
        raise InterchangeError(f"{where}: expected an object")
    if key not in doc:
        raise InterchangeError(f"{where}: missing field {key!r}")
    value = doc[key]
    if not isinstance(value, kind):
        raise InterchangeError(f"{where}.{key}: unexpected type {type(value).__name__}")
    return value


def _rat(value: Any, where: str) -> Fraction:
    if isinstance(value, float):
        raise InterchangeError(f"{where}: floats are not exact, write \"p/q\"")
    try:
        return rational(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise InterchangeError(f"{where}: {value!r} is not a rational") from None


def _complex(value: Any, where: str) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        return complex(value[0], value[1])
    raise InterchangeError(f"{where}: expected [re, im], got {value!r}")


def _real(value: Any, where: str) -> float:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    raise InterchangeError(f"{where}: expected a number, got {value!r}")


def _int(value: Any, where: str) -> int:
    if isinstance(value, int) and not isinstance(value, bool):
        return value
    raise InterchangeError(f"{where}: expected an integer, got {value!r}")


def _pair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def format_complex(z: complex, digits: int = 12) -> list[float]:
    """``[re, im]`` rounded to ``digits`` significant digits."""
    z = complex(z)
    return [float(f"{z.real:.{digits}g}"), float(f"{z.imag:.{digits}g}")]


def _combination(items: Any, where: str, labels: set) -> dict[str, Fraction]:
    if not isinstance(items, list):
        raise InterchangeError(f"{where}: expected a list of {{coeff, label}}")
    out: dict[str, Fraction] = {}
    for k, term in enumerate(items):
        loc = f"{where}[{k}]"
        label = _need(term, "label", loc, str)
        if label not in labels:
            raise InterchangeError(f"{loc}: unknown label {label!r}")
        out[label] = out.get(label, Fraction(0)) + _rat(_need(term, "coeff", loc), f"{loc}.coeff")
    return {l: c for l, c in out.items() if c}


def _dump_combination(vec) -> list[dict]:
    return [{"coeff": format_rational(c), "label": l} for l, c in vec.items() if c]


# -- groups -----------------------------------------------------------------


def _group_label(g) -> str:
    if isinstance(g, str):
        return g
    if isinstance(g, tuple):
        return "".join(str(x) for x in g) if all(0 <= x < 10 for x in g) else ",".join(map(str, g))
    return str(g)


def load_group(doc: Any, where: str = "group") -> FiniteGroup:
    """``{elements: [labels], table: [[product labels]]}`` with rows indexed by the left factor."""
    elements = _need(doc, "elements", where, list)
    table = _need(doc, "table", where, list)
    labels = [str(e) for e in elements]
    if len(set(labels)) != len(labels):
        raise InterchangeError(f"{where}.elements: labels are not distinct")
    if len(table) != len(labels) or any(not isinstance(r, list) or len(r) != len(labels) for r in table):
        raise InterchangeError(f"{where}.table: must be a {len(labels)}x{len(labels)} array")
    for i, row in enumerate(table):
        for j, x in enumerate(row):
            if str(x) not in labels:
                raise InterchangeError(f"{where}.table[{i}][{j}]: {x!r} is not an element")
    try:
        group = FiniteGroup.from_table(labels, [[str(x) for x in r] for r in table], name=str(doc.get("name", "")))
    except ValueError as exc:
        raise InterchangeError(f"{where}: {exc}") from None
    problems = group.validate()
    if problems:
        raise InterchangeError(f"{where}: {problems[0]}")
    return group


def dump_group(group: FiniteGroup) -> dict:
    lab = _group_label
    return {
        "name": group.name,
        "elements": [lab(g) for g in group.elements],
        "table": [[lab(group.mul(g, h)) for h in group.elements] for g in group.elements],
    }


def _relabel(group: FiniteGroup) -> tuple[FiniteGroup, dict]:
    """A copy of ``group`` on string labels and the translation map."""
    to_str = {g: _group_label(g) for g in group.elements}
    if all(isinstance(g, str) for g in group.elements):
        return group, to_str
    return load_group(dump_group(group)), to_str


def load_irreps(doc: Any, where: str = "irreps") -> list[Irrep]:
    """``{group, irreps: [{label, matrices: {element: [[p/q]]}}]}``."""
    group = load_group(_need(doc, "group", where), f"{where}.group")
    out = []
    for k, item in enumerate(_need(doc, "irreps", where, list)):
        loc = f"{where}.irreps[{k}]"
        mats = _need(item, "matrices", loc, dict)
        matrices = {}
        for g in group.elements:
            if g not in mats:
                raise InterchangeError(f"{loc}.matrices: missing element {g!r}")
            m = mats[g]
            if not isinstance(m, list) or not m or any(not isinstance(r, list) or len(r) != len(m) for r in m):
                raise InterchangeError(f"{loc}.matrices.{g}: expected a square matrix")
            matrices[g] = [[_rat(x, f"{loc}.matrices.{g}[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(m)]
        rep = Irrep(group, matrices, str(item.get("label", "")))
        if not rep.is_homomorphism():
            raise InterchangeError(f"{loc}: matrices do not define a homomorphism")
        out.append(rep)
    return out


def dump_irreps(irreps: list[Irrep]) -> dict:
    if not irreps:
        raise ValueError("nothing to dump")
    group = irreps[0].group
    lab = _group_label
    return {
        "group": dump_group(group),
        "irreps": [
            {
                "label": rep.label,
                "matrices": {
                    lab(g): [[format_rational(x) for x in row] for row in rep.matrices[g]] for g in group.elements
                },
            }
            for rep in irreps
        ],
    }


# -- DGA models ---------------------------------------------------------------


def load_dga(doc: Any, where: str = "dga") -> tuple[DGAModel, CoefficientCoalgebra | None]:
    basis_doc = _need(doc, "basis", where, list)
    basis = []
    for k, item in enumerate(basis_doc):
        loc = f"{where}.basis[{k}]"
        basis.append((_need(item, "label", loc, str), _int(_need(item, "degree", loc), f"{loc}.degree")))
    labels = {l for l, _ in basis}
    if len(labels) != len(basis):
        raise InterchangeError(f"{where}.basis: labels are not distinct")
    unit = _need(doc, "unit", where, str)
    if unit not in labels:
        raise InterchangeError(f"{where}.unit: {unit!r} is not a basis label")
    differential = {}
    for label, items in (doc.get("d") or {}).items():
        if label not in labels:
            raise InterchangeError(f"{where}.d: unknown label {label!r}")
        differential[label] = _combination(items, f"{where}.d.{label}", labels)
    product = {}
    for key, items in (doc.get("product") or {}).items():
        parts = key.split("*")
        if len(parts) != 2 or any(p not in labels for p in parts):
            raise InterchangeError(f"{where}.product: key {key!r} is not of the form \"a*b\" with basis labels")
        product[parts[0], parts[1]] = _combination(items, f"{where}.product.{key}", labels)
    model = DGAModel(basis, unit, differential, product, name=str(doc.get("name", "")))
    coal = None
    if doc.get("coefficients") is not None:
        cdoc = doc["coefficients"]
        cwhere = f"{where}.coefficients"
        group = load_group(_need(cdoc, "group", cwhere), f"{cwhere}.group")
        action = {}
        for g, table in (cdoc.get("action") or {}).items():
            if g not in group:
                raise InterchangeError(f"{cwhere}.action: {g!r} is not a group element")
            if not isinstance(table, dict):
                raise InterchangeError(f"{cwhere}.action.{g}: expected an object")
            rows = {}
            for label, items in table.items():
                if label not in labels:
                    raise InterchangeError(f"{cwhere}.action.{g}: unknown label {label!r}")
                rows[label] = _combination(items, f"{cwhere}.action.{g}.{label}", labels)
            action[g] = rows
        coal = CoefficientCoalgebra(group, action)
    return model, coal


def dump_dga(model: DGAModel, coal: CoefficientCoalgebra | None = None) -> dict:
    doc: dict = {
        "name": model.name,
        "basis": [{"label": l, "degree": d} for l, d in model.basis],
        "unit": model.unit,
        "d": {l: _dump_combination(v) for l, v in model._d.items() if v},
        "product": {f"{a}*{b}": _dump_combination(v) for (a, b), v in model._prod.items() if v},
    }
    if coal is not None:
        group, lab = _relabel(coal.group)
        doc["coefficients"] = {
            "group": dump_group(group),
            "action": {
                lab[g]: {l: _dump_combination(v) for l, v in rows.items()} for g, rows in coal.action.items()
            },
        }
    return doc


# -- Lie presentations --------------------------------------------------------


def _nested(free: FreeLieAlgebra, word) -> Any:
    if len(word) == 1:
        return free.names[word[0]]
    u, v = _standard_factorization(word)
    return [_nested(free, u), _nested(free, v)]


def _lie_terms(items: Any, where: str, parse) -> list:
    if not isinstance(items, list):
        raise InterchangeError(f"{where}: expected a term list")
    out = []
    for k, term in enumerate(items):
        loc = f"{where}[{k}]"
        coeff = _rat(_need(term, "coefficient", loc), f"{loc}.coefficient")
        try:
            value = parse(_need(term, "word", loc))
        except (KeyError, ValueError) as exc:
            raise InterchangeError(f"{loc}.word: {exc}") from None
        out.append((coeff, value))
    return out


def load_presentation(doc: Any, where: str = "lie", truncation: int | None = None) -> LiePresentation:
    gens = []
    for k, g in enumerate(_need(doc, "generators", where, list)):
        loc = f"{where}.generators[{k}]"
        gens.append((_need(g, "name", loc, str), _int(_need(g, "degree", loc), f"{loc}.degree")))
    N = truncation if truncation is not None else _int(_need(doc, "truncation", where), f"{where}.truncation")
    try:
        free = FreeLieAlgebra(gens, N)
    except ValueError as exc:
        raise InterchangeError(f"{where}: {exc}") from None
    relations = []
    for k, rel in enumerate(doc.get("relations") or []):
        elem = free.zero()
        for c, e in _lie_terms(rel, f"{where}.relations[{k}]", free.from_expression):
            elem = elem + e * c
        relations.append(elem)
    return LiePresentation(tuple(gens), tuple(relations), N)


def dump_presentation(p: LiePresentation) -> dict:
    free = p.free_algebra()
    rels = []
    for rel in p.relations:
        if rel.algebra.names != free.names:
            raise ValueError("relation lives in a different free algebra")
        rels.append([{"coefficient": format_rational(c), "word": _nested(rel.algebra, w)} for w, c in rel.sorted_terms()])
    return {
        "generators": [{"name": n, "degree": d} for n, d in p.generators],
        "relations": rels,
        "truncation": p.truncation,
    }


# -- paths and forms ----------------------------------------------------------


def load_path(doc: Any, where: str = "path") -> PiecewisePath:
    dim = _int(_need(doc, "dimension", where), f"{where}.dimension")
    segments = []
    for k, seg in enumerate(_need(doc, "segments", where, list)):
        loc = f"{where}.segments[{k}]"
        kind = _need(seg, "kind", loc, str)
        if kind == "polynomial":
            coeffs = _need(seg, "coeffs", loc, list)
            if len(coeffs) != dim:
                raise InterchangeError(f"{loc}.coeffs: expected {dim} coordinate lists")
            rows = []
            for j, row in enumerate(coeffs):
                if not isinstance(row, list) or not row:
                    raise InterchangeError(f"{loc}.coeffs[{j}]: expected a nonempty list")
                rows.append([_complex(c, f"{loc}.coeffs[{j}][{i}]") for i, c in enumerate(row)])
            segments.append(PolynomialSegment(rows))
        elif kind == "arc":
            if "base" in seg:
                base = [_complex(c, f"{loc}.base[{j}]") for j, c in enumerate(_need(seg, "base", loc, list))]
            elif segments:
                base = list(segments[-1].end)
            else:
                raise InterchangeError(f"{loc}: the first arc needs a base point")
            if len(base) != dim:
                raise InterchangeError(f"{loc}.base: expected {dim} coordinates")
            move_docs = seg["moves"] if "moves" in seg else [seg]
            moves = []
            for j, mv in enumerate(move_docs):
                mloc = f"{loc}.moves[{j}]" if "moves" in seg else loc
                moves.append(
                    ArcMove(
                        _int(_need(mv, "coordinate", mloc), f"{mloc}.coordinate"),
                        _complex(_need(mv, "center", mloc), f"{mloc}.center"),
                        _real(_need(mv, "radius", mloc), f"{mloc}.radius"),
                        _real(_need(mv, "theta0", mloc), f"{mloc}.theta0"),
                        _real(_need(mv, "theta1", mloc), f"{mloc}.theta1"),
                    )
                )
            try:
                segments.append(ArcSegment(base, moves))
            except ValueError as exc:
                raise InterchangeError(f"{loc}: {exc}") from None
        else:
            raise InterchangeError(f"{loc}.kind: unknown segment kind {kind!r}")
    try:
        return PiecewisePath(segments)
    except ValueError as exc:
        raise InterchangeError(f"{where}: {exc}") from None


def dump_path(path: PiecewisePath) -> dict:
    segs = []
    for seg in path.segments:
        if isinstance(seg, PolynomialSegment):
            segs.append({"kind": "polynomial", "coeffs": [[_pair(c) for c in row] for row in seg.coeffs]})
        else:
            moves = [
                {
                    "coordinate": mv.coordinate,
                    "center": _pair(mv.center),
                    "radius": mv.radius,
                    "theta0": mv.theta0,
                    "theta1": mv.theta1,
                }
                for mv in seg.moves
            ]
            doc = {"kind": "arc", "base": [_pair(c) for c in seg.base]}
            if len(moves) == 1:
                doc.update(moves[0])
            else:
                doc["moves"] = moves
            segs.append(doc)
    return {"dimension": path.dimension, "segments": segs}


def _scalar_form(doc: Any, where: str, dimension: int | None):
    kind = _need(doc, "kind", where, str)
    if kind == "dlog":
        aff = _need(doc, "affine", where, dict)
        const = _complex(_need(aff, "constant", f"{where}.affine"), f"{where}.affine.constant")
        grad = [_complex(c, f"{where}.affine.gradient[{j}]") for j, c in enumerate(_need(aff, "gradient", f"{where}.affine", list))]
        try:
            return DlogForm(const, grad)
        except ValueError as exc:
            raise InterchangeError(f"{where}: {exc}") from None
    if kind == "poly":
        dim = dimension if dimension is not None else doc.get("dimension")
        if dim is None:
            raise InterchangeError(f"{where}: polynomial forms need a dimension")
        coeffs = {}
        for j, term in enumerate(_need(doc, "coefficients", where, list)):
            loc = f"{where}.coefficients[{j}]"
            exp = _need(term, "exponent", loc, list)
            if len(exp) != dim or any(not isinstance(e, int) or e < 0 for e in exp):
                raise InterchangeError(f"{loc}.exponent: expected {dim} nonnegative integers")
            coeffs[tuple(exp)] = coeffs.get(tuple(exp), 0) + _complex(_need(term, "value", loc), f"{loc}.value")
        try:
            return PolyForm(dim, _int(_need(doc, "coordinate", where), f"{where}.coordinate"), coeffs)
        except ValueError as exc:
            raise InterchangeError(f"{where}: {exc}") from None
    raise InterchangeError(f"{where}.kind: unknown form kind {kind!r}")


def _dump_scalar_form(w) -> dict:
    if isinstance(w, DlogForm):
        return {"kind": "dlog", "affine": {"constant": _pair(w.constant), "gradient": [_pair(c) for c in w.gradient]}}
    return {
        "kind": "poly",
        "dimension": w.dimension,
        "coordinate": w.coordinate,
        "coefficients": [{"exponent": list(e), "value": _pair(c)} for e, c in sorted(w.coefficients.items())],
    }


def load_forms(doc: Any, lie: PresentedLie, where: str = "form", dimension: int | None = None) -> LieValuedOneForm:
    """A list of scalar forms, each carrying a ``lie`` term list in ``lie``'s generators."""
    if isinstance(doc, dict) and "forms" in doc:
        dimension = doc.get("dimension", dimension)
        doc = doc["forms"]
    if not isinstance(doc, list):
        raise InterchangeError(f"{where}: expected a list of forms")
    terms = []
    for k, item in enumerate(doc):
        loc = f"{where}[{k}]"
        w = _scalar_form(item, loc, dimension)
        vec: dict[int, Fraction] = {}
        for c, v in _lie_terms(_need(item, "lie", loc), f"{loc}.lie", lie.element):
            for i, x in v.items():
                vec[i] = vec.get(i, Fraction(0)) + c * x
        terms.append((w, {i: x for i, x in vec.items() if x}))
    try:
        return LieValuedOneForm(lie, terms)
    except ValueError as exc:
        raise InterchangeError(f"{where}: {exc}") from None


def dump_forms(omega: LieValuedOneForm) -> list[dict]:
    lie = omega.lie
    if not isinstance(lie, PresentedLie):
        raise ValueError("forms can only be written against a presented Lie algebra")
    out = []
    for w, vec in omega.terms:
        doc = _dump_scalar_form(w)
        doc["lie"] = [
            {"coefficient": format_rational(c), "word": _nested(lie.free, lie.lifts[i])} for i, c in sorted(vec.items())
        ]
        out.append(doc)
    return out


def parse_json_text(text: str, where: str = "<string>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InterchangeError(f"{where}:{exc.lineno}:{exc.colno}: {exc.msg}") from None

