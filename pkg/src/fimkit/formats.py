"""Reading and writing presentation files and raw module dumps.

Presentation files are YAML (JSON also parses)::

    field: Q
    m: 2
    box: [3, 3]
    generators:
      - {shape: [0, 0], label: g}
    relations:
      - shape: [0, 1]
        terms:
          - {gen: g, injection: "[[],[2]]", coeff: 1}

A module dump (``format: module``) stores the generator matrices directly
and is how deliberately broken modules are shipped for ``fimkit check``.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import yaml

from . import combinat as cb
from .linalg import Field, Matrix
from .module import Presentation, Relation, TruncatedModule


class InputError(ValueError):
    """A malformed input file; carries a 1-based line and column when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None,
                 source: str = "<input>"):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        where = source if line is None else f"{source}:{line}:{column}"
        super().__init__(f"{where}: {message}")


class _Doc:
    """Parsed YAML plus the node tree, for locating errors."""

    def __init__(self, text: str, source: str):
        self.source = source
        try:
            self.root = yaml.compose(text)
            self.data = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            mark = getattr(exc, "problem_mark", None)
            raise InputError(f"not valid YAML/JSON: {getattr(exc, 'problem', exc)}",
                             mark.line + 1 if mark else None,
                             mark.column + 1 if mark else None, source) from None
        if not isinstance(self.data, dict):
            raise InputError("top level must be a mapping", 1, 1, source)

    def node(self, path):
        cur = self.root
        for key in path:
            if isinstance(cur, yaml.MappingNode):
                nxt = None
                for k, v in cur.value:
                    if k.value == key:
                        nxt = v
                        break
                if nxt is None:
                    return cur
                cur = nxt
            elif isinstance(cur, yaml.SequenceNode) and isinstance(key, int) and key < len(cur.value):
                cur = cur.value[key]
            else:
                return cur
        return cur

    def error(self, message: str, path=()) -> InputError:
        node = self.node(path) if self.root is not None else None
        if node is None:
            return InputError(message, source=self.source)
        return InputError(message, node.start_mark.line + 1, node.start_mark.column + 1, self.source)

    def get(self, key, required=True, default=None):
        if key not in self.data:
            if required:
                raise self.error(f"missing field {key!r}")
            return default
        return self.data[key]


def _shape(doc: _Doc, value, path, m: int | None = None) -> cb.Shape:
    try:
        s = cb.parse_shape(value)
    except ValueError as exc:
        raise doc.error(str(exc), path) from None
    if m is not None and len(s) != m:
        raise doc.error(f"shape {cb.format_shape(s)} does not have m = {m} entries", path)
    return s


def _field(doc: _Doc, value, override: Field | None) -> Field:
    if override is not None:
        return override
    try:
        return Field.parse(str(value))
    except ValueError as exc:
        raise doc.error(str(exc), ["field"]) from None


def _coeff(doc: _Doc, value, path) -> Fraction:
    try:
        if isinstance(value, bool):
            raise ValueError
        return Fraction(str(value)) if not isinstance(value, int) else Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise doc.error(f"bad coefficient {value!r}", path) from None


def read_text(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read file: {exc.strerror}", source=str(path)) from None


def is_module_dump(text: str) -> bool:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError:
        return False
    return isinstance(data, dict) and data.get("format") == "module"


def parse_presentation(text: str, source: str = "<input>", field: Field | None = None) -> Presentation:
    doc = _Doc(text, source)
    F = _field(doc, doc.get("field", required=field is None, default="Q"), field)
    m = doc.get("m")
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise doc.error("m must be a positive integer", ["m"])
    box = doc.get("box", required=False)
    box = _shape(doc, box, ["box"], m) if box is not None else None
    gens_raw = doc.get("generators", required=False, default=[]) or []
    if not isinstance(gens_raw, list):
        raise doc.error("generators must be a list", ["generators"])
    gens, labels = [], {}
    for k, g in enumerate(gens_raw):
        path = ["generators", k]
        if not isinstance(g, dict) or "shape" not in g:
            raise doc.error(f"generator {k} needs a shape", path)
        label = str(g.get("label", f"g{k}"))
        if label in labels:
            raise doc.error(f"duplicate generator label {label!r}", path)
        labels[label] = k
        gens.append((_shape(doc, g["shape"], path + ["shape"], m), label))
    rels_raw = doc.get("relations", required=False, default=[]) or []
    if not isinstance(rels_raw, list):
        raise doc.error("relations must be a list", ["relations"])
    rels = []
    for k, r in enumerate(rels_raw):
        path = ["relations", k]
        name = f"relation {k}"
        if not isinstance(r, dict) or "shape" not in r:
            raise doc.error(f"{name} needs a shape", path)
        shape = _shape(doc, r["shape"], path + ["shape"], m)
        terms = []
        for a, term in enumerate(r.get("terms") or []):
            tpath = path + ["terms", a]
            if not isinstance(term, dict):
                raise doc.error(f"{name}, term {a}: expected a mapping", tpath)
            gen = term.get("gen", 0)
            if isinstance(gen, str) and gen in labels:
                gi = labels[gen]
            elif isinstance(gen, int) and not isinstance(gen, bool) and 0 <= gen < len(gens):
                gi = gen
            else:
                raise doc.error(f"{name}, term {a}: unknown generator {gen!r}", tpath + ["gen"])
            try:
                f = cb.parse_injection(term.get("injection"), domain=gens[gi][0], codomain=shape)
            except ValueError as exc:
                raise doc.error(f"{name}, term {a}: {exc}", tpath + ["injection"]) from None
            terms.append((gi, f, _coeff(doc, term.get("coeff", 1), tpath + ["coeff"])))
        rels.append(Relation(shape, terms))
    name = str(doc.get("name", required=False, default=Path(source).stem))
    return Presentation(F, m, gens, rels, box, name)


def format_presentation(p: Presentation) -> str:
    data = {
        "name": p.name,
        "field": p.field.name,
        "m": p.m,
        "box": list(p.box) if p.box is not None else None,
        "generators": [{"shape": list(g), "label": lab} for g, lab in p.generators],
        "relations": [
            {"shape": list(r.shape),
             "terms": [{"gen": p.generators[gi][1], "injection": cb.format_injection(f),
                        "coeff": _fmt_scalar(c)} for gi, f, c in r.terms]}
            for r in p.relations
        ],
    }
    if data["box"] is None:
        del data["box"]
    return yaml.safe_dump(data, sort_keys=False, default_flow_style=None)


def _fmt_scalar(c):
    c = Fraction(str(c)) if not isinstance(c, Fraction) else c
    return int(c) if c.denominator == 1 else str(c)


# -- module dumps -------------------------------------------------------------------

def _matrix(doc: _Doc, rows, shape, F: Field, path) -> Matrix:
    r, c = shape
    if rows is None:
        rows = []
    if not isinstance(rows, list) or len(rows) != r or any(not isinstance(x, list) or len(x) != c for x in rows):
        raise doc.error(f"matrix must be {r} x {c}", path)
    try:
        vals = [[F(Fraction(str(x))) for x in row] for row in rows]
    except (ValueError, ZeroDivisionError):
        raise doc.error("bad matrix entry", path) from None
    if r == 0:
        return Matrix(0, c, None, F)
    return Matrix.from_rows(vals, F)


def parse_module(text: str, source: str = "<input>", field: Field | None = None) -> TruncatedModule:
    doc = _Doc(text, source)
    F = _field(doc, doc.get("field"), field)
    m = doc.get("m")
    if not isinstance(m, int) or m < 1:
        raise doc.error("m must be a positive integer", ["m"])
    box = _shape(doc, doc.get("box"), ["box"], m)
    dims_raw = doc.get("dims")
    dims = {}
    for k, entry in enumerate(dims_raw or []):
        s = _shape(doc, entry.get("shape"), ["dims", k], m)
        dims[s] = int(entry.get("dim", 0))
    for s in cb.boxed_shapes(box):
        dims.setdefault(s, 0)
    trans, incl = {}, {}
    for k, entry in enumerate(doc.get("trans", required=False, default=[]) or []):
        s = _shape(doc, entry.get("shape"), ["trans", k], m)
        key = (s, int(entry["factor"]), int(entry["j"]))
        trans[key] = _matrix(doc, entry.get("matrix"), (dims[s], dims[s]), F, ["trans", k])
    for k, entry in enumerate(doc.get("incl", required=False, default=[]) or []):
        s = _shape(doc, entry.get("shape"), ["incl", k], m)
        i = int(entry["direction"])
        up = cb.bump(s, i)
        incl[(s, i)] = _matrix(doc, entry.get("matrix"), (dims[up], dims[s]), F, ["incl", k])
    for s in cb.boxed_shapes(box):
        for i in range(m):
            for j in range(1, s[i]):
                if (s, i, j) not in trans:
                    raise doc.error(f"missing transposition ({i},{j}) at {cb.format_shape(s)}", ["trans"])
            if s[i] < box[i] and (s, i) not in incl:
                raise doc.error(f"missing inclusion {i} at {cb.format_shape(s)}", ["incl"])
    name = str(doc.get("name", required=False, default=Path(source).stem))
    return TruncatedModule(F, box, dims, trans, incl, name=name)


def format_module(V: TruncatedModule) -> str:
    def rows(A: Matrix):
        return [[_fmt_scalar(Fraction(str(x))) for x in row] for row in A.to_rows()]

    data = {
        "format": "module",
        "name": V.name,
        "field": V.field.name,
        "m": V.m,
        "box": list(V.box),
        "dims": [{"shape": list(n), "dim": V.dims[n]} for n in V.shapes()],
        "trans": [{"shape": list(n), "factor": i, "j": j, "matrix": rows(A)}
                  for (n, i, j), A in sorted(V.trans.items())],
        "incl": [{"shape": list(n), "direction": i, "matrix": rows(A)}
                 for (n, i), A in sorted(V.incl.items())],
    }
    return yaml.safe_dump(data, sort_keys=False, default_flow_style=None)
