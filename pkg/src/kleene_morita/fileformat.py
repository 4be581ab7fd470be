"""Plain-text structure files.

A file is a sequence of sections ``<kind> <name> { key: value ; ... }``.
Values are integers, names, or JSON-style lists. Kinds:

    kleene_algebra  elements zero one add mul star [labels] | builtin
    module          over_left? over_right? size zero add left_action? right_action? [labels basis_left basis_right]
    hom             from to map
    idempotent      in index
    pure_tensor     left right module table
    witness         K S P Q PQ QP u u_inv v v_inv pq_tensor qp_tensor [idempotent]

Parsing checks dimensions and references only; law checks happen in ``verify``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    DEFAULT_BOUNDS,
    AlgebraHomomorphism,
    Bounds,
    FiniteKleeneAlgebra,
    MatrixAlgebra,
    is_builtin_expr,
    resolve_algebra,
)
from .errors import KleeneError, ParseError
from .module import FiniteKleeneModule, ModuleHomomorphism, regular_module

KINDS = ("kleene_algebra", "module", "hom", "idempotent", "pure_tensor", "witness")
FIELDS = {
    "kleene_algebra": {"elements", "zero", "one", "add", "mul", "star", "labels", "builtin"},
    "module": {"over_left", "over_right", "size", "zero", "add", "left_action", "right_action", "labels",
               "basis_left", "basis_right"},
    "hom": {"from", "to", "map"},
    "idempotent": {"in", "index"},
    "pure_tensor": {"left", "right", "module", "table"},
    "witness": {"K", "S", "P", "Q", "PQ", "QP", "u", "u_inv", "v", "v_inv", "pq_tensor", "qp_tensor", "idempotent"},
}
_HEADER = re.compile(r"([A-Za-z_]\w*)\s+([^\s{}]+)\s*\{")


@dataclass
class PureTensorEntry:
    left: str
    right: str
    module: str
    table: np.ndarray


@dataclass
class WitnessEntry:
    refs: dict


@dataclass
class Catalog:
    algebras: dict = field(default_factory=dict)
    modules: dict = field(default_factory=dict)
    homs: dict = field(default_factory=dict)
    idempotents: dict = field(default_factory=dict)
    tensors: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    order: list = field(default_factory=list)

    def lookup(self, name: str):
        for kind, table in (("kleene_algebra", self.algebras), ("module", self.modules), ("hom", self.homs),
                            ("idempotent", self.idempotents), ("pure_tensor", self.tensors),
                            ("witness", self.witnesses)):
            if name in table:
                return kind, table[name]
        raise KeyError(name)


def _split_fields(body: str, line0: int):
    """Split on ';' or newlines outside brackets and strings; yields (line, text)."""
    depth, in_str = 0, False
    line, start, start_line = line0, 0, line0
    for i, ch in enumerate(body):
        if ch == '"':
            in_str = not in_str
        elif not in_str and ch in "[]":
            depth += 1 if ch == "[" else -1
        split = not in_str and depth == 0 and ch in ";\n"
        if split:
            text = body[start:i].strip()
            if text:
                yield start_line, text
            start = i + 1
        if ch == "\n":
            line += 1
        if split:
            start_line = line
    text = body[start:].strip()
    if text:
        yield start_line, text


_BRACE = re.compile(r'["{}]')


def _close_brace(text: str, i: int) -> int:
    """Index just past the brace matching an already-open one, skipping strings."""
    depth, in_str = 1, False
    for m in _BRACE.finditer(text, i):
        ch = m.group()
        if ch == '"':
            in_str = not in_str
        elif not in_str:
            depth += 1 if ch == "{" else -1
            if depth == 0:
                return m.end()
    return -1


def _value(raw: str, line: int, section: str):
    raw = raw.strip()
    if raw.startswith("["):
        try:
            return json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad list: {exc.msg}", line, section) from None
    if re.fullmatch(r"-?\d+", raw):
        return int(raw)
    return raw


def _sections(text: str):
    pos = 0
    while True:
        m = _HEADER.search(text, pos)
        rest = text[pos:m.start() if m else len(text)]
        stray = re.sub(r"#[^\n]*", "", rest).strip()
        if stray:
            line = text.count("\n", 0, pos + rest.index(stray.split()[0])) + 1
            raise ParseError(f"unexpected text {stray.split()[0]!r}", line)
        if not m:
            return
        kind, name = m.group(1), m.group(2)
        line = text.count("\n", 0, m.start()) + 1
        if kind not in KINDS:
            raise ParseError(f"unknown keyword {kind!r}", line, name)
        i = _close_brace(text, m.end())
        if i < 0:
            raise ParseError("unterminated section", line, name)
        body = text[m.end():i - 1]
        body_line = line + text.count("\n", m.start(), m.end())
        fields = {}
        for fl, item in _split_fields(body, body_line):
            if item.startswith("#"):
                continue
            if ":" not in item:
                raise ParseError(f"expected 'key: value', got {item!r}", fl, name)
            key, raw = item.split(":", 1)
            key = key.strip()
            if key not in FIELDS[kind]:
                raise ParseError(f"unknown keyword {key!r} in {kind}", fl, name)
            fields[key] = (_value(raw, fl, name), fl)
        yield kind, name, line, fields
        pos = i


def _need(fields, key, name, line):
    if key not in fields:
        raise ParseError(f"missing field {key!r}", line, name)
    return fields[key]


def _table_shape(value, shape, what, name, line):
    try:
        arr = np.array(value, dtype=np.int64)
    except (TypeError, ValueError):
        raise ParseError(f"{what} is not a rectangular integer table", line, name) from None
    if arr.shape != shape:
        raise ParseError(f"{what} has shape {arr.shape}, expected {shape}", line, name)
    return arr


def parse_structure_file(text: str, bounds: Bounds = DEFAULT_BOUNDS) -> Catalog:
    cat = Catalog()
    seen = set()
    for kind, name, line, f in _sections(text):
        if name in seen:
            raise ParseError(f"duplicate name {name!r}", line, name)
        seen.add(name)
        try:
            _build(cat, kind, name, line, f, bounds)
        except ParseError:
            raise
        except KleeneError as exc:
            raise ParseError(str(exc), line, name) from None
        cat.order.append((kind, name))
    return cat


def _ref(cat: Catalog, table: dict, key, fields, name, line, what):
    ref, fl = _need(fields, key, name, line)
    if ref not in table:
        raise ParseError(f"dangling reference {ref!r} ({what})", fl, name)
    return table[ref]


def _build(cat: Catalog, kind, name, line, f, bounds):
    if kind == "kleene_algebra":
        if "builtin" in f:
            expr, fl = f["builtin"]
            if not is_builtin_expr(str(expr)):
                raise ParseError(f"unknown builtin {expr!r}", fl, name)
            cat.algebras[name] = resolve_algebra(str(expr), bounds)
            return
        n, fl = _need(f, "elements", name, line)
        if not isinstance(n, int) or n < 1:
            raise ParseError("elements must be a positive integer", fl, name)
        tabs = {}
        for key, shape in (("add", (n, n)), ("mul", (n, n)), ("star", (n,))):
            v, fl = _need(f, key, name, line)
            tabs[key] = _table_shape(v, shape, key, name, fl)
        labels = f.get("labels", (None, 0))[0]
        cat.algebras[name] = FiniteKleeneAlgebra(name, tabs["add"], tabs["mul"], tabs["star"],
                                                 _need(f, "zero", name, line)[0], _need(f, "one", name, line)[0],
                                                 labels=labels)
    elif kind == "module":
        left = _ref(cat, cat.algebras, "over_left", f, name, line, "algebra") if "over_left" in f else None
        right = _ref(cat, cat.algebras, "over_right", f, name, line, "algebra") if "over_right" in f else None
        if left is None and right is None:
            raise ParseError("module needs over_left and/or over_right", line, name)
        n, fl = _need(f, "size", name, line)
        add = _table_shape(_need(f, "add", name, line)[0], (n, n), "add", name, _need(f, "add", name, line)[1])
        la = ra = None
        if left is not None:
            v, fl = _need(f, "left_action", name, line)
            la = _table_shape(v, (left.size, n), "left_action", name, fl)
        if right is not None:
            v, fl = _need(f, "right_action", name, line)
            ra = _table_shape(v, (n, right.size), "right_action", name, fl)
        basis = {}
        for side in ("left", "right"):
            if f"basis_{side}" in f:
                basis[side] = f[f"basis_{side}"][0]
        labels = f.get("labels", (None, 0))[0]
        cat.modules[name] = FiniteKleeneModule(name, add, _need(f, "zero", name, line)[0], left, la, right, ra,
                                               labels=labels, basis=basis)
    elif kind == "hom":
        src, fl = _need(f, "from", name, line)
        dst, _ = _need(f, "to", name, line)
        mp, ml = _need(f, "map", name, line)
        if src in cat.algebras and dst in cat.algebras:
            A, B = cat.algebras[src], cat.algebras[dst]
            _table_shape(mp, (A.size,), "map", name, ml)
            cat.homs[name] = AlgebraHomomorphism(A, B, tuple(mp))
        elif src in cat.modules and dst in cat.modules:
            M, N = cat.modules[src], cat.modules[dst]
            _table_shape(mp, (M.size,), "map", name, ml)
            cat.homs[name] = ModuleHomomorphism(M, N, tuple(mp))
        else:
            missing = src if src not in cat.algebras and src not in cat.modules else dst
            raise ParseError(f"dangling reference {missing!r}", fl, name)
    elif kind == "idempotent":
        A = _ref(cat, cat.algebras, "in", f, name, line, "algebra")
        idx, fl = _need(f, "index", name, line)
        if not isinstance(idx, int) or not 0 <= idx < A.size:
            raise ParseError("index outside the algebra", fl, name)
        cat.idempotents[name] = (A, idx)
    elif kind == "pure_tensor":
        L = _ref(cat, cat.modules, "left", f, name, line, "module")
        R = _ref(cat, cat.modules, "right", f, name, line, "module")
        T = _ref(cat, cat.modules, "module", f, name, line, "module")
        v, fl = _need(f, "table", name, line)
        tab = _table_shape(v, (L.size, R.size), "table", name, fl)
        if tab.size and (tab.min() < 0 or tab.max() >= T.size):
            raise ParseError("table entries outside the tensor module", fl, name)
        cat.tensors[name] = PureTensorEntry(f["left"][0], f["right"][0], f["module"][0], tab)
    elif kind == "witness":
        refs = {}
        for key, table in (("K", cat.algebras), ("S", cat.algebras), ("P", cat.modules), ("Q", cat.modules),
                           ("PQ", cat.modules), ("QP", cat.modules), ("u", cat.homs), ("u_inv", cat.homs),
                           ("v", cat.homs), ("v_inv", cat.homs), ("pq_tensor", cat.tensors),
                           ("qp_tensor", cat.tensors)):
            _ref(cat, table, key, f, name, line, key)
            refs[key] = f[key][0]
        if "idempotent" in f:
            _ref(cat, cat.idempotents, "idempotent", f, name, line, "idempotent")
            refs["idempotent"] = f["idempotent"][0]
        cat.witnesses[name] = WitnessEntry(refs)


# ---------------------------------------------------------------- writing

def _rows(arr) -> str:
    arr = np.asarray(arr)
    if arr.ndim == 1:
        return "[" + ",".join(str(int(x)) for x in arr) + "]"
    return "[" + ",\n    ".join(_rows(r) for r in arr) + "]"


def _labels(labels) -> str:
    return json.dumps(list(labels), ensure_ascii=False)


class StructureWriter:
    """Collects sections in order; algebras and modules are written once each."""

    def __init__(self):
        self.parts: list[str] = []
        self.names: dict = {}
        self._written: list = []     # keeps id() keys valid

    def algebra(self, A: FiniteKleeneAlgebra, name: str | None = None) -> str:
        key = ("alg", A.fingerprint)
        if key in self.names:
            return self.names[key]
        name = name or _safe(A.name)
        self.names[key] = name
        if is_builtin_expr(A.name):
            try:
                same = resolve_algebra(A.name) == A
            except KleeneError:
                same = False
            if same:
                self.parts.append(f"kleene_algebra {name} {{ builtin: {A.name} }}")
                return name
        if isinstance(A, MatrixAlgebra) and not A.materializable:
            raise KleeneError(f"cannot serialize {A.name}: tables exceed the bound")
        self.parts.append(
            f"kleene_algebra {name} {{\n  elements: {A.size}\n  zero: {A.zero}\n  one: {A.one}\n"
            f"  add: {_rows(A.add)}\n  mul: {_rows(A.mul)}\n  star: {_rows(A.star)}\n"
            f"  labels: {_labels(A.labels)}\n}}"
        )
        return name

    def module(self, M: FiniteKleeneModule, name: str | None = None) -> str:
        key = ("mod", id(M))
        if key in self.names:
            return self.names[key]
        name = name or _safe(M.name)
        lines = [f"module {name} {{"]
        if M.left is not None:
            lines.append(f"  over_left: {self.algebra(M.left)}")
        if M.right is not None:
            lines.append(f"  over_right: {self.algebra(M.right)}")
        lines += [f"  size: {M.size}", f"  zero: {M.zero}", f"  add: {_rows(M.add)}"]
        if M.left is not None:
            lines.append(f"  left_action: {_rows(M.left_action)}")
        if M.right is not None:
            lines.append(f"  right_action: {_rows(M.right_action)}")
        for side, b in sorted(M.basis.items()):
            lines.append(f"  basis_{side}: {_rows(b)}")
        lines.append(f"  labels: {_labels(M.labels)}")
        lines.append("}")
        self.names[key] = name
        self._written.append(M)
        self.parts.append("\n".join(lines))
        return name

    def hom(self, name: str, src: str, dst: str, mapping) -> str:
        self.parts.append(f"hom {name} {{ from: {src} ; to: {dst} ; map: {_rows(mapping)} }}")
        return name

    def idempotent(self, name: str, alg: str, index: int) -> str:
        self.parts.append(f"idempotent {name} {{ in: {alg} ; index: {int(index)} }}")
        return name

    def pure_tensor(self, name: str, left: str, right: str, module: str, table) -> str:
        self.parts.append(
            f"pure_tensor {name} {{\n  left: {left}\n  right: {right}\n  module: {module}\n  table: {_rows(table)}\n}}"
        )
        return name

    def witness(self, name: str, refs: dict) -> str:
        body = "\n".join(f"  {k}: {v}" for k, v in refs.items())
        self.parts.append(f"witness {name} {{\n{body}\n}}")
        return name

    def text(self, header: str | None = None) -> str:
        head = [f"# {line}" for line in header.splitlines()] if header else []
        return "\n\n".join(["\n".join(head)] + self.parts if head else self.parts) + "\n"


def _safe(name: str) -> str:
    return re.sub(r"[\s{}]+", "_", name)


def write_witness(W, writer: StructureWriter | None = None) -> StructureWriter:
    """Serialize a MoritaWitness with both tensors and all four maps."""
    w = writer or StructureWriter()
    K = w.algebra(W.K, "K")
    S = w.algebra(W.S, "S")
    P = w.module(W.P, "P")
    Q = w.module(W.Q, "Q")
    PQ = w.module(W.PQ.module, "PQ")
    QP = w.module(W.QP.module, "QP")
    Sreg = "S_reg"
    Kreg = "K_reg"
    w.module(regular_module(W.S, "bi"), Sreg)
    w.module(regular_module(W.K, "bi"), Kreg)
    w.pure_tensor("pq_tensor", P, Q, PQ, W.PQ.pure)
    w.pure_tensor("qp_tensor", Q, P, QP, W.QP.pure)
    w.hom("u", PQ, Sreg, W.u)
    w.hom("v", QP, Kreg, W.v)
    w.hom("u_inv", Sreg, PQ, W.u_inv if W.u_inv is not None else [0] * W.S.size)
    w.hom("v_inv", Kreg, QP, W.v_inv if W.v_inv is not None else [0] * W.K.size)
    refs = {"K": K, "S": S, "P": P, "Q": Q, "PQ": PQ, "QP": QP, "u": "u", "u_inv": "u_inv", "v": "v",
            "v_inv": "v_inv", "pq_tensor": "pq_tensor", "qp_tensor": "qp_tensor"}
    if W.idempotent is not None and W.idempotent.algebra is not W.S:
        alg = w.algebra(W.idempotent.algebra, "M")
        refs["idempotent"] = w.idempotent("e", alg, W.idempotent.index)
    w.witness("W", refs)
    return w
