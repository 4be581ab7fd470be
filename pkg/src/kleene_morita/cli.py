"""Command line interface: ``kmw <group> <command> ...``.

Structures are named either by builtin expressions or by ``file[:name]``:

    algebras   bool2, rel(2), M2(bool2), file.ks:K
    modules    reg(A) left(A) right(A) free(A,r[,side]) col(A,n) row(A,n) E(<hom>) file.ks:M
    homs       id(A) unit(A) scalar(A,n) file.ks:f
"""

from __future__ import annotations

import argparse
import itertools
import sys
import time
from pathlib import Path

import numpy as np

from .algebra import (
    AlgebraHomomorphism,
    Bounds,
    bool2,
    check_kleene_axioms,
    find_algebra_isomorphism,
    is_builtin_expr,
    MatrixAlgebra,
    matrix_algebra,
    resolve_algebra,
    star_saturate,
)
from .congruence import quotient_module
from .errors import KleeneError, ParseError, ValidationError
from .fileformat import StructureWriter, parse_structure_file, write_witness
from .module import (
    ModuleHomomorphism,
    check_module_axioms,
    dual_module,
    free_coordinates,
    free_module,
    hom_module,
    hom_set,
    module_iso_search,
    regular_module,
)
from .morita import (
    check_category_equivalence,
    check_composition_law,
    column_module,
    corner_algebra,
    full_idempotents,
    homomorphism_module,
    lift_semiring_morita,
    matrix_morita_witness,
    parse_idempotent,
    row_module,
    scalar_embedding,
)
from .report import Report
from .tensor import check_adjunction, check_monoid_laws, check_tensor, tensor_product
from .verify import FULL_INDUCTION_MAX, verify_catalog


class UsageError(KleeneError):
    pass


# ---------------------------------------------------------------- resolving names

class Resolver:
    def __init__(self, bounds: Bounds):
        self.bounds = bounds
        self.files: dict = {}

    def _file(self, expr: str):
        path, _, name = expr.partition(":")
        p = Path(path)
        if not p.is_file():
            return None
        if path not in self.files:
            self.files[path] = parse_structure_file(p.read_text(), self.bounds)
        return self.files[path], name

    def _from_file(self, expr: str, table_name: str, what: str):
        got = self._file(expr)
        if got is None:
            return None
        cat, name = got
        table = getattr(cat, table_name)
        if not name:
            if len(table) != 1:
                raise UsageError(f"{expr}: name one of {sorted(table)} as file:name")
            name = next(iter(table))
        if name not in table:
            raise UsageError(f"{expr}: no {what} named {name!r}")
        return table[name]

    def algebra(self, expr: str):
        if is_builtin_expr(expr):
            return resolve_algebra(expr, self.bounds)
        found = self._from_file(expr, "algebras", "algebra")
        if found is None:
            raise UsageError(f"unknown algebra {expr!r}")
        return found

    def module(self, expr: str):
        fname, args = _call(expr)
        if fname in ("reg", "left", "right") and len(args) == 1:
            return regular_module(self.algebra(args[0]), {"reg": "bi"}.get(fname, fname))
        if fname == "free" and len(args) in (2, 3):
            return free_module(self.algebra(args[0]), int(args[1]), args[2] if len(args) == 3 else "left",
                               self.bounds)
        if fname == "col" and len(args) == 2:
            return column_module(self.algebra(args[0]), int(args[1]), bounds=self.bounds)
        if fname == "row" and len(args) == 2:
            return row_module(self.algebra(args[0]), int(args[1]), bounds=self.bounds)[0]
        if fname == "E" and len(args) == 1:
            return homomorphism_module(self.hom(args[0]), self.bounds).module
        found = self._from_file(expr, "modules", "module")
        if found is None:
            raise UsageError(f"unknown module {expr!r}")
        return found

    def hom(self, expr: str) -> AlgebraHomomorphism:
        fname, args = _call(expr)
        if fname == "id" and len(args) == 1:
            return AlgebraHomomorphism.identity(self.algebra(args[0]))
        if fname == "unit" and len(args) == 1:
            A = self.algebra(args[0])
            return AlgebraHomomorphism(bool2(), A, (A.zero, A.one))
        if fname == "scalar" and len(args) == 2:
            K = self.algebra(args[0])
            return scalar_embedding(K, matrix_algebra(K, int(args[1]), self.bounds))
        found = self._from_file(expr, "homs", "hom")
        if not isinstance(found, AlgebraHomomorphism):
            raise UsageError(f"unknown algebra homomorphism {expr!r}")
        return found


def _call(expr: str):
    """``f(a, g(b), c)`` -> ("f", ["a", "g(b)", "c"]); anything else -> (None, [])."""
    expr = expr.strip()
    if "(" not in expr or not expr.endswith(")"):
        return None, []
    head, inner = expr.split("(", 1)
    inner = inner[:-1]
    args, depth, cur = [], 0, ""
    for ch in inner:
        if ch == "," and depth == 0:
            args.append(cur.strip())
            cur = ""
            continue
        depth += {"(": 1, ")": -1}.get(ch, 0)
        cur += ch
    if cur.strip():
        args.append(cur.strip())
    return head.strip(), args


def _element(A, text: str) -> int:
    if text.startswith("#"):
        return int(text[1:])
    try:
        return A.index_of(text)
    except (KleeneError, ValueError, KeyError):
        pass
    if text.isdigit() and int(text) < A.size:
        return int(text)
    if isinstance(A, MatrixAlgebra) and text.startswith("[") and text.endswith("]"):
        # [a b; c d] with entries named by labels of the base algebra
        rows = [r.split() for r in text[1:-1].split(";")]
        if len(rows) == A.dim and all(len(r) == A.dim for r in rows):
            try:
                return A.encode([[_element(A.base, x) for x in r] for r in rows])
            except UsageError:
                pass
    raise UsageError(f"{text!r} is not an element of {A.name}")


# ---------------------------------------------------------------- commands

def cmd_ka_check(args, res: Resolver, out: StructureWriter):
    A = res.algebra(args.algebra)
    induction = args.induction or ("full" if A.size <= FULL_INDUCTION_MAX else "reduced")
    rep = check_kleene_axioms(A, induction=induction)
    rep.command = f"ka check {args.algebra}"
    rep.note(f"|{A.name}| = {A.size}, induction scan: {induction}")
    out.algebra(A)
    return rep


def cmd_ka_star(args, res, out):
    A = res.algebra(args.algebra)
    a = _element(A, args.element)
    rep = Report(f"ka star {args.algebra} {args.element}")
    s = int(A.star[a])
    sat = star_saturate(A.element(a)).index
    rep.add("table_matches_saturation", s == sat, 1, None if s == sat else {"table": s, "saturation": sat})
    unroll = int(A.add[A.one, A.mul[a, s]]) == s
    rep.add("unroll", unroll, 1, None if unroll else {"a": a})
    rep.note(f"{A.label(a)}* = {A.label(s)}")
    return rep


def cmd_module_check(args, res, out):
    M = res.module(args.module)
    rep = check_module_axioms(M)
    rep.command = f"module check {args.module}"
    rep.note(f"|{M.name}| = {M.size}, {M.side} module")
    out.module(M)
    return rep


def cmd_module_free(args, res, out):
    K = res.algebra(args.algebra)
    M = free_module(K, args.rank, args.side, res.bounds)
    rep = check_module_axioms(M)
    rep.command = f"module free {args.algebra} {args.rank} --side {args.side}"
    for s in ("left", "right"):
        if M.algebra(s) is not None:
            ok = free_coordinates(M, s) is not None
            rep.add(f"basis_{s}", ok, M.size)
    rep.note(f"|{M.name}| = {M.size}")
    out.module(M)
    return rep


def cmd_module_dual(args, res, out):
    M = res.module(args.module)
    D = dual_module(M, args.over, res.bounds)
    rep = check_module_axioms(D)
    rep.command = f"module dual {args.module}" + (f" --over {args.over}" if args.over else "")
    rep.note(f"|{D.name}| = {D.size}, {D.side} module" + (", dual basis recorded" if D.basis else ""))
    out.module(D)
    return rep


def _respect(text):
    if text is None:
        return None
    return frozenset({"left", "right"}) if text == "both" else frozenset({text})


def cmd_module_hom(args, res, out):
    M, N = res.module(args.source), res.module(args.target)
    respect = _respect(args.respect)
    rep = Report(f"module hom {args.source} {args.target}" + (f" --respect {args.respect}" if args.respect else ""))
    maps = hom_set(M, N, respect, res.bounds)
    rep.note(f"|Hom({M.name},{N.name})| = {len(maps)}")
    try:
        H, _ = hom_module(M, N, respect, res.bounds)
    except KleeneError as exc:
        rep.note(f"no module structure: {exc}")
        bad = [f for f in maps if not ModuleHomomorphism(M, N, f, respect).check().ok]
        rep.add("all_homomorphisms", not bad, len(maps), {"map": list(bad[0])} if bad else None)
        return rep
    rep.merge(check_module_axioms(H), prefix="hom_module.")
    out.module(H)
    return rep


def _pairs(items):
    out = []
    for item in items or []:
        x, _, y = item.partition(",")
        out.append((int(x), int(y)))
    return out


def cmd_module_quotient(args, res, out):
    M = res.module(args.module)
    pairs = _pairs(args.pair)
    Q, cong = quotient_module(M, pairs, res.bounds)
    rep = check_module_axioms(Q)
    rep.command = f"module quotient {args.module} " + " ".join(f"--pair {x},{y}" for x, y in pairs)
    compat = cong.is_compatible()
    rep.add("congruence_compatible", compat, 1)
    rep.note(f"{len(cong.classes())} classes from {M.size} elements, quasi-identity repairs: {len(cong.repairs)}")
    out.module(Q)
    return rep


def cmd_module_iso(args, res, out):
    M, N = res.module(args.first), res.module(args.second)
    rep = Report(f"module iso {args.first} {args.second}")
    f = module_iso_search(M, N, res.bounds)
    rep.add("isomorphic", f is not None, 1, None if f is not None else {"sizes": f"{M.size},{N.size}"})
    if f is not None:
        rep.merge(f.check(), prefix="certificate.")
        rep.note("map: " + " ".join(str(x) for x in f.map))
        out.hom("iso", out.module(M, "source"), out.module(N, "target"), f.map)
    return rep


def cmd_tensor(args, res, out):
    rest = args.rest
    if rest and rest[0] == "adjunction":
        return _tensor_adjunction(rest[1:], args, res)
    if rest and rest[0] == "laws":
        return _tensor_laws(rest[1:], args, res)
    if len(rest) != 2:
        raise UsageError("tensor <M> <N> | tensor adjunction <M> <N> <P> | tensor laws <M> [<N> <P>]")
    M, N = res.module(rest[0]), res.module(rest[1])
    T = tensor_product(M, N, method=args.method, bounds=res.bounds)
    rep = check_tensor(T)
    rep.command = f"tensor {rest[0]} {rest[1]} --method {args.method}"
    rep.merge(check_module_axioms(T.module), prefix="module.")
    rep.note(f"|{T.module.name}| = {T.module.size} ({T.provenance}), quasi-identity repairs: {len(T.repairs)}")
    left, right = out.module(M, "M"), out.module(N, "N")
    mod = out.module(T.module, "T")
    out.pure_tensor("pure", left, right, mod, T.pure)
    return rep


def _tensor_adjunction(names, args, res):
    if len(names) != 3:
        raise UsageError("tensor adjunction <M> <N> <P>")
    M, N, P = (res.module(x) for x in names)
    pairs = None
    if args.samples:
        alphas = [ModuleHomomorphism(M, M, f) for f in hom_set(M, M, frozenset({"left", "right"}), res.bounds)]
        betas = [ModuleHomomorphism(P, P, f) for f in hom_set(P, P, frozenset({"left", "right"}), res.bounds)]
        allp = list(itertools.product(alphas, betas))
        rng = np.random.default_rng(args.seed)
        pick = sorted(rng.choice(len(allp), size=min(args.samples, len(allp)), replace=False).tolist())
        pairs = [allp[i] for i in pick]
    rep = check_adjunction(M, N, P, pairs, res.bounds)
    rep.command = "tensor adjunction " + " ".join(names) + (f" --samples {args.samples}" if args.samples else "")
    return rep


def _tensor_laws(names, args, res):
    if len(names) not in (1, 3):
        raise UsageError("tensor laws <M> [<N> <P>]")
    mods = [res.module(x) for x in names]
    rep = check_monoid_laws(*mods, bounds=res.bounds) if len(mods) == 3 else check_monoid_laws(mods[0], bounds=res.bounds)
    rep.command = "tensor laws " + " ".join(names)
    return rep


def cmd_morita_matrix(args, res, out):
    K = res.algebra(args.algebra)
    W = matrix_morita_witness(K, args.n, res.bounds, strict=False)
    W.report.command = f"morita matrix {args.algebra} {args.n}"
    write_witness(W, out)
    return W.report


def cmd_morita_full(args, res, out):
    K = res.algebra(args.algebra)
    M = matrix_algebra(K, args.n, res.bounds)
    rep = Report(f"morita full-idempotents {args.algebra} {args.n}")
    found = full_idempotents(M)
    full = {e for e, f in found if f}
    for e, f in found:
        rep.note(f"{M.label(e):<24} {'full' if f else 'not full'}")
    rep.add("identity_full", M.one in full, 1)
    rep.add("zero_not_full", M.zero not in full or M.size == 1, 1)
    bad = [(e, f) for e in full for f, _ in found if f not in full and int(M.add[e, f]) == f]
    rep.add("fullness_monotone", not bad, len(found) ** 2, {"e": bad[0][0], "f": bad[0][1]} if bad else None)
    rep.note(f"{len(found)} idempotents, {len(full)} full")
    return rep


def _idem(args, M):
    return parse_idempotent(M, args.idempotent)


def cmd_morita_corner(args, res, out):
    K = res.algebra(args.algebra)
    M = matrix_algebra(K, args.n, res.bounds)
    e = _idem(args, M)
    S = corner_algebra(M, e, check=False)
    rep = check_kleene_axioms(S, induction="full" if S.size <= FULL_INDUCTION_MAX else "reduced")
    rep.command = f"morita corner {args.algebra} {args.n} --idempotent {args.idempotent}"
    rep.note(f"|e M e| = {S.size} for e = {e.label}")
    for k in range(1, args.n + 1):
        cand = K if k == 1 else matrix_algebra(K, k, res.bounds)
        if cand.size == S.size and find_algebra_isomorphism(S, cand) is not None:
            rep.note(f"e M e ≅ {cand.name}")
    out.algebra(S, "corner")
    return rep


def cmd_morita_lift(args, res, out):
    K = res.algebra(args.algebra)
    M = matrix_algebra(K, args.n, res.bounds)
    e = _idem(args, M)
    W = lift_semiring_morita(K, args.n, e, res.bounds)
    W.report.command = f"morita lift {args.algebra} {args.n} --idempotent {args.idempotent}"
    write_witness(W, out)
    return W.report


def cmd_morita_hom_module(args, res, out):
    h = res.hom(args.hom)
    E = homomorphism_module(h, res.bounds).module
    rep = check_module_axioms(E)
    rep.command = f"morita hom-module {args.hom}"
    rep.note(f"|{E.name}| = {E.size}")
    out.module(E)
    return rep


def cmd_morita_compose(args, res, out):
    f, g = res.hom(args.f), res.hom(args.g)
    rep = check_composition_law(f, g, res.bounds)
    rep.command = f"morita compose-law {args.f} {args.g}"
    return rep


def cmd_morita_equivalence(args, res, out):
    K = res.algebra(args.algebra)
    W = matrix_morita_witness(K, args.n, res.bounds, strict=False)
    over_k = [regular_module(K, "left"), free_module(K, 2, "left", res.bounds)]
    over_s = [regular_module(W.S, "left")]
    rep = check_category_equivalence(W, over_k, over_s, res.bounds)
    rep.command = f"morita equivalence {args.algebra} {args.n}"
    return rep


def cmd_verify(args, res, out):
    path = Path(args.file)
    if not path.is_file():
        raise UsageError(f"no such file: {args.file}")
    cat = parse_structure_file(path.read_text(), res.bounds)
    rep = verify_catalog(cat, res.bounds)
    rep.command = f"verify {path.name}"
    return rep


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-carrier", type=int, default=65536)
    common.add_argument("--hom-bound", type=int, default=1 << 20)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--emit", metavar="PATH", help="write the resulting structures or witness here")
    common.add_argument("--timing", action="store_true", help="print elapsed time on stderr")

    p = argparse.ArgumentParser(prog="kmw", description="Finite Kleene algebras, modules and Morita witnesses.")
    groups = p.add_subparsers(dest="group", required=True)

    ka = groups.add_parser("ka").add_subparsers(dest="cmd", required=True)
    c = ka.add_parser("check", parents=[common])
    c.add_argument("algebra")
    c.add_argument("--induction", choices=["full", "reduced"])
    c.set_defaults(func=cmd_ka_check)
    c = ka.add_parser("star", parents=[common])
    c.add_argument("algebra")
    c.add_argument("element")
    c.set_defaults(func=cmd_ka_star)

    mod = groups.add_parser("module").add_subparsers(dest="cmd", required=True)
    c = mod.add_parser("check", parents=[common])
    c.add_argument("module")
    c.set_defaults(func=cmd_module_check)
    c = mod.add_parser("free", parents=[common])
    c.add_argument("algebra")
    c.add_argument("rank", type=int)
    c.add_argument("--side", choices=["left", "right", "bi"], default="left")
    c.set_defaults(func=cmd_module_free)
    c = mod.add_parser("dual", parents=[common])
    c.add_argument("module")
    c.add_argument("--over", choices=["left", "right"])
    c.set_defaults(func=cmd_module_dual)
    c = mod.add_parser("hom", parents=[common])
    c.add_argument("source")
    c.add_argument("target")
    c.add_argument("--respect", choices=["left", "right", "both"])
    c.set_defaults(func=cmd_module_hom)
    c = mod.add_parser("quotient", parents=[common])
    c.add_argument("module")
    c.add_argument("--pair", action="append", metavar="X,Y", help="element indices to identify")
    c.set_defaults(func=cmd_module_quotient)
    c = mod.add_parser("iso", parents=[common])
    c.add_argument("first")
    c.add_argument("second")
    c.set_defaults(func=cmd_module_iso)

    c = groups.add_parser("tensor", parents=[common],
                          help="tensor <M> <N> | tensor adjunction <M> <N> <P> | tensor laws <M> [<N> <P>]")
    c.add_argument("rest", nargs="+")
    c.add_argument("--method", choices=["auto", "fast", "exhaustive"], default="auto")
    c.add_argument("--samples", type=int, help="adjunction: check a seeded sample of (alpha, beta) pairs")
    c.set_defaults(func=cmd_tensor)

    mo = groups.add_parser("morita").add_subparsers(dest="cmd", required=True)
    c = mo.add_parser("matrix", parents=[common])
    c.add_argument("algebra")
    c.add_argument("n", type=int)
    c.set_defaults(func=cmd_morita_matrix)
    c = mo.add_parser("full-idempotents", parents=[common])
    c.add_argument("algebra")
    c.add_argument("n", type=int)
    c.set_defaults(func=cmd_morita_full)
    for name, func in (("corner", cmd_morita_corner), ("lift", cmd_morita_lift)):
        c = mo.add_parser(name, parents=[common])
        c.add_argument("algebra")
        c.add_argument("n", type=int)
        c.add_argument("--idempotent", default="I")
        c.set_defaults(func=func)
    c = mo.add_parser("hom-module", parents=[common])
    c.add_argument("hom")
    c.set_defaults(func=cmd_morita_hom_module)
    c = mo.add_parser("compose-law", parents=[common])
    c.add_argument("f")
    c.add_argument("g")
    c.set_defaults(func=cmd_morita_compose)
    c = mo.add_parser("equivalence", parents=[common])
    c.add_argument("algebra")
    c.add_argument("n", type=int)
    c.set_defaults(func=cmd_morita_equivalence)

    c = groups.add_parser("verify", parents=[common])
    c.add_argument("file")
    c.set_defaults(func=cmd_verify)
    return p


def run(argv, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    bounds = Bounds(max_carrier=args.max_carrier, hom_bound=args.hom_bound)
    res = Resolver(bounds)
    out = StructureWriter()
    start = time.perf_counter()
    try:
        rep = args.func(args, res, out)
    except (ParseError, UsageError, ValidationError) as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    except KleeneError as exc:
        rep = Report(" ".join(argv))
        rep.error = f"{type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start
    print(rep.render(), file=stdout)
    if args.emit and out.parts and rep.verdict != "error":
        Path(args.emit).write_text(out.text(rep.command))
        print(f"wrote {args.emit}", file=stderr)
    if args.timing:
        print(f"elapsed: {elapsed:.3f}s", file=stderr)
    return rep.exit_code


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
