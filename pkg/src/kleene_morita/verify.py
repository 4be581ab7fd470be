"""Re-verification of parsed structure files, witnesses included."""

from __future__ import annotations

from .algebra import (
    DEFAULT_BOUNDS,
    AlgebraHomomorphism,
    Bounds,
    check_algebra_homomorphism,
    check_kleene_axioms,
    find_algebra_isomorphism,
    is_builtin_expr,
)
from .fileformat import Catalog
from .module import ModuleHomomorphism, check_isomorphism, check_module_axioms, module_iso_search, regular_module
from .morita import corner_algebra, is_full_idempotent
from .report import Report
from .tensor import TensorProduct, check_tensor, tensor_product

# past this size the full induction scan gives way to the two-variable form
FULL_INDUCTION_MAX = 64


def _merge_checks(rep, sub, prefix):
    rep.merge(sub, prefix=prefix)


def _same_module(X, Y) -> bool:
    if X.size != Y.size or X.zero != Y.zero or X.left != Y.left or X.right != Y.right:
        return False
    pairs = [(X.add, Y.add), (X.left_action, Y.left_action), (X.right_action, Y.right_action)]
    return all(a is None and b is None or a is not None and b is not None and (a == b).all() for a, b in pairs)


def verify_catalog(cat: Catalog, bounds: Bounds = DEFAULT_BOUNDS) -> Report:
    rep = Report("verify")
    for kind, name in cat.order:
        tag = f"{name}."
        if kind == "kleene_algebra":
            A = cat.algebras[name]
            if A.size > FULL_INDUCTION_MAX and is_builtin_expr(A.name):
                rep.note(f"{name}: builtin {A.name} rebuilt from its definition")
                continue
            induction = "full" if A.size <= FULL_INDUCTION_MAX else "reduced"
            _merge_checks(rep, check_kleene_axioms(A, induction=induction), tag)
        elif kind == "module":
            _merge_checks(rep, check_module_axioms(cat.modules[name]), tag)
        elif kind == "hom":
            h = cat.homs[name]
            sub = check_algebra_homomorphism(h) if isinstance(h, AlgebraHomomorphism) else h.check()
            _merge_checks(rep, sub, tag)
        elif kind == "idempotent":
            A, e = cat.idempotents[name]
            idem = int(A.mul[e, e]) == e
            rep.add(f"{tag}idempotent", idem, 1, None if idem else {"e": e})
            if idem:
                rep.note(f"{name}: {A.label(e)} is {'full' if is_full_idempotent(A, e) else 'not full'}")
        elif kind == "pure_tensor":
            verify_pure_tensor(rep, cat, name, bounds)
        elif kind == "witness":
            verify_witness(rep, cat, name, bounds)
    return rep


def verify_pure_tensor(rep, cat: Catalog, name: str, bounds: Bounds) -> TensorProduct | None:
    """The stated pure-tensor table must induce an isomorphism from a freshly computed tensor."""
    entry = cat.tensors[name]
    L, R, T = cat.modules[entry.left], cat.modules[entry.right], cat.modules[entry.module]
    fresh = tensor_product(L, R, bounds=bounds)
    tab = entry.table
    f = tuple(T.join(int(tab[m, n]) for m, n in terms) for terms in fresh.decomposition)
    iso = check_isomorphism(ModuleHomomorphism(fresh.module, T, f))
    bad = iso.failures()
    rep.add(f"{name}.induces_iso", not bad, fresh.module.size,
            None if not bad else {"law": bad[0].name, **(bad[0].counterexample or {})},
            detail=f"recomputed ({fresh.provenance}) |{fresh.module.size}|")
    if bad:
        return None
    inv = [0] * T.size
    for x, y in enumerate(f):
        inv[y] = x
    stated = TensorProduct(T, L, R, tab, tuple(fresh.decomposition[inv[t]] for t in range(T.size)), "file")
    _merge_checks(rep, check_tensor(stated), f"{name}.")
    return stated


def verify_witness(rep, cat: Catalog, name: str, bounds: Bounds) -> None:
    r = cat.witnesses[name].refs
    K, S = cat.algebras[r["K"]], cat.algebras[r["S"]]
    P, Q, PQ, QP = (cat.modules[r[k]] for k in ("P", "Q", "PQ", "QP"))
    tag = f"{name}."
    typed = P.left == S and P.right == K and Q.left == K and Q.right == S
    rep.add(tag + "bimodule_types", typed, 1, None if typed else {"P": P.side, "Q": Q.side})
    pq, qp = cat.tensors[r["pq_tensor"]], cat.tensors[r["qp_tensor"]]
    wired = ((pq.left, pq.right, pq.module) == (r["P"], r["Q"], r["PQ"])
             and (qp.left, qp.right, qp.module) == (r["Q"], r["P"], r["QP"]))
    rep.add(tag + "tensor_wiring", wired, 1, None if wired else {"pq": pq.module, "qp": qp.module})
    Sreg, Kreg = regular_module(S, "bi"), regular_module(K, "bi")
    for mp, inv, src, reg in (("u", "u_inv", PQ, Sreg), ("v", "v_inv", QP, Kreg)):
        f, g = cat.homs[r[mp]], cat.homs[r[inv]]
        same = f.source is src and _same_module(f.target, reg)
        rep.add(f"{tag}{mp}_shape", same, 1, None if same else {"target": f.target.name})
        iso = check_isomorphism(ModuleHomomorphism(src, reg, f.map))
        bad = iso.failures()
        rep.add(f"{tag}{mp}_iso", not bad, src.size,
                None if not bad else {"law": bad[0].name, **(bad[0].counterexample or {})})
        ok = len(g.map) == reg.size and all(g.map[f.map[x]] == x for x in range(src.size)) \
            and all(f.map[g.map[y]] == y for y in range(reg.size))
        rep.add(f"{tag}{mp}_inverse_composes", ok, src.size + reg.size)
        cert = module_iso_search(src, reg, bounds)
        rep.add(f"{tag}{mp}_iso_certificate", cert is not None, 1, None if cert is not None else {"found": 0})
    if "idempotent" in r:
        M, e = cat.idempotents[r["idempotent"]]
        corner = corner_algebra(M, e)
        h = find_algebra_isomorphism(corner, S)
        rep.add(tag + "S_is_corner", h is not None, 1, None if h is not None else {"e": e})
        full = is_full_idempotent(M, e)
        rep.add(tag + "idempotent_full", full, 1, None if full else {"e": e})
