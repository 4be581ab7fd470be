"""Full idempotents, corner algebras, homomorphism modules and Morita witnesses."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    DEFAULT_BOUNDS,
    AlgebraHomomorphism,
    Bounds,
    FiniteKleeneAlgebra,
    MatrixAlgebra,
    check_algebra_homomorphism,
    check_kleene_axioms,
    matrix_algebra,
    semiring_matmul,
)
from .errors import CornerStarError, PreconditionError, SizeGuardError, ValidationError
from .module import (
    FiniteKleeneModule,
    ModuleHomomorphism,
    _restrict,
    check_isomorphism,
    dual_module,
    free_coordinates,
    free_module,
    is_homomorphism,
    module_iso_search,
    regular_module,
)
from .report import Report
from .tensor import TensorProduct, tensor_product


@dataclass(frozen=True)
class Idempotent:
    algebra: FiniteKleeneAlgebra
    index: int

    def __post_init__(self):
        e = int(self.index)
        if not 0 <= e < self.algebra.size:
            raise ValidationError(f"{e} is not an element of {self.algebra.name}")
        object.__setattr__(self, "index", e)
        if int(self.algebra.mul[e, e]) != e:
            raise PreconditionError(f"{self.algebra.label(e)} is not idempotent")

    @property
    def label(self) -> str:
        return self.algebra.label(self.index)


_UNIT = re.compile(r"^E(\d)(\d)$")


def parse_idempotent(M: FiniteKleeneAlgebra, text: str) -> Idempotent:
    """``E11`` (1-based matrix unit), sums like ``E11+E22``, ``I``, ``0`` or ``#<index>``."""
    text = text.replace(" ", "")
    if text.startswith("#"):
        return Idempotent(M, int(text[1:]))
    if text in ("I", "1"):
        return Idempotent(M, M.one)
    if text == "0":
        return Idempotent(M, M.zero)
    if not isinstance(M, MatrixAlgebra):
        raise ValidationError(f"matrix-unit idempotent {text!r} needs a matrix algebra")
    acc = M.zero
    for part in text.split("+"):
        m = _UNIT.match(part)
        if not m:
            raise ValidationError(f"cannot read idempotent term {part!r}")
        i, j = int(m.group(1)) - 1, int(m.group(2)) - 1
        if not (0 <= i < M.dim and 0 <= j < M.dim):
            raise ValidationError(f"{part} is outside {M.dim}x{M.dim}")
        acc = int(M.add[acc, M.unit(i, j)])
    return Idempotent(M, acc)


def idempotents(M: FiniteKleeneAlgebra) -> list[int]:
    d = np.arange(M.size)
    return [int(x) for x in np.flatnonzero(M.mul[d, d] == d)]


def ideal_closure(M: FiniteKleeneAlgebra, e: int) -> np.ndarray:
    """Boolean mask of the additive closure of {x e y}."""
    mask = np.zeros(M.size, dtype=bool)
    mask[M.zero] = True
    mask[np.unique(M.mul[M.mul[:, e]])] = True
    while True:
        s = np.flatnonzero(mask)
        grown = mask.copy()
        grown[np.unique(M.add[np.ix_(s, s)])] = True
        if (grown == mask).all():
            return mask
        mask = grown


def is_full_idempotent(M: FiniteKleeneAlgebra, e) -> bool:
    e = e if isinstance(e, Idempotent) else Idempotent(M, e)
    return bool(ideal_closure(M, e.index).all())


def full_idempotents(M: FiniteKleeneAlgebra) -> list[tuple[int, bool]]:
    """Every idempotent of M with its fullness."""
    return [(e, is_full_idempotent(M, e)) for e in idempotents(M)]


def corner_algebra(M: FiniteKleeneAlgebra, e, name: str | None = None, check: bool = True) -> FiniteKleeneAlgebra:
    """eMe with unit e and star x -> e x* e; axiom-checked unless ``check`` is off."""
    e = e if isinstance(e, Idempotent) else Idempotent(M, e)
    ei = e.index
    elems = sorted(set(M.mul[M.mul[ei], ei].tolist()))
    pos = np.full(M.size, -1, dtype=np.int64)
    pos[elems] = np.arange(len(elems))
    sub = np.array(elems)
    star = M.mul[M.mul[ei, M.star[sub]], ei]
    S = FiniteKleeneAlgebra(
        name or f"{e.label}·{M.name}·{e.label}",
        pos[M.add[np.ix_(sub, sub)]],
        pos[M.mul[np.ix_(sub, sub)]],
        pos[star],
        int(pos[M.zero]),
        int(pos[ei]),
        labels=[M.label(x) for x in elems],
        embedding=elems,
    )
    if check:
        induction = "full" if S.size <= 64 else "reduced"
        rep = check_kleene_axioms(S, induction=induction)
        if not rep.ok:
            bad = rep.failures()[0]
            raise CornerStarError(bad.name, bad.counterexample)
    return S


# ---------------------------------------------------------------- E_h

@dataclass
class HomomorphismModule:
    module: FiniteKleeneModule
    h: AlgebraHomomorphism


def homomorphism_module(h: AlgebraHomomorphism, bounds: Bounds = DEFAULT_BOUNDS) -> HomomorphismModule:
    """B as an (A, B)-bimodule: a.b = h(a) b, right action by multiplication."""
    A, B = h.source, h.target
    if B.size > bounds.max_carrier:
        raise SizeGuardError(f"{B.name} exceeds the carrier bound")
    hm = np.array(h.map)
    M = FiniteKleeneModule(
        f"E[{A.name}->{B.name}]", B.add, B.zero, A, B.mul[hm, :], B, B.mul, labels=B.labels,
        basis={"right": (B.one,), "left": (B.one,)},
    )
    if free_coordinates(M, "left") is None:
        del M.basis["left"]
        M._coords.pop("left", None)
    return HomomorphismModule(M, h)


def check_composition_law(f: AlgebraHomomorphism, g: AlgebraHomomorphism, bounds: Bounds = DEFAULT_BOUNDS) -> Report:
    """E_{g∘f} ≅ E_f ⊗ E_g via c -> 1⊗c and b⊗c -> g(b)c."""
    rep = Report(f"morita compose-law {f.source.name}->{f.target.name}->{g.target.name}")
    for tag, h in (("f", f), ("g", g)):
        rep.merge(check_algebra_homomorphism(h), prefix=f"{tag}.")
    gf = f.then(g)
    B, C = f.target, g.target
    Ef, Eg, Egf = (homomorphism_module(h, bounds).module for h in (f, g, gf))
    T = tensor_product(Ef, Eg, bounds=bounds)
    Q = T.module
    phi = tuple(int(T.pure[B.one, c]) for c in range(C.size))
    psi = tuple(Egf.join(int(C.mul[g(b), c]) for b, c in terms) for terms in T.decomposition)
    _hom_check(rep, "phi_homomorphism", Egf, Q, phi)
    _hom_check(rep, "psi_homomorphism", Q, Egf, psi)
    bad = [c for c in range(C.size) if psi[phi[c]] != c]
    rep.add("psi_after_phi", not bad, C.size, {"c": bad[0]} if bad else None)
    bad = [t for t in range(Q.size) if phi[psi[t]] != t]
    rep.add("phi_after_psi", not bad, Q.size, {"t": bad[0]} if bad else None)
    cert = module_iso_search(Egf, Q, bounds)
    rep.add("iso_certificate", cert is not None, 1, None if cert is not None else {"found": 0})
    rep.note(f"|E_f ⊗ E_g| = {Q.size} ({T.provenance}), |E_gf| = {Egf.size}")
    return rep


def _hom_check(rep: Report, name: str, M, N, f) -> None:
    sub = ModuleHomomorphism(M, N, f).check()
    bad = sub.failures()
    rep.add(name, not bad, sum(c.cases for c in sub.checks),
            None if not bad else {"law": bad[0].name, **(bad[0].counterexample or {})})


# ---------------------------------------------------------------- K^n and its dual

def column_module(K: FiniteKleeneAlgebra, n: int, M: MatrixAlgebra | None = None,
                  bounds: Bounds = DEFAULT_BOUNDS) -> FiniteKleeneModule:
    """K^n as an (M_n(K), K)-bimodule of column vectors."""
    M = M or matrix_algebra(K, n, bounds)
    F = free_module(K, n, "right", bounds)
    coords = free_coordinates(F, "right")
    ents = M.all_entries
    prod = semiring_matmul(K.add, K.mul, ents[:, None], coords[None, :, :, None])[..., 0]
    la = prod @ (K.size ** np.arange(n, dtype=np.int64))
    labels = [lab.replace(",", " ") + "ᵗ" for lab in F.labels]
    return FiniteKleeneModule(f"{K.name}^{n}", F.add, F.zero, M, la, K, F.right_action,
                              labels=labels, basis={"right": F.basis["right"]})


def row_module(K: FiniteKleeneAlgebra, n: int, column: FiniteKleeneModule | None = None,
               bounds: Bounds = DEFAULT_BOUNDS):
    """The dual of K^n (over K), a (K, M_n(K))-bimodule; returns (module, row coordinates)."""
    column = column or column_module(K, n, bounds=bounds)
    D = dual_module(column, over="right", bounds=bounds)
    basis = column.basis["right"]
    rows = np.array([[f[b] for b in basis] for f in D.functions], dtype=np.int64).reshape(D.size, n)
    labels = ["(" + " ".join(K.label(x) for x in r) + ")" for r in rows]
    R = FiniteKleeneModule(f"{K.name}^{n}°", D.add, D.zero, D.left, D.left_action, D.right, D.right_action,
                           labels=labels, basis=D.basis, functions=D.functions)
    return R, rows


@dataclass
class MoritaWitness:
    K: FiniteKleeneAlgebra
    S: FiniteKleeneAlgebra
    P: FiniteKleeneModule            # (S, K)
    Q: FiniteKleeneModule            # (K, S)
    PQ: TensorProduct
    QP: TensorProduct
    u: tuple                         # P⊗Q -> S
    v: tuple                         # Q⊗P -> K
    u_inv: tuple | None
    v_inv: tuple | None
    report: Report
    idempotent: Idempotent | None = None
    chain: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.report.ok


def _inverse(f, size):
    if sorted(f) != list(range(size)):
        return None
    inv = [0] * size
    for x, y in enumerate(f):
        inv[y] = x
    return tuple(inv)


def _iso_checks(rep: Report, tag: str, src, dst, f, bounds: Bounds, search: bool = True):
    iso = check_isomorphism(ModuleHomomorphism(src, dst, f))
    bad = iso.failures()
    rep.add(f"{tag}_iso", not bad, src.size,
            None if not bad else {"law": bad[0].name, **(bad[0].counterexample or {})})
    inv = _inverse(f, dst.size) if len(f) == dst.size else None
    if inv is not None:
        ok1 = all(inv[f[x]] == x for x in range(src.size))
        ok2 = all(f[inv[y]] == y for y in range(dst.size))
        rep.add(f"{tag}_inverse_composes", ok1 and ok2, src.size + dst.size)
    if search:
        cert = module_iso_search(src, dst, bounds)
        rep.add(f"{tag}_iso_certificate", cert is not None, 1, None if cert is not None else {"found": 0})
    return inv


def _outer_inner(K, cols, rows, M: MatrixAlgebra):
    outer = M.encode_array(K.mul[cols[:, None, :, None], rows[None, :, None, :]])
    inner = semiring_matmul(K.add, K.mul, rows[:, None, None, :], cols[None, :, :, None])[..., 0, 0]
    return outer, inner


def _matrix_label(K, M: MatrixAlgebra, a: int) -> str:
    return "[" + "; ".join(" ".join(K.label(x) for x in r) for r in M.entries(a)) + "]"


def matrix_morita_witness(K: FiniteKleeneAlgebra, n: int, bounds: Bounds = DEFAULT_BOUNDS,
                          search: bool = True, strict: bool = True) -> MoritaWitness:
    """K^n and its dual witness K ~ M_n(K); every identity is checked on the computed tensors.

    With ``strict`` a failed identity raises ValidationError.
    """
    M = matrix_algebra(K, n, bounds)
    Kn = column_module(K, n, M, bounds)
    Kd, rows = row_module(K, n, Kn, bounds)
    cols = free_coordinates(Kn, "right")
    rep = Report(f"morita matrix {K.name} {n}")
    T1 = tensor_product(Kn, Kd, method="fast", bounds=bounds)
    T2 = tensor_product(Kd, Kn, method="exhaustive", bounds=bounds)
    Sreg, Kreg = regular_module(M, "bi"), regular_module(K, "bi")
    outer, inner = _outer_inner(K, cols, rows, M)
    u = tuple(Sreg.join(int(outer[p, q]) for p, q in terms) for terms in T1.decomposition)
    v = tuple(Kreg.join(int(inner[q, p]) for q, p in terms) for terms in T2.decomposition)
    rep.add("PQ_size", T1.module.size == M.size, 1, None if T1.module.size == M.size else
            {"tensor": T1.module.size, "algebra": M.size}, detail=f"|K^n⊗K^n°| = {T1.module.size}")
    u_inv = _iso_checks(rep, "phi", T1.module, Sreg, u, bounds, search)
    v_inv = _iso_checks(rep, "alpha", T2.module, Kreg, v, bounds, search)

    e = Kn.basis["right"]
    ed = Kd.basis["left"]
    # phi(e_i ⊗ e_j°) = E_ij and psi(E_ij) = e_i ⊗ e_j°
    bad = [(i, j) for i in range(n) for j in range(n) if u[T1.pure[e[i], ed[j]]] != M.unit(i, j)]
    rep.add("phi_on_generators", not bad, n * n, {"i": bad[0][0] + 1, "j": bad[0][1] + 1} if bad else None)
    psi = []
    for a in range(M.size):
        ent = M.entries(a)
        psi.append(T1.module.join(int(T1.pure[Kn.right_action[e[i], ent[i][j]], ed[j]])
                                  for i in range(n) for j in range(n)))
    ok = u_inv is not None and tuple(psi) == u_inv
    rep.add("psi_is_inverse", ok, M.size)
    # alpha(e_i° ⊗ e_j) = delta_ij, beta(a) = a(e_1° ⊗ e_1)
    bad = [(i, j) for i in range(n) for j in range(n)
           if v[T2.pure[ed[i], e[j]]] != (K.one if i == j else K.zero)]
    rep.add("alpha_on_generators", not bad, n * n, {"i": bad[0][0] + 1, "j": bad[0][1] + 1} if bad else None)
    base = int(T2.pure[ed[0], e[0]])
    beta = tuple(int(T2.module.left_action[a, base]) for a in range(K.size))
    rep.add("beta_is_inverse", v_inv is not None and beta == v_inv, K.size)
    rep.add("alpha_after_beta", all(v[beta[a]] == a for a in range(K.size)), K.size)
    rep.add("beta_after_alpha", all(beta[v[t]] == t for t in range(T2.module.size)), T2.module.size)

    # bullet identities
    ones = [[K.one] * n for _ in range(n)]
    one_bar = M.encode(ones)
    col_ones = int(Kn.join(e))
    row_ones = int(Kd.join(ed))
    bars = []
    for i in range(n):
        rows_i = [list(r) for r in ones]
        rows_i[i] = [K.one if j == i else K.zero for j in range(n)]
        bars.append(M.encode(rows_i))
    b1 = [i for i in range(n) if Kd.right_action[ed[i], bars[i]] != ed[i]]
    b2 = [i for i in range(n) if Kn.left_action[bars[i], e[i]] != col_ones]
    b3 = Kn.left_action[one_bar, col_ones] == col_ones
    b4 = [i for i in range(n) if Kd.right_action[ed[i], one_bar] != row_ones]
    rep.add("bullet_row_times_bar", not b1, n, {"i": b1[0] + 1} if b1 else None, detail="e_i° ē_i = e_i°")
    rep.add("bullet_bar_times_column", not b2, n, {"i": b2[0] + 1} if b2 else None, detail="ē_i e_i = Σ e_i")
    rep.add("bullet_ones_fixes_sum", bool(b3), 1, None if b3 else {"i": 0}, detail="1̄ Σ e_i = Σ e_i")
    rep.add("bullet_row_times_ones", not b4, n, {"i": b4[0] + 1} if b4 else None, detail="e_i° 1̄ = Σ e_i°")

    # the chain e_i° ⊗ e_i = ... = (Σ e_i°) ⊗ (Σ e_i), for every i
    P2 = T2.pure
    chain_rows = []
    chain_bad = None
    for i in range(n):
        ri, ci = ed[i], e[i]
        steps = [
            (f"{Kd.label(ri)} ⊗ {Kn.label(ci)}", P2[ri, ci]),
            (f"{Kd.label(ri)}{_matrix_label(K, M, bars[i])} ⊗ {Kn.label(ci)}",
             P2[Kd.right_action[ri, bars[i]], ci]),
            (f"{Kd.label(ri)} ⊗ {_matrix_label(K, M, bars[i])}{Kn.label(ci)}",
             P2[ri, Kn.left_action[bars[i], ci]]),
            (f"{Kd.label(ri)} ⊗ {Kn.label(col_ones)}", P2[ri, col_ones]),
            (f"{Kd.label(ri)} ⊗ {_matrix_label(K, M, one_bar)}{Kn.label(col_ones)}",
             P2[ri, Kn.left_action[one_bar, col_ones]]),
            (f"{Kd.label(ri)}{_matrix_label(K, M, one_bar)} ⊗ {Kn.label(col_ones)}",
             P2[Kd.right_action[ri, one_bar], col_ones]),
            (f"{Kd.label(row_ones)} ⊗ {Kn.label(col_ones)}", P2[row_ones, col_ones]),
        ]
        steps = [(s, int(t)) for s, t in steps]
        vals = {t for _, t in steps}
        if (len(vals) != 1 or base not in vals) and chain_bad is None:
            chain_bad = {"i": i + 1, "step": next(k for k, (_, t) in enumerate(steps) if t != base)}
        chain_rows.append(steps)
    rep.add("diagonal_chain", chain_bad is None, n * 7, chain_bad, detail="e_i° ⊗ e_i = e_1° ⊗ e_1")
    for k, (text, t) in enumerate(chain_rows[0]):
        rep.note(("  " if k == 0 else "= ") + f"{text}   [t{t}]")
    rep.note(f"|K^n⊗K^n°| = {T1.module.size} ({T1.provenance}), |K^n°⊗K^n| = {T2.module.size} ({T2.provenance})")
    W = MoritaWitness(K, M, Kn, Kd, T1, T2, u, v, u_inv, v_inv, rep, Idempotent(M, M.one), chain_rows)
    if strict and not rep.ok:
        raise ValidationError("matrix Morita identities failed:\n" + rep.render())
    return W


def lift_semiring_morita(K: FiniteKleeneAlgebra, n: int, e, bounds: Bounds = DEFAULT_BOUNDS,
                         search: bool = True) -> MoritaWitness:
    """Witness K ~ eMe through eK^n and K^n°e; failures are reported, not raised."""
    M = matrix_algebra(K, n, bounds)
    if isinstance(e, str):
        e = parse_idempotent(M, e)
    elif not isinstance(e, Idempotent):
        e = Idempotent(M, e)
    if not is_full_idempotent(M, e):
        raise PreconditionError(f"{e.label} is not a full idempotent of {M.name}")
    S = corner_algebra(M, e)
    emb = np.array(S.embedding)
    spos = {int(x): i for i, x in enumerate(S.embedding)}
    Kn = column_module(K, n, M, bounds)
    Kd, rows = row_module(K, n, Kn, bounds)
    cols = free_coordinates(Kn, "right")
    kr = list(range(K.size))
    p_elems = sorted(set(Kn.left_action[e.index].tolist()))
    q_elems = sorted(set(Kd.right_action[:, e.index].tolist()))
    P = _restrict(Kn, p_elems, f"e{Kn.name}", left=S, left_map=emb, right=K, right_map=kr)
    Q = _restrict(Kd, q_elems, f"{Kd.name}e", left=K, left_map=kr, right=S, right_map=emb)
    rep = Report(f"morita lift {K.name} {n} {e.label}")
    PQ = tensor_product(P, Q, bounds=bounds)
    QP = tensor_product(Q, P, bounds=bounds)
    outer, inner = _outer_inner(K, cols, rows, M)
    Sreg, Kreg = regular_module(S, "bi"), regular_module(K, "bi")
    missing = [(p, q) for p in p_elems for q in q_elems if int(outer[p, q]) not in spos]
    rep.add("outer_products_in_corner", not missing, len(p_elems) * len(q_elems),
            {"p": missing[0][0], "q": missing[0][1]} if missing else None)
    u = tuple(Sreg.join(spos.get(int(outer[p_elems[p], q_elems[q]]), S.zero) for p, q in terms)
              for terms in PQ.decomposition)
    v = tuple(Kreg.join(int(inner[q_elems[q], p_elems[p]]) for q, p in terms) for terms in QP.decomposition)
    u_inv = _iso_checks(rep, "u", PQ.module, Sreg, u, bounds, search)
    v_inv = _iso_checks(rep, "v", QP.module, Kreg, v, bounds, search)
    rep.note(f"|S| = {S.size}, |P| = {P.size}, |Q| = {Q.size}, |P⊗Q| = {PQ.module.size}, |Q⊗P| = {QP.module.size}")
    return MoritaWitness(K, S, P, Q, PQ, QP, u, v, u_inv, v_inv, rep, e)


def check_category_equivalence(W: MoritaWitness, over_K=(), over_S=(), bounds: Bounds = DEFAULT_BOUNDS) -> Report:
    """Q⊗(P⊗X) ≅ X for left K-modules X and P⊗(Q⊗Y) ≅ Y for left S-modules Y."""
    rep = Report(f"morita equivalence {W.K.name} ~ {W.S.name}")
    for X in over_K:
        inner = tensor_product(W.P, X, bounds=bounds).module
        outer = tensor_product(W.Q, inner, bounds=bounds).module
        cert = module_iso_search(outer, X, bounds)
        rep.add(f"round_trip[{X.name}]", cert is not None, 1, None if cert is not None else
                {"size": outer.size, "expected": X.size}, detail=f"|P⊗X| = {inner.size}")
    for Y in over_S:
        inner = tensor_product(W.Q, Y, bounds=bounds).module
        outer = tensor_product(W.P, inner, bounds=bounds).module
        cert = module_iso_search(outer, Y, bounds)
        rep.add(f"round_trip[{Y.name}]", cert is not None, 1, None if cert is not None else
                {"size": outer.size, "expected": Y.size}, detail=f"|Q⊗Y| = {inner.size}")
    return rep


def scalar_embedding(K: FiniteKleeneAlgebra, M: MatrixAlgebra) -> AlgebraHomomorphism:
    """a -> diag(a, ..., a)."""
    z = K.zero
    return AlgebraHomomorphism(
        K, M, tuple(M.encode([[a if i == j else z for j in range(M.dim)] for i in range(M.dim)]) for a in range(K.size))
    )


__all__ = [
    "HomomorphismModule",
    "Idempotent",
    "MoritaWitness",
    "check_category_equivalence",
    "check_composition_law",
    "column_module",
    "corner_algebra",
    "full_idempotents",
    "homomorphism_module",
    "ideal_closure",
    "idempotents",
    "is_full_idempotent",
    "is_homomorphism",
    "lift_semiring_morita",
    "matrix_morita_witness",
    "parse_idempotent",
    "row_module",
    "scalar_embedding",
]
