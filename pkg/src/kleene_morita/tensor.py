"""Tensor products of Kleene bimodules, the curry/uncurry adjunction, and the monoid laws.

Two constructions:

* exhaustive: generators are all pairs (m, n); the quotient of the free
  join-semilattice on pairs by the bilinear and balanced relations is
  computed as the lattice of closed pair-sets of a Horn closure operator
  (a join congruence on a finite powerset is determined by its closed
  sets). Singleton-to-singleton relations are collapsed by union-find first.
* free fast path: when M is free as a right B-module and N free as a left
  B-module, M (x) N is B^(r x s) with the coefficient between the basis
  vectors, e_i c (x) f_j.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .algebra import DEFAULT_BOUNDS, Bounds, semiring_matmul
from .congruence import quasi_identity_violations
from .errors import AlgebraMismatchError, PreconditionError, SizeGuardError
from .module import (
    FiniteKleeneModule,
    ModuleHomomorphism,
    check_isomorphism,
    free_coordinates,
    hom_module,
    hom_set,
    is_homomorphism,
    module_iso_search,
    regular_module,
)
from .report import Report


@dataclass(frozen=True)
class FreePairModule:
    """Generators of the exhaustive construction: one per pair (m, n)."""

    left: FiniteKleeneModule
    right: FiniteKleeneModule

    @property
    def size(self) -> int:
        return self.left.size * self.right.size

    def embed(self, m: int, n: int) -> int:
        return m * self.right.size + n

    def pair(self, p: int) -> tuple[int, int]:
        return divmod(p, self.right.size)


@dataclass
class PairCongruence:
    """Closure operator on sets of pair-classes presenting the generated congruence."""

    free: FreePairModule
    pair_class: list[int]
    class_rep: list[tuple[int, int]]
    base: int
    single: list[int]
    multi: list[tuple[int, int]]
    repairs: list[tuple] = field(default_factory=list)

    @property
    def classes(self) -> int:
        return len(self.class_rep)

    def close(self, S: int) -> int:
        S |= self.base
        seen = 0
        while True:
            pending = S & ~seen
            while pending:
                low = pending & -pending
                seen |= low
                S |= self.single[low.bit_length() - 1]
                pending = S & ~seen
            changed = False
            for p, c in self.multi:
                if S & p == p and S & c != c:
                    S |= c
                    changed = True
            if not changed:
                return S

    def image(self, S: int, table: list[int]) -> int:
        out = 0
        while S:
            low = S & -S
            out |= 1 << table[low.bit_length() - 1]
            S ^= low
        return out


@dataclass
class TensorProduct:
    module: FiniteKleeneModule
    left_factor: FiniteKleeneModule
    right_factor: FiniteKleeneModule
    pure: np.ndarray
    decomposition: tuple[tuple[tuple[int, int], ...], ...]
    provenance: str
    congruence: PairCongruence | None = None

    def __call__(self, m: int, n: int) -> int:
        return int(self.pure[m, n])

    @property
    def repairs(self):
        return tuple(self.congruence.repairs) if self.congruence is not None else ()


def pure_tensor(T: TensorProduct, m: int, n: int) -> int:
    return int(T.pure[m, n])


def _bit(i: int) -> int:
    return 1 << i


def _exhaustive(M, N, name, bounds: Bounds) -> TensorProduct:
    X = FreePairModule(M, N)
    nm, nn = M.size, N.size
    if X.size > 4096:
        raise SizeGuardError(f"{X.size} generator pairs exceed the exhaustive-path bound")
    B = M.right
    parent = list(range(X.size))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    # balanced: (m b, n) ~ (m, b n)
    ar_n, ar_m = np.arange(nn), np.arange(nm)
    p1 = (M.right_action[:, :, None] * nn + ar_n[None, None, :]).ravel().tolist()
    p2 = (ar_m[:, None, None] * nn + N.left_action[None, :, :]).ravel().tolist()
    for a, b in zip(p1, p2):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    roots = sorted({find(p) for p in range(X.size)})
    cidx = {r: i for i, r in enumerate(roots)}
    pair_class = [cidx[find(p)] for p in range(X.size)]
    class_rep = [X.pair(r) for r in roots]
    nc = len(roots)

    def c(m, n):
        return pair_class[m * nn + n]

    base = 0
    for n in range(nn):
        base |= _bit(c(M.zero, n))
    for m in range(nm):
        base |= _bit(c(m, N.zero))
    single = [0] * nc
    multi = set()

    def relate(x: int, y_bits: int):
        # {x} == y_bits as pair-sets
        single[x] |= y_bits
        if y_bits & (y_bits - 1) == 0:
            single[y_bits.bit_length() - 1] |= _bit(x)
        elif not (y_bits >> x) & 1:
            multi.add((y_bits, _bit(x)))

    addM, addN = M.add.tolist(), N.add.tolist()
    for n in range(nn):
        for m in range(nm):
            for m2 in range(m, nm):
                relate(c(addM[m][m2], n), _bit(c(m, n)) | _bit(c(m2, n)))
    for m in range(nm):
        for n in range(nn):
            for n2 in range(n, nn):
                relate(c(m, addN[n][n2]), _bit(c(m, n)) | _bit(c(m, n2)))
    for i in range(nc):
        single[i] &= ~_bit(i)
    cong = PairCongruence(X, pair_class, class_rep, base, single, sorted(multi))

    left_maps = right_maps = None
    if M.left is not None:
        left_maps = [[c(int(M.left_action[a, m]), n) for (m, n) in class_rep] for a in range(M.left.size)]
    if N.right is not None:
        right_maps = [[c(m, int(N.right_action[n, b])) for (m, n) in class_rep] for b in range(N.right.size)]

    while True:
        start = cong.close(0)
        found = {start: ()}
        queue = [start]
        while queue:
            S = queue.pop(0)
            for g in range(nc):
                if (S >> g) & 1:
                    continue
                T = cong.close(S | _bit(g))
                if T not in found:
                    found[T] = found[S] + (g,)
                    queue.append(T)
                    if len(found) > bounds.max_carrier:
                        raise SizeGuardError("tensor carrier exceeds the carrier bound")
        elems = sorted(found, key=lambda S: (bin(S).count("1"), S))
        index = {S: i for i, S in enumerate(elems)}
        size = len(elems)
        add = [[index[cong.close(Si | Sj)] for Sj in elems] for Si in elems]
        la = ra = None
        if left_maps is not None:
            la = [[index[cong.close(cong.image(S, left_maps[a]))] for S in elems] for a in range(M.left.size)]
        if right_maps is not None:
            ra = [[index[cong.close(cong.image(S, right_maps[b]))] for b in range(N.right.size)] for S in elems]
        labels = []
        for S in elems:
            gs = found[S]
            labels.append("+".join(f"{M.label(class_rep[g][0])}⊗{N.label(class_rep[g][1])}" for g in gs) or "0")
        Q = FiniteKleeneModule(name, add, index[start], M.left, la, N.right, ra, labels=labels)
        viol = quasi_identity_violations(Q)
        if not viol:
            break
        # never reached over finite algebras (a* is a finite sum of powers), kept for soundness
        for side, a, t in viol:
            S = elems[t]
            K = Q.algebra(side)
            maps = left_maps if side == "left" else right_maps
            grown = cong.image(S, maps[int(K.star[a])]) | S
            cong.repairs.append((side, a, t))
            us = range(M.left.size) if M.left is not None else [None]
            vs = range(N.right.size) if N.right is not None else [None]
            for u, v in itertools.product(us, vs):
                lhs, rhs = S, grown
                if u is not None:
                    lhs, rhs = cong.image(lhs, left_maps[u]), cong.image(rhs, left_maps[u])
                if v is not None:
                    lhs, rhs = cong.image(lhs, right_maps[v]), cong.image(rhs, right_maps[v])
                if rhs & ~lhs:
                    cong.multi.append((lhs, rhs))
    pure = np.array([[index[cong.close(_bit(c(m, n)))] for n in range(nn)] for m in range(nm)], dtype=np.int64)
    decomposition = tuple(tuple(class_rep[g] for g in found[S]) for S in elems)
    return TensorProduct(Q, M, N, pure, decomposition, "exhaustive", cong)


def _fast(M, N, name, bounds: Bounds) -> TensorProduct:
    B = M.right
    rc, lc = free_coordinates(M, "right"), free_coordinates(N, "left")
    eM, fN = M.basis["right"], N.basis["left"]
    r, s = len(eM), len(fN)
    q = B.size
    size = q ** (r * s)
    if not bounds.table_ok(size):
        raise SizeGuardError(f"fast-path tensor has {size} elements, over the bound")
    radix = q ** np.arange(r * s, dtype=np.int64)
    coeff = ((np.arange(size)[:, None] // radix) % q).reshape(size, r, s)

    def enc(arr):
        return arr.reshape(arr.shape[:-2] + (r * s,)) @ radix

    add = enc(B.add[coeff[:, None], coeff[None, :]])
    la = ra = None
    if M.left is not None:
        # a e_i = sum_k e_k alpha[a, k, i]
        alpha = rc[M.left_action[:, list(eM)]].transpose(0, 2, 1)
        la = np.empty((M.left.size, size), dtype=np.int64)
        for a in range(M.left.size):
            la[a] = enc(semiring_matmul(B.add, B.mul, alpha[a][None], coeff))
    if N.right is not None:
        # f_j c = sum_l beta[c, j, l] f_l
        beta = lc[N.right_action[list(fN), :]].transpose(1, 0, 2)
        ra = np.empty((size, N.right.size), dtype=np.int64)
        for b in range(N.right.size):
            ra[:, b] = enc(semiring_matmul(B.add, B.mul, coeff, beta[b][None]))
    pure = enc(B.mul[rc[:, None, :, None], lc[None, :, None, :]])
    decomposition = []
    for t in range(size):
        terms = []
        for i in range(r):
            for j in range(s):
                cij = int(coeff[t, i, j])
                if cij != B.zero:
                    terms.append((int(M.right_action[eM[i], cij]), int(fN[j])))
        decomposition.append(tuple(terms))
    labs = B.labels
    labels = ["[" + "; ".join(" ".join(labs[x] for x in row) for row in coeff[t]) + "]" for t in range(size)]
    zero = int(enc(np.full((r, s), B.zero)))
    Q = FiniteKleeneModule(name, add, zero, M.left, la, N.right, ra, labels=labels)
    return TensorProduct(Q, M, N, pure, tuple(decomposition), "free-fastpath")


def _propose_bases(T: TensorProduct) -> None:
    M, N, Q = T.left_factor, T.right_factor, T.module
    for side in ("left", "right"):
        if Q.algebra(side) is None:
            continue
        bm, bn = M.basis.get(side), N.basis.get(side)
        if bm is None or bn is None:
            continue
        Q.basis[side] = tuple(int(T.pure[x, y]) for x in bm for y in bn)
        if free_coordinates(Q, side) is None:
            del Q.basis[side]
            Q._coords.pop(side, None)


def tensor_product(M: FiniteKleeneModule, N: FiniteKleeneModule, method: str = "auto",
                   bounds: Bounds = DEFAULT_BOUNDS, name: str | None = None) -> TensorProduct:
    """M (x)_B N for M an (A, B)-bimodule (or right B-module) and N a (B, C)-bimodule (or left B-module)."""
    if M.right is None or N.left is None:
        raise AlgebraMismatchError(f"{M.name} needs a right action and {N.name} a left action")
    if M.right != N.left:
        raise AlgebraMismatchError(f"middle algebras differ: {M.right.name} vs {N.left.name}")
    name = name or f"({M.name}⊗{N.name})"
    fast_ok = free_coordinates(M, "right") is not None and free_coordinates(N, "left") is not None
    if method == "auto":
        method = "fast" if fast_ok else "exhaustive"
    if method == "fast":
        if not fast_ok:
            raise PreconditionError("fast path needs M free as right and N free as left module")
        T = _fast(M, N, name, bounds)
    elif method == "exhaustive":
        T = _exhaustive(M, N, name, bounds)
    else:
        raise ValueError(f"unknown method {method!r}")
    _propose_bases(T)
    return T


def tensor_map(T1: TensorProduct, T2: TensorProduct, f, g) -> tuple[int, ...]:
    """The map induced on tensors by f: M1 -> M2 and g: N1 -> N2 (via pure-tensor decompositions)."""
    Q = T2.module
    out = []
    for terms in T1.decomposition:
        out.append(Q.join(int(T2.pure[f[m], g[n]]) for m, n in terms))
    return tuple(out)


def check_tensor(T: TensorProduct) -> Report:
    """Bilinearity, balance, action compatibility and generation by pure tensors."""
    M, N, Q = T.left_factor, T.right_factor, T.module
    P = T.pure
    rep = Report(f"tensor invariants {Q.name}")
    lhs = P[M.add]  # [m, m2, n]
    rhs = Q.add[P[:, None, :], P[None, :, :]]
    _arr(rep, "additive_left", lhs == rhs, ("m", "m2", "n"))
    lhs = P[:, N.add].transpose(0, 1, 2)  # [m, n, n2]
    rhs = Q.add[P[:, :, None], P[:, None, :]]
    _arr(rep, "additive_right", lhs == rhs, ("m", "n", "n2"))
    _arr(rep, "zero_left", P[M.zero] == Q.zero, ("n",))
    _arr(rep, "zero_right", P[:, N.zero] == Q.zero, ("m",))
    # (m b) (x) n == m (x) (b n): P[R[m,b], n] vs P[m, L[b,n]]
    lhs = P[M.right_action[:, :, None], np.arange(N.size)[None, None, :]]
    rhs = P[np.arange(M.size)[:, None, None], N.left_action[None, :, :]]
    _arr(rep, "balanced", lhs == rhs, ("m", "b", "n"))
    if Q.left is not None:
        lhs = Q.left_action[:, P]                    # [a, m, n]
        rhs = P[M.left_action]                       # [a, m, n]
        _arr(rep, "left_action_compatible", lhs == rhs, ("a", "m", "n"))
    if Q.right is not None:
        lhs = Q.right_action[P]                      # [m, n, c]
        rhs = P[:, N.right_action]                   # [m, n, c]
        _arr(rep, "right_action_compatible", lhs == rhs, ("m", "n", "c"))
    recon = [Q.join(int(P[m, n]) for m, n in terms) for terms in T.decomposition]
    bad = [t for t, x in enumerate(recon) if x != t]
    rep.add("decomposition_sums", not bad, Q.size, {"t": bad[0]} if bad else None)
    return rep


def _arr(rep: Report, name: str, ok: np.ndarray, keys) -> None:
    ok = np.asarray(ok)
    if ok.all():
        rep.add(name, True, ok.size)
    else:
        bad = np.argwhere(~ok)[0]
        rep.add(name, False, ok.size, {k: int(v) for k, v in zip(keys, bad)})


# ---------------------------------------------------------------- adjunction

class Adjunction:
    """Hom_{A,C}(M (x) N, P)  <->  Hom_{A,B}(M, Hom_C(N, P)).

    Hom_C(N, P) (right C-linear maps) is an (A, B)-bimodule via
    (a f b)(n) = a f(b n).
    """

    def __init__(self, M, N, P, bounds: Bounds = DEFAULT_BOUNDS, tensor: TensorProduct | None = None):
        for X, what in ((M, "M"), (N, "N"), (P, "P")):
            if X.side != "bi":
                raise PreconditionError(f"{what} must be a bimodule")
        if P.left != M.left or P.right != N.right:
            raise AlgebraMismatchError("P must be an (A, C)-bimodule for M an (A,B)- and N a (B,C)-bimodule")
        self.M, self.N, self.P = M, N, P
        self.T = tensor or tensor_product(M, N, bounds=bounds)
        self.HNP, _ = hom_module(N, P, frozenset({"right"}), bounds, name=f"Hom({N.name},{P.name})")
        self.hnp_index = {f: i for i, f in enumerate(self.HNP.functions)}
        self.lhs = hom_set(self.T.module, P, frozenset({"left", "right"}), bounds)
        self.rhs = hom_set(M, self.HNP, frozenset({"left", "right"}), bounds)

    def curry(self, phi) -> tuple[int, ...]:
        out = []
        for m in range(self.M.size):
            f = tuple(int(phi[self.T.pure[m, n]]) for n in range(self.N.size))
            if f not in self.hnp_index:
                raise PreconditionError(f"curried map at m={m} is not right-linear")
            out.append(self.hnp_index[f])
        return tuple(out)

    def uncurry(self, psi) -> tuple[int, ...]:
        funcs = self.HNP.functions
        return tuple(self.P.join(funcs[psi[m]][n] for m, n in terms) for terms in self.T.decomposition)


def check_adjunction(M, N, P, pairs=None, bounds: Bounds = DEFAULT_BOUNDS) -> Report:
    """Curry/uncurry are inverse bijections and both naturality squares commute.

    ``pairs`` is a list of (alpha: M' -> M, beta: P -> P') homomorphisms;
    by default every pair of bimodule endomorphisms of M and of P.
    """
    adj = Adjunction(M, N, P, bounds)
    rep = Report(f"tensor adjunction {M.name} {N.name} {P.name}")
    rep.add("hom_sets_equinumerous", len(adj.lhs) == len(adj.rhs), 1,
            None if len(adj.lhs) == len(adj.rhs) else {"lhs": len(adj.lhs), "rhs": len(adj.rhs)})
    rhs_set, lhs_set = set(adj.rhs), set(adj.lhs)
    bad = next((phi for phi in adj.lhs if adj.curry(phi) not in rhs_set or adj.uncurry(adj.curry(phi)) != phi), None)
    rep.add("uncurry_after_curry", bad is None, len(adj.lhs), None if bad is None else {"phi": list(bad)})
    bad = next((psi for psi in adj.rhs if adj.uncurry(psi) not in lhs_set or adj.curry(adj.uncurry(psi)) != psi), None)
    rep.add("curry_after_uncurry", bad is None, len(adj.rhs), None if bad is None else {"psi": list(bad)})
    if pairs is None:
        alphas = [ModuleHomomorphism(M, M, f) for f in hom_set(M, M, frozenset({"left", "right"}), bounds)]
        betas = [ModuleHomomorphism(P, P, f) for f in hom_set(P, P, frozenset({"left", "right"}), bounds)]
        pairs = list(itertools.product(alphas, betas))
    cache: dict = {(id(M), id(P)): adj}
    sq1 = sq2 = 0
    fail1 = fail2 = None
    for alpha, beta in pairs:
        Mp, Pp = alpha.source, beta.target
        key = (id(Mp), id(Pp))
        if key not in cache:
            cache[key] = Adjunction(Mp, N, Pp, bounds)
        adj2 = cache[key]
        a_x_id = tensor_map(adj2.T, adj.T, alpha.map, tuple(range(N.size)))
        hnp2 = adj2.hnp_index
        funcs = adj.HNP.functions

        def post_beta(i):
            return hnp2[tuple(beta.map[v] for v in funcs[i])]

        for phi in adj.lhs:
            transported = tuple(beta.map[phi[t]] for t in a_x_id)
            left_path = adj2.curry(transported)
            cphi = adj.curry(phi)
            right_path = tuple(post_beta(cphi[alpha.map[m]]) for m in range(Mp.size))
            sq1 += 1
            if left_path != right_path and fail1 is None:
                fail1 = {"alpha": list(alpha.map), "beta": list(beta.map), "phi": list(phi)}
        for psi in adj.rhs:
            moved = tuple(post_beta(psi[alpha.map[m]]) for m in range(Mp.size))
            left_path = adj2.uncurry(moved)
            upsi = adj.uncurry(psi)
            right_path = tuple(beta.map[upsi[t]] for t in a_x_id)
            sq2 += 1
            if left_path != right_path and fail2 is None:
                fail2 = {"alpha": list(alpha.map), "beta": list(beta.map), "psi": list(psi)}
    rep.add("naturality_curry", fail1 is None, sq1, fail1)
    rep.add("naturality_uncurry", fail2 is None, sq2, fail2)
    rep.note(f"|Hom(M⊗N,P)| = {len(adj.lhs)}, |Hom(M,Hom(N,P))| = {len(adj.rhs)}, {len(pairs)} (alpha, beta) pairs")
    return rep


# ---------------------------------------------------------------- monoid laws

def check_monoid_laws(M, N=None, P=None, bounds: Bounds = DEFAULT_BOUNDS, iso_search: bool = True) -> Report:
    """Associativity of (x) and the identity laws A (x) M = M = M (x) B."""
    rep = Report(f"tensor laws {M.name}" + (f" {N.name} {P.name}" if N is not None else ""))
    if N is not None and P is not None:
        MN = tensor_product(M, N, bounds=bounds)
        NP = tensor_product(N, P, bounds=bounds)
        left = tensor_product(MN.module, P, bounds=bounds)
        right = tensor_product(M, NP.module, bounds=bounds)
        assoc = []
        for terms in left.decomposition:
            acc = []
            for t, p in terms:
                for m, n in MN.decomposition[t]:
                    acc.append(int(right.pure[m, NP.pure[n, p]]))
            assoc.append(right.module.join(acc))
        f = ModuleHomomorphism(left.module, right.module, tuple(assoc))
        iso = check_isomorphism(f)
        rep.add("associator_iso", iso.ok, left.module.size, None if iso.ok else iso.failures()[0].counterexample,
                detail=f"|(MN)P| = {left.module.size}, |M(NP)| = {right.module.size}")
        if iso_search:
            cert = module_iso_search(left.module, right.module, bounds)
            rep.add("associativity_iso_search", cert is not None, 1)
    if M.left is not None:
        A = regular_module(M.left, "bi")
        AM = tensor_product(A, M, bounds=bounds)
        f = ModuleHomomorphism(M, AM.module, tuple(int(AM.pure[M.left.one, m]) for m in range(M.size)))
        iso = check_isomorphism(f)
        rep.add("left_unit_iso", iso.ok, M.size, None if iso.ok else iso.failures()[0].counterexample,
                detail="m -> 1⊗m")
    if M.right is not None:
        Bm = regular_module(M.right, "bi")
        MB = tensor_product(M, Bm, bounds=bounds)
        f = ModuleHomomorphism(M, MB.module, tuple(int(MB.pure[m, M.right.one]) for m in range(M.size)))
        iso = check_isomorphism(f)
        rep.add("right_unit_iso", iso.ok, M.size, None if iso.ok else iso.failures()[0].counterexample,
                detail="m -> m⊗1")
    return rep


__all__ = [
    "Adjunction",
    "FreePairModule",
    "PairCongruence",
    "TensorProduct",
    "check_adjunction",
    "check_monoid_laws",
    "check_tensor",
    "is_homomorphism",
    "pure_tensor",
    "tensor_map",
    "tensor_product",
]
