"""Finite Kleene modules: construction, axiom checking, homomorphisms, duals, isomorphism search."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .algebra import DEFAULT_BOUNDS, Bounds, FiniteKleeneAlgebra, _table, subalgebra
from .errors import AlgebraMismatchError, PreconditionError, SizeGuardError, ValidationError
from .laws import check_law
from .report import Report

SIDES = ("left", "right")


class FiniteKleeneModule:
    """A finite join-semilattice with left and/or right scalar action tables.

    ``left_action[a, m]`` is a*m for a in the left algebra and
    ``right_action[m, b]`` is m*b. ``basis`` optionally records claimed
    free bases per side; they are verified before any use. ``functions``
    holds the underlying maps when the carrier is a set of homomorphisms.
    """

    def __init__(self, name, add, zero, left=None, left_action=None, right=None, right_action=None,
                 labels=None, basis=None, functions=None):
        add_arr = np.asarray(add)
        if add_arr.ndim != 2:
            raise ValidationError(f"{name}: add table must be square")
        n = add_arr.shape[0]
        if n < 1:
            raise ValidationError(f"{name}: empty carrier")
        self.name = name
        self.size = n
        self.add = _table(add, (n, n), n, f"{name}.add")
        if not isinstance(zero, (int, np.integer)) or not 0 <= int(zero) < n:
            raise ValidationError(f"{name}: zero index {zero!r} out of range")
        self.zero = int(zero)
        if (left is None) != (left_action is None) or (right is None) != (right_action is None):
            raise ValidationError(f"{name}: each action needs both an algebra and a table")
        self.left = left
        self.right = right
        self.left_action = _table(left_action, (left.size, n), n, f"{name}.left_action") if left is not None else None
        self.right_action = _table(right_action, (n, right.size), n, f"{name}.right_action") if right is not None else None
        if labels is not None and len(labels) != n:
            raise ValidationError(f"{name}: {len(labels)} labels for {n} elements")
        self._labels = tuple(str(s) for s in labels) if labels is not None else None
        self.basis = {k: tuple(int(x) for x in v) for k, v in (basis or {}).items()}
        self.functions = tuple(tuple(int(x) for x in f) for f in functions) if functions is not None else None
        self._coords: dict = {}

    @property
    def side(self) -> str:
        if self.left is not None and self.right is not None:
            return "bi"
        if self.left is not None:
            return "left"
        if self.right is not None:
            return "right"
        return "none"

    def algebra(self, side: str) -> FiniteKleeneAlgebra | None:
        return self.left if side == "left" else self.right

    def leq(self, x: int, y: int) -> bool:
        return int(self.add[x, y]) == y

    def label(self, i: int) -> str:
        return self._labels[i] if self._labels is not None else str(i)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.label(i) for i in range(self.size))

    def act(self, side: str, a: int, m: int) -> int:
        return int(self.left_action[a, m]) if side == "left" else int(self.right_action[m, a])

    def join(self, items) -> int:
        acc = self.zero
        for x in items:
            acc = int(self.add[acc, x])
        return acc

    def renamed(self, name: str) -> "FiniteKleeneModule":
        return FiniteKleeneModule(name, self.add, self.zero, self.left, self.left_action, self.right,
                                  self.right_action, self._labels, self.basis, self.functions)

    def __repr__(self):
        return f"<FiniteKleeneModule {self.name} |{self.size}| {self.side}>"


@dataclass(frozen=True)
class ModuleHomomorphism:
    source: FiniteKleeneModule
    target: FiniteKleeneModule
    map: tuple[int, ...]
    respect: frozenset = field(default=None)

    def __post_init__(self):
        m = tuple(int(x) for x in self.map)
        if len(m) != self.source.size or any(not 0 <= x < self.target.size for x in m):
            raise ValidationError("homomorphism table does not fit source/target")
        object.__setattr__(self, "map", m)
        if self.respect is None:
            object.__setattr__(self, "respect", shared_sides(self.source, self.target))

    def __call__(self, m: int) -> int:
        return self.map[m]

    def check(self) -> Report:
        return check_module_homomorphism(self.source, self.target, self.map, self.respect)

    def is_bijective(self) -> bool:
        return len(set(self.map)) == self.target.size == self.source.size

    def inverse(self) -> "ModuleHomomorphism":
        if not self.is_bijective():
            raise PreconditionError("map is not bijective")
        inv = [0] * self.target.size
        for x, y in enumerate(self.map):
            inv[y] = x
        return ModuleHomomorphism(self.target, self.source, tuple(inv), self.respect)

    def then(self, g: "ModuleHomomorphism") -> "ModuleHomomorphism":
        return ModuleHomomorphism(self.source, g.target, tuple(g.map[x] for x in self.map),
                                  self.respect & g.respect)


def shared_sides(M: FiniteKleeneModule, N: FiniteKleeneModule) -> frozenset:
    return frozenset(s for s in SIDES if M.algebra(s) is not None and M.algebra(s) == N.algebra(s))


def check_module_homomorphism(M, N, f, respect=None) -> Report:
    respect = shared_sides(M, N) if respect is None else frozenset(respect)
    f = np.asarray(f, dtype=np.int64)
    n = M.size
    rep = Report(f"hom {M.name} -> {N.name}")
    rep.add("preserves_zero", f[M.zero] == N.zero, 1, {"zero": M.zero})
    check_law(rep, "preserves_add", ("x", "y"), (n, n), lambda x: f[M.add[x]] == N.add[f[x][:, None], f[None, :]])
    if "left" in respect:
        k = M.left.size
        check_law(rep, "preserves_left_action", ("a", "m"), (k, n),
                  lambda a: f[M.left_action[a]] == N.left_action[a[:, None], f[None, :]])
    if "right" in respect:
        check_law(rep, "preserves_right_action", ("m", "b"), (n, M.right.size),
                  lambda m: f[M.right_action[m]] == N.right_action[f[m]])
    return rep


def is_homomorphism(M, N, f, respect=None) -> bool:
    respect = shared_sides(M, N) if respect is None else frozenset(respect)
    f = np.asarray(f, dtype=np.int64)
    if f[M.zero] != N.zero:
        return False
    if not np.array_equal(f[M.add], N.add[f[:, None], f[None, :]]):
        return False
    if "left" in respect and not np.array_equal(f[M.left_action], N.left_action[:, f]):
        return False
    if "right" in respect and not np.array_equal(f[M.right_action], N.right_action[f]):
        return False
    return True


# ---------------------------------------------------------------- axioms

def check_module_axioms(M: FiniteKleeneModule) -> Report:
    add, n, z = M.add, M.size, M.zero
    ar = np.arange(n)
    rep = Report(f"module check {M.name}")

    def leq(u, v):
        return add[u, v] == v

    check_law(rep, "add_associative", ("x", "y", "z"), (n, n, n),
              lambda x: add[add[x][:, :, None], ar[None, None, :]] == add[x[:, None, None], add[None, :, :]])
    check_law(rep, "add_commutative", ("x", "y"), (n, n), lambda x: add[x] == add[:, x].T)
    check_law(rep, "add_idempotent", ("x",), (n,), lambda x: add[x, x] == x)
    check_law(rep, "add_zero_identity", ("x",), (n,), lambda x: add[z, x] == x)

    if M.left is not None:
        K, L = M.left, M.left_action
        k = K.size
        check_law(rep, "left_scalar_additive", ("a", "b", "m"), (k, k, n),
                  lambda a: L[K.add[a][:, :, None], ar[None, None, :]] == add[L[a][:, None, :], L[None, :, :]])
        check_law(rep, "left_vector_additive", ("a", "m", "p"), (k, n, n),
                  lambda a: L[a[:, None, None], add[None]] == add[L[a][:, :, None], L[a][:, None, :]])
        check_law(rep, "left_associative", ("a", "b", "m"), (k, k, n),
                  lambda a: L[K.mul[a][:, :, None], ar[None, None, :]] == L[a[:, None, None], L[None, :, :]])
        check_law(rep, "left_unit", ("m",), (n,), lambda m: L[K.one, m] == m)
        check_law(rep, "left_zero_scalar", ("m",), (n,), lambda m: L[K.zero, m] == z)
        check_law(rep, "left_zero_vector", ("a",), (k,), lambda a: L[a, z] == z)
        check_law(rep, "left_quasi_identity", ("a", "m"), (k, n),
                  lambda a: ~leq(L[a], ar[None, :]) | leq(L[K.star[a]], ar[None, :]))
    if M.right is not None:
        K, R = M.right, M.right_action
        k = K.size
        RT = R.T  # RT[b, m] = m*b
        check_law(rep, "right_scalar_additive", ("a", "b", "m"), (k, k, n),
                  lambda a: RT[K.add[a][:, :, None], ar[None, None, :]] == add[RT[a][:, None, :], RT[None, :, :]])
        check_law(rep, "right_vector_additive", ("a", "m", "p"), (k, n, n),
                  lambda a: RT[a[:, None, None], add[None]] == add[RT[a][:, :, None], RT[a][:, None, :]])
        # m(ab) = (ma)b
        check_law(rep, "right_associative", ("a", "b", "m"), (k, k, n),
                  lambda a: RT[K.mul[a][:, :, None], ar[None, None, :]] == RT[np.arange(k)[None, :, None], RT[a][:, None, :]])
        check_law(rep, "right_unit", ("m",), (n,), lambda m: R[m, K.one] == m)
        check_law(rep, "right_zero_scalar", ("m",), (n,), lambda m: R[m, K.zero] == z)
        check_law(rep, "right_zero_vector", ("a",), (k,), lambda a: R[z, a] == z)
        check_law(rep, "right_quasi_identity", ("a", "m"), (k, n),
                  lambda a: ~leq(RT[a], ar[None, :]) | leq(RT[K.star[a]], ar[None, :]))
    if M.left is not None and M.right is not None:
        L, R = M.left_action, M.right_action
        check_law(rep, "bimodule_compatible", ("a", "m", "b"), (M.left.size, n, M.right.size),
                  lambda a: R[L[a]] == L[a[:, None, None], R[None, :, :]])
    return rep


# ---------------------------------------------------------------- constructions

def regular_module(K: FiniteKleeneAlgebra, side: str = "bi") -> FiniteKleeneModule:
    """K acting on itself by multiplication (``bi`` gives the identity bimodule K_K_K)."""
    left = K if side in ("left", "bi") else None
    right = K if side in ("right", "bi") else None
    tag = {"left": "left", "right": "right", "bi": "reg"}[side]
    return FiniteKleeneModule(
        f"{K.name}_{tag}", K.add, K.zero,
        left, K.mul if left is not None else None,
        right, K.mul if right is not None else None,
        labels=K.labels, basis={s: (K.one,) for s in SIDES},
    )


def algebra_as_bimodule(K: FiniteKleeneAlgebra, A=None) -> FiniteKleeneModule:
    """K as an (A, A)-bimodule over a subalgebra given by a subset of K's indices."""
    if A is None or sorted(set(int(x) for x in A)) == list(range(K.size)):
        return regular_module(K, "bi")
    sub = subalgebra(K, A)
    emb = np.array(sub.embedding)
    return FiniteKleeneModule(
        f"{K.name} over {sub.name}", K.add, K.zero, sub, K.mul[emb, :], sub, K.mul[:, emb], labels=K.labels
    )


def _restrict(M: FiniteKleeneModule, elems, name, left=None, left_map=None, right=None, right_map=None):
    """Restrict M to a subset closed under add and the (possibly re-indexed) actions."""
    elems = sorted(int(x) for x in elems)
    pos = {x: i for i, x in enumerate(elems)}
    sub = np.array(elems)
    try:
        add = [[pos[int(v)] for v in row] for row in M.add[np.ix_(sub, sub)]]
        la = ra = None
        if left is not None:
            la = [[pos[int(v)] for v in M.left_action[a, sub]] for a in left_map]
        if right is not None:
            ra = [[pos[int(v)] for v in M.right_action[x, right_map]] for x in sub]
    except KeyError as exc:
        raise ValidationError(f"{name}: subset not closed (reaches {exc.args[0]})") from None
    return FiniteKleeneModule(name, add, pos[M.zero], left, la, right, ra, labels=[M.label(x) for x in elems])


def submodule_generated(K: FiniteKleeneAlgebra, gens, side: str = "left", M: FiniteKleeneModule | None = None):
    """Least subset of K (or of M) containing ``gens`` closed under add, zero and the side's action.

    Returns ``(module, elements)`` with ``elements`` the carrier indices in the ambient structure.
    """
    gens = [int(g) for g in gens]
    if not gens:
        raise PreconditionError("need at least one generator")
    if M is None:
        M = regular_module(K, "bi")
    sides = ("left", "right") if side == "bi" else (side,)
    known = {M.zero, *gens}
    frontier = list(known)
    while frontier:
        new = set()
        for x in frontier:
            for s in sides:
                acts = M.left_action[:, x] if s == "left" else M.right_action[x, :]
                new.update(int(v) for v in acts)
            new.update(int(v) for v in M.add[x, sorted(known)])
        new -= known
        known |= new
        frontier = sorted(new)
    left = M.left if "left" in sides else None
    right = M.right if "right" in sides else None
    ar = range(K.size)
    sub = _restrict(M, known, f"<{','.join(M.label(g) for g in gens)}>_{side}",
                    left, list(ar) if left is not None else None, right, list(ar) if right is not None else None)
    return sub, tuple(sorted(known))


def free_module(K: FiniteKleeneAlgebra, B, side: str = "left", bounds: Bounds = DEFAULT_BOUNDS) -> FiniteKleeneModule:
    """K^B with pointwise structure; the characteristic functions form the basis.

    Element index ``sum(v[b] * q**b)``.
    """
    labels_b = list(range(B)) if isinstance(B, int) else list(B)
    r = len(labels_b)
    q = K.size
    size = q**r
    if size > bounds.max_carrier:
        raise SizeGuardError(f"K^{r} has {size} elements, over the carrier bound")
    radix = q ** np.arange(r, dtype=np.int64)
    vec = (np.arange(size)[:, None] // radix) % q if r else np.zeros((1, 0), dtype=np.int64)
    add = K.add[vec[:, None, :], vec[None, :, :]] @ radix
    left = right = la = ra = None
    if side in ("left", "bi"):
        left, la = K, K.mul[np.arange(q)[:, None, None], vec[None, :, :]] @ radix
    if side in ("right", "bi"):
        right, ra = K, K.mul[vec[:, None, :], np.arange(q)[None, :, None]] @ radix
    zero_vec = np.full(r, K.zero, dtype=np.int64)
    basis = []
    for i in range(r):
        v = zero_vec.copy()
        v[i] = K.one
        basis.append(int(v @ radix))
    zero = int(zero_vec @ radix)
    labs = K.labels
    labels = ["(" + ",".join(labs[x] for x in row) + ")" for row in vec]
    return FiniteKleeneModule(
        f"{K.name}^{r}", add, zero, left, la, right, ra, labels=labels,
        basis={s: tuple(basis) for s in SIDES},
    )


def free_coordinates(M: FiniteKleeneModule, side: str):
    """Coordinate table of M over its recorded basis on ``side``, or None if not free there.

    Left side: m = sum_i c_i e_i ; right side: m = sum_i e_i c_i.
    Returns an int array of shape (|M|, r).
    """
    if side in M._coords:
        return M._coords[side]
    result = None
    basis = M.basis.get(side)
    K = M.algebra(side)
    if basis is not None and K is not None:
        r = len(basis)
        q = K.size
        if q**r == M.size:
            combos = (np.arange(q**r)[:, None] // (q ** np.arange(r))) % q if r else np.zeros((1, 0), dtype=np.int64)
            acc = np.full(len(combos), M.zero)
            for i, e in enumerate(basis):
                term = M.left_action[combos[:, i], e] if side == "left" else M.right_action[e, combos[:, i]]
                acc = M.add[acc, term]
            if len(set(acc.tolist())) == M.size:
                result = np.empty((M.size, r), dtype=np.int64)
                result[acc] = combos
                result.setflags(write=False)
    M._coords[side] = result
    return result


def extend_from_basis(M: FiniteKleeneModule, N: FiniteKleeneModule, images, side: str = "left") -> tuple[int, ...]:
    """The unique map sending the basis of a free M to ``images`` and extending linearly."""
    coords = free_coordinates(M, side)
    if coords is None:
        raise PreconditionError(f"{M.name} is not free on its recorded {side} basis")
    out = []
    for m in range(M.size):
        acc = N.zero
        for c, y in zip(coords[m], images):
            acc = N.add[acc, N.act(side, int(c), y)]
        out.append(int(acc))
    return tuple(out)


# ---------------------------------------------------------------- homomorphisms

def _generators(M: FiniteKleeneModule, respect):
    """Greedy generating set under add and the respected actions, plus a derivation plan."""
    known = {M.zero}
    plan: list[tuple] = []
    gens: list[int] = []

    def close(start):
        frontier = [start]
        while frontier:
            new = []
            for x in frontier:
                for s in respect:
                    K = M.algebra(s)
                    for a in range(K.size):
                        y = M.act(s, a, x)
                        if y not in known:
                            known.add(y)
                            plan.append((y, s, a, x))
                            new.append(y)
                for y0 in sorted(known):
                    y = int(M.add[x, y0])
                    if y not in known:
                        known.add(y)
                        plan.append((y, "add", x, y0))
                        new.append(y)
            frontier = new

    down = (M.add == np.arange(M.size)[None, :]).sum(axis=0)
    for x in sorted(range(M.size), key=lambda x: (int(down[x]), x)):
        if x not in known:
            gens.append(x)
            known.add(x)
            plan.append((x, "gen", len(gens) - 1, None))
            close(x)
    return gens, plan


def hom_set(M: FiniteKleeneModule, N: FiniteKleeneModule, respect=None, bounds: Bounds = DEFAULT_BOUNDS):
    """All homomorphisms M -> N preserving zero, add and the ``respect`` actions, sorted."""
    respect = shared_sides(M, N) if respect is None else frozenset(respect)
    for s in respect:
        if M.algebra(s) is None or M.algebra(s) != N.algebra(s):
            raise AlgebraMismatchError(f"{s} actions of {M.name} and {N.name} are over different algebras")
    order = tuple(s for s in SIDES if s in respect)
    gens, plan = _generators(M, order)
    candidates = N.size ** len(gens)
    if candidates > bounds.hom_bound:
        raise SizeGuardError(f"{candidates} candidate maps {M.name} -> {N.name} exceed the hom bound")
    out = []
    for images in itertools.product(range(N.size), repeat=len(gens)):
        f = [0] * M.size
        f[M.zero] = N.zero
        for y, op, a, x in plan:
            if op == "gen":
                f[y] = images[a]
            elif op == "add":
                f[y] = int(N.add[f[a], f[x]])
            else:
                f[y] = N.act(op, a, f[x])
        if is_homomorphism(M, N, f, respect):
            out.append(tuple(f))
    out.sort()
    return out


def _residual(M: FiniteKleeneModule, N: FiniteKleeneModule, respect):
    """Actions left over on Hom(M, N) once ``respect`` is preserved.

    Returns {side: (algebra, kind)} with kind naming how the scalar enters.
    """
    res = {}
    if "left" in respect and "right" not in respect:
        if M.right is not None:
            res["left"] = (M.right, "precompose_right")   # (b f)(m) = f(m b)
        if N.right is not None:
            res["right"] = (N.right, "postcompose_right")  # (f c)(m) = f(m) c
    elif "right" in respect and "left" not in respect:
        if N.left is not None:
            res["left"] = (N.left, "postcompose_left")    # (d f)(m) = d f(m)
        if M.left is not None:
            res["right"] = (M.left, "precompose_left")    # (f a)(m) = f(a m)
    if not res and len(respect) == 1:
        (s,) = respect
        K = M.algebra(s)
        if K.is_commutative():
            # pointwise action is a homomorphism only over a commutative algebra
            res[s] = (K, "postcompose_left" if s == "left" else "postcompose_right")
    return res


def hom_module(M: FiniteKleeneModule, N: FiniteKleeneModule, respect=None, bounds: Bounds = DEFAULT_BOUNDS,
               name: str | None = None):
    """Hom(M, N) with pointwise addition and the residual actions.

    ``respect`` defaults to the left side when both modules act on the left
    over the same algebra, otherwise the shared right side. Returns
    ``(module, homomorphisms)``; the module's ``functions`` are the maps.
    """
    if respect is None:
        shared = shared_sides(M, N)
        if "left" in shared:
            respect = frozenset({"left"})
        elif "right" in shared:
            respect = frozenset({"right"})
        else:
            raise AlgebraMismatchError(f"{M.name} and {N.name} share no action")
    respect = frozenset(respect)
    maps = hom_set(M, N, respect, bounds)
    res = _residual(M, N, respect)
    if not res:
        raise PreconditionError("Hom carries no residual action; use hom_set for bare hom sets")
    F = np.array(maps, dtype=np.int64).reshape(len(maps), M.size)
    index = {f: i for i, f in enumerate(maps)}

    def lookup(rows):
        return [[index[tuple(int(v) for v in r)] for r in block] for block in rows]

    add = lookup(N.add[F[:, None, :], F[None, :, :]])
    zero = index[tuple([N.zero] * M.size)]
    tables = {}
    for s, (K, kind) in res.items():
        ks = np.arange(K.size)
        if kind == "precompose_right":
            acted = F[:, M.right_action.T]            # [f, b, m] = f(m b)
        elif kind == "precompose_left":
            acted = F[:, M.left_action]               # [f, a, m] = f(a m)
        elif kind == "postcompose_left":
            acted = N.left_action[ks[None, :, None], F[:, None, :]]
        else:
            acted = N.right_action[F[:, None, :], ks[None, :, None]]
        tab = lookup(acted)                           # [f][k]
        tables[s] = np.array(tab).T if s == "left" else np.array(tab)
    left = res.get("left", (None,))[0]
    right = res.get("right", (None,))[0]
    labels = ["[" + ",".join(N.label(v) for v in f) + "]" for f in maps]
    mod = FiniteKleeneModule(
        name or f"Hom({M.name},{N.name})", add, zero,
        left, tables.get("left"), right, tables.get("right"), labels=labels, functions=maps,
    )
    homs = [ModuleHomomorphism(M, N, f, respect) for f in maps]
    return mod, homs


def dual_module(M: FiniteKleeneModule, over: str | None = None, bounds: Bounds = DEFAULT_BOUNDS) -> FiniteKleeneModule:
    """Homomorphisms into the base algebra, with the sides swapped.

    ``over`` picks which action the functionals respect; it defaults to the
    module's only side, or the left side of a bimodule.
    """
    if over is None:
        over = M.side if M.side in SIDES else "left"
    K = M.algebra(over)
    if K is None:
        raise PreconditionError(f"{M.name} has no {over} action")
    target = regular_module(K, "bi")
    D, _ = hom_module(M, target, frozenset({over}), bounds, name=f"{M.name}°")
    # the dual of a free module is free on the dual basis
    basis = M.basis.get(over)
    if basis is not None and free_coordinates(M, over) is not None:
        dual_basis = []
        for i, _e in enumerate(basis):
            images = [K.one if j == i else K.zero for j in range(len(basis))]
            f = extend_from_basis(M, target, images, over)
            dual_basis.append(D.functions.index(f))
        other = "right" if over == "left" else "left"
        D.basis = {other: tuple(dual_basis)}
    return D


# ---------------------------------------------------------------- isomorphism

def join_irreducibles(M: FiniteKleeneModule) -> list[int]:
    out = []
    for x in range(M.size):
        if x == M.zero:
            continue
        below = [y for y in range(M.size) if y != x and M.leq(y, x)]
        if M.join(below) != x:
            out.append(x)
    return out


def _same_structure_type(M: FiniteKleeneModule, N: FiniteKleeneModule) -> None:
    if M.side != N.side:
        raise AlgebraMismatchError(f"{M.name} is a {M.side} module, {N.name} a {N.side} module")
    for s in SIDES:
        if M.algebra(s) is not None and M.algebra(s) != N.algebra(s):
            raise AlgebraMismatchError(f"{s} algebras of {M.name} and {N.name} differ")


def module_iso_search(M: FiniteKleeneModule, N: FiniteKleeneModule, bounds: Bounds = DEFAULT_BOUNDS):
    """Decide M ≅ N; returns a ModuleHomomorphism isomorphism or None.

    Zero goes to zero; the search then assigns join-irreducibles (which
    generate the semilattice) to join-irreducibles with the same order and
    action profile, backtracking on order and action consistency.
    """
    _same_structure_type(M, N)
    if M.size != N.size:
        return None
    jm, jn = join_irreducibles(M), join_irreducibles(N)
    if len(jm) != len(jn):
        return None
    sides = [s for s in SIDES if M.algebra(s) is not None]

    def profile(X):
        down = (X.add == np.arange(X.size)[None, :]).sum(axis=0)
        up = (X.add == np.arange(X.size)[:, None]).sum(axis=1)
        prof = []
        for x in range(X.size):
            acts = tuple(tuple(int(down[X.act(s, a, x)]) for a in range(X.algebra(s).size)) for s in sides)
            prof.append((int(down[x]), int(up[x]), acts))
        return prof

    pm, pn = profile(M), profile(N)
    if sorted(pm) != sorted(pn):
        return None
    below = {x: [j for j in jm if M.leq(j, x)] for x in range(M.size)}
    cand = {j: [k for k in jn if pn[k] == pm[j]] for j in jm}
    order = sorted(jm, key=lambda j: (len(cand[j]), j))
    assigned: dict[int, int] = {}
    nodes = 0

    def partial_image(x):
        bs = below[x]
        if all(b in assigned for b in bs):
            return N.join(assigned[b] for b in bs)
        return None

    def consistent(j):
        y = assigned[j]
        for j2, y2 in assigned.items():
            if M.leq(j, j2) != N.leq(y, y2) or M.leq(j2, j) != N.leq(y2, y):
                return False
        for j2, y2 in assigned.items():
            for s in sides:
                for a in range(M.algebra(s).size):
                    img = partial_image(M.act(s, a, j2))
                    if img is not None and img != N.act(s, a, y2):
                        return False
        return True

    def search(i):
        nonlocal nodes
        nodes += 1
        if nodes > bounds.iso_nodes:
            raise SizeGuardError("isomorphism search exceeded the node bound")
        if i == len(order):
            f = tuple(N.join(assigned[b] for b in below[x]) for x in range(M.size))
            if len(set(f)) == N.size and is_homomorphism(M, N, f):
                inv = [0] * N.size
                for x, y in enumerate(f):
                    inv[y] = x
                if is_homomorphism(N, M, inv):
                    return f
            return None
        j = order[i]
        used = set(assigned.values())
        for k in cand[j]:
            if k in used:
                continue
            assigned[j] = k
            if consistent(j):
                found = search(i + 1)
                if found is not None:
                    return found
            del assigned[j]
        return None

    f = search(0)
    return ModuleHomomorphism(M, N, f) if f is not None else None


def check_isomorphism(f: ModuleHomomorphism) -> Report:
    """Bijective homomorphism whose inverse is also a homomorphism."""
    rep = Report(f"iso {f.source.name} -> {f.target.name}")
    rep.merge(f.check())
    bij = f.is_bijective()
    rep.add("bijective", bij, f.source.size, None if bij else {"image_size": len(set(f.map)),
                                                                "target_size": f.target.size})
    if bij:
        rep.merge(f.inverse().check(), prefix="inverse.")
    return rep


def all_isomorphisms_bruteforce(M: FiniteKleeneModule, N: FiniteKleeneModule):
    """Every bijection that is an isomorphism (oracle for tiny carriers)."""
    if M.size != N.size:
        return []
    return [p for p in itertools.permutations(range(N.size)) if is_homomorphism(M, N, p)]

