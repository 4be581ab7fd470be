"""Finite Kleene algebras given by tables, matrix algebras over them, and their axioms."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import AlgebraMismatchError, SizeGuardError, SubalgebraError, ValidationError
from .laws import check_law
from .report import Report


@dataclass(frozen=True)
class Bounds:
    max_carrier: int = 65536
    hom_bound: int = 1 << 20
    # a materialized binary table holds size**2 entries
    max_table: int = 1 << 24
    iso_nodes: int = 1_000_000

    def table_ok(self, size: int) -> bool:
        return size <= self.max_carrier and size * size <= self.max_table


DEFAULT_BOUNDS = Bounds()


def _table(data, shape: tuple[int, ...], n: int, what: str) -> np.ndarray:
    try:
        arr = np.array(data, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{what}: not an integer table ({exc})") from None
    if arr.shape != shape:
        raise ValidationError(f"{what}: expected shape {shape}, got {arr.shape}")
    if arr.size and (arr.min() < 0 or arr.max() >= n):
        raise ValidationError(f"{what}: entries must lie in [0, {n})")
    arr.setflags(write=False)
    return arr


def semiring_matmul(add: np.ndarray, mul: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Batched matrix product over a table semiring; shapes (..., p, q) @ (..., q, r)."""
    prods = mul[x[..., :, :, None], y[..., None, :, :]]
    acc = prods[..., 0, :]
    for k in range(1, prods.shape[-2]):
        acc = add[acc, prods[..., k, :]]
    return acc


class FiniteKleeneAlgebra:
    """A Kleene algebra on ``range(size)`` given by operation tables.

    Equality is structural (tables, zero, one); names and labels are cosmetic.
    """

    def __init__(self, name, add, mul, star, zero, one, labels=None, embedding=None):
        add_arr = np.asarray(add)
        if add_arr.ndim != 2:
            raise ValidationError(f"{name}: add table must be square")
        n = add_arr.shape[0]
        if n < 1:
            raise ValidationError(f"{name}: empty carrier")
        self.name = name
        self._size = n
        self._add = _table(add, (n, n), n, f"{name}.add")
        self._mul = _table(mul, (n, n), n, f"{name}.mul")
        self._star = _table(star, (n,), n, f"{name}.star")
        self.zero = self._index(zero, "zero")
        self.one = self._index(one, "one")
        if labels is not None and len(labels) != n:
            raise ValidationError(f"{name}: {len(labels)} labels for {n} elements")
        self._labels = tuple(str(s) for s in labels) if labels is not None else None
        # indices of these elements inside a parent algebra, when carved out of one
        self.embedding = tuple(int(i) for i in embedding) if embedding is not None else None

    def _index(self, i, what: str) -> int:
        if not isinstance(i, (int, np.integer)) or not 0 <= int(i) < self._size:
            raise ValidationError(f"{self.name}: {what} index {i!r} out of range")
        return int(i)

    @property
    def size(self) -> int:
        return self._size

    @property
    def add(self) -> np.ndarray:
        return self._add

    @property
    def mul(self) -> np.ndarray:
        return self._mul

    @property
    def star(self) -> np.ndarray:
        return self._star

    def leq(self, a: int, b: int) -> bool:
        return int(self.add[a, b]) == b

    def label(self, i: int) -> str:
        return self._labels[i] if self._labels is not None else str(i)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.label(i) for i in range(self.size))

    def element(self, i: int) -> "Element":
        return Element(self, int(i))

    def index_of(self, label: str) -> int:
        for i in range(self.size):
            if self.label(i) == label:
                return i
        raise KeyError(label)

    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    @cached_property
    def fingerprint(self) -> tuple:
        return (self.size, self.zero, self.one, self.add.tobytes(), self.mul.tobytes(), self.star.tobytes())

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FiniteKleeneAlgebra):
            return NotImplemented
        return self.fingerprint == other.fingerprint

    def __hash__(self):
        return hash(self.fingerprint)

    def __repr__(self):
        return f"<{type(self).__name__} {self.name} |{self.size}|>"


class MatrixAlgebra(FiniteKleeneAlgebra):
    """n x n matrices over a finite Kleene algebra.

    Element index ``sum(entry[i][j] * q**(i*n + j))`` with ``q = |base|``.
    Tables are built on first access and only within the bounds; beyond them
    the algebra stays structural and is used through :class:`MatrixElement`.
    """

    def __init__(self, base: FiniteKleeneAlgebra, dim: int, bounds: Bounds = DEFAULT_BOUNDS):
        if dim < 1:
            raise ValidationError("matrix dimension must be positive")
        self.base = base
        self.dim = dim
        self.bounds = bounds
        self.name = f"M{dim}({base.name})"
        self._size = base.size ** (dim * dim)
        self._labels = None
        self.embedding = None
        self.zero = self.encode([[base.zero] * dim for _ in range(dim)])
        self.one = self.encode([[base.one if i == j else base.zero for j in range(dim)] for i in range(dim)])

    @property
    def materializable(self) -> bool:
        return self.bounds.table_ok(self._size)

    def _guard(self):
        if not self.materializable:
            raise SizeGuardError(
                f"{self.name} has {self._size} elements; tables exceed the carrier/table bound"
            )

    def encode(self, entries) -> int:
        q, n = self.base.size, self.dim
        idx = 0
        for i in range(n):
            for j in range(n):
                idx += int(entries[i][j]) * q ** (i * n + j)
        return idx

    def entries(self, idx: int) -> tuple[tuple[int, ...], ...]:
        q, n = self.base.size, self.dim
        flat = [(idx // q**k) % q for k in range(n * n)]
        return tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n))

    def unit(self, i: int, j: int) -> int:
        """Index of E_ij (0-based): zero except base one at (i, j)."""
        rows = [[self.base.zero] * self.dim for _ in range(self.dim)]
        rows[i][j] = self.base.one
        return self.encode(rows)

    def matrix(self, idx: int) -> "MatrixElement":
        return MatrixElement(self.base, self.entries(idx))

    @cached_property
    def _radix(self) -> np.ndarray:
        return self.base.size ** np.arange(self.dim * self.dim, dtype=np.int64)

    def encode_array(self, arr: np.ndarray) -> np.ndarray:
        n = self.dim
        flat = arr.reshape(arr.shape[:-2] + (n * n,))
        return flat @ self._radix

    @cached_property
    def all_entries(self) -> np.ndarray:
        self._guard()
        q, n = self.base.size, self.dim
        digits = (np.arange(self._size, dtype=np.int64)[:, None] // self._radix) % q
        digits = digits.reshape(self._size, n, n)
        digits.setflags(write=False)
        return digits

    @cached_property
    def _add(self) -> np.ndarray:
        e = self.all_entries
        out = self.encode_array(self.base.add[e[:, None], e[None, :]])
        out.setflags(write=False)
        return out

    @cached_property
    def _mul(self) -> np.ndarray:
        e = self.all_entries
        size, n = self._size, self.dim
        out = np.empty((size, size), dtype=np.int64)
        step = max(1, (1 << 21) // (size * n**3))
        for s in range(0, size, step):
            block = semiring_matmul(self.base.add, self.base.mul, e[s:s + step, None], e[None, :])
            out[s:s + step] = self.encode_array(block)
        out.setflags(write=False)
        return out

    @cached_property
    def _star(self) -> np.ndarray:
        e = self.all_entries
        ident = np.array(self.entries(self.one), dtype=np.int64)
        s = np.broadcast_to(ident, e.shape).copy()
        while True:
            nxt = self.base.add[s, semiring_matmul(self.base.add, self.base.mul, e, s)]
            if np.array_equal(nxt, s):
                break
            s = nxt
        out = self.encode_array(s)
        out.setflags(write=False)
        return out

    def label(self, i: int) -> str:
        rows = self.entries(i)
        labs = self.base.labels
        if all(len(s) == 1 for s in labs):
            return "/".join("".join(labs[x] for x in r) for r in rows)
        return "[" + "; ".join(" ".join(labs[x] for x in r) for r in rows) + "]"

    @property
    def labels(self) -> tuple[str, ...]:
        self._guard()
        return tuple(self.label(i) for i in range(self._size))

    def index_of(self, label: str) -> int:
        self._guard()
        return super().index_of(label)

    @cached_property
    def fingerprint(self) -> tuple:
        if self.materializable:
            return super().fingerprint
        return ("matrix", self.base.fingerprint, self.dim)


@dataclass(frozen=True)
class Element:
    algebra: FiniteKleeneAlgebra
    index: int

    def __post_init__(self):
        if not 0 <= self.index < self.algebra.size:
            raise ValidationError(f"index {self.index} outside {self.algebra.name}")

    def _check(self, other: "Element") -> None:
        if not isinstance(other, Element) or other.algebra != self.algebra:
            raise AlgebraMismatchError("elements of different algebras cannot be combined")

    def __add__(self, other):
        self._check(other)
        return Element(self.algebra, int(self.algebra.add[self.index, other.index]))

    def __mul__(self, other):
        self._check(other)
        return Element(self.algebra, int(self.algebra.mul[self.index, other.index]))

    def star(self) -> "Element":
        return Element(self.algebra, int(self.algebra.star[self.index]))

    def __le__(self, other):
        return natural_order(self, other)

    def __str__(self):
        return self.algebra.label(self.index)


@dataclass(frozen=True)
class MatrixElement:
    """A (possibly rectangular) matrix over a table algebra, computed entrywise."""

    base: FiniteKleeneAlgebra
    entries: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, base, rows) -> "MatrixElement":
        return cls(base, tuple(tuple(int(x) for x in r) for r in rows))

    @classmethod
    def identity(cls, base, n) -> "MatrixElement":
        return cls.of(base, [[base.one if i == j else base.zero for j in range(n)] for i in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.entries), len(self.entries[0]) if self.entries else 0

    @property
    def dim(self) -> int:
        return self.shape[0]

    def _check(self, other):
        if not isinstance(other, MatrixElement) or other.base != self.base:
            raise AlgebraMismatchError("matrices over different algebras")

    def __add__(self, other):
        self._check(other)
        if other.shape != self.shape:
            raise ValidationError(f"shape mismatch {self.shape} + {other.shape}")
        add = self.base.add
        return MatrixElement.of(self.base, [[add[a, b] for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __mul__(self, other):
        self._check(other)
        p, q = self.shape
        q2, r = other.shape
        if q != q2:
            raise ValidationError(f"shape mismatch {self.shape} * {other.shape}")
        out = semiring_matmul(self.base.add, self.base.mul, np.array(self.entries), np.array(other.entries))
        return MatrixElement.of(self.base, out.tolist())

    def star(self) -> "MatrixElement":
        return star_saturate(self)

    def render(self) -> str:
        labs = self.base.labels
        return "(" + "; ".join(" ".join(labs[x] for x in r) for r in self.entries) + ")"


@dataclass(frozen=True)
class AlgebraHomomorphism:
    source: FiniteKleeneAlgebra
    target: FiniteKleeneAlgebra
    map: tuple[int, ...]

    def __post_init__(self):
        m = tuple(int(x) for x in self.map)
        if len(m) != self.source.size or any(not 0 <= x < self.target.size for x in m):
            raise ValidationError("homomorphism table does not fit source/target")
        object.__setattr__(self, "map", m)

    def __call__(self, a: int) -> int:
        return self.map[a]

    def then(self, g: "AlgebraHomomorphism") -> "AlgebraHomomorphism":
        """g after self."""
        if g.source != self.target:
            raise AlgebraMismatchError("homomorphisms are not composable")
        return AlgebraHomomorphism(self.source, g.target, tuple(g.map[x] for x in self.map))

    @classmethod
    def identity(cls, A: FiniteKleeneAlgebra) -> "AlgebraHomomorphism":
        return cls(A, A, tuple(range(A.size)))


# ---------------------------------------------------------------- builtins

def bool2() -> FiniteKleeneAlgebra:
    return FiniteKleeneAlgebra(
        "bool2", add=[[0, 1], [1, 1]], mul=[[0, 0], [0, 1]], star=[1, 1], zero=0, one=1, labels=["0", "1"]
    )


def relation_algebra(n: int, bounds: Bounds = DEFAULT_BOUNDS) -> FiniteKleeneAlgebra:
    """Binary relations on n points; element bit i*n+j encodes the pair (i, j)."""
    if n < 1:
        raise ValidationError("rel(n) needs n >= 1")
    size = 2 ** (n * n)
    if not bounds.table_ok(size):
        raise SizeGuardError(f"rel({n}) has {size} elements, over the carrier/table bound")
    bits = ((np.arange(size)[:, None] >> np.arange(n * n)) & 1).astype(bool).reshape(size, n, n)
    radix = 1 << np.arange(n * n, dtype=np.int64)

    def enc(m):
        return m.reshape(m.shape[:-2] + (n * n,)).astype(np.int64) @ radix

    union = enc(bits[:, None] | bits[None, :])
    comp = enc(np.einsum("aij,bjk->abik", bits.astype(np.int64), bits.astype(np.int64)) > 0)
    closure = bits | np.eye(n, dtype=bool)
    for k in range(n):
        closure = closure | (closure[:, :, k, None] & closure[:, None, k, :])
    labels = []
    for r in range(size):
        pairs = [f"({i},{j})" for i in range(n) for j in range(n) if r >> (i * n + j) & 1]
        labels.append("{" + ",".join(pairs) + "}")
    return FiniteKleeneAlgebra(
        f"rel({n})", union, comp, enc(closure), zero=0, one=int(enc(np.eye(n, dtype=bool))), labels=labels
    )


def matrix_algebra(K: FiniteKleeneAlgebra, n: int, bounds: Bounds = DEFAULT_BOUNDS) -> MatrixAlgebra:
    return MatrixAlgebra(K, n, bounds)


def construct_builtin(name: str, *params, bounds: Bounds = DEFAULT_BOUNDS, **tables) -> FiniteKleeneAlgebra:
    if name == "bool2":
        return bool2()
    if name == "rel":
        (n,) = params
        return relation_algebra(int(n), bounds)
    if name == "table":
        return FiniteKleeneAlgebra(tables.pop("name", "table"), **tables)
    if name == "matrix":
        base, n = params
        return matrix_algebra(base, int(n), bounds)
    raise ValidationError(f"unknown builtin {name!r}")


_EXPR = re.compile(r"^\s*(?:(bool2)|rel\((\d+)\)|M(\d+)\((.*)\))\s*$")


def resolve_algebra(expr: str, bounds: Bounds = DEFAULT_BOUNDS) -> FiniteKleeneAlgebra:
    """Parse ``bool2``, ``rel(n)`` or ``Mn(<expr>)``."""
    m = _EXPR.match(expr)
    if not m:
        raise ValidationError(f"not a builtin algebra expression: {expr!r}")
    if m.group(1):
        return bool2()
    if m.group(2):
        return relation_algebra(int(m.group(2)), bounds)
    return matrix_algebra(resolve_algebra(m.group(4), bounds), int(m.group(3)), bounds)


def is_builtin_expr(expr: str) -> bool:
    return bool(_EXPR.match(expr))


# ---------------------------------------------------------------- operations

def natural_order(a: Element, b: Element) -> bool:
    a._check(b)
    return a.algebra.leq(a.index, b.index)


def star_saturate(a):
    """Limit of s0 = 1, s_{k+1} = s_k + a s_k."""
    if isinstance(a, Element):
        A = a.algebra
        s = A.one
        while True:
            nxt = int(A.add[s, A.mul[a.index, s]])
            if nxt == s:
                return Element(A, s)
            s = nxt
    if isinstance(a, MatrixElement):
        rows, cols = a.shape
        if rows != cols:
            raise ValidationError("star of a non-square matrix")
        s = MatrixElement.identity(a.base, rows)
        while True:
            nxt = s + a * s
            if nxt == s:
                return s
            s = nxt
    raise TypeError(f"cannot saturate {type(a).__name__}")


def check_kleene_axioms(A: FiniteKleeneAlgebra, induction: str = "full") -> Report:
    """Check the idempotent-semiring laws plus the four star laws.

    ``induction="full"`` scans every (a, b, x) triple; ``"reduced"`` uses the
    equivalent two-variable form ``a x <= x  =>  a* x <= x`` (valid once the
    semiring laws hold) for large carriers.
    """
    add, mul, star = A.add, A.mul, A.star
    n, z, o = A.size, A.zero, A.one
    ar = np.arange(n)
    rep = Report(f"ka check {A.name}")

    def leq(u, v):
        return add[u, v] == v

    check_law(rep, "add_associative", ("x", "y", "z"), (n, n, n),
              lambda x: add[add[x][:, :, None], ar[None, None, :]] == add[x[:, None, None], add[None, :, :]])
    check_law(rep, "add_commutative", ("x", "y"), (n, n), lambda x: add[x] == add[:, x].T)
    check_law(rep, "add_idempotent", ("x",), (n,), lambda x: add[x, x] == x)
    check_law(rep, "add_zero_identity", ("x",), (n,), lambda x: (add[z, x] == x) & (add[x, z] == x))
    check_law(rep, "mul_associative", ("x", "y", "z"), (n, n, n),
              lambda x: mul[mul[x][:, :, None], ar[None, None, :]] == mul[x[:, None, None], mul[None, :, :]])
    check_law(rep, "mul_one_identity", ("x",), (n,), lambda x: (mul[o, x] == x) & (mul[x, o] == x))
    check_law(rep, "zero_annihilates", ("x",), (n,), lambda x: (mul[z, x] == z) & (mul[x, z] == z))
    check_law(rep, "distributes_left", ("a", "b", "c"), (n, n, n),
              lambda a: mul[a[:, None, None], add[None, :, :]] == add[mul[a][:, :, None], mul[a][:, None, :]])
    check_law(rep, "distributes_right", ("a", "b", "c"), (n, n, n),
              lambda a: mul[add[a][:, :, None], ar[None, None, :]] == add[mul[a][:, None, :], mul[None, :, :]])
    check_law(rep, "star_unroll_left", ("a",), (n,), lambda a: leq(add[o, mul[a, star[a]]], star[a]))
    check_law(rep, "star_unroll_right", ("a",), (n,), lambda a: leq(add[o, mul[star[a], a]], star[a]))
    if induction == "full":
        def ind_left(a):
            prem = leq(add[ar[None, :, None], mul[a][:, None, :]], ar[None, None, :])
            concl = leq(mul[star[a]][:, :, None], ar[None, None, :])
            return ~prem | concl

        def ind_right(a):
            prem = leq(add[ar[None, :, None], mul[:, a].T[:, None, :]], ar[None, None, :])
            concl = leq(mul[:, star[a]].T[:, :, None], ar[None, None, :])
            return ~prem | concl

        check_law(rep, "star_induction_left", ("a", "b", "x"), (n, n, n), ind_left)
        check_law(rep, "star_induction_right", ("a", "b", "x"), (n, n, n), ind_right)
    elif induction == "reduced":
        check_law(rep, "star_induction_left", ("a", "x"), (n, n),
                  lambda a: ~leq(mul[a], ar[None, :]) | leq(mul[star[a]], ar[None, :]))
        check_law(rep, "star_induction_right", ("a", "x"), (n, n),
                  lambda a: ~leq(mul[:, a].T, ar[None, :]) | leq(mul[:, star[a]].T, ar[None, :]))
        rep.note("induction laws checked in reduced two-variable form")
    else:
        raise ValueError(f"unknown induction mode {induction!r}")
    return rep


def check_algebra_homomorphism(h: AlgebraHomomorphism) -> Report:
    A, B, f = h.source, h.target, np.array(h.map)
    n = A.size
    rep = Report(f"ka hom {A.name} -> {B.name}")
    rep.add("preserves_zero", f[A.zero] == B.zero, 1, {"zero": A.zero})
    rep.add("preserves_one", f[A.one] == B.one, 1, {"one": A.one})
    check_law(rep, "preserves_add", ("a", "b"), (n, n), lambda a: f[A.add[a]] == B.add[f[a][:, None], f[None, :]])
    check_law(rep, "preserves_mul", ("a", "b"), (n, n), lambda a: f[A.mul[a]] == B.mul[f[a][:, None], f[None, :]])
    check_law(rep, "preserves_star", ("a",), (n,), lambda a: f[A.star[a]] == B.star[f[a]])
    return rep


def subalgebra(K: FiniteKleeneAlgebra, subset, name: str | None = None) -> FiniteKleeneAlgebra:
    """The subalgebra on ``subset``, re-indexed in increasing order."""
    elems = sorted({int(x) for x in subset})
    pos = {x: i for i, x in enumerate(elems)}
    if not elems or any(not 0 <= x < K.size for x in elems):
        raise SubalgebraError("subset must be a nonempty set of element indices")
    for what, x in (("zero", K.zero), ("one", K.one)):
        if x not in pos:
            raise SubalgebraError(f"subset does not contain {what}")
    sub = np.array(elems)
    for opname, table in (("add", K.add), ("mul", K.mul)):
        vals = table[np.ix_(sub, sub)]
        missing = [int(v) for v in np.unique(vals) if int(v) not in pos]
        if missing:
            raise SubalgebraError(f"subset not closed under {opname}: produces {missing[0]}")
    stars = [int(K.star[x]) for x in elems]
    if any(s not in pos for s in stars):
        raise SubalgebraError("subset not closed under star")
    remap = np.vectorize(pos.__getitem__, otypes=[np.int64])
    return FiniteKleeneAlgebra(
        name or f"{K.name}[{len(elems)}]",
        remap(K.add[np.ix_(sub, sub)]),
        remap(K.mul[np.ix_(sub, sub)]),
        [pos[s] for s in stars],
        pos[K.zero],
        pos[K.one],
        labels=[K.label(x) for x in elems],
        embedding=elems,
    )


def _algebra_invariant(A: FiniteKleeneAlgebra) -> list[tuple]:
    down = (A.add == np.arange(A.size)[None, :]).sum(axis=0)
    up = (A.add == np.arange(A.size)[:, None]).sum(axis=1)
    sq = A.mul[np.arange(A.size), np.arange(A.size)]
    return [
        (int(down[x]), int(up[x]), int(down[sq[x]]), int(down[A.star[x]]), x == A.zero, x == A.one)
        for x in range(A.size)
    ]


def _algebra_plan(A: FiniteKleeneAlgebra):
    """Greedy generators plus a derivation order reaching every element."""
    known = {A.zero, A.one}
    gens: list[int] = []
    plan: list[tuple] = []

    def close():
        frontier = True
        while frontier:
            frontier = False
            for x in sorted(known):
                s = int(A.star[x])
                if s not in known:
                    known.add(s)
                    plan.append((s, "star", x, x))
                    frontier = True
            for x, y in itertools.product(sorted(known), repeat=2):
                for op, table in (("add", A.add), ("mul", A.mul)):
                    v = int(table[x, y])
                    if v not in known:
                        known.add(v)
                        plan.append((v, op, x, y))
                        frontier = True

    close()
    down = (A.add == np.arange(A.size)[None, :]).sum(axis=0)
    for x in sorted(range(A.size), key=lambda x: (int(down[x]), x)):
        if x not in known:
            gens.append(x)
            known.add(x)
            close()
    return gens, plan


def find_algebra_isomorphism(A: FiniteKleeneAlgebra, B: FiniteKleeneAlgebra) -> AlgebraHomomorphism | None:
    """Exhaustive search over generator images; returns an isomorphism or None."""
    if A.size != B.size:
        return None
    inv_a, inv_b = _algebra_invariant(A), _algebra_invariant(B)
    if sorted(inv_a) != sorted(inv_b):
        return None
    gens, plan = _algebra_plan(A)
    choices = [[y for y in range(B.size) if inv_b[y] == inv_a[g]] for g in gens]
    for images in itertools.product(*choices):
        f = {A.zero: B.zero, A.one: B.one}
        ok = True
        for g, y in zip(gens, images):
            if f.setdefault(g, y) != y:
                ok = False
        if not ok:
            continue
        # replay the plan; generators were interleaved, so iterate to a fixpoint
        table = {"add": B.add, "mul": B.mul}
        for v, op, x, y in plan:
            if x not in f or y not in f:
                ok = False
                break
            w = int(B.star[f[x]]) if op == "star" else int(table[op][f[x], f[y]])
            if f.setdefault(v, w) != w:
                ok = False
                break
        if not ok or len(f) != A.size or len(set(f.values())) != B.size:
            continue
        h = AlgebraHomomorphism(A, B, tuple(f[x] for x in range(A.size)))
        if check_algebra_homomorphism(h).ok:
            return h
    return None
