"""Module congruences: union-find closure, quasi-identity repair, quotients."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .algebra import DEFAULT_BOUNDS, Bounds
from .errors import SizeGuardError, ValidationError
from .module import FiniteKleeneModule


@dataclass(frozen=True)
class ModuleCongruence:
    module: FiniteKleeneModule
    # least element of each element's class
    partition: tuple[int, ...]
    repairs: tuple = ()

    def same(self, x: int, y: int) -> bool:
        return self.partition[x] == self.partition[y]

    def classes(self) -> list[tuple[int, ...]]:
        out: dict[int, list[int]] = {}
        for x, r in enumerate(self.partition):
            out.setdefault(r, []).append(x)
        return [tuple(v) for _, v in sorted(out.items())]

    def _class_index(self):
        part = np.array(self.partition)
        reps = np.unique(part)
        pos = np.full(len(part), -1)
        pos[reps] = np.arange(len(reps))
        return reps, pos[part]

    def is_compatible(self) -> bool:
        """Whether the partition respects add and every action."""
        M = self.module
        reps, cls = self._class_index()
        if not np.array_equal(cls[M.add], cls[M.add[reps][:, reps]][cls[:, None], cls[None, :]]):
            return False
        if M.left is not None and not np.array_equal(cls[M.left_action], cls[M.left_action[:, reps]][:, cls]):
            return False
        if M.right is not None and not np.array_equal(cls[M.right_action], cls[M.right_action[reps]][cls]):
            return False
        return True

    def quotient(self, name: str | None = None) -> FiniteKleeneModule:
        M = self.module
        reps, cls = self._class_index()
        return FiniteKleeneModule(
            name or f"{M.name}/~",
            cls[M.add[np.ix_(reps, reps)]],
            int(cls[M.zero]),
            M.left, cls[M.left_action[:, reps]] if M.left is not None else None,
            M.right, cls[M.right_action[reps, :]] if M.right is not None else None,
            labels=[f"[{M.label(r)}]" for r in reps],
        )


@dataclass(frozen=True)
class GeneratedCongruence:
    congruence: ModuleCongruence
    generators: tuple[tuple[int, int], ...]
    # effective merges in order, repair merges marked
    trace: tuple[tuple, ...]

    @property
    def repairs(self):
        return self.congruence.repairs


def quasi_identity_violations(M: FiniteKleeneModule) -> list[tuple[str, int, int]]:
    """All (side, a, m) with a m <= m but a* m not <= m."""
    out = []
    ar = np.arange(M.size)
    for side in ("left", "right"):
        K = M.algebra(side)
        if K is None:
            continue
        act = M.left_action if side == "left" else M.right_action.T
        below = M.add[act, ar[None, :]] == ar[None, :]
        star_below = M.add[act[K.star], ar[None, :]] == ar[None, :]
        for a, m in np.argwhere(below & ~star_below):
            out.append((side, int(a), int(m)))
    return out


def congruence_closure(M: FiniteKleeneModule, pairs, bounds: Bounds = DEFAULT_BOUNDS) -> GeneratedCongruence:
    """Least congruence containing ``pairs`` whose quotient satisfies the quasi-identity.

    Union-find with a pending-merge queue; every effective merge of x and y
    enqueues (x+z, y+z) for all z and (ax, ay), (xb, yb) for all scalars.
    A quasi-identity violation a[m] <= [m], a*[m] not <= [m] in the quotient
    is repaired by merging [a* m + m] with [m], which any law-abiding
    coarsening must also do; closure then resumes.
    """
    n = M.size
    if n > bounds.max_carrier:
        raise SizeGuardError(f"{M.name}: carrier {n} over bound")
    pairs = tuple((int(x), int(y)) for x, y in pairs)
    for x, y in pairs:
        if not (0 <= x < n and 0 <= y < n):
            raise ValidationError(f"pair ({x}, {y}) outside carrier of {M.name}")
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    add = M.add.tolist()
    la = M.left_action.T.tolist() if M.left is not None else None    # la[m][a]
    ra = M.right_action.tolist() if M.right is not None else None    # ra[m][b]
    queue = deque(pairs)
    trace: list[tuple] = []
    repairs: list[tuple] = []

    def run():
        while queue:
            x, y = queue.popleft()
            rx, ry = find(x), find(y)
            if rx == ry:
                continue
            lo, hi = min(rx, ry), max(rx, ry)
            parent[hi] = lo
            trace.append(("merge", x, y))
            queue.extend(zip(add[x], add[y]))
            if la is not None:
                queue.extend(zip(la[x], la[y]))
            if ra is not None:
                queue.extend(zip(ra[x], ra[y]))

    run()
    while True:
        cong = ModuleCongruence(M, tuple(find(i) for i in range(n)))
        viol = quasi_identity_violations(cong.quotient())
        if not viol:
            break
        reps, _ = cong._class_index()
        for side, a, qm in viol:
            m = int(reps[qm])
            K = M.algebra(side)
            target = int(M.add[M.act(side, int(K.star[a]), m), m])
            repairs.append((side, a, m))
            trace.append(("repair", side, a, m))
            queue.append((m, target))
        run()
    final = ModuleCongruence(M, tuple(find(i) for i in range(n)), tuple(repairs))
    return GeneratedCongruence(final, pairs, tuple(trace))


def quotient_module(M: FiniteKleeneModule, pairs, bounds: Bounds = DEFAULT_BOUNDS):
    """Quotient by the least law-abiding congruence containing ``pairs``; returns (Q, congruence)."""
    gen = congruence_closure(M, pairs, bounds)
    return gen.congruence.quotient(), gen.congruence
