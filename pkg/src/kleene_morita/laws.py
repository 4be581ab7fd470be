"""Chunked, vectorized law checking over index tables."""

from __future__ import annotations

import math

import numpy as np

from .report import Check, Report

CHUNK = 1 << 22


def check_law(report: Report, name: str, keys: tuple[str, ...], dims: tuple[int, ...], holds) -> Check:
    """Record law `name` over the index box `dims`.

    ``holds(idx)`` receives an array of first-axis indices and returns a
    boolean array of shape ``(len(idx),) + dims[1:]``. The first violating
    tuple is reported with its coordinates named by ``keys``.
    """
    rest = math.prod(dims[1:])
    step = max(1, CHUNK // max(rest, 1))
    cases = math.prod(dims)
    for start in range(0, dims[0], step):
        idx = np.arange(start, min(dims[0], start + step))
        ok = np.broadcast_to(np.asarray(holds(idx), dtype=bool), (len(idx),) + tuple(dims[1:]))
        if not ok.all():
            bad = np.argwhere(~ok)[0]
            cx = {keys[0]: int(idx[bad[0]])}
            cx.update({k: int(v) for k, v in zip(keys[1:], bad[1:])})
            return report.add(name, False, cases, cx)
    return report.add(name, True, cases)
