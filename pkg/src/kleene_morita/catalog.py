"""Desk-scale algebras and modules used by the test-suite and the scripts."""

from __future__ import annotations

from .algebra import DEFAULT_BOUNDS, AlgebraHomomorphism, Bounds, bool2, matrix_algebra, relation_algebra
from .congruence import quotient_module
from .module import (
    algebra_as_bimodule,
    dual_module,
    free_module,
    hom_module,
    regular_module,
    submodule_generated,
)
from .morita import column_module, homomorphism_module, row_module, scalar_embedding
from .tensor import tensor_product


def algebras(bounds: Bounds = DEFAULT_BOUNDS) -> dict:
    K = bool2()
    return {
        "bool2": K,
        "rel(1)": relation_algebra(1, bounds),
        "rel(2)": relation_algebra(2, bounds),
        "M2(bool2)": matrix_algebra(K, 2, bounds),
    }


def diagonal_subset(R) -> list[int]:
    """Indices of the relations contained in the identity of rel(n)."""
    return [x for x in range(R.size) if R.leq(x, R.one)]


def modules(bounds: Bounds = DEFAULT_BOUNDS) -> dict:
    """name -> module, one or more per construction."""
    A = algebras(bounds)
    K, R, M2 = A["bool2"], A["rel(2)"], A["M2(bool2)"]
    out = {}
    for name, alg in A.items():
        out[f"bimodule[{name}]"] = algebra_as_bimodule(alg)
    out["bimodule[rel(2) over diagonal]"] = algebra_as_bimodule(R, diagonal_subset(R))
    out["bimodule[rel(2) over 2]"] = algebra_as_bimodule(R, [R.zero, R.one])

    out["submodule[rel(2) left <{(0,1)}>]"] = submodule_generated(R, [R.index_of("{(0,1)}")], "left")[0]
    out["submodule[rel(2) right <{(0,1)}>]"] = submodule_generated(R, [R.index_of("{(0,1)}")], "right")[0]
    out["submodule[M2 left <E11>]"] = submodule_generated(M2, [M2.unit(0, 0)], "left")[0]
    out["submodule[M2 bi <E11>]"] = submodule_generated(M2, [M2.unit(0, 0)], "bi")[0]

    for r in (0, 1, 2, 3):
        out[f"free[bool2^{r} left]"] = free_module(K, r, "left", bounds)
    out["free[bool2^2 right]"] = free_module(K, 2, "right", bounds)
    out["free[bool2^2 bi]"] = free_module(K, 2, "bi", bounds)
    out["free[rel(2)^1 left]"] = free_module(R, 1, "left", bounds)

    out["hom[K^2 -> K]"] = hom_module(free_module(K, 2, "left", bounds), regular_module(K, "bi"),
                                      frozenset({"left"}), bounds)[0]
    out["hom[End M2 left]"] = hom_module(regular_module(M2, "left"), regular_module(M2, "bi"),
                                         frozenset({"left"}), bounds)[0]
    out["hom[rel(2) right]"] = hom_module(regular_module(R, "bi"), regular_module(R, "bi"),
                                          frozenset({"right"}), bounds)[0]

    out["dual[bool2^2 left]"] = dual_module(free_module(K, 2, "left", bounds), bounds=bounds)
    out["dual[rel(2) left]"] = dual_module(regular_module(R, "left"), bounds=bounds)
    out["dual[K^2 columns]"] = row_module(K, 2, bounds=bounds)[0]

    F2 = free_module(K, 2, "left", bounds)
    e0, e1 = F2.basis["left"]
    out["quotient[bool2^2 / e0=e1]"] = quotient_module(F2, [(e0, e1)], bounds)[0]
    out["quotient[rel(2) / {(0,1)}=0]"] = quotient_module(regular_module(R, "bi"),
                                                          [(R.index_of("{(0,1)}"), R.zero)], bounds)[0]

    out["E[id bool2]"] = homomorphism_module(AlgebraHomomorphism.identity(K), bounds).module
    out["E[bool2 -> rel(2)]"] = homomorphism_module(AlgebraHomomorphism(K, R, (R.zero, R.one)), bounds).module
    out["E[bool2 -> M2]"] = homomorphism_module(scalar_embedding(K, M2), bounds).module

    Kb = regular_module(K, "bi")
    col, row = column_module(K, 2, M2, bounds), row_module(K, 2, bounds=bounds)[0]
    out["tensor[K (x) K]"] = tensor_product(Kb, Kb, bounds=bounds).module
    out["tensor[K^2 (x) K^2°]"] = tensor_product(col, row, bounds=bounds).module
    out["tensor[K^2° (x) K^2]"] = tensor_product(row, col, bounds=bounds).module
    out["tensor[rel(2) (x) rel(2)]"] = tensor_product(regular_module(R, "bi"), regular_module(R, "bi"),
                                                      method="exhaustive", bounds=bounds).module
    return out
