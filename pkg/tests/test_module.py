import itertools

import pytest

from kleene_morita import (
    FiniteKleeneModule,
    ModuleHomomorphism,
    algebra_as_bimodule,
    bool2,
    check_module_axioms,
    dual_module,
    free_module,
    hom_module,
    hom_set,
    matrix_algebra,
    module_iso_search,
    regular_module,
    relation_algebra,
    submodule_generated,
)
from kleene_morita.algebra import Bounds
from kleene_morita.catalog import diagonal_subset
from kleene_morita.errors import AlgebraMismatchError, SizeGuardError, ValidationError
from kleene_morita.module import all_isomorphisms_bruteforce, extend_from_basis, free_coordinates, join_irreducibles
from oracles import all_homs, isomorphic

LEFT = frozenset({"left"})
RIGHT = frozenset({"right"})


def test_regular_bimodule_passes():
    assert check_module_axioms(regular_module(bool2(), "bi")).ok


def test_corrupted_action_names_a_m(corrupted_action):
    rep = check_module_axioms(corrupted_action)
    assert rep.get("left_quasi_identity").counterexample == {"a": 0, "m": 0}


def test_rel2_over_diagonal():
    R = relation_algebra(2)
    M = algebra_as_bimodule(R, diagonal_subset(R))
    assert M.left.size == 4 and check_module_axioms(M).ok


def test_bimodule_over_two():
    R = relation_algebra(2)
    M = algebra_as_bimodule(R, [R.zero, R.one])
    assert M.left == bool2() and check_module_axioms(M).ok


def test_algebra_as_bimodule_full_is_regular():
    R = relation_algebra(2)
    M = algebra_as_bimodule(R, range(R.size))
    assert M.left is R and (M.left_action == R.mul).all()


def test_submodule_zero_and_one():
    R = relation_algebra(2)
    Z, elems = submodule_generated(R, [R.zero], "left")
    assert Z.size == 1
    A, elems = submodule_generated(R, [R.one], "left")
    assert A.size == R.size


def test_left_ideal_by_fixpoint_oracle():
    R = relation_algebra(2)
    g = R.index_of("{(0,1)}")
    _, elems = submodule_generated(R, [g], "left")
    # oracle: left multiples x*g, then closure under union
    got = {R.zero} | {int(R.mul[x, g]) for x in range(R.size)}
    while True:
        more = got | {int(R.add[x, y]) for x in got for y in got}
        if more == got:
            break
        got = more
    assert set(elems) == got and len(got) < R.size


def test_free_module_shapes():
    K = bool2()
    assert free_module(K, 0).size == 1
    F = free_module(K, 2)
    assert F.size == 4 and len(F.basis["left"]) == 2
    assert free_coordinates(F, "left") is not None


def test_free_universal_property():
    K = bool2()
    F = free_module(K, 2)
    P = regular_module(K, "left")
    homs = set(hom_set(F, P, LEFT))
    extended = {extend_from_basis(F, P, imgs) for imgs in itertools.product(range(P.size), repeat=2)}
    assert homs == extended and len(homs) == 4


@pytest.mark.parametrize("rank,target", [(1, "reg"), (2, "reg"), (1, "free2"), (2, "free2")])
def test_hom_count_freeness_against_oracle(rank, target):
    K = bool2()
    F = free_module(K, rank)
    P = regular_module(K, "left") if target == "reg" else free_module(K, 2)
    homs = hom_set(F, P, LEFT)
    assert homs == all_homs(F, P, LEFT)
    assert len(homs) == P.size ** rank


def test_hom_module_contains_identity_and_zero():
    M = regular_module(matrix_algebra(bool2(), 2), "bi")
    H, homs = hom_module(M, M, LEFT)
    maps = H.functions
    assert tuple(range(M.size)) in maps and tuple([M.zero] * M.size) in maps
    assert check_module_axioms(H).ok


def test_dual_of_free_has_dual_basis():
    K = bool2()
    F = free_module(K, 2)
    D = dual_module(F)
    assert D.side == "right" and D.size == 4
    e = F.basis["left"]
    for i, f in enumerate(D.basis["right"]):
        assert [D.functions[f][e[j]] for j in range(2)] == [int(i == j) for j in range(2)]
    assert free_coordinates(D, "right") is not None


def test_dual_of_regular_and_trivial():
    K = relation_algebra(2)
    D = dual_module(regular_module(K, "left"))
    assert module_iso_search(D, regular_module(K, "right")) is not None
    Z = free_module(bool2(), 0)
    assert dual_module(Z).size == 1


def test_dual_sizes_rel2_free():
    R = relation_algebra(1)
    F = free_module(R, 3)
    assert dual_module(F).size == R.size ** 3


def test_iso_search_examples():
    K = bool2()
    F1, F2 = free_module(K, 1), free_module(K, 2)
    assert module_iso_search(F1, regular_module(K, "left")) is not None
    assert module_iso_search(F1, F2) is None
    f = module_iso_search(F2, F2)
    assert f is not None and f.check().ok


def test_iso_search_against_permutations(modules):
    small = [M for M in modules.values() if M.size <= 6]
    for M in small:
        sides = frozenset(s for s in ("left", "right") if M.algebra(s) is not None)
        assert (module_iso_search(M, M) is not None) == isomorphic(M, M, sides)
        assert len(all_isomorphisms_bruteforce(M, M)) >= 1


def test_iso_search_non_iso_same_size():
    K = bool2()
    chain = FiniteKleeneModule("chain4", [[0, 1, 2, 3], [1, 1, 2, 3], [2, 2, 2, 3], [3, 3, 3, 3]], 0,
                               K, [[0, 0, 0, 0], [0, 1, 2, 3]])
    square = free_module(K, 2)
    assert check_module_axioms(chain).ok
    assert module_iso_search(chain, square) is None
    assert not isomorphic(chain, square, LEFT)


def test_join_irreducibles_free():
    F = free_module(bool2(), 3)
    assert sorted(join_irreducibles(F)) == sorted(F.basis["left"])


def test_hom_guard():
    K = relation_algebra(2)
    M = free_module(K, 2, bounds=Bounds(max_carrier=1 << 20))
    with pytest.raises(SizeGuardError):
        hom_set(M, M, LEFT, Bounds(hom_bound=10))


def test_mismatch_errors():
    with pytest.raises(AlgebraMismatchError):
        hom_set(regular_module(bool2(), "left"), regular_module(relation_algebra(2), "left"), LEFT)
    with pytest.raises(ValidationError):
        FiniteKleeneModule("bad", [[0, 1]], 0)
    with pytest.raises(ValidationError):
        ModuleHomomorphism(regular_module(bool2()), regular_module(bool2()), (0, 5))


def test_residual_actions_on_hom():
    # Hom_K(K_K_K, K_K_K) respecting the left action is a (K, K)-bimodule
    R = relation_algebra(2)
    Kb = regular_module(R, "bi")
    H, _ = hom_module(Kb, Kb, LEFT)
    assert H.side == "bi" and check_module_axioms(H).ok
    assert module_iso_search(H, Kb) is not None
    H2, _ = hom_module(Kb, Kb, RIGHT)
    assert H2.side == "bi" and check_module_axioms(H2).ok
