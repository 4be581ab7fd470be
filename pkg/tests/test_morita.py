import pytest

from kleene_morita import (
    AlgebraHomomorphism,
    bool2,
    check_composition_law,
    check_kleene_axioms,
    check_module_axioms,
    find_algebra_isomorphism,
    free_module,
    matrix_algebra,
    module_iso_search,
    regular_module,
    relation_algebra,
)
from kleene_morita.errors import PreconditionError
from kleene_morita.morita import (
    Idempotent,
    check_category_equivalence,
    corner_algebra,
    full_idempotents,
    homomorphism_module,
    idempotents,
    is_full_idempotent,
    lift_semiring_morita,
    matrix_morita_witness,
    parse_idempotent,
    scalar_embedding,
)


@pytest.fixture(scope="module")
def M2():
    return matrix_algebra(bool2(), 2)


@pytest.fixture(scope="module")
def W2():
    return matrix_morita_witness(bool2(), 2)


def _closure_oracle(M, e):
    # sums of x e y, by naive fixpoint
    got = {int(M.mul[M.mul[x, e], y]) for x in range(M.size) for y in range(M.size)} | {M.zero}
    while True:
        more = got | {int(M.add[a, b]) for a in got for b in got}
        if more == got:
            return got
        got = more


def test_full_examples(M2):
    assert is_full_idempotent(M2, M2.one)
    assert not is_full_idempotent(M2, M2.zero)
    assert is_full_idempotent(M2, M2.unit(0, 0))


def test_full_matches_oracle(M2, algebras):
    for A in list(algebras.values()):
        for e in idempotents(A):
            assert is_full_idempotent(A, e) == (len(_closure_oracle(A, e)) == A.size)


def test_full_monotone(M2):
    idem = idempotents(M2)
    for e in idem:
        for f in idem:
            if M2.leq(e, f) and is_full_idempotent(M2, e):
                assert is_full_idempotent(M2, f)


def test_idempotent_census(M2):
    scan = full_idempotents(M2)
    assert len(scan) == 11
    assert [e for e, full in scan if not full] == [M2.zero]


def test_idempotent_precondition(M2):
    nonidem = M2.encode([[0, 1], [1, 0]])
    with pytest.raises(PreconditionError):
        Idempotent(M2, nonidem)


def test_parse_idempotent():
    M3 = matrix_algebra(bool2(), 3)
    assert parse_idempotent(M3, "E11+E22").index == M3.encode([[1, 0, 0], [0, 1, 0], [0, 0, 0]])
    assert parse_idempotent(M3, "I").index == M3.one
    assert parse_idempotent(M3, "0").index == M3.zero
    with pytest.raises(Exception):
        parse_idempotent(M3, "E12")


def test_corner_at_one_and_zero(algebras):
    for A in algebras.values():
        C1 = corner_algebra(A, A.one)
        assert C1.size == A.size and (C1.mul == A.mul).all()
        assert corner_algebra(A, A.zero).size == 1


def test_corner_e11_is_bool2(M2):
    C = corner_algebra(M2, M2.unit(0, 0))
    assert find_algebra_isomorphism(C, bool2()) is not None


def test_corner_m3_is_m2():
    M3 = matrix_algebra(bool2(), 3)
    C = corner_algebra(M3, parse_idempotent(M3, "E11+E22"))
    assert check_kleene_axioms(C).ok
    assert find_algebra_isomorphism(C, matrix_algebra(bool2(), 2)) is not None


def test_corner_rel2_diagonal_idempotents():
    R = relation_algebra(2)
    for e in idempotents(R):
        C = corner_algebra(R, e)
        assert check_kleene_axioms(C).ok


def test_homomorphism_modules(M2):
    K = bool2()
    R = relation_algebra(2)
    E = homomorphism_module(AlgebraHomomorphism.identity(K)).module
    assert module_iso_search(E, regular_module(K, "bi")) is not None
    E = homomorphism_module(AlgebraHomomorphism(K, R, (R.zero, R.one))).module
    assert E.size == 16 and check_module_axioms(E).ok
    E = homomorphism_module(scalar_embedding(K, M2)).module
    assert E.size == 16 and check_module_axioms(E).ok


def test_composition_law_examples(M2):
    K = bool2()
    idK, idM = AlgebraHomomorphism.identity(K), AlgebraHomomorphism.identity(M2)
    s = scalar_embedding(K, M2)
    for f, g in [(idK, idK), (idK, s), (s, idM)]:
        rep = check_composition_law(f, g)
        assert rep.ok, rep.render()


def test_composition_law_rel2():
    K, R = bool2(), relation_algebra(2)
    h = AlgebraHomomorphism(K, R, (R.zero, R.one))
    assert check_composition_law(h, AlgebraHomomorphism.identity(R)).ok


@pytest.mark.parametrize("n", [1, 2])
def test_matrix_witness_small(n):
    W = matrix_morita_witness(bool2(), n)
    assert W.ok
    assert W.PQ.module.size == 2 ** (n * n)
    assert W.QP.module.size == 2


def test_matrix_witness_inverse_maps(W2):
    assert W2.PQ.module.size == 16
    assert all(W2.u_inv[W2.u[t]] == t for t in range(16))
    assert all(W2.v[W2.v_inv[a]] == a for a in range(2))


def test_matrix_witness_three_chain():
    W = matrix_morita_witness(bool2(), 3)
    assert W.ok
    names = {c.name for c in W.report.checks}
    assert {"bullet_row_times_bar", "bullet_bar_times_column", "bullet_ones_fixes_sum",
            "bullet_row_times_ones", "diagonal_chain"} <= names
    assert len(W.chain) == 3 and all(len(steps) == 7 for steps in W.chain)
    first = W.chain[0]
    assert first[0][0].startswith("(1 0 0) ⊗ (1 0 0)ᵗ")
    assert first[-1][0] == "(1 1 1) ⊗ (1 1 1)ᵗ"
    assert len({t for _, t in first}) == 1


def test_lift_every_full_idempotent(M2):
    for e, full in full_idempotents(M2):
        if not full:
            with pytest.raises(PreconditionError):
                lift_semiring_morita(bool2(), 2, e)
            continue
        W = lift_semiring_morita(bool2(), 2, e)
        assert W.ok, W.report.render()


def test_lift_e11_tensors_are_bool2():
    K = bool2()
    W = lift_semiring_morita(K, 2, "E11")
    assert W.S.size == 2
    assert module_iso_search(W.PQ.module, regular_module(W.S, "bi")) is not None
    assert module_iso_search(W.QP.module, regular_module(K, "bi")) is not None


def test_lift_identity_matches_matrix(W2):
    W = lift_semiring_morita(bool2(), 2, "I")
    assert W.ok and W.PQ.module.size == W2.PQ.module.size


def test_lift_m3_corner():
    W = lift_semiring_morita(bool2(), 3, "E11+E22")
    assert W.ok
    assert find_algebra_isomorphism(W.S, matrix_algebra(bool2(), 2)) is not None


def test_category_equivalence(W2, M2):
    K = bool2()
    rep = check_category_equivalence(
        W2, over_K=[regular_module(K, "left"), free_module(K, 2, "left")], over_S=[regular_module(M2, "left")])
    assert rep.ok, rep.render()
    assert len(rep.checks) == 3
