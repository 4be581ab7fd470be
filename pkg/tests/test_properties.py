"""Randomized law checks against the brute-force oracles."""

import itertools

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from kleene_morita import (
    FiniteKleeneModule,
    bool2,
    check_module_axioms,
    congruence_closure,
    free_module,
    matrix_algebra,
    module_iso_search,
    regular_module,
    relation_algebra,
    tensor_product,
)
from kleene_morita.morita import column_module, is_full_idempotent, row_module
from oracles import block_star, reachability_star, relation_of, semilattices

R3 = relation_algebra(3)
M2R = matrix_algebra(relation_algebra(1), 2)
M2B = matrix_algebra(bool2(), 2)
F2 = free_module(bool2(), 2)
COL = column_module(bool2(), 2, M2B)
ROW = row_module(bool2(), 2, COL)[0]
T_CR = tensor_product(COL, ROW)
T_RC = tensor_product(ROW, COL)
SL4 = list(semilattices(4))


@given(st.integers(0, R3.size - 1))
def test_relation_star_is_reachability(x):
    assert relation_of(R3, int(R3.star[x]), 3) == reachability_star(relation_of(R3, x, 3), 3)


@given(st.integers(0, R3.size - 1), st.integers(0, R3.size - 1))
def test_relation_mul_is_composition(x, y):
    a, b = relation_of(R3, x, 3), relation_of(R3, y, 3)
    comp = {(i, k) for (i, j) in a for (j2, k) in b if j == j2}
    assert relation_of(R3, int(R3.mul[x, y]), 3) == comp


@given(st.integers(0, M2B.size - 1))
def test_matrix_star_block_formula(x):
    got = M2B.entries(int(M2B.star[x]))
    assert tuple(map(tuple, got)) == block_star(M2B.entries(x), bool2())


@given(st.integers(0, M2R.size - 1), st.integers(0, M2R.size - 1))
def test_star_is_least_solution(a, b):
    A = M2R
    s = int(A.mul[A.star[a], b])
    # a*b solves b + a x <= x and is below every solution
    assert A.leq(int(A.add[b, A.mul[a, s]]), s)
    for x in range(A.size):
        if A.leq(int(A.add[b, A.mul[a, x]]), x):
            assert A.leq(s, x)


@given(st.integers(0, R3.size - 1), st.integers(0, R3.size - 1), st.integers(0, R3.size - 1))
def test_natural_order_is_partial_order(x, y, z):
    A = R3
    assert A.leq(x, x)
    if A.leq(x, y) and A.leq(y, x):
        assert x == y
    if A.leq(x, y) and A.leq(y, z):
        assert A.leq(x, z)


@given(st.integers(0, 15), st.integers(0, 15), st.integers(0, 15), st.integers(0, 3))
def test_pure_tensor_bilinear_balanced(m, n, a, b_):
    # m, n index K^2 and K^2°, a an M2 element, b_ selects a K-scalar via the row module
    m, n = m % COL.size, n % ROW.size
    P = T_CR.pure
    add = T_CR.module.add
    for m2 in range(COL.size):
        assert P[COL.add[m, m2], n] == add[P[m, n], P[m2, n]]
    for b in range(2):
        assert P[COL.right_action[m, b], n] == P[m, ROW.left_action[b, n]]
    assert P[COL.left_action[a, m], n] == T_CR.module.left_action[a, P[m, n]]


@given(st.sampled_from(SL4), st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), max_size=3))
def test_semilattice_quotients_are_modules(table, pairs):
    K = bool2()
    M = FiniteKleeneModule("sl", table, 0, K, [[0] * 4, list(range(4))])
    Q = congruence_closure(M, pairs).congruence.quotient()
    assert check_module_axioms(Q).ok


@given(st.integers(0, M2B.size - 1), st.integers(0, M2B.size - 1))
def test_full_monotone_random(e, f):
    A = M2B
    if A.mul[e, e] == e and A.mul[f, f] == f and A.leq(e, f) and is_full_idempotent(A, e):
        assert is_full_idempotent(A, f)


@given(st.integers(1, 3), st.integers(1, 2))
def test_free_tensor_rank_multiplies(r, s):
    K = bool2()
    T = tensor_product(free_module(K, r, "right"), free_module(K, s, "left"), method="exhaustive")
    assert T.module.size == 2 ** (r * s)


@given(st.permutations(range(4)))
def test_iso_search_finds_relabelled_copy(perm):
    M = F2
    inv = np.argsort(perm)
    add = [[perm[int(M.add[inv[x], inv[y]])] for y in range(4)] for x in range(4)]
    act = [[perm[int(M.left_action[a, inv[x]])] for x in range(4)] for a in range(2)]
    N = FiniteKleeneModule("perm", add, perm[M.zero], bool2(), act)
    f = module_iso_search(M, N)
    assert f is not None and f.check().ok


def test_regular_tensor_sizes_exhaustive():
    for A in (bool2(), relation_algebra(1), relation_algebra(2)):
        R = regular_module(A, "bi")
        assert module_iso_search(tensor_product(R, R, method="exhaustive").module, R) is not None


def test_k2_tensor_sizes():
    assert T_CR.module.size == 16 and T_RC.module.size == 2
    for x, y in itertools.product(range(T_RC.module.size), repeat=2):
        assert T_RC.module.add[x, y] == T_RC.module.add[y, x]
