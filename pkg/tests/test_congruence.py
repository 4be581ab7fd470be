import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kleene_morita import (
    FiniteKleeneModule,
    bool2,
    check_module_axioms,
    congruence_closure,
    free_module,
    module_iso_search,
    quotient_module,
    regular_module,
    relation_algebra,
)
from kleene_morita.algebra import Bounds
from kleene_morita.congruence import quasi_identity_violations
from kleene_morita.errors import SizeGuardError, ValidationError
from oracles import least_law_abiding_congruence, semilattices


def _canon(cong):
    return tuple(sorted(tuple(c) for c in cong.classes()))


def test_empty_pairs_identity():
    M = free_module(bool2(), 2)
    gen = congruence_closure(M, [])
    assert gen.congruence.partition == tuple(range(M.size))


def test_top_to_zero_collapses():
    K = bool2()
    M = regular_module(K, "bi")
    gen = congruence_closure(M, [(1, 0)])
    assert len(gen.congruence.classes()) == 1
    assert _canon(gen.congruence) == least_law_abiding_congruence(M, [(1, 0)])


def test_quotient_free_rank2_to_rank1():
    K = bool2()
    F = free_module(K, 2)
    e0, e1 = F.basis["left"]
    Q, cong = quotient_module(F, [(e0, e1)])
    assert check_module_axioms(Q).ok
    assert module_iso_search(Q, free_module(K, 1)) is not None


def test_quotient_empty_is_iso():
    M = regular_module(relation_algebra(2), "left")
    Q, _ = quotient_module(M, [])
    assert module_iso_search(Q, M) is not None


def test_identify_everything():
    M = regular_module(bool2(), "bi")
    Q, _ = quotient_module(M, [(0, 1)])
    assert Q.size == 1


def test_no_repairs_in_finite_case(modules):
    # every catalog quotient already satisfies the quasi-identity
    for M in modules.values():
        if M.size > 16:
            continue
        for y in range(M.size):
            gen = congruence_closure(M, [(y, M.zero)])
            assert gen.repairs == ()
            assert not quasi_identity_violations(gen.congruence.quotient())


def test_errors():
    M = free_module(bool2(), 2)
    with pytest.raises(ValidationError):
        congruence_closure(M, [(0, 9)])
    with pytest.raises(SizeGuardError):
        congruence_closure(M, [], Bounds(max_carrier=2))


def _small_modules(modules):
    K = bool2()
    out = [M for M in modules.values() if M.size <= 4]
    for n in range(1, 5):
        for t in semilattices(n):
            ident = [list(range(n))]
            out.append(FiniteKleeneModule(f"sl{n}", t, 0, K, [[0] * n] + ident))
            out.append(FiniteKleeneModule(f"sl{n}bi", t, 0, K, [[0] * n] + ident, K,
                                          [[0, x] for x in range(n)]))
    return out


def test_minimality_against_partition_oracle(modules):
    count = 0
    for M in _small_modules(modules):
        pair_sets = [[]] + [[p] for p in itertools.combinations(range(M.size), 2)]
        pair_sets += [list(ps) for ps in itertools.combinations(itertools.combinations(range(M.size), 2), 2)][:6]
        for pairs in pair_sets:
            got = _canon(congruence_closure(M, pairs).congruence)
            assert got == least_law_abiding_congruence(M, pairs), (M.name, pairs)
            count += 1
    assert count > 100


@given(st.data())
def test_closure_idempotent_and_compatible(data):
    R = relation_algebra(2)
    M = regular_module(R, data.draw(st.sampled_from(["left", "right", "bi"])))
    pairs = data.draw(st.lists(st.tuples(st.integers(0, 15), st.integers(0, 15)), max_size=3))
    c1 = congruence_closure(M, pairs).congruence
    assert c1.is_compatible()
    # closing again over all identified pairs changes nothing
    again = [(x, r) for x, r in enumerate(c1.partition)]
    c2 = congruence_closure(M, again).congruence
    assert c2.partition == c1.partition
    assert check_module_axioms(c1.quotient()).ok
