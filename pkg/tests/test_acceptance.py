"""The ten acceptance criteria; the terminal summary prints one line per criterion."""

import itertools
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from kleene_morita import (
    AlgebraHomomorphism,
    FiniteKleeneModule,
    bool2,
    check_adjunction,
    check_composition_law,
    check_kleene_axioms,
    check_module_axioms,
    check_monoid_laws,
    congruence_closure,
    find_algebra_isomorphism,
    free_module,
    hom_set,
    matrix_algebra,
    module_iso_search,
    regular_module,
    relation_algebra,
    tensor_product,
)
from kleene_morita.morita import (
    check_category_equivalence,
    column_module,
    corner_algebra,
    full_idempotents,
    lift_semiring_morita,
    matrix_morita_witness,
    row_module,
    scalar_embedding,
)
from oracles import all_homs, least_law_abiding_congruence, semilattices

C1 = (1, "axiom suite on the catalog algebras; corrupted star caught")
C2 = (2, "module quasi-identity over every construction; corrupted action caught")
C3 = (3, "freeness: |Hom(K^B, P)| = |P|^|B|")
C4 = (4, "tensor: fast = exhaustive, adjunction, monoid laws")
C5 = (5, "matrix Morita witness n = 1, 2, 3 with chain and bullets")
C6 = (6, "full idempotents of M2(bool2) and every lift")
C7 = (7, "homomorphism-module composition law")
C8 = (8, "congruence closure is the least law-abiding congruence")
C9 = (9, "category equivalence through the n = 2 witness")
C10 = (10, "CLI determinism and witness re-verification")

LEFT = frozenset({"left"})


# 1 --------------------------------------------------------------------------

@pytest.mark.parametrize("name", ["bool2", "rel(1)", "rel(2)", "M2(bool2)"])
def test_c1_catalog_algebras(record_property, algebras, name):
    record_property("criterion", C1)
    A = algebras[name]
    rep = check_kleene_axioms(A, induction="full")
    assert rep.ok, rep.render()
    ind = [c for c in rep.checks if c.name.startswith("star_induction")]
    assert ind and all(c.cases == A.size ** 3 for c in ind)


def test_c1_corrupted_star(record_property, corrupted_star):
    record_property("criterion", C1)
    rep = check_kleene_axioms(corrupted_star)
    assert not rep.ok
    c = rep.get("star_unroll_left")
    assert not c.passed and c.counterexample == {"a": 0}


# 2 --------------------------------------------------------------------------

CONSTRUCTIONS = ["bimodule", "submodule", "free", "hom", "dual", "quotient", "E", "tensor"]


def test_c2_every_construction(record_property, modules):
    record_property("criterion", C2)
    seen = {name.split("[")[0] for name in modules}
    assert set(CONSTRUCTIONS) <= seen
    for name, M in modules.items():
        rep = check_module_axioms(M)
        assert rep.ok, f"{name}\n{rep.render()}"


def test_c2_corrupted_action(record_property, corrupted_action):
    record_property("criterion", C2)
    rep = check_module_axioms(corrupted_action)
    assert not rep.ok
    qi = rep.get("left_quasi_identity")
    assert not qi.passed and set(qi.counterexample) == {"a", "m"}


# 3 --------------------------------------------------------------------------

@pytest.mark.parametrize("rank", [1, 2])
@pytest.mark.parametrize("target", ["regular", "free2"])
def test_c3_freeness(record_property, rank, target):
    record_property("criterion", C3)
    K = bool2()
    F = free_module(K, rank)
    P = regular_module(K, "left") if target == "regular" else free_module(K, 2)
    homs = hom_set(F, P, LEFT)
    assert len(homs) == P.size ** rank
    assert homs == all_homs(F, P, LEFT)


# 4 --------------------------------------------------------------------------

def test_c4_fast_equals_exhaustive(record_property):
    record_property("criterion", C4)
    K = bool2()
    pairs = [(free_module(K, 1, "right"), free_module(K, 1, "left")),
             (regular_module(K, "bi"), regular_module(K, "bi"))]
    col = column_module(K, 2)
    pairs.append((col, row_module(K, 2, col)[0]))
    sizes = []
    for M, N in pairs:
        fast = tensor_product(M, N, method="fast")
        slow = tensor_product(M, N, method="exhaustive")
        cert = module_iso_search(fast.module, slow.module)
        assert cert is not None and cert.check().ok
        sizes.append(fast.module.size)
    assert sizes == [2, 2, 16]


def test_c4_adjunction_all_pairs(record_property):
    record_property("criterion", C4)
    K = bool2()
    Kb = regular_module(K, "bi")
    M2 = matrix_algebra(K, 2)
    col = column_module(K, 2, M2)
    row = row_module(K, 2, col)[0]
    for M, N, P in [(Kb, Kb, Kb), (col, row, regular_module(M2, "bi")), (row, col, Kb)]:
        rep = check_adjunction(M, N, P)
        assert rep.ok, rep.render()
        for law in ("uncurry_after_curry", "curry_after_uncurry", "naturality_curry", "naturality_uncurry"):
            assert rep.get(law).passed and rep.get(law).cases > 0


def test_c4_monoid_laws(record_property):
    record_property("criterion", C4)
    K = bool2()
    Kb = regular_module(K, "bi")
    col = column_module(K, 2)
    row = row_module(K, 2, col)[0]
    for args in [(Kb, Kb, Kb), (col, row, col), (free_module(K, 2, "left"),)]:
        rep = check_monoid_laws(*args)
        assert rep.ok, rep.render()


# 5 --------------------------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3])
def test_c5_matrix_witness(record_property, n):
    record_property("criterion", C5)
    W = matrix_morita_witness(bool2(), n)
    assert W.ok
    assert W.PQ.module.size == 2 ** (n * n)
    assert all(W.u_inv[W.u[t]] == t for t in range(W.PQ.module.size))
    assert all(W.u[W.u_inv[s]] == s for s in range(W.S.size))
    assert all(W.v_inv[W.v[t]] == t for t in range(W.QP.module.size))
    assert all(W.v[W.v_inv[k]] == k for k in range(W.K.size))
    for law in ("phi_on_generators", "psi_is_inverse", "alpha_on_generators", "beta_is_inverse",
                "alpha_after_beta", "beta_after_alpha"):
        assert W.report.get(law).passed
    if n == 3:
        for law in ("bullet_row_times_bar", "bullet_bar_times_column", "bullet_ones_fixes_sum",
                    "bullet_row_times_ones", "diagonal_chain"):
            assert W.report.get(law).passed
        texts = [t for t, _ in W.chain[0]]
        assert texts[0] == "(1 0 0) ⊗ (1 0 0)ᵗ" and texts[-1] == "(1 1 1) ⊗ (1 1 1)ᵗ"
        assert len({v for _, v in W.chain[0]}) == 1
        assert any("(1 1 1) ⊗ (1 1 1)ᵗ" in note for note in W.report.notes)


# 6 --------------------------------------------------------------------------

def test_c6_full_idempotents_and_lifts(record_property):
    record_property("criterion", C6)
    K = bool2()
    M2 = matrix_algebra(K, 2)
    scan = dict(full_idempotents(M2))
    assert scan[M2.one] and scan[M2.unit(0, 0)] and not scan[M2.zero]
    lifted = 0
    for e, full in scan.items():
        if full:
            W = lift_semiring_morita(K, 2, e)
            assert W.ok, W.report.render()
            lifted += 1
    assert lifted == sum(scan.values()) >= 2
    C = corner_algebra(M2, M2.unit(0, 0))
    h = find_algebra_isomorphism(C, K)
    assert h is not None and sorted(h.map) == [0, 1]


# 7 --------------------------------------------------------------------------

def test_c7_composition_law(record_property):
    record_property("criterion", C7)
    K = bool2()
    M2 = matrix_algebra(K, 2)
    idK, idM, s = AlgebraHomomorphism.identity(K), AlgebraHomomorphism.identity(M2), scalar_embedding(K, M2)
    for f, g in [(idK, idK), (idK, s), (s, idM)]:
        rep = check_composition_law(f, g)
        assert rep.ok, rep.render()


# 8 --------------------------------------------------------------------------

def _small_modules(modules):
    K = bool2()
    out = [M for M in modules.values() if M.size <= 4]
    for n in range(1, 5):
        for t in semilattices(n):
            act = [[0] * n, list(range(n))]
            out.append(FiniteKleeneModule(f"sl{n}", t, 0, K, act))
            out.append(FiniteKleeneModule(f"sl{n}-bi", t, 0, K, act, K, [[0, x] for x in range(n)]))
    return out


def test_c8_congruence_minimality(record_property, modules):
    record_property("criterion", C8)
    checked = 0
    for M in _small_modules(modules):
        pairs = list(itertools.combinations(range(M.size), 2))
        for k in range(3):
            for chosen in itertools.combinations(pairs, k):
                got = congruence_closure(M, list(chosen)).congruence
                canon = tuple(sorted(tuple(c) for c in got.classes()))
                assert canon == least_law_abiding_congruence(M, list(chosen)), (M.name, chosen)
                checked += 1
    assert checked > 500


# 9 --------------------------------------------------------------------------

def test_c9_category_equivalence(record_property):
    record_property("criterion", C9)
    K = bool2()
    W = matrix_morita_witness(K, 2)
    rep = check_category_equivalence(
        W, over_K=[regular_module(K, "left"), free_module(K, 2, "left")], over_S=[regular_module(W.S, "left")])
    assert rep.ok, rep.render()
    assert len(rep.checks) == 3


# 10 -------------------------------------------------------------------------

BATCH = """
import io, json, sys
from kleene_morita.cli import run
cmds, outdir = json.loads(sys.argv[1]), sys.argv[2]
res = []
for i, argv in enumerate(cmds):
    if argv[0] == "morita" and argv[1] in ("matrix", "lift") or argv[0] == "tensor" and argv[1] != "laws":
        argv = argv + ["--emit", f"{outdir}/w{i}.ks"]
    out, err = io.StringIO(), io.StringIO()
    res.append([run(argv, out, err), out.getvalue()])
print(json.dumps(res))
"""


def _batch(cmds, outdir, hashseed):
    env = dict(os.environ, PYTHONHASHSEED=str(hashseed))
    proc = subprocess.run([sys.executable, "-c", BATCH, json.dumps(cmds), str(outdir)],
                          capture_output=True, text=True, env=env, check=True)
    return json.loads(proc.stdout)


def test_c10_cli_determinism(record_property, tmp_path):
    record_property("criterion", C10)
    from test_cli import COMMANDS
    cmds = COMMANDS + [["morita", "matrix", "bool2", "1"], ["morita", "lift", "bool2", "2", "--idempotent", "I"],
                       ["morita", "lift", "bool2", "2", "--idempotent", "E11+E21"]]
    a, b = tmp_path / "a", tmp_path / "b"
    a.mkdir()
    b.mkdir()
    first, second = _batch(cmds, a, 1), _batch(cmds, b, 2)
    assert first == second
    assert all(code == 0 for code, _ in first)
    files = sorted(p.name for p in a.iterdir())
    assert files == sorted(p.name for p in b.iterdir()) and len(files) >= 6
    for name in files:
        assert (a / name).read_bytes() == (b / name).read_bytes()
    verified = _batch([["verify", str(a / name)] for name in files], tmp_path, 3)
    for name, (code, out) in zip(files, verified):
        assert code == 0, f"{name}\n{out}"
        assert "verdict: pass" in out
