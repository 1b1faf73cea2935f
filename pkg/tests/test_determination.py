import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tpic.constructions import (
    n_prime_subspace,
    premise_counterexample,
    pure_vs_pure_subspace,
    task_counterexample,
)
from tpic.determination import (
    Status,
    TaskPremise,
    canonicalize,
    count_classes,
    count_classes_formula,
    decide,
    implication_lattice,
    minimal_outcome_bounds,
    pure_ic_size_bound,
    violates,
)
from tpic.exceptions import BadDimension, DimMismatch
from tpic.linalg import (
    jordan_decompose,
    random_traceless_hermitian,
    rank_signature,
)
from tpic.observables import (
    OperatorSubspace,
    annihilator,
    observable_from_annihilator,
    statistics,
)
from tpic.weyl import ZeroSet, annihilator_from_zero_set

from conftest import diag


def brute_force_classes(d):
    return {canonicalize(TaskPremise(t, p, d)).canonical
            for t in range(1, d + 1) for p in range(t, d + 1)}


def check_witness(v, x, tp):
    """A witness lies in x, is traceless and violates (t, p)."""
    assert v.status is Status.CERTIFIED_NO
    w = v.witness
    assert x.projection_residual(w) <= 1e-9
    assert abs(np.trace(w)) <= 1e-10
    assert violates(rank_signature(w), tp.t, tp.p)


def test_task_premise_range():
    with pytest.raises(BadDimension):
        TaskPremise(2, 1, 3)
    with pytest.raises(BadDimension):
        TaskPremise(1, 4, 3)


def test_decide_trivial_subspace():
    x = OperatorSubspace(3, np.zeros((0, 3, 3)))
    for t, p in [(1, 1), (2, 3), (3, 3)]:
        assert decide(x, TaskPremise(t, p, 3)).status is Status.CERTIFIED_YES


def test_decide_premise_example():
    for d in (3, 4, 5):
        g = np.diag(np.r_[0.5, 0.5, -1.0, np.zeros(d - 3)])
        x = OperatorSubspace(d, [g])
        assert decide(x, TaskPremise(1, 1, d)).status is Status.CERTIFIED_YES
        if d >= 4:
            v = decide(x, TaskPremise(1, 2, d))
            check_witness(v, x, TaskPremise(1, 2, d))
            assert np.allclose(v.witness / v.witness[2, 2].real, g / g[2, 2])


@pytest.mark.parametrize("d", [4, 6, 8])
def test_decide_single_weyl_point(d):
    x = annihilator_from_zero_set(d, ZeroSet(d, [(d // 2, 0)]))
    v = decide(x, TaskPremise(d // 2, d // 2, d))
    check_witness(v, x, TaskPremise(d // 2, d // 2, d))


def test_decide_dim_mismatch():
    with pytest.raises(DimMismatch):
        decide(OperatorSubspace(3, [diag(1, -1, 0)]), TaskPremise(1, 1, 4))


def test_decide_one_dimensional_is_exact():
    # the verbatim condition: yes iff rank_down >= t+1 or rank_up >= p+1
    for d in range(2, 7):
        for k_plus in range(1, d):
            for k_minus in range(1, d - k_plus + 1):
                g = np.diag(np.r_[np.ones(k_plus) / k_plus, -np.ones(k_minus) / k_minus,
                                  np.zeros(d - k_plus - k_minus)])
                x = OperatorSubspace(d, [g])
                s = rank_signature(g)
                for t in range(1, d + 1):
                    for p in range(t, d + 1):
                        v = decide(x, TaskPremise(t, p, d))
                        yes = s.rank_down >= t + 1 or s.rank_up >= p + 1
                        assert (v.status is Status.CERTIFIED_YES) == yes
                        assert v.method == "generator"


def test_n_prime_certificates():
    x = n_prime_subspace()
    v = decide(x, TaskPremise(1, 4, 4))
    assert v.status is Status.CERTIFIED_YES and v.method == "certificate:N_PRIME"
    v = decide(x, TaskPremise(2, 2, 4))
    check_witness(v, x, TaskPremise(2, 2, 4))
    assert np.allclose(v.witness, x.basis[0] / np.linalg.norm(x.basis[0]))


def test_n_prime_recognized_without_tag():
    obs = observable_from_annihilator(n_prime_subspace())
    x = annihilator(obs)
    assert x.provenance == "GENERIC"
    v = decide(x, TaskPremise(1, 3, 4))
    assert v.status is Status.CERTIFIED_YES


def test_two_dimensional_pencil_is_exact():
    # span{diag(1,-1,0,0), diag(0,0,1,-1)} contains diag(1,-1,1,-1) (2,2) and the axes (1,1)
    x = OperatorSubspace(4, [diag(1, -1, 0, 0), diag(0, 0, 1, -1)])
    assert decide(x, TaskPremise(1, 1, 4)).status is Status.CERTIFIED_NO
    # span{diag(1,1,-1,-1), offdiag}: every element is a rotation of diag(r,r,-r,-r) -> (2,2)
    off = np.zeros((4, 4), dtype=complex)
    off[0, 2] = off[2, 0] = off[1, 3] = off[3, 1] = 1
    x = OperatorSubspace(4, [diag(1, 1, -1, -1), off])
    v = decide(x, TaskPremise(1, 4, 4))
    assert v.status is Status.CERTIFIED_YES and v.method == "pencil"


def test_pencil_finds_singular_element_off_the_axes():
    # a = diag(1, -2, 1) and b = diag(-2, 1, 1): rank-2 elements only on the diagonals
    x = OperatorSubspace(3, [diag(1, -2, 1), diag(-2, 1, 1)])
    # a - b = diag(3, -3, 0) has signature (1, 1): not (1, 1)-complete
    v = decide(x, TaskPremise(1, 1, 3))
    check_witness(v, x, TaskPremise(1, 1, 3))
    assert v.method in ("pencil",)


def test_unresolved_reports_trials():
    # a random 3-dimensional subspace in d = 5 has no element with rank_down <= 1
    # and rank_up <= 1 hitting by chance, and no exact route applies
    rng = np.random.default_rng(0)
    x = OperatorSubspace(5, [random_traceless_hermitian(5, rng) for _ in range(3)])
    v = decide(x, TaskPremise(1, 1, 5), trials=500, refine=0)
    assert v.status is Status.UNRESOLVED and v.trials_used == 500 and v.witness is None


def test_refinement_reaches_measure_zero_witnesses():
    x = pure_vs_pure_subspace()
    assert decide(x, TaskPremise(1, 1, 4), trials=2000, refine=0).status is Status.UNRESOLVED
    v = decide(x, TaskPremise(1, 1, 4), trials=2000)
    check_witness(v, x, TaskPremise(1, 1, 4))
    assert v.method == "refined"


def test_decide_is_deterministic():
    rng = np.random.default_rng(5)
    x = OperatorSubspace(4, [random_traceless_hermitian(4, rng) for _ in range(6)])
    a = decide(x, TaskPremise(1, 1, 4), trials=300, seed=9)
    b = decide(x, TaskPremise(1, 1, 4), trials=300, seed=9)
    assert a.status == b.status and a.method == b.method and a.trials_used == b.trials_used
    if a.witness is not None:
        assert np.array_equal(a.witness, b.witness)


def test_witness_gives_indistinguishable_states():
    x = task_counterexample(6, 2)
    obs = observable_from_annihilator(x)
    v = decide(annihilator(obs), TaskPremise(3, 3, 6))
    j = jordan_decompose(v.witness)
    assert rank_signature(j.rho_plus).rank <= 3 and rank_signature(j.rho_minus).rank <= 3
    assert np.allclose(statistics(obs, j.rho_plus), statistics(obs, j.rho_minus), atol=1e-9)


def test_premise_counterexample_separates():
    x = premise_counterexample(5, 2)
    assert decide(x, TaskPremise(1, 2, 5)).status is Status.CERTIFIED_YES
    assert decide(x, TaskPremise(1, 3, 5)).status is Status.CERTIFIED_NO


# ---------------------------------------------------------------------------
# equivalence classes
# ---------------------------------------------------------------------------

def test_canonicalize_examples():
    a = canonicalize(TaskPremise(1, 4, 4))
    b = canonicalize(TaskPremise(1, 3, 4))
    assert a == b and not a.is_ic_class
    assert canonicalize(TaskPremise(1, 2, 3)).is_ic_class
    assert canonicalize(TaskPremise(1, 1, 2)).is_ic_class
    assert not canonicalize(TaskPremise(1, 1, 3)).is_ic_class


def test_canonicalize_idempotent_and_member():
    for d in range(2, 10):
        for t in range(1, d + 1):
            for p in range(t, d + 1):
                c = canonicalize(TaskPremise(t, p, d))
                assert c.canonical in c.members and (t, p) in c.members
                again = canonicalize(TaskPremise(*c.canonical, d))
                assert again == c


@pytest.mark.parametrize("d, n", [(2, 1), (3, 2), (4, 5), (5, 7), (6, 12), (7, 15)])
def test_count_classes_values(d, n):
    assert count_classes(d) == n


def test_count_formula_matches_enumeration():
    for d in range(2, 41):
        assert count_classes_formula(d) == len(brute_force_classes(d))


def test_lattice_d4():
    table = implication_lattice(4)
    assert len(table.classes) == 5
    assert sum(len(c.members) for c in table.classes) == 10
    ic = [c for c in table.classes if c.is_ic_class]
    assert len(ic) == 1 and set(ic[0].members) == {(2, 3), (2, 4), (3, 3), (3, 4), (4, 4)}
    # IC implies everything; (1,1) implies only itself
    i_ic = table.classes.index(ic[0])
    assert len(table.implies[i_ic]) == 5
    assert [table.classes[j].canonical for j in table.implies[table.class_of(1, 1)]] == [(1, 1)]
    doc = table.to_dict()
    assert doc["dim"] == 4 and len(doc["classes"]) == 5


def test_lattice_d2_and_range():
    table = implication_lattice(2)
    assert len(table.classes) == 1
    assert set(table.classes[0].members) == {(1, 1), (1, 2), (2, 2)}
    with pytest.raises(BadDimension):
        implication_lattice(1)
    with pytest.raises(BadDimension):
        implication_lattice(65)


def test_lattice_render_mentions_every_class():
    text = implication_lattice(5).render()
    assert "7 inequivalent classes" in text


# ---------------------------------------------------------------------------
# outcome bounds
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("t, p, n", [(1, 4, 11), (1, 3, 11), (2, 2, 15), (1, 2, 11),
                                     (1, 1, 10), (2, 4, 16), (4, 4, 16)])
def test_bounds_d4(t, p, n):
    b = minimal_outcome_bounds(TaskPremise(t, p, 4))
    assert b.exact == n


def test_bounds_d3_and_general():
    assert minimal_outcome_bounds(TaskPremise(1, 1, 3)).exact == 8
    assert minimal_outcome_bounds(TaskPremise(1, 2, 3)).exact == 9
    b = minimal_outcome_bounds(TaskPremise(1, 10, 10))
    assert b.upper == 44 and b.exact is None and b.lower is None
    assert "not computed" in b.source
    # t = p < d/2 uses 4t(d - t)
    assert minimal_outcome_bounds(TaskPremise(2, 2, 10)).upper == 64
    # bounds never exceed d^2
    for d in range(2, 12):
        for t in range(1, d + 1):
            for p in range(t, d + 1):
                b = minimal_outcome_bounds(TaskPremise(t, p, d))
                assert b.upper <= d * d
                if b.exact is not None:
                    assert b.upper == b.exact


@pytest.mark.parametrize("d, size, expected", [(4, 7, True), (4, 6, False), (5, 11, True), (5, 10, True),
                                               (5, 9, False)])
def test_pure_ic_size_bound(d, size, expected):
    assert pure_ic_size_bound(d, size) is expected


def test_pure_ic_size_bound_odd_cases():
    # d = 15: d - 1 = 14 = 0b1110, a = 3 = 3 mod 4, threshold (13)^2 + 6 - 3 = 172
    assert pure_ic_size_bound(15, 172) and not pure_ic_size_bound(15, 171)
    # d = 7: d - 1 = 6 = 0b110, a = 2, threshold 25 + 4 - 2 = 27
    assert pure_ic_size_bound(7, 27) and not pure_ic_size_bound(7, 26)
    with pytest.raises(BadDimension):
        pure_ic_size_bound(3, 5)


# ---------------------------------------------------------------------------
# properties
# ---------------------------------------------------------------------------

@given(st.integers(3, 5), st.integers(2, 4), st.integers(0, 2**32 - 1))
def test_monotonicity(d, k, seed):
    rng = np.random.default_rng(seed)
    x = OperatorSubspace(d, [random_traceless_hermitian(d, rng) for _ in range(k)])
    verdicts = {(t, p): decide(x, TaskPremise(t, p, d), trials=60, seed=seed, refine=0)
                for t in range(1, d + 1) for p in range(t, d + 1)}
    for (t1, p1), v1 in verdicts.items():
        for (t2, p2), v2 in verdicts.items():
            if t2 <= t1 and p2 <= p1:
                if v1.status is Status.CERTIFIED_YES:
                    assert v2.status is not Status.CERTIFIED_NO
                if v2.status is Status.CERTIFIED_NO:
                    assert violates(rank_signature(v2.witness), t1, p1)


@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_witness_validity(d, seed):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, 4))
    x = OperatorSubspace(d, [random_traceless_hermitian(d, rng) for _ in range(k)])
    for t, p in itertools.combinations_with_replacement(range(1, d + 1), 2):
        tp = TaskPremise(t, p, d)
        v = decide(x, tp, trials=40, seed=seed, refine=0)
        if v.status is Status.CERTIFIED_NO:
            check_witness(v, x, tp)
            j = jordan_decompose(v.witness)
            ranks = sorted([rank_signature(j.rho_plus).rank, rank_signature(j.rho_minus).rank])
            assert ranks[0] <= t and ranks[1] <= p
