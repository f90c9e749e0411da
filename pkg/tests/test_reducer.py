from fractions import Fraction

import pytest

from erdos_last.baker import baker_bound
from erdos_last.enumerator import SearchSpace, enumerate_solutions
from erdos_last.lll import lll_reduce, shortest_vector_lower_bound
from erdos_last.model import counts_to_exponents, make_instance
from erdos_last.reducer import (
    FLOOR_CUTOFF,
    PAPER_FINAL,
    PAPER_INTERMEDIATE_PRIME,
    PAPER_INTERMEDIATE_TOTAL,
    BoundSet,
    LogRatio,
    ReductionConfig,
    build_lattice,
    lemma3_new_bound,
    manual_bounds,
    reduce_bounds,
    reduce_total_bound,
    relaxed,
    weight_ratio,
)

TOTAL_C3 = LogRatio(2, Fraction(21, 10))


def _lemma3(x_n, X, C, C2, C3):
    inst = make_instance(x_n)
    cfg = ReductionConfig(tuple(X), C, Fraction(C2), C3)
    c1sq = shortest_vector_lower_bound(lll_reduce(build_lattice(inst, C, cfg.m)))
    return lemma3_new_bound(cfg, c1sq)


def test_lattice_small_scale():
    basis = build_lattice(make_instance(4), 10**4)
    assert basis.columns == ((1, 6931), (0, 10986))
    assert build_lattice(make_instance(6), 10).rows()[-1] == [6, 10, 16]


def test_lattice_large_scale():
    basis = build_lattice(make_instance(10), 10**67)
    assert basis.dim == 4
    assert all(len(str(x)) in (67, 68) for x in basis.rows()[-1])
    assert basis.rows()[:3] == [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]


def test_lattice_rejects_small_scale():
    with pytest.raises(ValueError):
        build_lattice(make_instance(4), 9)


def test_config_invariants():
    with pytest.raises(ValueError):
        ReductionConfig((100, 100), 9999, Fraction(1), TOTAL_C3)
    with pytest.raises(ValueError):
        ReductionConfig((10, 10), 10**4, Fraction(1), TOTAL_C3, q=2)
    cfg = ReductionConfig((3, 4, 5), 10**4, Fraction(1), TOTAL_C3)
    assert cfg.S == 25 and cfg.T == 6.5 and cfg.X0 == 5 and cfg.m == 3


def test_lemma3_first_total_step():
    assert _lemma3(4, [44 * 10**9] * 2, 10**23, 138, TOTAL_C3)[0] == 97


def test_lemma3_last_total_step():
    assert _lemma3(4, [37, 37], 10**4, 138, TOTAL_C3)[0] == 33


def test_lemma3_seven_first_step():
    # the pinned first step for p = 7 (X = 87, C = 2e12, C2 = 2*9*87) yields 30
    assert _lemma3(10, [87] * 4, 2 * 10**12, 1566, LogRatio(7, Fraction(2)))[0] == 30


def test_lemma3_seven_second_step():
    # chaining from 30 with C = 5e9 and C2 = 2*9*30 gives the final 25
    assert _lemma3(10, [30] * 4, 5 * 10**9, 540, LogRatio(7, Fraction(2)))[0] == 25


def test_lemma3_precondition_failure_is_signal():
    cfg = ReductionConfig((100, 100), 10**4, Fraction(138), TOTAL_C3)
    assert lemma3_new_bound(cfg, Fraction(100)) is None


def test_lemma3_upper_rounding():
    got = _lemma3(4, [37, 37], 10**4, 138, TOTAL_C3)
    assert got[1] >= got[0] and got[1] - got[0] < 1


@pytest.mark.parametrize("x_n", [3, 4, 5, 6, 7, 8, 9, 10])
def test_paper_replay_finals(x_n):
    inst = make_instance(x_n)
    bs = reduce_bounds(inst, mode="paper")
    assert (bs.total_bound, bs.per_prime) == PAPER_FINAL[inst.k]


@pytest.mark.parametrize("x_n", [4, 6, 10])
def test_paper_replay_intermediates(x_n):
    inst = make_instance(x_n)
    bs = reduce_bounds(inst, mode="paper")
    accepted = [r for r in bs.provenance if r.precondition]
    totals = [r.new_bound for r in accepted if r.stage.startswith("total")]
    assert totals[:2] == list(PAPER_INTERMEDIATE_TOTAL[inst.k])
    firsts = [r.new_bound for r in accepted if r.stage.endswith("#1") and not r.stage.startswith("total")]
    assert firsts == list(PAPER_INTERMEDIATE_PRIME[inst.k])


@pytest.mark.parametrize("x_n", [3, 5, 7])
def test_provenance_preconditions_and_monotone(x_n):
    inst = make_instance(x_n)
    bs = reduce_bounds(inst, mode="paper")
    accepted = [r for r in bs.provenance if r.precondition]
    for r in accepted:
        T, S = Fraction(r.T), Fraction(r.S)
        assert Fraction(r.C1_squared) > T * T + S
    totals = [r.new_bound for r in accepted if r.stage.startswith("total")]
    assert totals == sorted(totals, reverse=True) and len(set(totals)) == len(totals)


def test_weight_ratio():
    assert [weight_ratio(make_instance(x)) for x in range(3, 11)] == [2, 2, 4, 4, 6, 6, 6, 6]


@pytest.mark.parametrize("x_n", [4, 6, 10])
def test_auto_mode_not_worse_than_replay(x_n):
    inst = make_instance(x_n)
    bs = reduce_bounds(inst, baker_bound(inst).B0, mode="auto")
    total, per = PAPER_FINAL[inst.k]
    assert bs.total_bound <= total + 2
    assert all(a <= b + 2 for a, b in zip(bs.per_prime, per))
    assert len(bs.per_prime) == inst.k - 1


def test_auto_total_needs_B0():
    with pytest.raises(ValueError):
        reduce_total_bound(make_instance(4), mode="auto")


def test_bound_set_invariants():
    inst = make_instance(6)
    with pytest.raises(ValueError):
        BoundSet(inst, 15)
    with pytest.raises(ValueError):
        BoundSet(inst, 20, (21, 5))
    bs = manual_bounds(inst, 30, (20, 10))
    assert bs.prime_caps() == (30, 20, 10)
    assert manual_bounds(inst, 30).prime_caps() == (30, 30, 30)
    assert relaxed(bs, 10).prime_caps() == (40, 30, 20)
    assert bs.to_dict()["per_prime"] == {"3": 20, "5": 10}
    assert bs.floor_cutoff == FLOOR_CUTOFF


@pytest.mark.parametrize("x_n", [3, 4])
@pytest.mark.parametrize("mode", ["paper", "auto"])
def test_soundness_under_relaxed_bounds(x_n, mode):
    inst = make_instance(x_n)
    bs = reduce_bounds(inst, baker_bound(inst).B0 if mode == "auto" else None, mode)
    wide = relaxed(bs, 10)
    for sol in enumerate_solutions(SearchSpace(inst, wide), backend="python"):
        b = counts_to_exponents(sol.counts).b
        assert sum(b) <= bs.total_bound
        assert all(bj <= cap for bj, cap in zip(b[1:], bs.per_prime))
