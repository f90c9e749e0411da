import pytest
from hypothesis import given, settings, strategies as st

from erdos_last.enumerator import (
    PAPER_ORDER_10,
    SearchSpace,
    enumerate_solutions,
    enumerate_trivial,
    loop_plan,
    outer_values,
    partition_work,
)
from erdos_last.model import counts_to_exponents, make_instance, verify_solution
from erdos_last.oracle import brute_force_by_multiset
from erdos_last.reducer import manual_bounds, reduce_bounds

from helpers import COUNTS, MAX_N, SOLUTIONS_3, SOLUTIONS_4


def _paper_space(x_n, order="weight"):
    inst = make_instance(x_n)
    return SearchSpace(inst, reduce_bounds(inst, mode="paper"), order)


@pytest.mark.parametrize("backend", ["python", "numba"])
def test_three_and_four_exact(backend):
    assert [s.as_tuple() for s in enumerate_solutions(_paper_space(3), backend)] == SOLUTIONS_3
    assert [s.as_tuple() for s in enumerate_solutions(_paper_space(4), backend)] == SOLUTIONS_4


@pytest.mark.parametrize("backend", ["python", "numba"])
def test_five_counts(backend):
    sols = enumerate_solutions(_paper_space(5), backend)
    assert len(sols) == COUNTS[5] and max(s.n for s in sols) == MAX_N[5]
    assert all(verify_solution(s) for s in sols)


def test_backends_agree_on_six():
    space = _paper_space(6)
    assert enumerate_solutions(space, "python") == enumerate_solutions(space, "numba")


def test_trivial_cases():
    assert [s.as_tuple() for s in enumerate_trivial(1)] == [(1, 1)]
    # n = 1 with the single part 2 satisfies 1 * 2 = 2
    assert [s.as_tuple() for s in enumerate_trivial(2)] == [(1, 0, 1)]
    with pytest.raises(ValueError):
        enumerate_trivial(3)


def test_trivial_two_matches_oracle():
    ref = [s for s in brute_force_by_multiset(200, 2) if s.x_n == 2]
    assert ref == enumerate_trivial(2)


def test_enumerate_rejects_small_x():
    inst = make_instance(2)
    with pytest.raises(ValueError):
        enumerate_solutions(SearchSpace(inst, manual_bounds(inst, 20)))


def test_loop_plan_ten_weight_order():
    plan = loop_plan(_paper_space(10))
    assert plan.order == (10, 8, 9, 6, 4, 7, 5, 3, 2)
    assert plan.variables[0].lower == 1 and all(v.lower == 0 for v in plan.variables[1:])
    assert plan.caps == (87, 49, 31, 25)


def test_loop_plan_ten_paper_order():
    plan = loop_plan(_paper_space(10, "paper"))
    assert plan.order == PAPER_ORDER_10
    lines = plan.describe()
    assert lines[0] == "for a10 := 1 to min(floor(B1/2), B3)"
    assert lines[1] == "for a7 := 0 to min(B1-2a10, B4)"
    assert lines[-1] == "for a2 := 0 to B1-2a10-a7-a5-2a9-2a6-a3-3a8-2a4"


def test_loop_plan_seven_bounded_by_b4():
    plan = loop_plan(_paper_space(7))
    first = plan.variables[0]
    assert first.value == 7
    assert first.limit(plan.caps) == 25


def test_loop_plan_three():
    lines = loop_plan(_paper_space(3)).describe()
    assert lines == ["for a3 := 1 to min(B1, B2)", "for a2 := 0 to B1-a3"]


def test_paper_order_only_for_ten():
    inst = make_instance(9)
    with pytest.raises(ValueError):
        SearchSpace(inst, reduce_bounds(inst, mode="paper"), "paper")


def test_paper_order_same_result():
    # full search is long; compare on a small box
    inst = make_instance(10)
    bs = manual_bounds(inst, 24, (14, 10, 8))
    a = enumerate_solutions(SearchSpace(inst, bs, "paper"))
    b = enumerate_solutions(SearchSpace(inst, bs))
    assert a == b and len(a) > 0


def test_partition_identity_and_ten():
    space = _paper_space(10)
    assert partition_work(space, 1) == [space]
    slices = partition_work(space, 31)
    assert [outer_values(s) for s in slices] == [[v] for v in range(1, 32)]
    with pytest.raises(ValueError):
        partition_work(space, 0)


def test_partition_degenerate():
    slices = partition_work(_paper_space(3), 100)
    assert sum(1 for s in slices if not outer_values(s)) > 0
    values = sorted(v for s in slices for v in outer_values(s))
    assert values == outer_values(_paper_space(3))


@pytest.mark.parametrize("shards", [2, 3, 7, 40])
def test_shards_union_equals_full(shards):
    space = _paper_space(5)
    full = enumerate_solutions(space)
    parts = [enumerate_solutions(s) for s in partition_work(space, shards)]
    merged = sorted((x for p in parts for x in p), key=lambda s: s.sort_key())
    assert merged == full
    assert sum(len(p) for p in parts) == len(full)


def test_skip_and_progress_callback():
    space = _paper_space(4)
    seen = []
    full = enumerate_solutions(space, on_unit=lambda v, sols, leaves: seen.append((v, len(sols), leaves)))
    assert [v for v, _, _ in seen] == outer_values(space)
    assert sum(n for _, n, _ in seen) == len(full)
    rest = enumerate_solutions(space, skip=[1])
    assert len(rest) == len(full) - seen[0][1]


@pytest.mark.parametrize("x_n", [3, 4, 5])
def test_matches_multiset_oracle_up_to_300(x_n):
    mine = [s for s in enumerate_solutions(_paper_space(x_n)) if s.n <= 300]
    ref = [s for s in brute_force_by_multiset(300, x_n) if s.x_n == x_n]
    assert mine == ref


@pytest.mark.parametrize("x_n", [5, 6])
def test_emitted_solutions_respect_bounds(x_n):
    space = _paper_space(x_n)
    for sol in enumerate_solutions(space):
        assert verify_solution(sol)
        b = counts_to_exponents(sol.counts).b
        assert sum(b) <= space.bounds.total_bound
        assert all(x <= c for x, c in zip(b, space.bounds.prime_caps()))


@settings(max_examples=30, deadline=None)
@given(
    st.integers(min_value=3, max_value=7),
    st.integers(min_value=16, max_value=26),
    st.integers(min_value=0, max_value=10),
)
def test_backends_agree_on_random_boxes(x_n, total, cut):
    inst = make_instance(x_n)
    per = tuple(max(0, total - cut - 3 * j) for j in range(inst.k - 1))
    space = SearchSpace(inst, manual_bounds(inst, total, per))
    assert enumerate_solutions(space, "python") == enumerate_solutions(space, "numba")


@pytest.mark.parametrize("x_n", [3, 4, 5, 6])
def test_largest_part_sanity_bound(x_n):
    # x_n <= 2n^2 - n holds for n >= 2; n = 1 allows any single part
    for sol in enumerate_solutions(_paper_space(x_n)):
        assert sol.n == 1 or sol.x_n <= 2 * sol.n**2 - sol.n
