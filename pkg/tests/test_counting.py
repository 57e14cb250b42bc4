"""Counting oracles: hand counts, formula instantiations, exhaustive small sweeps."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from treegrowth.counting import (
    bound_matrix,
    bound_paths_genus,
    bound_walks_degenerate,
    ceil_sqrt,
    count_report,
    count_simple_paths_from,
    count_simple_paths_upto,
    count_walks,
    count_walks_from,
    height_cutoff_plan,
)
from treegrowth.families import gen_complete, gen_grid
from treegrowth.graphs import BudgetExceededError, Graph

from helpers import complete, cycle, path, connected_graphs


def test_ceil_sqrt_oracles():
    assert ceil_sqrt(0) == 0
    assert ceil_sqrt(1) == 1
    assert ceil_sqrt(2) == 2
    assert ceil_sqrt(4) == 2
    assert ceil_sqrt(5) == 3
    big = (10**30 + 7) ** 2
    assert ceil_sqrt(big) == 10**30 + 7
    assert ceil_sqrt(big - 1) == 10**30 + 7


# -- exact counts ----------------------------------------------------------------


def test_path_count_oracles():
    assert count_simple_paths_from(path(3), 0, 2) == 1
    assert count_simple_paths_from(complete(4), 0, 3) == 6
    assert count_simple_paths_from(cycle(6), 0, 3) == 2
    assert count_simple_paths_from(cycle(6), 0, 0) == 1


def test_walk_count_oracles():
    g = complete(3)
    assert count_walks(g, 2) == 12
    assert count_walks(g, 0) == g.n
    assert count_walks(g, 1) == 2 * g.m
    assert count_walks_from(g, 0, 2) == 4


def test_upto_matches_single_lengths():
    g = complete(4)
    ups = count_simple_paths_upto(g, 0, 3)
    assert ups == [count_simple_paths_from(g, 0, length) for length in range(4)]
    assert ups == [1, 3, 6, 6]


def test_budget_exceeded_is_explicit():
    g = complete(8)
    with pytest.raises(BudgetExceededError, match="expansions"):
        count_simple_paths_upto(g, 0, 7, budget=10)


def test_counts_symmetric_under_vertex_transitivity():
    c6 = cycle(6)
    counts = {count_simple_paths_from(c6, s, 4) for s in range(6)}
    assert len(counts) == 1
    cube, _ = gen_grid(3, 1)
    counts = {count_simple_paths_from(cube, s, 5) for s in range(cube.n)}
    assert len(counts) == 1


@given(connected_graphs(), st.integers(min_value=0, max_value=5))
def test_paths_below_walks_below_trivial(g, length):
    paths = count_simple_paths_from(g, 0, length)
    walks = count_walks_from(g, 0, length)
    assert paths <= walks <= max(g.max_degree, 1) ** length


# -- ceilings --------------------------------------------------------------------


def test_walk_bound_frozen_values():
    assert bound_walks_degenerate(6, 1, 2, 2) == 96
    assert bound_walks_degenerate(5, 2, 3, 0) == 10
    assert bound_walks_degenerate(3, 1, 2, 3) == 3 * 2 * 8 * ceil_sqrt(8)
    with pytest.raises(ValueError):
        bound_walks_degenerate(5, 4, 3, 2)


def test_genus_bound_frozen_values():
    assert bound_paths_genus(20, 0, 6, 4) == 829440
    assert bound_paths_genus(10, 0, 7, 2) == 2 * 10 * 4 * 6 * 7
    odd = bound_paths_genus(10, 0, 7, 3)
    assert odd == 2 * 10 * 8 * ceil_sqrt(6**3 * 7**3)
    with pytest.raises(ValueError):
        bound_paths_genus(10, 0, 5, 2)
    with pytest.raises(ValueError):
        bound_paths_genus(10, 1, 8, 5)


def test_walk_bound_exhaustive_on_trees():
    rng = np.random.default_rng(7)
    for n in range(2, 11):
        for _ in range(3):
            parents = [int(rng.integers(0, i)) for i in range(1, n)]
            g = Graph(n, [(p, i + 1) for i, p in enumerate(parents)])
            assert g.degeneracy_ordering().degeneracy == 1
            for length in range(7):
                assert count_walks(g, length) <= bound_walks_degenerate(
                    n, 1, g.max_degree, length
                )


def test_genus_bound_on_planar_instances():
    for g, genus in [(cycle(6), 0), (gen_grid(2, 2)[0], 0), (complete(4), 0)]:
        delta = max(g.max_degree, 6)
        for length in range(9):
            total = sum(count_simple_paths_from(g, s, length) for s in range(g.n))
            assert total <= bound_paths_genus(g.n, genus, delta, length)


def test_height_cutoff_plan_instantiations():
    n, diam, delta = 64, 6, 4
    K = 4 * math.log(n) + 2 * diam
    L, fail = height_cutoff_plan(1.0 / n, delta, 2.0, K)
    assert L == math.ceil(2 * math.e * delta * K)
    assert fail == 1.0 / n + 2.0 ** (-L)
    L2, fail2 = height_cutoff_plan(0.25, 4.0, 2.0, 1000.0)
    assert fail2 == pytest.approx(0.25)
    assert L2 == math.ceil(8 * math.e * 1000.0)
    with pytest.raises(ValueError):
        height_cutoff_plan(1.2, 2.0, 2.0, 1.0)
    with pytest.raises(ValueError):
        height_cutoff_plan(0.1, 0.5, 2.0, 1.0)


@given(
    st.floats(min_value=1.0, max_value=50.0),
    st.floats(min_value=1.0, max_value=50.0),
    st.floats(min_value=0.1, max_value=10.0),
    st.floats(min_value=0.1, max_value=10.0),
    st.floats(min_value=0.5, max_value=100.0),
    st.floats(min_value=0.5, max_value=100.0),
)
def test_height_cutoff_monotone(a1, a2, c1, c2, k1, k2):
    a1, a2 = sorted((a1, a2))
    c1, c2 = sorted((c1, c2))
    k1, k2 = sorted((k1, k2))
    lo, _ = height_cutoff_plan(0.0, a1, c1, k1)
    hi, _ = height_cutoff_plan(0.0, a2, c2, k2)
    assert lo <= hi


# -- bound matrix ----------------------------------------------------------------


def test_bound_matrix_k2_rows():
    g, meta = gen_complete(2)
    rows = {r.check_id: r for r in bound_matrix(g, meta)}
    K = 4 * math.log(2) + 2
    assert rows["cover_log_diameter"].value == pytest.approx(K)
    assert rows["cover_log_diameter"].failure_prob == 1.0
    assert rows["height_max_degree"].value == math.ceil(2 * math.e * K)
    assert rows["height_max_degree"].kind == "height"
    assert rows["height_expansion"].applicable
    # Psi(K2) = 1, so the cutoff is ceil(4e).
    assert rows["height_expansion"].value == math.ceil(4 * math.e)
    assert rows["height_expansion"].failure_prob == 2.0 ** (-rows["height_expansion"].value)


def test_bound_matrix_k16_expansion_row():
    g, meta = gen_complete(16)
    rows = {r.check_id: r for r in bound_matrix(g, meta)}
    psi = sum(Fraction(1, k * (16 - k)) for k in range(1, 9))
    assert rows["height_expansion"].applicable
    assert rows["height_expansion"].value == math.ceil(4 * math.e * float(psi) * 15)


def test_bound_matrix_genus_row_on_grid():
    g, meta = gen_grid(2, 2)
    rows = {r.check_id: r for r in bound_matrix(g, meta)}
    K = 4 * math.log(9) + 2 * 4
    assert rows["height_genus"].applicable
    assert rows["height_genus"].value == math.ceil(16 * math.e * math.sqrt(24) * K)
    degen_row = rows["height_degeneracy"]
    assert degen_row.value == math.ceil(8 * math.e * math.sqrt(2 * 4) * K)
    assert degen_row.failure_prob == pytest.approx(2.0 / 9 + 2.0 ** (-degen_row.value))


def test_bound_matrix_flags_inapplicable_rows():
    g, meta = gen_complete(32)
    rows = {r.check_id: r for r in bound_matrix(g, meta)}
    assert not rows["height_expansion"].applicable  # exact profile capped at n=16
    from treegrowth.families import gen_ladder

    lg, lmeta = gen_ladder(3, 3)
    lrows = {r.check_id: r for r in bound_matrix(lg, lmeta)}
    assert lmeta.declared_genus is None
    assert not lrows["height_genus"].applicable


# -- reports ---------------------------------------------------------------------


def test_count_report_on_planar_grid():
    g, meta = gen_grid(2, 2)
    rows = count_report(g, meta, "grid_2_2", s=0, max_length=6)
    kinds = {r.bound_kind for r in rows}
    assert kinds == {"degenerate", "trivial", "genus"}
    assert all(r.passed for r in rows)
    walk_rows = [r for r in rows if r.bound_kind == "degenerate"]
    assert [r.length for r in walk_rows] == list(range(7))
    assert walk_rows[0].exact == 9 and walk_rows[1].exact == 24


def test_count_report_without_meta_has_no_genus_rows():
    rows = count_report(cycle(5), None, "c5", s=0, max_length=3)
    assert {r.bound_kind for r in rows} == {"degenerate", "trivial"}
    assert all(r.passed for r in rows)
