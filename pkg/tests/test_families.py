"""Construction oracles for the graph families.

Sizes, degrees, vertex roles, and resolved parameters are frozen by hand
from the construction definitions; structural claims (planarity,
diameter, degeneracy) are cross-checked against networkx and the
measuring code on instances small enough to afford it.
"""

import math

import networkx as nx
import numpy as np
import pytest

from treegrowth.families import (
    E2,
    ConstructionMeta,
    FamilyError,
    FamilySpec,
    TreeDecomposition,
    build_family,
    build_tree_decomposition_degenerate,
    gen_complete,
    gen_degenerate_lower,
    gen_glued,
    gen_grid,
    gen_ladder,
    gen_planar_lower,
    gen_subdivided_tree,
    h_edge_mask,
    i_edge_mask,
    plan_family,
    verify_tree_decomposition,
    _pow2_floor,
)
from treegrowth.graphs import BudgetExceededError

from helpers import to_networkx


# -- simple families -------------------------------------------------------


def test_complete_meta():
    g, meta = gen_complete(5)
    assert g.n == 5 and g.m == 10
    assert meta.declared_max_degree == 4
    assert meta.declared_degeneracy == 4
    assert meta.declared_genus == 1
    assert gen_complete(8)[1].declared_genus == 2
    assert gen_complete(4)[1].declared_genus == 0


def test_grid_square():
    g, meta = gen_grid(2, 3)
    assert g.n == 16 and g.m == 24
    assert meta.declared_max_degree == 4
    assert meta.declared_diameter_bound == 6
    assert meta.declared_degeneracy == 2
    assert meta.declared_genus == 0
    assert g.diameter() == 6
    g2, _ = gen_grid(2, 2)
    assert g2.n == 9 and g2.m == 12


def test_grid_cube():
    g, meta = gen_grid(3, 1)
    assert g.n == 8 and g.m == 12
    assert meta.declared_max_degree == 3
    assert meta.declared_genus == 0
    assert g.diameter() == 3


def test_grid_path():
    g, meta = gen_grid(1, 5)
    assert g.edges.tolist() == [[0, 1], [1, 2], [2, 3], [3, 4], [4, 5]]
    assert meta.declared_max_degree == 2


# -- ladder and subdivided tree ------------------------------------------------


def test_ladder_sizes():
    g, meta = gen_ladder(2, 3)
    assert (g.n, g.m) == (6, 9)
    assert meta.declared_max_degree == 3
    g, meta = gen_ladder(3, 2)
    assert (g.n, g.m) == (6, 8)
    assert meta.declared_max_degree == 4
    assert meta.main_groups == ((0, 1), (2, 3), (4, 5))
    assert meta.target_vertex == 4


def test_ladder_of_width_one_is_path():
    g, meta = gen_ladder(4, 1)
    assert g.edges.tolist() == [[0, 1], [1, 2], [2, 3]]
    assert meta.declared_diameter_bound == 3


def test_ladder_rejects_disconnected():
    with pytest.raises(FamilyError):
        gen_ladder(1, 3)


def test_subdivided_tree_smallest():
    g, meta = gen_subdivided_tree(2, 1)
    assert g.edges.tolist() == [[0, 1], [0, 2]]
    assert meta.leaf_vertices == (1, 2)
    assert meta.height_target == 1


def test_subdivided_tree_heap_layout():
    g, meta = gen_subdivided_tree(4, 1)
    assert g.n == 7
    assert g.edges.tolist() == [[0, 1], [0, 2], [1, 3], [1, 4], [2, 5], [2, 6]]


def test_subdivided_tree_with_paths():
    g, meta = gen_subdivided_tree(4, 2)
    assert g.n == 11
    assert meta.declared_max_degree == 3
    assert meta.declared_diameter_bound == 6
    assert g.diameter() == 6
    assert g.degeneracy_ordering().degeneracy == 1


# -- glued construction ----------------------------------------------------------


def test_glued_formula_mode_resolution():
    g, meta = gen_glued({"max_degree": 5, "diameter": 518})
    p = meta.params
    assert p["mode"] == "formula"
    assert p["delta"] == 2
    assert p["L"] == 8
    assert p["m"] == 119
    assert p["theta"] == pytest.approx(32.0)
    assert g.n == 8 * 2 + 7 + 8 * 118 == 967
    assert meta.declared_max_degree == 5
    assert meta.height_target == 7


def test_glued_formula_hypothesis_enforced():
    with pytest.raises(FamilyError, match="16 e\\^3"):
        gen_glued({"max_degree": 5, "diameter": 517})


def test_glued_override_small():
    g, meta = gen_glued({"L": 4, "delta": 1, "a": 8.0})
    p = meta.params
    assert p["m"] == 32
    assert p["theta"] == pytest.approx(64 / E2)
    assert g.n == 4 + 3 + 4 * 31 == 131
    assert meta.declared_max_degree == 3
    assert meta.leaf_vertices == (0, 1, 2, 3)
    assert meta.chain_vertex_count == 4
    assert meta.tree_root == 4
    assert meta.height_target == 3
    # chain part is the path 0-1-2-3
    hm = h_edge_mask(g, meta)
    assert g.edges[hm].tolist() == [[0, 1], [1, 2], [2, 3]]
    assert int(i_edge_mask(g, meta).sum()) == 4 * 32 + 2


def test_glued_edge_split_counts():
    g, meta = gen_glued({"L": 8, "delta": 3, "a": 8.0, "m": 4})
    L, delta, m = 8, 3, 4
    assert int(h_edge_mask(g, meta).sum()) == (L - 1) * delta**2
    assert int(i_edge_mask(g, meta).sum()) == L * m + L - 2
    assert meta.leaf_vertices == tuple(range(0, 24, 3))
    tree_set = {frozenset(e) for e in meta.tree_edges}
    masked = {frozenset(map(int, e)) for e in g.edges[i_edge_mask(g, meta)]}
    assert tree_set == masked


def test_glued_respects_declared_bounds():
    g, meta = gen_glued({"L": 8, "delta": 2, "a": 8.0})
    assert g.diameter() <= meta.declared_diameter_bound
    assert g.degeneracy_ordering().degeneracy <= meta.declared_degeneracy
    assert meta.declared_genus is None  # gluing breaks planarity at delta = 2
    g1, meta1 = gen_glued({"L": 8, "delta": 1, "a": 8.0, "m": 2})
    assert meta1.declared_genus == 0
    assert nx.check_planarity(to_networkx(g1))[0]


# -- planar lower-bound construction ------------------------------------------------


def test_planar_lower_layout():
    g, meta = gen_planar_lower({"L": 4, "delta": 4, "a": 2 * E2})
    p = meta.params
    assert meta.chain_vertex_count == 19
    assert p["m"] == 30
    assert p["theta"] == pytest.approx(4.0)
    assert g.n == 19 + 3 + 4 * 29
    assert meta.declared_max_degree == 8
    assert meta.small_groups == ((4,), (9,), (14,))
    assert meta.leaf_vertices == (0, 5, 10, 15)
    assert meta.height_target == 6
    for (c,) in meta.small_groups:
        assert g.degrees[c] == 8
    assert int(h_edge_mask(g, meta).sum()) == 3 * 8


def test_planar_lower_is_planar():
    g, meta = gen_planar_lower({"L": 8, "delta": 3, "a": 8.0, "m": 2})
    assert meta.declared_genus == 0
    assert nx.check_planarity(to_networkx(g))[0]
    assert g.degeneracy_ordering().degeneracy <= meta.declared_degeneracy == 3
    assert g.diameter() <= meta.declared_diameter_bound


def test_planar_formula_hypothesis_enforced():
    with pytest.raises(FamilyError, match="1e6"):
        gen_planar_lower({"max_degree": 8, "diameter": 1000})


def test_planar_formula_mode_plan():
    d = 5_000_000
    plan = plan_family(FamilySpec("planar_lower_G", {"max_degree": 8, "diameter": d}))
    p = plan["params"]
    assert p["delta"] == 4
    assert p["L"] == _pow2_floor(d * 2 / (3 * E2 * 1e5)) == 4
    assert p["m"] == math.ceil(E2 * 1e5 * 4 / 2) == 1_477_812
    assert plan["n_vertices"] == 16 + 3 + 3 + 4 * (p["m"] - 1)
    assert plan["n_vertices"] > 1 << 20  # beyond simulation scale


def test_formula_mode_rejects_short_chain():
    # Hypothesis on the diameter holds but the resolved chain length is 1.
    with pytest.raises(FamilyError, match="chain of length"):
        gen_planar_lower({"max_degree": 8, "diameter": int(1e6 * math.log(8)) + 1})


# -- degenerate lower-bound construction ------------------------------------------------


def test_degenerate_lower_layout():
    g, meta = gen_degenerate_lower({"L": 2, "delta": 3, "d": 2, "m": 1})
    assert meta.chain_vertex_count == 8
    assert g.n == 9
    assert int(h_edge_mask(g, meta).sum()) == 12
    assert meta.main_groups == ((0, 1, 2), (5, 6, 7))
    assert meta.small_groups == ((3, 4),)
    assert meta.leaf_vertices == (0, 5)
    assert meta.declared_max_degree == 6
    assert meta.declared_degeneracy == 4
    assert meta.height_target == 2


def test_degenerate_lower_rejects_large_d():
    with pytest.raises(FamilyError):
        gen_degenerate_lower({"L": 2, "delta": 3, "d": 4, "m": 1})


def test_degenerate_measured_degeneracy_is_twice_d():
    # At L >= 3 the realized degeneracy of the construction sits at 2d.
    for d in (1, 2):
        g, meta = gen_degenerate_lower({"L": 4, "delta": 4, "d": d, "m": 3})
        assert g.degeneracy_ordering().degeneracy == 2 * d == meta.declared_degeneracy


def test_degenerate_respects_declared_bounds():
    g, meta = gen_degenerate_lower({"L": 4, "delta": 4, "d": 2, "m": 3})
    assert g.diameter() <= meta.declared_diameter_bound
    assert g.max_degree == meta.declared_max_degree == 8


# -- dispatch, planning, serialization ----------------------------------------------------


def test_family_spec_fail_closed():
    with pytest.raises(FamilyError):
        FamilySpec.from_json_dict({"kind": "complete"})
    with pytest.raises(FamilyError):
        FamilySpec.from_json_dict({"kind": "torus", "params": {}})
    with pytest.raises(FamilyError):
        FamilySpec.from_json_dict({"kind": "complete", "params": {"n": 3}, "x": 1})
    with pytest.raises(FamilyError):
        build_family(FamilySpec("glued_G", {"L": 4, "delta": 1, "q": 2}))


def test_plan_matches_build():
    specs = [
        FamilySpec("complete", {"n": 7}),
        FamilySpec("grid", {"d": 3, "k": 3}),
        FamilySpec("ladder_H", {"L": 5, "delta": 3}),
        FamilySpec("subdivided_tree_I", {"L": 8, "m": 3}),
        FamilySpec("glued_G", {"L": 4, "delta": 2, "a": 8.0}),
        FamilySpec("planar_lower_G", {"L": 4, "delta": 2, "a": 8.0, "m": 3}),
        FamilySpec("degenerate_lower_G", {"L": 4, "delta": 3, "d": 2, "m": 2}),
    ]
    for spec in specs:
        g, meta = build_family(spec)
        assert plan_family(spec)["n_vertices"] == g.n
        assert g.max_degree == meta.declared_max_degree


def test_build_family_budget():
    with pytest.raises(BudgetExceededError):
        build_family(FamilySpec("complete", {"n": 2000}), max_vertices=100)


def test_pow2_floor_exact_hit():
    assert _pow2_floor(8.0) == 8
    assert _pow2_floor(7.99) == 4
    assert _pow2_floor(1.0) == 1
    with pytest.raises(FamilyError):
        _pow2_floor(0.5)


def test_builds_are_deterministic():
    spec = FamilySpec("degenerate_lower_G", {"L": 4, "delta": 3, "d": 2, "m": 2})
    a, _ = build_family(spec)
    b, _ = build_family(spec)
    assert a.to_text() == b.to_text()


# -- tree decomposition ------------------------------------------------------------


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("L,delta,m", [(2, 3, 2), (4, 4, 3)])
def test_decomposition_small_instances(L, delta, m, d):
    g, meta = gen_degenerate_lower({"L": L, "delta": delta, "d": d, "m": m})
    td = build_tree_decomposition_degenerate(g, meta)
    report = verify_tree_decomposition(g, td)
    assert report.passed, report.violations
    assert report.width <= 2 * d + 1


def test_decomposition_wide_instance():
    # With eight leaf groups the bottom branchings lie on three
    # consecutive-leaf paths, so the width grows to 3d + 1.
    d = 2
    g, meta = gen_degenerate_lower({"L": 8, "delta": 3, "d": d, "m": 2})
    td = build_tree_decomposition_degenerate(g, meta)
    report = verify_tree_decomposition(g, td)
    assert report.passed, report.violations
    assert report.width == 3 * d + 1


def test_verifier_rejects_bad_decompositions():
    from helpers import complete

    g = complete(3)
    td = TreeDecomposition(
        (frozenset({0, 1}), frozenset({2}), frozenset({0, 2})), ((0, 1), (1, 2))
    )
    report = verify_tree_decomposition(g, td)
    assert not report.passed
    assert any("edge (1, 2)" in v for v in report.violations)
    assert any("not connected" in v for v in report.violations)

    td2 = TreeDecomposition((frozenset({0, 1, 2}),), ((0, 0),))
    report2 = verify_tree_decomposition(g, td2)
    assert not report2.passed
