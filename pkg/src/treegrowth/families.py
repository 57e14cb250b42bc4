"""Parameterized graph families for the growth experiments.

Simple families (complete graphs, axis-aligned grids) exercise the upper
bounds.  The chain families realize the height lower bounds: a
high-connectivity chain H keeps the fast process on a long route while a
subdivided perfect binary tree I provides a short but slow bypass, glued
to the chain at one vertex per group.  Construction metadata records
vertex roles, the transit threshold used by the route-competition events,
and the declared structural parameters that the bound checks consume.

Vertex numbering in the chain families: the chain H occupies ids
[0, chain_vertex_count); the internal tree vertices and the subdivision
vertices of I follow.  An edge belongs to H exactly when both endpoints
are below chain_vertex_count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from treegrowth.graphs import BudgetExceededError, Graph

E2 = math.e**2

KINDS = (
    "complete",
    "grid",
    "ladder_H",
    "subdivided_tree_I",
    "glued_G",
    "planar_lower_G",
    "degenerate_lower_G",
)


class FamilyError(ValueError):
    """Raised for invalid family parameters."""


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    params: dict

    @classmethod
    def from_json_dict(cls, d: dict) -> "FamilySpec":
        if set(d) != {"kind", "params"}:
            raise FamilyError(f"family spec needs exactly kind and params, got {sorted(d)}")
        if d["kind"] not in KINDS:
            raise FamilyError(f"unknown family kind {d['kind']!r}")
        if not isinstance(d["params"], dict):
            raise FamilyError("params must be a mapping")
        return cls(d["kind"], dict(d["params"]))

    def to_json_dict(self) -> dict:
        return {"kind": self.kind, "params": dict(self.params)}


@dataclass(frozen=True)
class ConstructionMeta:
    """Roles and declared guarantees of a generated instance.

    Declared values are analytic: the generator promises them from the
    construction, and the build step cross-checks the max degree against
    the realized graph.  Degeneracy and diameter declarations are upper
    bounds, which keeps every bound check that consumes them valid.
    """

    kind: str
    params: dict
    declared_max_degree: int
    declared_diameter_bound: int
    declared_degeneracy: int
    declared_genus: int | None = None
    start_vertex: int = 0
    target_vertex: int | None = None
    main_groups: tuple[tuple[int, ...], ...] | None = None
    small_groups: tuple[tuple[int, ...], ...] | None = None
    leaf_vertices: tuple[int, ...] | None = None
    tree_root: int | None = None
    tree_edges: tuple[tuple[int, int], ...] | None = None
    chain_vertex_count: int | None = None
    transit_threshold: float | None = None
    height_target: int | None = None

    def to_json_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "params": dict(self.params),
            "declared_max_degree": self.declared_max_degree,
            "declared_diameter_bound": self.declared_diameter_bound,
            "declared_degeneracy": self.declared_degeneracy,
            "declared_genus": self.declared_genus,
            "start_vertex": self.start_vertex,
            "target_vertex": self.target_vertex,
            "chain_vertex_count": self.chain_vertex_count,
            "transit_threshold": self.transit_threshold,
            "height_target": self.height_target,
        }
        return out


# -- small helpers -------------------------------------------------------------


def _pow2_floor(x: float) -> int:
    """Largest power of two <= x, with a 1-ulp guard for exact hits."""
    if x < 1:
        raise FamilyError(f"no power of two fits below {x:g}")
    p = 1
    while 2 * p <= x * (1 + 1e-12):
        p *= 2
    return p


def _ceil(x: float) -> int:
    return math.ceil(x - 1e-12)


def _require_pow2(L: int) -> None:
    if L < 2 or L & (L - 1):
        raise FamilyError(f"L must be a power of two >= 2, got {L}")


def _as_int(params: dict, key: str, minimum: int = 1) -> int:
    try:
        v = int(params[key])
    except (KeyError, TypeError, ValueError):
        raise FamilyError(f"missing or non-integer parameter {key!r}") from None
    if v < minimum:
        raise FamilyError(f"parameter {key!r} must be >= {minimum}, got {v}")
    return v


def _bipartite(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.stack(np.meshgrid(a, b, indexing="ij"), axis=-1).reshape(-1, 2)


def _subdivided_tree_edges(
    L: int, m: int, leaf_ids, internal_base: int, subdiv_base: int
) -> list[tuple[int, int]]:
    """Perfect binary tree with L leaves, leaf edges subdivided into m-edge
    paths.  Internal node h (heap order) is internal_base + h; subdivision
    vertex t of leaf j is subdiv_base + j*(m-1) + t; leaf ids are supplied.
    """
    edges: list[tuple[int, int]] = []
    for h in range(L - 1):
        for c in (2 * h + 1, 2 * h + 2):
            if c <= L - 2:
                edges.append((internal_base + h, internal_base + c))
            else:
                j = c - (L - 1)
                prev = internal_base + h
                for t in range(m - 1):
                    s = subdiv_base + j * (m - 1) + t
                    edges.append((prev, s))
                    prev = s
                edges.append((prev, int(leaf_ids[j])))
    return edges


# -- simple families ---------------------------------------------------------------


def gen_complete(n: int) -> tuple[Graph, ConstructionMeta]:
    if n < 1:
        raise FamilyError("complete graph needs n >= 1")
    iu, iv = np.triu_indices(n, 1)
    g = Graph(n, np.stack([iu, iv], axis=1))
    genus = _ceil((n - 3) * (n - 4) / 12) if n >= 3 else 0
    meta = ConstructionMeta(
        kind="complete",
        params={"n": n},
        declared_max_degree=n - 1,
        declared_diameter_bound=1 if n > 1 else 0,
        declared_degeneracy=n - 1,
        declared_genus=genus,
    )
    return g, meta


def gen_grid(d: int, k: int) -> tuple[Graph, ConstructionMeta]:
    """d-dimensional grid on {0..k}**d (n = (k+1)**d), adjacency at L1 distance 1.

    k = 1 gives the d-cube.  Vertex x has id sum(x_i * (k+1)**i).
    """
    if d < 1 or k < 1:
        raise FamilyError("grid needs d >= 1 and k >= 1")
    side = k + 1
    n = side**d
    coords = np.arange(n, dtype=np.int64)
    blocks = []
    for axis in range(d):
        stride = side**axis
        digit = (coords // stride) % side
        a = coords[digit < k]
        blocks.append(np.stack([a, a + stride], axis=1))
    edges = np.concatenate(blocks)
    g = Graph(n, edges)
    max_deg = d if k == 1 else 2 * d
    genus = 0 if (d <= 2 or (k == 1 and d <= 3)) else None
    meta = ConstructionMeta(
        kind="grid",
        params={"d": d, "k": k},
        declared_max_degree=max_deg,
        declared_diameter_bound=d * k,
        declared_degeneracy=d,
        declared_genus=genus,
        target_vertex=n - 1,
    )
    return g, meta


# -- chain families ------------------------------------------------------------------


def _ladder_groups(L: int, delta: int) -> list[np.ndarray]:
    return [np.arange(i * delta, (i + 1) * delta, dtype=np.int64) for i in range(L)]


def gen_ladder(L: int, delta: int) -> tuple[Graph, ConstructionMeta]:
    """Chain of L groups of delta vertices, consecutive groups fully joined."""
    if L < 1 or delta < 1:
        raise FamilyError("ladder needs L >= 1 and delta >= 1")
    if L == 1 and delta != 1:
        raise FamilyError("a one-group ladder is connected only for delta = 1")
    groups = _ladder_groups(L, delta)
    blocks = [_bipartite(groups[i], groups[i + 1]) for i in range(L - 1)]
    edges = np.concatenate(blocks) if blocks else np.zeros((0, 2), np.int64)
    g = Graph(L * delta, edges)
    max_deg = 0 if L == 1 else (delta if L == 2 else 2 * delta)
    meta = ConstructionMeta(
        kind="ladder_H",
        params={"L": L, "delta": delta},
        declared_max_degree=max_deg,
        declared_diameter_bound=L - 1 if L > 1 else 0,
        declared_degeneracy=0 if L == 1 else delta,
        declared_genus=0 if delta <= 2 else None,
        target_vertex=(L - 1) * delta,
        main_groups=tuple(tuple(int(v) for v in grp) for grp in groups),
        chain_vertex_count=L * delta,
    )
    return g, meta


def gen_subdivided_tree(L: int, m: int) -> tuple[Graph, ConstructionMeta]:
    """Perfect binary tree with L leaves; leaf edges become m-edge paths.

    Internal vertices are 0..L-2 in heap order, leaves are L-1..2L-2,
    subdivision vertices follow.
    """
    _require_pow2(L)
    if m < 1:
        raise FamilyError("subdivision length m must be >= 1")
    leaves = [L - 1 + j for j in range(L)]
    edges = _subdivided_tree_edges(L, m, leaves, internal_base=0, subdiv_base=2 * L - 1)
    n = 2 * L - 1 + L * (m - 1)
    g = Graph(n, edges)
    depth = m + int(math.log2(L)) - 1
    meta = ConstructionMeta(
        kind="subdivided_tree_I",
        params={"L": L, "m": m},
        declared_max_degree=3 if L >= 4 else 2,
        declared_diameter_bound=2 * depth,
        declared_degeneracy=1,
        declared_genus=0,
        leaf_vertices=tuple(leaves),
        tree_root=0,
        tree_edges=tuple((int(a), int(b)) for a, b in edges),
        height_target=depth,
    )
    return g, meta


# -- lower-bound constructions: parameter resolution -----------------------------------


def _resolve_override(params: dict, kind: str, default_a: float, with_d: bool) -> dict:
    required = {"L", "delta"} | ({"d"} if with_d else set())
    allowed = required | {"a", "m"}
    if not required <= set(params) or not set(params) <= allowed:
        raise FamilyError(
            f"{kind} override mode takes {sorted(required)} plus optional ['a', 'm'],"
            f" got {sorted(params)}"
        )
    L = _as_int(params, "L")
    _require_pow2(L)
    delta = _as_int(params, "delta")
    a = float(params.get("a", default_a))
    if not a > E2:
        raise FamilyError(f"route-competition constant a must exceed e^2, got {a:g}")
    out = {"mode": "override", "L": L, "delta": delta, "a": a}
    if with_d:
        d = _as_int(params, "d")
        if d > delta:
            raise FamilyError(f"need d <= delta for the declared degeneracy, got d={d} delta={delta}")
        out["d"] = d
    if "m" in params:
        out["m"] = _as_int(params, "m")
    return out


def _resolve_glued(params: dict) -> dict:
    keys = set(params)
    if keys == {"max_degree", "diameter"}:
        max_degree = _as_int(params, "max_degree", 3)
        diameter = _as_int(params, "diameter")
        floor_d = 16 * math.e**3 * math.log(max_degree)
        if diameter < floor_d:
            raise FamilyError(
                f"glued_G formula mode needs diameter >= 16 e^3 ln(max_degree)"
                f" = {floor_d:.1f}, got {diameter}"
            )
        a = 4 * E2
        delta = (max_degree - 1) // 2
        L = _pow2_floor(diameter * max_degree / (8 * a))
        if L < 2:
            raise FamilyError(
                f"diameter {diameter} only fits a chain of length {L}; increase it"
            )
        out = {
            "mode": "formula",
            "L": L,
            "delta": delta,
            "a": a,
            "max_degree_requested": max_degree,
            "diameter_requested": diameter,
        }
    else:
        out = _resolve_override(params, "glued_G", 4 * E2, with_d=False)
    out.setdefault("m", _ceil(out["a"] * out["L"] / out["delta"]))
    out["theta"] = 2 * out["a"] * out["L"] / (E2 * out["delta"])
    return out


def _resolve_planar(params: dict) -> dict:
    keys = set(params)
    if keys == {"max_degree", "diameter"}:
        max_degree = _as_int(params, "max_degree", 2)
        diameter = _as_int(params, "diameter")
        floor_d = 1e6 * math.log(max_degree)
        if diameter < floor_d:
            raise FamilyError(
                f"planar_lower_G formula mode needs diameter >= 1e6 ln(max_degree)"
                f" = {floor_d:.1f}, got {diameter}"
            )
        a = E2 * 1e5
        delta = max_degree // 2
        L = _pow2_floor(diameter * math.sqrt(delta) / (3 * a))
        if L < 2:
            raise FamilyError(
                f"diameter {diameter} only fits a chain of length {L}; increase it"
            )
        out = {
            "mode": "formula",
            "L": L,
            "delta": delta,
            "a": a,
            "max_degree_requested": max_degree,
            "diameter_requested": diameter,
        }
    else:
        out = _resolve_override(params, "planar_lower_G", E2 * 1e5, with_d=False)
    root = math.sqrt(out["delta"])
    out.setdefault("m", _ceil(out["a"] * out["L"] / root))
    out["theta"] = out["a"] * out["L"] / (E2 * root)
    return out


def _resolve_degenerate(params: dict) -> dict:
    keys = set(params)
    if keys == {"max_degree", "diameter", "d"}:
        max_degree = _as_int(params, "max_degree", 2)
        diameter = _as_int(params, "diameter")
        d = _as_int(params, "d")
        delta = max_degree // 2
        if d > delta:
            raise FamilyError(f"need d <= max_degree // 2, got d={d}")
        floor_d = 1e6 * math.log(max_degree)
        if diameter < floor_d:
            raise FamilyError(
                f"degenerate_lower_G formula mode needs diameter >= 1e6 ln(max_degree)"
                f" = {floor_d:.1f}, got {diameter}"
            )
        a = E2 * 1e5
        L = _pow2_floor(diameter * math.sqrt(d * max_degree) / (8 * a))
        if L < 2:
            raise FamilyError(
                f"diameter {diameter} only fits a chain of length {L}; increase it"
            )
        out = {
            "mode": "formula",
            "L": L,
            "delta": delta,
            "d": d,
            "a": a,
            "max_degree_requested": max_degree,
            "diameter_requested": diameter,
        }
    else:
        out = _resolve_override(params, "degenerate_lower_G", E2 * 1e5, with_d=True)
    root = math.sqrt(out["d"] * out["delta"])
    out.setdefault("m", _ceil(out["a"] * out["L"] / root))
    out["theta"] = out["a"] * out["L"] / (E2 * root)
    return out


def _chain_sizes(kind: str, r: dict) -> tuple[int, int]:
    """(chain vertex count, total vertex count) for resolved parameters."""
    L, delta, m = r["L"], r["delta"], r["m"]
    if kind == "glued_G":
        n_h = L * delta
    elif kind == "planar_lower_G":
        n_h = L * delta + (L - 1)
    else:
        n_h = L * delta + (L - 1) * r["d"]
    return n_h, n_h + (L - 1) + L * (m - 1)


# -- lower-bound constructions: builders ------------------------------------------------


def _finish_chain(
    kind: str,
    r: dict,
    h_blocks: list[np.ndarray],
    groups: list[np.ndarray],
    small_groups,
    n_h: int,
    declared_max_degree: int,
    declared_degeneracy: int,
    declared_genus,
    height_target: int,
) -> tuple[Graph, ConstructionMeta]:
    L, m = r["L"], r["m"]
    leaf_ids = [int(grp[0]) for grp in groups]
    tree_edges = _subdivided_tree_edges(
        L, m, leaf_ids, internal_base=n_h, subdiv_base=n_h + L - 1
    )
    n = n_h + (L - 1) + L * (m - 1)
    edges = np.concatenate(h_blocks + [np.asarray(tree_edges, dtype=np.int64)])
    g = Graph(n, edges)
    meta = ConstructionMeta(
        kind=kind,
        params=dict(r),
        declared_max_degree=declared_max_degree,
        declared_diameter_bound=2 * (m + int(math.log2(L)) + 1),
        declared_degeneracy=declared_degeneracy,
        declared_genus=declared_genus,
        start_vertex=0,
        target_vertex=leaf_ids[-1],
        main_groups=tuple(tuple(int(v) for v in grp) for grp in groups),
        small_groups=small_groups,
        leaf_vertices=tuple(leaf_ids),
        tree_root=n_h,
        tree_edges=tuple((int(a), int(b)) for a, b in tree_edges),
        chain_vertex_count=n_h,
        transit_threshold=r["theta"],
        height_target=height_target,
    )
    return g, meta


def gen_glued(params: dict) -> tuple[Graph, ConstructionMeta]:
    """Ladder chain glued to a subdivided tree at the lowest vertex of each group."""
    r = _resolve_glued(params)
    L, delta = r["L"], r["delta"]
    groups = _ladder_groups(L, delta)
    h_blocks = [_bipartite(groups[i], groups[i + 1]) for i in range(L - 1)]
    ladder_deg = delta if L == 2 else 2 * delta
    tree_deg = 3 if L >= 4 else 2
    return _finish_chain(
        "glued_G",
        r,
        h_blocks,
        groups,
        None,
        L * delta,
        declared_max_degree=max(ladder_deg + 1, tree_deg),
        declared_degeneracy=delta + 1,
        # The bare ladder stays planar up to delta = 2, but gluing the tree
        # to one vertex per group already breaks planarity there.
        declared_genus=0 if delta == 1 else None,
        height_target=L - 1,
    )


def gen_planar_lower(params: dict) -> tuple[Graph, ConstructionMeta]:
    """Chain of independent groups joined by single connector vertices.

    Group i occupies [i*(delta+1), i*(delta+1)+delta); connector i sits at
    i*(delta+1)+delta and is joined to all of groups i and i+1.
    """
    r = _resolve_planar(params)
    L, delta = r["L"], r["delta"]
    groups = [
        np.arange(i * (delta + 1), i * (delta + 1) + delta, dtype=np.int64)
        for i in range(L)
    ]
    connectors = [i * (delta + 1) + delta for i in range(L - 1)]
    h_blocks = []
    for i, c in enumerate(connectors):
        c_arr = np.array([c], dtype=np.int64)
        h_blocks.append(_bipartite(c_arr, groups[i]))
        h_blocks.append(_bipartite(c_arr, groups[i + 1]))
    group_deg = (2 if L >= 3 else 1) + 1
    tree_deg = 3 if L >= 4 else 2
    return _finish_chain(
        "planar_lower_G",
        r,
        h_blocks,
        groups,
        tuple((c,) for c in connectors),
        L * delta + (L - 1),
        declared_max_degree=max(2 * delta, group_deg, tree_deg),
        declared_degeneracy=3,
        declared_genus=0,
        height_target=2 * L - 2,
    )


def gen_degenerate_lower(params: dict) -> tuple[Graph, ConstructionMeta]:
    """Chain alternating groups of delta vertices with groups of d vertices,
    consecutive groups fully joined.

    Block i holds group i at [i*(delta+d), i*(delta+d)+delta) and small
    group i right after it.
    """
    r = _resolve_degenerate(params)
    L, delta, d = r["L"], r["delta"], r["d"]
    block = delta + d
    groups = [np.arange(i * block, i * block + delta, dtype=np.int64) for i in range(L)]
    smalls = [
        np.arange(i * block + delta, (i + 1) * block, dtype=np.int64)
        for i in range(L - 1)
    ]
    h_blocks = []
    for i in range(L - 1):
        h_blocks.append(_bipartite(groups[i], smalls[i]))
        h_blocks.append(_bipartite(smalls[i], groups[i + 1]))
    group_deg = (2 * d if L >= 3 else d) + 1
    tree_deg = 3 if L >= 4 else 2
    return _finish_chain(
        "degenerate_lower_G",
        r,
        h_blocks,
        groups,
        tuple(tuple(int(v) for v in s) for s in smalls),
        L * delta + (L - 1) * d,
        declared_max_degree=max(2 * delta, group_deg, tree_deg),
        declared_degeneracy=2 * d,
        declared_genus=None,
        height_target=2 * L - 2,
    )


# -- dispatch -------------------------------------------------------------------------


def plan_family(spec: FamilySpec) -> dict:
    """Resolved parameters and the vertex count, without materializing edges."""
    kind, p = spec.kind, spec.params
    if kind == "complete":
        n = _as_int(p, "n")
        return {"kind": kind, "params": {"n": n}, "n_vertices": n}
    if kind == "grid":
        d, k = _as_int(p, "d"), _as_int(p, "k")
        return {"kind": kind, "params": {"d": d, "k": k}, "n_vertices": (k + 1) ** d}
    if kind == "ladder_H":
        L, delta = _as_int(p, "L"), _as_int(p, "delta")
        if L == 1 and delta != 1:
            raise FamilyError("a one-group ladder is connected only for delta = 1")
        return {"kind": kind, "params": {"L": L, "delta": delta}, "n_vertices": L * delta}
    if kind == "subdivided_tree_I":
        L, m = _as_int(p, "L"), _as_int(p, "m")
        _require_pow2(L)
        return {"kind": kind, "params": {"L": L, "m": m}, "n_vertices": 2 * L - 1 + L * (m - 1)}
    resolver = {
        "glued_G": _resolve_glued,
        "planar_lower_G": _resolve_planar,
        "degenerate_lower_G": _resolve_degenerate,
    }.get(kind)
    if resolver is None:
        raise FamilyError(f"unknown family kind {kind!r}")
    r = resolver(p)
    n_h, n = _chain_sizes(kind, r)
    return {"kind": kind, "params": r, "n_vertices": n, "chain_vertex_count": n_h}


def build_family(
    spec: FamilySpec, max_vertices: int = 1 << 20
) -> tuple[Graph, ConstructionMeta]:
    plan = plan_family(spec)
    if plan["n_vertices"] > max_vertices:
        raise BudgetExceededError(
            f"{spec.kind} instance would have {plan['n_vertices']} vertices"
            f" (limit {max_vertices})"
        )
    p = spec.params
    if spec.kind == "complete":
        g, meta = gen_complete(_as_int(p, "n"))
    elif spec.kind == "grid":
        g, meta = gen_grid(_as_int(p, "d"), _as_int(p, "k"))
    elif spec.kind == "ladder_H":
        g, meta = gen_ladder(_as_int(p, "L"), _as_int(p, "delta"))
    elif spec.kind == "subdivided_tree_I":
        g, meta = gen_subdivided_tree(_as_int(p, "L"), _as_int(p, "m"))
    elif spec.kind == "glued_G":
        g, meta = gen_glued(p)
    elif spec.kind == "planar_lower_G":
        g, meta = gen_planar_lower(p)
    else:
        g, meta = gen_degenerate_lower(p)
    if g.max_degree != meta.declared_max_degree:
        raise FamilyError(
            f"internal error: realized max degree {g.max_degree} does not match"
            f" declared {meta.declared_max_degree} for {spec.kind}"
        )
    return g, meta


def h_edge_mask(g: Graph, meta: ConstructionMeta) -> np.ndarray:
    """True for edges with both endpoints in the chain H."""
    if meta.chain_vertex_count is None:
        raise FamilyError(f"{meta.kind} has no chain/tree split")
    return (g.edges < meta.chain_vertex_count).all(axis=1)


def i_edge_mask(g: Graph, meta: ConstructionMeta) -> np.ndarray:
    """True for edges of the bypass tree I (at least one endpoint above H)."""
    return ~h_edge_mask(g, meta)


# -- tree decompositions ------------------------------------------------------------


@dataclass(frozen=True)
class TreeDecomposition:
    bags: tuple[frozenset, ...]
    tree_edges: tuple[tuple[int, int], ...]

    @property
    def width(self) -> int:
        return max(len(b) for b in self.bags) - 1


@dataclass(frozen=True)
class DecompositionReport:
    passed: bool
    width: int
    violations: tuple[str, ...]


def build_tree_decomposition_degenerate(
    g: Graph, meta: ConstructionMeta
) -> TreeDecomposition:
    """Tree decomposition of a degenerate_lower_G instance.

    The bag tree has the shape of the bypass tree I.  Each I vertex v gets
    the bag {v, parent(v)}; the leaf bag for group i additionally holds
    small groups i-1 and i; small group i is then added along the bag-tree
    path between consecutive leaves i and i+1; and each non-glued vertex x
    of group i gets its own leaf bag {x} + small groups i-1 and i.

    The result is always a valid decomposition.  Its width is at most
    2d + 1 when L <= 4; for larger L the bottom branching vertices lie on
    three consecutive-leaf paths, so the guarantee weakens to 3d + 1.
    """
    if meta.kind != "degenerate_lower_G":
        raise FamilyError("decomposition construction is specific to degenerate_lower_G")
    L = meta.params["L"]
    smalls = [set(s) for s in meta.small_groups]
    empty: set = set()

    # Parent structure of I from its edge list, rooted at tree_root.
    adj: dict[int, list[int]] = {}
    for u, v in meta.tree_edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    parent = {meta.tree_root: None}
    stack = [meta.tree_root]
    order = []
    while stack:
        x = stack.pop()
        order.append(x)
        for y in adj[x]:
            if y not in parent:
                parent[y] = x
                stack.append(y)

    bags: dict[int, set] = {}
    for x in order:
        bags[x] = {x} if parent[x] is None else {x, parent[x]}

    leaves = list(meta.leaf_vertices)
    for i, leaf in enumerate(leaves):
        before = smalls[i - 1] if i > 0 else empty
        after = smalls[i] if i < L - 1 else empty
        bags[leaf] |= before | after

    def path_between(u: int, v: int) -> list[int]:
        au, av = [u], [v]
        su, sv = {u}, {v}
        while True:
            pu, pv = parent[au[-1]], parent[av[-1]]
            if pu is not None:
                if pu in sv:
                    return au + av[: av.index(pu) + 1][::-1]
                au.append(pu)
                su.add(pu)
            if pv is not None:
                if pv in su:
                    return au[: au.index(pv) + 1] + av[::-1]
                av.append(pv)
                sv.add(pv)

    for i in range(L - 1):
        for x in path_between(leaves[i], leaves[i + 1]):
            bags[x] |= smalls[i]

    node_index = {x: j for j, x in enumerate(order)}
    bag_list = [frozenset(bags[x]) for x in order]
    edge_list = [
        (node_index[parent[x]], node_index[x]) for x in order if parent[x] is not None
    ]
    for i, grp in enumerate(meta.main_groups):
        before = smalls[i - 1] if i > 0 else empty
        after = smalls[i] if i < L - 1 else empty
        anchor = node_index[leaves[i]]
        for x in grp[1:]:  # grp[0] is the glued leaf, already in the bag tree
            edge_list.append((anchor, len(bag_list)))
            bag_list.append(frozenset({x} | before | after))
    return TreeDecomposition(tuple(bag_list), tuple(edge_list))


def verify_tree_decomposition(g: Graph, td: TreeDecomposition) -> DecompositionReport:
    violations: list[str] = []
    nbag = len(td.bags)

    # The bag graph must be a tree on all bags.
    if len(td.tree_edges) != nbag - 1:
        violations.append(f"bag tree has {len(td.tree_edges)} edges for {nbag} bags")
    adj: dict[int, list[int]] = {i: [] for i in range(nbag)}
    for a, b in td.tree_edges:
        adj[a].append(b)
        adj[b].append(a)
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != nbag:
        violations.append("bag tree is disconnected")

    holding: dict[int, list[int]] = {}
    for j, bag in enumerate(td.bags):
        for v in bag:
            holding.setdefault(v, []).append(j)
    for v in range(g.n):
        if v not in holding:
            violations.append(f"vertex {v} is in no bag")

    for u, v in g.edges:
        u, v = int(u), int(v)
        if not any(v in td.bags[j] for j in holding.get(u, [])):
            violations.append(f"edge ({u}, {v}) covered by no bag")

    for v, js in holding.items():
        js_set = set(js)
        comp = {js[0]}
        stack = [js[0]]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in js_set and y not in comp:
                    comp.add(y)
                    stack.append(y)
        if comp != js_set:
            violations.append(f"bags holding vertex {v} are not connected in the tree")

    passed = not violations
    return DecompositionReport(passed, td.width if nbag else -1, tuple(violations))
