"""Small graph builders and hypothesis strategies shared across test modules."""

import networkx as nx
from hypothesis import strategies as st

from treegrowth.graphs import Graph


def complete(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def cycle(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def to_networkx(g: Graph) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    G.add_edges_from((int(u), int(v)) for u, v in g.edges)
    return G


@st.composite
def connected_graphs(draw, min_n: int = 2, max_n: int = 8):
    """Random spanning tree plus a random subset of extra edges."""
    n = draw(st.integers(min_n, max_n))
    edges = {(draw(st.integers(0, i - 1)), i) for i in range(1, n)}
    pool = [
        (u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in edges
    ]
    if pool:
        edges.update(draw(st.lists(st.sampled_from(pool), unique=True)))
    return Graph(n, sorted(edges))
