"""Independent reference checks used by several test modules."""

import itertools

import networkx as nx

from kneser_ekr.kneser import kneser_structure


def brute_force_ekr(adj, params):
    """Scan every vertex subset of size >= M for a non-star independent one."""
    st = kneser_structure(params.n, params.k)
    V = params.vertex_count
    stars = set(st.stars)
    for size in range(params.M, V + 1):
        for combo in itertools.combinations(range(V), size):
            s = sum(1 << v for v in combo)
            if any(adj[v] & s for v in combo):
                continue
            if size > params.M or s not in stars:
                return False
    return True


def maximal_independent_sets_ekr(adj, params):
    """EKR via networkx enumeration of maximal cliques of the complement."""
    st = kneser_structure(params.n, params.k)
    V = params.vertex_count
    g = nx.Graph()
    g.add_nodes_from(range(V))
    g.add_edges_from((i, j) for i in range(V) for j in range(i + 1, V) if not adj[i] >> j & 1)
    stars = set(st.stars)
    for clique in nx.find_cliques(g):
        if len(clique) > params.M:
            return False
        if len(clique) == params.M and sum(1 << v for v in clique) not in stars:
            return False
    return True


def disjoint_pair_count(members):
    return sum(1 for a, b in itertools.combinations(members, 2) if not set(a) & set(b))
