"""Shared builders and independent oracles for the test suite."""

from __future__ import annotations

import itertools
import random

import networkx as nx

from symfitch.model import LabeledTree, SymmetricMap, Tree, edge

# one line per acceptance criterion, printed in the pytest terminal summary
ACCEPTANCE: list[str] = []


def hourglass() -> SymmetricMap:
    # color 1 misses {a,c},{b,d}; color 2 misses {a,b},{c,d}
    return SymmetricMap.build(
        "abcd",
        ["1", "2"],
        [
            ("a", "b", {"1"}),
            ("c", "d", {"1"}),
            ("a", "c", {"2"}),
            ("b", "d", {"2"}),
            ("a", "d", {"1", "2"}),
            ("b", "c", {"1", "2"}),
        ],
    )


def labeled(leaves, edges_with_labels) -> LabeledTree:
    """Tree from ``[(u, v, labels), ...]``; vertices are inferred."""
    labels = {edge(u, v): frozenset(c) for u, v, c in edges_with_labels}
    verts = sorted({v for e in labels for v in e})
    return LabeledTree(tuple(verts), tuple(labels), tuple(leaves), labels)


def star(leaves, labels=None, center="v") -> LabeledTree:
    labels = labels or {}
    return labeled(leaves, [(x, center, labels.get(x, ())) for x in leaves])


def caterpillar4(inner=("m",), outer=()) -> LabeledTree:
    """((a,b),(c,d)) with the inner edge and every outer edge labeled as given."""
    return labeled(
        "abcd",
        [("a", "u", outer), ("b", "u", outer), ("c", "w", outer), ("d", "w", outer), ("u", "w", inner)],
    )


def nx_graph(tree: Tree) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(tree.vertices)
    g.add_edges_from(tree.edges)
    return g


def path_colors(tree: LabeledTree, x: str, y: str) -> frozenset[str]:
    """Colors on the x-y path via networkx, independent of the library's walkers."""
    path = nx.shortest_path(nx_graph(tree), x, y)
    return frozenset().union(*(tree.labels[edge(u, v)] for u, v in zip(path, path[1:])))


def oracle_map(tree: LabeledTree, colors) -> dict[frozenset[str], frozenset[str]]:
    return {frozenset((x, y)): path_colors(tree, x, y) for x, y in itertools.combinations(tree.leaves, 2)}


def same_leaf_labeled_tree(a: Tree, b: Tree) -> bool:
    """Isomorphism fixing leaf names (inner vertex names are free)."""
    ga, gb = nx_graph(a), nx_graph(b)
    for g, t in ((ga, a), (gb, b)):
        for v in g:
            g.nodes[v]["name"] = v if v in t.leaves else None
    return nx.is_isomorphic(ga, gb, node_match=lambda p, q: p["name"] == q["name"])


def graph_map(leaves, edges, m="m") -> SymmetricMap:
    es = {frozenset(e) for e in edges}
    return SymmetricMap.build(
        leaves, [m], [(x, y, {m} if frozenset((x, y)) in es else set()) for x, y in itertools.combinations(leaves, 2)]
    )


def all_graphs(leaves):
    pairs = list(itertools.combinations(leaves, 2))
    for bits in range(1 << len(pairs)):
        yield [p for i, p in enumerate(pairs) if bits >> i & 1]


def random_graph(leaves, rng: random.Random):
    return [p for p in itertools.combinations(leaves, 2) if rng.random() < 0.5]


def set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]
        yield [[first]] + part


def multipartite_edges(parts):
    return [(x, y) for p, q in itertools.combinations(parts, 2) for x in p for y in q]
