"""Acceptance criteria 1-8.

Each criterion is a function returning ``(ok, detail)``.  Under pytest each
one is a test and the terminal summary prints one PASS/FAIL line per
criterion; ``python tests/test_acceptance.py`` prints the same lines.
"""

from __future__ import annotations

import itertools
import os
import random
import sys
import time

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from helpers import (  # noqa: E402
    ACCEPTANCE,
    all_graphs,
    graph_map,
    hourglass,
    multipartite_edges,
    random_graph,
    same_leaf_labeled_tree,
    set_partitions,
)
from symfitch import (  # noqa: E402
    SplitSystem,
    Subsplit,
    SubsplitSystem,
    explain,
    exact_compatibility,
    full_subsplit_systems,
    graph_representation,
    has_k1_plus_k2,
    is_partition,
    least_resolved_trees,
    multipartite_parts,
    neighborhood_system,
    recognize,
    tree_from_splits,
)
from symfitch.compat import UNDECIDED, contract_empty_edges  # noqa: E402
from symfitch.model import contract_edge  # noqa: E402
from symfitch.reduction import (  # noqa: E402
    QuartetSet,
    binary_topologies,
    brute_force_is_fitch,
    explains,
    leaf_names,
    max_labeling,
    minimum_explaining_vertex_count,
    random_labeled_tree,
    random_map,
    random_quartet_set,
    reduce_quartets_to_map,
)

TITLES = {
    1: "hourglass golden case",
    2: "round-trip soundness (10,000 trees)",
    3: "oracle completeness (500 maps vs brute force)",
    4: "monochromatic equivalences (graphs on <= 7 vertices)",
    5: "least-resolved trees (n <= 6, all partitions)",
    6: "reduction faithfulness (200 quartet sets)",
    7: "splits equivalence (1,000 trees)",
    8: "performance envelope (n = 12 and n = 16)",
}


def criterion_1():
    t0 = time.perf_counter()
    hg = hourglass()
    via_reduction = reduce_quartets_to_map(QuartetSet.of(["ab|cd", "ac|bd"]))
    results = [recognize(hg), recognize(via_reduction)]
    took = time.perf_counter() - t0
    nb = {m: set(neighborhood_system(hg, m).members) for m in hg.colors}
    checks = {
        "rejected": all(r.decision == "not-fitch" for r in results),
        "pair": all(r.reason.get("subsplits") == ["ab|cd", "ac|bd"] for r in results),
        "Ns_1": nb["1"] == {frozenset("ac"), frozenset("bd")},
        "Ns_2": nb["2"] == {frozenset("ab"), frozenset("cd")},
        "partitions": all(is_partition(neighborhood_system(hg, m)) is None for m in hg.colors),
        "under 1 s": took < 1.0,
    }
    bad = [k for k, v in checks.items() if not v]
    return not bad, f"{took * 1000:.1f} ms" + (f"; failed: {bad}" if bad else "")


def criterion_2():
    t0 = time.perf_counter()
    rng = random.Random(20260101)
    failures = []
    for i in range(10_000):
        n = rng.randint(2, 10)
        k = rng.randint(1, 4)
        density = (0.1, 0.3, 0.6)[i % 3]
        colors = [str(c) for c in range(1, k + 1)]
        t = random_labeled_tree(n, colors, density, rng.getrandbits(64))
        e = explain(t, colors)
        r = recognize(e)
        if not r.accepted or explain(r.witness, colors) != e:
            failures.append(i)
    took = time.perf_counter() - t0
    ok = not failures and took < 300
    return ok, f"{10_000 - len(failures)}/10000 accepted and reproduced in {took:.1f} s" + (
        f"; first failures {failures[:5]}" if failures else ""
    )


def criterion_3():
    t0 = time.perf_counter()
    rng = random.Random(3)
    disagree, accepted = [], 0
    for i in range(500):
        n = rng.randint(2, 6)
        k = rng.randint(1, 2)
        density = rng.choice([0.1, 0.3, 0.5, 0.7, 0.9])
        e = random_map(leaf_names(n), [str(c) for c in range(1, k + 1)], density, rng.getrandbits(64))
        ours = recognize(e).accepted
        oracle = brute_force_is_fitch(e) is not None
        accepted += ours
        if ours != oracle:
            disagree.append(i)
    took = time.perf_counter() - t0
    ok = not disagree and took < 600
    return ok, f"{500 - len(disagree)}/500 agree ({accepted} Fitch, {500 - accepted} not) in {took:.1f} s"


def _three_way(leaves, edges):
    e = graph_map(leaves, edges)
    g = graph_representation(e, "m")
    a = has_k1_plus_k2(g) is None
    parts = multipartite_parts(g)
    ns = neighborhood_system(e, "m")
    c = is_partition(ns) is None
    same_parts = parts is None or not c or set(parts.parts) == set(ns.members)
    return a == (parts is not None) == c and same_parts, a


def criterion_4():
    t0 = time.perf_counter()
    checked = multipartite = bad = 0
    for n in range(2, 7):
        leaves = "abcdefg"[:n]
        for edges in all_graphs(leaves):
            ok, mp = _three_way(leaves, edges)
            checked += 1
            multipartite += mp
            bad += not ok
    exhaustive = checked
    leaves = "abcdefg"
    rng = random.Random(4)
    for _ in range(100_000):
        ok, mp = _three_way(leaves, random_graph(leaves, rng))
        checked += 1
        multipartite += mp
        bad += not ok
    # every complete multipartite graph on 7 vertices and every single-edge flip of it
    pairs = list(itertools.combinations(leaves, 2))
    for parts in set_partitions(leaves):
        base = {frozenset(e) for e in multipartite_edges(parts)}
        for variant in [None] + pairs:
            edges = base ^ {frozenset(variant)} if variant else base
            ok, mp = _three_way(leaves, [tuple(sorted(e)) for e in edges])
            checked += 1
            multipartite += mp
            bad += not ok
    took = time.perf_counter() - t0
    return bad == 0, (
        f"{checked - bad}/{checked} graphs agree ({exhaustive} exhaustive 2 <= n <= 6, 100000 sampled n = 7, "
        f"{checked - exhaustive - 100_000} multipartite + flips n = 7; {multipartite} multipartite) in {took:.1f} s"
    )


def criterion_5():
    t0 = time.perf_counter()
    total, problems = 0, []
    for n in range(3, 7):
        leaves = "abcdef"[:n]
        for parts in set_partitions(leaves):
            total += 1
            e = graph_map(leaves, multipartite_edges(parts))
            fam = least_resolved_trees(e)
            t = fam.representative
            colors = list(e.used_colors())
            if not explains(t, e):
                problems.append(("explain", parts))
            if t.diameter() > 4:
                problems.append(("diameter", parts))
            if len(t.vertices) != minimum_explaining_vertex_count(e) or fam.vertex_count != len(t.vertices):
                problems.append(("minimum", parts))
            for ed in t.inner_edges:
                c = contract_edge(t, ed)
                if explains(c, e):
                    problems.append(("contract", parts, ed))
                # stronger: the contracted shape admits no explaining labeling at all
                if explains(max_labeling(e, c.topology, colors), e):
                    problems.append(("contract-any-labeling", parts, ed))
    took = time.perf_counter() - t0
    failing = {str(p[1]) for p in problems}
    return not problems, f"{total - len(failing)}/{total} maps pass in {took:.1f} s" + (
        f"; problems {problems[:3]}" if problems else ""
    )


def _brute_force_displays(qs: QuartetSet) -> bool:
    if len(qs.ground_set) < 4:
        return True
    return any(all(t.displays(q) for q in qs) for t in binary_topologies(qs.ground_set))


def criterion_6():
    t0 = time.perf_counter()
    rng = random.Random(6)
    bad, compatible = [], 0
    for i in range(200):
        n = rng.randint(4, 8)
        k = rng.randint(0, min(4, 3 * len(list(itertools.combinations(range(n), 4)))))
        qs = random_quartet_set(n, k, rng.getrandbits(64))
        e = reduce_quartets_to_map(qs)
        a = recognize(e).accepted
        b = exact_compatibility(SubsplitSystem(qs.ground_set, qs.quartets)).compatible
        c = _brute_force_displays(qs)
        _, star = full_subsplit_systems(e)
        compatible += a
        if not (a == b == c) or star.as_set() != frozenset(qs.quartets):
            bad.append(i)
    took = time.perf_counter() - t0
    return not bad, f"{200 - len(bad)}/200 consistent ({compatible} compatible, {200 - compatible} not) in {took:.1f} s"


def _incompatible_split(tree) -> Subsplit | None:
    full = frozenset(tree.leaves)
    for s in sorted(tree.splits()):
        if not s.is_trivial:
            # both sides keep a second leaf, so all four intersections are non-empty
            cut = frozenset({min(s.side_a), min(s.side_b)})
            return Subsplit(cut, full - cut)
    return None


def criterion_7():
    t0 = time.perf_counter()
    rng = random.Random(7)
    iso = flipped = injected = 0
    for _ in range(1000):
        n = rng.randint(2, 10)
        # random phylogenetic tree: contract the empty-labeled inner edges of a random binary tree
        t = contract_empty_edges(random_labeled_tree(n, ["x"], rng.choice([0.3, 0.6, 1.0]), rng.getrandbits(64)))
        system = SplitSystem.of_tree(t)
        back = tree_from_splits(system)
        iso += back is not None and same_leaf_labeled_tree(back, t)
        extra = _incompatible_split(t)
        if extra is None:
            continue
        injected += 1
        flipped += tree_from_splits(SplitSystem(system.ground_set, system.splits | {extra})) is None
    took = time.perf_counter() - t0
    ok = iso == 1000 and flipped == injected
    return ok, (
        f"{iso}/1000 isomorphic, {flipped}/{injected} injections rejected "
        f"({1000 - injected} stars or n < 4 admit no conflicting split) in {took:.1f} s"
    )


def criterion_8():
    rng = random.Random(8)
    colors = [str(c) for c in range(1, 6)]
    worst12 = 0.0
    slow = []
    for i in range(30):
        t = random_labeled_tree(12, colors, (0.1, 0.3, 0.6)[i % 3], rng.getrandbits(64))
        e = explain(t, colors)
        t0 = time.perf_counter()
        r = recognize(e)
        took = time.perf_counter() - t0
        worst12 = max(worst12, took)
        if not r.accepted or took >= 10:
            slow.append(i)
    budget = 10.0
    late = []
    outcomes = {"fitch": 0, UNDECIDED: 0, "other": 0}
    worst16 = 0.0
    for i in range(10):
        t = random_labeled_tree(16, colors, (0.1, 0.3, 0.6)[i % 3], rng.getrandbits(64))
        e = explain(t, colors)
        t0 = time.perf_counter()
        r = recognize(e, time_budget=budget)
        took = time.perf_counter() - t0
        worst16 = max(worst16, took)
        outcomes[r.decision if r.decision in outcomes else "other"] += 1
        if took > budget + 1.0 or outcomes["other"]:
            late.append(i)
    # a hard, pairwise-consistent instance must stop within a tight budget
    qs = random_quartet_set(14, 16, 35)
    t0 = time.perf_counter()
    hard = recognize(reduce_quartets_to_map(qs), time_budget=0.05)
    hard_took = time.perf_counter() - t0
    hard_ok = hard.decision == UNDECIDED and hard_took < 1.05
    ok = not slow and not late and hard_ok
    return ok, (
        f"n=12: 30 maps, worst {worst12:.2f} s; n=16: {outcomes['fitch']} fitch, "
        f"{outcomes[UNDECIDED]} undecided, worst {worst16:.2f} s (budget {budget:.0f} s); "
        f"hard n=14 instance with 0.05 s budget -> {hard.decision} in {hard_took:.2f} s"
    )


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 9)}


def _record(i: int) -> bool:
    ok, detail = CRITERIA[i]()
    ACCEPTANCE.append(f"[{'PASS' if ok else 'FAIL'}] criterion {i}: {TITLES[i]} - {detail}")
    return ok


@pytest.mark.parametrize("i", range(1, 9))
def test_criterion(i):
    assert _record(i), ACCEPTANCE[-1]


if __name__ == "__main__":
    results = []
    for i in CRITERIA:
        results.append(_record(i))
        print(ACCEPTANCE[-1], flush=True)
    sys.exit(0 if all(results) else 1)
