"""Subsplit compatibility and recognition of symmetrized Fitch maps.

The exact solver grows a binary tree one leaf at a time (canonical leaf
order), trying every edge for the new leaf.  A partial tree on the leaves
inserted so far is represented by its splits only: each edge is the bitmask
of the side *not* containing leaf 0.  A branch is cut as soon as a subsplit
restricted to the inserted leaves is no longer displayed; display survives
leaf insertion, so only subsplits containing the new leaf need rechecking.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from .errors import NotFitchError, PreconditionError, ResourceLimitError, ValidationError
from .model import LabeledTree, Subsplit, SymmetricMap, Tree, contract_edge, edge, explain, mask_of, members
from .neighborhoods import (
    SubsplitSystem,
    full_subsplit_systems,
    is_partition,
    neighborhood_system,
    subsplit_system,
)

log = logging.getLogger(__name__)

DEFAULT_MAX_LEAVES = 16
_CLOCK_EVERY = 512


@dataclass(frozen=True)
class SplitSystem:
    """Splits (bipartitions) of ``ground_set``."""

    ground_set: tuple[str, ...]
    splits: frozenset[Subsplit]

    def __post_init__(self):
        object.__setattr__(self, "ground_set", tuple(sorted(self.ground_set)))
        object.__setattr__(self, "splits", frozenset(self.splits))
        full = frozenset(self.ground_set)
        for s in self.splits:
            if s.leaves != full:
                raise ValidationError(f"{s} is not a split of the ground set")

    @property
    def has_all_trivial(self) -> bool:
        full = set(self.ground_set)
        return all(Subsplit({x}, full - {x}) in self.splits for x in self.ground_set) if len(full) >= 2 else True

    @classmethod
    def of_tree(cls, tree: Tree) -> "SplitSystem":
        return cls(tree.leaves, tree.splits())


@dataclass(frozen=True)
class CompatibilityVerdict:
    compatible: bool
    witness: Tree | None = None
    pair: tuple[Subsplit, Subsplit] | None = None
    nodes: int = 0

    @property
    def certificate(self) -> str | None:
        if self.compatible:
            return None
        return "pair" if self.pair else "search-exhausted"


def pairwise_quick_reject(system: SubsplitSystem | Iterable[Subsplit]) -> tuple[Subsplit, Subsplit] | None:
    """First pair (canonical order) with all four cross intersections non-empty.

    A pair proves incompatibility; ``None`` proves nothing.
    """
    subs = sorted(set(system))
    sides = [(s.side_a, s.side_b) for s in subs]
    for i in range(len(subs)):
        a1, b1 = sides[i]
        for j in range(i + 1, len(subs)):
            a2, b2 = sides[j]
            if a1 & a2 and a1 & b2 and b1 & a2 and b1 & b2:
                return subs[i], subs[j]
    return None


# ---------------------------------------------------------------------------
# Exact search
# ---------------------------------------------------------------------------


def _initial_splits(n: int) -> list[int]:
    if n == 1:
        return []
    if n == 2:
        return [0b10]
    return [0b010, 0b100, 0b110]


def insertion_order(system: SubsplitSystem) -> tuple[str, ...]:
    """Deterministic leaf order for the search: greedily take the leaf that
    makes the most subsplits constraining (two leaves on each side); ties go
    to the canonically smaller leaf."""
    subs = [(s.side_a, s.side_b) for s in system if not s.is_trivial]
    remaining = list(system.leaves)
    chosen: list[str] = []
    placed: set[str] = set()
    while remaining:
        best, best_score = remaining[0], -1
        for x in remaining:
            trial = placed | {x}
            score = 0
            for a, b in subs:
                if x in a or x in b:
                    if len(a & trial) >= 2 and len(b & trial) >= 2:
                        score += 2
                    else:
                        score += len((a | b) & trial) > 1
            if score > best_score:
                best, best_score = x, score
        chosen.append(best)
        placed.add(best)
        remaining.remove(best)
    return tuple(chosen)


def _prepare(n: int, masks: Sequence[tuple[int, int]]) -> list[list[tuple[int, int]]]:
    """Per leaf ``k``: the subsplits containing ``k``, restricted to leaves ``0..k``,
    that are non-trivially constrained there."""
    by_leaf: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for a, b in masks:
        both = a | b
        for k in range(n):
            if both >> k & 1:
                low = (1 << (k + 1)) - 1
                ra, rb = a & low, b & low
                # restricted subsplits with a singleton side are always displayed
                if ra.bit_count() >= 2 and rb.bit_count() >= 2:
                    by_leaf[k].append((ra, rb))
    return [sorted(set(c)) for c in by_leaf]


class _Search:
    def __init__(self, n: int, constraints: list[list[tuple[int, int]]], deadline: float | None):
        self.n = n
        self.constraints = constraints
        self.deadline = deadline
        self.nodes = 0

    def _tick(self) -> None:
        self.nodes += 1
        if self.deadline is not None and self.nodes % _CLOCK_EVERY == 0 and time.monotonic() > self.deadline:
            raise ResourceLimitError(f"time budget exhausted after {self.nodes} search nodes")

    def children(self, k: int, splits: list[int]) -> Iterable[list[int]]:
        bit = 1 << k
        checks = self.constraints[k]
        for i, c in enumerate(splits):
            new = [(s | bit) if (s & c == c and s != c) else s for s in splits]
            new[i] = c | bit
            new.append(c)
            new.append(bit)
            ok = True
            for ra, rb in checks:
                for s in new:
                    if (ra & s == ra and not rb & s) or (rb & s == rb and not ra & s):
                        break
                else:
                    ok = False
                    break
            if ok:
                yield new

    def run(self, k: int, splits: list[int]) -> list[int] | None:
        self._tick()
        if k == self.n:
            return splits
        for child in self.children(k, splits):
            found = self.run(k + 1, child)
            if found is not None:
                return found
        return None


def _run_branch(args: tuple[int, list[list[tuple[int, int]]], int, list[int], float | None]):
    n, constraints, k, splits, budget = args
    deadline = None if budget is None else time.monotonic() + budget
    s = _Search(n, constraints, deadline)
    try:
        return s.run(k, splits), s.nodes, None
    except ResourceLimitError as exc:
        return None, s.nodes, str(exc)


def _splits_to_tree(leaves: tuple[str, ...], masks: Iterable[int]) -> Tree:
    full = frozenset(leaves)
    splits = {Subsplit({x}, full - {x}) for x in leaves} if len(leaves) >= 2 else set()
    for m in masks:
        side = members(m, leaves)
        if side and side != full:
            splits.add(Subsplit(side, full - side))
    tree = tree_from_splits(SplitSystem(leaves, frozenset(splits)))
    assert tree is not None
    return tree


def exact_compatibility(
    system: SubsplitSystem,
    max_leaves: int = DEFAULT_MAX_LEAVES,
    time_budget: float | None = None,
    jobs: int = 1,
) -> CompatibilityVerdict:
    """Decide whether one tree displays every subsplit of ``system``.

    Raises :class:`ResourceLimitError` when the ground set exceeds
    ``max_leaves`` or the search runs past ``time_budget`` seconds.
    """
    leaves = system.leaves
    n = len(leaves)
    if n > max_leaves:
        raise ResourceLimitError(f"{n} leaves exceed the exact-search cap of {max_leaves}; raise --max-leaves")
    quick = pairwise_quick_reject(system)
    if quick:
        return CompatibilityVerdict(False, pair=quick)
    order = insertion_order(system)
    index = {x: i for i, x in enumerate(order)}
    masks = [s.masks(index) for s in system if not s.is_trivial]
    constraints = _prepare(n, masks)
    if n <= 3:
        return CompatibilityVerdict(True, witness=_splits_to_tree(leaves, _initial_splits(n)) if n >= 2 else None)
    deadline = None if time_budget is None else time.monotonic() + time_budget
    search = _Search(n, constraints, deadline)
    if jobs > 1:
        found, nodes = _parallel(search, jobs, time_budget)
    else:
        found = search.run(3, _initial_splits(3))
        nodes = search.nodes
    log.debug("exact search on %d leaves: %d nodes", n, nodes)
    if found is None:
        return CompatibilityVerdict(False, nodes=nodes)
    return CompatibilityVerdict(True, witness=_splits_to_tree(order, found), nodes=nodes)


def _parallel(search: _Search, jobs: int, budget: float | None) -> tuple[list[int] | None, int]:
    # Expand breadth-first until there are enough independent branches, keeping
    # the deterministic order so the first success in that order wins.
    frontier = [(3, _initial_splits(3))]
    while len(frontier) < 4 * jobs and frontier and frontier[0][0] < search.n:
        nxt = []
        for k, splits in frontier:
            for child in search.children(k, splits):
                nxt.append((k + 1, child))
        frontier = nxt
    if not frontier:
        return None, search.nodes
    if frontier[0][0] == search.n:
        return frontier[0][1], search.nodes
    nodes = search.nodes
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(_run_branch, (search.n, search.constraints, k, s, budget)) for k, s in frontier]
        try:
            for fut in futures:
                found, used, err = fut.result()
                nodes += used
                if err:
                    raise ResourceLimitError(err)
                if found is not None:
                    return found, nodes
        finally:
            for fut in futures:
                fut.cancel()
    return None, nodes


# ---------------------------------------------------------------------------
# Trees from split systems
# ---------------------------------------------------------------------------


def _fresh_namer(taken: Iterable[str]):
    taken = set(taken)
    counter = [0]

    def fresh() -> str:
        while True:
            name = f"v{counter[0]}"
            counter[0] += 1
            while name in taken:
                name = "_" + name
            taken.add(name)
            return name

    return fresh


def tree_from_splits(system: SplitSystem) -> Tree | None:
    """The unique tree whose splits are exactly ``system``, or ``None`` if the
    splits are not pairwise compatible.

    Starts from the star and inserts non-trivial splits by increasing size
    of their smaller side; each insertion pulls the subtrees forming the
    small side off a single vertex onto a new one.
    """
    leaves = system.ground_set
    n = len(leaves)
    if n < 2:
        raise PreconditionError("a split system needs at least 2 leaves")
    if not system.has_all_trivial:
        raise PreconditionError("split system must contain every trivial split {x}|X-{x}")
    if pairwise_quick_reject(system.splits):
        return None
    if n == 2:
        return Tree(leaves, (leaves,), leaves)
    index = {x: i for i, x in enumerate(leaves)}
    fresh = _fresh_namer(leaves)
    hub = fresh()
    adj: dict[str, set[str]] = {hub: set(leaves)}
    for x in leaves:
        adj[x] = {hub}
    leafmask = {x: 1 << index[x] for x in leaves}

    def below(v: str, parent: str) -> int:
        acc = 0
        stack = [(v, parent)]
        while stack:
            w, p = stack.pop()
            if w in leafmask:
                acc |= leafmask[w]
            for z in adj[w]:
                if z != p:
                    stack.append((z, w))
        return acc

    def order(s: Subsplit):
        a, b = sorted((s.side_a, s.side_b), key=lambda t: (len(t), sorted(t)))
        return (len(a), s.sort_key()), a

    for _, small in sorted((order(s) for s in system.splits if not s.is_trivial), key=lambda t: t[0]):
        target = mask_of(small, index)
        placed = False
        for v in [w for w in adj if w not in leafmask]:
            inside = [u for u in sorted(adj[v]) if below(u, v) & ~target == 0]
            got = 0
            for u in inside:
                got |= below(u, v)
            if got == target and len(inside) >= 2 and len(adj[v]) - len(inside) >= 2:
                w = fresh()
                adj[w] = set(inside) | {v}
                for u in inside:
                    adj[u].discard(v)
                    adj[u].add(w)
                    adj[v].discard(u)
                adj[v].add(w)
                placed = True
                break
        if not placed:
            return None
    edges = {edge(u, v) for u in adj for v in adj[u]}
    return Tree(tuple(adj), tuple(edges), leaves)


# ---------------------------------------------------------------------------
# Recognition
# ---------------------------------------------------------------------------


def _partition_failure(emap: SymmetricMap):
    for m in emap.colors:
        wit = is_partition(neighborhood_system(emap, m))
        if wit is not None:
            return m, wit
    return None


def label_tree(emap: SymmetricMap, tree: Tree) -> LabeledTree:
    """Put color ``m`` on edge ``e`` iff ``e`` separates two disjoint
    ``m``-neighborhoods and lies on no path inside a single neighborhood."""
    index = emap.index
    edge_masks = {}
    for e, sp in tree.edge_splits().items():
        edge_masks[e] = mask_of(sp.side_a, index)
    labels: dict[tuple[str, str], set[str]] = {e: set() for e in tree.edges}
    for m in emap.colors:
        blocks = neighborhood_system(emap, m).masks
        pairs = [s.masks(index) for s in subsplit_system(emap, m)]
        for e, c in edge_masks.items():
            splitting = any(
                (a & c == a and not b & c) or (b & c == b and not a & c) for a, b in pairs
            )
            if not splitting:
                continue
            # an edge lies on a path inside N iff N has leaves on both sides
            on_inner_path = any(blk & c and blk & ~c for blk in blocks)
            if not on_inner_path:
                labels[e].add(m)
    return LabeledTree(tree.vertices, tree.edges, tree.leaves, {e: frozenset(c) for e, c in labels.items()})


def contract_empty_edges(tree: LabeledTree) -> LabeledTree:
    """Contract every inner edge labeled with the empty set.

    Such an edge adds no color to any path, so the result explains the
    same map.
    """
    while True:
        empty = [e for e in tree.inner_edges if not tree.labels[e]]
        if not empty:
            return tree
        tree = contract_edge(tree, empty[0])


def _finish(emap: SymmetricMap, tree: Tree) -> LabeledTree:
    out = contract_empty_edges(label_tree(emap, tree))
    if explain(out, emap.colors) != emap:
        raise RuntimeError("constructed tree does not explain the map; this is a bug")
    return out


def build_explaining_tree(
    emap: SymmetricMap,
    max_leaves: int = DEFAULT_MAX_LEAVES,
    time_budget: float | None = None,
    jobs: int = 1,
) -> LabeledTree | None:
    """An edge-labeled tree explaining ``emap``, or ``None`` when the
    non-trivial subsplit system is incompatible.

    Every color's neighborhood system must be a partition; otherwise
    :class:`NotFitchError` is raised carrying the overlap witness.
    """
    emap.require_valid()
    if emap.n == 2:
        a, b = emap.leaves
        return LabeledTree(emap.leaves, (emap.leaves,), emap.leaves, {(a, b): emap[a, b]})
    bad = _partition_failure(emap)
    if bad:
        m, (n1, n2, y) = bad
        raise NotFitchError(f"neighborhoods of color {m!r} overlap in {y!r}", witness=bad)
    everything, _ = full_subsplit_systems(emap)
    verdict = exact_compatibility(everything, max_leaves=max_leaves, time_budget=time_budget, jobs=jobs)
    if not verdict.compatible:
        return None
    return _finish(emap, verdict.witness)


FITCH = "fitch"
NOT_FITCH = "not-fitch"
UNDECIDED = "undecided-resource-limit"


@dataclass(frozen=True)
class RecognitionResult:
    decision: str
    witness: LabeledTree | None = None
    reason: dict[str, Any] | None = None
    detail: str | None = None
    stats: dict[str, Any] = field(default_factory=dict, compare=False)

    @property
    def accepted(self) -> bool:
        return self.decision == FITCH


def recognize(
    emap: SymmetricMap,
    max_leaves: int = DEFAULT_MAX_LEAVES,
    time_budget: float | None = None,
    jobs: int = 1,
) -> RecognitionResult:
    """Decide whether ``emap`` is a symmetrized Fitch map.

    Accepts with an explaining tree, rejects with either a color whose
    complementary neighborhoods overlap or an incompatibility certificate
    for the non-trivial subsplits, or reports the resource limit that
    stopped the exact search.
    """
    emap.require_valid()
    started = time.perf_counter()
    if emap.n == 2:
        return RecognitionResult(FITCH, witness=build_explaining_tree(emap))
    bad = _partition_failure(emap)
    if bad:
        m, (n1, n2, y) = bad
        reason = {
            "kind": "non-partition",
            "color": m,
            "overlap": [sorted(n1), sorted(n2)],
            "leaf": y,
        }
        return RecognitionResult(NOT_FITCH, reason=reason)
    everything, nontrivial = full_subsplit_systems(emap)
    try:
        verdict = exact_compatibility(nontrivial, max_leaves=max_leaves, time_budget=time_budget, jobs=jobs)
    except ResourceLimitError as exc:
        return RecognitionResult(UNDECIDED, detail=str(exc))
    stats = {"subsplits": len(everything), "nontrivial": len(nontrivial), "nodes": verdict.nodes}
    if not verdict.compatible:
        reason: dict[str, Any] = {"kind": "incompatible", "certificate": verdict.certificate}
        if verdict.pair:
            reason["subsplits"] = [str(s) for s in verdict.pair]
            reason["sides"] = [[sorted(s.side_a), sorted(s.side_b)] for s in verdict.pair]
        else:
            reason["nodes"] = verdict.nodes
        return RecognitionResult(NOT_FITCH, reason=reason, stats=stats)
    # S and S* are displayed by the same trees, so the witness for S* serves S.
    tree = _finish(emap, verdict.witness)
    stats["seconds"] = time.perf_counter() - started
    return RecognitionResult(FITCH, witness=tree, stats=stats)
