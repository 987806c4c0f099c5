"""Quartet reduction, random instance generators and the brute-force oracle.

Random generators use :class:`random.Random` (Mersenne Twister MT19937)
seeded with the given integer, so instances are reproducible across runs
and platforms.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import combinations, product
from random import Random
from string import ascii_lowercase
from typing import Iterable, Iterator

from .errors import ResourceLimitError, ValidationError
from .model import LabeledTree, Subsplit, SymmetricMap, Tree, edge, pair


def leaf_names(n: int) -> tuple[str, ...]:
    """``a, b, c, ...`` for up to 26 leaves, ``x01, x02, ...`` beyond."""
    if n <= 26:
        return tuple(ascii_lowercase[:n])
    width = len(str(n))
    return tuple(f"x{i:0{width}d}" for i in range(1, n + 1))


@dataclass(frozen=True)
class QuartetSet:
    """Ordered quartets over ``ground_set``; position ``i`` becomes color ``str(i + 1)``."""

    ground_set: tuple[str, ...]
    quartets: tuple[Subsplit, ...]

    def __post_init__(self):
        object.__setattr__(self, "ground_set", tuple(sorted(set(self.ground_set))))
        ground = set(self.ground_set)
        seen: list[Subsplit] = []
        for q in self.quartets:
            if not q.is_quartet:
                raise ValidationError(f"{q} is not a quartet")
            if not q.leaves <= ground:
                raise ValidationError(f"quartet {q} uses leaves {sorted(q.leaves - ground)} outside the ground set")
            if q in seen:
                warnings.warn(f"duplicate quartet {q} dropped", stacklevel=3)
                continue
            seen.append(q)
        object.__setattr__(self, "quartets", tuple(seen))

    @classmethod
    def of(cls, quartets: Iterable[Subsplit | str], ground_set: Iterable[str] = ()) -> "QuartetSet":
        qs = [q if isinstance(q, Subsplit) else Subsplit.parse(q) for q in quartets]
        ground = set(ground_set)
        for q in qs:
            ground |= q.leaves
        return cls(tuple(ground), tuple(qs))

    def __len__(self) -> int:
        return len(self.quartets)

    def __iter__(self) -> Iterator[Subsplit]:
        return iter(self.quartets)


def parse_quartets(text: str, ground_set: Iterable[str] = ()) -> QuartetSet:
    """One quartet per line as ``a b | c d`` (or compact ``ab|cd`` for
    single-character leaves); ``#`` starts a comment.

    A line ``leaves: x y z`` adds leaves to the ground set that need not
    appear in any quartet.
    """
    quartets = []
    ground = set(ground_set)
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("leaves:"):
            ground.update(line[len("leaves:"):].split())
            continue
        if "|" not in line:
            raise ValidationError(f"line {lineno}: expected 'a b | c d', got {raw.strip()!r}")
        try:
            q = Subsplit.parse(line)
        except ValueError as exc:
            raise ValidationError(f"line {lineno}: {exc}") from exc
        if not q.is_quartet:
            raise ValidationError(f"line {lineno}: expected 'a b | c d', got {raw.strip()!r}")
        quartets.append(q)
    return QuartetSet.of(quartets, ground)


def format_quartets(qs: QuartetSet) -> str:
    lines = []
    used = set().union(*(q.leaves for q in qs)) if len(qs) else set()
    extra = sorted(set(qs.ground_set) - used)
    if extra:
        lines.append("leaves: " + " ".join(extra))
    for q in qs:
        lines.append(f"{' '.join(sorted(q.side_a))} | {' '.join(sorted(q.side_b))}")
    return "\n".join(lines) + "\n"


def reduce_quartets_to_map(qs: QuartetSet) -> SymmetricMap:
    """Color ``i`` sits on every pair except the two cherries of quartet ``i``."""
    if len(qs) and len(qs.ground_set) < 4:
        raise ValidationError("quartets need at least 4 leaves")
    colors = [str(i) for i in range(1, len(qs) + 1)]
    entries = {}
    for x, y in combinations(qs.ground_set, 2):
        xy = frozenset((x, y))
        entries[xy] = frozenset(
            c for c, q in zip(colors, qs.quartets) if xy != q.side_a and xy != q.side_b
        )
    return SymmetricMap(qs.ground_set, colors, entries)


# ---------------------------------------------------------------------------
# Random instances
# ---------------------------------------------------------------------------


def random_labeled_tree(n: int, colors: Iterable[str], density: float, seed: int) -> LabeledTree:
    """Uniform random binary topology (random edge per inserted leaf), each
    (edge, color) pair labeled independently with probability ``density``."""
    if n < 2:
        raise ValidationError("a random tree needs at least 2 leaves")
    if not 0.0 <= density <= 1.0:
        raise ValidationError("density must lie in [0, 1]")
    colors = sorted(set(colors))
    rng = Random(seed)
    leaves = leaf_names(n)
    taken = set(leaves)
    inner = []

    def fresh() -> str:
        name = f"v{len(inner)}"
        while name in taken:
            name = "_" + name
        taken.add(name)
        inner.append(name)
        return name

    if n == 2:
        edges = [(leaves[0], leaves[1])]
    else:
        c = fresh()
        edges = [(leaves[0], c), (leaves[1], c), (leaves[2], c)]
        for x in leaves[3:]:
            u, v = edges.pop(rng.randrange(len(edges)))
            w = fresh()
            edges += [(u, w), (w, v), (x, w)]
    edges = sorted(edge(u, v) for u, v in edges)
    labels = {e: frozenset(m for m in colors if rng.random() < density) for e in edges}
    return LabeledTree(leaves + tuple(inner), tuple(edges), leaves, labels)


def all_quartets(leaves: Iterable[str]) -> list[Subsplit]:
    out = []
    for a, b, c, d in combinations(sorted(leaves), 4):
        out += [Subsplit((a, b), (c, d)), Subsplit((a, c), (b, d)), Subsplit((a, d), (b, c))]
    return out


def random_quartet_set(n: int, k: int, seed: int) -> QuartetSet:
    """``k`` distinct quartets drawn uniformly from all ``3 * C(n, 4)`` on ``n`` leaves."""
    if n < 4:
        raise ValidationError("quartets need at least 4 leaves")
    pool = all_quartets(leaf_names(n))
    if not 0 <= k <= len(pool):
        raise ValidationError(f"cannot draw {k} quartets; only {len(pool)} exist on {n} leaves")
    return QuartetSet(leaf_names(n), tuple(Random(seed).sample(pool, k)))


def random_map(leaves: Iterable[str], colors: Iterable[str], density: float, seed: int) -> SymmetricMap:
    """Map with each (pair, color) present independently with probability ``density``."""
    rng = Random(seed)
    leaves, colors = sorted(leaves), sorted(colors)
    entries = {
        pair(x, y): frozenset(m for m in colors if rng.random() < density) for x, y in combinations(leaves, 2)
    }
    return SymmetricMap(leaves, colors, entries)


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------


def binary_topologies(leaves: Iterable[str]) -> Iterator[Tree]:
    """Every unrooted binary tree on ``leaves``, by inserting leaves on every edge."""
    leaves = tuple(sorted(leaves))
    n = len(leaves)
    if n < 2:
        raise ValidationError("need at least 2 leaves")
    if n == 2:
        yield Tree(leaves, (leaves,), leaves)
        return
    names = [f"#{i}" for i in range(n - 2)]

    def grow(k: int, edges: list[tuple[str, str]]) -> Iterator[list[tuple[str, str]]]:
        if k == n:
            yield edges
            return
        w = names[k - 2]
        for i in range(len(edges)):
            u, v = edges[i]
            rest = edges[:i] + edges[i + 1 :]
            yield from grow(k + 1, rest + [(u, w), (w, v), (leaves[k], w)])

    start = [(leaves[0], names[0]), (leaves[1], names[0]), (leaves[2], names[0])]
    for edges in grow(3, start):
        yield Tree(leaves + tuple(names), tuple(edges), leaves)


def _contract_all(tree: Tree, chosen: Iterable[tuple[str, str]]) -> Tree:
    rep = {v: v for v in tree.vertices}

    def find(v: str) -> str:
        while rep[v] != v:
            v = rep[v]
        return v

    chosen = set(chosen)
    for u, v in chosen:
        ru, rv = find(u), find(v)
        rep[max(ru, rv)] = min(ru, rv)
    edges = [(find(u), find(v)) for u, v in tree.edges if (u, v) not in chosen]
    verts = {find(v) for v in tree.vertices}
    return Tree(tuple(verts), tuple(edges), tree.leaves)


def phylogenetic_topologies(leaves: Iterable[str]) -> list[Tree]:
    """Every phylogenetic tree on ``leaves`` (binary ones and all their
    contractions), one per split set."""
    seen: dict[frozenset, Tree] = {}
    for t in binary_topologies(leaves):
        inner = t.inner_edges
        for r in range(len(inner) + 1):
            for chosen in combinations(inner, r):
                cur = _contract_all(t, chosen)
                seen.setdefault(frozenset(cur.splits()), cur)
    return list(seen.values())


def max_labeling(emap: SymmetricMap, tree: Tree, colors: Iterable[str]) -> LabeledTree:
    """Largest labeling that puts no color on a path between two leaves lacking it.

    If any labeling of ``tree`` explains ``emap``, this one does: dropping a
    color from an allowed edge can only lose required colors.
    """
    colors = list(colors)
    forbidden: dict[tuple[str, str], set[str]] = {e: set() for e in tree.edges}
    for (x, y), cols in emap.items():
        missing = [m for m in colors if m not in cols]
        if missing:
            for e in tree.path_edges(x, y):
                forbidden[e].update(missing)
    labels = {e: frozenset(m for m in colors if m not in forbidden[e]) for e in tree.edges}
    return LabeledTree(tree.vertices, tree.edges, tree.leaves, labels)


def _explains(tree: LabeledTree, emap: SymmetricMap) -> bool:
    for (x, y), cols in emap.items():
        got = frozenset().union(*(tree.labels[e] for e in tree.path_edges(x, y)))
        if got != cols:
            return False
    return True


def _all_labelings(tree: Tree, colors: list[str]) -> Iterator[LabeledTree]:
    subsets = [frozenset(c) for r in range(len(colors) + 1) for c in combinations(colors, r)]
    for choice in product(subsets, repeat=len(tree.edges)):
        yield LabeledTree(tree.vertices, tree.edges, tree.leaves, dict(zip(tree.edges, choice)))


def brute_force_is_fitch(
    emap: SymmetricMap,
    max_leaves: int = 7,
    max_colors: int = 3,
    exhaustive_labels: bool = False,
) -> LabeledTree | None:
    """Search every binary topology for an explaining labeling.

    Binary topologies suffice: an explaining tree stays explaining after
    refining a vertex with new empty-labeled edges.  Per topology the
    maximal admissible labeling is tested (see :func:`max_labeling`);
    ``exhaustive_labels`` instead tries every labeling over subsets of the
    used colors, which is only feasible for very small inputs.
    """
    emap.require_valid()
    used = list(emap.used_colors())
    if emap.n > max_leaves or len(used) > max_colors:
        raise ResourceLimitError(
            f"brute force capped at {max_leaves} leaves / {max_colors} colors, got {emap.n} / {len(used)}"
        )
    for topo in binary_topologies(emap.leaves):
        if exhaustive_labels:
            for cand in _all_labelings(topo, used):
                if _explains(cand, emap):
                    return cand
        else:
            cand = max_labeling(emap, topo, used)
            if _explains(cand, emap):
                return cand
    return None


def minimum_explaining_vertex_count(emap: SymmetricMap) -> int | None:
    """Fewest vertices of any phylogenetic tree explaining ``emap`` (small inputs only)."""
    used = list(emap.used_colors())
    best = None
    for topo in phylogenetic_topologies(emap.leaves):
        if best is not None and len(topo.vertices) >= best:
            continue
        if _explains(max_labeling(emap, topo, used), emap):
            best = len(topo.vertices)
    return best


def explains(tree: LabeledTree, emap: SymmetricMap) -> bool:
    """Path-walking check that ``tree`` explains ``emap`` (independent of :func:`explain`)."""
    if set(tree.leaves) != set(emap.leaves):
        return False
    return _explains(tree, emap)


__all__ = [
    "QuartetSet",
    "all_quartets",
    "binary_topologies",
    "brute_force_is_fitch",
    "explains",
    "format_quartets",
    "leaf_names",
    "max_labeling",
    "minimum_explaining_vertex_count",
    "parse_quartets",
    "phylogenetic_topologies",
    "random_labeled_tree",
    "random_map",
    "random_quartet_set",
    "reduce_quartets_to_map",
]
