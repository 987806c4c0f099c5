"""Core domain types: symmetric maps, (edge-labeled) trees, subsplits.

Leaves and colors are plain strings.  Every collection of them is kept in
sorted order so that iteration, serialization and search are reproducible.
Internally a leaf subset is often an ``int`` bitmask indexed by the position
of the leaf in ``SymmetricMap.leaves`` / ``Tree.leaves``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Mapping

from .errors import PreconditionError, ValidationError

#: Largest leaf set the bitmask-based routines accept by default.
MAX_LEAVES = 64

Edge = tuple[str, str]


def pair(x: str, y: str) -> frozenset[str]:
    """Unordered key for the leaf pair ``{x, y}``."""
    if x == y:
        raise ValidationError(f"pair ({x!r}, {y!r}) is reflexive")
    return frozenset((x, y))


def edge(u: str, v: str) -> Edge:
    return (u, v) if u <= v else (v, u)


def _check_ids(ids: Iterable[str], what: str) -> tuple[str, ...]:
    ids = list(ids)
    problems = []
    for i in ids:
        if not isinstance(i, str) or not i:
            problems.append(f"{what} identifier {i!r} is not a non-empty string")
    if len(set(ids)) != len(ids):
        dup = sorted({i for i in ids if ids.count(i) > 1})
        problems.append(f"duplicate {what} identifiers: {dup}")
    if problems:
        raise ValidationError(problems[0], tuple(problems))
    return tuple(sorted(ids))


def mask_of(items: Iterable[str], index: Mapping[str, int]) -> int:
    m = 0
    for x in items:
        m |= 1 << index[x]
    return m


def members(mask: int, names: tuple[str, ...]) -> frozenset[str]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(names[i])
        mask >>= 1
        i += 1
    return frozenset(out)


# ---------------------------------------------------------------------------
# Symmetric maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ValidationReport:
    """List of invariant violations; an empty report means the object is valid."""

    problems: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.problems

    def __len__(self) -> int:
        return len(self.problems)

    def __iter__(self) -> Iterator[str]:
        return iter(self.problems)


class SymmetricMap:
    """A map from unordered leaf pairs to sets of colors.

    Symmetry holds by construction since entries are keyed by ``frozenset``
    pairs.  Missing pairs and colors outside ``colors`` are tolerated here and
    reported by :func:`validate_map`; use :meth:`build` to get a complete map.
    """

    __slots__ = ("leaves", "colors", "_entries", "_index", "_adj")

    def __init__(
        self,
        leaves: Iterable[str],
        colors: Iterable[str],
        entries: Mapping[frozenset[str], Iterable[str]],
    ):
        self.leaves = _check_ids(leaves, "leaf")
        self.colors = _check_ids(colors, "color")
        ents: dict[frozenset[str], frozenset[str]] = {}
        for key, cols in entries.items():
            key = frozenset(key)
            if len(key) != 2:
                raise ValidationError(f"pair {sorted(key)} must name two distinct leaves")
            ents[key] = frozenset(cols)
        self._entries = ents
        self._index = {x: i for i, x in enumerate(self.leaves)}
        self._adj: dict[str, tuple[int, ...]] = {}

    @classmethod
    def build(
        cls,
        leaves: Iterable[str],
        colors: Iterable[str],
        entries: Mapping[frozenset[str], Iterable[str]] | Iterable[tuple[str, str, Iterable[str]]] = (),
    ) -> "SymmetricMap":
        """Construct a complete, validated map; unlisted pairs get the empty set."""
        leaves = list(leaves)
        if isinstance(entries, Mapping):
            given = {frozenset(k): frozenset(v) for k, v in entries.items()}
        else:
            given = {pair(x, y): frozenset(c) for x, y, c in entries}
        full = {pair(x, y): given.get(pair(x, y), frozenset()) for x, y in combinations(sorted(leaves), 2)}
        for k in given:
            if k not in full:
                raise ValidationError(f"pair {sorted(k)} uses an unknown leaf")
        m = cls(leaves, colors, full)
        m.require_valid()
        return m

    # -- access -----------------------------------------------------------
    def __getitem__(self, xy: tuple[str, str]) -> frozenset[str]:
        x, y = xy
        return self._entries.get(pair(x, y), frozenset())

    @property
    def n(self) -> int:
        return len(self.leaves)

    @property
    def index(self) -> dict[str, int]:
        return self._index

    def items(self) -> Iterator[tuple[tuple[str, str], frozenset[str]]]:
        """All pairs ``(x, y)`` with ``x < y`` in canonical order with their colors."""
        for x, y in combinations(self.leaves, 2):
            yield (x, y), self[x, y]

    def has_pair(self, x: str, y: str) -> bool:
        return pair(x, y) in self._entries

    def raw_entries(self) -> dict[frozenset[str], frozenset[str]]:
        return dict(self._entries)

    def used_colors(self) -> tuple[str, ...]:
        used = set()
        for cols in self._entries.values():
            used |= cols
        return tuple(sorted(used))

    def adjacency(self, m: str) -> tuple[int, ...]:
        """Per-leaf bitmask of partners ``y`` with ``m`` in the entry of ``{x, y}``."""
        if m not in self._adj:
            adj = [0] * self.n
            idx = self._index
            for key, cols in self._entries.items():
                if m in cols:
                    x, y = tuple(key)
                    if x in idx and y in idx:
                        adj[idx[x]] |= 1 << idx[y]
                        adj[idx[y]] |= 1 << idx[x]
            self._adj[m] = tuple(adj)
        return self._adj[m]

    def leaf_mask(self, leaves: Iterable[str]) -> int:
        return mask_of(leaves, self._index)

    def leaf_set(self, mask: int) -> frozenset[str]:
        return members(mask, self.leaves)

    def require_color(self, m: str) -> None:
        if m not in self.colors:
            raise ValidationError(f"unknown color {m!r}")

    def require_leaf(self, y: str) -> None:
        if y not in self._index:
            raise ValidationError(f"unknown leaf {y!r}")

    def require_valid(self) -> None:
        report = validate_map(self)
        if not report.ok:
            raise ValidationError("; ".join(report.problems), report.problems)

    # -- comparisons ------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SymmetricMap):
            return NotImplemented
        return (
            self.leaves == other.leaves
            and self.colors == other.colors
            and all(self[p] == other[p] for p, _ in self.items())
        )

    def __hash__(self) -> int:
        return hash((self.leaves, self.colors, tuple(c for _, c in self.items())))

    def __repr__(self) -> str:
        shown = ", ".join(
            f"{x}{y}:{{{','.join(sorted(c))}}}" for (x, y), c in self.items() if c
        )
        return f"SymmetricMap(leaves={list(self.leaves)}, colors={list(self.colors)}, {shown})"


def validate_map(emap: SymmetricMap) -> ValidationReport:
    """Report every invariant violation of ``emap`` (missing pairs, unknown colors, |X| < 2)."""
    problems = []
    if emap.n < 2:
        problems.append(f"leaf set has {emap.n} element(s); at least 2 are required")
    known = set(emap.leaves)
    colors = set(emap.colors)
    for key, cols in sorted(emap.raw_entries().items(), key=lambda kv: sorted(kv[0])):
        x, y = sorted(key)
        stray = sorted(set(key) - known)
        if stray:
            problems.append(f"pair {{{x},{y}}} uses unknown leaf {stray[0]!r}")
        for c in sorted(cols - colors):
            problems.append(f"pair {{{x},{y}}} cites color {c!r} not in the color set")
    for x, y in combinations(emap.leaves, 2):
        if not emap.has_pair(x, y):
            problems.append(f"missing entry for pair {{{x},{y}}}")
    return ValidationReport(tuple(problems))


def restrict(emap: SymmetricMap, sub_leaves: Iterable[str], sub_colors: Iterable[str]) -> SymmetricMap:
    """Restriction to a leaf subset, with every entry intersected with ``sub_colors``."""
    sub_leaves = set(sub_leaves)
    sub_colors = frozenset(sub_colors)
    bad = sorted(sub_leaves - set(emap.leaves))
    if bad:
        raise ValidationError(f"leaves {bad} are not in the map")
    bad = sorted(sub_colors - set(emap.colors))
    if bad:
        raise ValidationError(f"colors {bad} are not in the map")
    if len(sub_leaves) < 2:
        raise ValidationError("a restriction needs at least 2 leaves")
    entries = {pair(x, y): emap[x, y] & sub_colors for x, y in combinations(sorted(sub_leaves), 2)}
    return SymmetricMap(sub_leaves, sub_colors, entries)


# ---------------------------------------------------------------------------
# Trees
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Tree:
    """Unrooted tree; ``leaves`` name the degree-1 vertices that carry taxa."""

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    leaves: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(sorted(self.vertices)))
        object.__setattr__(self, "edges", tuple(sorted(edge(u, v) for u, v in self.edges)))
        object.__setattr__(self, "leaves", tuple(sorted(self.leaves)))

    @cached_property
    def adjacency(self) -> dict[str, tuple[str, ...]]:
        adj: dict[str, list[str]] = {v: [] for v in self.vertices}
        for u, v in self.edges:
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        return {v: tuple(sorted(ns)) for v, ns in adj.items()}

    def degree(self, v: str) -> int:
        return len(self.adjacency[v])

    @property
    def inner_vertices(self) -> tuple[str, ...]:
        leaves = set(self.leaves)
        return tuple(v for v in self.vertices if v not in leaves)

    @property
    def inner_edges(self) -> tuple[Edge, ...]:
        leaves = set(self.leaves)
        return tuple(e for e in self.edges if e[0] not in leaves and e[1] not in leaves)

    def problems(self, allow_degree_two: bool = False) -> list[str]:
        """Violations of the tree invariants (empty list when valid)."""
        out = []
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            out.append("duplicate vertex identifiers")
        if len(set(self.edges)) != len(self.edges):
            out.append("duplicate edges")
        for u, v in self.edges:
            if u == v:
                out.append(f"loop at {u!r}")
            if u not in vs or v not in vs:
                out.append(f"edge {{{u},{v}}} uses an unknown vertex")
        stray = sorted(set(self.leaves) - vs)
        if stray:
            out.append(f"leaves {stray} are not vertices")
        if out:
            return out
        if len(self.edges) != len(self.vertices) - 1:
            out.append("edge count is not |V|-1, so the graph is not a tree")
        elif self.vertices and len(self._reachable(self.vertices[0])) != len(self.vertices):
            out.append("graph is not connected")
        if out:
            return out
        leaves = set(self.leaves)
        for v in self.vertices:
            d = self.degree(v)
            if v in leaves and d != 1:
                out.append(f"leaf {v!r} has degree {d}, expected 1")
            elif v not in leaves and d == 1:
                out.append(f"degree-1 vertex {v!r} is not a leaf")
            elif v not in leaves and d == 2 and not allow_degree_two:
                out.append(f"inner vertex {v!r} has degree 2 (not phylogenetic)")
            elif v not in leaves and d == 0:
                out.append(f"isolated vertex {v!r}")
        return out

    def _reachable(self, start: str) -> set[str]:
        seen = {start}
        todo = deque([start])
        while todo:
            v = todo.popleft()
            for w in self.adjacency[v]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return seen

    def require_valid(self, allow_degree_two: bool = False) -> None:
        probs = self.problems(allow_degree_two)
        if probs:
            raise ValidationError("; ".join(probs), tuple(probs))

    def path_edges(self, x: str, y: str) -> list[Edge]:
        """Edges of the unique path from ``x`` to ``y``."""
        parent = {x: None}
        todo = deque([x])
        while todo:
            v = todo.popleft()
            if v == y:
                break
            for w in self.adjacency[v]:
                if w not in parent:
                    parent[w] = v
                    todo.append(w)
        out = []
        v = y
        while parent[v] is not None:
            out.append(edge(v, parent[v]))
            v = parent[v]
        return out[::-1]

    def side(self, e: Edge, toward: str) -> frozenset[str]:
        """Leaves in the component of ``T - e`` containing endpoint ``toward``."""
        u, v = e
        other = v if toward == u else u
        seen = {toward, other}
        todo = [toward]
        leaves = set(self.leaves)
        found = set()
        while todo:
            w = todo.pop()
            if w in leaves:
                found.add(w)
            for z in self.adjacency[w]:
                if z not in seen:
                    seen.add(z)
                    todo.append(z)
        return frozenset(found)

    def edge_splits(self) -> dict[Edge, "Subsplit"]:
        """The split ``L(T1)|L(T2)`` of every edge."""
        return {e: Subsplit(self.side(e, e[0]), self.side(e, e[1])) for e in self.edges}

    def splits(self) -> frozenset["Subsplit"]:
        return frozenset(self.edge_splits().values())

    def diameter(self) -> int:
        best = 0
        for v in self.vertices:
            dist = {v: 0}
            todo = deque([v])
            while todo:
                w = todo.popleft()
                for z in self.adjacency[w]:
                    if z not in dist:
                        dist[z] = dist[w] + 1
                        todo.append(z)
            best = max(best, max(dist.values()))
        return best

    def displays(self, s: "Subsplit") -> bool:
        return displays(self, s)


@dataclass(frozen=True)
class LabeledTree(Tree):
    """Tree with an edge labeling ``labels: edge -> set of colors``."""

    labels: Mapping[Edge, frozenset[str]] = field(default_factory=dict)

    def __post_init__(self):
        super().__post_init__()
        labels = {edge(u, v): frozenset(c) for (u, v), c in dict(self.labels).items()}
        object.__setattr__(self, "labels", {e: labels.get(e, frozenset()) for e in self.edges})

    def label(self, u: str, v: str) -> frozenset[str]:
        return self.labels[edge(u, v)]

    @property
    def topology(self) -> Tree:
        return Tree(self.vertices, self.edges, self.leaves)

    def colors(self) -> tuple[str, ...]:
        out: set[str] = set()
        for c in self.labels.values():
            out |= c
        return tuple(sorted(out))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabeledTree):
            return NotImplemented
        return (self.vertices, self.edges, self.leaves) == (other.vertices, other.edges, other.leaves) and dict(
            self.labels
        ) == dict(other.labels)

    __hash__ = None  # type: ignore[assignment]


def unlabeled(tree: Tree) -> LabeledTree:
    return LabeledTree(tree.vertices, tree.edges, tree.leaves, {})


def explain(tree: LabeledTree, colors: Iterable[str] | None = None) -> SymmetricMap:
    """The symmetric map whose entry for ``{x, y}`` collects the labels on the x-y path."""
    tree.require_valid()
    if len(tree.leaves) < 2:
        raise ValidationError("explain needs a tree with at least 2 leaves")
    universe = set(tree.colors())
    if colors is not None:
        colors = set(colors)
        if not universe <= colors:
            raise ValidationError(f"labels use colors {sorted(universe - colors)} outside the color set")
        universe = colors
    leaves = set(tree.leaves)
    entries: dict[frozenset[str], frozenset[str]] = {}
    for x in tree.leaves:
        acc = {x: frozenset()}
        todo = [x]
        while todo:
            v = todo.pop()
            for w in tree.adjacency[v]:
                if w not in acc:
                    acc[w] = acc[v] | tree.labels[edge(v, w)]
                    todo.append(w)
        for y in leaves:
            if y > x:
                entries[pair(x, y)] = acc[y]
    return SymmetricMap(tree.leaves, universe, entries)


def suppress_degree_two(tree: LabeledTree) -> LabeledTree:
    """Remove every inner degree-2 vertex, merging its two edges into one labeled by the union."""
    tree.require_valid(allow_degree_two=True)
    adj = {v: set(ns) for v, ns in tree.adjacency.items()}
    labels = dict(tree.labels)
    leaves = set(tree.leaves)
    for v in tree.vertices:
        if v in leaves or len(adj[v]) != 2:
            continue
        u, w = sorted(adj[v])
        lab = labels.pop(edge(u, v)) | labels.pop(edge(v, w))
        adj[u].discard(v)
        adj[w].discard(v)
        adj[u].add(w)
        adj[w].add(u)
        del adj[v]
        labels[edge(u, w)] = lab
    return LabeledTree(tuple(adj), tuple(labels), tree.leaves, labels)


def prune(tree: LabeledTree, keep: Iterable[str]) -> LabeledTree:
    """Minimal subtree spanning ``keep``; degree-2 vertices are left in place."""
    keep = set(keep)
    if not keep <= set(tree.leaves):
        raise ValidationError(f"leaves {sorted(keep - set(tree.leaves))} are not in the tree")
    if len(keep) < 2:
        raise ValidationError("pruning needs at least 2 remaining leaves")
    adj = {v: set(ns) for v, ns in tree.adjacency.items()}
    todo = [v for v in adj if len(adj[v]) <= 1 and v not in keep]
    while todo:
        v = todo.pop()
        if v not in adj:
            continue
        for w in adj.pop(v):
            adj[w].discard(v)
            if len(adj[w]) <= 1 and w not in keep:
                todo.append(w)
    edges = {edge(u, v) for u in adj for v in adj[u]}
    return LabeledTree(tuple(adj), tuple(edges), tuple(sorted(keep)), {e: tree.labels[e] for e in edges})


def restrict_tree(tree: LabeledTree, keep: Iterable[str], colors: Iterable[str]) -> LabeledTree:
    """Tree-side counterpart of :func:`restrict`: prune, intersect labels, suppress."""
    colors = frozenset(colors)
    pruned = prune(tree, keep)
    cut = LabeledTree(pruned.vertices, pruned.edges, pruned.leaves, {e: c & colors for e, c in pruned.labels.items()})
    return suppress_degree_two(cut)


def contract_edge(tree: LabeledTree, e: Edge) -> LabeledTree:
    """Contract the inner edge ``e``, keeping every other label as is."""
    e = edge(*e)
    u, v = e
    if e not in tree.labels:
        raise PreconditionError(f"{e} is not an edge")
    if u in tree.leaves or v in tree.leaves:
        raise PreconditionError(f"{e} is an outer edge")
    labels = {}
    for (a, b), c in tree.labels.items():
        if (a, b) == e:
            continue
        a = u if a == v else a
        b = u if b == v else b
        labels[edge(a, b)] = c
    verts = tuple(w for w in tree.vertices if w != v)
    return LabeledTree(verts, tuple(labels), tree.leaves, labels)


# ---------------------------------------------------------------------------
# Subsplits
# ---------------------------------------------------------------------------


def _side_key(s: frozenset[str]) -> tuple[str, ...]:
    return tuple(sorted(s))


@dataclass(frozen=True, init=False)
class Subsplit:
    """Unordered pair ``A|B`` of disjoint non-empty leaf sets.

    Stored canonically: ``side_a`` is the side holding the smallest leaf.
    """

    side_a: frozenset[str]
    side_b: frozenset[str]

    def __init__(self, side_a: Iterable[str], side_b: Iterable[str]):
        a, b = frozenset(side_a), frozenset(side_b)
        if not a or not b:
            raise ValidationError("both sides of a subsplit must be non-empty")
        if a & b:
            raise ValidationError(f"subsplit sides overlap in {sorted(a & b)}")
        if min(b) < min(a):
            a, b = b, a
        object.__setattr__(self, "side_a", a)
        object.__setattr__(self, "side_b", b)

    @classmethod
    def parse(cls, text: str) -> "Subsplit":
        """``"ab|cd"`` (single-character leaves) or ``"a,b|c,d"``."""
        left, _, right = text.partition("|")
        delimited = "," in text or " " in text.strip()

        def side(t: str) -> list[str]:
            t = t.strip()
            if delimited:
                return t.replace(",", " ").split()
            return list(t)

        return cls(side(left), side(right))

    @property
    def leaves(self) -> frozenset[str]:
        return self.side_a | self.side_b

    @property
    def is_trivial(self) -> bool:
        return min(len(self.side_a), len(self.side_b)) == 1

    @property
    def is_quartet(self) -> bool:
        return len(self.side_a) == 2 and len(self.side_b) == 2

    def sort_key(self) -> tuple:
        return (_side_key(self.side_a), _side_key(self.side_b))

    def __lt__(self, other: "Subsplit") -> bool:
        return self.sort_key() < other.sort_key()

    def masks(self, index: Mapping[str, int]) -> tuple[int, int]:
        return mask_of(self.side_a, index), mask_of(self.side_b, index)

    def __str__(self) -> str:
        a, b = _side_key(self.side_a), _side_key(self.side_b)
        sep = "" if all(len(x) == 1 for x in a + b) else ","
        return f"{sep.join(a)}|{sep.join(b)}"

    def __repr__(self) -> str:
        return f"Subsplit({self})"


def Quartet(a: str, b: str, c: str, d: str) -> Subsplit:
    """The quartet ``ab|cd``."""
    if len({a, b, c, d}) != 4:
        raise ValidationError(f"quartet {a}{b}|{c}{d} needs four distinct leaves")
    return Subsplit((a, b), (c, d))


def displays(tree: Tree, s: Subsplit) -> bool:
    """True iff some edge of ``tree`` has ``s.side_a`` on one side and ``s.side_b`` on the other."""
    missing = s.leaves - set(tree.leaves)
    if missing:
        raise ValidationError(f"subsplit {s} uses leaves {sorted(missing)} that are not in the tree")
    for sp in tree.edge_splits().values():
        if (s.side_a <= sp.side_a and s.side_b <= sp.side_b) or (s.side_a <= sp.side_b and s.side_b <= sp.side_a):
            return True
    return False
