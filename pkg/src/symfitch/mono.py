"""Monochromatic maps: color graphs, complete multi-partite recognition and
least-resolved trees."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import NotFitchError, PreconditionError, ValidationError
from .model import LabeledTree, SymmetricMap, edge, members


@dataclass(frozen=True)
class ColorGraph:
    """Graph on the leaves with an edge ``{x, y}`` iff the focus color is in the entry."""

    leaves: tuple[str, ...]
    focus_color: str | None
    adjacency: tuple[int, ...]  # bitmask per leaf

    @classmethod
    def from_edges(cls, leaves, edges, focus_color: str | None = None) -> "ColorGraph":
        leaves = tuple(sorted(leaves))
        idx = {x: i for i, x in enumerate(leaves)}
        adj = [0] * len(leaves)
        for x, y in edges:
            if x == y:
                raise ValidationError(f"loop at {x!r}")
            adj[idx[x]] |= 1 << idx[y]
            adj[idx[y]] |= 1 << idx[x]
        return cls(leaves, focus_color, tuple(adj))

    def has_edge(self, x: str, y: str) -> bool:
        i, j = self.leaves.index(x), self.leaves.index(y)
        return bool(self.adjacency[i] >> j & 1)

    def edges(self) -> list[tuple[str, str]]:
        n = len(self.leaves)
        return [
            (self.leaves[i], self.leaves[j])
            for i in range(n)
            for j in range(i + 1, n)
            if self.adjacency[i] >> j & 1
        ]


@dataclass(frozen=True)
class IndependentSetFamily:
    parts: tuple[frozenset[str], ...]

    @property
    def parts_ge_two(self) -> tuple[frozenset[str], ...]:
        return tuple(p for p in self.parts if len(p) >= 2)


def graph_representation(emap: SymmetricMap, m: str) -> ColorGraph:
    emap.require_color(m)
    return ColorGraph(emap.leaves, m, emap.adjacency(m))


def has_k1_plus_k2(g: ColorGraph) -> tuple[str, str, str] | None:
    """A triple ``(a, b, c)`` whose only edge is ``{b, c}``, or ``None``.

    ``None`` exactly when ``g`` is complete multi-partite.
    """
    adj = g.adjacency
    n = len(g.leaves)
    for i, j, k in combinations(range(n), 3):
        ij, ik, jk = adj[i] >> j & 1, adj[i] >> k & 1, adj[j] >> k & 1
        if ij + ik + jk == 1:
            if jk:
                a, b, c = i, j, k
            elif ik:
                a, b, c = j, i, k
            else:
                a, b, c = k, i, j
            return g.leaves[a], g.leaves[b], g.leaves[c]
    return None


def multipartite_parts(g: ColorGraph) -> IndependentSetFamily | None:
    """The parts of ``g`` if it is complete multi-partite, else ``None``.

    Works on the complement: ``g`` is complete multi-partite iff every
    connected component of its complement is a clique there.
    """
    n = len(g.leaves)
    full = (1 << n) - 1
    co = [full & ~a & ~(1 << i) for i, a in enumerate(g.adjacency)]
    seen = 0
    parts = []
    for i in range(n):
        if seen >> i & 1:
            continue
        comp = 1 << i
        frontier = comp
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            v = low.bit_length() - 1
            new = co[v] & ~comp
            comp |= new
            frontier |= new
        seen |= comp
        for v in range(n):
            if comp >> v & 1 and (co[v] | 1 << v) & comp != comp:
                return None
        parts.append(members(comp, g.leaves))
    return IndependentSetFamily(tuple(sorted(parts, key=lambda p: sorted(p))))


# ---------------------------------------------------------------------------
# Restricted maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Decision:
    accepted: bool
    color: str | None = None
    two_colors: tuple[tuple[str, str, str], tuple[str, str, str]] | None = None
    k1_plus_k2: tuple[str, str, str] | None = None

    def reason(self) -> str | None:
        if self.accepted:
            return None
        if self.two_colors:
            (x1, y1, m1), (x2, y2, m2) = self.two_colors
            return f"two colors in use: {m1!r} on {{{x1},{y1}}} and {m2!r} on {{{x2},{y2}}}"
        a, b, c = self.k1_plus_k2
        return f"color {self.color!r} induces K1+K2 on {a},{b},{c} (only edge {{{b},{c}}})"


def is_restricted_fitch(emap: SymmetricMap) -> Decision:
    """Decide a map with at most one color per pair (polynomial time)."""
    emap.require_valid()
    first: dict[str, tuple[str, str]] = {}
    for (x, y), cols in emap.items():
        if len(cols) > 1:
            raise PreconditionError(f"pair {{{x},{y}}} carries {len(cols)} colors; at most one is allowed")
        for c in cols:
            first.setdefault(c, (x, y))
    if len(first) >= 2:
        (m1, p1), (m2, p2) = sorted(first.items())[:2]
        return Decision(False, two_colors=((*p1, m1), (*p2, m2)))
    if not first:
        return Decision(True, color=None)
    (m,) = first
    wit = has_k1_plus_k2(graph_representation(emap, m))
    return Decision(wit is None, color=m, k1_plus_k2=wit)


# ---------------------------------------------------------------------------
# Least-resolved trees
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TreeFamilyDescription:
    """Description of all least-resolved trees of a monochromatic Fitch map
    plus one concrete member."""

    color: str | None
    parts: tuple[frozenset[str], ...]
    parts_ge_two: tuple[frozenset[str], ...]
    constraints: tuple[str, ...]
    representative: LabeledTree

    @property
    def vertex_count(self) -> int:
        n = len(self.representative.leaves)
        return n + (len(self.parts_ge_two) or 1)


def _fresh(prefix: str, taken: set[str]) -> str:
    name = prefix
    while name in taken:
        name = "_" + name
    taken.add(name)
    return name


def least_resolved_trees(emap: SymmetricMap) -> TreeFamilyDescription:
    """Constraint description and a diameter-minimal representative of the
    least-resolved trees of a monochromatic Fitch map on at least 3 leaves."""
    emap.require_valid()
    if emap.n < 3:
        raise PreconditionError("least-resolved trees are defined for at least 3 leaves")
    used = emap.used_colors()
    if len(used) > 1:
        raise NotFitchError(f"map is not monochromatic: uses colors {list(used)}", witness=used)
    for (x, y), cols in emap.items():
        if len(cols) > 1:
            raise NotFitchError(f"pair {{{x},{y}}} carries several colors", witness=(x, y))
    m = used[0] if used else None
    if m is None:
        parts: tuple[frozenset[str], ...] = (frozenset(emap.leaves),)
    else:
        g = graph_representation(emap, m)
        fam = multipartite_parts(g)
        if fam is None:
            wit = has_k1_plus_k2(g)
            raise NotFitchError(f"color graph of {m!r} contains an induced K1+K2 on {wit}", witness=wit)
        parts = fam.parts
    big = tuple(p for p in parts if len(p) >= 2)
    lab = frozenset([m]) if m is not None else frozenset()
    taken = set(emap.leaves)
    labels: dict[tuple[str, str], frozenset[str]] = {}

    if not big:
        center = _fresh("v0", taken)
        for x in emap.leaves:
            labels[edge(x, center)] = lab
        constraints = (
            "tree is the star on all leaves",
            f"every edge is labeled {{{m}}} except at most one edge labeled {{}}",
        )
        inner = [center]
    elif m is None:
        inner = [_fresh("v0", taken)]
        for x in emap.leaves:
            labels[edge(x, inner[0])] = lab
        constraints = ("tree is the star on all leaves", "every edge is labeled {}")
    else:
        inner = [_fresh(f"v{i}", taken) for i in range(len(big))]
        hub = inner[0]
        for v, part in zip(inner, big):
            for x in sorted(part):
                labels[edge(x, v)] = frozenset()
            if v != hub:
                labels[edge(v, hub)] = lab
        covered = set().union(*big)
        for x in emap.leaves:
            if x not in covered:
                labels[edge(x, hub)] = lab
        constraints = (
            f"exactly {len(big)} inner vertices, one per independent set of size >= 2",
            "all leaves of such an independent set hang from its own inner vertex",
            "outer edges of leaves in those independent sets are labeled {}",
            f"outer edges of the remaining leaves are labeled {{{m}}}",
            f"every inner edge is labeled {{{m}}}; inner edges may be arranged in any tree shape",
        )
    tree = LabeledTree(tuple(emap.leaves) + tuple(inner), tuple(labels), emap.leaves, labels)
    return TreeFamilyDescription(m, parts, big, constraints, tree)
