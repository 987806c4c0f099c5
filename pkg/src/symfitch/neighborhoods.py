"""Complementary neighborhoods and the subsplit systems built from them."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ValidationError
from .model import Subsplit, SymmetricMap, mask_of, members


@dataclass(frozen=True)
class NeighborhoodSystem:
    """The set of complementary neighborhoods of one color (duplicates collapsed)."""

    color: str
    leaves: tuple[str, ...]
    masks: tuple[int, ...]  # sorted, distinct

    @classmethod
    def from_sets(cls, color: str, leaves, sets) -> "NeighborhoodSystem":
        leaves = tuple(sorted(leaves))
        index = {x: i for i, x in enumerate(leaves)}
        masks = {mask_of(s, index) for s in sets}
        if 0 in masks:
            raise ValidationError("neighborhoods must be non-empty")
        return cls(color, leaves, tuple(sorted(masks)))

    @property
    def members(self) -> tuple[frozenset[str], ...]:
        return tuple(members(m, self.leaves) for m in self.masks)

    def __len__(self) -> int:
        return len(self.masks)


@dataclass(frozen=True)
class Provenance:
    color: str
    left: frozenset[str]
    right: frozenset[str]


@dataclass(frozen=True)
class SubsplitSystem:
    """A deduplicated set of subsplits over ``leaves``.

    ``provenance`` records, per subsplit, which colors/neighborhood pairs
    produced it.  It is diagnostic only and ignored by equality.
    """

    leaves: tuple[str, ...]
    subsplits: tuple[Subsplit, ...]
    provenance: dict[Subsplit, tuple[Provenance, ...]] = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "leaves", tuple(sorted(self.leaves)))
        object.__setattr__(self, "subsplits", tuple(sorted(set(self.subsplits))))
        stray = {x for s in self.subsplits for x in s.leaves} - set(self.leaves)
        if stray:
            raise ValidationError(f"subsplits use leaves {sorted(stray)} outside the ground set")

    def __len__(self) -> int:
        return len(self.subsplits)

    def __iter__(self):
        return iter(self.subsplits)

    def __contains__(self, s: Subsplit) -> bool:
        return s in set(self.subsplits)

    def as_set(self) -> frozenset[Subsplit]:
        return frozenset(self.subsplits)

    def nontrivial(self) -> "SubsplitSystem":
        keep = tuple(s for s in self.subsplits if not s.is_trivial)
        return SubsplitSystem(self.leaves, keep, {s: self.provenance[s] for s in keep if s in self.provenance})


def complementary_neighborhood_mask(emap: SymmetricMap, m: str, i: int) -> int:
    full = (1 << emap.n) - 1
    return (full & ~emap.adjacency(m)[i]) | (1 << i)


def complementary_neighborhood(emap: SymmetricMap, m: str, y: str) -> frozenset[str]:
    """Leaves ``x`` with ``m`` absent from the entry of ``{x, y}``, together with ``y``."""
    emap.require_color(m)
    emap.require_leaf(y)
    return emap.leaf_set(complementary_neighborhood_mask(emap, m, emap.index[y]))


def neighborhood_system(emap: SymmetricMap, m: str) -> NeighborhoodSystem:
    emap.require_color(m)
    masks = {complementary_neighborhood_mask(emap, m, i) for i in range(emap.n)}
    return NeighborhoodSystem(m, emap.leaves, tuple(sorted(masks)))


def is_partition(system: NeighborhoodSystem) -> tuple[frozenset[str], frozenset[str], str] | None:
    """``None`` if the members are pairwise disjoint and cover the leaves.

    Otherwise returns two overlapping members and a shared leaf (smallest
    overlap in canonical order).
    """
    full = (1 << len(system.leaves)) - 1
    union = 0
    for msk in system.masks:
        union |= msk
    if union != full:  # unreachable for systems built from a map
        missing = sorted(members(full & ~union, system.leaves))
        raise ValidationError(f"neighborhood system does not cover leaves {missing}")
    ms = system.masks
    best = None
    for i in range(len(ms)):
        for j in range(i + 1, len(ms)):
            common = ms[i] & ms[j]
            if not common:
                continue
            low = (common & -common).bit_length() - 1
            a, b = sorted((sorted(members(ms[i], system.leaves)), sorted(members(ms[j], system.leaves))))
            cand = (system.leaves[low], a, b)
            if best is None or cand < best:
                best = cand
    if best is None:
        return None
    return frozenset(best[1]), frozenset(best[2]), best[0]


def is_partition_by_membership(emap: SymmetricMap, m: str) -> bool:
    """Alternative partition test: every neighborhood ``N`` equals ``N[y]`` exactly for its members ``y``."""
    system = neighborhood_system(emap, m)
    for msk in system.masks:
        for i in range(emap.n):
            if bool(msk >> i & 1) != (complementary_neighborhood_mask(emap, m, i) == msk):
                return False
    return True


def _subsplits_of(system: NeighborhoodSystem) -> list[tuple[int, int]]:
    ms = system.masks
    return [(ms[i], ms[j]) for i in range(len(ms)) for j in range(i + 1, len(ms)) if not ms[i] & ms[j]]


def subsplit_system(emap: SymmetricMap, m: str) -> SubsplitSystem:
    """All ``N|N'`` for disjoint complementary neighborhoods ``N, N'`` of color ``m``."""
    system = neighborhood_system(emap, m)
    subs = []
    prov: dict[Subsplit, tuple[Provenance, ...]] = {}
    for a, b in _subsplits_of(system):
        s = Subsplit(emap.leaf_set(a), emap.leaf_set(b))
        subs.append(s)
        prov[s] = (Provenance(m, s.side_a, s.side_b),)
    return SubsplitSystem(emap.leaves, tuple(subs), prov)


def full_subsplit_systems(emap: SymmetricMap) -> tuple[SubsplitSystem, SubsplitSystem]:
    """The union over all colors and its non-trivial part."""
    subs: dict[Subsplit, list[Provenance]] = {}
    for m in emap.colors:
        per = subsplit_system(emap, m)
        for s in per:
            subs.setdefault(s, []).extend(per.provenance[s])
    everything = SubsplitSystem(emap.leaves, tuple(subs), {s: tuple(p) for s, p in subs.items()})
    return everything, everything.nontrivial()
