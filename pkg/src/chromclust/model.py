"""Edge-colored clustering instances and their cost model.

An instance is a complete graph on vertices 0..n-1 where every pair is
either a negative edge or a positive edge carrying one color from a
fixed palette.  A solution is a partition of the vertices together with
one palette color per cluster.  A pair *disagrees* with the solution
when it is negative inside a cluster, positive across two clusters, or
positive inside a cluster whose color differs from the edge color.  The
objective throughout the package is the number of disagreeing pairs.

Edge labels live in a flat triangular int16 array: -1 encodes a
negative edge, a value c >= 0 encodes a positive edge with color id c.
All subset counters here also accept plain ints interpreted as vertex
bitmasks, which is how the LP builder and the preclustering code talk
to this module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping

import numpy as np

from .errors import StructuralError

MINUS = -1


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def pair_index(n: int, u: int, v: int) -> int:
    """Position of unordered pair {u, v} in the flat triangular layout."""
    if u > v:
        u, v = v, u
    if u == v or u < 0 or v >= n:
        raise StructuralError(f"not a vertex pair: ({u}, {v}) with n={n}")
    return u * n - u * (u + 1) // 2 + (v - u - 1)


def iter_pairs(n: int) -> Iterator[tuple[int, int]]:
    """Pairs (u, v) with u < v, in the same order as the flat layout."""
    for u in range(n):
        for v in range(u + 1, n):
            yield u, v


def as_mask(vertices: int | Iterable[int]) -> int:
    """Normalize a vertex subset (iterable or bitmask int) to a bitmask."""
    if isinstance(vertices, (int, np.integer)):
        if vertices < 0:
            raise StructuralError("negative bitmask")
        return int(vertices)
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def mask_vertices(mask: int) -> list[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


@dataclass(frozen=True)
class ChromaticInstance:
    """Complete graph with signed, colored edges.

    colors maps color ids to display names; labels is the flat
    triangular edge array described in the module docstring.  Instances
    are immutable: the label array is copied and marked read-only.
    """

    n: int
    colors: tuple[str, ...]
    labels: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise StructuralError("instance needs at least one vertex")
        if not self.colors:
            raise StructuralError("palette must not be empty")
        if len(set(self.colors)) != len(self.colors):
            raise StructuralError("duplicate color names in palette")
        labels = np.asarray(self.labels, dtype=np.int16)
        if labels.shape != (pair_count(self.n),):
            raise StructuralError(
                f"label array has shape {labels.shape}, "
                f"expected ({pair_count(self.n)},)"
            )
        if labels.size and (labels.min() < MINUS or labels.max() >= len(self.colors)):
            raise StructuralError("edge label outside palette range")
        labels = labels.copy()
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_pair_labels(
        cls,
        n: int,
        colors: Iterable[str],
        pair_labels: Mapping[tuple[int, int], int],
    ) -> "ChromaticInstance":
        """Build from a {(u, v): label} mapping covering every pair."""
        colors = tuple(colors)
        labels = np.full(pair_count(n), -2, dtype=np.int16)
        for (u, v), lab in pair_labels.items():
            idx = pair_index(n, u, v)
            if labels[idx] != -2:
                raise StructuralError(f"pair ({u}, {v}) assigned twice")
            labels[idx] = lab
        if -2 in labels:
            missing = [p for i, p in enumerate(iter_pairs(n)) if labels[i] == -2]
            raise StructuralError(f"unlabeled pairs: {missing[:5]}")
        return cls(n=n, colors=colors, labels=labels)

    @property
    def n_colors(self) -> int:
        return len(self.colors)

    def label(self, u: int, v: int) -> int:
        return int(self.labels[pair_index(self.n, u, v)])

    def color_id(self, name: str) -> int:
        try:
            return self.colors.index(name)
        except ValueError:
            raise StructuralError(f"unknown color name {name!r}") from None

    @cached_property
    def plus_adjacency(self) -> tuple[tuple[int, ...], ...]:
        """plus_adjacency[c][u] = bitmask of v joined to u by a +c edge."""
        adj = [[0] * self.n for _ in range(self.n_colors)]
        for (u, v), lab in zip(iter_pairs(self.n), self.labels):
            if lab >= 0:
                adj[lab][u] |= 1 << v
                adj[lab][v] |= 1 << u
        return tuple(tuple(row) for row in adj)

    @cached_property
    def plus_any(self) -> tuple[int, ...]:
        """plus_any[u] = bitmask of v joined to u by a positive edge of any color."""
        out = [0] * self.n
        for row in self.plus_adjacency:
            for u in range(self.n):
                out[u] |= row[u]
        return tuple(out)


@dataclass(frozen=True)
class Clustering:
    """Vertex partition plus one palette color per cluster.

    Canonicalized on construction: clusters are sorted by their minimum
    vertex, so structurally equal solutions compare equal.
    """

    parts: tuple[frozenset[int], ...]
    part_color: tuple[int, ...]

    def __post_init__(self) -> None:
        parts = tuple(frozenset(p) for p in self.parts)
        colors = tuple(int(c) for c in self.part_color)
        if len(parts) != len(colors):
            raise StructuralError("one color per cluster required")
        order = sorted(range(len(parts)), key=lambda i: min(parts[i]) if parts[i] else -1)
        object.__setattr__(self, "parts", tuple(parts[i] for i in order))
        object.__setattr__(self, "part_color", tuple(colors[i] for i in order))

    @classmethod
    def from_membership(cls, membership: Iterable[int], cluster_colors: Iterable[int]) -> "Clustering":
        """membership[v] = cluster id; cluster_colors indexed by cluster id."""
        membership = list(membership)
        cluster_colors = list(cluster_colors)
        groups: dict[int, set[int]] = {}
        for v, c in enumerate(membership):
            groups.setdefault(c, set()).add(v)
        parts = []
        colors = []
        for cid in sorted(groups):
            parts.append(frozenset(groups[cid]))
            colors.append(cluster_colors[cid])
        return cls(parts=tuple(parts), part_color=tuple(colors))

    @classmethod
    def singletons(cls, n: int, color: int = 0) -> "Clustering":
        return cls(
            parts=tuple(frozenset({v}) for v in range(n)),
            part_color=tuple(color for _ in range(n)),
        )

    def membership(self, n: int) -> list[int]:
        out = [-1] * n
        for i, part in enumerate(self.parts):
            for v in part:
                out[v] = i
        return out

    def color_of_vertex(self, v: int) -> int:
        for part, col in zip(self.parts, self.part_color):
            if v in part:
                return col
        raise StructuralError(f"vertex {v} not covered")

    def __len__(self) -> int:
        return len(self.parts)


@dataclass(frozen=True)
class PreclusteredInstance:
    """Output of the preclustering stage.

    preclusters partition the vertex set; precolor assigns a color to
    every precluster of size >= 2 (singletons stay uncolored and are
    keyed by absence).  admissible lists the unordered vertex pairs
    that cross two preclusters deemed worth joining later.
    """

    preclusters: tuple[frozenset[int], ...]
    precolor: dict[int, int]
    admissible: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        parts = tuple(frozenset(p) for p in self.preclusters)
        order = sorted(range(len(parts)), key=lambda i: min(parts[i]))
        remap = {old: new for new, old in enumerate(order)}
        precolor = {remap[i]: c for i, c in self.precolor.items()}
        object.__setattr__(self, "preclusters", tuple(parts[i] for i in order))
        object.__setattr__(self, "precolor", precolor)
        object.__setattr__(
            self,
            "admissible",
            frozenset((min(u, v), max(u, v)) for u, v in self.admissible),
        )

    def validate(self, inst: ChromaticInstance) -> None:
        seen: set[int] = set()
        for part in self.preclusters:
            if not part:
                raise StructuralError("empty precluster")
            if part & seen:
                raise StructuralError("preclusters overlap")
            seen |= part
        if seen != set(range(inst.n)):
            raise StructuralError("preclusters do not cover the vertex set")
        for i, part in enumerate(self.preclusters):
            if len(part) >= 2 and i not in self.precolor:
                raise StructuralError(f"precluster {i} of size {len(part)} lacks a color")
            if i in self.precolor and not 0 <= self.precolor[i] < inst.n_colors:
                raise StructuralError("precluster color outside palette")
        index = self.index_of(inst.n)
        for u, v in self.admissible:
            if not (0 <= u < v < inst.n):
                raise StructuralError(f"admissible pair ({u}, {v}) out of range")
            if index[u] == index[v]:
                raise StructuralError("admissible pair inside one precluster")

    def index_of(self, n: int) -> list[int]:
        """index_of(n)[v] = position of v's precluster in self.preclusters."""
        out = [-1] * n
        for i, part in enumerate(self.preclusters):
            for v in part:
                out[v] = i
        return out


def is_valid(inst: ChromaticInstance, sol: Clustering) -> bool:
    """True when sol partitions all of 0..n-1 with in-palette colors."""
    seen: set[int] = set()
    for part, col in zip(sol.parts, sol.part_color):
        if not part or part & seen:
            return False
        if not 0 <= col < inst.n_colors:
            return False
        seen |= part
    return seen == set(range(inst.n))


def _require_valid(inst: ChromaticInstance, sol: Clustering) -> None:
    if not is_valid(inst, sol):
        raise StructuralError("clustering is not a colored partition of this instance")


def count_disagreements(inst: ChromaticInstance, sol: Clustering) -> int:
    """Number of pairs on which sol disagrees with the instance."""
    _require_valid(inst, sol)
    member = sol.membership(inst.n)
    bad = 0
    for (u, v), lab in zip(iter_pairs(inst.n), inst.labels):
        if member[u] == member[v]:
            if lab == MINUS or lab != sol.part_color[member[u]]:
                bad += 1
        elif lab != MINUS:
            bad += 1
    return bad


def count_agreements(inst: ChromaticInstance, sol: Clustering) -> int:
    """Complement count, computed from the agreement predicate directly."""
    _require_valid(inst, sol)
    member = sol.membership(inst.n)
    good = 0
    for (u, v), lab in zip(iter_pairs(inst.n), inst.labels):
        if member[u] == member[v]:
            if lab >= 0 and lab == sol.part_color[member[u]]:
                good += 1
        elif lab == MINUS:
            good += 1
    return good


def respects(inst: ChromaticInstance, pre: PreclusteredInstance, sol: Clustering) -> bool:
    """True when sol treats the preclustered structure as law.

    Three conditions: every precluster lands inside a single cluster of
    sol; a cluster swallowing a precluster of size >= 2 carries that
    precluster's assigned color; and any co-clustered pair from two
    different preclusters is an admissible pair.
    """
    _require_valid(inst, sol)
    member = sol.membership(inst.n)
    index = pre.index_of(inst.n)
    for i, part in enumerate(pre.preclusters):
        owners = {member[v] for v in part}
        if len(owners) != 1:
            return False
        if i in pre.precolor and sol.part_color[owners.pop()] != pre.precolor[i]:
            return False
    for u, v in iter_pairs(inst.n):
        if member[u] == member[v] and index[u] != index[v]:
            if (u, v) not in pre.admissible:
                return False
    return True


def delta_plus_count(inst: ChromaticInstance, subset: int | Iterable[int]) -> int:
    """Positive edges with exactly one endpoint in the subset."""
    mask = as_mask(subset)
    total = 0
    for u in mask_vertices(mask):
        total += bin(inst.plus_any[u] & ~mask).count("1")
    return total


def minus_ell_inside_count(inst: ChromaticInstance, subset: int | Iterable[int], ell: int) -> int:
    """Pairs inside the subset that are negative or positive of a color != ell."""
    mask = as_mask(subset)
    verts = mask_vertices(mask)
    size = len(verts)
    plus_ell = 0
    for u in verts:
        plus_ell += bin(inst.plus_adjacency[ell][u] & mask).count("1")
    # each +ell inner pair was seen from both endpoints
    return size * (size - 1) // 2 - plus_ell // 2


def _pair_in(u: int, v: int, a: int, b: int) -> bool:
    return bool((a >> u) & 1 and (b >> v) & 1) or bool((a >> v) & 1 and (b >> u) & 1)


def w_plus(inst: ChromaticInstance, s: int | Iterable[int], t: int | Iterable[int]) -> int:
    """Positive pairs with one endpoint in s and the other in t.

    Unordered pairs are counted once, so w_plus(S, S) is the number of
    positive pairs inside S.
    """
    a, b = as_mask(s), as_mask(t)
    total = 0
    for (u, v), lab in zip(iter_pairs(inst.n), inst.labels):
        if lab >= 0 and _pair_in(u, v, a, b):
            total += 1
    return total


def w_minus(inst: ChromaticInstance, s: int | Iterable[int], t: int | Iterable[int]) -> int:
    """Negative counterpart of w_plus."""
    a, b = as_mask(s), as_mask(t)
    total = 0
    for (u, v), lab in zip(iter_pairs(inst.n), inst.labels):
        if lab == MINUS and _pair_in(u, v, a, b):
            total += 1
    return total
