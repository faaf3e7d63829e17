"""d-dimensional grid orientations: products of d complete graphs.

Vertices are coordinate tuples; two vertices are adjacent iff they differ in
exactly one coordinate.  Sizes stay at desk scale (the validator enumerates
products of nonempty coordinate subsets), so everything here is pure Python
with unbounded bitmasks.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import CapExceededError, GridError, NotUsoError
from .grid import _bits, _find_cycle_masks

DVertex = tuple[int, ...]

DEFAULT_SUBGRID_CAP = 100_000


def ddim_edge_list(dims: Sequence[int]) -> list[tuple[DVertex, DVertex]]:
    """All edges, axis by axis, lines and endpoint pairs in lexicographic order."""
    dims = tuple(dims)
    edges = []
    for axis, size in enumerate(dims):
        others = [range(s) for a, s in enumerate(dims) if a != axis]
        for rest in itertools.product(*others):
            for x1 in range(size - 1):
                for x2 in range(x1 + 1, size):
                    u = rest[:axis] + (x1,) + rest[axis:]
                    w = rest[:axis] + (x2,) + rest[axis:]
                    edges.append((u, w))
    return edges


def ddim_edge_count(dims: Sequence[int]) -> int:
    total = math.prod(dims)
    return sum(total // s * (s * (s - 1) // 2) for s in dims)


class DOrientedGrid:
    """Total edge orientation of a d-dimensional grid."""

    __slots__ = ("dims", "_out")

    def __init__(self, dims: Sequence[int], directed_edges: Iterable[tuple[DVertex, DVertex]]):
        dims = tuple(int(d) for d in dims)
        if not dims or any(d < 1 for d in dims):
            raise GridError(f"dims must be positive, got {dims}")
        self.dims = dims
        out = [0] * self.vertex_count
        seen = set()
        for tail, head in directed_edges:
            tail, head = tuple(tail), tuple(head)
            self._check_vertex(tail)
            self._check_vertex(head)
            if sum(a != b for a, b in zip(tail, head)) != 1:
                raise GridError(f"{tail} and {head} must differ in exactly one coordinate")
            key = (min(tail, head), max(tail, head))
            if key in seen:
                raise GridError(f"edge {key} oriented more than once")
            seen.add(key)
            out[self.index(tail)] |= 1 << self.index(head)
        if len(seen) != ddim_edge_count(dims):
            raise GridError(
                f"orientation is not total: {len(seen)} of "
                f"{ddim_edge_count(dims)} edges given"
            )
        self._out = tuple(out)

    @classmethod
    def _from_out_masks(cls, dims: tuple[int, ...], out: Sequence[int]) -> "DOrientedGrid":
        g = object.__new__(cls)
        g.dims = dims
        g._out = tuple(out)
        return g

    @classmethod
    def from_values(cls, values: np.ndarray) -> "DOrientedGrid":
        """Orient every line pair from the larger entry to the smaller."""
        arr = np.asarray(values, dtype=np.float64)
        if np.unique(arr).size != arr.size:
            raise GridError("values must be pairwise distinct")
        dims = tuple(arr.shape)
        g = cls._from_out_masks(dims, [0] * math.prod(dims))
        out = [0] * math.prod(dims)
        for u, w in ddim_edge_list(dims):
            if arr[u] > arr[w]:
                out[g.index(u)] |= 1 << g.index(w)
            else:
                out[g.index(w)] |= 1 << g.index(u)
        return cls._from_out_masks(dims, out)

    @classmethod
    def from_edge_word(cls, dims: Sequence[int], word: int) -> "DOrientedGrid":
        """Decode one orientation from a bit per edge of :func:`ddim_edge_list`.

        Bit e set means edge e points from its lexicographically smaller
        endpoint to the larger one.
        """
        dims = tuple(dims)
        g = cls._from_out_masks(dims, [0] * math.prod(dims))
        out = [0] * math.prod(dims)
        for e, (u, w) in enumerate(ddim_edge_list(dims)):
            if word >> e & 1:
                out[g.index(u)] |= 1 << g.index(w)
            else:
                out[g.index(w)] |= 1 << g.index(u)
        return cls._from_out_masks(dims, out)

    @property
    def vertex_count(self) -> int:
        return math.prod(self.dims)

    @property
    def coord_count(self) -> int:
        """Sum of the dimension sizes (the d-dimensional analogue of m + n)."""
        return sum(self.dims)

    def _check_vertex(self, v: DVertex) -> None:
        if len(v) != len(self.dims) or any(
            not 0 <= x < s for x, s in zip(v, self.dims)
        ):
            raise GridError(f"vertex {v} out of bounds for dims {self.dims}")

    def index(self, v: DVertex) -> int:
        idx = 0
        for x, s in zip(v, self.dims):
            idx = idx * s + x
        return idx

    def vertex(self, idx: int) -> DVertex:
        coords = []
        for s in reversed(self.dims):
            idx, x = divmod(idx, s)
            coords.append(x)
        return tuple(reversed(coords))

    def vertices(self) -> Iterator[DVertex]:
        yield from itertools.product(*(range(s) for s in self.dims))

    def neighbors(self, v: DVertex) -> Iterator[DVertex]:
        for axis, size in enumerate(self.dims):
            for x in range(size):
                if x != v[axis]:
                    yield v[:axis] + (x,) + v[axis + 1 :]

    def out_neighbors(self, v: DVertex) -> frozenset[DVertex]:
        self._check_vertex(v)
        mask = self._out[self.index(v)]
        result = []
        while mask:
            result.append(self.vertex((mask & -mask).bit_length() - 1))
            mask &= mask - 1
        return frozenset(result)

    def points_to(self, tail: DVertex, head: DVertex) -> bool:
        return bool(self._out[self.index(tail)] >> self.index(head) & 1)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DOrientedGrid)
            and self.dims == other.dims
            and self._out == other._out
        )

    def __hash__(self) -> int:
        return hash((self.dims, self._out))

    def __repr__(self) -> str:
        return f"<DOrientedGrid {'x'.join(map(str, self.dims))}>"


@dataclass(frozen=True)
class DUsoViolation:
    """First subgrid (per-axis subset masks, ascending) without a unique sink."""

    subsets: tuple[frozenset[int], ...]
    sink_count: int


def validate_uso_ddim(
    grid: DOrientedGrid, max_subgrids: int = DEFAULT_SUBGRID_CAP
) -> DUsoViolation | None:
    """Check the unique-sink property over all products of nonempty subsets."""
    total = math.prod(2**s - 1 for s in grid.dims)
    if total > max_subgrids:
        raise CapExceededError(
            f"validating dims {grid.dims} means {total} subgrids, above the cap "
            f"{max_subgrids}; raise max_subgrids explicitly"
        )
    axis_subsets = []
    for axis, size in enumerate(grid.dims):
        subsets = []
        for mask in range(1, 1 << size):
            coords = tuple(x for x in range(size) if mask >> x & 1)
            subsets.append((mask, coords))
        axis_subsets.append(subsets)
    for combo in itertools.product(*axis_subsets):
        coords_lists = [c for _, c in combo]
        ids = [
            grid.index(v) for v in itertools.product(*coords_lists)
        ]
        if len(ids) == 1:
            continue
        sub = 0
        for i in ids:
            sub |= 1 << i
        sinks = sum(1 for i in ids if not grid._out[i] & sub)
        if sinks != 1:
            return DUsoViolation(
                tuple(frozenset(_bits(mask)) for mask, _ in combo), sinks
            )
    return None


def is_uso_ddim(grid: DOrientedGrid, max_subgrids: int = DEFAULT_SUBGRID_CAP) -> bool:
    return validate_uso_ddim(grid, max_subgrids) is None


def brute_force_sink_ddim(grid: DOrientedGrid) -> DVertex:
    sinks = [grid.vertex(i) for i, mask in enumerate(grid._out) if mask == 0]
    if len(sinks) != 1:
        raise NotUsoError(f"not a USO: {len(sinks)} sinks in dims {grid.dims}")
    return sinks[0]


def find_cycle_ddim(grid: DOrientedGrid) -> list[DVertex] | None:
    cycle = _find_cycle_masks(grid._out, grid.vertex_count)
    if cycle is None:
        return None
    return [grid.vertex(i) for i in cycle]
