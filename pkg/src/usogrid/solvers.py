"""Deterministic sink-finding algorithms and their query bounds.

The vertex-query workhorse is row/column elimination: a queried non-sink
vertex v is the unique sink of the subgrid spanned by its direct incoming
edges (plus its own row and column), so that whole subgrid cannot contain the
global sink.  Querying a square set of vertices in distinct rows and distinct
columns always leaves at least one whole row and one whole column eliminated,
which drives the 2n-1 square solver, its m+n-1 rectangular extension, and —
through induced block grids — the almost-linear edge-query solver and the
d-dimensional recursion.

All solvers follow the convention that the global sink must be queried even
when its position is already forced; counts below and the stated bounds rely
on it.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable

from .errors import GridError, NotUsoError
from .grid import Vertex
from .oracles import (
    InducedVertexOracle,
    InheritedVertexOracle,
    PartitionPair,
    QueryCounter,
    TransposedVertexOracle,
    VertexAnswer,
    pad_oracle,
)


@dataclass(frozen=True)
class EliminationRecord:
    """Rows/columns with direct edges into a queried vertex (plus its own).

    The vertex is the unique sink of rows x cols, so when it is not the
    global sink that whole subgrid is ruled out.
    """

    vertex: Vertex
    rows: frozenset[int]
    cols: frozenset[int]


class EliminationState:
    """Bookkeeping for the elimination solvers.

    Tracks the active subgrid, per-vertex eliminated flags (as per-row column
    bitmasks), the record of every query, and which queried vertex currently
    covers each active row/column.  Within the active subgrid, queried
    vertices always occupy distinct rows and distinct columns.
    """

    __slots__ = ("m", "n", "active_rows", "active_cols", "elim", "queried",
                 "row_cover", "col_cover", "sink")

    def __init__(self, m: int, n: int):
        self.m = m
        self.n = n
        self.active_rows = (1 << m) - 1
        self.active_cols = (1 << n) - 1
        self.elim = [0] * m
        self.queried: dict[Vertex, EliminationRecord] = {}
        self.row_cover: dict[int, Vertex] = {}
        self.col_cover: dict[int, Vertex] = {}
        self.sink: Vertex | None = None

    def is_active(self, v: Vertex) -> bool:
        return bool(self.active_rows >> v[0] & 1 and self.active_cols >> v[1] & 1)

    def is_eliminated(self, v: Vertex) -> bool:
        return bool(self.elim[v[0]] >> v[1] & 1)

    def deactivate(self, row: int | None = None, col: int | None = None) -> None:
        if row is not None:
            self.active_rows &= ~(1 << row)
        if col is not None:
            self.active_cols &= ~(1 << col)


def note_query(state: EliminationState, answer: VertexAnswer) -> None:
    """Fold one vertex answer into the state.

    A sink answer (no outgoing edges) resolves the search; otherwise the
    eliminated subgrid is derived from the answer's direct incoming edges
    only — no transitive closure.
    """
    v = answer.vertex
    i, j = v
    if not state.is_active(v):
        raise GridError(f"queried vertex {v} is outside the active subgrid")
    if not answer.outgoing:
        state.sink = v
        return
    rows = {w[0] for w in answer.incoming if w[1] == j} | {i}
    cols = {w[1] for w in answer.incoming if w[0] == i} | {j}
    state.queried[v] = EliminationRecord(v, frozenset(rows), frozenset(cols))
    cmask = 0
    for c in cols:
        cmask |= 1 << c
    for r in rows:
        state.elim[r] |= cmask
    state.row_cover[i] = v
    state.col_cover[j] = v


def _lowest_bit(mask: int) -> int | None:
    if mask == 0:
        return None
    return (mask & -mask).bit_length() - 1


def eliminated_lines(state: EliminationState) -> tuple[int, int] | None:
    """Lowest-index fully-eliminated active row and column.

    None iff the sink is already found.  When the active subgrid is square
    with one queried non-sink vertex per line, such a pair always exists;
    failing to find one means the oracle is not a USO.
    """
    if state.sink is not None:
        return None
    row = None
    rbits = state.active_rows
    while rbits:
        r = (rbits & -rbits).bit_length() - 1
        if state.active_cols & ~state.elim[r] == 0:
            row = r
            break
        rbits &= rbits - 1
    col_and = state.active_cols
    rbits = state.active_rows
    while rbits:
        col_and &= state.elim[(rbits & -rbits).bit_length() - 1]
        rbits &= rbits - 1
    col = _lowest_bit(col_and)
    if row is None or col is None:
        raise NotUsoError(
            "no fully eliminated row/column although the sink is unfound: "
            "the oracle is not a USO"
        )
    return row, col


def _square_phase(oracle, state: EliminationState) -> Vertex:
    # Invariant: active subgrid square, every active line covered by exactly
    # one queried vertex.
    while state.sink is None:
        pair = eliminated_lines(state)
        if pair is None:
            break
        r, c = pair
        q_row = state.row_cover[r]
        q_col = state.col_cover[c]
        state.deactivate(row=r, col=c)
        if q_row != q_col:
            # Both lines lose their covering vertex; one query restores the
            # one-per-line invariant.
            note_query(state, oracle.query((q_col[0], q_row[1])))
    assert state.sink is not None
    return state.sink


def _eliminated_covered_col(state: EliminationState, covered: int) -> int:
    col_and = state.active_cols & covered
    rbits = state.active_rows
    while rbits:
        col_and &= state.elim[(rbits & -rbits).bit_length() - 1]
        rbits &= rbits - 1
    col = _lowest_bit(col_and)
    if col is None:
        raise NotUsoError(
            "no eliminated column among the covered ones: the oracle is not a USO"
        )
    return col


def rectangular_solve(oracle, m: int, n: int) -> tuple[Vertex, QueryCounter]:
    """Find the sink of an m x n grid USO with at most m + n - 1 vertex queries.

    With m <= n (the other case is transposed internally): query the main
    diagonal of the first m columns; while more than m columns are active,
    one covered column is fully eliminated and a single replacement query at
    the uncovered row re-covers a fresh column; once m columns remain, the
    square procedure eliminates one row and one column per query.
    """
    if m > n:
        sink, counter = rectangular_solve(TransposedVertexOracle(oracle), n, m)
        return (sink[1], sink[0]), counter
    state = EliminationState(m, n)
    for i in range(m):
        note_query(state, oracle.query((i, i)))
        if state.sink is not None:
            return state.sink, oracle.counter.snapshot()
    covered = (1 << m) - 1
    while state.active_cols.bit_count() > m:
        c = _eliminated_covered_col(state, covered)
        lost_row = state.col_cover[c][0]
        state.deactivate(col=c)
        covered &= ~(1 << c)
        j = _lowest_bit(state.active_cols & ~covered)
        note_query(state, oracle.query((lost_row, j)))
        if state.sink is not None:
            return state.sink, oracle.counter.snapshot()
        covered |= 1 << j
    sink = _square_phase(oracle, state)
    return sink, oracle.counter.snapshot()


def diagonal_solve(oracle, n: int) -> tuple[Vertex, QueryCounter]:
    """Find the sink of an n x n grid USO with at most 2n - 1 vertex queries.

    Queries the main diagonal, then repeatedly drops one fully-eliminated row
    and column and re-covers the two uncovered lines with one query.
    """
    return rectangular_solve(oracle, n, n)


def walk_solve(oracle) -> tuple[Vertex, QueryCounter]:
    """Baseline: from (0, 0) follow the lowest-indexed outgoing neighbour.

    Acyclicity of planar grid USOs guarantees termination within one query
    per vertex; a revisit proves the oracle is not a USO.
    """
    v: Vertex = (0, 0)
    seen = set()
    while True:
        if v in seen:
            raise NotUsoError(f"walk revisited {v}: the orientation has a cycle")
        seen.add(v)
        answer = oracle.query(v)
        if not answer.outgoing:
            return v, oracle.counter.snapshot()
        v = min(answer.outgoing)


def random_edge_solve(oracle, seed: int) -> tuple[Vertex, QueryCounter]:
    """Baseline: from (0, 0) walk to a uniformly random outgoing neighbour."""
    rng = random.Random(seed)
    v: Vertex = (0, 0)
    seen = set()
    while True:
        if v in seen:
            raise NotUsoError(f"walk revisited {v}: the orientation has a cycle")
        seen.add(v)
        answer = oracle.query(v)
        if not answer.outgoing:
            return v, oracle.counter.snapshot()
        v = rng.choice(sorted(answer.outgoing))


def k_schedule(n: int) -> int:
    """Branching factor 2^(2*sqrt(log2 n)), rounded and clamped to [2, ceil(n/2)]."""
    raw = round(2 ** (2 * math.sqrt(math.log2(n))))
    return max(2, min(raw, (n + 1) // 2))


@dataclass(frozen=True)
class KSchedule:
    """Divide-and-conquer tuning: branching factor, base size, bound constant."""

    branching: Callable[[int], int] = k_schedule
    base_threshold: int = 8
    analysis_constant: int = 8

    def k(self, n: int) -> int:
        return max(2, min(self.branching(n), (n + 1) // 2))


DEFAULT_SCHEDULE = KSchedule()


def _sink_by_all_edges(edge_o, n: int) -> Vertex:
    """Base case: query every edge of the n x n grid and scan out-degrees."""
    outdeg = [0] * (n * n)
    for i in range(n):
        for j1 in range(n - 1):
            for j2 in range(j1 + 1, n):
                head = edge_o.query_edge((i, j1), (i, j2))
                tail_j = j2 if head == (i, j1) else j1
                outdeg[i * n + tail_j] += 1
    for j in range(n):
        for i1 in range(n - 1):
            for i2 in range(i1 + 1, n):
                head = edge_o.query_edge((i1, j), (i2, j))
                tail_i = i2 if head == (i1, j) else i1
                outdeg[tail_i * n + j] += 1
    sinks = [v for v, d in enumerate(outdeg) if d == 0]
    if len(sinks) != 1:
        raise NotUsoError(f"edge scan found {len(sinks)} sinks: not a USO")
    return divmod(sinks[0], n)


def _dc_square(edge_o, n: int, schedule: KSchedule) -> Vertex:
    if n <= schedule.base_threshold:
        return _sink_by_all_edges(edge_o, n)
    k = schedule.k(n)
    parts = PartitionPair.near_equal(n, n, k, k)
    induced = InducedVertexOracle(
        edge_o, parts, lambda view: _dc_any(view, schedule), record=False
    )
    block, _ = diagonal_solve(induced, k)
    return induced.block_sink(block)


def _dc_any(view, schedule: KSchedule) -> Vertex:
    a, b = view.shape.rows, view.shape.cols
    if a == b:
        return _dc_square(view, a, schedule)
    side = max(a, b)
    # Padded sinks always land in the real region, so no translation needed.
    return _dc_square(pad_oracle(view, side), side, schedule)


def dc_edge_solve(
    oracle, m: int, n: int, schedule: KSchedule = DEFAULT_SCHEDULE
) -> tuple[Vertex, QueryCounter]:
    """Find the sink of an m x n grid USO under the edge-query model.

    Rectangular instances are squared with a zero-cost padding oracle.  At or
    below the base threshold every edge is queried; above it, rows and
    columns are cut into k near-equal contiguous blocks and the square
    vertex-query solver runs on the induced block grid, with this solver as
    the per-block recursion.  Counts stay within
    analysis_constant * n * 2^(2*sqrt(log2 n)) base edge queries.
    """
    if (m, n) != (oracle.shape.rows, oracle.shape.cols):
        raise GridError(
            f"oracle shape {oracle.shape.rows}x{oracle.shape.cols} does not match {m}x{n}"
        )
    side = max(m, n)
    work = oracle if m == n else pad_oracle(oracle, side)
    sink = _dc_square(work, side, schedule)
    return sink, oracle.counter.snapshot()


def _ddim_sink(oracle, dims: tuple[int, ...]):
    if len(dims) == 0:
        # Single-vertex block; the sink-must-be-queried convention costs 1.
        oracle.query(())
        return ()
    if len(dims) == 1:
        v = (0,)
        while True:
            answer = oracle.query(v)
            if not answer.outgoing:
                return v
            v = min(answer.outgoing)
    inherited = InheritedVertexOracle(
        oracle,
        (0, 1),
        sub_solver=lambda view: _ddim_sink(view, view.dims),
        record=False,
    )
    block, _ = rectangular_solve(inherited, dims[0], dims[1])
    return inherited.block_sink(block)


def ddim_solve(oracle, dims) -> tuple[tuple, QueryCounter]:
    """Find the sink of a d-dimensional grid USO with real vertex queries.

    One dimension is an acyclic tournament walk; otherwise the first two
    dimensions form an inherited block grid solved by the rectangular solver,
    recursing on the remaining d - 2 dimensions inside each block.  Counts
    satisfy the unrolled bound of :func:`ddim_bound`.
    """
    dims = tuple(dims)
    if dims != tuple(oracle.dims):
        raise GridError(f"oracle dims {oracle.dims} do not match {dims}")
    sink = _ddim_sink(oracle, dims)
    return sink, oracle.counter.snapshot()


def diagonal_bound(n: int) -> int:
    return 2 * n - 1


def rectangular_bound(m: int, n: int) -> int:
    return m + n - 1


def dc_edge_bound(m: int, n: int, c: int = 8) -> int:
    """c * s * 2^(2*sqrt(log2 s)) for the padded side s, floored to the
    largest integer count it admits."""
    s = max(m, n)
    return math.floor(c * s * 2 ** (2 * math.sqrt(math.log2(s)))) if s > 1 else c


def ddim_bound(dims) -> int:
    """Unrolled two-dimensions-at-a-time recurrence with T(1) = n, T(0) = 1."""
    dims = tuple(dims)
    if len(dims) == 0:
        return 1
    if len(dims) == 1:
        return dims[0]
    return (dims[0] + dims[1] - 1) * ddim_bound(dims[2:])


def exhaustive_bound(m: int, n: int) -> int:
    return m * n
