"""Run reports: the JSON/CSV record of one solve."""

from __future__ import annotations

from dataclasses import dataclass

from .oracles import QueryCounter

#: Which counter each algorithm is judged by.
ALG_QUERY_KIND = {
    "diagonal": "vertex",
    "rect": "vertex",
    "dc-edge": "edge",
    "ddim": "vertex",
    "walk": "vertex",
    "random-edge": "vertex",
}

CSV_HEADER = "alg,m,n,seed,queries_vertex,queries_edge,bound,bound_ok"


@dataclass
class RunReport:
    """One solve: what ran, what it cost, and whether the contract held.

    ``sink`` is 1-based, matching the serialization boundary.  ``bound_ok``
    is queries-of-the-algorithm's-kind <= bound.  ``verdict`` is one of
    ok / sink-mismatch / bound-exceeded / unverified.
    """

    algorithm: str
    shape: tuple[int, ...]
    seed: int | None
    queries: dict[str, int]
    bound: int
    bound_ok: bool
    sink: tuple[int, ...]
    verdict: str
    wall_time: float

    @classmethod
    def build(
        cls,
        algorithm: str,
        shape,
        seed: int | None,
        counter: QueryCounter,
        bound: int,
        sink,
        expected_sink=None,
        wall_time: float = 0.0,
    ) -> "RunReport":
        queries = counter.as_dict()
        bound_ok = queries[ALG_QUERY_KIND[algorithm]] <= bound
        if expected_sink is None:
            verdict = "unverified"
        elif tuple(sink) != tuple(expected_sink):
            verdict = "sink-mismatch"
        elif not bound_ok:
            verdict = "bound-exceeded"
        else:
            verdict = "ok"
        return cls(
            algorithm=algorithm,
            shape=tuple(shape),
            seed=seed,
            queries=queries,
            bound=bound,
            bound_ok=bound_ok,
            sink=tuple(c + 1 for c in sink),
            verdict=verdict,
            wall_time=wall_time,
        )

    def to_json_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "shape": list(self.shape),
            "seed": self.seed,
            "queries": dict(self.queries),
            "bound": self.bound,
            "bound_ok": self.bound_ok,
            "sink": list(self.sink),
            "verdict": self.verdict,
            "wall_time": self.wall_time,
        }

    def csv_row(self) -> str:
        if len(self.shape) != 2:
            raise ValueError("CSV rows are defined for 2-dimensional runs only")
        m, n = self.shape
        return (
            f"{self.algorithm},{m},{n},{'' if self.seed is None else self.seed},"
            f"{self.queries['vertex']},{self.queries['edge']},"
            f"{self.bound},{str(self.bound_ok).lower()}"
        )
