"""Kernel dispatch: compiled extension when available, pure Python otherwise.

The compiled kernel handles grids whose vertex masks fit in 64 bits; anything
larger (possible when a caller raises the validator caps) silently routes to
the pure implementation, which uses unbounded integers.  Set ``USOGRID_PURE=1``
to force the pure path, e.g. for benchmarking.
"""

from __future__ import annotations

import os

from . import pure
from .pure import (  # noqa: F401  (re-exported conventions)
    acyclic_tournament_words,
    edge_count,
    edge_list,
    word_to_out_masks,
)

try:
    from . import _ckernel
except ImportError:  # extension not built
    _ckernel = None

_FORCE_PURE = os.environ.get("USOGRID_PURE", "") not in ("", "0")


def implementation() -> str:
    """Name of the kernel backing the default dispatch."""
    return "pure" if _ckernel is None or _FORCE_PURE else "cython"


def _compiled_ok(m: int, n: int) -> bool:
    return (
        _ckernel is not None
        and not _FORCE_PURE
        and m <= 16
        and n <= 16
        and m * n <= 64
    )


def find_violation(m: int, n: int, out_masks) -> tuple[int, int, int] | None:
    if _compiled_ok(m, n):
        return _ckernel.find_violation(m, n, list(out_masks))
    return pure.find_violation(m, n, list(out_masks))


def enumerate_uso_words(m: int, n: int) -> list[int]:
    if _compiled_ok(m, n) and m <= 6 and n <= 6 and edge_count(m, n) <= 24:
        return _ckernel.enumerate_uso_words(m, n)
    return pure.enumerate_uso_words(m, n)
