"""Hot numeric kernels with numba acceleration and a NumPy fallback.

The only compute-bound inner loop in this package is the LCS dynamic
program used when diffing masculine/feminine surfaces over a whole corpus.
The numba path is used by default; set ``GENDERALT_NO_NUMBA=1`` to force
the pure-NumPy path (also used automatically when numba is unavailable).

``benchmarks/bench_lcs.py`` compares both paths.
"""

from __future__ import annotations

import os

import numpy as np

NUMBA_DISABLED = os.environ.get("GENDERALT_NO_NUMBA", "").strip().lower() in {
    "1",
    "true",
    "yes",
}

try:
    if NUMBA_DISABLED:
        raise ImportError("numba disabled via GENDERALT_NO_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    njit = None
    HAVE_NUMBA = False


def lcs_suffix_table_numpy(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Suffix-LCS table: table[i, j] = LCS length of a[i:] vs b[j:].

    Row recurrence vectorized over j.  The running maximum is valid because
    adjacent LCS cells differ by at most one, so taking the max over the
    three candidates never overshoots the exact value.
    """
    n, m = len(a), len(b)
    table = np.zeros((n + 1, m + 1), dtype=np.int32)
    if m == 0 or n == 0:
        return table
    for i in range(n - 1, -1, -1):
        nxt = table[i + 1]
        cand = np.where(b == a[i], nxt[1:] + 1, 0)
        t = np.maximum(cand, nxt[:m])
        table[i, :m] = np.maximum.accumulate(t[::-1])[::-1]
    return table


def _lcs_suffix_table_loops(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n, m = len(a), len(b)
    table = np.zeros((n + 1, m + 1), dtype=np.int32)
    for i in range(n - 1, -1, -1):
        for j in range(m - 1, -1, -1):
            if a[i] == b[j]:
                table[i, j] = table[i + 1, j + 1] + 1
            else:
                down = table[i + 1, j]
                right = table[i, j + 1]
                table[i, j] = down if down >= right else right
    return table


if HAVE_NUMBA:
    lcs_suffix_table_numba = njit(cache=True)(_lcs_suffix_table_loops)
    lcs_suffix_table = lcs_suffix_table_numba
else:
    lcs_suffix_table_numba = None
    lcs_suffix_table = lcs_suffix_table_numpy


def encode_tokens(a, b) -> tuple[np.ndarray, np.ndarray]:
    """Map two token sequences onto a shared int32 id space."""
    ids: dict[str, int] = {}
    out = []
    for seq in (a, b):
        arr = np.empty(len(seq), dtype=np.int32)
        for i, tok in enumerate(seq):
            arr[i] = ids.setdefault(tok, len(ids))
        out.append(arr)
    return out[0], out[1]
