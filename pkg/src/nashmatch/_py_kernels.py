"""Pure-Python reference kernels for assignment and matching.

Same contracts as the compiled ``_kernels`` extension; selected at import
time by ``backend`` when the extension is unavailable.  The algorithms
match the compiled versions step for step so results are identical
whichever backend is active.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def solve_assignment_min(cost: np.ndarray):
    """Min-cost perfect assignment via shortest augmenting paths, O(n^3).

    Returns (col4row, u, v): the assigned column per row and dual
    potentials with u_i + v_j <= cost_ij, tight on assigned pairs.
    """
    C = np.ascontiguousarray(cost, dtype=float)
    n = C.shape[0]
    u = np.zeros(n)
    v = np.zeros(n)
    col4row = np.full(n, -1, dtype=np.int64)
    row4col = np.full(n, -1, dtype=np.int64)
    for cur_row in range(n):
        shortest = np.full(n, np.inf)
        prev_row = np.full(n, -1, dtype=np.int64)
        scanned_cols = np.zeros(n, dtype=bool)
        scanned_rows = np.zeros(n, dtype=bool)
        min_val = 0.0
        i = cur_row
        sink = -1
        while sink == -1:
            scanned_rows[i] = True
            cand = min_val + C[i] - u[i] - v
            better = ~scanned_cols & (cand < shortest)
            shortest[better] = cand[better]
            prev_row[better] = i
            masked = np.where(scanned_cols, np.inf, shortest)
            j = int(np.argmin(masked))
            if not np.isfinite(masked[j]):
                raise RuntimeError("assignment search exhausted (non-finite costs?)")
            min_val = shortest[j]
            scanned_cols[j] = True
            if row4col[j] == -1:
                sink = j
            else:
                i = int(row4col[j])
        u[cur_row] += min_val
        for r in np.flatnonzero(scanned_rows):
            if r != cur_row:
                u[r] += min_val - shortest[col4row[r]]
        sc = np.flatnonzero(scanned_cols)
        v[sc] -= min_val - shortest[sc]
        j = sink
        while True:
            i = int(prev_row[j])
            row4col[j] = i
            col4row[i], j = int(j), int(col4row[i])
            if i == cur_row:
                break
    return col4row, u, v


def _augment(adj_row_cols, row4col, col4row, start, visited, col_ok):
    """One Kuhn augmenting search from ``start`` (iterative DFS).

    ``adj_row_cols(row)`` yields the row's candidate columns in ascending
    order; ``col_ok`` masks admissible columns.  Returns True and applies
    the augmentation when a free column is reached.
    """
    stack = [[start, adj_row_cols(start), 0, -1]]
    while stack:
        frame = stack[-1]
        row, cols, ptr, _ = frame
        pushed = False
        while frame[2] < cols.size:
            j = int(cols[frame[2]])
            frame[2] += 1
            if visited[j] or not col_ok[j]:
                continue
            visited[j] = True
            frame[3] = j
            owner = int(row4col[j])
            if owner == -1:
                for fr in stack:
                    r, jj = fr[0], fr[3]
                    col4row[r] = jj
                    row4col[jj] = r
                return True
            stack.append([owner, adj_row_cols(owner), 0, -1])
            pushed = True
            break
        if not pushed:
            stack.pop()
    return False


def kuhn_matching(adj: np.ndarray, init_col4row=None):
    """Perfect matching on a boolean bipartite adjacency, or None.

    ``init_col4row`` seeds the matching (entries pointing at missing
    edges are dropped); augmenting paths explore ascending column order
    for determinism.
    """
    adj = np.asarray(adj, dtype=bool)
    n = adj.shape[0]
    col4row = np.full(n, -1, dtype=np.int64)
    row4col = np.full(n, -1, dtype=np.int64)
    if init_col4row is not None:
        for i in range(n):
            j = int(init_col4row[i])
            if 0 <= j < n and adj[i, j] and row4col[j] == -1:
                col4row[i] = j
                row4col[j] = i
    rows_cache = [np.flatnonzero(adj[i]) for i in range(n)]
    col_ok = np.ones(n, dtype=bool)
    for i in range(n):
        if col4row[i] == -1:
            visited = np.zeros(n, dtype=bool)
            if not _augment(lambda r: rows_cache[r], row4col, col4row, i,
                            visited, col_ok):
                return None
    return col4row


def lex_tighten(tight: np.ndarray, col4row: np.ndarray):
    """Lexicographically smallest perfect matching inside a tight graph.

    ``col4row`` must already be a perfect matching within ``tight``.
    Rows are fixed in ascending order; each takes its smallest admissible
    column, rerouting the displaced row through an alternating path when
    possible.
    """
    tight = np.asarray(tight, dtype=bool)
    n = tight.shape[0]
    m = col4row.astype(np.int64).copy()
    row4col = np.full(n, -1, dtype=np.int64)
    for i in range(n):
        row4col[m[i]] = i
    col_free_for_search = np.ones(n, dtype=bool)  # ~fixed
    rows_cache = [np.flatnonzero(tight[i]) for i in range(n)]
    for i in range(n):
        for j in rows_cache[i]:
            j = int(j)
            if not col_free_for_search[j]:
                continue
            if m[i] == j:
                break
            j0 = int(m[i])
            i1 = int(row4col[j])
            m[i] = j
            row4col[j] = i
            m[i1] = -1
            row4col[j0] = -1
            visited = np.zeros(n, dtype=bool)
            visited[j] = True
            if _augment(lambda r: rows_cache[r], row4col, m, i1, visited,
                        col_free_for_search):
                break
            # revert the displacement
            m[i1] = j
            row4col[j] = i1
            m[i] = j0
            row4col[j0] = i
        col_free_for_search[m[i]] = False
    return m
