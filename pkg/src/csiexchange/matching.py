"""Maximum bipartite matching between matrix rows and allowed columns.

A boolean pattern ``allowed[r, c]`` is read as a bipartite graph with an edge
between row ``r`` and column ``c`` wherever the entry may be non-zero.  A
matching that saturates every row is a system of distinct representatives;
when none exists, ``hall_violator`` extracts a row set with too few columns.
"""

from __future__ import annotations

import numpy as np

__all__ = ["max_matching", "row_saturating", "hall_violator"]


def _adjacency(allowed) -> tuple[list[list[int]], int]:
    allowed = np.asarray(allowed, dtype=bool)
    if allowed.ndim != 2:
        raise ValueError("pattern must be a 2-d boolean matrix")
    return [list(np.flatnonzero(row)) for row in allowed], allowed.shape[1]


def max_matching(allowed) -> list[int]:
    """Row-to-column assignment of a maximum matching (-1 for unmatched rows).

    Kuhn's augmenting-path algorithm, one search per row.
    """
    adj, ncols = _adjacency(allowed)
    col_match = [-1] * ncols

    def augment(r: int, seen: list[bool]) -> bool:
        # iterative DFS over alternating paths starting at row r
        stack = [(r, iter(adj[r]))]
        path: list[tuple[int, int]] = []
        while stack:
            row, it = stack[-1]
            for c in it:
                if seen[c]:
                    continue
                seen[c] = True
                path.append((row, c))
                if col_match[c] == -1:
                    for pr, pc in path:
                        col_match[pc] = pr
                    return True
                stack.append((col_match[c], iter(adj[col_match[c]])))
                break
            else:
                stack.pop()
                if path:
                    path.pop()
        return False

    for r in range(len(adj)):
        augment(r, [False] * ncols)

    row_match = [-1] * len(adj)
    for c, r in enumerate(col_match):
        if r != -1:
            row_match[r] = c
    return row_match


def row_saturating(allowed) -> bool:
    """True iff every row can be matched to a distinct allowed column."""
    return all(c != -1 for c in max_matching(allowed))


def hall_violator(allowed, row_match: list[int] | None = None) -> frozenset[int] | None:
    """A set of rows whose allowed columns are fewer than the rows, or ``None``.

    Rows reachable from an unmatched row along alternating paths only ever
    reach columns matched back into the same set, so that set is deficient
    by exactly one.
    """
    adj, ncols = _adjacency(allowed)
    if row_match is None:
        row_match = max_matching(allowed)
    free = [r for r, c in enumerate(row_match) if c == -1]
    if not free:
        return None
    col_match = [-1] * ncols
    for r, c in enumerate(row_match):
        if c != -1:
            col_match[c] = r
    rows = {free[0]}
    frontier = [free[0]]
    while frontier:
        r = frontier.pop()
        for c in adj[r]:
            owner = col_match[c]
            # a maximum matching leaves no free column reachable
            assert owner != -1
            if owner not in rows:
                rows.add(owner)
                frontier.append(owner)
    return frozenset(rows)
