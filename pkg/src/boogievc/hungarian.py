"""Maximum-weight bipartite assignment (Hungarian method, O(n^3)).

The rectangular case is padded with zero-weight dummies.  Works on
integer or float weights; the potentials version follows the classic
shortest augmenting path formulation.
"""

from __future__ import annotations

from typing import List, Sequence, Tuple


def min_cost_assignment(cost: Sequence[Sequence[float]]) -> List[int]:
    """Row i is assigned column result[i]; the matrix must be square."""
    n = len(cost)
    if n == 0:
        return []
    if any(len(r) != n for r in cost):
        raise ValueError("cost matrix must be square")
    inf = float("inf")
    u = [0.0] * (n + 1)
    v = [0.0] * (n + 1)
    p = [0] * (n + 1)  # p[j]: row matched to column j (1-based), 0 = free
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [inf] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = inf
            j1 = -1
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = cost[i0 - 1][j - 1] - u[i0] - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    out = [0] * n
    for j in range(1, n + 1):
        out[p[j] - 1] = j - 1
    return out


def max_weight_matching(weight: Sequence[Sequence[float]]) -> List[Tuple[int, int]]:
    """Pairs (row, col) of a maximum-weight assignment of a rows x cols
    matrix; every row or every column is covered."""
    rows = len(weight)
    cols = len(weight[0]) if rows else 0
    if rows == 0 or cols == 0:
        return []
    n = max(rows, cols)
    top = max(max(r) for r in weight)
    cost = [[(top - weight[i][j]) if i < rows and j < cols else top
             for j in range(n)] for i in range(n)]
    a = min_cost_assignment(cost)
    return [(i, a[i]) for i in range(rows) if a[i] < cols]


def matching_weight(weight, pairs) -> float:
    return sum(weight[i][j] for i, j in pairs)
