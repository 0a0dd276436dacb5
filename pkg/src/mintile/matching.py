"""Maximum matching in bipartite and general graphs.

Both routines are deterministic: vertices are scanned in ascending order and
adjacency lists are kept sorted, so equal inputs give equal matchings.
"""

from __future__ import annotations

from collections import deque
from typing import Sequence


def bipartite_matching(adj: Sequence[Sequence[int]], n_right: int) -> list[int]:
    """Maximum bipartite matching by repeated augmenting-path search.

    Args:
        adj: ``adj[u]`` lists the right vertices adjacent to left vertex ``u``.
        n_right: number of right vertices.

    Returns:
        ``match_left`` with ``match_left[u]`` the right partner of ``u`` or -1.
    """
    match_left = [-1] * len(adj)
    match_right = [-1] * n_right
    for root in range(len(adj)):
        # iterative DFS over alternating paths
        seen = [False] * n_right
        stack = [(root, 0)]
        parent_edge: list[tuple[int, int]] = []
        found = False
        while stack:
            u, i = stack[-1]
            nbrs = adj[u]
            if i >= len(nbrs):
                stack.pop()
                if parent_edge:
                    parent_edge.pop()
                continue
            stack[-1] = (u, i + 1)
            r = nbrs[i]
            if seen[r]:
                continue
            seen[r] = True
            parent_edge.append((u, r))
            if match_right[r] == -1:
                found = True
                break
            stack.append((match_right[r], 0))
        if found:
            for u, r in parent_edge:
                match_left[u] = r
                match_right[r] = u
    return match_left


def max_cardinality_matching(n: int, edges: Sequence[tuple[int, int]]) -> list[tuple[int, int]]:
    """Maximum-cardinality matching in a general graph (Edmonds' blossom method).

    Runs in O(V^3).  Returns matched pairs ``(a, b)`` with ``a < b`` in
    ascending order.
    """
    adj: list[list[int]] = [[] for _ in range(n)]
    for a, b in edges:
        if a == b:
            continue
        adj[a].append(b)
        adj[b].append(a)
    for lst in adj:
        lst.sort()

    match = [-1] * n

    def find_augmenting(root: int) -> list[int] | None:
        used = [False] * n
        parent = [-1] * n
        base = list(range(n))

        def lca(a: int, b: int) -> int:
            on_path = [False] * n
            while True:
                a = base[a]
                on_path[a] = True
                if match[a] == -1:
                    break
                a = parent[match[a]]
            while True:
                b = base[b]
                if on_path[b]:
                    return b
                b = parent[match[b]]

        def mark_path(v: int, b: int, child: int, in_blossom: list[bool]) -> None:
            while base[v] != b:
                in_blossom[base[v]] = in_blossom[base[match[v]]] = True
                parent[v] = child
                child = match[v]
                v = parent[match[v]]

        used[root] = True
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for to in adj[v]:
                if base[v] == base[to] or match[v] == to:
                    continue
                if to == root or (match[to] != -1 and parent[match[to]] != -1):
                    cur = lca(v, to)
                    in_blossom = [False] * n
                    mark_path(v, cur, to, in_blossom)
                    mark_path(to, cur, v, in_blossom)
                    for i in range(n):
                        if in_blossom[base[i]]:
                            base[i] = cur
                            if not used[i]:
                                used[i] = True
                                queue.append(i)
                elif parent[to] == -1:
                    parent[to] = v
                    if match[to] == -1:
                        return _unwind(parent, to)
                    used[match[to]] = True
                    queue.append(match[to])
        return None

    def _unwind(parent: list[int], end: int) -> list[int]:
        path = []
        v = end
        while v != -1:
            pv = parent[v]
            nxt = match[pv]
            path.append((v, pv))
            v = nxt
        return path

    for v in range(n):
        if match[v] == -1 and adj[v]:
            path = find_augmenting(v)
            if path:
                for a, b in path:
                    match[a] = b
                    match[b] = a
    return [(v, match[v]) for v in range(n) if match[v] > v]
