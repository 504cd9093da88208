"""Numba kernels on square grids given as ``adj[i, j, k]`` boolean arrays.

Direction k runs counterclockwise: 0 east, 1 north, 2 west, 3 south.
Vertex ids are ``i * side + j`` so id order equals lexicographic (x, y) order.
"""

import numpy as np
from numba import njit

DI = np.array([1, 0, -1, 0], dtype=np.int64)
DJ = np.array([0, 1, 0, -1], dtype=np.int64)


@njit(cache=True)
def bfs(adj, sources):
    """Graph distance to the nearest source; -1 when unreachable."""
    s = adj.shape[0]
    dist = np.full((s, s), -1, dtype=np.int32)
    queue = np.empty(s * s, dtype=np.int64)
    tail = 0
    for i in range(s):
        for j in range(s):
            if sources[i, j]:
                dist[i, j] = 0
                queue[tail] = i * s + j
                tail += 1
    head = 0
    while head < tail:
        u = queue[head]
        head += 1
        i = u // s
        j = u % s
        d = dist[i, j] + 1
        for k in range(4):
            if adj[i, j, k]:
                ni = i + DI[k]
                nj = j + DJ[k]
                if dist[ni, nj] < 0:
                    dist[ni, nj] = d
                    queue[tail] = ni * s + nj
                    tail += 1
    return dist


@njit(cache=True)
def reaches(adj, sources, targets):
    """True when some target is connected to some source."""
    s = adj.shape[0]
    seen = np.zeros((s, s), dtype=np.bool_)
    queue = np.empty(s * s, dtype=np.int64)
    tail = 0
    for i in range(s):
        for j in range(s):
            if sources[i, j]:
                if targets[i, j]:
                    return True
                seen[i, j] = True
                queue[tail] = i * s + j
                tail += 1
    head = 0
    while head < tail:
        u = queue[head]
        head += 1
        i = u // s
        j = u % s
        for k in range(4):
            if adj[i, j, k]:
                ni = i + DI[k]
                nj = j + DJ[k]
                if not seen[ni, nj]:
                    if targets[ni, nj]:
                        return True
                    seen[ni, nj] = True
                    queue[tail] = ni * s + nj
                    tail += 1
    return False


@njit(cache=True)
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@njit(cache=True)
def union_find_labels(adj):
    """Component labels; each label is the smallest vertex id of its component."""
    s = adj.shape[0]
    parent = np.arange(s * s)
    for i in range(s):
        for j in range(s):
            u = i * s + j
            for k in range(2):
                if adj[i, j, k]:
                    w = (i + DI[k]) * s + j + DJ[k]
                    ru = _find(parent, u)
                    rw = _find(parent, w)
                    if ru < rw:
                        parent[rw] = ru
                    elif rw < ru:
                        parent[ru] = rw
    labels = np.empty((s, s), dtype=np.int64)
    for u in range(s * s):
        labels[u // s, u % s] = _find(parent, u)
    return labels


@njit(cache=True)
def max_disjoint_paths(adj, sources, sinks, limit):
    """Vertex-disjoint source-to-sink paths by unit-capacity node-split augmentation.

    Returns (count, flow, through) where ``flow[i, j, k] == 1`` marks a used
    arc.  Stops early once ``limit`` paths are found.  Source and sink sets
    must be disjoint.
    """
    s = adj.shape[0]
    n = s * s
    flow = np.zeros((s, s, 4), dtype=np.int8)
    through = np.zeros((s, s), dtype=np.int8)
    used_src = np.zeros((s, s), dtype=np.int8)
    used_sink = np.zeros((s, s), dtype=np.int8)
    parent = np.empty(2 * n, dtype=np.int64)
    queue = np.empty(2 * n, dtype=np.int64)
    count = 0
    while count < limit:
        parent[:] = -2
        head = 0
        tail = 0
        for i in range(s):
            for j in range(s):
                if sources[i, j] and used_src[i, j] == 0:
                    st = 2 * (i * s + j)
                    parent[st] = -1
                    queue[tail] = st
                    tail += 1
        end = -1
        while head < tail:
            st = queue[head]
            head += 1
            u = st >> 1
            i = u // s
            j = u % s
            if st & 1 == 0:
                if through[i, j] == 0 and parent[st + 1] == -2:
                    parent[st + 1] = st
                    queue[tail] = st + 1
                    tail += 1
                for k in range(4):
                    ni = i + DI[k]
                    nj = j + DJ[k]
                    if 0 <= ni < s and 0 <= nj < s and flow[ni, nj, (k + 2) % 4] == 1:
                        nxt = 2 * (ni * s + nj) + 1
                        if parent[nxt] == -2:
                            parent[nxt] = st
                            queue[tail] = nxt
                            tail += 1
            else:
                if sinks[i, j] and used_sink[i, j] == 0:
                    end = st
                    break
                if through[i, j] == 1 and parent[st - 1] == -2:
                    parent[st - 1] = st
                    queue[tail] = st - 1
                    tail += 1
                for k in range(4):
                    if adj[i, j, k] and flow[i, j, k] == 0:
                        nxt = 2 * ((i + DI[k]) * s + j + DJ[k])
                        if parent[nxt] == -2:
                            parent[nxt] = st
                            queue[tail] = nxt
                            tail += 1
        if end < 0:
            break
        u = end >> 1
        used_sink[u // s, u % s] = 1
        st = end
        while parent[st] != -1:
            pr = parent[st]
            pu = pr >> 1
            cu = st >> 1
            pi, pj = pu // s, pu % s
            ci, cj = cu // s, cu % s
            if pu == cu:
                through[ci, cj] = 1 if (pr & 1) == 0 else 0
            elif pr & 1 == 1:
                for k in range(4):
                    if pi + DI[k] == ci and pj + DJ[k] == cj:
                        flow[pi, pj, k] = 1
            else:
                for k in range(4):
                    if ci + DI[k] == pi and cj + DJ[k] == pj:
                        flow[ci, cj, k] = 0
            st = pr
        u = st >> 1
        used_src[u // s, u % s] = 1
        count += 1
    return count, flow, through


@njit(cache=True)
def right_first_search(adj, start_i, start_j, start_order, targets):
    """Depth-first search that always tries the rightmost free turn first.

    ``start_order`` lists the directions to try at the start vertex.  At
    later vertices the order is right, straight, left relative to the
    direction of travel.  Returns the vertex ids of the search-tree path
    from the start to the first target reached, or an empty array.
    """
    s = adj.shape[0]
    start = start_i * s + start_j
    if targets[start_i, start_j]:
        out = np.empty(1, dtype=np.int64)
        out[0] = start
        return out
    seen = np.zeros((s, s), dtype=np.bool_)
    seen[start_i, start_j] = True
    stack = np.empty(s * s, dtype=np.int64)
    back = np.empty(s * s, dtype=np.int64)
    tried = np.zeros(s * s, dtype=np.int64)
    depth = 0
    stack[0] = start
    back[0] = -1
    while depth >= 0:
        u = stack[depth]
        t = tried[depth]
        if t >= 4 or (back[depth] >= 0 and t >= 3):
            depth -= 1
            continue
        tried[depth] = t + 1
        if back[depth] < 0:
            k = start_order[t]
        else:
            k = (back[depth] + 1 + t) % 4
        i = u // s
        j = u % s
        if not adj[i, j, k]:
            continue
        ni = i + DI[k]
        nj = j + DJ[k]
        if seen[ni, nj]:
            continue
        seen[ni, nj] = True
        depth += 1
        stack[depth] = ni * s + nj
        back[depth] = (k + 2) % 4
        tried[depth] = 0
        if targets[ni, nj]:
            return stack[: depth + 1].copy()
    return np.empty(0, dtype=np.int64)
