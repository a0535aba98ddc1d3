"""Progressive-edge-growth graph construction (numba-compiled core).

Each edge is placed on the check node that maximizes the local girth seen
from its variable node: unreachable checks first, otherwise checks at
maximal BFS depth.  Ties are broken by lowest current check degree, then
by a seeded LCG so construction is fully deterministic.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_LCG_MUL = np.uint64(6364136223846793005)
_LCG_ADD = np.uint64(1442695040888963407)


@njit(cache=True)
def _lcg_next(state):
    return state * _LCG_MUL + _LCG_ADD


@njit(cache=True)
def _pick_min_degree(cand, ncand, chk_deg, state):
    """Lowest-degree candidate; ties resolved by the LCG state."""
    best = 1 << 30
    for i in range(ncand):
        d = chk_deg[cand[i]]
        if d < best:
            best = d
    nties = 0
    for i in range(ncand):
        if chk_deg[cand[i]] == best:
            cand[nties] = cand[i]
            nties += 1
    state = _lcg_next(state)
    pick = cand[int((state >> np.uint64(33)) % np.uint64(nties))]
    return pick, state


@njit(cache=True)
def peg_construct(var_degree, m, cap, seed):  # pragma: no cover - exercised via build_code
    """Grow the bipartite graph edge by edge.

    var_degree: target degree per variable node (processed in index order).
    cap: per-check adjacency capacity.
    Returns (chk_adj, chk_deg) with chk_adj[c, :chk_deg[c]] the variables
    on check c.
    """
    n = var_degree.shape[0]
    max_vd = 0
    for i in range(n):
        if var_degree[i] > max_vd:
            max_vd = var_degree[i]
    chk_adj = np.full((m, cap), -1, np.int32)
    chk_deg = np.zeros(m, np.int32)
    var_adj = np.full((n, max_vd), -1, np.int32)
    var_deg = np.zeros(n, np.int32)

    chk_stamp = np.zeros(m, np.int64)
    var_stamp = np.zeros(n, np.int64)
    chk_depth = np.zeros(m, np.int32)
    order = np.empty(m, np.int32)      # checks in BFS discovery order
    frontier = np.empty(n, np.int32)   # variable frontier
    nxt = np.empty(n, np.int32)
    cand = np.empty(m, np.int32)
    token = np.int64(0)
    state = np.uint64(2 * seed + 1)

    for v in range(n):
        for t in range(var_degree[v]):
            ncand = 0
            if t == 0:
                for c in range(m):
                    if chk_deg[c] < cap:
                        cand[ncand] = c
                        ncand += 1
            else:
                token += 1
                var_stamp[v] = token
                frontier[0] = v
                nf = 1
                nreached = 0
                depth = 0
                while nf > 0 and nreached < m:
                    depth += 1
                    lo = nreached
                    for i in range(nf):
                        u = frontier[i]
                        for j in range(var_deg[u]):
                            c = var_adj[u, j]
                            if chk_stamp[c] != token:
                                chk_stamp[c] = token
                                chk_depth[c] = depth
                                order[nreached] = c
                                nreached += 1
                    if nreached == lo:
                        break
                    nn = 0
                    for i in range(lo, nreached):
                        c = order[i]
                        for j in range(chk_deg[c]):
                            u = chk_adj[c, j]
                            if var_stamp[u] != token:
                                var_stamp[u] = token
                                nxt[nn] = u
                                nn += 1
                    for i in range(nn):
                        frontier[i] = nxt[i]
                    nf = nn
                if nreached < m:
                    for c in range(m):
                        if chk_stamp[c] != token and chk_deg[c] < cap:
                            cand[ncand] = c
                            ncand += 1
                if ncand == 0:
                    # all checks reached: deepest ones close the longest cycle
                    dmax = chk_depth[order[nreached - 1]]
                    if dmax <= 1:
                        return chk_adj, chk_deg, -(v + 1)  # only direct neighbors left
                    for i in range(nreached):
                        c = order[i]
                        if chk_depth[c] == dmax and chk_deg[c] < cap:
                            cand[ncand] = c
                            ncand += 1
            if ncand == 0:
                return chk_adj, chk_deg, -(v + 1)
            pick, state = _pick_min_degree(cand, ncand, chk_deg, state)
            chk_adj[pick, chk_deg[pick]] = v
            chk_deg[pick] += 1
            var_adj[v, var_deg[v]] = pick
            var_deg[v] += 1
    return chk_adj, chk_deg, 1


@njit(cache=True)
def tanner_girth(chk_adj, chk_deg, var_adj, var_deg):  # pragma: no cover - exercised via LdpcCode.girth
    """Exact girth of the Tanner graph by BFS from every variable node.

    Returns the shortest cycle length in Tanner-graph edges (always even),
    or -1 if the graph is acyclic.
    """
    n = var_deg.shape[0]
    m = chk_deg.shape[0]
    best = 1 << 30
    chk_stamp = np.zeros(m, np.int64)
    var_stamp = np.zeros(n, np.int64)
    chk_from = np.empty(m, np.int32)   # root edge (first check hop) id
    var_from = np.empty(n, np.int32)
    order = np.empty(m, np.int32)
    nxt = np.empty(n, np.int32)
    token = np.int64(0)
    for v in range(n):
        # a cycle through v must use two distinct edges at v; label each BFS
        # branch by the first check hop and detect branch collisions
        token += 1
        var_stamp[v] = token
        nreached = 0
        for j in range(var_deg[v]):
            c = var_adj[v, j]
            if chk_stamp[c] == token:
                best = min(best, 2)  # parallel edge
                continue
            chk_stamp[c] = token
            chk_from[c] = j
            order[nreached] = c
            nreached += 1
        lo = 0
        depth = 1
        while lo < nreached and 4 * depth < best:
            hi = nreached
            nn = 0
            for i in range(lo, hi):
                c = order[i]
                for j in range(chk_deg[c]):
                    u = chk_adj[c, j]
                    if u == v:
                        continue
                    if var_stamp[u] == token:
                        if var_from[u] != chk_from[c]:
                            # two branches meet at u: cycle of 2*(2*depth)
                            cyc = 4 * depth
                            if cyc < best:
                                best = cyc
                        continue
                    var_stamp[u] = token
                    var_from[u] = chk_from[c]
                    nxt[nn] = u
                    nn += 1
            lo = hi
            for i in range(nn):
                u = nxt[i]
                for j in range(var_deg[u]):
                    c = var_adj[u, j]
                    if c >= 0:
                        if chk_stamp[c] == token:
                            if chk_from[c] != var_from[u]:
                                cyc = 4 * depth + 2
                                if cyc < best:
                                    best = cyc
                            continue
                        chk_stamp[c] = token
                        chk_from[c] = var_from[u]
                        order[nreached] = c
                        nreached += 1
            depth += 1
    if best == 1 << 30:
        return -1
    return best
