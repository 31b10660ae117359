"""Pure-python reference kernels.

These are the fallback implementations of the two scalar hot loops: the
transportation-problem network simplex and the decision-tree split
scan.  The compiled versions in ``_native.pyx`` are line-for-line
transcriptions; both must produce bitwise-identical results, so every
arithmetic step here is ordered deliberately.  Scores and counts use
integer arithmetic where possible and fixed-order float operations
elsewhere.
"""

from __future__ import annotations

import numpy as np

BACKEND = "pure"


def network_simplex(cost, supply, demand, max_iter, tol):
    """Solve a balanced transportation problem to optimality.

    Northwest-corner start, then primal simplex pivots on the basis
    tree.  Entering arc: first nonbasic cell in row-major order with
    reduced cost below ``-tol``.  Leaving arc: minimum allocation on
    the negative side of the pivot cycle, ties to the lexicographically
    smallest cell.

    Returns (plan, n_pivots, status) with status 0 when optimal and 1
    when the pivot budget ran out.
    """
    cost = np.ascontiguousarray(cost, dtype=np.float64)
    n, r = cost.shape
    nb = n + r - 1
    basis_i = np.zeros(nb, dtype=np.int64)
    basis_j = np.zeros(nb, dtype=np.int64)
    alloc = np.zeros(nb, dtype=np.float64)
    is_basic = np.zeros((n, r), dtype=np.int8)

    rem_s = np.asarray(supply, dtype=np.float64).copy()
    rem_d = np.asarray(demand, dtype=np.float64).copy()
    i = 0
    j = 0
    k = 0
    while True:
        basis_i[k] = i
        basis_j[k] = j
        a = rem_s[i] if rem_s[i] < rem_d[j] else rem_d[j]
        alloc[k] = a
        rem_s[i] -= a
        rem_d[j] -= a
        is_basic[i, j] = 1
        k += 1
        if k == nb:
            break
        if rem_s[i] == 0.0 and i < n - 1:
            i += 1
        elif j < r - 1:
            j += 1
        else:
            i += 1

    n_nodes = n + r
    pot = np.zeros(n_nodes, dtype=np.float64)
    known = np.zeros(n_nodes, dtype=np.int8)
    indptr = np.zeros(n_nodes + 1, dtype=np.int64)
    adj_edge = np.zeros(2 * nb, dtype=np.int64)
    adj_node = np.zeros(2 * nb, dtype=np.int64)
    cursor = np.zeros(n_nodes, dtype=np.int64)
    queue = np.zeros(n_nodes, dtype=np.int64)
    path_edges = np.zeros(n_nodes, dtype=np.int64)
    parent_edge = np.zeros(n_nodes, dtype=np.int64)
    parent_node = np.zeros(n_nodes, dtype=np.int64)

    pivots = 0
    status = 0
    while True:
        # adjacency of the current basis tree, entries in edge order
        indptr[:] = 0
        for k in range(nb):
            indptr[basis_i[k] + 1] += 1
            indptr[n + basis_j[k] + 1] += 1
        for p in range(n_nodes):
            indptr[p + 1] += indptr[p]
        for p in range(n_nodes):
            cursor[p] = indptr[p]
        for k in range(nb):
            a_node = basis_i[k]
            b_node = n + basis_j[k]
            adj_edge[cursor[a_node]] = k
            adj_node[cursor[a_node]] = b_node
            cursor[a_node] += 1
            adj_edge[cursor[b_node]] = k
            adj_node[cursor[b_node]] = a_node
            cursor[b_node] += 1

        # node potentials from u[0] = 0 by sweeping the tree
        for p in range(n_nodes):
            known[p] = 0
            pot[p] = 0.0
        known[0] = 1
        queue[0] = 0
        head = 0
        tail = 1
        while head < tail:
            p = queue[head]
            head += 1
            for s in range(indptr[p], indptr[p + 1]):
                q = adj_node[s]
                if not known[q]:
                    known[q] = 1
                    pot[q] = cost[basis_i[adj_edge[s]], basis_j[adj_edge[s]]] - pot[p]
                    queue[tail] = q
                    tail += 1

        # entering arc: first sufficiently negative reduced cost, row-major
        ie = -1
        je = -1
        for ii in range(n):
            for jj in range(r):
                if is_basic[ii, jj]:
                    continue
                if cost[ii, jj] - pot[ii] - pot[n + jj] < -tol:
                    ie = ii
                    je = jj
                    break
            if ie >= 0:
                break
        if ie < 0:
            break
        if pivots >= max_iter:
            status = 1
            break

        # tree path from the entering arc's column back to its row
        for p in range(n_nodes):
            parent_edge[p] = -1
        parent_node[ie] = ie
        parent_edge[ie] = -2
        queue[0] = ie
        head = 0
        tail = 1
        while head < tail:
            p = queue[head]
            head += 1
            if p == n + je:
                break
            for s in range(indptr[p], indptr[p + 1]):
                q = adj_node[s]
                if parent_edge[q] == -1:
                    parent_edge[q] = adj_edge[s]
                    parent_node[q] = p
                    queue[tail] = q
                    tail += 1
        p = n + je
        plen = 0
        while p != ie:
            path_edges[plen] = parent_edge[p]
            plen += 1
            p = parent_node[p]

        # theta and the leaving arc: smallest allocation on minus edges
        leave_slot = -1
        theta = 0.0
        for t in range(0, plen, 2):
            k = path_edges[t]
            if (
                leave_slot < 0
                or alloc[k] < theta
                or (
                    alloc[k] == theta
                    and (
                        basis_i[k] < basis_i[leave_slot]
                        or (
                            basis_i[k] == basis_i[leave_slot]
                            and basis_j[k] < basis_j[leave_slot]
                        )
                    )
                )
            ):
                leave_slot = k
                theta = alloc[k]

        for t in range(plen):
            k = path_edges[t]
            if t % 2 == 0:
                alloc[k] -= theta
            else:
                alloc[k] += theta
        is_basic[basis_i[leave_slot], basis_j[leave_slot]] = 0
        basis_i[leave_slot] = ie
        basis_j[leave_slot] = je
        alloc[leave_slot] = theta
        is_basic[ie, je] = 1
        pivots += 1

    plan = np.zeros((n, r), dtype=np.float64)
    for k in range(nb):
        if alloc[k] > 0.0:
            plan[basis_i[k], basis_j[k]] = alloc[k]
    return plan, pivots, status


def scan_split_classification(X, orders, y, n_classes, min_leaf):
    """Best axis-aligned split of columns of X by gini-style score.

    ``orders`` holds a stable ascending argsort of each column.  The
    score maximized is sum_c L_c^2 / |L| + sum_c R_c^2 / |R| with
    integer class counts, so backends agree bit-for-bit.  Splits fall
    between distinct consecutive values only; both sides must keep at
    least ``min_leaf`` samples.

    Returns (column, threshold, score, found).
    """
    m, q = X.shape
    best_col = -1
    best_thresh = 0.0
    best_score = -1.0
    left = np.zeros(n_classes, dtype=np.int64)
    right = np.zeros(n_classes, dtype=np.int64)
    for col in range(q):
        for c in range(n_classes):
            left[c] = 0
            right[c] = 0
        sr = 0
        for t in range(m):
            right[y[t]] += 1
        for c in range(n_classes):
            sr += right[c] * right[c]
        sl = 0
        for pos in range(m - 1):
            idx = orders[pos, col]
            c = y[idx]
            sl += 2 * left[c] + 1
            left[c] += 1
            sr -= 2 * right[c] - 1
            right[c] -= 1
            lo = X[idx, col]
            hi = X[orders[pos + 1, col], col]
            if lo == hi:
                continue
            nl = pos + 1
            nr = m - nl
            if nl < min_leaf or nr < min_leaf:
                continue
            score = float(sl) / float(nl) + float(sr) / float(nr)
            if score > best_score:
                best_score = score
                best_col = col
                best_thresh = (lo + hi) / 2.0
    return best_col, best_thresh, best_score, best_col >= 0


def scan_split_regression(X, orders, y, min_leaf):
    """Best split of columns of X by squared-sum variance proxy.

    Maximizes sum(L)^2/|L| + sum(R)^2/|R| over split points, which is
    equivalent to minimizing within-side squared error.  Prefix sums
    run in sorted order so float accumulation matches across backends.

    Returns (column, threshold, score, found).
    """
    m, q = X.shape
    best_col = -1
    best_thresh = 0.0
    best_score = -np.inf
    total = 0.0
    for t in range(m):
        total += y[t]
    for col in range(q):
        acc = 0.0
        for pos in range(m - 1):
            idx = orders[pos, col]
            acc += y[idx]
            lo = X[idx, col]
            hi = X[orders[pos + 1, col], col]
            if lo == hi:
                continue
            nl = pos + 1
            nr = m - nl
            if nl < min_leaf or nr < min_leaf:
                continue
            rest = total - acc
            score = acc * acc / float(nl) + rest * rest / float(nr)
            if score > best_score:
                best_score = score
                best_col = col
                best_thresh = (lo + hi) / 2.0
    return best_col, best_thresh, best_score, best_col >= 0
