# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: transcriptions of the pure-python versions in
``_py.py``.  The two implementations must stay in lockstep; any change
here needs the same change there.  Arithmetic order is part of the
contract (results are compared bitwise in tests)."""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "native"


def network_simplex(cost, supply, demand, long max_iter, double tol):
    cost = np.ascontiguousarray(cost, dtype=np.float64)
    cdef double[:, ::1] C = cost
    cdef Py_ssize_t n = C.shape[0]
    cdef Py_ssize_t r = C.shape[1]
    cdef Py_ssize_t nb = n + r - 1
    cdef Py_ssize_t n_nodes = n + r

    basis_i_arr = np.zeros(nb, dtype=np.int64)
    basis_j_arr = np.zeros(nb, dtype=np.int64)
    alloc_arr = np.zeros(nb, dtype=np.float64)
    is_basic_arr = np.zeros((n, r), dtype=np.int8)
    cdef cnp.int64_t[::1] basis_i = basis_i_arr
    cdef cnp.int64_t[::1] basis_j = basis_j_arr
    cdef double[::1] alloc = alloc_arr
    cdef signed char[:, ::1] is_basic = is_basic_arr

    rem_s_arr = np.asarray(supply, dtype=np.float64).copy()
    rem_d_arr = np.asarray(demand, dtype=np.float64).copy()
    cdef double[::1] rem_s = rem_s_arr
    cdef double[::1] rem_d = rem_d_arr

    cdef Py_ssize_t i = 0, j = 0, k = 0
    cdef double a
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

    pot_arr = np.zeros(n_nodes, dtype=np.float64)
    known_arr = np.zeros(n_nodes, dtype=np.int8)
    indptr_arr = np.zeros(n_nodes + 1, dtype=np.int64)
    adj_edge_arr = np.zeros(2 * nb, dtype=np.int64)
    adj_node_arr = np.zeros(2 * nb, dtype=np.int64)
    cursor_arr = np.zeros(n_nodes, dtype=np.int64)
    queue_arr = np.zeros(n_nodes, dtype=np.int64)
    path_edges_arr = np.zeros(n_nodes, dtype=np.int64)
    parent_edge_arr = np.zeros(n_nodes, dtype=np.int64)
    parent_node_arr = np.zeros(n_nodes, dtype=np.int64)
    cdef double[::1] pot = pot_arr
    cdef signed char[::1] known = known_arr
    cdef cnp.int64_t[::1] indptr = indptr_arr
    cdef cnp.int64_t[::1] adj_edge = adj_edge_arr
    cdef cnp.int64_t[::1] adj_node = adj_node_arr
    cdef cnp.int64_t[::1] cursor = cursor_arr
    cdef cnp.int64_t[::1] queue = queue_arr
    cdef cnp.int64_t[::1] path_edges = path_edges_arr
    cdef cnp.int64_t[::1] parent_edge = parent_edge_arr
    cdef cnp.int64_t[::1] parent_node = parent_node_arr

    cdef cnp.int64_t pivots = 0
    cdef int status = 0
    cdef Py_ssize_t p, q, s, head, tail, ii, jj, ie, je, plen, t, leave_slot
    cdef cnp.int64_t a_node, b_node, kk
    cdef double theta

    while True:
        for p in range(n_nodes + 1):
            indptr[p] = 0
        for kk in range(nb):
            indptr[basis_i[kk] + 1] += 1
            indptr[n + basis_j[kk] + 1] += 1
        for p in range(n_nodes):
            indptr[p + 1] += indptr[p]
        for p in range(n_nodes):
            cursor[p] = indptr[p]
        for kk in range(nb):
            a_node = basis_i[kk]
            b_node = n + basis_j[kk]
            adj_edge[cursor[a_node]] = kk
            adj_node[cursor[a_node]] = b_node
            cursor[a_node] += 1
            adj_edge[cursor[b_node]] = kk
            adj_node[cursor[b_node]] = a_node
            cursor[b_node] += 1

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
                    pot[q] = C[basis_i[adj_edge[s]], basis_j[adj_edge[s]]] - pot[p]
                    queue[tail] = q
                    tail += 1

        ie = -1
        je = -1
        for ii in range(n):
            for jj in range(r):
                if is_basic[ii, jj]:
                    continue
                if C[ii, jj] - pot[ii] - pot[n + jj] < -tol:
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

        leave_slot = -1
        theta = 0.0
        for t in range(0, plen, 2):
            kk = path_edges[t]
            if (
                leave_slot < 0
                or alloc[kk] < theta
                or (
                    alloc[kk] == theta
                    and (
                        basis_i[kk] < basis_i[leave_slot]
                        or (
                            basis_i[kk] == basis_i[leave_slot]
                            and basis_j[kk] < basis_j[leave_slot]
                        )
                    )
                )
            ):
                leave_slot = kk
                theta = alloc[kk]

        for t in range(plen):
            kk = path_edges[t]
            if t % 2 == 0:
                alloc[kk] -= theta
            else:
                alloc[kk] += theta
        is_basic[basis_i[leave_slot], basis_j[leave_slot]] = 0
        basis_i[leave_slot] = ie
        basis_j[leave_slot] = je
        alloc[leave_slot] = theta
        is_basic[ie, je] = 1
        pivots += 1

    plan_arr = np.zeros((n, r), dtype=np.float64)
    cdef double[:, ::1] plan = plan_arr
    for kk in range(nb):
        if alloc[kk] > 0.0:
            plan[basis_i[kk], basis_j[kk]] = alloc[kk]
    return plan_arr, pivots, status


def scan_split_classification(double[:, ::1] X, cnp.int64_t[:, ::1] orders,
                              cnp.int64_t[::1] y, long n_classes, long min_leaf):
    cdef Py_ssize_t m = X.shape[0]
    cdef Py_ssize_t q = X.shape[1]
    cdef Py_ssize_t best_col = -1
    cdef double best_thresh = 0.0
    cdef double best_score = -1.0
    left_arr = np.zeros(n_classes, dtype=np.int64)
    right_arr = np.zeros(n_classes, dtype=np.int64)
    cdef cnp.int64_t[::1] left = left_arr
    cdef cnp.int64_t[::1] right = right_arr
    cdef Py_ssize_t col, pos, t, idx, nl, nr
    cdef cnp.int64_t c, sl, sr
    cdef double lo, hi, score
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
            score = (<double>sl) / (<double>nl) + (<double>sr) / (<double>nr)
            if score > best_score:
                best_score = score
                best_col = col
                best_thresh = (lo + hi) / 2.0
    return best_col, best_thresh, best_score, best_col >= 0


def scan_split_regression(double[:, ::1] X, cnp.int64_t[:, ::1] orders,
                          double[::1] y, long min_leaf):
    cdef Py_ssize_t m = X.shape[0]
    cdef Py_ssize_t q = X.shape[1]
    cdef Py_ssize_t best_col = -1
    cdef double best_thresh = 0.0
    cdef double best_score = -np.inf
    cdef double total = 0.0
    cdef double acc, lo, hi, score, rest
    cdef Py_ssize_t col, pos, t, idx, nl, nr
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
            score = acc * acc / (<double>nl) + rest * rest / (<double>nr)
            if score > best_score:
                best_score = score
                best_col = col
                best_thresh = (lo + hi) / 2.0
    return best_col, best_thresh, best_score, best_col >= 0
