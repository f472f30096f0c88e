"""Compiled hot loops: pairwise compatibility, cheapest compatible pairs,
pair graphs over a residual instance, probing, and branch-and-bound filtering.

All routines take the packed arrays as one tuple ``P`` (see
``PackedInstance.arrays``) plus ``caplim``, the capacity left for the pair
being tested.  ``INF`` marks "no admissible choice".
"""

from __future__ import annotations

import numba as nb
import numpy as np

from ._blossom import mwm_kernel

INF = np.int64(1 << 62)


@nb.njit(cache=True)
def fp_disjoint(a, b, P):
    fp = P[4]
    fwlo = P[5]
    fwhi = P[6]
    lo = max(fwlo[a], fwlo[b])
    hi = min(fwhi[a], fwhi[b])
    for w in range(lo, hi):
        if fp[a, w] & fp[b, w]:
            return False
    return True


@nb.njit(cache=True)
def fits(a, P, caplim):
    cptr = P[7]
    cidx = P[8]
    cval = P[9]
    for q in range(cptr[a], cptr[a + 1]):
        if cval[q] > caplim[cidx[q]]:
            return False
    return True


@nb.njit(cache=True)
def compat(a, b, P, caplim):
    if not fp_disjoint(a, b, P):
        return False
    cptr = P[7]
    cidx = P[8]
    cval = P[9]
    i = cptr[a]
    ie = cptr[a + 1]
    j = cptr[b]
    je = cptr[b + 1]
    # merge the two sorted usage rows; every touched resource must fit
    while i < ie or j < je:
        if j >= je or (i < ie and cidx[i] < cidx[j]):
            if cval[i] > caplim[cidx[i]]:
                return False
            i += 1
        elif i >= ie or cidx[j] < cidx[i]:
            if cval[j] > caplim[cidx[j]]:
                return False
            j += 1
        else:
            if cval[i] + cval[j] > caplim[cidx[i]]:
                return False
            i += 1
            j += 1
    return True


@nb.njit(cache=True)
def _ok(x, k, alive, stamp, okv, cur, P, caplim):
    # Memoised "x is usable": alive and, when k >= 0, compatible with k.
    if stamp[x] == cur:
        return okv[x]
    v = alive[x]
    if v and k >= 0:
        v = compat(x, k, P, caplim)
    stamp[x] = cur
    okv[x] = v
    return v


@nb.njit(cache=True)
def pair_min(i, j, k, alive, stamp, okv, cur, P, caplim):
    """Cheapest compatible (y_i, y_j) among usable assignments.

    Both per-task lists are sorted by cost, so the scan stops as soon as the
    current partial sum cannot beat the best pair found so far.
    """
    cost = P[0]
    order = P[2]
    tptr = P[3]
    minj = INF
    for q in range(tptr[j], tptr[j + 1]):
        b = order[q]
        if _ok(b, k, alive, stamp, okv, cur, P, caplim):
            minj = cost[b]
            break
    if minj == INF:
        return INF, -1, -1
    best = INF
    ba = -1
    bb = -1
    for p in range(tptr[i], tptr[i + 1]):
        a = order[p]
        ca = cost[a]
        if ca + minj >= best:
            break
        if not _ok(a, k, alive, stamp, okv, cur, P, caplim):
            continue
        for q in range(tptr[j], tptr[j + 1]):
            b = order[q]
            cb = cost[b]
            if ca + cb >= best:
                break
            if not _ok(b, k, alive, stamp, okv, cur, P, caplim):
                continue
            if compat(a, b, P, caplim):
                best = ca + cb
                ba = a
                bb = b
                break
    return best, ba, bb


@nb.njit(cache=True)
def first_ok(t, k, alive, stamp, okv, cur, P, caplim):
    cost = P[0]
    order = P[2]
    tptr = P[3]
    for q in range(tptr[t], tptr[t + 1]):
        a = order[q]
        if _ok(a, k, alive, stamp, okv, cur, P, caplim):
            return cost[a]
    return INF


@nb.njit(cache=True)
def g2_matrix(tasks, k, alive, caplim, P):
    """Edge weights of the pair graph over ``tasks`` (plus artificial column).

    Returns ``(W, art)``: ``W[x, y]`` is the cheapest compatible pair for
    tasks ``tasks[x]``, ``tasks[y]`` and ``art[x]`` the cheapest usable
    assignment of ``tasks[x]``; with ``k >= 0`` only choices compatible with
    assignment ``k`` are usable.
    """
    m = tasks.shape[0]
    na = P[0].shape[0]
    stamp = np.zeros(na, np.int64)
    okv = np.zeros(na, np.bool_)
    W = np.full((m, m), INF, np.int64)
    art = np.full(m, INF, np.int64)
    for x in range(m):
        art[x] = first_ok(tasks[x], k, alive, stamp, okv, 1, P, caplim)
    for x in range(m):
        for y in range(x + 1, m):
            w, _a, _b = pair_min(tasks[x], tasks[y], k, alive, stamp, okv, 1, P, caplim)
            W[x, y] = w
            W[y, x] = w
    return W, art


@nb.njit(cache=True)
def g2_argmin(alive, caplim, P, n):
    """Full pair graph over all tasks with the arg-min pair of every edge."""
    na = P[0].shape[0]
    stamp = np.zeros(na, np.int64)
    okv = np.zeros(na, np.bool_)
    W = np.full((n, n), INF, np.int64)
    pa = np.full((n, n), -1, np.int64)
    pb = np.full((n, n), -1, np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            w, a, b = pair_min(i, j, -1, alive, stamp, okv, 1, P, caplim)
            W[i, j] = w
            W[j, i] = w
            pa[i, j] = a
            pb[i, j] = b
            pa[j, i] = b
            pb[j, i] = a
    return W, pa, pb


@nb.njit(cache=True)
def dense_mwm(W, art, m):
    """Max-weight matching value on the complete graph given by ``W``/``art``.

    An artificial vertex joined by ``art`` weights is added when ``m`` is odd.
    Zero-weight edges never change the optimum and are skipped.
    """
    nv = m + (m & 1)
    cnt = 0
    for x in range(m):
        for y in range(x + 1, m):
            if W[x, y] > 0:
                cnt += 1
        if m & 1 and art[x] > 0:
            cnt += 1
    eu = np.empty(cnt, np.int64)
    ev = np.empty(cnt, np.int64)
    ew = np.empty(cnt, np.int64)
    e = 0
    for x in range(m):
        for y in range(x + 1, m):
            if W[x, y] > 0:
                eu[e] = x
                ev[e] = y
                ew[e] = W[x, y]
                e += 1
        if m & 1 and art[x] > 0:
            eu[e] = x
            ev[e] = m
            ew[e] = art[x]
            e += 1
    mate = mwm_kernel(nv, eu, ev, ew)
    total = 0
    for e in range(cnt):
        if mate[eu[e]] == ev[e]:
            total += ew[e]
    return total


@nb.njit(cache=True)
def residual_bound(tasks, alive, caplim, P):
    """Pair-graph matching bound over ``tasks`` restricted to ``alive``.

    Returns INF as soon as a task has no usable assignment or a pair of
    tasks has no compatible pair.
    """
    m = tasks.shape[0]
    if m == 0:
        return 0
    na = P[0].shape[0]
    stamp = np.zeros(na, np.int64)
    okv = np.zeros(na, np.bool_)
    art = np.empty(m, np.int64)
    for x in range(m):
        art[x] = first_ok(tasks[x], -1, alive, stamp, okv, 1, P, caplim)
        if art[x] == INF:
            return INF
    W = np.zeros((m, m), np.int64)
    for x in range(m):
        for y in range(x + 1, m):
            w, _a, _b = pair_min(tasks[x], tasks[y], -1, alive, stamp, okv, 1, P, caplim)
            if w == INF:
                return INF
            W[x, y] = w
            W[y, x] = w
    return dense_mwm(W, art, m)


@nb.njit(cache=True)
def residual_trivial(tasks, alive, P):
    cost = P[0]
    order = P[2]
    tptr = P[3]
    total = 0
    for x in range(tasks.shape[0]):
        t = tasks[x]
        best = INF
        for q in range(tptr[t], tptr[t + 1]):
            a = order[q]
            if alive[a]:
                best = cost[a]
                break
        if best == INF:
            return INF
        total += best
    return total


@nb.njit(cache=True)
def probe_many(ks, alive, caplim, P, n, c2, pa, pb):
    """``cost(k)`` plus the pair-graph bound with assignment ``k`` fixed, per k.

    ``c2``/``pa``/``pb`` come from :func:`g2_argmin` on the same ``alive`` and
    ``caplim``.  An edge whose cached arg-min pair is still usable under k
    keeps its unrestricted weight (restriction can only raise it), so only
    the edges that k actually disturbs are rescanned.
    """
    cost = P[0]
    task = P[1]
    na = cost.shape[0]
    out = np.empty(ks.shape[0], np.int64)
    stamp = np.zeros(na, np.int64)
    okv = np.zeros(na, np.bool_)
    rem = np.empty(max(n - 1, 1), np.int64)
    W = np.zeros((max(n - 1, 1), max(n - 1, 1)), np.int64)
    art = np.empty(max(n - 1, 1), np.int64)
    cur = 0
    for idx in range(ks.shape[0]):
        k = ks[idx]
        cur += 1
        tk = task[k]
        m = 0
        for t in range(n):
            if t != tk:
                rem[m] = t
                m += 1
        if not alive[k] or not fits(k, P, caplim):
            out[idx] = INF
            continue
        if m == 0:
            out[idx] = cost[k]
            continue
        dead = False
        for x in range(m):
            art[x] = first_ok(rem[x], k, alive, stamp, okv, cur, P, caplim)
            if art[x] == INF:
                dead = True
                break
        if not dead:
            for x in range(m):
                i = rem[x]
                for y in range(x + 1, m):
                    j = rem[y]
                    a = pa[i, j]
                    b = pb[i, j]
                    if a >= 0 and _ok(a, k, alive, stamp, okv, cur, P, caplim) and _ok(
                        b, k, alive, stamp, okv, cur, P, caplim
                    ):
                        w = c2[i, j]
                    else:
                        w, _a, _b = pair_min(i, j, k, alive, stamp, okv, cur, P, caplim)
                    if w == INF:
                        dead = True
                        break
                    W[x, y] = w
                    W[y, x] = w
                if dead:
                    break
        if dead:
            out[idx] = INF
        else:
            out[idx] = cost[k] + dense_mwm(W, art, m)
    return out


@nb.njit(cache=True)
def refine(alive, a, remflag, P, caplim_after):
    """Alive mask after fixing ``a``: drop footprint clashes and capacity overflows."""
    task = P[1]
    order = P[2]
    tptr = P[3]
    new = alive.copy()
    for t in range(remflag.shape[0]):
        if not remflag[t]:
            continue
        for q in range(tptr[t], tptr[t + 1]):
            x = order[q]
            if new[x]:
                if not fp_disjoint(x, a, P) or not fits(x, P, caplim_after):
                    new[x] = False
    # the fixed task keeps only its chosen assignment
    t = task[a]
    for q in range(tptr[t], tptr[t + 1]):
        x = order[q]
        new[x] = x == a
    return new
