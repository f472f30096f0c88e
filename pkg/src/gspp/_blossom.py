"""Compiled kernel for maximum-weight matching in general graphs.

This is the O(n**3) primal-dual blossom method (Edmonds, with Galil's
bookkeeping), written against flat integer arrays so numba can compile it.
Weights must be integers; the usual doubling (slack = u_i + u_j - 2 w_ij)
keeps every dual variable integral, so results are exact.

Blossom child lists live in fixed-width rows of 2-D arrays; Python-style
negative positions into those rows go through ``_wrap``.
"""

from __future__ import annotations

import numba as nb
import numpy as np


@nb.njit(cache=True)
def _wrap(j, n):
    if j < 0:
        return j + n
    return j


@nb.njit(cache=True)
def mwm_kernel(nv, eu, ev, ew):
    """Return ``mate`` (partner vertex or -1) of a maximum-weight matching.

    ``eu``, ``ev``, ``ew`` are int64 arrays describing the edges; there must be
    no self-loops and no parallel edges.
    """
    ne = eu.shape[0]
    mate = np.full(nv, -1, np.int64)
    if ne == 0 or nv == 0:
        return mate

    maxweight = 0
    for k in range(ne):
        if ew[k] > maxweight:
            maxweight = ew[k]

    endpoint = np.empty(2 * ne, np.int64)
    ptr = np.zeros(nv + 1, np.int64)
    for k in range(ne):
        endpoint[2 * k] = eu[k]
        endpoint[2 * k + 1] = ev[k]
        ptr[eu[k] + 1] += 1
        ptr[ev[k] + 1] += 1
    for i in range(nv):
        ptr[i + 1] += ptr[i]
    fill = ptr[:nv].copy()
    neighbend = np.empty(2 * ne, np.int64)
    for k in range(ne):
        i = eu[k]
        j = ev[k]
        neighbend[fill[i]] = 2 * k + 1
        fill[i] += 1
        neighbend[fill[j]] = 2 * k
        fill[j] += 1

    n2 = 2 * nv
    label = np.zeros(n2, np.int64)
    labelend = np.full(n2, -1, np.int64)
    inblossom = np.arange(nv)
    blossomparent = np.full(n2, -1, np.int64)
    childs = np.full((n2, nv), -1, np.int64)
    endps = np.full((n2, nv), -1, np.int64)
    nchilds = np.zeros(n2, np.int64)
    blossombase = np.full(n2, -1, np.int64)
    for v in range(nv):
        blossombase[v] = v
    bestedge = np.full(n2, -1, np.int64)
    # nbbe[b] == -1 stands for "no stored list"
    bbe = np.full((n2, n2), -1, np.int64)
    nbbe = np.full(n2, -1, np.int64)
    unused = np.empty(nv, np.int64)
    for i in range(nv):
        unused[i] = nv + i
    counters = np.zeros(2, np.int64)  # [0]: unused stack size, [1]: queue size
    counters[0] = nv
    dualvar = np.zeros(n2, np.int64)
    for v in range(nv):
        dualvar[v] = maxweight
    allowedge = np.zeros(ne, np.bool_)
    queue = np.empty(2 * n2 + 4, np.int64)
    leafbuf = np.empty(nv, np.int64)
    leafbuf2 = np.empty(nv, np.int64)
    lstack = np.empty(2 * n2 + 2, np.int64)
    bestedgeto = np.full(n2, -1, np.int64)
    tmp = np.empty(nv, np.int64)
    # explicit frames for the nested blossom augmentation
    fb = np.empty(n2 + 1, np.int64)
    fv = np.empty(n2 + 1, np.int64)
    fi = np.empty(n2 + 1, np.int64)
    fj = np.empty(n2 + 1, np.int64)
    fstep = np.empty(n2 + 1, np.int64)
    ftrick = np.empty(n2 + 1, np.int64)
    fphase = np.empty(n2 + 1, np.int64)
    fp = np.empty(n2 + 1, np.int64)
    xstack = np.empty(n2 + 1, np.int64)

    def slack(k):
        return dualvar[eu[k]] + dualvar[ev[k]] - 2 * ew[k]

    def leaves(b, out):
        if b < nv:
            out[0] = b
            return 1
        cnt = 0
        top = 1
        lstack[0] = b
        while top > 0:
            top -= 1
            x = lstack[top]
            if x < nv:
                out[cnt] = x
                cnt += 1
            else:
                for c in range(nchilds[x] - 1, -1, -1):
                    lstack[top] = childs[x, c]
                    top += 1
        return cnt

    def push(v):
        queue[counters[1]] = v
        counters[1] += 1

    def assign_label(w, t, p):
        while True:
            b = inblossom[w]
            label[w] = t
            label[b] = t
            labelend[w] = p
            labelend[b] = p
            bestedge[w] = -1
            bestedge[b] = -1
            if t == 1:
                cnt = leaves(b, leafbuf)
                for i in range(cnt):
                    push(leafbuf[i])
                return
            mb = mate[blossombase[b]]
            w = endpoint[mb]
            t = 1
            p = mb ^ 1

    def scan_blossom(v, w):
        # Trace back from v and w to find a common base (new blossom) or
        # conclude there is an augmenting path (returns -1).
        npath = 0
        base = -1
        while v != -1 or w != -1:
            b = inblossom[v]
            if label[b] & 4:
                base = blossombase[b]
                break
            tmp[npath] = b
            npath += 1
            label[b] = 5
            if labelend[b] == -1:
                v = -1
            else:
                v = endpoint[labelend[b]]
                b = inblossom[v]
                v = endpoint[labelend[b]]
            if w != -1:
                v, w = w, v
        for i in range(npath):
            label[tmp[i]] = 1
        return base

    def add_blossom(base, k):
        v = eu[k]
        w = ev[k]
        bb = inblossom[base]
        bv = inblossom[v]
        bw = inblossom[w]
        counters[0] -= 1
        b = unused[counters[0]]
        blossombase[b] = base
        blossomparent[b] = -1
        blossomparent[bb] = b
        n = 0
        while bv != bb:
            blossomparent[bv] = b
            childs[b, n] = bv
            endps[b, n] = labelend[bv]
            n += 1
            v = endpoint[labelend[bv]]
            bv = inblossom[v]
        childs[b, n] = bb
        n += 1
        # reverse the path (childs has n entries, endps has n-1)
        for i in range(n // 2):
            t = childs[b, i]
            childs[b, i] = childs[b, n - 1 - i]
            childs[b, n - 1 - i] = t
        m = n - 1
        for i in range(m // 2):
            t = endps[b, i]
            endps[b, i] = endps[b, m - 1 - i]
            endps[b, m - 1 - i] = t
        endps[b, m] = 2 * k
        m += 1
        while bw != bb:
            blossomparent[bw] = b
            childs[b, n] = bw
            n += 1
            endps[b, m] = labelend[bw] ^ 1
            m += 1
            w = endpoint[labelend[bw]]
            bw = inblossom[w]
        nchilds[b] = n
        label[b] = 1
        labelend[b] = labelend[bb]
        dualvar[b] = 0
        cnt = leaves(b, leafbuf)
        for i in range(cnt):
            x = leafbuf[i]
            if label[inblossom[x]] == 2:
                push(x)
            inblossom[x] = b
        for i in range(n2):
            bestedgeto[i] = -1
        for ci in range(n):
            bv = childs[b, ci]
            if nbbe[bv] == -1:
                cnt = leaves(bv, leafbuf2)
                for li in range(cnt):
                    x = leafbuf2[li]
                    for q in range(ptr[x], ptr[x + 1]):
                        kk = neighbend[q] // 2
                        i = eu[kk]
                        j = ev[kk]
                        if inblossom[j] == b:
                            i, j = j, i
                        bj = inblossom[j]
                        if bj != b and label[bj] == 1 and (
                            bestedgeto[bj] == -1 or slack(kk) < slack(bestedgeto[bj])
                        ):
                            bestedgeto[bj] = kk
            else:
                for q in range(nbbe[bv]):
                    kk = bbe[bv, q]
                    i = eu[kk]
                    j = ev[kk]
                    if inblossom[j] == b:
                        i, j = j, i
                    bj = inblossom[j]
                    if bj != b and label[bj] == 1 and (
                        bestedgeto[bj] == -1 or slack(kk) < slack(bestedgeto[bj])
                    ):
                        bestedgeto[bj] = kk
            nbbe[bv] = -1
            bestedge[bv] = -1
        cnt = 0
        for i in range(n2):
            if bestedgeto[i] != -1:
                bbe[b, cnt] = bestedgeto[i]
                cnt += 1
        nbbe[b] = cnt
        bestedge[b] = -1
        for i in range(cnt):
            kk = bbe[b, i]
            if bestedge[b] == -1 or slack(kk) < slack(bestedge[b]):
                bestedge[b] = kk

    def release(b):
        label[b] = -1
        labelend[b] = -1
        nchilds[b] = 0
        blossombase[b] = -1
        nbbe[b] = -1
        bestedge[b] = -1
        unused[counters[0]] = b
        counters[0] += 1

    def expand_blossom(b, endstage):
        if endstage:
            # zero-dual sub-blossoms are expanded too; no relabelling needed
            top = 1
            xstack[0] = b
            while top > 0:
                top -= 1
                x = xstack[top]
                for ci in range(nchilds[x]):
                    s = childs[x, ci]
                    blossomparent[s] = -1
                    if s < nv:
                        inblossom[s] = s
                    elif dualvar[s] == 0:
                        xstack[top] = s
                        top += 1
                    else:
                        cnt = leaves(s, leafbuf)
                        for li in range(cnt):
                            inblossom[leafbuf[li]] = s
                release(x)
            return
        for ci in range(nchilds[b]):
            s = childs[b, ci]
            blossomparent[s] = -1
            if s < nv:
                inblossom[s] = s
            else:
                cnt = leaves(s, leafbuf)
                for li in range(cnt):
                    inblossom[leafbuf[li]] = s
        if label[b] == 2:
            nch = nchilds[b]
            entrychild = inblossom[endpoint[labelend[b] ^ 1]]
            j = 0
            while childs[b, j] != entrychild:
                j += 1
            if j & 1:
                j -= nch
                jstep = 1
                endptrick = 0
            else:
                jstep = -1
                endptrick = 1
            p = labelend[b]
            while j != 0:
                label[endpoint[p ^ 1]] = 0
                label[endpoint[endps[b, _wrap(j - endptrick, nch)] ^ endptrick ^ 1]] = 0
                assign_label(endpoint[p ^ 1], 2, p)
                allowedge[endps[b, _wrap(j - endptrick, nch)] // 2] = True
                j += jstep
                p = endps[b, _wrap(j - endptrick, nch)] ^ endptrick
                allowedge[p // 2] = True
                j += jstep
            bv = childs[b, _wrap(j, nch)]
            label[endpoint[p ^ 1]] = 2
            label[bv] = 2
            labelend[endpoint[p ^ 1]] = p
            labelend[bv] = p
            bestedge[bv] = -1
            j += jstep
            while childs[b, _wrap(j, nch)] != entrychild:
                bv = childs[b, _wrap(j, nch)]
                if label[bv] == 1:
                    j += jstep
                    continue
                cnt = leaves(bv, leafbuf)
                found = -1
                for li in range(cnt):
                    if label[leafbuf[li]] != 0:
                        found = leafbuf[li]
                        break
                if found != -1:
                    label[found] = 0
                    label[endpoint[mate[blossombase[bv]]]] = 0
                    assign_label(found, 2, labelend[found])
                j += jstep
        release(b)

    def augment_blossom(b0, v0):
        # Iterative form of the nested blossom augmentation. Frame phases:
        # 0 locate child, 1 set up path walk, 2 step, 3 second half-step,
        # 4 flip the matched pair.
        top = 0
        fb[0] = b0
        fv[0] = v0
        fphase[0] = 0
        while top >= 0:
            b = fb[top]
            ph = fphase[top]
            if ph == 0:
                t = fv[top]
                while blossomparent[t] != b:
                    t = blossomparent[t]
                fi[top] = t
                fphase[top] = 1
                if t >= nv:
                    top += 1
                    fb[top] = t
                    fv[top] = fv[top - 1]
                    fphase[top] = 0
                continue
            nch = nchilds[b]
            if ph == 1:
                t = fi[top]
                i = 0
                while childs[b, i] != t:
                    i += 1
                fi[top] = i
                if i & 1:
                    fj[top] = i - nch
                    fstep[top] = 1
                    ftrick[top] = 0
                else:
                    fj[top] = i
                    fstep[top] = -1
                    ftrick[top] = 1
                fphase[top] = 2
                continue
            if ph == 2:
                j = fj[top]
                if j == 0:
                    i = fi[top]
                    for q in range(nch):
                        tmp[q] = childs[b, (i + q) % nch]
                    for q in range(nch):
                        childs[b, q] = tmp[q]
                    for q in range(nch):
                        tmp[q] = endps[b, (i + q) % nch]
                    for q in range(nch):
                        endps[b, q] = tmp[q]
                    blossombase[b] = blossombase[childs[b, 0]]
                    top -= 1
                    continue
                j += fstep[top]
                t = childs[b, _wrap(j, nch)]
                p = endps[b, _wrap(j - ftrick[top], nch)] ^ ftrick[top]
                fj[top] = j
                fp[top] = p
                fphase[top] = 3
                if t >= nv:
                    top += 1
                    fb[top] = t
                    fv[top] = endpoint[p]
                    fphase[top] = 0
                continue
            if ph == 3:
                j = fj[top] + fstep[top]
                p = fp[top]
                t = childs[b, _wrap(j, nch)]
                fj[top] = j
                fphase[top] = 4
                if t >= nv:
                    top += 1
                    fb[top] = t
                    fv[top] = endpoint[p ^ 1]
                    fphase[top] = 0
                continue
            p = fp[top]
            mate[endpoint[p]] = p ^ 1
            mate[endpoint[p ^ 1]] = p
            fphase[top] = 2

    def augment_matching(k):
        for side in range(2):
            if side == 0:
                s = eu[k]
                p = 2 * k + 1
            else:
                s = ev[k]
                p = 2 * k
            while True:
                bs = inblossom[s]
                if bs >= nv:
                    augment_blossom(bs, s)
                mate[s] = p
                if labelend[bs] == -1:
                    break
                t = endpoint[labelend[bs]]
                bt = inblossom[t]
                s = endpoint[labelend[bt]]
                j = endpoint[labelend[bt] ^ 1]
                if bt >= nv:
                    augment_blossom(bt, j)
                mate[j] = labelend[bt]
                p = labelend[bt] ^ 1

    for _stage in range(nv):
        for i in range(n2):
            label[i] = 0
            bestedge[i] = -1
        for i in range(nv, n2):
            nbbe[i] = -1
        for i in range(ne):
            allowedge[i] = False
        counters[1] = 0
        for v in range(nv):
            if mate[v] == -1 and label[inblossom[v]] == 0:
                assign_label(v, 1, -1)
        augmented = False
        while True:
            while counters[1] > 0 and not augmented:
                counters[1] -= 1
                v = queue[counters[1]]
                for q in range(ptr[v], ptr[v + 1]):
                    p = neighbend[q]
                    k = p // 2
                    w = endpoint[p]
                    if inblossom[v] == inblossom[w]:
                        continue
                    kslack = 0
                    if not allowedge[k]:
                        kslack = slack(k)
                        if kslack <= 0:
                            allowedge[k] = True
                    if allowedge[k]:
                        if label[inblossom[w]] == 0:
                            assign_label(w, 2, p ^ 1)
                        elif label[inblossom[w]] == 1:
                            base = scan_blossom(v, w)
                            if base >= 0:
                                add_blossom(base, k)
                            else:
                                augment_matching(k)
                                augmented = True
                                break
                        elif label[w] == 0:
                            label[w] = 2
                            labelend[w] = p ^ 1
                    elif label[inblossom[w]] == 1:
                        b = inblossom[v]
                        if bestedge[b] == -1 or kslack < slack(bestedge[b]):
                            bestedge[b] = k
                    elif label[w] == 0:
                        if bestedge[w] == -1 or kslack < slack(bestedge[w]):
                            bestedge[w] = k
            if augmented:
                break

            deltatype = 1
            delta = dualvar[0]
            for v in range(1, nv):
                if dualvar[v] < delta:
                    delta = dualvar[v]
            deltaedge = -1
            deltablossom = -1
            for v in range(nv):
                if label[inblossom[v]] == 0 and bestedge[v] != -1:
                    d = slack(bestedge[v])
                    if d < delta:
                        delta = d
                        deltatype = 2
                        deltaedge = bestedge[v]
            for b in range(n2):
                if blossomparent[b] == -1 and label[b] == 1 and bestedge[b] != -1:
                    d = slack(bestedge[b]) // 2
                    if d < delta:
                        delta = d
                        deltatype = 3
                        deltaedge = bestedge[b]
            for b in range(nv, n2):
                if (
                    blossombase[b] >= 0
                    and blossomparent[b] == -1
                    and label[b] == 2
                    and dualvar[b] < delta
                ):
                    delta = dualvar[b]
                    deltatype = 4
                    deltablossom = b

            for v in range(nv):
                lb = label[inblossom[v]]
                if lb == 1:
                    dualvar[v] -= delta
                elif lb == 2:
                    dualvar[v] += delta
            for b in range(nv, n2):
                if blossombase[b] >= 0 and blossomparent[b] == -1:
                    if label[b] == 1:
                        dualvar[b] += delta
                    elif label[b] == 2:
                        dualvar[b] -= delta

            if deltatype == 1:
                break
            elif deltatype == 2:
                allowedge[deltaedge] = True
                i = eu[deltaedge]
                j = ev[deltaedge]
                if label[inblossom[i]] == 0:
                    i, j = j, i
                push(i)
            elif deltatype == 3:
                allowedge[deltaedge] = True
                push(eu[deltaedge])
            else:
                expand_blossom(deltablossom, False)

        if not augmented:
            break
        for b in range(nv, n2):
            if (
                blossomparent[b] == -1
                and blossombase[b] >= 0
                and label[b] == 1
                and dualvar[b] == 0
            ):
                expand_blossom(b, True)

    for v in range(nv):
        if mate[v] >= 0:
            mate[v] = endpoint[mate[v]]
    return mate
