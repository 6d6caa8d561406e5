"""JIT-compiled search kernels for catalogue generation.

Iterative ports of the two census searches (sphere-gem enumeration and the
colour-3 matching extension), operating on flat numpy arrays so numba can
compile them.  The pure-Python implementations in census.py define the
semantics; tests assert both engines produce identical catalogues.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# Colour pairs among {0,1,2} and the slot of each colour within its pair.
_PAIR_A = np.array([0, 0, 1], dtype=np.int64)
_PAIR_B = np.array([1, 2, 2], dtype=np.int64)


@njit(cache=True)
def _pair_index(c, d):
    s = c + d
    if s == 1:
        return 0
    if s == 2:
        return 1
    return 2


@njit(cache=True)
def extend_kernel(adj, scid, quota, first_mask, out):
    """All colour-3 matchings completing one seed; returns count or -1.

    adj: (3, order+1) seed involutions; scid: (3, order+1) static cycle ids
    per pair index; quota: per-colour counts of {c,3}-cycles forced by the
    sphere residues; first_mask: allowed partners of vertex 1; out: output
    buffer, one completed matching (1-based, full table) per row.
    """
    order = adj.shape[1] - 1
    p = order // 2
    half_order = p
    m3 = np.zeros(order + 1, dtype=np.int64)
    pend = np.empty((3, order + 1), dtype=np.int64)
    for c in range(3):
        for v in range(1, order + 1):
            pend[c, v] = adj[c, v]
    dcid = np.zeros((3, order + 1), dtype=np.int64)
    ncyc = np.zeros(3, dtype=np.int64)
    # Per-level bookkeeping: matched pair, closure bitmask, pend undo slots.
    lv_u = np.zeros(half_order + 2, dtype=np.int64)
    lv_v = np.zeros(half_order + 2, dtype=np.int64)
    lv_closed = np.zeros(half_order + 2, dtype=np.int64)
    lv_pa = np.zeros((half_order + 2, 3), dtype=np.int64)
    lv_pb = np.zeros((half_order + 2, 3), dtype=np.int64)
    # Stamped mark arrays for duplicate-id and component scans.
    mark_s = np.zeros((3, p + 4), dtype=np.int64)
    mark_d = np.zeros((3, p + 4), dtype=np.int64)
    vstamp = np.zeros(order + 1, dtype=np.int64)
    stack = np.empty(order + 2, dtype=np.int64)
    comp = np.empty(order + 2, dtype=np.int64)
    cyc = np.empty(order + 2, dtype=np.int64)
    stamp = 0
    unmatched = order
    count = 0
    d = 0
    lv_u[0] = 1
    lv_v[0] = 1
    while d >= 0:
        u = lv_u[d]
        vprev = lv_v[d]
        after = unmatched - 2
        half = after >> 1
        cap = unmatched >> 1
        n0 = ncyc[0]
        n1 = ncyc[1]
        n2 = ncyc[2]
        need0 = quota[0] - n0
        need1 = quota[1] - n1
        need2 = quota[2] - n2
        v = 0
        if need0 <= cap and need1 <= cap and need2 <= cap:
            if after > 0 and (need0 > half or need1 > half or need2 > half):
                # Forced closure: the only viable partner is a path end.
                w = 0
                bad = False
                if need0 > half:
                    w = pend[0, u]
                if need1 > half:
                    if w != 0 and w != pend[1, u]:
                        bad = True
                    w = pend[1, u]
                if need2 > half:
                    if w != 0 and w != pend[2, u]:
                        bad = True
                    w = pend[2, u]
                if u == 1 and w > 0 and first_mask[w] == 0:
                    bad = True
                if not bad and w > vprev and m3[w] == 0:
                    v = w
            else:
                for x in range(vprev + 1, order + 1):
                    if m3[x] != 0:
                        continue
                    if adj[0, u] == x or adj[1, u] == x or adj[2, u] == x:
                        continue
                    if u == 1 and first_mask[x] == 0:
                        continue
                    c0 = 1 if pend[0, u] == x else 0
                    c1 = 1 if pend[1, u] == x else 0
                    c2 = 1 if pend[2, u] == x else 0
                    if after > 0:
                        if c0 >= need0 or c1 >= need1 or c2 >= need2:
                            continue
                    else:
                        if c0 != need0 or c1 != need1 or c2 != need2:
                            continue
                    v = x
                    break
        if v == 0:
            # No candidate: backtrack, undoing the parent's match.
            d -= 1
            if d >= 0:
                uu = lv_u[d]
                vv = lv_v[d]
                m3[uu] = 0
                m3[vv] = 0
                unmatched += 2
                for c in range(2, -1, -1):
                    if lv_closed[d] & (1 << c):
                        # Rewalk the cycle to clear its ids.
                        ac = adj[c]
                        x = ac[vv]
                        dcid[c, uu] = 0
                        dcid[c, vv] = 0
                        on_c = False
                        while x != uu:
                            dcid[c, x] = 0
                            if on_c:
                                x = ac[x]
                            else:
                                x = m3[x]
                            on_c = not on_c
                        ncyc[c] -= 1
                    elif lv_pa[d, c] != 0:
                        pend[c, lv_pa[d, c]] = uu
                        pend[c, lv_pb[d, c]] = vv
            continue
        lv_v[d] = v
        # Apply the match with rho-pruning; partial undo on rejection.
        m3[u] = v
        m3[v] = u
        unmatched -= 2
        closed_mask = 0
        ok = True
        for c in range(3):
            lv_pa[d, c] = 0
            d1 = 1 if c == 0 else 0
            d2 = 1 if c == 2 else 2
            if pend[c, u] == v:
                # walk cycle, collect vertices
                ac = adj[c]
                ln = 0
                cyc[ln] = u
                ln += 1
                cyc[ln] = v
                ln += 1
                x = ac[v]
                on_c = False
                while x != u:
                    cyc[ln] = x
                    ln += 1
                    if on_c:
                        x = ac[x]
                    else:
                        x = m3[x]
                    on_c = not on_c
                # static duplicate check on c-edge heads (odd positions)
                for dd in range(2):
                    dcol = d1 if dd == 0 else d2
                    pidx = _pair_index(c, dcol)
                    stamp += 1
                    for i in range(1, ln, 2):
                        sid = scid[pidx, cyc[i]]
                        if mark_s[pidx, sid] == stamp:
                            ok = False
                            break
                        mark_s[pidx, sid] = stamp
                    if not ok:
                        break
                    stamp += 1
                    for i in range(0, ln, 2):
                        did = dcid[dcol, cyc[i]]
                        if did != 0:
                            if mark_d[dcol, did] == stamp:
                                ok = False
                                break
                            mark_d[dcol, did] = stamp
                    if not ok:
                        break
                if not ok:
                    # undo closures of colours < c and pends
                    for cc in range(c - 1, -1, -1):
                        if closed_mask & (1 << cc):
                            acc = adj[cc]
                            x = acc[v]
                            dcid[cc, u] = 0
                            dcid[cc, v] = 0
                            on_c2 = False
                            while x != u:
                                dcid[cc, x] = 0
                                if on_c2:
                                    x = acc[x]
                                else:
                                    x = m3[x]
                                on_c2 = not on_c2
                            ncyc[cc] -= 1
                        elif lv_pa[d, cc] != 0:
                            pend[cc, lv_pa[d, cc]] = u
                            pend[cc, lv_pb[d, cc]] = v
                    break
                nid = ncyc[c] + 1
                for i in range(ln):
                    dcid[c, cyc[i]] = nid
                ncyc[c] += 1
                closed_mask |= 1 << c
            else:
                a = pend[c, u]
                b = pend[c, v]
                pend[c, a] = b
                pend[c, b] = a
                lv_pa[d, c] = a
                lv_pb[d, c] = b
        if not ok:
            m3[u] = 0
            m3[v] = 0
            unmatched += 2
            continue
        lv_closed[d] = closed_mask
        # Saturation: components over {a,b,3} whose vertices are all matched
        # are final; they must be the whole graph and spherical.
        sat_ok = True
        for pidx in range(3):
            a = _PAIR_A[pidx]
            b = _PAIR_B[pidx]
            if dcid[a, u] == 0 or dcid[b, u] == 0:
                continue
            stamp += 1
            vstamp[u] = stamp
            stack[0] = u
            sp = 1
            csize = 0
            comp[csize] = u
            csize += 1
            saturated = True
            while sp > 0:
                sp -= 1
                x = stack[sp]
                y = m3[x]
                if y == 0:
                    saturated = False
                    break
                if vstamp[y] != stamp:
                    vstamp[y] = stamp
                    comp[csize] = y
                    csize += 1
                    stack[sp] = y
                    sp += 1
                y = adj[a, x]
                if vstamp[y] != stamp:
                    vstamp[y] = stamp
                    comp[csize] = y
                    csize += 1
                    stack[sp] = y
                    sp += 1
                y = adj[b, x]
                if vstamp[y] != stamp:
                    vstamp[y] = stamp
                    comp[csize] = y
                    csize += 1
                    stack[sp] = y
                    sp += 1
            if not saturated:
                continue
            if csize < order:
                sat_ok = False
                break
            cycles = 0
            stamp += 1
            for i in range(csize):
                sid = scid[pidx, comp[i]]
                if mark_s[pidx, sid] != stamp:
                    mark_s[pidx, sid] = stamp
                    cycles += 1
            stamp += 1
            for i in range(csize):
                did = dcid[a, comp[i]]
                if mark_d[a, did] != stamp:
                    mark_d[a, did] = stamp
                    cycles += 1
            stamp += 1
            for i in range(csize):
                did = dcid[b, comp[i]]
                if mark_d[b, did] != stamp:
                    mark_d[b, did] = stamp
                    cycles += 1
            if cycles - p != 2:
                sat_ok = False
                break
        if not sat_ok:
            # full undo of this level
            for c in range(2, -1, -1):
                if closed_mask & (1 << c):
                    ac = adj[c]
                    x = ac[v]
                    dcid[c, u] = 0
                    dcid[c, v] = 0
                    on_c = False
                    while x != u:
                        dcid[c, x] = 0
                        if on_c:
                            x = ac[x]
                        else:
                            x = m3[x]
                        on_c = not on_c
                    ncyc[c] -= 1
                elif lv_pa[d, c] != 0:
                    pend[c, lv_pa[d, c]] = u
                    pend[c, lv_pb[d, c]] = v
            m3[u] = 0
            m3[v] = 0
            unmatched += 2
            continue
        if unmatched == 0:
            if count < out.shape[0]:
                for x in range(1, order + 1):
                    out[count, x - 1] = m3[x]
            count += 1
            # undo and keep scanning this level
            for c in range(2, -1, -1):
                if closed_mask & (1 << c):
                    ac = adj[c]
                    x = ac[v]
                    dcid[c, u] = 0
                    dcid[c, v] = 0
                    on_c = False
                    while x != u:
                        dcid[c, x] = 0
                        if on_c:
                            x = ac[x]
                        else:
                            x = m3[x]
                        on_c = not on_c
                    ncyc[c] -= 1
                elif lv_pa[d, c] != 0:
                    pend[c, lv_pa[d, c]] = u
                    pend[c, lv_pb[d, c]] = v
            m3[u] = 0
            m3[v] = 0
            unmatched += 2
            continue
        # descend
        d += 1
        nu = lv_u[d - 1]
        while m3[nu] != 0:
            nu += 1
        lv_u[d] = nu
        lv_v[d] = nu
    if count > out.shape[0]:
        return -count
    return count


@njit(cache=True)
def sphere_kernel(order, out):
    """Enumerate labeled rigid sphere gems; returns count or -count.

    out rows hold the three involution tables concatenated (3 * order).
    Vertices are introduced in breadth-first discovery order; prunes are
    bipartiteness, simplicity, conservative rho-pair rejection on every
    closed bicoloured cycle, and the sphere cycle budget p + 2.
    """
    p = order // 2
    budget = p + 2
    nslots = 3 * order
    adj = np.zeros((3, order + 1), dtype=np.int64)
    side = np.zeros(order + 1, dtype=np.int64)
    side[1] = 1
    # Path-end links per pair and slot (0 = smaller colour of the pair).
    endv = np.zeros((3, 2, order + 1), dtype=np.int64)
    endc = np.zeros((3, 2, order + 1), dtype=np.int64)
    for pidx in range(3):
        endv[pidx, 0, 1] = 1
        endc[pidx, 0, 1] = 1
        endv[pidx, 1, 1] = 1
        endc[pidx, 1, 1] = 0
    cid = np.zeros((3, order + 1), dtype=np.int64)
    ccount = np.zeros(3, dtype=np.int64)
    mark = np.zeros((3, p + 4), dtype=np.int64)
    cyc = np.empty(order + 2, dtype=np.int64)
    stamp = 0
    maxv = 1
    closed = 0
    unf = np.zeros(3, dtype=np.int64)
    unf[0] = 1
    unf[1] = 1
    unf[2] = 1
    # Levels are slot fills; at most nslots of them.
    lv_v = np.zeros(nslots + 2, dtype=np.int64)
    lv_c = np.zeros(nslots + 2, dtype=np.int64)
    lv_w = np.zeros(nslots + 2, dtype=np.int64)
    lv_new = np.zeros(nslots + 2, dtype=np.int64)
    lv_closed = np.zeros(nslots + 2, dtype=np.int64)  # bitmask over pair idx
    lv_pa = np.zeros((nslots + 2, 3), dtype=np.int64)
    lv_psa = np.zeros((nslots + 2, 3), dtype=np.int64)
    lv_pb = np.zeros((nslots + 2, 3), dtype=np.int64)
    lv_psb = np.zeros((nslots + 2, 3), dtype=np.int64)
    count = 0
    d = 0
    # find first slot
    lv_v[0] = 1
    lv_c[0] = 0
    lv_w[0] = 1  # scan starts above this value; "new vertex" encoded as order+1 sentinel below
    while d >= 0:
        v = lv_v[d]
        c = lv_c[d]
        wprev = lv_w[d]
        # next candidate w: existing vertices v+1..maxv, then a new vertex
        w = 0
        isnew = False
        x = wprev + 1
        while x <= maxv:
            if adj[c, x] == 0 and side[x] != side[v]:
                if adj[0, v] != x and adj[1, v] != x and adj[2, v] != x:
                    w = x
                    break
            x += 1
        if w == 0 and wprev <= maxv and maxv < order:
            w = maxv + 1
            isnew = True
        if w == 0:
            d -= 1
            if d >= 0:
                # undo level d
                vv = lv_v[d]
                cc = lv_c[d]
                ww = lv_w[d]
                for pidx in range(2, -1, -1):
                    if lv_closed[d] & (1 << pidx):
                        ca = _PAIR_A[pidx]
                        cb = _PAIR_B[pidx]
                        dd = cb if cc == ca else ca
                        acc = adj[cc]
                        add = adj[dd]
                        cid[pidx, vv] = 0
                        cid[pidx, ww] = 0
                        x2 = add[ww]
                        on_d = False
                        while x2 != vv:
                            cid[pidx, x2] = 0
                            if on_d:
                                x2 = add[x2]
                            else:
                                x2 = acc[x2]
                            on_d = not on_d
                        ccount[pidx] -= 1
                        closed -= 1
                    elif lv_pa[d, pidx] != 0:
                        sc = 0 if cc == _PAIR_A[pidx] else 1
                        endv[pidx, lv_psa[d, pidx], lv_pa[d, pidx]] = vv
                        endc[pidx, lv_psa[d, pidx], lv_pa[d, pidx]] = sc
                        endv[pidx, lv_psb[d, pidx], lv_pb[d, pidx]] = ww
                        endc[pidx, lv_psb[d, pidx], lv_pb[d, pidx]] = sc
                adj[cc, vv] = 0
                adj[cc, ww] = 0
                if lv_new[d] == 1:
                    maxv -= 1
                    side[ww] = 0
                    unf[cc] -= 1
                    unf[(cc + 1) % 3] -= 1
                    unf[(cc + 2) % 3] -= 1
                    unf[cc] += 2
                else:
                    unf[cc] += 2
            continue
        lv_w[d] = w
        lv_new[d] = 1 if isnew else 0
        # apply
        adj[c, v] = w
        adj[c, w] = v
        if isnew:
            maxv += 1
            side[w] = 3 - side[v]
            for pidx in range(3):
                endv[pidx, 0, w] = w
                endc[pidx, 0, w] = 1
                endv[pidx, 1, w] = w
                endc[pidx, 1, w] = 0
            unf[c] -= 2
            unf[0] += 1
            unf[1] += 1
            unf[2] += 1
        else:
            unf[c] -= 2
        closed_mask = 0
        ok = True
        for pidx in range(3):
            lv_pa[d, pidx] = 0
            ca = _PAIR_A[pidx]
            cb = _PAIR_B[pidx]
            if ca != c and cb != c:
                continue
            dd = cb if c == ca else ca
            sc = 0 if c == ca else 1
            if endv[pidx, sc, v] == w and endc[pidx, sc, v] == sc:
                # cycle closed: walk it
                acc = adj[c]
                add = adj[dd]
                ln = 0
                cyc[ln] = v
                ln += 1
                cyc[ln] = w
                ln += 1
                x2 = add[w]
                on_d = False
                while x2 != v:
                    cyc[ln] = x2
                    ln += 1
                    if on_d:
                        x2 = add[x2]
                    else:
                        x2 = acc[x2]
                    on_d = not on_d
                t = 3 - ca - cb
                # c-edge heads sit at even walk positions, d-edge heads at
                # odd ones; either sharing a completed third-pair cycle is a
                # rho-pair.
                pct = _pair_index(c, t)
                stamp += 1
                for i in range(0, ln, 2):
                    i2 = cid[pct, cyc[i]]
                    if i2 != 0:
                        if mark[pct, i2] == stamp:
                            ok = False
                            break
                        mark[pct, i2] = stamp
                if ok:
                    pdt = _pair_index(dd, t)
                    stamp += 1
                    for i in range(1, ln, 2):
                        i2 = cid[pdt, cyc[i]]
                        if i2 != 0:
                            if mark[pdt, i2] == stamp:
                                ok = False
                                break
                            mark[pdt, i2] = stamp
                if not ok:
                    # undo this level's earlier pair effects
                    for pj in range(pidx - 1, -1, -1):
                        if closed_mask & (1 << pj):
                            ca2 = _PAIR_A[pj]
                            cb2 = _PAIR_B[pj]
                            dd2 = cb2 if c == ca2 else ca2
                            acc2 = adj[c]
                            add2 = adj[dd2]
                            cid[pj, v] = 0
                            cid[pj, w] = 0
                            x3 = add2[w]
                            on_d2 = False
                            while x3 != v:
                                cid[pj, x3] = 0
                                if on_d2:
                                    x3 = add2[x3]
                                else:
                                    x3 = acc2[x3]
                                on_d2 = not on_d2
                            ccount[pj] -= 1
                            closed -= 1
                        elif lv_pa[d, pj] != 0:
                            sc2 = 0 if c == _PAIR_A[pj] else 1
                            endv[pj, lv_psa[d, pj], lv_pa[d, pj]] = v
                            endc[pj, lv_psa[d, pj], lv_pa[d, pj]] = sc2
                            endv[pj, lv_psb[d, pj], lv_pb[d, pj]] = w
                            endc[pj, lv_psb[d, pj], lv_pb[d, pj]] = sc2
                    break
                nid = ccount[pidx] + 1
                for i in range(ln):
                    cid[pidx, cyc[i]] = nid
                ccount[pidx] += 1
                closed += 1
                closed_mask |= 1 << pidx
            else:
                a = endv[pidx, sc, v]
                sa = endc[pidx, sc, v]
                b = endv[pidx, sc, w]
                sb = endc[pidx, sc, w]
                endv[pidx, sa, a] = b
                endc[pidx, sa, a] = sb
                endv[pidx, sb, b] = a
                endc[pidx, sb, b] = sa
                lv_pa[d, pidx] = a
                lv_psa[d, pidx] = sa
                lv_pb[d, pidx] = b
                lv_psb[d, pidx] = sb
        if ok:
            r = order - maxv
            need = 0
            capn = 0
            for pidx in range(3):
                ends = unf[_PAIR_A[pidx]] + unf[_PAIR_B[pidx]]
                if r > 0 or ends > 0:
                    need += 1
                capn += (ends + r) >> 1
            if closed + need > budget or closed + capn < budget:
                ok = False
                for pidx in range(2, -1, -1):
                    if closed_mask & (1 << pidx):
                        ca2 = _PAIR_A[pidx]
                        cb2 = _PAIR_B[pidx]
                        dd2 = cb2 if c == ca2 else ca2
                        acc2 = adj[c]
                        add2 = adj[dd2]
                        cid[pidx, v] = 0
                        cid[pidx, w] = 0
                        x3 = add2[w]
                        on_d2 = False
                        while x3 != v:
                            cid[pidx, x3] = 0
                            if on_d2:
                                x3 = add2[x3]
                            else:
                                x3 = acc2[x3]
                            on_d2 = not on_d2
                        ccount[pidx] -= 1
                        closed -= 1
                    elif lv_pa[d, pidx] != 0:
                        sc2 = 0 if c == _PAIR_A[pidx] else 1
                        endv[pidx, lv_psa[d, pidx], lv_pa[d, pidx]] = v
                        endc[pidx, lv_psa[d, pidx], lv_pa[d, pidx]] = sc2
                        endv[pidx, lv_psb[d, pidx], lv_pb[d, pidx]] = w
                        endc[pidx, lv_psb[d, pidx], lv_pb[d, pidx]] = sc2
        if not ok:
            adj[c, v] = 0
            adj[c, w] = 0
            if isnew:
                maxv -= 1
                side[w] = 0
                unf[c] -= 1
                unf[(c + 1) % 3] -= 1
                unf[(c + 2) % 3] -= 1
                unf[c] += 2
            else:
                unf[c] += 2
            continue
        lv_closed[d] = closed_mask
        # find next slot
        nv = v
        nc = c
        while nv <= maxv and adj[nc, nv] != 0:
            nc += 1
            if nc == 3:
                nc = 0
                nv += 1
        if nv > maxv:
            if maxv == order and closed == budget:
                if count < out.shape[0]:
                    for cc in range(3):
                        for x2 in range(1, order + 1):
                            out[count, cc * order + x2 - 1] = adj[cc, x2]
                count += 1
            # undo this level, keep scanning
            for pidx in range(2, -1, -1):
                if closed_mask & (1 << pidx):
                    ca2 = _PAIR_A[pidx]
                    cb2 = _PAIR_B[pidx]
                    dd2 = cb2 if c == ca2 else ca2
                    acc2 = adj[c]
                    add2 = adj[dd2]
                    cid[pidx, v] = 0
                    cid[pidx, w] = 0
                    x3 = add2[w]
                    on_d2 = False
                    while x3 != v:
                        cid[pidx, x3] = 0
                        if on_d2:
                            x3 = add2[x3]
                        else:
                            x3 = acc2[x3]
                        on_d2 = not on_d2
                    ccount[pidx] -= 1
                    closed -= 1
                elif lv_pa[d, pidx] != 0:
                    sc2 = 0 if c == _PAIR_A[pidx] else 1
                    endv[pidx, lv_psa[d, pidx], lv_pa[d, pidx]] = v
                    endc[pidx, lv_psa[d, pidx], lv_pa[d, pidx]] = sc2
                    endv[pidx, lv_psb[d, pidx], lv_pb[d, pidx]] = w
                    endc[pidx, lv_psb[d, pidx], lv_pb[d, pidx]] = sc2
            adj[c, v] = 0
            adj[c, w] = 0
            if isnew:
                maxv -= 1
                side[w] = 0
                unf[c] -= 1
                unf[(c + 1) % 3] -= 1
                unf[(c + 2) % 3] -= 1
                unf[c] += 2
            else:
                unf[c] += 2
            continue
        d += 1
        lv_v[d] = nv
        lv_c[d] = nc
        lv_w[d] = nv  # candidates start above the slot's own vertex
    if count > out.shape[0]:
        return -count
    return count
