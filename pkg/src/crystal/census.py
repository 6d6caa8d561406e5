"""Exhaustive catalogues of rigid crystallizations at a fixed vertex count.

Generation runs in two stages.  Stage one enumerates the rigid 3-coloured
sphere gems on 2p vertices directly, by a depth-first orderly search over
involution tables with code-based rejection of duplicates.  Stage two adds a
colour-3 perfect matching to every seed in all ways, pruning as soon as a
residue closes non-spherically, a rho-pair is forced, or the
bicoloured-cycle budget of a crystallization becomes unreachable.  Outputs
are deduplicated by code and split by bipartiteness.

Rigid graphs on more than two vertices are simple: around a parallel pair of
edges, the adjacent edges of any third colour form a rho-pair.  The searches
therefore never place a parallel edge.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass

from .canon import automorphisms, code_tables, decode
from .graphs import ColouredGraph, is_bipartite, is_crystallization
from .moves import find_rho_pairs

try:
    import numpy as _np

    from . import _fastgen
except ImportError:  # pragma: no cover - numba/numpy are optional
    _fastgen = None

_PAIRS = ((0, 1), (0, 2), (1, 2))


def _resolve_engine(engine):
    if engine is None or engine == "auto":
        return "fast" if _fastgen is not None else "python"
    if engine == "fast" and _fastgen is None:
        raise RuntimeError("fast engine requested but numba/numpy are unavailable")
    if engine not in ("fast", "python"):
        raise ValueError(f"unknown engine {engine!r}")
    return engine


@dataclass(frozen=True)
class SphereGem:
    """A connected rigid 3-coloured graph representing the 2-sphere."""

    graph: ColouredGraph
    rigid: bool = True


@dataclass(frozen=True)
class Catalogue:
    """All rigid crystallizations with a given vertex count, as sorted codes."""

    vertex_count: int
    bipartite_codes: tuple
    non_bipartite_codes: tuple


def _sphere_dfs(order: int, emit):
    """Enumerate labeled rigid sphere gems on the given vertex count.

    Vertices are numbered in breadth-first discovery order (colours scanned
    0,1,2 at each vertex), so every isomorphism class is produced a bounded
    number of times; the caller deduplicates by code.  Prunes: bipartiteness,
    no parallel edges, conservative rho-pair rejection on every completed
    bicoloured cycle, and the sphere cycle budget p+2.
    """
    p = order // 2
    budget = p + 2
    adj = [[0] * (order + 1) for _ in range(3)]
    a0, a1, a2 = adj
    side = [0] * (order + 1)
    side[1] = 1
    cid = {pr: [0] * (order + 1) for pr in _PAIRS}
    maxv = 1
    closed = 0
    next_cid = 0
    unf = [1, 1, 1]  # unfilled slots per colour among introduced vertices

    def close_walk(v, c, d, w):
        # After adding the c-edge (v, w): if the {c,d}-path through it just
        # closed, return (vertices in walk order, c-edge heads); else None.
        ac, ad = adj[c], adj[d]
        verts = [v, w]
        c_heads = [v]
        x = w
        on_d = True
        while True:
            y = ad[x] if on_d else ac[x]
            if y == 0:
                return None
            if not on_d:
                c_heads.append(x)
            if y == v:
                return verts, c_heads
            verts.append(y)
            x = y
            on_d = not on_d

    def rec(v, c):
        nonlocal maxv, closed, next_cid
        while v <= maxv and adj[c][v]:
            c += 1
            if c == 3:
                c = 0
                v += 1
        if v > maxv:
            if maxv == order and closed == budget:
                emit([row[1:] for row in adj])
            return
        sv = side[v]
        limit = maxv + 1 if maxv < order else maxv
        for w in range(v + 1, limit + 1):
            new = w > maxv
            if not new:
                if adj[c][w] or side[w] == sv:
                    continue
                if a0[v] == w or a1[v] == w or a2[v] == w:
                    continue  # parallel edge would force a rho-pair
            # fill
            adj[c][v] = w
            adj[c][w] = v
            if new:
                maxv += 1
                side[w] = 3 - sv
                unf[c] += 1  # w's own c-slot is consumed at birth: net +2-1
                unf[(c + 1) % 3] += 1
                unf[(c + 2) % 3] += 1
                unf[c] -= 2
            else:
                unf[c] -= 2
            undo_cycles = []
            ok = True
            for d in range(3):
                if d == c:
                    continue
                got = close_walk(v, c, d, w)
                if got is None:
                    continue
                verts, c_heads = got
                t = 3 - c - d
                # Two same-coloured edges of this cycle sharing a completed
                # cycle with the third colour form a rho-pair: reject.
                ids = cid[(c, t) if c < t else (t, c)]
                seen = set()
                for x in c_heads:
                    i = ids[x]
                    if i:
                        if i in seen:
                            ok = False
                            break
                        seen.add(i)
                if not ok:
                    break
                ids = cid[(d, t) if d < t else (t, d)]
                seen = set()
                for idx in range(1, len(verts), 2):
                    i = ids[verts[idx]]
                    if i:
                        if i in seen:
                            ok = False
                            break
                        seen.add(i)
                if not ok:
                    break
                pr = (c, d) if c < d else (d, c)
                next_cid += 1
                arr = cid[pr]
                for x in verts:
                    arr[x] = next_cid
                undo_cycles.append((pr, verts))
                closed += 1
            if ok:
                r = order - maxv
                need = 0
                cap = 0
                for pa, pb in _PAIRS:
                    ends = unf[pa] + unf[pb]
                    if r or ends:
                        need += 1
                    cap += (ends + r) // 2
                if closed + need > budget or closed + cap < budget:
                    ok = False
            if ok:
                rec(v, c)
            # undo
            for pr, verts in undo_cycles:
                arr = cid[pr]
                for x in verts:
                    arr[x] = 0
                closed -= 1
            adj[c][v] = 0
            adj[c][w] = 0
            if new:
                maxv -= 1
                side[w] = 0
                unf[c] += 1
                unf[(c + 1) % 3] -= 1
                unf[(c + 2) % 3] -= 1
            else:
                unf[c] += 2

    rec(1, 0)


def generate_sphere_gems(two_p: int, engine=None) -> list:
    """All rigid sphere gems with 2p vertices, one per class, by code."""
    if two_p < 2 or two_p % 2:
        raise ValueError(f"vertex count must be even and positive, got {two_p}")
    if two_p == 2:
        return [SphereGem(ColouredGraph(2, [[2, 1]] * 3))]
    found = set()
    if _resolve_engine(engine) == "fast":
        cap = 8192
        while True:
            out = _np.zeros((cap, 3 * two_p), dtype=_np.int64)
            got = _fastgen.sphere_kernel(two_p, out)
            if got >= 0:
                break
            cap = 2 * -got
        for row in out[:got]:
            tables = [row[c * two_p : (c + 1) * two_p].tolist() for c in range(3)]
            found.add(code_tables(2, tables))
    else:
        def emit(tables):
            found.add(code_tables(2, tables))

        _sphere_dfs(two_p, emit)
    return [SphereGem(decode(c)) for c in sorted(found)]


def _extend_tables(adj, order: int, emit, first_allowed=None):
    """DFS over colour-3 matchings completing a rigid sphere gem.

    adj holds the three seed involutions, 1-based (index 0 unused); emit
    receives the 1-based matching table of every completed graph that
    survives all prunes.  Every unmatched vertex is the end of one open
    {c,3}-path per colour; pend[c] links the two ends of each path, so
    cycle closures are detected in constant time and walked only when they
    actually happen.  first_allowed optionally restricts the partners tried
    for vertex 1 (seed-automorphism orbit representatives).
    """
    p = order // 2
    scid = {}
    scount = {}
    for pr in _PAIRS:
        c, d = pr
        ids = [0] * (order + 1)
        nxt = 0
        for v in range(1, order + 1):
            if ids[v]:
                continue
            nxt += 1
            x, on_d = v, False
            while True:
                ids[x] = nxt
                x = adj[d][x] if on_d else adj[c][x]
                on_d = not on_d
                if x == v:
                    break
        scid[pr] = ids
        scount[pr] = nxt
    # Contractedness and the four sphere residues force the count of
    # {c,3}-cycles per colour: each residue over {a,b,3} needs
    # s_ab + D_a + D_b = p + 2 cycles, which pins every D_c.
    s01, s02, s12 = scount[(0, 1)], scount[(0, 2)], scount[(1, 2)]
    twice = (
        p + 2 - s01 - s02 + s12,
        p + 2 - s01 - s12 + s02,
        p + 2 - s02 - s12 + s01,
    )
    if any(t <= 0 or t % 2 for t in twice):
        return  # no completion can satisfy the residue sphere conditions
    quota = [t // 2 for t in twice]
    q0, q1, q2 = quota
    m3 = [0] * (order + 1)
    dcid = [[0] * (order + 1) for _ in range(3)]  # {c,3}-cycle ids per vertex
    # Other end of the open {c,3}-path: initially each path is one c-edge.
    pend = [list(range(order + 1)) for _ in range(3)]
    for c in range(3):
        pc, ac = pend[c], adj[c]
        for v in range(1, order + 1):
            pc[v] = ac[v]
    unmatched = order
    ncycles = [0, 0, 0]  # closed {c,3}-cycles so far, per colour
    next_cid = 0
    stamp = 0
    stamp_arr = [0] * (order + 1)
    a0, a1, a2 = adj[0], adj[1], adj[2]

    def cycle_verts(u, v, c):
        # Walk the just-closed {c,3}-cycle; u,v is the new 3-edge.
        ac = adj[c]
        verts = [u, v]
        x = ac[v]
        on_c = False
        while x != u:
            verts.append(x)
            x = m3[x] if not on_c else ac[x]
            on_c = not on_c
        return verts

    def saturated_check(u):
        # For each residue family i, look at u's component over the two
        # other seed colours plus the partial matching.  A component whose
        # vertices are all matched is final: it must be the whole vertex set
        # (else the graph cannot be contracted) and spherical.
        nonlocal stamp
        for a, b in _PAIRS:
            da, db = dcid[a], dcid[b]
            if not (da[u] and db[u]):
                continue  # an open cycle through u: component not saturated
            ta, tb = adj[a], adj[b]
            stamp += 1
            st = stamp
            stamp_arr[u] = st
            stack = [u]
            comp = [u]
            saturated = True
            while stack:
                x = stack.pop()
                y = m3[x]
                if y == 0:
                    saturated = False
                    break
                if stamp_arr[y] != st:
                    stamp_arr[y] = st
                    comp.append(y)
                    stack.append(y)
                y = ta[x]
                if stamp_arr[y] != st:
                    stamp_arr[y] = st
                    comp.append(y)
                    stack.append(y)
                y = tb[x]
                if stamp_arr[y] != st:
                    stamp_arr[y] = st
                    comp.append(y)
                    stack.append(y)
            if not saturated:
                continue
            if len(comp) < order:
                return False
            sp = scid[(a, b)]
            cycles = len({sp[x] for x in comp})
            cycles += len({da[x] for x in comp})
            cycles += len({db[x] for x in comp})
            if cycles - p != 2:
                return False
        return True

    def rec():
        nonlocal unmatched, next_cid
        p0, p1, p2 = pend
        n0, n1, n2 = ncycles
        # Feasibility of each candidate pair under the quota projection.
        # While vertices remain unmatched, every colour keeps an open path
        # that must close later, so a colour at quota prunes; branch on the
        # unmatched vertex with the fewest feasible partners.
        after = unmatched - 2
        half = after >> 1
        cap = unmatched >> 1  # max further closures per colour
        if n0 + cap < q0 or n1 + cap < q1 or n2 + cap < q2:
            return
        need0 = q0 - n0
        need1 = q1 - n1
        need2 = q2 - n2
        lo = 0
        while m3[lo + 1]:
            lo += 1
        u = lo + 1
        # When a colour needs more cycles than the later matches can close,
        # this match must close one now: the only partner is the other end
        # of u's open path for that colour.
        if after and (need0 > half or need1 > half or need2 > half):
            w = 0
            if need0 > half:
                w = p0[u]
            if need1 > half:
                if w and w != p1[u]:
                    return
                w = p1[u]
            if need2 > half:
                if w and w != p2[u]:
                    return
                w = p2[u]
            cand = (w,) if w > u and not m3[w] else ()
        else:
            cand = range(u + 1, order + 1)
        for v in cand:
            if m3[v] or a0[u] == v or a1[u] == v or a2[u] == v:
                continue
            if first_allowed is not None and u == 1 and v not in first_allowed:
                continue
            c0 = p0[u] == v
            c1 = p1[u] == v
            c2 = p2[u] == v
            if after:
                if c0 >= need0 or c1 >= need1 or c2 >= need2:
                    continue
                if (need0 > half and not c0) or (need1 > half and not c1) or (
                    need2 > half and not c2
                ):
                    continue
            elif c0 != need0 or c1 != need1 or c2 != need2:
                continue
            m3[u] = v
            m3[v] = u
            unmatched = after
            undo_cycles = None
            undo_pend = None
            ok = True
            for c in range(3):
                pc = pend[c]
                if pc[u] == v:
                    # {c,3}-cycle closed: conservative rigidity checks.
                    verts = cycle_verts(u, v, c)
                    heads_c = verts[1::2]
                    heads_3 = verts[0::2]
                    d1, d2 = (1, 2) if c == 0 else (0, 2) if c == 1 else (0, 1)
                    for d in (d1, d2):
                        ids = scid[(c, d) if c < d else (d, c)]
                        seen = set()
                        for x in heads_c:
                            i = ids[x]
                            if i in seen:
                                ok = False
                                break
                            seen.add(i)
                        if not ok:
                            break
                        ids = dcid[d]
                        seen = set()
                        for x in heads_3:
                            i = ids[x]
                            if i:
                                if i in seen:
                                    ok = False
                                    break
                                seen.add(i)
                        if not ok:
                            break
                    if not ok:
                        break
                    next_cid += 1
                    arr = dcid[c]
                    for x in verts:
                        arr[x] = next_cid
                    if undo_cycles is None:
                        undo_cycles = [(c, verts)]
                    else:
                        undo_cycles.append((c, verts))
                    ncycles[c] += 1
                else:
                    a, b = pc[u], pc[v]
                    pc[a] = b
                    pc[b] = a
                    if undo_pend is None:
                        undo_pend = [(pc, a, b)]
                    else:
                        undo_pend.append((pc, a, b))
            if ok and not saturated_check(u):
                ok = False
            if ok:
                if unmatched:
                    rec()
                else:
                    emit(list(m3))
            if undo_cycles is not None:
                for c, verts in undo_cycles:
                    arr = dcid[c]
                    for x in verts:
                        arr[x] = 0
                    ncycles[c] -= 1
            if undo_pend is not None:
                for pc, a, b in undo_pend:
                    pc[a] = u
                    pc[b] = v
            m3[u] = 0
            m3[v] = 0
            unmatched += 2

    rec()


def extend_with_colour3(seed: ColouredGraph, engine=None) -> list:
    """All rigid crystallizations obtained by adding a colour-3 matching.

    The returned graphs carry the seed's labels; duplicates up to
    colour-isomorphism are possible and are resolved at catalogue level.
    """
    if seed.n != 2:
        raise ValueError("extension starts from a 3-coloured sphere gem")
    order = seed.order
    if order == 2:
        return [ColouredGraph(3, [[2, 1]] * 4)]
    allowed = _first_edge_orbit_reps(seed)
    out = []
    if _resolve_engine(engine) == "fast":
        adj = _np.zeros((3, order + 1), dtype=_np.int64)
        for c in range(3):
            for v in range(1, order + 1):
                adj[c, v] = seed.neighbour(v, c)
        quota = _seed_quotas(adj, order)
        if quota is None:
            return []
        scid = _np.zeros((3, order + 1), dtype=_np.int64)
        for pi, (c, d) in enumerate(_PAIRS):
            ids = [0] * (order + 1)
            nxt = 0
            for v in range(1, order + 1):
                if ids[v]:
                    continue
                nxt += 1
                x, on_d = v, False
                while True:
                    ids[x] = nxt
                    x = int(adj[d, x] if on_d else adj[c, x])
                    on_d = not on_d
                    if x == v:
                        break
            scid[pi] = ids
        mask = _np.ones(order + 1, dtype=_np.int64)
        if allowed is not None:
            mask[:] = 0
            for v in allowed:
                mask[v] = 1
        cap = 4096
        while True:
            buf = _np.zeros((cap, order), dtype=_np.int64)
            got = _fastgen.extend_kernel(adj, scid, _np.asarray(quota, dtype=_np.int64), mask, buf)
            if got >= 0:
                break
            cap = 2 * -got
        rows = [buf[i].tolist() for i in range(got)]
    else:
        tables = [[0] + list(t) for t in seed.tables()]
        rows = []
        _extend_tables(tables, order, lambda m3: rows.append(m3[1:]), allowed)
    for m3 in rows:
        g = ColouredGraph(3, [list(t) for t in seed.tables()] + [m3])
        if is_crystallization(g) and not find_rho_pairs(g):
            out.append(g)
    return out


def _seed_quotas(adj, order):
    """Per-colour {c,3}-cycle counts forced by the residue sphere conditions."""
    p = order // 2
    counts = []
    for c, d in _PAIRS:
        seen = [False] * (order + 1)
        nxt = 0
        for v in range(1, order + 1):
            if seen[v]:
                continue
            nxt += 1
            x, on_d = v, False
            while True:
                seen[x] = True
                x = int(adj[d, x] if on_d else adj[c, x])
                on_d = not on_d
                if x == v:
                    break
        counts.append(nxt)
    s01, s02, s12 = counts
    twice = (
        p + 2 - s01 - s02 + s12,
        p + 2 - s01 - s12 + s02,
        p + 2 - s02 - s12 + s01,
    )
    if any(t <= 0 or t % 2 for t in twice):
        return None
    return [t // 2 for t in twice]


def _first_edge_orbit_reps(seed: ColouredGraph):
    """Partners for vertex 1's colour-3 edge, one per automorphism orbit.

    Any completion is colour-isomorphic to one whose matching edge at
    vertex 1 is an orbit representative, so the search tries only those.
    """
    autos = automorphisms(seed)
    if len(autos) == 1:
        return None
    covered = set()
    reps = set()
    for v in range(2, seed.order + 1):
        if v in covered:
            continue
        reps.add(v)
        for sigma in autos:
            a, b = sigma[0], sigma[v - 1]
            if a == 1:
                covered.add(b)
            elif b == 1:
                covered.add(a)
    return reps


def _extension_codes(job):
    """Worker: codes of all completions of one seed, split by parity."""
    seed_rows, engine = job
    seed = ColouredGraph(2, seed_rows)
    bip, nonbip = [], []
    for g in extend_with_colour3(seed, engine=engine):
        key = code_tables(3, g.tables())
        (bip if is_bipartite(g) else nonbip).append(key)
    return bip, nonbip


def build_catalogue(two_p: int, threads: int = 1, engine=None) -> Catalogue:
    """Run both stages at one vertex count and merge deduplicated codes."""
    seeds = generate_sphere_gems(two_p, engine=engine)
    jobs = [(s.graph.tables(), engine) for s in seeds]
    if threads > 1 and len(jobs) > 1:
        with multiprocessing.Pool(threads) as pool:
            results = pool.map(_extension_codes, jobs, chunksize=1)
    else:
        results = [_extension_codes(j) for j in jobs]
    bip, nonbip = set(), set()
    for b, nb in results:
        bip.update(b)
        nonbip.update(nb)
    return Catalogue(two_p, tuple(sorted(bip)), tuple(sorted(nonbip)))


def _all_matchings(verts):
    if not verts:
        yield []
        return
    a = verts[0]
    for i in range(1, len(verts)):
        b = verts[i]
        rest = verts[1:i] + verts[i + 1 :]
        for m in _all_matchings(rest):
            yield [(a, b)] + m


def _pairs_to_table(order, pairs):
    t = [0] * (order + 1)
    for u, v in pairs:
        t[u], t[v] = v, u
    return t


def _connected_tables(tabs, order):
    seen = bytearray(order + 1)
    seen[1] = 1
    stack = [1]
    count = 1
    while stack:
        v = stack.pop()
        for t in tabs:
            w = t[v]
            if not seen[w]:
                seen[w] = 1
                count += 1
                stack.append(w)
    return count == order


def _cycle_partition(tabs, order, c, d):
    """Number of {c,d}-cycles plus a per-vertex id array."""
    ids = [0] * (order + 1)
    nxt = 0
    for v in range(1, order + 1):
        if ids[v]:
            continue
        nxt += 1
        x, on_d = v, False
        while True:
            ids[x] = nxt
            x = tabs[d][x] if on_d else tabs[c][x]
            on_d = not on_d
            if x == v:
                break
    return nxt, ids


def _first_pair_cycle_types(order):
    """One colour-1 matching per relabelling class of the pair (m0, m1).

    With m0 fixed to (1,2)(3,4)..., the class of the pair is the multiset of
    {0,1}-cycle lengths: a partition of p with part k standing for a cycle
    on 2k vertices.
    """

    def partitions(n, most):
        if n == 0:
            yield []
            return
        for k in range(min(n, most), 0, -1):
            for rest in partitions(n - k, k):
                yield [k] + rest

    reps = []
    for part in partitions(order // 2, order // 2):
        pairs = []
        v = 0
        for k in part:
            cyc = list(range(v + 1, v + 2 * k + 1))
            for t in range(1, 2 * k - 1, 2):
                pairs.append((cyc[t], cyc[t + 1]))
            pairs.append((cyc[-1], cyc[0]))
            v += 2 * k
        reps.append(pairs)
    return reps


def brute_force_catalogue(two_p: int) -> Catalogue:
    """Independent small-order oracle: filter all matching quadruples.

    Colour 0 is fixed to (1,2)(3,4)... and colour 1 runs over one
    representative per relabelling class of the first two matchings; both
    reductions are exact up to colour-isomorphism, which the final
    code-dedup resolves.  Colours 2 and 3 run over all perfect matchings.
    """
    order = two_p
    m0 = _pairs_to_table(order, [(2 * i + 1, 2 * i + 2) for i in range(order // 2)])
    verts = list(range(1, order + 1))
    all_m = [_pairs_to_table(order, m) for m in _all_matchings(verts)]
    bip, nonbip = set(), set()
    for m1_pairs in _first_pair_cycle_types(order):
        m1 = _pairs_to_table(order, m1_pairs)
        for m2 in all_m:
            for m3 in all_m:
                tabs = [m0, m1, m2, m3]
                if not _connected_tables(tabs, order):
                    continue
                total = 0
                contracted = True
                for c in range(4):
                    rest = [x for x in range(4) if x != c]
                    seen = bytearray(order + 1)
                    seen[1] = 1
                    stack = [1]
                    cnt = 1
                    while stack:
                        v = stack.pop()
                        for rc in rest:
                            w = tabs[rc][v]
                            if not seen[w]:
                                seen[w] = 1
                                cnt += 1
                                stack.append(w)
                    if cnt != order:
                        contracted = False
                        break
                if not contracted:
                    continue
                for c in range(4):
                    for d in range(c + 1, 4):
                        total += _cycle_partition(tabs, order, c, d)[0]
                if total != order + 4:
                    continue
                g = ColouredGraph(3, [t[1:] for t in tabs])
                if not is_crystallization(g):
                    continue
                if find_rho_pairs(g):
                    continue
                key = code_tables(3, g.tables())
                (bip if is_bipartite(g) else nonbip).add(key)
    return Catalogue(two_p, tuple(sorted(bip)), tuple(sorted(nonbip)))


def brute_force_sphere_gems(two_p: int) -> list:
    """Oracle for stage one: triples of matchings, filtered and dedup'd."""
    order = two_p
    m0 = _pairs_to_table(order, [(2 * i + 1, 2 * i + 2) for i in range(order // 2)])
    verts = list(range(1, order + 1))
    all_m = [_pairs_to_table(order, m) for m in _all_matchings(verts)]
    found = set()
    for m1 in all_m:
        for m2 in all_m:
            tabs = [m0, m1, m2]
            if not _connected_tables(tabs, order):
                continue
            total = sum(_cycle_partition(tabs, order, c, d)[0] for c, d in _PAIRS)
            if total != order // 2 + 2:
                continue
            g = ColouredGraph(2, [t[1:] for t in tabs])
            if find_rho_pairs(g):
                continue
            found.add(code_tables(2, g.tables()))
    return sorted(found)
