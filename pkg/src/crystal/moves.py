"""The move calculus on coloured graphs.

Dipole deletion/addition, cancellation of generalized dipoles via the grid
construction, rho-pair detection and switching, and the rigidification loop
that drives every graph representing a closed 3-manifold down to a rigid
crystallization while counting handle-shedding rho3 switches.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .graphs import (
    ColouredGraph,
    _component,
    bicoloured_cycle,
    is_connected,
    is_crystallization,
    surface_check,
)


@dataclass(frozen=True)
class Dipole:
    x: int
    y: int
    colours: frozenset


@dataclass(frozen=True)
class GenDipole:
    """Two bicoloured cycles over complementary pairs sharing one vertex.

    cycle_c is coloured {pair_c[0], pair_c[1]} and has length m+1; its walk
    starts at x0 and leaves along pair_c[0].  Same for cycle_cp with pair_cp
    and length n+1.
    """

    x0: int
    pair_c: tuple
    pair_cp: tuple
    cycle_c: tuple
    cycle_cp: tuple
    m: int
    n: int


@dataclass(frozen=True)
class RhoPair:
    colour: int
    e: tuple  # (a, b), a < b
    f: tuple  # (c, d), c < d
    kind: int  # number of shared bicoloured cycles: 2 or 3


class MoveError(ValueError):
    """A requested move is invalid on the given graph."""


def find_dipoles(g: ColouredGraph, k: int) -> list:
    """All k-dipoles, in lexicographic (x, y) order.

    A pair joined by all n+1 colours is a whole 2-vertex component, never a
    dipole.
    """
    if not 1 <= k <= g.n:
        raise ValueError(f"dipole type {k} out of range 1..{g.n}")
    adj = g.tables()
    out = []
    for x in g.vertices():
        partners = {}
        for c in range(g.n + 1):
            y = adj[c][x - 1]
            if y > x:
                partners.setdefault(y, []).append(c)
        for y in sorted(partners):
            cols = partners[y]
            if len(cols) != k:
                continue
            rest = [c for c in range(g.n + 1) if c not in cols]
            comp = _component(adj, rest, x, g.order)
            if y not in comp:
                out.append(Dipole(x, y, frozenset(cols)))
    return out


def _validate_dipole(g: ColouredGraph, d: Dipole):
    adj = g.tables()
    joining = {c for c in range(g.n + 1) if adj[c][d.x - 1] == d.y}
    if joining != set(d.colours):
        raise MoveError(f"vertices {d.x},{d.y} are not joined by exactly {set(d.colours)}")
    rest = [c for c in range(g.n + 1) if c not in d.colours]
    if d.y in _component(adj, rest, d.x, g.order):
        raise MoveError(
            f"({d.x},{d.y}) is not a dipole: same residue over colours {rest}"
        )


def delete_dipole(g: ColouredGraph, d: Dipole) -> ColouredGraph:
    """Remove the dipole pair and weld the severed edges colourwise."""
    _validate_dipole(g, d)
    adj = g.tables()
    x, y = d.x, d.y
    relabel = {}
    c = 0
    for v in g.vertices():
        if v not in (x, y):
            c += 1
            relabel[v] = c
    tables = []
    for col in range(g.n + 1):
        t = [0] * (g.order - 2)
        if col in d.colours:
            for v in g.vertices():
                if v in (x, y):
                    continue
                t[relabel[v] - 1] = relabel[adj[col][v - 1]]
        else:
            a, b = adj[col][x - 1], adj[col][y - 1]
            for v in g.vertices():
                if v in (x, y):
                    continue
                w = adj[col][v - 1]
                t[relabel[v] - 1] = relabel[w] if w not in (x, y) else 0
            t[relabel[a] - 1] = relabel[b]
            t[relabel[b] - 1] = relabel[a]
        tables.append(t)
    return ColouredGraph(g.n, tables)


def add_dipole(g: ColouredGraph, sites: dict, colours) -> ColouredGraph:
    """Insert a dipole of the given colours; inverse of delete_dipole.

    sites maps each colour outside the dipole to an ordered pair (a, b) of
    currently adjacent vertices; the new x attaches to a and the new y to b.
    The insertion must produce a genuine dipole, otherwise the represented
    manifold would change and the move is rejected.
    """
    colours = frozenset(colours)
    if not colours or not colours <= set(range(g.n + 1)):
        raise ValueError(f"bad dipole colour set {set(colours)}")
    if len(colours) > g.n:
        raise ValueError("a dipole involves at most n colours")
    outside = [c for c in range(g.n + 1) if c not in colours]
    if set(sites) != set(outside):
        raise ValueError(f"sites must cover colours {outside}")
    adj = g.tables()
    x, y = g.order + 1, g.order + 2
    tables = []
    for col in range(g.n + 1):
        t = list(adj[col]) + [0, 0]
        if col in colours:
            t[x - 1], t[y - 1] = y, x
        else:
            a, b = sites[col]
            if adj[col][a - 1] != b:
                raise MoveError(f"site {a},{b} is not a colour-{col} edge")
            t[a - 1], t[x - 1] = x, a
            t[b - 1], t[y - 1] = y, b
        tables.append(t)
    out = ColouredGraph(g.n, tables)
    _validate_dipole(out, Dipole(x, y, colours))
    return out


def find_gen_dipoles(g: ColouredGraph, i: int, m_max: int = 8, n_max: int = 8) -> list:
    """Generalized dipoles whose first cycle is {0,i}-coloured.

    Each base vertex carries one {0,i}-cycle and one complementary cycle;
    they form a generalized dipole when they meet only at the base vertex.
    Results are sorted by (m*n, base vertex), the cancellation priority.
    """
    if g.n != 3:
        raise ValueError("generalized dipoles live in 4-coloured graphs")
    if i not in (1, 2, 3):
        raise ValueError(f"type colour must be 1, 2 or 3, got {i}")
    h, k = [c for c in (1, 2, 3) if c != i]
    out = []
    for x0 in g.vertices():
        cyc = bicoloured_cycle(g, x0, 0, i)
        m = len(cyc) - 1
        if m > m_max:
            continue
        cyc2 = bicoloured_cycle(g, x0, h, k)
        n = len(cyc2) - 1
        if n > n_max:
            continue
        if len(set(cyc) & set(cyc2)) != 1:
            continue
        out.append(GenDipole(x0, (0, i), (h, k), cyc, cyc2, m, n))
    out.sort(key=lambda d: (d.m * d.n, d.x0))
    return out


def cancel_gen_dipole(g: ColouredGraph, d: GenDipole) -> ColouredGraph:
    """Replace the two cycles by the m x n grid of their product.

    Cycle edges replicate across the grid rows/columns; every edge leaving
    the configuration reattaches on the grid boundary at the unique slot
    missing its colour (the row/column whose cycle edge went through the
    base vertex).
    """
    ca, cb = d.pair_c
    cc, cd = d.pair_cp
    if bicoloured_cycle(g, d.x0, ca, cb) != d.cycle_c or bicoloured_cycle(
        g, d.x0, cc, cd
    ) != d.cycle_cp:
        raise MoveError("stale generalized dipole: cycles changed")
    if len(set(d.cycle_c) & set(d.cycle_cp)) != 1:
        raise MoveError("stale generalized dipole: cycles meet more than once")
    m, n = d.m, d.n
    xs = list(d.cycle_c[1:])  # x_1 .. x_m
    ys = list(d.cycle_cp[1:])  # y_1 .. y_n
    theta = set(xs) | set(ys) | {d.x0}
    adj = g.tables()

    outside = [v for v in g.vertices() if v not in theta]
    relabel = {v: t + 1 for t, v in enumerate(outside)}
    base = len(outside)

    def grid(r, s):  # r in 1..m, s in 1..n
        return base + (r - 1) * n + s

    order = base + m * n
    tables = [[0] * order for _ in range(4)]

    def join(col, u, v):
        t = tables[col]
        if t[u - 1] or t[v - 1]:
            raise RuntimeError("grid construction produced a clash")
        t[u - 1], t[v - 1] = v, u

    for col in range(4):
        for v in outside:
            w = adj[col][v - 1]
            if w not in theta and v < w:
                join(col, relabel[v], relabel[w])

    xpos = {v: r + 1 for r, v in enumerate(xs)}
    ypos = {v: s + 1 for s, v in enumerate(ys)}

    # Row edges: the {ca,cb} path x_1..x_m replicated down every column.
    for r, v in enumerate(xs, start=1):
        for col in (ca, cb):
            w = adj[col][v - 1]
            if w in xpos and xpos[w] > r:
                for t in range(1, n + 1):
                    join(col, grid(r, t), grid(xpos[w], t))
    # Column edges: the {cc,cd} path y_1..y_n replicated along every row.
    for s, v in enumerate(ys, start=1):
        for col in (cc, cd):
            w = adj[col][v - 1]
            if w in ypos and ypos[w] > s:
                for t in range(1, m + 1):
                    join(col, grid(t, s), grid(t, ypos[w]))

    # Boundary attachments.  y_s misses colours {ca,cb}: its ca-edge lands on
    # column 1 (the row slot vacated by the x0-x1 edge), its cb-edge on
    # column m; symmetrically x_r's cc-edge lands on row 1, cd on row n.
    for s, v in enumerate(ys, start=1):
        for col, r_att in ((ca, 1), (cb, m)):
            w = adj[col][v - 1]
            if w in ypos:
                if ypos[w] > s:
                    join(col, grid(r_att, s), grid(r_att, ypos[w]))
            else:
                join(col, grid(r_att, s), relabel[w])
    for r, v in enumerate(xs, start=1):
        for col, s_att in ((cc, 1), (cd, n)):
            w = adj[col][v - 1]
            if w in xpos:
                if xpos[w] > r:
                    join(col, grid(r, s_att), grid(xpos[w], s_att))
            else:
                join(col, grid(r, s_att), relabel[w])

    return ColouredGraph(3, tables)


def find_rho_pairs(g: ColouredGraph) -> list:
    """All rho-pairs: same-coloured edges sharing >= 2 bicoloured cycles.

    For 4-coloured graphs kind 2 and 3 are the rho2/rho3 pairs; for
    3-coloured graphs a pair sharing both remaining cycles has kind 2.
    """
    out = []
    others = lambda i: [c for c in range(g.n + 1) if c != i]
    for i in range(g.n + 1):
        edges = g.edges(i)
        cycle_of = {}
        for d in others(i):
            ids = [0] * (g.order + 1)
            nxt = 0
            for v in g.vertices():
                if not ids[v]:
                    nxt += 1
                    for w in bicoloured_cycle(g, v, i, d):
                        ids[w] = nxt
            cycle_of[d] = ids
        for e, f in combinations(edges, 2):
            shared = sum(1 for d in others(i) if cycle_of[d][e[0]] == cycle_of[d][f[0]])
            if shared >= 2:
                out.append(RhoPair(i, e, f, shared))
    return out


def _is_gem(g: ColouredGraph) -> bool:
    """Connected with every complement residue a sphere (closed 3-manifold)."""
    if not is_connected(g):
        return False
    return all(
        chi == 2 for entries in surface_check(g).values() for _, chi in entries
    )


def switch_rho_pair(g: ColouredGraph, r: RhoPair) -> ColouredGraph:
    """Cross-rewire the pair's two edges within their colour.

    Of the two crossings, only those leaving a connected graph that still
    represents a closed 3-manifold are switches at all (the other crossing
    wrecks the residue spheres); when both qualify, the lexicographically
    smaller rewiring wins.
    """
    a, b = r.e
    c, d = r.f
    i = r.colour
    adj = g.tables()
    if adj[i][a - 1] != b or adj[i][c - 1] != d:
        raise MoveError("stale rho-pair: edges changed")
    options = []
    for p1, p2 in (((a, c), (b, d)), ((a, d), (b, c))):
        rewiring = tuple(sorted((tuple(sorted(p1)), tuple(sorted(p2)))))
        t = list(adj[i])
        for u, v in (p1, p2):
            t[u - 1], t[v - 1] = v, u
        cand = ColouredGraph(g.n, [t if col == i else adj[col] for col in range(g.n + 1)])
        valid = _is_gem(cand) if g.n == 3 else is_connected(cand)
        if valid:
            options.append((rewiring, cand))
    if not options:
        raise MoveError("no crossing of this rho-pair keeps a manifold gem")
    options.sort(key=lambda o: o[0])
    return options[0][1]


def _drop_s3_components(g: ColouredGraph):
    """Split off order-2 components; returns (main graph, dropped count).

    Used only on disconnected intermediates: an order-2 component is a
    3-sphere summand and can be discarded when something else remains.
    """
    adj = g.tables()
    seen = bytearray(g.order + 1)
    comps = []
    for v in g.vertices():
        if not seen[v]:
            comp = _component(adj, range(g.n + 1), v, g.order)
            for w in comp:
                seen[w] = 1
            comps.append(comp)
    if len(comps) == 1:
        return g, 0
    big = [c for c in comps if len(c) > 2]
    if len(big) != 1:
        raise RuntimeError("graph split into multiple nontrivial components")
    members = big[0]
    relabel = {v: t + 1 for t, v in enumerate(members)}
    tables = [[0] * len(members) for _ in range(g.n + 1)]
    for col in range(g.n + 1):
        for v in members:
            tables[col][relabel[v] - 1] = relabel[adj[col][v - 1]]
    return ColouredGraph(g.n, tables), len(comps) - 1


def rigidify_trace(g: ColouredGraph):
    """Reduce to a rigid crystallization, recording every applied move.

    Returns (graph, rho3_count, events); each event is a tuple
    (kind, before, after) with kind in {dipole, rho2, rho3, drop-s3}.
    A rho3 switch on a graph whose bipartiteness differs from the result
    sheds an orientable handle; the distinction is observable from the
    before/after graphs in the trace.
    """
    if g.n != 3:
        raise ValueError("rigidify operates on 4-coloured graphs")
    if is_connected(g) and not all(
        chi == 2 for entries in surface_check(g).values() for _, chi in entries
    ):
        raise ValueError("input graph does not represent a closed 3-manifold")
    cap = 10 * g.order
    rho3 = 0
    events = []
    for _ in range(cap):
        if not is_connected(g):
            g2, dropped = _drop_s3_components(g)
            if dropped:
                events.append(("drop-s3", g, g2))
                g = g2
                continue
        if g.order == 2:
            break
        moved = False
        for k in range(1, 4):
            dips = find_dipoles(g, k)
            if dips:
                g2 = delete_dipole(g, dips[0])
                events.append(("dipole", g, g2))
                g = g2
                moved = True
                break
        if moved:
            continue
        pairs = find_rho_pairs(g)
        for kind in (2, 3):
            for pair in pairs:
                if pair.kind != kind:
                    continue
                try:
                    g2 = switch_rho_pair(g, pair)
                except MoveError:
                    continue
                events.append((f"rho{kind}", g, g2))
                if kind == 3:
                    rho3 += 1
                g = g2
                moved = True
                break
            if moved:
                break
        if not moved:
            break
    else:
        raise RuntimeError(f"rigidify exceeded {cap} iterations")
    if not is_crystallization(g):
        raise RuntimeError("rigidify finished on a non-crystallization")
    if find_rho_pairs(g):
        raise RuntimeError("rigidify finished on a non-rigid graph")
    return g, rho3, events


def rigidify(g: ColouredGraph):
    """Reduce to a rigid crystallization; returns (graph, rho3_count)."""
    out, rho3, _ = rigidify_trace(g)
    return out, rho3
