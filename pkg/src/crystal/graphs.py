"""Edge-coloured graphs encoding triangulated manifolds.

A graph on 2p vertices carries n+1 colours (n = 2 or 3); the edges of each
colour form a fixed-point-free involution on the vertex set, so proper
colouring is automatic.  Vertices are the dense integers 1..2p.  Graphs are
immutable; every operation returns a new graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations


class ColouredGraph:
    """An (n+1)-regular properly edge-coloured multigraph.

    Adjacency is stored as one involution table per colour:
    ``adj[c][v-1]`` is the colour-c neighbour of vertex v.
    """

    __slots__ = ("n", "order", "_adj")

    def __init__(self, n: int, tables):
        if n not in (2, 3):
            raise ValueError(f"n must be 2 or 3, got {n}")
        tables = tuple(tuple(t) for t in tables)
        if len(tables) != n + 1:
            raise ValueError(f"expected {n + 1} colour tables, got {len(tables)}")
        order = len(tables[0])
        if order == 0 or order % 2:
            raise ValueError(f"order must be even and positive, got {order}")
        for c, t in enumerate(tables):
            if len(t) != order:
                raise ValueError(f"colour {c} table has length {len(t)}, expected {order}")
            for v in range(1, order + 1):
                w = t[v - 1]
                if not 1 <= w <= order:
                    raise ValueError(f"colour {c}: vertex {v} maps to {w}, out of range")
                if w == v:
                    raise ValueError(f"colour {c}: involution fixes vertex {v}")
                if t[w - 1] != v:
                    raise ValueError(f"colour {c}: table is not an involution at {v}")
        self.n = n
        self.order = order
        self._adj = tables

    @classmethod
    def from_pairs(cls, n: int, order: int, pairs) -> "ColouredGraph":
        """Build from ``pairs[c]`` = list of vertex pairs matched by colour c."""
        tables = []
        for c in range(n + 1):
            t = [0] * order
            for u, v in pairs[c]:
                if t[u - 1] or t[v - 1]:
                    raise ValueError(f"colour {c}: vertex matched twice")
                t[u - 1], t[v - 1] = v, u
            if any(x == 0 for x in t):
                raise ValueError(f"colour {c}: not a perfect matching")
            tables.append(t)
        return cls(n, tables)

    def neighbour(self, v: int, c: int) -> int:
        return self._adj[c][v - 1]

    def colours(self) -> range:
        return range(self.n + 1)

    def vertices(self) -> range:
        return range(1, self.order + 1)

    def edges(self, c: int):
        """Colour-c edges as (u, v) pairs with u < v, ascending."""
        t = self._adj[c]
        return [(v, t[v - 1]) for v in range(1, self.order + 1) if v < t[v - 1]]

    def tables(self):
        return self._adj

    def __eq__(self, other):
        if not isinstance(other, ColouredGraph):
            return NotImplemented
        return self.n == other.n and self._adj == other._adj

    def __hash__(self):
        return hash((self.n, self._adj))

    def __repr__(self):
        return f"ColouredGraph(n={self.n}, order={self.order})"


@dataclass(frozen=True)
class Residue:
    """A connected component of the subgraph spanned by a colour set."""

    colours: frozenset
    members: tuple

    def __len__(self):
        return len(self.members)


@dataclass(frozen=True)
class SumSplit:
    """A decomposition of a graph as a connected sum of two capped pieces."""

    cut_edges: tuple  # ((c, u, v), ...) one per colour, u on the left side
    left: ColouredGraph
    right: ColouredGraph


def s3_graph() -> ColouredGraph:
    """The order-2 crystallization of the 3-sphere: one edge per colour."""
    return ColouredGraph(3, [[2, 1]] * 4)


def sphere_theta() -> ColouredGraph:
    """The order-2 sphere gem: two vertices joined by three edges."""
    return ColouredGraph(2, [[2, 1]] * 3)


def _component(adj, colours, start, order):
    """Vertices reachable from start along the given colours (sorted)."""
    seen = bytearray(order + 1)
    seen[start] = 1
    stack = [start]
    out = [start]
    while stack:
        v = stack.pop()
        for c in colours:
            w = adj[c][v - 1]
            if not seen[w]:
                seen[w] = 1
                out.append(w)
                stack.append(w)
    out.sort()
    return out


def residues(g: ColouredGraph, colours) -> list:
    """All B-residues: components of the subgraph coloured by B.

    B may be empty, in which case every vertex is its own residue.
    """
    cset = sorted(set(colours))
    for c in cset:
        if not 0 <= c <= g.n:
            raise ValueError(f"colour {c} not in 0..{g.n}")
    fs = frozenset(cset)
    adj = g._adj
    seen = bytearray(g.order + 1)
    out = []
    for v in g.vertices():
        if seen[v]:
            continue
        comp = _component(adj, cset, v, g.order)
        for w in comp:
            seen[w] = 1
        out.append(Residue(fs, tuple(comp)))
    return out


def is_connected(g: ColouredGraph) -> bool:
    return len(_component(g._adj, range(g.n + 1), 1, g.order)) == g.order


def is_bipartite(g: ColouredGraph) -> bool:
    """Whether the vertex set 2-colours with every edge crossing classes."""
    if not is_connected(g):
        raise ValueError("bipartiteness test requires a connected graph")
    side = bytearray(g.order + 1)
    side[1] = 1  # 1 or 2; 0 = unvisited
    stack = [1]
    adj = g._adj
    while stack:
        v = stack.pop()
        s = 3 - side[v]
        for c in range(g.n + 1):
            w = adj[c][v - 1]
            if side[w] == 0:
                side[w] = s
                stack.append(w)
            elif side[w] != s:
                return False
    return True


def bicoloured_cycle(g: ColouredGraph, v: int, c: int, d: int) -> tuple:
    """The {c,d}-cycle through v, as vertices in walk order starting at v.

    The walk leaves v along its c-edge; the cycle has even length, so the
    closing edge back to v is d-coloured.
    """
    adj_c, adj_d = g._adj[c], g._adj[d]
    walk = [v]
    w = adj_c[v - 1]
    use_d = True
    while w != v:
        walk.append(w)
        w = adj_d[w - 1] if use_d else adj_c[w - 1]
        use_d = not use_d
    return tuple(walk)


def bicoloured_cycles(g: ColouredGraph, c: int, d: int) -> list:
    """All {c,d}-cycles, each a walk-ordered vertex tuple, by least vertex."""
    seen = bytearray(g.order + 1)
    out = []
    for v in g.vertices():
        if seen[v]:
            continue
        cyc = bicoloured_cycle(g, v, c, d)
        for w in cyc:
            seen[w] = 1
        out.append(cyc)
    return out


def count_bicoloured_cycles(g: ColouredGraph, c: int, d: int) -> int:
    return len(bicoloured_cycles(g, c, d))


def euler_characteristic(g: ColouredGraph) -> int:
    """Euler characteristic of the dual coloured complex (4-coloured only).

    h-cells of the complex correspond to residues over the complementary
    colour sets of size 3-h; edges and vertices come in as 2- and 3-cells.
    """
    if g.n != 3:
        raise ValueError("Euler characteristic is defined here for 4-coloured graphs")
    if not is_connected(g):
        raise ValueError("Euler characteristic requires a connected graph")
    three = sum(len(residues(g, b)) for b in combinations(range(4), 3))
    two = sum(count_bicoloured_cycles(g, c, d) for c, d in combinations(range(4), 2))
    edges = 4 * g.order // 2
    return three - two + edges - g.order


def surface_check(g: ColouredGraph) -> dict:
    """Euler characteristic of every i-complement residue, per colour i.

    Returns {i: [(residue, chi), ...]}.  A 4-coloured graph encodes a closed
    3-manifold exactly when every listed chi equals 2 (all residues are
    sphere gems).
    """
    if g.n != 3:
        raise ValueError("surface check applies to 4-coloured graphs")
    out = {}
    for i in range(4):
        rest = [c for c in range(4) if c != i]
        entries = []
        for res in residues(g, rest):
            q = len(res.members) // 2
            cycles = 0
            for c, d in combinations(rest, 2):
                seen = set()
                for v in res.members:
                    if v not in seen:
                        seen.update(bicoloured_cycle(g, v, c, d))
                        cycles += 1
            entries.append((res, cycles - q))
        out[i] = entries
    return out


def is_contracted(g: ColouredGraph) -> bool:
    """One i-complement residue per colour i."""
    if g.n != 3:
        raise ValueError("contractedness is defined here for 4-coloured graphs")
    if not is_connected(g):
        return False
    for i in range(4):
        rest = [c for c in range(4) if c != i]
        if len(_component(g._adj, rest, 1, g.order)) != g.order:
            return False
    return True


def is_crystallization(g: ColouredGraph) -> bool:
    """Contracted and every i-complement residue is a sphere gem."""
    if not is_contracted(g):
        return False
    return all(chi == 2 for entries in surface_check(g).values() for _, chi in entries)


def connected_sum(g1: ColouredGraph, g2: ColouredGraph, x: int, y: int) -> ColouredGraph:
    """Remove x from g1 and y from g2, welding hanging edges colourwise.

    Both graphs must be 4-coloured; the result represents the connected sum
    of the two underlying manifolds.  For non-bipartite summands the two
    inequivalent sums are reached through the choice of x and y.
    """
    if g1.n != 3 or g2.n != 3:
        raise ValueError("connected sum is defined for 4-coloured graphs")
    if not 1 <= x <= g1.order:
        raise ValueError(f"vertex {x} out of range for left summand")
    if not 1 <= y <= g2.order:
        raise ValueError(f"vertex {y} out of range for right summand")
    # Renumber: g1 keeps order skipping x; g2 appended, skipping y.
    map1 = {}
    k = 0
    for v in g1.vertices():
        if v != x:
            k += 1
            map1[v] = k
    map2 = {}
    for v in g2.vertices():
        if v != y:
            k += 1
            map2[v] = k
    order = k
    tables = []
    for c in range(4):
        t = [0] * order
        for v in g1.vertices():
            if v == x:
                continue
            w = g1._adj[c][v - 1]
            if w != x:
                t[map1[v] - 1] = map1[w]
        for v in g2.vertices():
            if v == y:
                continue
            w = g2._adj[c][v - 1]
            if w != y:
                t[map2[v] - 1] = map2[w]
        a = map1[g1._adj[c][x - 1]]
        b = map2[g2._adj[c][y - 1]]
        t[a - 1], t[b - 1] = b, a
        tables.append(t)
    return ColouredGraph(3, tables)


def _cap_piece(g: ColouredGraph, members, cut) -> ColouredGraph:
    """Relabel a component densely and cap its four hanging edges.

    cut maps colour -> the member vertex whose c-edge was severed; the new
    cap vertex takes the last index.
    """
    relabel = {v: i + 1 for i, v in enumerate(sorted(members))}
    order = len(members) + 1
    cap = order
    tables = []
    for c in range(4):
        t = [0] * order
        for v in members:
            w = g._adj[c][v - 1]
            if v == cut[c]:
                t[relabel[v] - 1] = cap
                t[cap - 1] = relabel[v]
            else:
                t[relabel[v] - 1] = relabel[w]
        tables.append(t)
    return ColouredGraph(3, tables)


def find_sum_split(g: ColouredGraph):
    """First nontrivial 4-edge cut, one edge per colour, in lex edge order.

    Returns a SumSplit whose capped pieces represent the two summands, or
    None.  Splits producing an order-2 piece (a trivial 3-sphere summand)
    are rejected.
    """
    if g.n != 3:
        raise ValueError("sum splitting is defined for 4-coloured graphs")
    order = g.order
    adj = g._adj
    edge_lists = [g.edges(c) for c in range(4)]
    seen = bytearray(order + 1)
    stamp = 0
    seen_at = [0] * (order + 1)

    def side_of(a, b, cut_pairs):
        # Vertices reachable from a avoiding the four cut edges; None if b reached.
        nonlocal stamp
        stamp += 1
        seen_at[a] = stamp
        stack = [a]
        comp = [a]
        while stack:
            v = stack.pop()
            for c in range(4):
                w = adj[c][v - 1]
                lo, hi = (v, w) if v < w else (w, v)
                if (c, lo, hi) in cut_pairs:
                    continue
                if w == b:
                    return None
                if seen_at[w] != stamp:
                    seen_at[w] = stamp
                    comp.append(w)
                    stack.append(w)
        return comp

    for e0 in edge_lists[0]:
        for e1 in edge_lists[1]:
            for e2 in edge_lists[2]:
                for e3 in edge_lists[3]:
                    quad = (e0, e1, e2, e3)
                    cut_pairs = {(c, u, v) for c, (u, v) in enumerate(quad)}
                    a, b = e0
                    left = side_of(a, b, cut_pairs)
                    if left is None:
                        continue
                    left_set = set(left)
                    if len(left_set) + 1 == order or len(left_set) == 1:
                        continue  # order-2 piece after capping: trivial
                    # All four cut edges must cross the partition.
                    if not all((u in left_set) != (v in left_set) for u, v in quad):
                        continue
                    right_set = [v for v in g.vertices() if v not in left_set]
                    # Exactly two pieces: the complement must also be connected.
                    comp_b = side_of(b, 0, cut_pairs)
                    if comp_b is None or len(comp_b) != len(right_set):
                        continue
                    cut_left = {c: (u if u in left_set else v) for c, (u, v) in enumerate(quad)}
                    cut_right = {c: (v if u in left_set else u) for c, (u, v) in enumerate(quad)}
                    lp = _cap_piece(g, left_set, cut_left)
                    rp = _cap_piece(g, right_set, cut_right)
                    cut = tuple(
                        (c, cut_left[c], cut_right[c]) for c in range(4)
                    )
                    return SumSplit(cut, lp, rp)
    return None


def relabel_graph(g: ColouredGraph, perm) -> ColouredGraph:
    """Apply a vertex permutation; perm maps old vertex -> new vertex."""
    tables = []
    for c in range(g.n + 1):
        t = [0] * g.order
        for v in g.vertices():
            t[perm[v] - 1] = perm[g._adj[c][v - 1]]
        tables.append(t)
    return ColouredGraph(g.n, tables)


def permute_colours(g: ColouredGraph, phi) -> ColouredGraph:
    """Recolour edges; phi maps old colour -> new colour."""
    tables = [None] * (g.n + 1)
    for c in range(g.n + 1):
        tables[phi[c]] = g._adj[c]
    return ColouredGraph(g.n, tables)
