"""Canonical codes and colour-isomorphism for coloured graphs.

The code of a connected graph is the lexicographic minimum, over all root
vertices with minimal refinement key and all colour permutations, of the
involution tables relabelled by a breadth-first numbering (colours scanned
in permuted order at each vertex, tables serialized colour-major).  Two
graphs get equal codes exactly when some vertex relabelling and colour
permutation carries one onto the other.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations

from .graphs import ColouredGraph

# Symbol i encodes vertex i+1; supports graphs up to 64 vertices.
ALPHABET = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/"
_VALUE = {ch: i + 1 for i, ch in enumerate(ALPHABET)}


@dataclass(frozen=True)
class OrderedGraph:
    """A graph relabelled into canonical form, with the winning numbering.

    ordering[v-1] is the canonical number of original vertex v.
    """

    graph: ColouredGraph
    ordering: tuple


def _root_keys(n: int, order: int, tables):
    """Label- and colour-permutation-invariant vertex keys (one refinement)."""
    pair_len = [[0] * (order + 1) for _ in range((n + 1) * n // 2)]
    for pi, (c, d) in enumerate(combinations(range(n + 1), 2)):
        tc, td = tables[c], tables[d]
        lens = pair_len[pi]
        for v in range(1, order + 1):
            if lens[v]:
                continue
            cyc = [v]
            w = tc[v - 1]
            use_d = True
            while w != v:
                cyc.append(w)
                w = td[w - 1] if use_d else tc[w - 1]
                use_d = not use_d
            ln = len(cyc)
            for u in cyc:
                lens[u] = ln
    base = [None] * (order + 1)
    for v in range(1, order + 1):
        base[v] = tuple(sorted(pl[v] for pl in pair_len))
    keys = [None] * (order + 1)
    for v in range(1, order + 1):
        nbr = sorted(base[tables[c][v - 1]] for c in range(n + 1))
        keys[v] = (base[v], tuple(nbr))
    return keys


def _min_candidate(n: int, order: int, tables):
    """Minimal serialization with its numbering and colour permutation."""
    keys = _root_keys(n, order, tables)
    kmin = min(keys[1:])
    roots = [v for v in range(1, order + 1) if keys[v] == kmin]
    best = None
    best_number = None
    rng = range(1, order + 1)
    for r in roots:
        for phi in permutations(range(n + 1)):
            number = [0] * (order + 1)
            orig = [0] * (order + 1)
            number[r] = 1
            orig[1] = r
            cnt = 1
            qi = 1
            while qi <= cnt:
                v = orig[qi]
                qi += 1
                for c in phi:
                    w = tables[c][v - 1]
                    if not number[w]:
                        cnt += 1
                        number[w] = cnt
                        orig[cnt] = w
            if cnt != order:
                raise ValueError("code requires a connected graph")
            cand = []
            for c in phi:
                tc = tables[c]
                cand.extend(number[tc[orig[u] - 1]] for u in rng)
            if best is None or cand < best:
                best = cand
                best_number = tuple(number[1:])
    return best, best_number


def code_tables(n: int, tables) -> str:
    """Canonical code computed directly from involution tables."""
    order = len(tables[0])
    best, _ = _min_candidate(n, order, tables)
    payload = "".join(ALPHABET[x - 1] for x in best)
    return f"c{n}|{order}|{payload}"


def automorphisms(g: ColouredGraph) -> list:
    """All colour-permuting automorphisms, as old-vertex -> new-vertex maps.

    Every (root, colour permutation) whose breadth-first serialization
    realizes the canonical minimum yields one automorphism: compose its
    numbering with the inverse of a fixed minimal numbering.
    """
    n, order, tables = g.n, g.order, g.tables()
    keys = _root_keys(n, order, tables)
    kmin = min(keys[1:])
    roots = [v for v in range(1, order + 1) if keys[v] == kmin]
    best = None
    numberings = []
    rng = range(1, order + 1)
    for r in roots:
        for phi in permutations(range(n + 1)):
            number = [0] * (order + 1)
            orig = [0] * (order + 1)
            number[r] = 1
            orig[1] = r
            cnt = 1
            qi = 1
            while qi <= cnt:
                v = orig[qi]
                qi += 1
                for c in phi:
                    w = tables[c][v - 1]
                    if not number[w]:
                        cnt += 1
                        number[w] = cnt
                        orig[cnt] = w
            if cnt != order:
                raise ValueError("automorphisms require a connected graph")
            cand = []
            for c in phi:
                tc = tables[c]
                cand.extend(number[tc[orig[u] - 1]] for u in rng)
            if best is None or cand < best:
                best = cand
                numberings = [tuple(number[1:])]
            elif cand == best:
                numberings.append(tuple(number[1:]))
    base = numberings[0]
    inv = [0] * (order + 1)
    for v in rng:
        inv[base[v - 1]] = v
    out = []
    for num in numberings:
        out.append(tuple(inv[num[v - 1]] for v in rng))
    return out


def code(g: ColouredGraph) -> str:
    """Canonical code of a connected coloured graph."""
    return code_tables(g.n, g.tables())


def raw_text(g: ColouredGraph) -> str:
    """Serialize a graph as-is (identity numbering), decodable by decode."""
    parts = []
    for c in range(g.n + 1):
        parts.extend(ALPHABET[g.neighbour(v, c) - 1] for v in g.vertices())
    return f"c{g.n}|{g.order}|" + "".join(parts)


def decode(text: str) -> ColouredGraph:
    """Parse a serialized graph; the inverse of code/raw_text serialization."""
    if not isinstance(text, str) or not text.startswith("c"):
        raise ValueError("malformed code at position 0: expected 'c' prefix")
    head = text.split("|", 2)
    if len(head) != 3:
        raise ValueError("malformed code: expected 'c<n>|<order>|<payload>'")
    try:
        n = int(head[0][1:])
    except ValueError:
        raise ValueError("malformed code at position 1: bad arity") from None
    try:
        order = int(head[1])
    except ValueError:
        raise ValueError(f"malformed code at position {len(head[0]) + 1}: bad order") from None
    if n not in (2, 3):
        raise ValueError(f"malformed code: arity {n} unsupported")
    if order <= 0 or order % 2 or order > len(ALPHABET):
        raise ValueError(f"malformed code: order {order} out of range")
    payload = head[2]
    offset = len(head[0]) + len(head[1]) + 2
    if len(payload) != (n + 1) * order:
        raise ValueError(
            f"malformed code at position {offset + len(payload)}: "
            f"expected {(n + 1) * order} symbols, got {len(payload)}"
        )
    tables = []
    for c in range(n + 1):
        t = []
        for i in range(order):
            ch = payload[c * order + i]
            if ch not in _VALUE:
                raise ValueError(
                    f"malformed code at position {offset + c * order + i}: bad symbol {ch!r}"
                )
            t.append(_VALUE[ch])
        tables.append(t)
    return ColouredGraph(n, tables)


def canonical_order(g: ColouredGraph) -> OrderedGraph:
    """Relabel g into the form realizing its code, keeping the numbering."""
    best, number = _min_candidate(g.n, g.order, g.tables())
    order = g.order
    tables = [best[c * order : (c + 1) * order] for c in range(g.n + 1)]
    return OrderedGraph(ColouredGraph(g.n, tables), number)


def is_colour_isomorphic(g1: ColouredGraph, g2: ColouredGraph) -> bool:
    if g1.n != g2.n or g1.order != g2.order:
        return False
    return code(g1) == code(g2)
