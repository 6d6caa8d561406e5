"""Manifold invariants computed from a coloured graph.

The dual complex of a 4-coloured graph has one h-cell per residue over a
colour set of size 3-h; its integer simplicial homology is read off Smith
normal forms of the boundary matrices.  Fundamental-group presentations are
extracted from two complementary pairs of bicoloured cycles and must
abelianize to the same H1 (the module's cross-check).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .graphs import ColouredGraph, bicoloured_cycle, bicoloured_cycles, residues


@dataclass(frozen=True)
class AbelianGroup:
    """A finitely generated abelian group in invariant-factor form."""

    rank: int
    torsion: tuple  # d1 | d2 | ..., each >= 2

    def __str__(self):
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z{d}" for d in self.torsion)
        return "+".join(parts) if parts else "0"

    @property
    def is_trivial(self):
        return self.rank == 0 and not self.torsion


@dataclass(frozen=True)
class Presentation:
    """A finite group presentation; relators are signed generator sequences."""

    generators: int
    relators: tuple  # tuple of tuples of nonzero ints, |g| <= generators

    def __post_init__(self):
        for rel in self.relators:
            for x in rel:
                if x == 0 or abs(x) > self.generators:
                    raise ValueError(f"relator letter {x} out of range")


@dataclass(frozen=True)
class ChainComplex:
    """Cells (as residues) per dimension 0..3 and boundary matrices 1..3."""

    cells: tuple  # cells[h] = list of Residue
    boundaries: tuple  # boundaries[k] = matrix of d_{k+1}: C_{k+1} -> C_k


def smith_invariant_factors(rows) -> list:
    """Nonzero invariant factors of an integer matrix, in divisibility order."""
    a = [list(r) for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    t = 0
    factors = []
    while True:
        pivot = None
        best = None
        for i in range(t, m):
            ai = a[i]
            for j in range(t, n):
                v = ai[j]
                if v and (best is None or abs(v) < best):
                    best = abs(v)
                    pivot = (i, j)
                    if best == 1:
                        break
            if best == 1:
                break
        if pivot is None:
            break
        pi, pj = pivot
        a[t], a[pi] = a[pi], a[t]
        if pj != t:
            for row in a:
                row[t], row[pj] = row[pj], row[t]
        # Clear column t, then row t; restart if a remainder shrinks the pivot.
        dirty = False
        p = a[t][t]
        for i in range(t + 1, m):
            if a[i][t]:
                q = a[i][t] // p
                if q:
                    at = a[t]
                    ai = a[i]
                    for j in range(t, n):
                        ai[j] -= q * at[j]
                if a[i][t]:
                    dirty = True
        if dirty:
            continue
        for j in range(t + 1, n):
            if a[t][j]:
                q = a[t][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    dirty = True
        if dirty:
            continue
        # Divisibility: fold any non-multiple below-right into row t and redo.
        for i in range(t + 1, m):
            ai = a[i]
            if any(v % p for v in ai[t:]):
                at = a[t]
                for j in range(t, n):
                    at[j] += ai[j]
                dirty = True
                break
        if dirty:
            continue
        factors.append(abs(p))
        t += 1
    return factors


def _group_from_relations(n_generators: int, relation_rows) -> AbelianGroup:
    factors = smith_invariant_factors(relation_rows) if relation_rows else []
    rank = n_generators - len(factors)
    torsion = tuple(d for d in factors if d > 1)
    return AbelianGroup(rank, torsion)


def chain_complex(g: ColouredGraph) -> ChainComplex:
    """Dual-complex cells and boundary matrices of a 4-coloured graph."""
    if g.n != 3:
        raise ValueError("chain complex is defined for 4-coloured graphs")
    all_colours = (0, 1, 2, 3)
    cells = []
    index = []  # per dimension: {colour set B: {vertex: cell index}}
    for h in range(4):
        size = 3 - h
        dim_cells = []
        dim_index = {}
        for b in combinations(all_colours, size):
            lookup = {}
            for res in residues(g, b):
                idx = len(dim_cells)
                dim_cells.append(res)
                for v in res.members:
                    lookup[v] = idx
            dim_index[b] = lookup
        cells.append(dim_cells)
        index.append(dim_index)
    boundaries = []
    for h in range(1, 4):
        rows = len(cells[h - 1])
        mat = [[0] * len(cells[h]) for _ in range(rows)]
        for col, res in enumerate(cells[h]):
            b = tuple(sorted(res.colours))
            rest = [d for d in all_colours if d not in res.colours]
            rep = res.members[0]
            for pos, d in enumerate(rest):
                bd = tuple(sorted(b + (d,)))
                row = index[h - 1][bd][rep]
                mat[row][col] += -1 if pos % 2 else 1
        boundaries.append(mat)
    cc = ChainComplex(tuple(cells), tuple(boundaries))
    _check_square_zero(cc)
    return cc


def _check_square_zero(cc: ChainComplex):
    for k in (1, 2):
        a, b = cc.boundaries[k - 1], cc.boundaries[k]
        for j in range(len(b[0]) if b else 0):
            col = [row[j] for row in b]
            for i in range(len(a)):
                s = sum(a[i][t] * col[t] for t in range(len(col)) if col[t])
                if s:
                    raise RuntimeError(
                        f"boundary composition nonzero at dim {k + 1}: cell {j}"
                    )


def homology(g: ColouredGraph) -> list:
    """Integer homology H0..H3 of the dual complex."""
    cc = chain_complex(g)
    sizes = [len(c) for c in cc.cells]
    facs = [smith_invariant_factors(m) for m in cc.boundaries]
    ranks = [0] + [len(f) for f in facs] + [0]  # rank of d_k, k = 0..4
    out = []
    for k in range(4):
        free = sizes[k] - ranks[k] - ranks[k + 1]
        torsion = tuple(d for d in facs[k] if d > 1) if k < 3 else ()
        out.append(AbelianGroup(free, torsion))
    return out


def pi1_presentation(g: ColouredGraph, pair) -> Presentation:
    """Fundamental-group presentation from a pair of colours.

    Generators are the {i,j}-cycles except the one through vertex 1; each
    remaining {h,k}-cycle contributes a relator: walking from its least
    vertex toward its h-edge, every vertex contributes the generator of its
    {i,j}-cycle, with exponent +1 when entered along h and -1 along k.
    """
    if g.n != 3:
        raise ValueError("presentations are extracted from 4-coloured graphs")
    i, j = sorted(pair)
    if not (0 <= i < j <= 3):
        raise ValueError(f"bad colour pair {pair}")
    h, k = [c for c in range(4) if c not in (i, j)]
    gen_of = [0] * (g.order + 1)
    n_gens = 0
    for cyc in bicoloured_cycles(g, i, j):
        if 1 in cyc:
            continue  # designated dropped generator
        n_gens += 1
        for v in cyc:
            gen_of[v] = n_gens
    relators = []
    for cyc in bicoloured_cycles(g, h, k):
        if 1 in cyc:
            continue  # designated dropped relator
        v0 = min(cyc)
        walk = bicoloured_cycle(g, v0, h, k)
        ln = len(walk)
        word = []
        for t in range(1, ln + 1):
            v = walk[t % ln]
            gen = gen_of[v]
            if gen:
                word.append(gen if t % 2 else -gen)
        relators.append(tuple(word))
    return Presentation(n_gens, tuple(relators))


def abelianize(p: Presentation) -> AbelianGroup:
    """Exponent-sum relation matrix reduced to invariant-factor form."""
    rows = []
    for rel in p.relators:
        row = [0] * p.generators
        for x in rel:
            row[abs(x) - 1] += 1 if x > 0 else -1
        rows.append(row)
    if not rows:
        return AbelianGroup(p.generators, ())
    return _group_from_relations(p.generators, rows)


def format_presentation(p: Presentation) -> str:
    """Render as < a,b,... | word, word >; inverses are uppercase letters."""
    if p.generators > 26:
        raise ValueError("presentation printing supports at most 26 generators")
    gens = ",".join(chr(ord("a") + t) for t in range(p.generators))
    words = []
    for rel in p.relators:
        letters = [
            chr(ord("a") + abs(x) - 1) if x > 0 else chr(ord("A") + abs(x) - 1)
            for x in rel
        ]
        words.append("".join(letters) if letters else "1")
    return f"< {gens} | {', '.join(words)} >"
