"""Facet-gluing triangulations and their barycentric coloured graphs.

A triangulation is a list of tetrahedra with every face glued to a face by
a vertex bijection.  Its first barycentric subdivision carries a canonical
dimension colouring, and the dual 4-coloured graph has one vertex per flag
(vertex in edge in face in tetrahedron): 24 per tetrahedron.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .graphs import ColouredGraph

_LINE = re.compile(
    r"^tet\s+(\d+)\s*:\s*face\s+(\d+)\s*->\s*tet\s+(\d+)\s+face\s+(\d+)\s+perm\s+(\d{3})$"
)


@dataclass(frozen=True)
class FacetGluing:
    """gluings[(t, f)] = (t2, f2, vmap) with vmap over face-f vertex labels."""

    tet_count: int
    gluings: dict

    def __post_init__(self):
        for (t, f), (t2, f2, vmap) in self.gluings.items():
            back = self.gluings.get((t2, f2))
            if back is None:
                raise ValueError(f"face ({t2},{f2}) is not glued back")
            bt, bf, bmap = back
            if (bt, bf) != (t, f):
                raise ValueError(f"gluing of ({t},{f}) is not involutive")
            for v, w in vmap.items():
                if bmap.get(w) != v:
                    raise ValueError(f"vertex maps of ({t},{f}) are not mutually inverse")
            if (t2, f2) == (t, f):
                fixed = [v for v, w in vmap.items() if v == w]
                if len(fixed) != 1:
                    raise ValueError(
                        f"self-gluing of ({t},{f}) must swap two vertices"
                    )


def faces_of(f: int) -> tuple:
    """Vertex labels of the face opposite vertex f, ascending."""
    return tuple(v for v in range(4) if v != f)


def parse_facet_gluing(text: str) -> FacetGluing:
    """Parse the line format 'tet T: face F -> tet T2 face F2 perm ABC'.

    The three perm digits are the images, on the target face, of the source
    face's vertices taken in ascending label order.
    """
    gluings = {}
    max_tet = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _LINE.match(line)
        if not m:
            raise ValueError(f"line {lineno}: cannot parse {line!r}")
        t, f, t2, f2 = (int(m.group(i)) for i in range(1, 5))
        digits = [int(ch) for ch in m.group(5)]
        if not (0 <= f <= 3 and 0 <= f2 <= 3):
            raise ValueError(f"line {lineno}: face labels must be 0..3")
        if sorted(digits) != sorted(faces_of(f2)):
            raise ValueError(
                f"line {lineno}: perm {m.group(5)} is not onto face {f2}'s vertices"
            )
        vmap = dict(zip(faces_of(f), digits))
        if (t, f) in gluings:
            raise ValueError(f"line {lineno}: face ({t},{f}) glued twice")
        gluings[(t, f)] = (t2, f2, vmap)
        max_tet = max(max_tet, t, t2)
    tet_count = max_tet + 1
    for t in range(tet_count):
        for f in range(4):
            if (t, f) not in gluings:
                raise ValueError(f"dangling face ({t},{f})")
    return FacetGluing(tet_count, gluings)


def gluing_text(fg: FacetGluing) -> str:
    """Serialize back to the line format (one line per gluing, both sides)."""
    lines = []
    for (t, f) in sorted(fg.gluings):
        t2, f2, vmap = fg.gluings[(t, f)]
        perm = "".join(str(vmap[v]) for v in faces_of(f))
        lines.append(f"tet {t}: face {f} -> tet {t2} face {f2} perm {perm}")
    return "\n".join(lines) + "\n"


def barycentric_coloured_graph(fg: FacetGluing) -> ColouredGraph:
    """Dual 4-coloured graph of the dimension-coloured barycentric subdivision.

    Vertices are flags (t, v, w, f): vertex v of edge {v,w} of the face
    opposite vertex f.  The colour-c neighbour differs in the dimension-c
    constituent only; colour 3 crosses the face gluing.
    """
    flags = []
    for t in range(fg.tet_count):
        for f in range(4):
            for v in faces_of(f):
                for w in faces_of(f):
                    if w != v:
                        flags.append((t, v, w, f))
    index = {flag: i + 1 for i, flag in enumerate(flags)}
    order = len(flags)
    tables = [[0] * order for _ in range(4)]
    for flag, i in index.items():
        t, v, w, f = flag
        z = next(x for x in faces_of(f) if x not in (v, w))
        f2 = next(x for x in range(4) if x not in (v, w, f))
        tables[0][i - 1] = index[(t, w, v, f)]
        tables[1][i - 1] = index[(t, v, z, f)]
        tables[2][i - 1] = index[(t, v, w, f2)]
        t2, g2, vmap = fg.gluings[(t, f)]
        tables[3][i - 1] = index[(t2, vmap[v], vmap[w], g2)]
    return ColouredGraph(3, tables)


def facet_gluing_of(g: ColouredGraph) -> FacetGluing:
    """The coloured triangulation of a 4-coloured graph as a facet gluing.

    One tetrahedron per graph vertex; the face opposite colour c glues
    identically to the same face of the colour-c neighbour.
    """
    if g.n != 3:
        raise ValueError("facet gluings arise from 4-coloured graphs")
    gluings = {}
    for v in g.vertices():
        for c in range(4):
            w = g.neighbour(v, c)
            gluings[(v - 1, c)] = (w - 1, c, {x: x for x in faces_of(c)})
    return FacetGluing(g.order, gluings)
