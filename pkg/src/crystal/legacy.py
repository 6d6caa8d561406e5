"""Best-effort decoder for externally printed crystallization codes.

The published catalogue strings use an undocumented rooted-numbering format.
This decoder tries a small set of documented candidate conventions and
accepts a result only if it passes every structural check: fixed-point-free
involutions, connectedness, crystallization, rigidity, non-bipartiteness
and, when given, the expected vertex count.  Anything else yields None plus
a diagnostic; nothing downstream depends on success.
"""

from __future__ import annotations

from .graphs import ColouredGraph, is_bipartite, is_connected, is_crystallization
from .moves import find_rho_pairs


def _letter_value_halves(ch: str, p: int):
    """Uppercase A.. is 1..p, lowercase a.. is p+1..2p."""
    if "A" <= ch <= "Z":
        v = ord(ch) - ord("A") + 1
        return v if v <= p else None
    if "a" <= ch <= "z":
        v = ord(ch) - ord("a") + 1
        return p + v if v <= p else None
    return None


def _letter_value_flat(ch: str):
    """Case-insensitive run: A..Z is 1..26, a..z is 27..52."""
    if "A" <= ch <= "Z":
        return ord(ch) - ord("A") + 1
    if "a" <= ch <= "z":
        return ord(ch) - ord("a") + 27
    return None


def _try_vertex_blocks(text: str):
    """Four blocks of 2p characters listing every vertex's neighbour."""
    if len(text) % 8:
        return None, "length not divisible by 8"
    order = len(text) // 4
    tables = []
    for c in range(4):
        block = text[c * order : (c + 1) * order]
        t = []
        for ch in block:
            v = _letter_value_flat(ch)
            if v is None or v > order:
                return None, f"symbol {ch!r} out of range for order {order}"
            t.append(v)
        tables.append(t)
    try:
        return ColouredGraph(3, tables), None
    except ValueError as exc:
        return None, str(exc)


def _try_half_blocks(text: str):
    """Four blocks of p characters giving neighbours of vertices 1..p.

    Neighbours use uppercase for 1..p and lowercase for p+1..2p; the lower
    half of each involution must be recoverable by symmetry.
    """
    if len(text) % 4:
        return None, "length not divisible by 4"
    p = len(text) // 4
    order = 2 * p
    tables = []
    for c in range(4):
        block = text[c * p : (c + 1) * p]
        t = [0] * order
        for i, ch in enumerate(block, start=1):
            v = _letter_value_halves(ch, p)
            if v is None:
                return None, f"symbol {ch!r} out of range for p={p}"
            if t[i - 1] and t[i - 1] != v:
                return None, f"colour {c}: conflicting partners for vertex {i}"
            t[i - 1] = v
            if t[v - 1] and t[v - 1] != i:
                return None, f"colour {c}: conflicting partners for vertex {v}"
            t[v - 1] = i
        if any(x == 0 for x in t):
            return None, f"colour {c}: block does not determine the involution"
        tables.append(t)
    try:
        return ColouredGraph(3, tables), None
    except ValueError as exc:
        return None, str(exc)


_CONVENTIONS = (
    ("vertex-blocks", _try_vertex_blocks),
    ("half-blocks", _try_half_blocks),
)


def decode_legacy_code(text: str, expected_order: int | None = None):
    """Attempt to decode; returns (graph or None, diagnostic string).

    A graph is returned only when some convention yields a rigid
    non-bipartite crystallization of the expected order.
    """
    if not text or not text.isalpha():
        return None, "input is not a letter string"
    notes = []
    for name, attempt in _CONVENTIONS:
        g, why = attempt(text)
        if g is None:
            notes.append(f"{name}: {why}")
            continue
        if expected_order is not None and g.order != expected_order:
            notes.append(f"{name}: order {g.order}, expected {expected_order}")
            continue
        if not is_connected(g):
            notes.append(f"{name}: disconnected")
            continue
        if not is_crystallization(g):
            notes.append(f"{name}: not a crystallization")
            continue
        if find_rho_pairs(g):
            notes.append(f"{name}: not rigid")
            continue
        if is_bipartite(g):
            notes.append(f"{name}: bipartite")
            continue
        return g, f"{name}: accepted"
    return None, "; ".join(notes) if notes else "no convention applies"


# The nine representative strings printed for the 28- and 30-vertex classes,
# keyed by their published index.  Kept verbatim for the conditional
# homology cross-check; index 2 appears to have lost one character in the
# source and cannot decode under any length-consistent convention.
PUBLISHED_CODES = {
    1: "CABFDEIGHLJKNMINDCMGFJLHEAKBJhKnHljbDgCfLdGEkiBMAeNacmFI",
    2: "DABCHEFGKIJMLONKNFEDCBIHLOJGMAGliNOkADcofbKHjgLIhJManCEmBFd",
    3: "DABCGEFJHIMKLONJNLEDCHGKOIFBMAMieKcJIobFDOAChmGnkNjBLgfdHaEl",
    4: "CABFDEIGHLJKNMIMDCKGFJNHEBLAMIFBHjNlDfnhAkmdJiLcKebCGEag",
    5: "EABCDIFGHLJKOMNLONGFEDCJIMAKHBMkIHNBlDCmbgjEGJfihnKodcAFOaeL",
    6: "DABCGEFJHIMKLONJMOEDNHGKAIFBLCKehObIkcmEgDiCLGJnljMANfBaoFHd",
    7: "DABCGEFJHIMKLONJMOEDNHGKAIFBLCKigOmIckbEhDeCLHFnljBNAfMaoJGd",
    8: "DABCGEFJHIMKLONJMOEDNHGKAIFBLCKJgOmjcAMfHDeCLhFnlIBNkEbaoiGd",
    9: "DABCGEFJHIMKLONJMOEDNHGKAIFBLCKFNiMOAndmGDjhBgoHlJbkCLEaIecf",
}

# Expected first homology of the nine classes, as (rank, torsion).
PUBLISHED_H1 = {
    1: (1, (2,)),
    2: (1, (3,)),
    3: (1, (2, 2)),
    4: (1, ()),
    5: (1, (2,)),
    6: (2, ()),
    7: (2, ()),
    8: (1, (8,)),
    9: (1, ()),
}
