"""Plain-text persistence for catalogues and classification results.

One catalogue file per vertex count and parity class, codes sorted, plus a
class-file format for classification output.  Writes go through a temp file
and an atomic rename.
"""

from __future__ import annotations

import os
import tempfile

from .canon import decode
from .census import Catalogue, build_catalogue
from .classify import ClassRecord

_KINDS = ("bipartite", "nonbipartite")


def _atomic_write(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def catalogue_paths(directory: str, two_p: int):
    return {
        kind: os.path.join(directory, f"gems.{two_p}.{kind}.txt") for kind in _KINDS
    }


def write_catalogue(cat: Catalogue, directory: str) -> dict:
    """Write both parity files; returns {kind: path}."""
    paths = catalogue_paths(directory, cat.vertex_count)
    for kind, codes in (
        ("bipartite", cat.bipartite_codes),
        ("nonbipartite", cat.non_bipartite_codes),
    ):
        lines = [f"GEMS v1 {cat.vertex_count} {kind} {len(codes)}"]
        lines.extend(codes)
        _atomic_write(paths[kind], "\n".join(lines) + "\n")
    return paths


def read_catalogue_file(path: str):
    """Parse one parity file; returns (two_p, kind, codes)."""
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    if not lines:
        raise ValueError(f"{path}: empty catalogue file")
    head = lines[0].split()
    if len(head) != 5 or head[0] != "GEMS" or head[1] != "v1":
        raise ValueError(f"{path}: bad header {lines[0]!r}")
    two_p, kind, count = int(head[2]), head[3], int(head[4])
    if kind not in _KINDS:
        raise ValueError(f"{path}: bad parity {kind!r}")
    codes = [ln for ln in lines[1:] if ln]
    if len(codes) != count:
        raise ValueError(f"{path}: header says {count} codes, found {len(codes)}")
    if codes != sorted(codes):
        raise ValueError(f"{path}: codes not sorted")
    return two_p, kind, codes


def load_catalogue(directory: str, two_p: int):
    """Read both parity files if present; None when either is missing."""
    paths = catalogue_paths(directory, two_p)
    if not all(os.path.exists(p) for p in paths.values()):
        return None
    data = {}
    for kind, path in paths.items():
        ftwo_p, fkind, codes = read_catalogue_file(path)
        if ftwo_p != two_p or fkind != kind:
            raise ValueError(f"{path}: header does not match its name")
        data[kind] = tuple(codes)
    return Catalogue(two_p, data["bipartite"], data["nonbipartite"])


def ensure_catalogue(
    two_p: int,
    directory: str | None = None,
    threads: int = 1,
    engine=None,
    resume: bool = True,
) -> Catalogue:
    """Load a cached catalogue or build and persist it."""
    if directory is not None and resume:
        cached = load_catalogue(directory, two_p)
        if cached is not None:
            return cached
    cat = build_catalogue(two_p, threads=threads, engine=engine)
    if directory is not None:
        write_catalogue(cat, directory)
    return cat


def write_class_file(path: str, records) -> None:
    lines = [f"CLASSES v1 {len(records)}"]
    for rec in records:
        if rec.name is None:
            lines.append(f"class {rec.id}")
        else:
            lines.append(f"class {rec.id} {rec.name}")
        for c, h in rec.members:
            lines.append(f"{c} {h}")
    _atomic_write(path, "\n".join(lines) + "\n")


def read_class_file(path: str) -> list:
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty class file")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "CLASSES" or head[1] != "v1":
        raise ValueError(f"{path}: bad header {lines[0]!r}")
    count = int(head[2])
    records = []
    i = 1
    while i < len(lines):
        parts = lines[i].split(None, 2)
        if parts[0] != "class":
            raise ValueError(f"{path}: expected class line, got {lines[i]!r}")
        cid = int(parts[1])
        name = parts[2] if len(parts) > 2 else None
        i += 1
        members = []
        while i < len(lines) and not lines[i].startswith("class "):
            c, h = lines[i].rsplit(None, 1)
            members.append((c, int(h)))
            i += 1
        if not members:
            raise ValueError(f"{path}: class {cid} has no members")
        records.append(
            ClassRecord(
                id=cid,
                members=tuple(members),
                representative=members[0][0],
                name=name,
            )
        )
    if len(records) != count:
        raise ValueError(f"{path}: header says {count} classes, found {len(records)}")
    return records


def read_names(path: str) -> dict:
    """Known-manifold names: lines of '<code> <name>'."""
    out = {}
    with open(path) as fh:
        for ln in fh:
            ln = ln.strip()
            if not ln or ln.startswith("#"):
                continue
            c, name = ln.split(None, 1)
            decode(c)  # validate early
            out[c] = name
    return out


def write_text(path: str, text: str) -> None:
    """Atomic plain-text write (temp file plus rename)."""
    _atomic_write(path, text)
