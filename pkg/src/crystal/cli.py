"""Command-line interface.

Subcommands: gen (build catalogues), classify, invariants, split, ingest,
code.  Output is line-oriented "key value" pairs on stdout; errors go to
stderr as a single machine-parsable line and a nonzero exit status.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import canon, classify, invariants, io_formats
from .census import Catalogue
from .graphs import is_bipartite
from .triangulations import barycentric_coloured_graph, parse_facet_gluing


class CommandError(Exception):
    """Domain error carrying a message for the error line."""


def _threads(args) -> int:
    env = os.environ.get("CRYSTAL_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise CommandError(f"bad CRYSTAL_THREADS value {env!r}") from None
    return max(1, args.threads)


def _cmd_gen(args):
    two_p = args.vertices
    if two_p < 2 or two_p % 2:
        raise CommandError("--vertices must be a positive even number")
    threads = _threads(args)
    cat = io_formats.ensure_catalogue(
        two_p,
        directory=args.out,
        threads=threads,
        resume=args.resume,
    )
    print(f"vertices {two_p}")
    print(f"bipartite {len(cat.bipartite_codes)}")
    print(f"nonbipartite {len(cat.non_bipartite_codes)}")
    if args.out:
        for kind, path in io_formats.catalogue_paths(args.out, two_p).items():
            print(f"file {kind} {path}")


def _cmd_classify(args):
    codes = []
    for path in args.catalogues:
        _, _, cs = io_formats.read_catalogue_file(path)
        codes.extend(cs)
    codes.sort(key=classify._catalogue_key)
    known = io_formats.read_names(args.known) if args.known else {}
    records = classify.classify_list(codes, known, threads=_threads(args))
    io_formats.write_class_file(args.out, records)
    print(f"graphs {len(codes)}")
    print(f"classes {len(records)}")
    named = sum(1 for r in records if r.name)
    print(f"named {named}")
    print(f"file {args.out}")


def _graphs_from_args(args):
    if args.code:
        return [args.code]
    _, _, codes = io_formats.read_catalogue_file(args.file)
    return codes


def _cmd_invariants(args):
    codes = _graphs_from_args(args)
    for c in codes:
        g = canon.decode(c)
        print(f"code {c}")
        hom = invariants.homology(g)
        for k, grp in enumerate(hom):
            print(f"H{k} {grp}")
        if args.pi1:
            i, j = (int(x) for x in args.pi1.split(","))
            pres = invariants.pi1_presentation(g, (i, j))
            print(f"pi1 generators {pres.generators}")
            print(f"pi1 relators {len(pres.relators)}")
            print(f"pi1 presentation {invariants.format_presentation(pres)}")


def _cmd_split(args):
    g = canon.decode(args.code)
    pieces = classify.factorize(g)
    print(f"summands {len(pieces)}")
    for piece in pieces:
        print(f"summand {canon.code(piece)}")


def _cmd_ingest(args):
    with open(args.gluing) as fh:
        text = fh.read()
    fg = parse_facet_gluing(text)
    gem = barycentric_coloured_graph(fg)
    from .moves import rigidify

    rigid, rho3 = rigidify(gem)
    out_code = canon.code(rigid)
    print(f"tetrahedra {fg.tet_count}")
    print(f"gem_order {gem.order}")
    print(f"rigid_order {rigid.order}")
    print(f"rho3 {rho3}")
    print(f"bipartite {1 if is_bipartite(rigid) else 0}")
    print(f"code {out_code}")
    if args.out:
        io_formats.write_text(args.out, out_code + "\n")
        print(f"file {args.out}")


def _cmd_code(args):
    g = canon.decode(args.normalize)
    print(f"code {canon.code(g)}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="crystal",
        description="Crystallization catalogues of closed 3-manifolds",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate the rigid catalogue at one vertex count")
    g.add_argument("--vertices", type=int, required=True, metavar="2P")
    g.add_argument("--out", metavar="DIR", help="directory for catalogue files")
    g.add_argument("--threads", type=int, default=1)
    g.add_argument("--resume", action="store_true", help="reuse existing files")
    g.set_defaults(func=_cmd_gen)

    c = sub.add_parser("classify", help="partition catalogues into manifold classes")
    c.add_argument("--catalogues", nargs="+", required=True, metavar="FILE")
    c.add_argument("--known", metavar="NAMES", help="file of '<code> <name>' lines")
    c.add_argument("--out", required=True, metavar="FILE")
    c.add_argument("--threads", type=int, default=1)
    c.set_defaults(func=_cmd_classify)

    i = sub.add_parser("invariants", help="homology and optional pi1 presentation")
    src = i.add_mutually_exclusive_group(required=True)
    src.add_argument("--code", metavar="CODE")
    src.add_argument("--file", metavar="FILE", help="catalogue file")
    i.add_argument("--pi1", metavar="I,J", help="colour pair for the presentation")
    i.set_defaults(func=_cmd_invariants)

    s = sub.add_parser("split", help="connected-sum factorization of one code")
    s.add_argument("--code", required=True, metavar="CODE")
    s.set_defaults(func=_cmd_split)

    n = sub.add_parser("ingest", help="facet gluing -> rigid crystallization code")
    n.add_argument("--gluing", required=True, metavar="FILE")
    n.add_argument("--out", metavar="FILE", help="write the code to a file")
    n.set_defaults(func=_cmd_ingest)

    d = sub.add_parser("code", help="canonical code of a serialized graph")
    d.add_argument("--normalize", required=True, metavar="RAWGRAPH")
    d.set_defaults(func=_cmd_code)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        args.func(args)
    except CommandError as exc:
        print(f"error {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
