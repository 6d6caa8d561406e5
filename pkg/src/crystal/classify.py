"""Classification of rigid crystallizations by reduction collisions.

Every graph is pushed through a fixed set of 44 reduction sequences; each
sequence repeatedly cancels generalized dipoles of one type in canonical
scan order and re-rigidifies.  Two graphs whose reductions ever produce the
same code represent the same manifold up to handle summands, with the
handle offset tracked through every merge.  Connected-sum factorization
recursively splits along 4-edge cuts.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass
from itertools import permutations

from .canon import OrderedGraph, canonical_order, code, decode
from .graphs import ColouredGraph, find_sum_split, is_crystallization
from .moves import cancel_gen_dipole, find_gen_dipoles, find_rho_pairs, rigidify


class ClassificationError(RuntimeError):
    """Inconsistent handle bookkeeping or conflicting names in one class."""


@dataclass(frozen=True)
class ReductionResult:
    reduced: ColouredGraph
    rho3_count: int


@dataclass(frozen=True)
class MoveSequence:
    """One element of the reduction schedule.

    kind "single" is the composition theta_{d(k)_0} ... theta_{d(k)_i}; kind
    "chained" first runs the full compositions of all earlier permutations.
    The colour chain is expanded at construction.
    """

    kind: str
    k: int
    i: int
    colours: tuple


@dataclass(frozen=True)
class ClassRecord:
    id: int
    members: tuple  # ((code, h), ...) in catalogue order
    representative: str
    name: str | None = None


_S30 = sorted(permutations((1, 2, 3)))  # permutations of {1,2,3}, 0 fixed


def _delta(k: int) -> tuple:
    return (0,) + _S30[k - 1]


def sequences() -> list:
    """The 44 reduction sequences: 6*4 single and 5*4 chained."""
    out = []
    for k in range(1, 7):
        d = _delta(k)
        for i in range(4):
            out.append(MoveSequence("single", k, i, d[: i + 1]))
    for k in range(2, 7):
        d = _delta(k)
        for i in range(4):
            chain = []
            for j in range(1, k):
                chain.extend(_delta(j))
            chain.extend(d[: i + 1])
            out.append(MoveSequence("chained", k, i, tuple(chain)))
    return out


def theta(g: OrderedGraph, i: int, order_cap: int | None = None, max_steps: int = 64):
    """Cancel {0,i} generalized dipoles to exhaustion, re-rigidifying.

    Candidates are bounded by m,n <= 8 and taken by ascending (m*n, base
    vertex) in the canonical numbering, which is recomputed after every
    cancellation.  Returns a ReductionResult, or None when the graph grows
    past order_cap (the sequence is abandoned).
    """
    cur = g.graph
    if i == 0:
        return ReductionResult(cur, 0)
    if i not in (1, 2, 3):
        raise ValueError(f"theta colour must be in 0..3, got {i}")
    cap = order_cap if order_cap is not None else cur.order + 16
    rho3 = 0
    for _ in range(max_steps):
        dips = find_gen_dipoles(cur, i, 8, 8)
        if not dips:
            return ReductionResult(cur, rho3)
        nxt = cancel_gen_dipole(cur, dips[0])
        if nxt.order > cap:
            return None
        nxt, r3 = rigidify(nxt)
        rho3 += r3
        cur = canonical_order(nxt).graph
    return None


def apply_sequence(g: ColouredGraph, eps: MoveSequence):
    """Run one schedule element; returns ReductionResult or None.

    The graph is re-canonicalized before every theta, so colour identities
    follow the canonical form at each step.
    """
    if not isinstance(eps, MoveSequence):
        raise ValueError("eps must come from sequences()")
    cap = g.order + 16
    cur = g
    rho3 = 0
    for colour in eps.colours:
        if colour == 0:
            continue
        res = theta(canonical_order(cur), colour, order_cap=cap)
        if res is None:
            return None
        cur = res.reduced
        rho3 += res.rho3_count
    return ReductionResult(cur, rho3)


def _reduce_one(job):
    raw, eps_list = job
    g = decode(raw)
    out = []
    for t, eps in enumerate(eps_list):
        res = apply_sequence(g, eps)
        if res is not None:
            out.append((t, code(res.reduced), res.rho3_count))
    return out


def _catalogue_key(c: str):
    return (decode(c).order, c)


def classify_list(X, known=None, threads: int = 1) -> list:
    """Partition codes into classes of graphs reducing to a common form.

    X must be in catalogue order (ascending vertex count, then code).  Each
    member gets a handle count h; within a class, members with equal h
    represent the same manifold and h-offsets count handle summands.  Names
    given for any member propagate to its whole class.
    """
    X = list(X)
    known = dict(known or {})
    if X != sorted(X, key=_catalogue_key):
        raise ValueError("X must be sorted in catalogue order")
    graphs = [decode(c) for c in X]
    for c, g in zip(X, graphs):
        if not is_crystallization(g) or find_rho_pairs(g):
            raise ValueError(f"not a rigid crystallization: {c}")
    eps_list = sequences()
    jobs = [(c, eps_list) for c in X]
    if threads > 1 and len(jobs) > 1:
        with multiprocessing.Pool(threads) as pool:
            reductions = pool.map(_reduce_one, jobs, chunksize=1)
    else:
        reductions = [_reduce_one(j) for j in jobs]

    n = len(X)
    h = [0] * n
    comp_of = list(range(n))
    members = {i: [i] for i in range(n)}
    store = {}

    def shift(comp, delta):
        for m in members[comp]:
            h[m] += delta

    def merge(a, b):
        if len(members[a]) < len(members[b]):
            a, b = b, a
        for m in members[b]:
            comp_of[m] = a
        members[a].extend(members.pop(b))
        return a

    for idx in range(n):
        for _, rc, heps in reductions[idx]:
            if rc not in store:
                store[rc] = (idx, heps)
                continue
            jdx, heps_prev = store[rc]
            base_prev = h[jdx] - heps_prev
            base_cur = h[idx] - heps
            if comp_of[jdx] == comp_of[idx]:
                if base_prev != base_cur:
                    raise ClassificationError(
                        f"inconsistent handle counts for {X[idx]} via {rc}"
                    )
                continue
            if base_prev >= base_cur:
                shift(comp_of[idx], base_prev - base_cur)
            else:
                shift(comp_of[jdx], base_cur - base_prev)
            merge(comp_of[jdx], comp_of[idx])

    comps = {}
    for i in range(n):
        comps.setdefault(comp_of[i], []).append(i)
    records = []
    for comp in sorted(comps.values(), key=lambda ms: min(ms)):
        comp.sort()
        name = None
        for m in comp:
            label = known.get(X[m])
            if label is not None:
                if name is not None and name != label:
                    raise ClassificationError(
                        f"class of {X[comp[0]]} carries conflicting names "
                        f"{name!r} and {label!r}"
                    )
                name = label
        records.append(
            ClassRecord(
                id=len(records) + 1,
                members=tuple((X[m], h[m]) for m in comp),
                representative=X[comp[0]],
                name=name,
            )
        )
    return records


def split_by_h(record: ClassRecord) -> list:
    """Group one class's members by handle count, ascending."""
    groups = {}
    for c, hh in record.members:
        groups.setdefault(hh, []).append(c)
    return sorted(groups.items())


def factorize(g: ColouredGraph) -> list:
    """Recursively split along nontrivial 4-edge cuts into rigid summands."""
    split = find_sum_split(g)
    if split is None:
        return [g]
    out = []
    for piece in (split.left, split.right):
        rp, _ = rigidify(piece)
        out.extend(factorize(rp))
    out.sort(key=lambda x: (x.order, code(x)))
    return out
