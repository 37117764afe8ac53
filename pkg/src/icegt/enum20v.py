"""Counting and enumeration of 20V configurations on Q_k."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from . import limits
from .lattice import (
    BoundarySpec, CapExceeded, PathFamily20V, build_quad, edge_head, edge_tail, iter_families,
)


@dataclass(frozen=True)
class Count20V:
    k: tuple[int, ...]
    count: int
    method: str

    def to_json(self) -> dict:
        return {"k": list(self.k), "count": str(self.count), "method": self.method}


def enumerate_20v(k, limit: int | None = None) -> Iterator[PathFamily20V]:
    """Every 20V configuration on Q_k, as osculating Schroeder path families.

    Raises CapExceeded once more than `limit` configurations have been produced.
    """
    d = build_quad(BoundarySpec.of(k))
    return iter_families(d, limit if limit is not None else limits.max_configs())


def count_20v(k, max_states: int | None = None) -> Count20V:
    """Column-sweep transfer count.

    The state between columns i and i+1 records which horizontal and diagonal edges
    crossing that cut are used. Column i+1 is filled top-down carrying the vertical
    edge; the new diagonal leaving row j is parked in the slot of row j+1, which was
    just consumed, and the slots are shifted back once the column is done.
    """
    spec = BoundarySpec.of(k)
    cap = max_states if max_states is not None else limits.max_states()
    n, kn = spec.n, spec.kn
    lo = 1 - n  # lowest row anywhere in Q_k

    def hbit(j):
        return 1 << (2 * (j - lo))

    def dbit(j):
        return 1 << (2 * (j - lo) + 1)

    init = 0
    for t in spec.k:
        init |= hbit(t)
    states = {init: 1}
    for c in range(1, n + 1):
        last = c == n
        # frontier: (mask, carry) -> count
        front = {(m, 0): w for m, w in states.items()}
        for j in range(kn, 1 - c, -1):
            bottom = j == 2 - c
            nxt: dict = {}
            hb, db_in, db_out = hbit(j), dbit(j + 1), dbit(j + 1)
            for (m, carry), w in front.items():
                fin = bool(m & hb) + bool(m & db_in) + carry
                base = m & ~hb & ~db_in
                for e in (0, 1) if not last else (0,):
                    for se in (0, 1) if not last else (0,):
                        s = fin - e - se
                        if s < 0 or s > 1 or (bottom and s != 1):
                            continue
                        nm = base | (hb if e else 0) | (db_out if se else 0)
                        key = (nm, 0 if bottom else s)
                        nxt[key] = nxt.get(key, 0) + w
            front = nxt
            if len(front) > cap:
                raise CapExceeded("20V DP states", cap)
        states = {}
        hmask = sum(hbit(j) for j in range(lo, kn + 2))
        for (m, _), w in front.items():
            nm = (m & hmask) | ((m & ~hmask) >> 2)
            states[nm] = states.get(nm, 0) + w
    return Count20V(spec.k, states.get(0, 0), "dp")


def count_20v_explicit(k, limit: int | None = None) -> Count20V:
    spec = BoundarySpec.of(k)
    return Count20V(spec.k, sum(1 for _ in enumerate_20v(spec, limit)), "explicit")


ORACLE_MAX_EDGES = 120


def count_20v_oracle(k, max_edges: int = ORACLE_MAX_EDGES) -> int:
    """Backtracking over the orientation of every internal edge with the 3-in/3-out rule.

    Independent of the path picture: it only counts in-degrees. Intended for tests.
    """
    d = build_quad(BoundarySpec.of(k))
    edges = list(d.internal_edges)
    if len(edges) > max_edges:
        raise CapExceeded("oracle internal edges", max_edges)
    half = d.degree() // 2
    vidx = {v: t for t, v in enumerate(d.vertices)}
    nv = len(vidx)
    indeg = [0] * nv
    remaining = [0] * nv
    # A boundary edge is incoming at its inner endpoint iff it is used and enters from
    # W/N/NW, or is unused and points to E/S/SE.
    for e, used in d.boundary.items():
        tail, head = edge_tail(e), edge_head(e)
        if head in vidx:
            indeg[vidx[head]] += used
        else:
            indeg[vidx[tail]] += not used
    ends = [(vidx[edge_tail(e)], vidx[edge_head(e)]) for e in edges]
    for a, b in ends:
        remaining[a] += 1
        remaining[b] += 1

    # order edges so vertices close early: by the later endpoint in canonical order
    order = sorted(range(len(edges)), key=lambda t: (max(ends[t]), min(ends[t])))
    ends = [ends[t] for t in order]

    def ok(v):
        return indeg[v] <= half and indeg[v] + remaining[v] >= half

    def rec(t: int) -> int:
        if t == len(ends):
            return 1
        a, b = ends[t]
        remaining[a] -= 1
        remaining[b] -= 1
        total = 0
        for target in (a, b):  # the endpoint receiving the arrow
            indeg[target] += 1
            if ok(a) and ok(b):
                total += rec(t + 1)
            indeg[target] -= 1
        remaining[a] += 1
        remaining[b] += 1
        return total

    if not all(ok(v) for v in range(nv)):
        return 0
    return rec(0)
