"""Domains Q_k (triangular lattice, 20V) and M_k (square lattice, mixed 6V), path families
and edge orientations.

Coordinates are (i, j) with i the column (west to east) and j the row (south to north).
Edges are keyed by their western or northern endpoint:

    ("H", i, j): (i, j) -- (i+1, j)
    ("V", i, j): (i, j) -- (i, j-1)
    ("D", i, j): (i, j) -- (i+1, j-1)

An edge is *used* when a path traverses it, i.e. it is oriented right, down or
south-east. Under this convention the ice rule at a vertex is flow conservation:
used incoming edges (W, NW, N) balance used outgoing edges (S, SE, E).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Union

Edge = tuple[str, int, int]
Vertex = tuple[int, int]

# step char -> (edge kind, di, dj)
STEPS = {"R": ("H", 1, 0), "D": ("V", 0, -1), "S": ("D", 1, -1)}

# Ranks used for the canonical (non-crossing) matching at a vertex.
# Incoming: W < NW < N; outgoing: S < SE < E.
IN_RANK = {"H": 0, "D": 1, "V": 2}
OUT_RANK = {"V": 0, "D": 1, "H": 2}


def in_edge(v: Vertex, kind: str) -> Edge:
    """The edge of the given kind entering v (from W, NW or N)."""
    i, j = v
    if kind == "H":
        return ("H", i - 1, j)
    if kind == "V":
        return ("V", i, j + 1)
    return ("D", i - 1, j + 1)


def out_edge(v: Vertex, kind: str) -> Edge:
    i, j = v
    return (kind, i, j)


def edge_head(e: Edge) -> Vertex:
    kind, i, j = e
    _, di, dj = STEPS[{"H": "R", "V": "D", "D": "S"}[kind]]
    return (i + di, j + dj)


def edge_tail(e: Edge) -> Vertex:
    return (e[1], e[2])


@dataclass(frozen=True)
class BoundarySpec:
    k: tuple[int, ...]

    def __post_init__(self):
        k = tuple(int(v) for v in self.k)
        object.__setattr__(self, "k", k)
        if not k:
            raise ValueError("k must be non-empty")
        if k[0] < 1 or any(a >= b for a, b in zip(k, k[1:])):
            raise ValueError(f"k must be strictly increasing positive integers, got {k}")

    @property
    def n(self) -> int:
        return len(self.k)

    @property
    def kn(self) -> int:
        return self.k[-1]

    @classmethod
    def of(cls, k) -> BoundarySpec:
        return k if isinstance(k, BoundarySpec) else cls(tuple(k))

    @classmethod
    def parse(cls, s: str) -> BoundarySpec:
        return cls(tuple(int(t) for t in s.split(",") if t.strip()))


class Domain:
    """Common machinery for both lattice domains."""

    model: str
    kinds: tuple[str, ...]

    def __init__(self, spec: BoundarySpec):
        self.spec = spec
        self.vertices: tuple[Vertex, ...] = tuple(sorted(self._vertex_iter(), key=lambda v: (v[1], v[0])))
        self._vset = frozenset(self.vertices)
        internal, boundary = set(), {}
        for v in self.vertices:
            for kind in self.kinds:
                for e in (in_edge(v, kind), out_edge(v, kind)):
                    if edge_tail(e) in self._vset and edge_head(e) in self._vset:
                        internal.add(e)
                    else:
                        boundary[e] = self._boundary_used(e)
        self.internal_edges: tuple[Edge, ...] = tuple(sorted(internal, key=_edge_key))
        self.boundary: dict[Edge, bool] = dict(sorted(boundary.items(), key=lambda kv: _edge_key(kv[0])))

    def _vertex_iter(self) -> Iterable[Vertex]:
        raise NotImplementedError

    def _boundary_used(self, e: Edge) -> bool:
        raise NotImplementedError

    def __contains__(self, v: Vertex) -> bool:
        return v in self._vset

    @property
    def n(self) -> int:
        return self.spec.n

    def start(self, l: int) -> Vertex:
        raise NotImplementedError

    def end(self, l: int) -> Vertex:
        raise NotImplementedError

    def entry_edge(self, l: int) -> Edge:
        return in_edge(self.start(l), "H")

    def exit_edge(self, l: int) -> Edge:
        return out_edge(self.end(l), "V")

    @cached_property
    def used_boundary(self) -> frozenset[Edge]:
        return frozenset(e for e, u in self.boundary.items() if u)

    def is_edge(self, e: Edge) -> bool:
        return e in self.boundary or e in self._internal_set

    @cached_property
    def _internal_set(self) -> frozenset[Edge]:
        return frozenset(self.internal_edges)

    def degree(self) -> int:
        return 2 * len(self.kinds)


class Quad20V(Domain):
    """Q_k: columns 1..n, column i holds rows 2-i..k_n."""

    model = "20v"
    kinds = ("H", "V", "D")

    def _vertex_iter(self):
        for i in range(1, self.spec.n + 1):
            for j in range(2 - i, self.spec.kn + 1):
                yield (i, j)

    def _boundary_used(self, e: Edge) -> bool:
        kind, i, j = e
        if kind == "H" and i == 0:
            return j in self.spec.k
        if kind == "V" and j == 2 - i:
            return True  # south exits
        return False

    def start(self, l):
        return (1, self.spec.k[l])

    def end(self, l):
        return (l + 1, 1 - l)


class RectM6V(Domain):
    """M_k: columns 1..n, rows 1..2k_n - 1."""

    model = "m6v"
    kinds = ("H", "V")

    def _vertex_iter(self):
        for i in range(1, self.spec.n + 1):
            for j in range(1, 2 * self.spec.kn):
                yield (i, j)

    @property
    def rows(self) -> int:
        return 2 * self.spec.kn - 1

    def _boundary_used(self, e: Edge) -> bool:
        kind, i, j = e
        if kind == "H" and i == 0:
            return j in {2 * t - 1 for t in self.spec.k}
        if kind == "V" and j == 1:
            return True
        return False

    def start(self, l):
        return (1, 2 * self.spec.k[l] - 1)

    def end(self, l):
        return (l + 1, 1)


def _edge_key(e: Edge):
    return (e[2], e[1], e[0])


def build_quad(k) -> Quad20V:
    return Quad20V(BoundarySpec.of(k))


def build_rect(k) -> RectM6V:
    return RectM6V(BoundarySpec.of(k))


@dataclass(frozen=True)
class PathFamily:
    """n step strings; path l (0-based) starts at domain.start(l)."""

    k: tuple[int, ...]
    paths: tuple[str, ...]
    model: str = field(default="20v")

    def __post_init__(self):
        object.__setattr__(self, "k", tuple(self.k))
        object.__setattr__(self, "paths", tuple(self.paths))

    @property
    def n(self) -> int:
        return len(self.k)

    def domain(self) -> Domain:
        return _domain_cache(self.model, self.k)

    def to_json(self) -> dict:
        return {"k": list(self.k), "model": self.model, "paths": [list(p) for p in self.paths]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def from_json(cls, d: Union[dict, str]) -> PathFamily:
        if isinstance(d, str):
            d = json.loads(d)
        model = d["model"]
        klass = PathFamily20V if model == "20v" else PathFamily6V
        return klass(tuple(d["k"]), tuple("".join(p) for p in d["paths"]))


class PathFamily20V(PathFamily):
    def __init__(self, k, paths):
        super().__init__(k, paths, "20v")


class PathFamily6V(PathFamily):
    def __init__(self, k, paths):
        super().__init__(k, paths, "m6v")


_DOMAINS: dict = {}


def _domain_cache(model: str, k: tuple[int, ...]) -> Domain:
    key = (model, k)
    d = _DOMAINS.get(key)
    if d is None:
        d = build_quad(k) if model == "20v" else build_rect(k)
        _DOMAINS[key] = d
    return d


def domain_for(model: str, k) -> Domain:
    return _domain_cache(model, tuple(BoundarySpec.of(k).k))


class OrientationError(ValueError):
    pass


@dataclass(frozen=True)
class EdgeOrientation:
    """Set of path-used edges (boundary included). Bit of an internal edge = membership."""

    used: frozenset

    def bit(self, e: Edge) -> int:
        return int(e in self.used)

    def bits(self, d: Domain) -> dict[Edge, int]:
        return {e: self.bit(e) for e in d.internal_edges}

    @classmethod
    def from_bits(cls, d: Domain, bits: dict[Edge, int]) -> EdgeOrientation:
        return cls(frozenset(d.used_boundary | {e for e, b in bits.items() if b}))


def trace_path(d: Domain, l: int, steps: str) -> list[Edge]:
    """Edges of path l including its west entry and south exit."""
    v = d.start(l)
    edges = [d.entry_edge(l)]
    for s in steps:
        if s not in STEPS or STEPS[s][0] not in d.kinds:
            raise OrientationError(f"invalid step {s!r} for model {d.model}")
        kind, di, dj = STEPS[s]
        e = out_edge(v, kind)
        v = (v[0] + di, v[1] + dj)
        if v not in d:
            raise OrientationError(f"path {l + 1} leaves the domain at {v}")
        edges.append(e)
    if v != d.end(l):
        raise OrientationError(f"path {l + 1} ends at {v}, expected {d.end(l)}")
    edges.append(d.exit_edge(l))
    return edges


def paths_to_orientation(f: PathFamily) -> EdgeOrientation:
    d = f.domain()
    if len(f.paths) != d.n:
        raise OrientationError(f"expected {d.n} paths, got {len(f.paths)}")
    used: set[Edge] = set()
    for l, steps in enumerate(f.paths):
        for e in trace_path(d, l, steps):
            if e in used:
                raise OrientationError(f"edge {e} used by two paths")
            used.add(e)
    return EdgeOrientation(frozenset(used))


@dataclass
class IceReport:
    ok: bool
    violations: list[tuple[Vertex, int, int]]  # (vertex, used in, used out)

    def __bool__(self) -> bool:
        return self.ok

    @property
    def first(self):
        return self.violations[0] if self.violations else None


def vertex_flow(used, v: Vertex, kinds) -> tuple[int, int]:
    fin = sum(in_edge(v, k) in used for k in kinds)
    fout = sum(out_edge(v, k) in used for k in kinds)
    return fin, fout


def validate_ice(d: Domain, o: EdgeOrientation) -> IceReport:
    bad = []
    for e, u in d.boundary.items():
        if (e in o.used) != u:
            bad.append((edge_tail(e), -1, -1))
    for v in d.vertices:
        fin, fout = vertex_flow(o.used, v, d.kinds)
        if fin != fout:
            bad.append((v, fin, fout))
    return IceReport(not bad, bad)


def local_matching(used, v: Vertex, kinds) -> dict[str, str]:
    """Canonical in-kind -> out-kind pairing at v (rank order, no crossing)."""
    ins = sorted((k for k in kinds if in_edge(v, k) in used), key=IN_RANK.__getitem__)
    outs = sorted((k for k in kinds if out_edge(v, k) in used), key=OUT_RANK.__getitem__)
    if len(ins) != len(outs):
        raise OrientationError(f"ice rule violated at {v}")
    return dict(zip(ins, outs))


_KIND_STEP = {"H": "R", "V": "D", "D": "S"}


def orientation_to_paths(d: Domain, o: EdgeOrientation) -> PathFamily:
    rep = validate_ice(d, o)
    if not rep:
        raise OrientationError(f"ice rule violated: {rep.first}")
    paths = []
    for l in range(d.n):
        v, came = d.start(l), "H"
        steps = []
        while True:
            nxt = local_matching(o.used, v, d.kinds)[came]
            e = out_edge(v, nxt)
            if e in d.boundary:
                break
            steps.append(_KIND_STEP[nxt])
            v, came = edge_head(e), nxt
        if v != d.end(l):
            raise OrientationError(f"path {l + 1} exits at {v}")
        paths.append("".join(steps))
    klass = PathFamily20V if d.model == "20v" else PathFamily6V
    return klass(d.spec.k, tuple(paths))


class CapExceeded(RuntimeError):
    """A configurable resource cap was hit."""

    def __init__(self, what: str, cap: int):
        super().__init__(f"{what} exceeded cap {cap}")
        self.what = what
        self.cap = cap


def iter_families(d: Domain, limit: int | None = None):
    """All osculating path families on d, lexicographic in (path 1, path 2, ...).

    Paths are built one after the other. A vertex shared with earlier paths is allowed
    only if the new path enters and leaves through strictly higher-ranked edges than
    every earlier path there, which is exactly the canonical resolution used by
    orientation_to_paths. Each edge set is therefore produced once.
    """
    n = d.n
    moves = [(s,) + STEPS[s] for s in sorted(STEPS) if STEPS[s][0] in d.kinds]
    occ: dict[Vertex, tuple[int, int]] = {}
    paths: list[str] = []
    klass = PathFamily20V if d.model == "20v" else PathFamily6V
    count = 0

    def walk(l: int, v: Vertex, rin: int, steps: list[str]):
        prev = occ.get(v)
        if prev is not None and rin <= prev[0]:
            return
        pout = -1 if prev is None else prev[1]
        if v == d.end(l):
            if pout < OUT_RANK["V"]:
                occ[v] = (rin, OUT_RANK["V"])
                paths.append("".join(steps))
                yield from place(l + 1)
                paths.pop()
                _restore(v, prev)
            return
        for s, kind, di, dj in moves:
            r = OUT_RANK[kind]
            w = (v[0] + di, v[1] + dj)
            if r <= pout or w[0] > l + 1 or w not in d:
                continue
            occ[v] = (rin, r)
            steps.append(s)
            yield from walk(l, w, IN_RANK[kind], steps)
            steps.pop()
            _restore(v, prev)

    def _restore(v, prev):
        if prev is None:
            del occ[v]
        else:
            occ[v] = prev

    def place(l: int):
        nonlocal count
        if l == n:
            count += 1
            if limit is not None and count > limit:
                raise CapExceeded("enumerated configurations", limit)
            yield klass(d.spec.k, tuple(paths))
            return
        yield from walk(l, d.start(l), IN_RANK["H"], [])

    yield from place(0)
