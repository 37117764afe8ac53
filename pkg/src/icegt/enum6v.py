"""Mixed 6V configurations on M_k: vertex types, ic, inv, weights and corner flips."""
from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from typing import Iterator

from . import limits
from .exactalg import WeightMonomial, vertex_weight
from .lattice import (
    BoundarySpec, CapExceeded, OrientationError, PathFamily6V, build_rect, iter_families,
    orientation_to_paths, paths_to_orientation, EdgeOrientation,
)

TYPE_LETTER = {1: "a", 2: "a", 3: "b", 4: "b", 5: "c", 6: "c"}
# (left, right, top, bottom) usage -> type
_TYPES = {
    (1, 1, 1, 1): 1,
    (0, 0, 0, 0): 2,
    (1, 1, 0, 0): 3,
    (0, 0, 1, 1): 4,
    (1, 0, 0, 1): 5,
    (0, 1, 1, 0): 6,
}


def enumerate_m6v(k, limit: int | None = None) -> Iterator[PathFamily6V]:
    d = build_rect(BoundarySpec.of(k))
    return iter_families(d, limit if limit is not None else limits.max_configs())


def _used(x: PathFamily6V) -> frozenset:
    return paths_to_orientation(x).used


def vertex_type(used, v) -> int:
    i, j = v
    key = (
        int(("H", i - 1, j) in used),
        int(("H", i, j) in used),
        int(("V", i, j + 1) in used),
        int(("V", i, j) in used),
    )
    try:
        return _TYPES[key]
    except KeyError:
        raise OrientationError(f"no 6V vertex type for usage {key} at {v}") from None


@dataclass(frozen=True)
class RowStats:
    rows: dict  # lattice row -> Counter(type -> count)

    def total(self, t: int, parity: str | None = None) -> int:
        return sum(c[t] for j, c in self.rows.items()
                   if parity is None or (j % 2 == 0) == (parity == "even"))


def classify(x: PathFamily6V) -> tuple[dict, RowStats]:
    used = _used(x)
    d = x.domain()
    types = {v: vertex_type(used, v) for v in d.vertices}
    rows: dict[int, Counter] = {j: Counter() for j in range(1, d.rows + 1)}
    for (i, j), t in types.items():
        rows[j][t] += 1
    return types, RowStats(rows)


def ic_from_stats(st: RowStats) -> int:
    return st.total(1, "even") + st.total(3, "odd")


def ic(x: PathFamily6V) -> int:
    return ic_from_stats(classify(x)[1])


def omega_from_types(types: dict) -> WeightMonomial:
    return WeightMonomial.product(
        vertex_weight("HV" if j % 2 else "VD", TYPE_LETTER[t]) for (i, j), t in types.items()
    )


def omega(x: PathFamily6V) -> WeightMonomial:
    return omega_from_types(classify(x)[0])


def sign_matrix(x: PathFamily6V, types: dict | None = None) -> list[list[int]]:
    """Rows run top-down: matrix row r (1-based) is lattice row 2k_n - r."""
    if types is None:
        types = classify(x)[0]
    d = x.domain()
    A = [[0] * d.n for _ in range(d.rows)]
    for (i, j), t in types.items():
        if t in (5, 6):
            A[d.rows - j][i - 1] = 1 if t == 5 else -1
    return A


def inv_matrix(A: list[list[int]]) -> int:
    """sum over i' < i and j' <= j of A[i'][j] * A[i][j']."""
    ncol = len(A[0]) if A else 0
    colsum = [0] * ncol  # column sums of rows above the current one
    total = 0
    for row in A:
        prefix = 0
        for j in range(ncol):
            prefix += row[j]
            total += colsum[j] * prefix
        for j in range(ncol):
            colsum[j] += row[j]
    return total


def inv(x: PathFamily6V) -> int:
    return inv_matrix(sign_matrix(x))


@dataclass(frozen=True)
class Record:
    config: PathFamily6V
    ic: int
    inv: int
    omega: WeightMonomial
    stats: RowStats

    def to_json(self) -> dict:
        return {"paths": [list(p) for p in self.config.paths], "ic": self.ic, "inv": self.inv,
                "omega": self.omega.as_dict()}


def record(x: PathFamily6V) -> Record:
    types, st = classify(x)
    return Record(x, ic_from_stats(st), inv_matrix(sign_matrix(x, types)), omega_from_types(types), st)


def weighted_count_m6v(k, method: str = "explicit") -> int:
    """sum of 2^{ic(x)} over M_k, by enumeration or through the barred-triangle row DP."""
    if method == "explicit":
        return sum(2 ** ic(x) for x in enumerate_m6v(k))
    if method == "dp":
        from .gtpat import weighted_count_triangles
        return weighted_count_triangles(k)
    raise ValueError(f"unknown method {method!r}")


def x_max(k) -> PathFamily6V:
    """Each path runs west along its row to column l, then straight down."""
    spec = BoundarySpec.of(k)
    paths = []
    for l, t in enumerate(spec.k):
        paths.append("R" * l + "D" * (2 * t - 2))
    return PathFamily6V(spec.k, tuple(paths))


# corner flips -----------------------------------------------------------------

def _cell_edges(i: int, j: int):
    """Unit square with lower-left corner (i, j): top, right, left, bottom edges."""
    return {
        "top": ("H", i, j + 1),
        "bottom": ("H", i, j),
        "left": ("V", i, j + 1),
        "right": ("V", i + 1, j + 1),
    }


def flippable_cells(x: PathFamily6V) -> list[tuple[int, int]]:
    used = _used(x)
    d = x.domain()
    out = []
    for i in range(1, d.n):
        for j in range(1, d.rows):
            if _corner_state(used, i, j) is not None:
                out.append((i, j))
    return out


def _corner_state(used, i, j):
    e = _cell_edges(i, j)
    on = {name for name, ed in e.items() if ed in used}
    if on == {"top", "right"} or on == {"left", "bottom"}:
        return on
    return None


def corner_flip(x: PathFamily6V, cell: tuple[int, int]) -> PathFamily6V:
    """Swap the two ways of going around the unit square with lower-left corner `cell`.

    Paths pass either right-then-down (top and right edges) or down-then-right
    (left and bottom edges); the flip exchanges them.
    """
    used = set(_used(x))
    i, j = cell
    if _corner_state(used, i, j) is None:
        raise ValueError(f"cell {cell} is not flippable")
    for ed in _cell_edges(i, j).values():
        used ^= {ed}
    return orientation_to_paths(x.domain(), EdgeOrientation(frozenset(used)))


def flip_closure(k, cap: int | None = None) -> set[PathFamily6V]:
    """All configurations reachable from x_max by corner flips (BFS)."""
    cap = cap if cap is not None else limits.max_configs()
    start = x_max(k)
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for cell in flippable_cells(x):
            y = corner_flip(x, cell)
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise CapExceeded("flip closure", cap)
                queue.append(y)
    return seen


def _flip_delta_forward(types: dict, i: int, j: int) -> int:
    # right-then-down corner -> down-then-right corner; parity taken on the row j
    s = -int(types[(i, j + 1)] == 6)
    t = int(types[(i + 1, j + 1)] == 5)
    u = int(types[(i, j)] == 5)
    v = -int(types[(i + 1, j)] == 6)
    return (-s + u - 1) if j % 2 == 0 else (t - v - 1)


def ic_flip_delta(x: PathFamily6V, cell: tuple[int, int]) -> tuple[PathFamily6V, int]:
    """Flip `cell` and return the new configuration with the change in ic, read off
    from the four corner vertex types instead of a full recount."""
    i, j = cell
    used = _used(x)
    state = _corner_state(used, i, j)
    if state is None:
        raise ValueError(f"cell {cell} is not flippable")
    y = corner_flip(x, cell)
    if state == {"top", "right"}:
        return y, _flip_delta_forward(classify(x)[0], i, j)
    return y, -_flip_delta_forward(classify(y)[0], i, j)


def flip_walk_ic(k, steps: int, rng) -> list[tuple[PathFamily6V, int]]:
    """Random corner-flip walk from x_max, tracking ic incrementally."""
    x = x_max(k)
    cur = ic(x)
    out = [(x, cur)]
    for _ in range(steps):
        cells = flippable_cells(x)
        if not cells:
            break
        x, delta = ic_flip_delta(x, rng.choice(cells))
        cur += delta
        out.append((x, cur))
    return out
