"""Triple-free GT patterns, barred monotone triangles, the maps psi1/psi2, omega_FSA,
connected blocks and fences.

Triangles are stored apex first: rows[0] has one entry, rows[-1] is the bottom row.
Cell (i, j) sits between (i+1, j) (lower left) and (i+1, j+1) (lower right).
The barred alphabet 1 < 1bar < 2 < 2bar < ... is encoded as t -> 2t-1, tbar -> 2t,
so bars are parity and the barred order is integer order.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from . import limits
from .lattice import (
    BoundarySpec, CapExceeded, EdgeOrientation, PathFamily6V, build_rect,
    orientation_to_paths, paths_to_orientation,
)

Cell = tuple[int, int]


def bar(t: int) -> int:
    return 2 * t


def unbar(t: int) -> int:
    return 2 * t - 1


def value_of(e: int) -> int:
    return (e + 1) // 2


def is_barred(e: int) -> bool:
    return e % 2 == 0


def label(e: int) -> str:
    return f"{value_of(e)}{'~' if is_barred(e) else ''}"


def _rows(rows) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(v) for v in r) for r in rows)


def _check_shape(rows):
    for i, r in enumerate(rows):
        if len(r) != i + 1:
            raise ValueError(f"row {i + 1} has {len(r)} entries, expected {i + 1}")


def _interlaces(upper: Sequence[int], lower: Sequence[int]) -> bool:
    return all(lower[j] <= upper[j] <= lower[j + 1] for j in range(len(upper)))


@dataclass(frozen=True)
class GTPattern:
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = _rows(self.rows)
        object.__setattr__(self, "rows", rows)
        _check_shape(rows)
        for i in range(len(rows) - 1):
            if not _interlaces(rows[i], rows[i + 1]):
                raise ValueError(f"rows {i + 1} and {i + 2} do not interlace")

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def bottom(self) -> tuple[int, ...]:
        return self.rows[-1]

    def is_triple_free(self) -> bool:
        return not any(r[j] == r[j + 1] == r[j + 2] for r in self.rows for j in range(len(r) - 2))

    def cells(self) -> Iterator[Cell]:
        for i, r in enumerate(self.rows):
            for j in range(len(r)):
                yield (i, j)

    def __getitem__(self, c: Cell) -> int:
        return self.rows[c[0]][c[1]]

    def to_json(self) -> dict:
        return {"rows": [list(r) for r in self.rows], "barred": False}


@dataclass(frozen=True)
class BarredTriangle:
    rows: tuple[tuple[int, ...], ...]  # encoded entries

    def __post_init__(self):
        rows = _rows(self.rows)
        object.__setattr__(self, "rows", rows)
        _check_shape(rows)
        for i, r in enumerate(rows):
            if any(a >= b for a, b in zip(r, r[1:])):
                raise ValueError(f"row {i + 1} is not strictly increasing: {r}")
            if i + 1 < len(rows) and not _interlaces(r, rows[i + 1]):
                raise ValueError(f"rows {i + 1} and {i + 2} do not interlace")
        if rows and any(is_barred(v) for v in rows[-1]):
            raise ValueError("bottom row must be unbarred")
        if rows and rows[-1][0] < 1:
            raise ValueError("entries must be positive")

    @classmethod
    def from_labels(cls, rows) -> BarredTriangle:
        """Rows of ints or strings such as '2~' (barred 2)."""
        enc = []
        for r in rows:
            er = []
            for v in r:
                if isinstance(v, str) and v.endswith("~"):
                    er.append(bar(int(v[:-1])))
                else:
                    er.append(unbar(int(v)))
            enc.append(er)
        return cls(enc)

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def bottom(self) -> tuple[int, ...]:
        return tuple(value_of(v) for v in self.rows[-1])

    def cells(self) -> Iterator[Cell]:
        for i, r in enumerate(self.rows):
            for j in range(len(r)):
                yield (i, j)

    def __getitem__(self, c: Cell) -> int:
        return self.rows[c[0]][c[1]]

    def labels(self) -> list[list[str]]:
        return [[label(v) for v in r] for r in self.rows]

    def to_json(self) -> dict:
        return {"rows": [list(r) for r in self.rows], "barred": True}


def pattern_from_json(d: dict):
    return BarredTriangle(d["rows"]) if d.get("barred") else GTPattern(d["rows"])


# omega_FSA ------------------------------------------------------------------------

def boxed_cells(T: GTPattern) -> list[Cell]:
    """Cells equal to both their upper-left and upper-right neighbours."""
    out = []
    for i in range(1, T.n):
        up, r = T.rows[i - 1], T.rows[i]
        for j in range(1, i):
            if r[j] == up[j - 1] == up[j]:
                out.append((i, j))
    return out


def omega_fsa(T: GTPattern) -> int:
    if not T.is_triple_free():
        raise ValueError("pattern is not triple-free")
    entries = T.n * (T.n + 1) // 2
    return 2 ** (entries - len(boxed_cells(T)))


# enumeration --------------------------------------------------------------------

def _upper_rows(lower: Sequence[int], strict: bool, triple_free: bool) -> Iterator[tuple[int, ...]]:
    """Rows of length len(lower)-1 interlacing with `lower`, in lexicographic order."""
    m = len(lower) - 1
    out: list[int] = []

    def rec(j: int):
        if j == m:
            yield tuple(out)
            return
        lo = lower[j]
        if out:
            lo = max(lo, out[-1] + 1 if strict else out[-1])
        for v in range(lo, lower[j + 1] + 1):
            if triple_free and j >= 2 and out[-1] == out[-2] == v:
                continue
            out.append(v)
            yield from rec(j + 1)
            out.pop()

    yield from rec(0)


def _stack(bottom: Sequence[int], strict: bool, triple_free: bool) -> Iterator[tuple[tuple[int, ...], ...]]:
    stack: list[tuple[int, ...]] = [tuple(bottom)]

    def rec():
        if len(stack[-1]) == 1:
            yield tuple(reversed(stack))
            return
        for r in _upper_rows(stack[-1], strict, triple_free):
            stack.append(r)
            yield from rec()
            stack.pop()

    yield from rec()


def enumerate_gt(bottom: Sequence[int] | None = None, bound: int | None = None,
                 n: int | None = None) -> Iterator[GTPattern]:
    """Triple-free GT patterns with the given bottom row.

    With `bound` (and `n`) instead, runs over every strictly increasing bottom row of
    length n with entries in 0..bound.
    """
    if bound is not None:
        if n is None:
            raise ValueError("bound requires n")
        for b in itertools.combinations(range(bound + 1), n):
            yield from enumerate_gt(b)
        return
    if bottom is None:
        raise ValueError("need a bottom row or a bound")
    bottom = tuple(bottom)
    if any(a >= b for a, b in zip(bottom, bottom[1:])):
        raise ValueError("bottom row must be strictly increasing")
    for rows in _stack(bottom, strict=False, triple_free=True):
        yield GTPattern(rows)


def enumerate_triangles(k) -> Iterator[BarredTriangle]:
    """Barred monotone triangles with unbarred bottom row k."""
    spec = BoundarySpec.of(k)
    for rows in _stack([unbar(t) for t in spec.k], strict=True, triple_free=False):
        yield BarredTriangle(rows)


def _pair_weight_gt(upper: Sequence[int], lower: Sequence[int]) -> int:
    """Exponent contributed by `upper` given the row below: its entries minus the cells
    of `lower` boxed by it."""
    boxed = sum(1 for j in range(1, len(lower) - 1) if lower[j] == upper[j - 1] == upper[j])
    return len(upper) - boxed


def weighted_count_gt(bottom: Sequence[int], max_states: int | None = None) -> int:
    """sum of omega_FSA over triple-free GT patterns with this bottom row (row DP)."""
    cap = max_states if max_states is not None else limits.max_states()
    bottom = tuple(bottom)
    states = {bottom: 2 ** len(bottom)}
    while len(next(iter(states))) > 1:
        nxt: dict = {}
        for row, w in states.items():
            for up in _upper_rows(row, strict=False, triple_free=True):
                nxt[up] = nxt.get(up, 0) + w * 2 ** _pair_weight_gt(up, row)
        if len(nxt) > cap:
            raise CapExceeded("GT row DP states", cap)
        states = nxt
    return sum(states.values())


def _pair_ic(upper: Sequence[int], lower: Sequence[int]) -> int:
    a = sum(1 for j, v in enumerate(upper) if v == lower[j] and is_barred(v))
    b = sum(1 for j, v in enumerate(upper) if v == lower[j + 1] and not is_barred(v))
    return a + b


def weighted_count_triangles(k, max_states: int | None = None) -> int:
    """sum of 2^{ic(T)} over barred monotone triangles with bottom row k (row DP)."""
    cap = max_states if max_states is not None else limits.max_states()
    spec = BoundarySpec.of(k)
    states = {tuple(unbar(t) for t in spec.k): 1}
    while len(next(iter(states))) > 1:
        nxt: dict = {}
        for row, w in states.items():
            for up in _upper_rows(row, strict=True, triple_free=False):
                nxt[up] = nxt.get(up, 0) + w * 2 ** _pair_ic(up, row)
        if len(nxt) > cap:
            raise CapExceeded("triangle row DP states", cap)
        states = nxt
    return sum(states.values())


# psi ------------------------------------------------------------------------------

def psi1(x: PathFamily6V) -> BarredTriangle:
    """Row r of T lists the lattice rows where paths enter column n-r from the left."""
    used = paths_to_orientation(x).used
    n = x.n
    rows = []
    for r in range(n):
        c = n - r
        rows.append(sorted(j for (kind, i, j) in used if kind == "H" and i == c - 1))
    return BarredTriangle(rows)


def psi1_inverse(T: BarredTriangle) -> PathFamily6V:
    n = T.n
    k = T.bottom
    d = build_rect(k)
    used = set(d.used_boundary)
    for r in range(n - 1):
        c = n - r
        for j in T.rows[r]:
            if not 1 <= j <= d.rows:
                raise ValueError(f"entry {label(j)} outside the domain")
            used.add(("H", c - 1, j))
    for c in range(1, n + 1):
        carry = 0
        for j in range(d.rows, 0, -1):
            fin = (("H", c - 1, j) in used) + carry
            s = fin - (("H", c, j) in used)
            if s not in (0, 1) or (j == 1 and s != 1):
                raise ValueError(f"malformed triangle: flow breaks at column {c}, row {j}")
            if s and j > 1:
                used.add(("V", c, j))
            carry = s
    return orientation_to_paths(d, EdgeOrientation(frozenset(used)))


def psi2(T: BarredTriangle) -> GTPattern:
    return GTPattern([[value_of(v) for v in r] for r in T.rows])


def psi(x: PathFamily6V) -> GTPattern:
    return psi2(psi1(x))


def alpha_bar(T: BarredTriangle) -> int:
    return sum(1 for i in range(T.n - 1) for j, v in enumerate(T.rows[i])
               if v == T.rows[i + 1][j] and is_barred(v))


def beta(T: BarredTriangle) -> int:
    return sum(1 for i in range(T.n - 1) for j, v in enumerate(T.rows[i])
               if v == T.rows[i + 1][j + 1] and not is_barred(v))


def ic_triangle(T: BarredTriangle) -> int:
    return alpha_bar(T) + beta(T)


# blocks ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConnectedBlock:
    value: int
    cells: frozenset

    def __len__(self) -> int:
        return len(self.cells)

    def rows(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for i, j in sorted(self.cells):
            out.setdefault(i, []).append(j)
        return out

    def horizontal_pairs(self) -> int:
        return sum(1 for (i, j) in self.cells if (i, j + 1) in self.cells)


def _plain_value(T, c: Cell) -> int:
    v = T[c]
    return value_of(v) if isinstance(T, BarredTriangle) else v


def max_connected_blocks(T) -> tuple[ConnectedBlock, ...]:
    """Components of equal (unbarred) value under diagonal adjacency, sorted by first cell."""
    seen: set[Cell] = set()
    blocks = []
    for c in T.cells():
        if c in seen:
            continue
        val = _plain_value(T, c)
        comp, todo = {c}, [c]
        seen.add(c)
        while todo:
            i, j = todo.pop()
            for nb in ((i + 1, j), (i + 1, j + 1), (i - 1, j - 1), (i - 1, j)):
                a, b = nb
                if 0 <= a < T.n and 0 <= b <= a and nb not in seen and _plain_value(T, nb) == val:
                    seen.add(nb)
                    comp.add(nb)
                    todo.append(nb)
        blocks.append(ConnectedBlock(val, frozenset(comp)))
    return tuple(blocks)


def block_weight(C: ConnectedBlock) -> int:
    return 2 ** (len(C) - C.horizontal_pairs())


def block_ic(T: BarredTriangle, C: ConnectedBlock) -> int:
    total = 0
    for (i, j) in C.cells:
        v = T[(i, j)]
        if (i + 1, j) in C.cells and T[(i + 1, j)] == v and is_barred(v):
            total += 1
        if (i + 1, j + 1) in C.cells and T[(i + 1, j + 1)] == v and not is_barred(v):
            total += 1
    return total


def block_bar_assignments(C: ConnectedBlock, n: int) -> list[frozenset]:
    """Sets of barred cells of C compatible with a barred monotone triangle.

    Only same-value neighbours constrain each other: lower-left <= cell <= lower-right,
    equal row neighbours must read t, tbar, and the bottom row (index n-1) is unbarred.
    """
    cells = sorted(C.cells)
    free = [c for c in cells if c[0] != n - 1]
    out = []
    for bits in itertools.product((0, 1), repeat=len(free)):
        barred = frozenset(c for c, b in zip(free, bits) if b)
        if _bars_ok(C.cells, barred):
            out.append(barred)
    return out


def _bars_ok(cells, barred) -> bool:
    for (i, j) in cells:
        b = (i, j) in barred
        ll, lr, right = (i + 1, j), (i + 1, j + 1), (i, j + 1)
        if ll in cells and (ll in barred) and not b:
            return False
        if lr in cells and b and lr not in barred:
            return False
        if right in cells and (b or right not in barred):
            return False
    return True


def fiber(Tp: GTPattern, cap: int | None = None) -> list[BarredTriangle]:
    """All barred triangles T with psi2(T) = Tp, in a deterministic order."""
    cap = cap if cap is not None else limits.max_configs()
    if not Tp.is_triple_free():
        raise ValueError("pattern is not triple-free")
    blocks = max_connected_blocks(Tp)
    choices = [block_bar_assignments(C, Tp.n) for C in blocks]
    size = 1
    for ch in choices:
        size *= len(ch)
    if size > cap:
        raise CapExceeded("fiber size", cap)
    out = []
    for combo in itertools.product(*choices):
        barred = set().union(*combo) if combo else set()
        rows = [[bar(v) if (i, j) in barred else unbar(v) for j, v in enumerate(r)]
                for i, r in enumerate(Tp.rows)]
        out.append(BarredTriangle(rows))
    out.sort(key=lambda T: T.rows)
    return out


def fiber_sum(Tp: GTPattern, method: str = "blocks") -> int:
    """sum of 2^{ic(T)} over the psi2-fiber of Tp."""
    if method == "enumerate":
        return sum(2 ** ic_triangle(T) for T in fiber(Tp))
    if method != "blocks":
        raise ValueError(f"unknown method {method!r}")
    total = 1
    for C in max_connected_blocks(Tp):
        s = 0
        for barred in block_bar_assignments(C, Tp.n):
            s += 2 ** _block_ic_from_bars(C, barred)
        total *= s
    return total


def _block_ic_from_bars(C: ConnectedBlock, barred) -> int:
    total = 0
    for (i, j) in C.cells:
        b = (i, j) in barred
        if (i + 1, j) in C.cells and b and (i + 1, j) in barred:
            total += 1
        if (i + 1, j + 1) in C.cells and not b and (i + 1, j + 1) not in barred:
            total += 1
    return total


def block_fiber_sum(C: ConnectedBlock, n: int) -> int:
    return sum(2 ** _block_ic_from_bars(C, b) for b in block_bar_assignments(C, n))


# zigzags and fences ---------------------------------------------------------------

@dataclass(frozen=True)
class BlockPart:
    kind: str  # "zigzag" or "joint"
    cells: tuple[Cell, ...]  # top to bottom


def zigzag_decompose(C: ConnectedBlock) -> list[BlockPart]:
    """Split a block into maximal runs of width-1 rows and width-2 rows, bottom to top.

    Two width-2 rows can be adjacent (e.g. the 2s in [[2],[2,2],[2,2,3],[1,2,3,4]]);
    each such row is its own joint part.
    """
    rows = C.rows()
    parts: list[BlockPart] = []
    run: list[Cell] = []
    for i in sorted(rows, reverse=True):
        cs = [(i, j) for j in rows[i]]
        if len(cs) == 1:
            run.append(cs[0])
            continue
        if run:
            parts.append(BlockPart("zigzag", tuple(reversed(run))))
            run = []
        parts.append(BlockPart("joint", tuple(cs)))
    if run:
        parts.append(BlockPart("zigzag", tuple(reversed(run))))
    return parts


@dataclass(frozen=True)
class Fence:
    """Elements 0..size-1 left to right; steps[t] relates t and t+1:
    'u' means t < t+1, 'd' means t > t+1."""

    steps: str

    def __post_init__(self):
        if set(self.steps) - {"u", "d"}:
            raise ValueError(f"fence steps must be over u/d, got {self.steps!r}")

    @property
    def size(self) -> int:
        return len(self.steps) + 1

    def __str__(self) -> str:
        return self.steps


@dataclass(frozen=True)
class OrderIdeal:
    fence: Fence
    mask: int  # bit t set iff element t is in the ideal

    def __contains__(self, t: int) -> bool:
        return bool(self.mask >> t & 1)

    def members(self) -> list[int]:
        return [t for t in range(self.fence.size) if t in self]


def fence_of(part: BlockPart | Sequence[Cell]) -> Fence:
    """Zigzag cells top to bottom become fence elements left to right; height is the
    horizontal position, so a lower-left neighbour is a down step."""
    cells = part.cells if isinstance(part, BlockPart) else tuple(part)
    steps = []
    for (i, j), (i2, j2) in zip(cells, cells[1:]):
        if i2 != i + 1 or j2 not in (j, j + 1):
            raise ValueError("cells do not form a zigzag")
        steps.append("d" if j2 == j else "u")
    return Fence("".join(steps))


def is_ideal(F: Fence, mask: int) -> bool:
    for t, s in enumerate(F.steps):
        a, b = mask >> t & 1, mask >> (t + 1) & 1
        if s == "u" and b and not a:
            return False
        if s == "d" and a and not b:
            return False
    return True


def enumerate_ideals(F: Fence) -> Iterator[OrderIdeal]:
    """Order ideals in increasing mask order, built element by element."""
    out: list[int] = []

    def rec(t: int, mask: int):
        if t == F.size:
            out.append(mask)
            return
        for b in (0, 1):
            if t > 0:
                s, prev = F.steps[t - 1], mask >> (t - 1) & 1
                if s == "u" and b and not prev:
                    continue
                if s == "d" and prev and not b:
                    continue
            rec(t + 1, mask | (b << t))

    rec(0, 0)
    for m in sorted(out):
        yield OrderIdeal(F, m)


def ic_ideal(F: Fence, I: OrderIdeal) -> int:
    total = 0
    for t, s in enumerate(F.steps):
        a, b = t in I, (t + 1) in I
        if s == "d" and not a and not b:
            total += 1
        elif s == "u" and a and b:
            total += 1
    return total


def fence_gf(F: Fence, q) -> Fraction:
    q = Fraction(q)
    return sum((q ** ic_ideal(F, I) for I in enumerate_ideals(F)), Fraction(0))


def all_fences(size: int) -> Iterator[Fence]:
    for steps in itertools.product("du", repeat=size - 1):
        yield Fence("".join(steps))


def distinct_ideal_counts(size: int) -> int:
    """Number of distinct values of #J(F) over fences of the given size."""
    return len({sum(1 for _ in enumerate_ideals(F)) for F in all_fences(size)})


def parse_rows(s: str) -> list[list[int]]:
    """'2/2,3/2,3,3/1,2,3,4' -> [[2],[2,3],[2,3,3],[1,2,3,4]]."""
    return [[int(v) for v in r.split(",")] for r in s.split("/") if r.strip()]


def iter_blocks_fibers(Tp: GTPattern) -> Iterable[tuple[ConnectedBlock, int]]:
    for C in max_connected_blocks(Tp):
        yield C, block_fiber_sum(C, Tp.n)
