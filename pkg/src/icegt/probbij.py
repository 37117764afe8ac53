"""Probabilistic bijections: kernels, their axioms and composition, the local Yang-Baxter
moves with exact weights, and an exact sampler for psi-fibers."""
from __future__ import annotations

import bisect
import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Hashable, Sequence

from .exactalg import RingElem, WeightMonomial, vertex_weight
from .gtpat import GTPattern, enumerate_gt, fiber, ic_triangle, omega_fsa, psi, psi1_inverse
from .enum6v import enumerate_m6v, ic
from .lattice import PathFamily6V

RNG_NAME = "mt19937"


@dataclass
class WeightedSet:
    elements: list
    weights: list

    def __post_init__(self):
        if len(self.elements) != len(self.weights):
            raise ValueError("elements and weights differ in length")
        self.index = {e: t for t, e in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise ValueError("duplicate elements")

    def __len__(self) -> int:
        return len(self.elements)

    def weight(self, e) -> Any:
        return self.weights[self.index[e]]

    def total(self):
        return sum(self.weights[1:], self.weights[0]) if self.weights else 0


@dataclass
class Kernel:
    """Pair (P, Pbar) of |X| x |Y| matrices, stored sparsely: missing entries are 0."""

    nx: int
    ny: int
    P: dict = field(default_factory=dict)
    Pbar: dict = field(default_factory=dict)

    def p(self, x: int, y: int):
        return self.P.get((x, y), 0)

    def pbar(self, x: int, y: int):
        return self.Pbar.get((x, y), 0)

    def dense(self, which: str = "P") -> list[list]:
        src = self.P if which == "P" else self.Pbar
        return [[src.get((x, y), 0) for y in range(self.ny)] for x in range(self.nx)]


@dataclass
class AxiomReport:
    ok: bool
    violations: list[str]

    def __bool__(self) -> bool:
        return self.ok


def _is_zero(v) -> bool:
    return v.is_zero() if isinstance(v, RingElem) else v == 0


def _is_one(v) -> bool:
    return v == 1


def check_axioms(X: WeightedSet, Y: WeightedSet, K: Kernel) -> AxiomReport:
    bad: list[str] = []
    if (K.nx, K.ny) != (len(X), len(Y)):
        return AxiomReport(False, [f"shape {(K.nx, K.ny)} != {(len(X), len(Y))}"])
    rows: dict[int, Any] = {}
    cols: dict[int, Any] = {}
    for (x, y), v in K.P.items():
        rows[x] = rows.get(x, 0) + v
        if not isinstance(v, RingElem) and v < 0:
            bad.append(f"P({x},{y}) = {v} is negative")
    for (x, y), v in K.Pbar.items():
        cols[y] = cols.get(y, 0) + v
        if not isinstance(v, RingElem) and v < 0:
            bad.append(f"Pbar({x},{y}) = {v} is negative")
    for x in range(K.nx):
        if not _is_one(rows.get(x, 0)):
            bad.append(f"row {x}: sum_y P = {rows.get(x, 0)}")
    for y in range(K.ny):
        if not _is_one(cols.get(y, 0)):
            bad.append(f"column {y}: sum_x Pbar = {cols.get(y, 0)}")
    for (x, y) in set(K.P) | set(K.Pbar):
        lhs = X.weights[x] * K.p(x, y)
        rhs = K.pbar(x, y) * Y.weights[y]
        if not _is_zero(lhs - rhs):
            bad.append(f"weight exchange fails at ({x},{y})")
    return AxiomReport(not bad, bad)


def identity_kernel(n: int) -> Kernel:
    one = Fraction(1)
    d = {(t, t): one for t in range(n)}
    return Kernel(n, n, dict(d), dict(d))


def _div(a, b):
    """a / b where b is rational (possibly wrapped in a RingElem)."""
    if isinstance(b, RingElem):
        b = b.to_fraction()
    if b == 0:
        raise ZeroDivisionError("normalising sum is zero")
    if isinstance(a, RingElem):
        return a * RingElem.scalar(1 / Fraction(b))
    return Fraction(a) / b


def kernel_from_surjection(f: Callable[[Hashable], Hashable], X: WeightedSet, Y: WeightedSet) -> Kernel:
    """P(x, y) = [f(x) = y]; Pbar(x, y) = [f(x) = y] * w_X(x) / w_Y(y)."""
    fibers: dict[int, Any] = {}
    image = []
    for xi, x in enumerate(X.elements):
        y = f(x)
        if y not in Y.index:
            raise ValueError(f"f maps element {xi} outside Y")
        yi = Y.index[y]
        image.append(yi)
        fibers[yi] = fibers.get(yi, 0) + X.weights[xi]
    for yi, w in enumerate(Y.weights):
        if fibers.get(yi, 0) != w:
            raise ValueError(f"fiber sum over element {yi} of Y is {fibers.get(yi, 0)}, expected {w}")
    K = Kernel(len(X), len(Y))
    for xi, yi in enumerate(image):
        K.P[(xi, yi)] = Fraction(1)
        K.Pbar[(xi, yi)] = _div(X.weights[xi], Y.weights[yi])
    return K


def reverse(K: Kernel) -> Kernel:
    """The same probabilistic bijection read from Y to X: (Pbar^T, P^T)."""
    return Kernel(K.ny, K.nx,
                  {(y, x): v for (x, y), v in K.Pbar.items()},
                  {(y, x): v for (x, y), v in K.P.items()})


def compose(K1: Kernel, K2: Kernel) -> Kernel:
    """R = P1 P2 and Rbar(x, z) = sum_y Q2bar(y, z) P1bar(x, y)."""
    if K1.ny != K2.nx:
        raise ValueError(f"middle dimensions differ: {K1.ny} vs {K2.nx}")
    by_y_P: dict[int, list] = {}
    by_y_Pb: dict[int, list] = {}
    for (y, z), v in K2.P.items():
        by_y_P.setdefault(y, []).append((z, v))
    for (y, z), v in K2.Pbar.items():
        by_y_Pb.setdefault(y, []).append((z, v))
    R = Kernel(K1.nx, K2.ny)
    for (x, y), v in K1.P.items():
        for z, w in by_y_P.get(y, ()):
            R.P[(x, z)] = R.P.get((x, z), 0) + v * w
    for (x, y), v in K1.Pbar.items():
        for z, w in by_y_Pb.get(y, ()):
            R.Pbar[(x, z)] = R.Pbar.get((x, z), 0) + w * v
    R.P = {key: v for key, v in R.P.items() if not _is_zero(v)}
    R.Pbar = {key: v for key, v in R.Pbar.items() if not _is_zero(v)}
    return R


# local Yang-Baxter moves ----------------------------------------------------------

EXTERNAL = ("W", "N", "NW", "E", "S", "SE")
INTERNAL = ("h1", "v1", "d1")

# vertex: (family, line A in, line A out, line B in, line B out)
SHAPES: dict[str, list[tuple[str, str, str, str, str]]] = {
    "sw": [
        ("HD", "W", "h1", "NW", "d1"),
        ("HV", "h1", "E", "N", "v1"),
        ("VD", "v1", "S", "d1", "SE"),
    ],
    "ne": [
        ("VD", "N", "v1", "NW", "d1"),
        ("HV", "W", "h1", "v1", "S"),
        ("HD", "h1", "E", "d1", "SE"),
    ],
}


def letter(ain: int, aout: int, bin_: int, bout: int) -> str | None:
    """Weight letter a, b or c of a degree-4 vertex, or None if the ice rule fails."""
    if ain + bin_ != aout + bout:
        return None
    if ain == aout:
        return "a" if ain == bin_ else "b"
    return "c"


def balanced(boundary: Sequence[int]) -> bool:
    b = dict(zip(EXTERNAL, boundary))
    return b["W"] + b["N"] + b["NW"] == b["E"] + b["S"] + b["SE"]


@dataclass(frozen=True)
class LocalConfig:
    shape: str
    boundary: tuple[int, ...]
    internal: tuple[int, ...] = ()


@dataclass(frozen=True)
class LocalGraph:
    """A degree-6 vertex ("vertex") or one of its two resolutions ("sw", "ne").

    boundary: 6 bits for W, N, NW, E, S, SE (1 = used by a path, i.e. pointing right,
    down or south-east), or None to range over all 64 boundaries.
    """

    shape: str
    boundary: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.shape not in ("vertex", "sw", "ne"):
            raise ValueError(f"unknown shape {self.shape!r}")
        if self.boundary is not None:
            object.__setattr__(self, "boundary", tuple(int(b) for b in self.boundary))

    def boundaries(self) -> list[tuple[int, ...]]:
        if self.boundary is not None:
            return [self.boundary]
        return [tuple(b) for b in itertools.product((0, 1), repeat=6)]

    def configurations(self) -> list[tuple[LocalConfig, RingElem]]:
        out = []
        for b in self.boundaries():
            out.extend(_configs(self.shape, b))
        return out

    def weighted_set(self) -> WeightedSet:
        cs = self.configurations()
        return WeightedSet([c for c, _ in cs], [w for _, w in cs])


def _resolution_weight(shape: str, bits: dict) -> WeightMonomial | None:
    w = WeightMonomial()
    for fam, ai, ao, bi, bo in SHAPES[shape]:
        lt = letter(bits[ai], bits[ao], bits[bi], bits[bo])
        if lt is None:
            return None
        w = w * vertex_weight(fam, lt)
    return w


def _configs(shape: str, boundary: tuple[int, ...]) -> list[tuple[LocalConfig, RingElem]]:
    if shape == "vertex":
        if not balanced(boundary):
            return []
        return [(LocalConfig("vertex", boundary), resolve_degree6(boundary, "SW"))]
    out = []
    ext = dict(zip(EXTERNAL, boundary))
    for internal in itertools.product((0, 1), repeat=3):
        bits = dict(ext, **dict(zip(INTERNAL, internal)))
        w = _resolution_weight(shape, bits)
        if w is not None:
            out.append((LocalConfig(shape, boundary, internal), w.to_ring()))
    return out


def resolve_degree6(boundary: Sequence[int], bend: str) -> RingElem:
    """Sum of the weights of the admissible fillings of the bent graph."""
    shape = bend.lower()
    if shape not in SHAPES:
        raise ValueError(f"bend must be NE or SW, got {bend!r}")
    total = RingElem.zero()
    for _, w in _configs(shape, tuple(boundary)):
        total = total + w
    return total


@dataclass
class YBEReport:
    ok: bool
    checked: int
    balanced_ones: int
    unbalanced_zeros: int
    failures: list


def verify_ybe() -> YBEReport:
    failures = []
    ones = zeros = 0
    for b in itertools.product((0, 1), repeat=6):
        ne, sw = resolve_degree6(b, "NE"), resolve_degree6(b, "SW")
        if ne != sw:
            failures.append((b, "NE != SW"))
            continue
        if balanced(b):
            if ne == 1:
                ones += 1
            else:
                failures.append((b, f"balanced weight {ne}"))
        elif ne.is_zero():
            zeros += 1
        else:
            failures.append((b, f"unbalanced weight {ne}"))
    return YBEReport(not failures, 64, ones, zeros, failures)


@dataclass
class LocalKernel:
    X: WeightedSet
    Y: WeightedSet
    K: Kernel

    def reachable(self, x: int) -> list[int]:
        return sorted(y for (xx, y) in self.K.P if xx == x)


def local_kernel(L: LocalGraph, M: LocalGraph) -> LocalKernel:
    """Kernel of a Yang-Baxter move: targets share the external orientation of the source."""
    if L.shape == M.shape:
        raise ValueError("L and M must differ by a Yang-Baxter move")
    if L.boundary != M.boundary:
        raise ValueError("L and M must have the same external orientations")
    X, Y = L.weighted_set(), M.weighted_set()
    by_bx: dict[tuple, list[int]] = {}
    by_by: dict[tuple, list[int]] = {}
    for t, c in enumerate(X.elements):
        by_bx.setdefault(c.boundary, []).append(t)
    for t, c in enumerate(Y.elements):
        by_by.setdefault(c.boundary, []).append(t)
    K = Kernel(len(X), len(Y))
    for b, xs in by_bx.items():
        ys = by_by.get(b, [])
        if not ys:
            raise RuntimeError(f"no reachable configuration for boundary {b}")
        zy = sum((Y.weights[y] for y in ys), RingElem.zero())
        zx = sum((X.weights[x] for x in xs), RingElem.zero())
        for x in xs:
            for y in ys:
                K.P[(x, y)] = _div(Y.weights[y], zy)
                K.Pbar[(x, y)] = _div(X.weights[x], zx)
    for b in by_by:
        if b not in by_bx:
            raise RuntimeError(f"no reachable configuration for boundary {b}")
    return LocalKernel(X, Y, K)


# psi kernels and the fiber sampler -------------------------------------------------

def psi_weighted_sets(k) -> tuple[WeightedSet, WeightedSet]:
    """(M_k configurations with 2^ic, triple-free GT patterns with 2^{-n} omega_FSA)."""
    xs = list(enumerate_m6v(k))
    X = WeightedSet(xs, [Fraction(2 ** ic(x)) for x in xs])
    ps = list(enumerate_gt(tuple(k)))
    n = len(tuple(k))
    Y = WeightedSet(ps, [Fraction(omega_fsa(p), 2 ** n) for p in ps])
    return X, Y


def psi_kernel(k) -> tuple[WeightedSet, WeightedSet, Kernel]:
    X, Y = psi_weighted_sets(k)
    return X, Y, kernel_from_surjection(psi, X, Y)


@dataclass
class FiberSampler:
    """Exact inverse-CDF sampler on psi^{-1}(T') with law 2^{ic(x)} 2^n / omega_FSA(T')."""

    pattern: GTPattern
    configs: list = field(init=False)
    weights: list = field(init=False)

    def __post_init__(self):
        tris = fiber(self.pattern)
        self.configs = [psi1_inverse(T) for T in tris]
        self.weights = [2 ** ic_triangle(T) for T in tris]
        self._cum = list(itertools.accumulate(self.weights))
        self.total = self._cum[-1]

    def prob(self, t: int) -> Fraction:
        return Fraction(self.weights[t], self.total)

    def draw_index(self, rng: random.Random) -> int:
        r = rng.randrange(self.total)
        return bisect.bisect_right(self._cum, r)

    def draw(self, rng: random.Random) -> tuple[PathFamily6V, Fraction]:
        t = self.draw_index(rng)
        return self.configs[t], self.prob(t)


def sample_fiber(Tp: GTPattern, seed: int, count: int = 1) -> list[tuple[PathFamily6V, Fraction]]:
    rng = random.Random(seed)
    s = FiberSampler(Tp)
    return [s.draw(rng) for _ in range(count)]


def sample_m6v(k, seed: int, count: int = 1) -> list[tuple[GTPattern, PathFamily6V, Fraction]]:
    """Two-stage draw: T' with probability proportional to omega_FSA, then x from its fiber.

    The resulting x has probability 2^{ic(x)} / sum_y 2^{ic(y)}.
    """
    rng = random.Random(seed)
    pats = list(enumerate_gt(tuple(k)))
    ws = [omega_fsa(p) for p in pats]
    cum = list(itertools.accumulate(ws))
    samplers: dict[int, FiberSampler] = {}
    out = []
    for _ in range(count):
        t = bisect.bisect_right(cum, rng.randrange(cum[-1]))
        s = samplers.get(t) or samplers.setdefault(t, FiberSampler(pats[t]))
        x, px = s.draw(rng)
        out.append((pats[t], x, Fraction(ws[t], cum[-1]) * px))
    return out
