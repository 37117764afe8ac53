"""Exact arithmetic: rationals, the ring Q[x]/(x^8+1) (x) Q[y]/(y^6-2), weight monomials
and the two product formulas.

x stands for the primitive 16th root of unity q = e^{i pi/8} and y for 2^{1/6}.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

QDEG = 8  # x^8 = -1
YDEG = 6  # y^6 = 2
FACTORIAL_CAP = 200


class RingElem:
    """Element of Q[x]/(x^8+1) (x) Q[y]/(y^6-2), stored as 48 Fractions (index i*6 + j for x^i y^j)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [Fraction(0)] * (QDEG * YDEG)
        for idx, v in enumerate(coeffs):
            c[idx] = Fraction(v)
        self.coeffs: tuple[Fraction, ...] = tuple(c)

    @classmethod
    def scalar(cls, v) -> RingElem:
        return cls([v])

    @classmethod
    def term(cls, coeff, i: int, j: int) -> RingElem:
        """coeff * x^i * y^j with arbitrary integer exponents, reduced."""
        coeff = Fraction(coeff)
        qi, i = divmod(i, QDEG)
        if qi % 2:
            coeff = -coeff
        qj, j = divmod(j, YDEG)
        coeff *= Fraction(2) ** qj
        c = [Fraction(0)] * (QDEG * YDEG)
        c[i * YDEG + j] = coeff
        return cls(c)

    @classmethod
    def zero(cls) -> RingElem:
        return cls()

    @classmethod
    def one(cls) -> RingElem:
        return cls([1])

    def __add__(self, other) -> RingElem:
        other = _coerce(other)
        return RingElem(a + b for a, b in zip(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self) -> RingElem:
        return RingElem(-a for a in self.coeffs)

    def __sub__(self, other) -> RingElem:
        return self + (-_coerce(other))

    def __rsub__(self, other) -> RingElem:
        return _coerce(other) - self

    def __mul__(self, other) -> RingElem:
        other = _coerce(other)
        out = [Fraction(0)] * (QDEG * YDEG)
        a_nz = [(k, v) for k, v in enumerate(self.coeffs) if v]
        b_nz = [(k, v) for k, v in enumerate(other.coeffs) if v]
        for ka, va in a_nz:
            ia, ja = divmod(ka, YDEG)
            for kb, vb in b_nz:
                ib, jb = divmod(kb, YDEG)
                v = va * vb
                i, j = ia + ib, ja + jb
                if i >= QDEG:
                    i -= QDEG
                    v = -v
                if j >= YDEG:
                    j -= YDEG
                    v *= 2
                out[i * YDEG + j] += v
        return RingElem(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RingElem.scalar(other)
        if not isinstance(other, RingElem):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __repr__(self) -> str:
        terms = []
        for idx, v in enumerate(self.coeffs):
            if v:
                i, j = divmod(idx, YDEG)
                mono = "".join(s for s in (f"x^{i}" if i else "", f"y^{j}" if j else ""))
                terms.append(f"{v}{'*' + mono if mono else ''}")
        return f"RingElem({' + '.join(terms) or '0'})"


def _coerce(v) -> RingElem:
    if isinstance(v, RingElem):
        return v
    if isinstance(v, WeightMonomial):
        return v.to_ring()
    return RingElem.scalar(v)


def ring_add(a: RingElem, b: RingElem) -> RingElem:
    return a + b


def ring_mul(a: RingElem, b: RingElem) -> RingElem:
    return a * b


@dataclass(frozen=True)
class WeightMonomial:
    """2^{sixths/6} * q^{qexp}, with qexp reduced mod 16."""

    sixths: int = 0
    qexp: int = 0

    def __post_init__(self):
        object.__setattr__(self, "qexp", self.qexp % 16)

    def __mul__(self, other: WeightMonomial) -> WeightMonomial:
        return WeightMonomial(self.sixths + other.sixths, self.qexp + other.qexp)

    def __pow__(self, e: int) -> WeightMonomial:
        return WeightMonomial(self.sixths * e, self.qexp * e)

    def inverse(self) -> WeightMonomial:
        return WeightMonomial(-self.sixths, -self.qexp)

    def to_ring(self) -> RingElem:
        # q^e = x^e with x^8 = -1; 2^{s/6} = y^s with y^6 = 2
        return RingElem.term(1, self.qexp, self.sixths)

    def is_power_of_two(self) -> bool:
        return self.qexp == 0 and self.sixths % 6 == 0

    def as_dict(self) -> dict:
        return {"sixths": self.sixths, "qexp": self.qexp}

    @staticmethod
    def product(ms: Iterable[WeightMonomial]) -> WeightMonomial:
        s = e = 0
        for m in ms:
            s += m.sixths
            e += m.qexp
        return WeightMonomial(s, e)


ONE = WeightMonomial(0, 0)

# letter -> sixths; family -> q exponent
_SIXTHS = {
    "HV": {"a": -2, "b": 1, "c": -2},
    "HD": {"a": 1, "b": -2, "c": -2},
    "VD": {"a": 1, "b": -2, "c": -2},
}
_QEXP = {"HV": 0, "HD": 3, "VD": -3}
FAMILIES = ("HV", "HD", "VD")


def vertex_weight(family: str, letter: str) -> WeightMonomial:
    """Weight of a degree-4 vertex. family: HV (=1), HD (=2), VD (=3); letter: a, b or c."""
    try:
        return WeightMonomial(_SIXTHS[family][letter], _QEXP[family])
    except KeyError:
        raise ValueError(f"unknown vertex weight {family}/{letter}") from None


def _as_tuple(k) -> tuple[int, ...]:
    return tuple(getattr(k, "k", k))


def prefactor(k) -> WeightMonomial:
    """C_k = b1^{n(n-1)/2} a2^{n(n-1)/2 + n k_n} a3^{n(n+1)/2}."""
    k = _as_tuple(k)
    n = len(k)
    return (vertex_weight("HV", "b") ** (n * (n - 1) // 2)
            * vertex_weight("HD", "a") ** (n * (n - 1) // 2 + n * k[-1])
            * vertex_weight("VD", "a") ** (n * (n + 1) // 2))


@lru_cache(maxsize=None)
def _factorial(n: int) -> int:
    if n < 0:
        raise ValueError("negative factorial")
    if n > FACTORIAL_CAP:
        raise OverflowError(f"factorial argument {n} exceeds cap {FACTORIAL_CAP}")
    return 1 if n < 2 else n * _factorial(n - 1)


def factorial(n: int) -> int:
    return _factorial(n)


def pochhammer(a, k: int) -> Fraction:
    """Rising factorial (a)_k for rational a."""
    a = Fraction(a)
    out = Fraction(1)
    for t in range(k):
        out *= a + t
    return out


def _require_integer(v: Fraction, what: str) -> int:
    if v.denominator != 1:
        raise ArithmeticError(f"{what} evaluated to non-integer {v}")
    return v.numerator


def eval_df_formula(n: int) -> int:
    """2^{n(n-1)/2} prod_{j<n} (4j+2)!/(n+2j+1)!."""
    if n < 1:
        raise ValueError("n must be >= 1")
    v = Fraction(2 ** (n * (n - 1) // 2))
    for j in range(n):
        v *= Fraction(factorial(4 * j + 2), factorial(n + 2 * j + 1))
    return _require_integer(v, f"df formula at n={n}")


@dataclass(frozen=True)
class FormulaParams:
    n: int
    m: int

    def __post_init__(self):
        if self.n < 1 or self.m < 0:
            raise ValueError(f"need n >= 1 and m >= 0, got n={self.n}, m={self.m}")


def eval_free_boundary_formula(p: FormulaParams) -> int:
    """Number of 20V configurations summed over all k inside [1, m+1], as a Pochhammer product."""
    n, m = p.n, p.m
    v = Fraction(1)
    for i in range(1, n + 1):
        num = pochhammer(m - n + 3 * i + 1, i - 1) * pochhammer(m - n + i + 1, i)
        den = pochhammer(Fraction(m - n + i + 2, 2), i - 1) * pochhammer(i, i)
        if den == 0:
            raise ZeroDivisionError(f"Pochhammer denominator vanishes at n={n}, m={m}, i={i}")
        v *= num / den
    return _require_integer(v, f"free-boundary formula at n={n}, m={m}")
