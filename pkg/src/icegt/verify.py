"""Named verification suites. Each returns a SuiteResult; failures carry replayable JSON."""
from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .enum20v import count_20v
from .enum6v import enumerate_m6v, record
from .exactalg import FormulaParams, WeightMonomial, eval_df_formula, eval_free_boundary_formula, prefactor
from .gtpat import (
    all_fences, enumerate_gt, enumerate_ideals, enumerate_triangles, fiber_sum, ic_ideal, ic_triangle, omega_fsa,
    psi, psi1, psi1_inverse,
)
from .lattice import BoundarySpec, PathFamily, paths_to_orientation, validate_ice
from .probbij import verify_ybe

SUITES = ("ybe", "thm42", "prop54", "thm52", "lemma510", "thm11", "thm12", "equidist")


@dataclass
class Instance:
    key: object
    checked: int
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        key = list(self.key) if isinstance(self.key, tuple) else self.key
        return {"instance": key, "checked": self.checked, "ok": self.ok}


@dataclass
class SuiteResult:
    suite: str
    instances: list
    summary: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(i.ok for i in self.instances)

    @property
    def checked(self) -> int:
        return sum(i.checked for i in self.instances)

    @property
    def failed(self) -> int:
        return sum(len(i.failures) for i in self.instances)

    def counterexamples(self) -> list:
        return [f for i in self.instances for f in i.failures]

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "ok": self.ok,
            "checked": self.checked,
            "failed": self.failed,
            "summary": self.summary,
            "instances": [i.to_json() for i in self.instances],
            "counterexamples": self.counterexamples()[:20],
        }


def all_k(nmax: int, kmax: int) -> list[tuple[int, ...]]:
    out = []
    for n in range(1, nmax + 1):
        out.extend(itertools.combinations(range(1, kmax + 1), n))
    return out


def _map(fn: Callable, items: Iterable, threads: int = 1) -> list:
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


# per-instance checks (module level so they pickle) ---------------------------------

def check_thm42_config(x) -> dict | None:
    r = record(x)
    lhs = prefactor(x.k) * r.omega
    if lhs != WeightMonomial(6 * r.ic, 0):
        return {"config": x.to_json(), "ic": r.ic, "C_omega": lhs.as_dict()}
    return None


def thm42_k(k) -> Instance:
    inst = Instance(k, 0)
    for x in enumerate_m6v(k):
        inst.checked += 1
        bad = check_thm42_config(x)
        if bad:
            inst.failures.append(bad)
    return inst


def check_prop54_config(x) -> dict | None:
    T = psi1(x)
    r = record(x)
    if r.ic != ic_triangle(T) or psi1_inverse(T) != x:
        return {"config": x.to_json(), "ic": r.ic, "ic_triangle": ic_triangle(T), "triangle": T.to_json()}
    return None


def prop54_k(k) -> Instance:
    inst = Instance(k, 0)
    seen = set()
    for x in enumerate_m6v(k):
        inst.checked += 1
        bad = check_prop54_config(x)
        if bad:
            inst.failures.append(bad)
        seen.add(psi1(x))
    ntri = sum(1 for _ in enumerate_triangles(k))
    if ntri != len(seen) or ntri != inst.checked:
        inst.failures.append({"k": list(k), "configs": inst.checked, "triangles": ntri, "image": len(seen)})
    return inst


def thm52_k(k) -> Instance:
    n = len(k)
    sums: dict = defaultdict(int)
    for x in enumerate_m6v(k):
        sums[psi(x)] += 2 ** record(x).ic
    inst = Instance(k, 0)
    for Tp in enumerate_gt(k):
        inst.checked += 1
        w = omega_fsa(Tp)
        via_configs = sums.pop(Tp, 0)
        if via_configs * 2 ** n != w or fiber_sum(Tp) * 2 ** n != w:
            inst.failures.append({"pattern": Tp.to_json(), "omega_fsa": str(w),
                                  "fiber_sum": str(via_configs)})
    for Tp, s in sums.items():  # psi landed outside the enumerated patterns
        inst.failures.append({"pattern": Tp.to_json(), "fiber_sum": str(s), "omega_fsa": None})
    return inst


def thm11_k(k) -> Instance:
    n = len(k)
    c = count_20v(k).count
    total = sum(omega_fsa(p) for p in enumerate_gt(k))
    inst = Instance(k, 1)
    if c * 2 ** n != total:
        inst.failures.append({"k": list(k), "count_20v": str(c), "sum_omega_fsa": str(total)})
    return inst


def lemma510_size(s: int) -> Instance:
    inst = Instance(s, 0)
    for F in all_fences(s):
        inst.checked += 1
        tot = sum(2 ** ic_ideal(F, I) for I in enumerate_ideals(F))
        if tot != 2 ** s:
            inst.failures.append({"fence": F.steps, "sum": str(tot)})
    return inst


def thm12_nm(nm) -> Instance:
    n, m = nm
    lhs = sum(count_20v(k).count for k in itertools.combinations(range(1, m + 2), n))
    try:
        rhs = eval_free_boundary_formula(FormulaParams(n, m))
    except ZeroDivisionError:
        return Instance(nm, 0)  # formula undefined here (only happens for m < n-1)
    inst = Instance(nm, 1)
    if lhs != rhs:
        inst.failures.append({"n": n, "m": m, "sum_count_20v": str(lhs), "formula": str(rhs)})
    return inst


def equidist_n(n: int) -> Instance:
    ics, invs = Counter(), Counter()
    N = 0
    for x in enumerate_m6v(tuple(range(1, n + 1))):
        r = record(x)
        ics[r.ic] += 1
        invs[r.inv] += 1
        N += 1
    inst = Instance(n, N)
    if ics != invs:
        inst.failures.append({"n": n, "ic": dict(sorted(ics.items())), "inv": dict(sorted(invs.items()))})
    return inst


# suites ----------------------------------------------------------------------------

def suite_ybe() -> SuiteResult:
    r = verify_ybe()
    inst = Instance("all-boundaries", r.checked, [{"boundary": list(b), "why": why} for b, why in r.failures])
    return SuiteResult("ybe", [inst], {"boundaries": r.checked, "balanced_weight_one": r.balanced_ones,
                                       "unbalanced_weight_zero": r.unbalanced_zeros})


def suite_thm42(nmax=4, kmax=6, threads=1) -> SuiteResult:
    return SuiteResult("thm42", _map(thm42_k, all_k(nmax, kmax), threads))


def suite_prop54(nmax=4, kmax=6, threads=1) -> SuiteResult:
    return SuiteResult("prop54", _map(prop54_k, all_k(nmax, kmax), threads))


def suite_thm52(nmax=4, kmax=6, threads=1) -> SuiteResult:
    return SuiteResult("thm52", _map(thm52_k, all_k(nmax, kmax), threads))


def suite_thm11(nmax=4, kmax=6, threads=1) -> SuiteResult:
    return SuiteResult("thm11", _map(thm11_k, all_k(nmax, kmax), threads))


def suite_lemma510(size=12, threads=1) -> SuiteResult:
    return SuiteResult("lemma510", _map(lemma510_size, range(1, size + 1), threads))


def suite_thm12(nmax=4, mmax=6, threads=1) -> SuiteResult:
    pairs = [(n, m) for n in range(1, nmax + 1) for m in range(mmax + 1)]
    res = SuiteResult("thm12", _map(thm12_nm, pairs, threads))
    red = Instance("m=n-1 reduction", 0)
    for n in range(1, 7):
        red.checked += 1
        a, b = eval_free_boundary_formula(FormulaParams(n, n - 1)), eval_df_formula(n)
        if a != b:
            red.failures.append({"n": n, "free": str(a), "df": str(b)})
    res.instances.append(red)
    return res


def suite_equidist(nmax=4, threads=1) -> SuiteResult:
    return SuiteResult("equidist", _map(equidist_n, range(1, nmax + 1), threads))


QUICK = {
    "thm42": dict(nmax=3, kmax=5),
    "prop54": dict(nmax=3, kmax=5),
    "thm52": dict(nmax=3, kmax=5),
    "thm11": dict(nmax=3, kmax=5),
    "lemma510": dict(size=10),
    "thm12": dict(nmax=3, mmax=5),
    "equidist": dict(nmax=3),
}

RUNNERS = {
    "ybe": suite_ybe,
    "thm42": suite_thm42,
    "prop54": suite_prop54,
    "thm52": suite_thm52,
    "lemma510": suite_lemma510,
    "thm11": suite_thm11,
    "thm12": suite_thm12,
    "equidist": suite_equidist,
}


def replay(config: PathFamily) -> SuiteResult:
    """Re-check a serialized configuration against every per-configuration identity."""
    inst = Instance(list(config.k), 1)
    rep = validate_ice(config.domain(), paths_to_orientation(config))
    if not rep:
        inst.failures.append({"config": config.to_json(), "ice": str(rep.first)})
    elif config.model == "m6v":
        for check in (check_thm42_config, check_prop54_config):
            bad = check(config)
            if bad:
                inst.failures.append(bad)
    return SuiteResult("replay", [inst])
