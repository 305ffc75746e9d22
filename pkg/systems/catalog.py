"""
具名代数目录：链的自同态半环、A₂¹、Brandt 幺半群 B₂¹ 及其自然加法，以及按名称解析。
"""
import logging
import re
from dataclasses import dataclass
from itertools import combinations_with_replacement
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from cells.algebra import (
    AiSemiring,
    DEFAULT_MAX_SIZE,
    FiniteAlgebra,
    InverseSemigroup,
    Verdict,
    absorbing_elements,
    additive_reduct,
    check_isomorphism,
    closure_from_maps,
    direct_product,
    is_ideal,
    is_isomorphic,
    multiplicative_reduct,
    neutral_elements,
    order_dual,
    rees_quotient,
    restrict,
    subalgebra_generated,
    verify_ai_semiring,
)
from cells.errors import ClosureLimitError, UnknownAlgebraError, WorkbenchError
from cells.pinj import PartialInjection
from organs.green import green, nat_addition
from systems.snfam import build_sn, tn

logger = logging.getLogger(__name__)

A21_MAPS = (
    ("1", (0, 1, 2)),
    ("ea", (1, 1, 2)),
    ("ae", (0, 2, 2)),
    ("a", (1, 2, 2)),
    ("e", (0, 0, 2)),
    ("0", (2, 2, 2)),
)
BRANDT_LABELS = {(0, 1): "1", (1, -1): "c", (-1, 0): "d", (0, -1): "cd", (-1, 1): "dc", (-1, -1): "0"}

CATALOG_NAMES = ("end-chain:m", "end0-chain:m", "a21", "b21", "brandt", "sn:n", "tn:n:k")


@dataclass(frozen=True)
class MonotoneMap:
    m: int
    values: Tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != self.m:
            raise WorkbenchError(f"{self.values} is not a map on a {self.m}-chain")
        if any(v < 0 or v >= self.m for v in self.values):
            raise WorkbenchError(f"{self.values} leaves the {self.m}-chain")
        if any(a > b for a, b in zip(self.values, self.values[1:])):
            raise WorkbenchError(f"{self.values} is not monotone")

    def then(self, other: "MonotoneMap") -> "MonotoneMap":
        """先作用 self 再作用 other"""
        return MonotoneMap(self.m, tuple(other.values[v] for v in self.values))

    def reversed_order(self) -> "MonotoneMap":
        top = self.m - 1
        return MonotoneMap(self.m, tuple(top - self.values[top - x] for x in range(self.m)))

    @property
    def rank(self) -> int:
        return len(set(self.values))

    def __str__(self) -> str:
        return "(" + ",".join(str(v) for v in self.values) + ")"


def _monotone_semiring(maps: Sequence[MonotoneMap], labels: Optional[Sequence[str]] = None) -> AiSemiring:
    """逐点取最大值为加法、从左到右复合为乘法"""
    index = {f.values: i for i, f in enumerate(maps)}
    values = np.array([f.values for f in maps], dtype=np.intp)
    n = len(maps)
    add = np.empty((n, n), dtype=np.intp)
    mul = np.empty((n, n), dtype=np.intp)
    for i in range(n):
        for j in range(n):
            add[i, j] = index[tuple(np.maximum(values[i], values[j]).tolist())]
            mul[i, j] = index[maps[i].then(maps[j]).values]
    return AiSemiring(labels or [str(f) for f in maps], add, mul, carriers=list(maps))


def monotone_maps(m: int) -> List[MonotoneMap]:
    if m < 1:
        raise WorkbenchError(f"chain size must be positive, got {m}")
    return [MonotoneMap(m, values) for values in combinations_with_replacement(range(m), m)]


def end_chain(m: int, max_size: int = DEFAULT_MAX_SIZE) -> AiSemiring:
    """
    End(C_m)：m 元链的全部单调自映射，元素按取值序列的字典序编号
    元素个数先与 max_size 比较，超出时不做构造
    """
    if m >= 1 and end_chain_size(m) > max_size:
        raise ClosureLimitError(max_size, end_chain_size(m))
    R = _monotone_semiring(monotone_maps(m))
    logger.debug(f"End(C_{m}): {R.size} 个元素")
    return R


def end_chain_size(m: int) -> int:
    return comb(2 * m - 1, m)


def end0_chain(m: int, max_size: int = DEFAULT_MAX_SIZE) -> AiSemiring:
    R = end_chain(m, max_size)
    return restrict(R, [i for i, f in enumerate(R.carriers) if f.values[0] == 0])


def omega(R: FiniteAlgebra) -> int:
    """常值 0 映射"""
    m = R.carriers[0].m
    return R.index(str(MonotoneMap(m, (0,) * m)))


def a21() -> AiSemiring:
    maps = [MonotoneMap(3, values) for _, values in A21_MAPS]
    return _monotone_semiring(maps, [label for label, _ in A21_MAPS])


def fixing_top(m: int) -> AiSemiring:
    """End(C_m) 中固定最大点 m−1 的映射构成的子半环"""
    R = end_chain(m)
    return restrict(R, [i for i, f in enumerate(R.carriers) if f.values[-1] == m - 1])


def brandt_monoid() -> InverseSemigroup:
    c = PartialInjection.from_pairs(2, [(0, 1)])
    d = PartialInjection.from_pairs(2, [(1, 0)])
    S, _ = closure_from_maps([c, d], with_inverses=True, names=("c", "d"), adjoin_identity=True)
    # cd = c·d 即 {0→0}，dc = {1→1}
    return S.with_labels([BRANDT_LABELS[f.targets] for f in S.carriers])


def b21() -> AiSemiring:
    return nat_addition(brandt_monoid(), p=2)


def meet_addition(R: AiSemiring) -> AiSemiring:
    """x(α⋄β) := min{xα, xβ}"""
    maps = R.carriers
    index = {f.values: i for i, f in enumerate(maps)}
    n = R.size
    meet = np.empty((n, n), dtype=np.intp)
    for i in range(n):
        for j in range(n):
            meet[i, j] = index[tuple(min(a, b) for a, b in zip(maps[i].values, maps[j].values))]
    return AiSemiring(R.labels, meet, R.mul, R.generators, maps)


def lattice_violation(join: np.ndarray, meet: np.ndarray) -> Optional[Verdict]:
    """吸收律与分配律（交、并两种方向）"""
    ar = np.arange(len(join))
    x, y = ar[:, None], ar[None, :]
    bad = np.argwhere(join[x, meet] != x)
    if len(bad):
        return Verdict.violation("x + (x ⋄ y) = x", bad[0])
    bad = np.argwhere(meet[x, join] != x)
    if len(bad):
        return Verdict.violation("x ⋄ (x + y) = x", bad[0])
    a, b, c = np.meshgrid(ar, ar, ar, indexing="ij")
    bad = np.argwhere(meet[a, join[b, c]] != join[meet[a, b], meet[a, c]])
    if len(bad):
        return Verdict.violation("x ⋄ (y + z) = x⋄y + x⋄z", bad[0])
    bad = np.argwhere(join[a, meet[b, c]] != meet[join[a, b], join[a, c]])
    if len(bad):
        return Verdict.violation("x + (y ⋄ z) = (x+y) ⋄ (x+z)", bad[0])
    return None


def combined_lattice_check(m: int) -> Verdict:
    """
    (End(C_m), +, ⋄) 是分配格，并且保序反转映射给出 (End(C_m),⋄,·) ≅ (End(C_m),+,·)
    """
    R = end_chain(m)
    Q = meet_addition(R)
    for name, algebra in (("(End, +, ·)", R), ("(End, ⋄, ·)", Q)):
        verdict = verify_ai_semiring(algebra)
        if not verdict:
            return Verdict.violation(verdict.law, verdict.witness, f"{name}: {verdict.detail}")
    problem = lattice_violation(R.add, Q.add)
    if problem is not None:
        return problem
    index = {f.values: i for i, f in enumerate(R.carriers)}
    mapping = [index[f.reversed_order().values] for f in R.carriers]
    verdict = check_isomorphism(Q, R, mapping)
    if not verdict:
        return verdict
    return Verdict.passed(f"m={m}: distributive lattice, ⋄ ≅ + via order reversal")


# ---------------------------------------------------------------- End(C_m) 结构

def rank_classes(R: AiSemiring) -> Dict[int, Tuple[int, ...]]:
    classes: Dict[int, List[int]] = {}
    for i, f in enumerate(R.carriers):
        classes.setdefault(f.rank, []).append(i)
    return {k: tuple(v) for k, v in sorted(classes.items())}


def end_chain_structure(m: int) -> Verdict:
    """
    乘法 D 类恰为秩类 I₁…I_m；ω 的加法/乘法角色；m=2、3 时的小情形
    """
    R = end_chain(m)
    G = green(multiplicative_reduct(R))
    by_rank = sorted(rank_classes(R).values())
    if sorted(G.dclasses) != by_rank:
        return Verdict.violation("D-classes are the rank classes", detail=f"m={m}")
    w = omega(R)
    if neutral_elements(R.add) != [w]:
        return Verdict.violation("ω is neutral for +", (w,))
    absorbing = absorbing_elements(R.mul)
    if m >= 2 and w in absorbing:
        return Verdict.violation("ω is not multiplicatively absorbing in End(C_m)", (w,))
    R0 = end0_chain(m)
    w0 = omega(R0)
    if neutral_elements(R0.add) != [w0] or absorbing_elements(R0.mul) != [w0]:
        return Verdict.violation("ω is neutral for + and absorbing for · in End⁰(C_m)", (w0,))

    if m == 2:
        leq = R.add == np.arange(R.size)[None, :]
        if not all(leq[i, j] or leq[j, i] for i in range(R.size) for j in range(R.size)):
            return Verdict.violation("additive reduct of End(C_2) is a chain")
        constants = rank_classes(R)[1]
        M = R.mul
        if not all(M[x, c] == c for x in range(R.size) for c in constants):
            return Verdict.violation("constants of End(C_2) are right zeros")
        if len(neutral_elements(M)) != 1:
            return Verdict.violation("End(C_2) has a multiplicative identity")

    if m == 3:
        I1 = rank_classes(R)[1]
        M = R.mul
        if not all(M[x, z] == z for x in range(R.size) for z in I1):
            return Verdict.violation("I₁ consists of right zeros")
        if not is_ideal(multiplicative_reduct(R), I1):
            return Verdict.violation("I₁ is a two-sided ideal")
        if is_isomorphic(a21(), fixing_top(3)) is None:
            return Verdict.violation("A₂¹ ≅ maps fixing 2")
        if is_isomorphic(additive_reduct(a21()), order_dual(end0_chain(3))) is None:
            return Verdict.violation("(A₂¹, +) is dual to (End⁰(C_3), +)")
    return Verdict.passed(f"m={m}: {len(G.dclasses)} D-classes")


# ---------------------------------------------------------------- B₂¹ 整除 A₂¹ × A₂¹

PIPELINE_SEEDS = ("(1,1)", "(e,a)", "(a,e)")
PIPELINE_IDEAL = ("0", "(1,a)", "(a,1)", "(ae,a)", "(a,ae)", "(ea,a)", "(a,ea)", "(a,a)")


@dataclass
class DivisionPipeline:
    product: AiSemiring
    generated: AiSemiring
    outside_n: int
    quotient_n: AiSemiring
    ideal: Tuple[int, ...]
    quotient: AiSemiring
    mapping: Optional[List[int]]

    @property
    def ok(self) -> bool:
        return self.mapping is not None


def division_pipeline() -> DivisionPipeline:
    """
    在 A₂¹ × A₂¹ 中由 (1,1), (e,a), (a,e) 生成子半环 B，
    先商掉含 0 分量的理想 N，再商掉 8 元理想，得到与 B₂¹ 同构的商
    """
    A = a21()
    zero = A.index("0")
    P = direct_product(A, A)
    B, _ = subalgebra_generated(P, [P.index(label) for label in PIPELINE_SEEDS])
    N = [i for i, (x, y) in enumerate(B.carriers) if zero in (x, y)]
    outside = B.size - len(N)
    BN = rees_quotient(B, N)
    ideal = tuple(BN.index(label) for label in PIPELINE_IDEAL)
    Q = rees_quotient(BN, ideal)
    mapping = is_isomorphic(Q, b21())
    logger.info(f"整除链: |B|={B.size}, N 外 {outside} 个, |B/N|={BN.size}, 最终 {Q.size} 个元素")
    return DivisionPipeline(P, B, outside, BN, ideal, Q, mapping)


def verify_division_pipeline() -> Verdict:
    run = division_pipeline()
    if run.outside_n != 12:
        return Verdict.violation("12 elements of B outside N", detail=f"found {run.outside_n}")
    if run.quotient_n.size != 13:
        return Verdict.violation("|B/N| = 13", detail=f"found {run.quotient_n.size}")
    BN = run.quotient_n
    for name, reduct in (("·", multiplicative_reduct(BN)), ("+", additive_reduct(BN))):
        if not is_ideal(reduct, run.ideal):
            return Verdict.violation(f"8-element set is an ideal for {name}")
    if not run.ok:
        return Verdict.violation("Rees quotient ≅ B₂¹")
    return Verdict.passed("B₂¹ is a Rees quotient of a subsemiring of A₂¹ × A₂¹")


# ---------------------------------------------------------------- 名称解析

_NAME = re.compile(r"(?P<family>[a-z0-9-]+)(?::(?P<a>\d+))?(?::(?P<b>\d+))?")


def resolve(name: str, max_size: int = DEFAULT_MAX_SIZE) -> FiniteAlgebra:
    """
    按目录名构造代数：end-chain:m, end0-chain:m, a21, b21, brandt, sn:n, tn:n:k
    """
    match = _NAME.fullmatch(name.strip())
    if not match:
        raise UnknownAlgebraError(f"unknown algebra {name!r}; known: {', '.join(CATALOG_NAMES)}")
    family, a, b = match.group("family"), match.group("a"), match.group("b")
    arity = (a is not None) + (b is not None)
    expected = {"end-chain": 1, "end0-chain": 1, "a21": 0, "b21": 0, "brandt": 0, "sn": 1, "tn": 2}
    if expected.get(family) != arity:
        raise UnknownAlgebraError(f"unknown algebra {name!r}; known: {', '.join(CATALOG_NAMES)}")
    if family == "end-chain":
        return end_chain(int(a), max_size)
    if family == "end0-chain":
        return end0_chain(int(a), max_size)
    if family == "a21":
        return a21()
    if family == "b21":
        return b21()
    if family == "brandt":
        return brandt_monoid()
    if family == "sn":
        return build_sn(int(a), max_size).semigroup
    return tn(int(a), int(b), max_size)
