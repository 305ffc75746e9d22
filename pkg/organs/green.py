import logging
from dataclasses import dataclass
from typing import FrozenSet, List, Tuple

import numpy as np

from cells.algebra import AiSemiring, FiniteAlgebra, verify_ai_semiring
from cells.errors import ConsistencyError, KindMismatchError
from cells.union_find import UnionFind

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GreenStructure:
    r: Tuple[int, ...]
    l: Tuple[int, ...]
    h: Tuple[int, ...]
    d: Tuple[int, ...]
    idempotents: Tuple[int, ...]
    idempotent_order: FrozenSet[Tuple[int, int]]
    dclasses: Tuple[Tuple[int, ...], ...]
    dposet: FrozenSet[Tuple[int, int]]

    @property
    def dclass_count(self) -> int:
        return len(self.dclasses)

    def dclass_of(self, x: int) -> int:
        return self.d[x]

    def idempotents_of(self, Y: int) -> Tuple[int, ...]:
        return tuple(e for e in self.idempotents if self.d[e] == Y)

    def leq(self, Y: int, X: int) -> bool:
        """D 类偏序：Y ≤ X"""
        return (Y, X) in self.dposet

    def idempotent_leq(self, e: int, f: int) -> bool:
        return (e, f) in self.idempotent_order

    def covers(self) -> List[Tuple[int, int]]:
        strict = [(Y, X) for Y, X in self.dposet if Y != X]
        result = []
        for Y, X in strict:
            if not any(self.leq(Y, Z) and self.leq(Z, X) and Z not in (Y, X)
                       for Z in range(self.dclass_count)):
                result.append((Y, X))
        return sorted(result)


def _class_ids(relation: np.ndarray) -> Tuple[int, ...]:
    ids = np.full(len(relation), -1, dtype=np.intp)
    count = 0
    for x in range(len(relation)):
        if ids[x] == -1:
            ids[np.flatnonzero(relation[x])] = count
            count += 1
    return tuple(int(i) for i in ids)


def _ideal_reach(S: FiniteAlgebra) -> Tuple[np.ndarray, np.ndarray]:
    """right[x, y]: y ∈ xS¹；left[x, y]: y ∈ S¹x（恒等元只作为虚拟顶点）"""
    M = S.mul
    n = S.size
    ar = np.arange(n)
    right = np.zeros((n, n), dtype=bool)
    right[ar[:, None], M] = True
    right[ar, ar] = True
    left = np.zeros((n, n), dtype=bool)
    left[ar[:, None], M.T] = True
    left[ar, ar] = True
    return right, left


def green(S: FiniteAlgebra) -> GreenStructure:
    """
    计算 Green 关系
    右 Cayley 图（含虚拟单位元）的可达集恰为主右理想 xS¹，强连通分量即 R 类；L 对偶。
    :param S: 已校验的半群
    """
    M = S.mul
    n = S.size
    ar = np.arange(n)
    right, left = _ideal_reach(S)
    R = right & right.T
    L = left & left.T
    r, l, h = _class_ids(R), _class_ids(L), _class_ids(R & L)

    # D = R ∪ L 的传递闭包
    uf = UnionFind(range(n))
    first_r, first_l = {}, {}
    for x in range(n):
        uf.union(x, first_r.setdefault(r[x], x))
        uf.union(x, first_l.setdefault(l[x], x))
    dclasses = tuple(uf.classes())
    d = [0] * n
    for k, members in enumerate(dclasses):
        for x in members:
            d[x] = k

    idempotents = tuple(int(e) for e in np.flatnonzero(M[ar, ar] == ar))
    order = frozenset((e, f) for e in idempotents for f in idempotents
                      if M[e, f] == e and M[f, e] == e)

    k = len(dclasses)
    rel = np.zeros((k, k), dtype=bool)
    if all(any(d[e] == Y for e in idempotents) for Y in range(k)):
        for e, f in order:
            rel[d[e], d[f]] = True
    else:
        # 存在非正则 D 类时退回到主理想包含序
        twosided = (left.astype(np.int64) @ right.astype(np.int64)) > 0
        for Y in range(k):
            for X in range(k):
                rel[Y, X] = twosided[dclasses[X][0], dclasses[Y][0]]
    rel[np.arange(k), np.arange(k)] = True
    for z in range(k):
        rel |= rel[:, z][:, None] & rel[z][None, :]
    dposet = frozenset((int(Y), int(X)) for Y, X in np.argwhere(rel))
    logger.debug(f"Green 关系: {n} 个元素, {k} 个 D 类, {len(idempotents)} 个幂等元")
    return GreenStructure(r, l, h, tuple(d), idempotents, order, dclasses, dposet)


def is_combinatorial(S: FiniteAlgebra, G: GreenStructure = None) -> bool:
    G = G or green(S)
    return len(set(G.h)) == S.size


def is_regular(S: FiniteAlgebra) -> bool:
    M = S.mul
    ar = np.arange(S.size)
    sts = M[M, ar[:, None]]
    return bool((sts == ar[:, None]).any(axis=1).all())


def _require_inverse(S: FiniteAlgebra):
    if S.inv is None:
        raise KindMismatchError(f"{S.kind} carries no inv table")


def natural_order_matrix(S: FiniteAlgebra) -> np.ndarray:
    """[s, t] 为真当且仅当 s = s·s⁻¹·t"""
    _require_inverse(S)
    M = S.mul
    ar = np.arange(S.size)
    source = M[ar, S.inv]
    return M[source[:, None], ar[None, :]] == ar[:, None]


def natural_leq(S: FiniteAlgebra, s: int, t: int) -> bool:
    _require_inverse(S)
    M = S.mul
    return bool(M[M[s, S.inv[s]], t] == s)


def aperiodicity_index(S: FiniteAlgebra) -> int:
    """最小的 p 使 x^p = x^{p+1} 对所有 x 成立"""
    M = S.mul
    ar = np.arange(S.size)
    power = ar.copy()
    for p in range(1, S.size + 1):
        following = M[power, ar]
        if (following == power).all():
            return p
        power = following
    raise ConsistencyError(f"no p ≤ {S.size} with x^p = x^(p+1)")


def nat_addition(S: FiniteAlgebra, p: int = None) -> AiSemiring:
    """
    s + t := (s·t⁻¹)^p·s
    :param S: 满足 x^p = x^{p+1} 的逆半群
    :param p: 指数，缺省时取最小的全局指数
    :return: 加法幂等半环
    """
    _require_inverse(S)
    M, inv = S.mul, S.inv
    n = S.size
    ar = np.arange(n)
    p = p or aperiodicity_index(S)
    quotient = M[:, inv]                # [s, t] -> s·t⁻¹
    power = quotient
    for _ in range(p - 1):
        power = M[power, quotient]
    add = M[power, ar[:, None]]
    R = AiSemiring(S.labels, add, M, S.generators, S.carriers)

    verdict = verify_ai_semiring(R)
    if not verdict:
        raise ConsistencyError(f"nat-addition is not an ai-semiring: {verdict.describe(R)}")
    nat = natural_order_matrix(S)
    for s in range(n):
        meet = add[s]
        if not (nat[meet, s].all() and nat[meet, ar].all()):
            raise ConsistencyError(f"{S.labels[s]} + t is not a lower bound")
        lower = nat[:, s][:, None] & nat
        if not (~lower | nat[:, meet]).all():
            raise ConsistencyError(f"{S.labels[s]} + t is not the greatest lower bound")
    logger.info(f"自然加法构造完成: {n} 个元素, p={p}")
    return R


def egg_box(G: GreenStructure, Y: int) -> List[List[Tuple[int, ...]]]:
    """D 类 Y 的蛋盒：行是 R 类，列是 L 类，格子是 H 类"""
    members = G.dclasses[Y]
    rows = sorted({G.r[x] for x in members}, key=lambda c: min(x for x in members if G.r[x] == c))
    cols = sorted({G.l[x] for x in members}, key=lambda c: min(x for x in members if G.l[x] == c))
    return [[tuple(x for x in members if G.r[x] == rc and G.l[x] == lc) for lc in cols]
            for rc in rows]


def render_green(S: FiniteAlgebra, G: GreenStructure) -> str:
    idempotents = set(G.idempotents)
    lines = []
    for Y, members in enumerate(G.dclasses):
        lines.append(f"D{Y}: {len(members)} elements, {len(G.idempotents_of(Y))} idempotents")
        box = egg_box(G, Y)
        cells = [[" ".join(("*" if x in idempotents else "") + S.labels[x] for x in cell)
                  for cell in row] for row in box]
        width = max(len(c) for row in cells for c in row)
        for row in cells:
            lines.append("  | " + " | ".join(c.ljust(width) for c in row) + " |")
    lines.append("order (covers):")
    for Y, X in G.covers():
        lines.append(f"  D{Y} < D{X}")
    return "\n".join(lines)
