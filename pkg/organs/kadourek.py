import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple

from cells.algebra import FiniteAlgebra, inversion_table, restrict
from cells.errors import (
    ConsistencyError,
    KindMismatchError,
    NotCombinatorialError,
    NotInverseError,
    WorkbenchError,
)
from cells.union_find import UnionFind
from organs.green import GreenStructure, green, is_combinatorial

logger = logging.getLogger(__name__)

RHO_READINGS = ("prose", "display")

Pair = Tuple[int, int]


@dataclass(frozen=True)
class Partition:
    classes: Tuple[Tuple[int, ...], ...]

    def block_of(self, x: int) -> int:
        for k, members in enumerate(self.classes):
            if x in members:
                return k
        raise KeyError(x)

    def same(self, a: int, b: int) -> bool:
        return self.block_of(a) == self.block_of(b)

    def refines(self, other: "Partition") -> bool:
        """self 的每个类都包含在 other 的某个类中"""
        return all(len({other.block_of(x) for x in members}) == 1 for members in self.classes)

    def render(self, labels) -> str:
        return " | ".join("{" + ", ".join(labels[x] for x in members) + "}" for members in self.classes)


@dataclass(frozen=True)
class Obligation:
    X: int
    Y: int
    e: int
    f: int
    g: int


@dataclass(frozen=True)
class SeparationWitness:
    obligation: Obligation
    filter: Optional[FrozenSet[int]] = None
    partition: Optional[Partition] = None

    @property
    def separated(self) -> bool:
        return self.filter is not None


@dataclass
class StarVerdict:
    ok: bool
    passes: List[SeparationWitness] = field(default_factory=list)
    failure: Optional[SeparationWitness] = None
    obligations: int = 0

    def __bool__(self) -> bool:
        return self.ok


@dataclass
class MembershipVerdict:
    member: bool
    reason: str
    star: Optional[StarVerdict] = None
    witness: Optional[int] = None

    def __bool__(self) -> bool:
        return self.member


def up_set(G: GreenStructure, Y: int) -> FrozenSet[int]:
    """[Y) = 所有满足 Y ≤ X 的 D 类 X"""
    return frozenset(X for X in range(G.dclass_count) if G.leq(Y, X))


def is_filter(G: GreenStructure, K: Iterable[int]) -> bool:
    K = frozenset(K)
    return all(up_set(G, Z) <= K for Z in K)


def enumerate_filters(G: GreenStructure, Y: int) -> Iterator[FrozenSet[int]]:
    """[Y) 内所有向上封闭的子集，按大小递增、同大小按字典序"""
    up = sorted(up_set(G, Y))
    ups = {Z: up_set(G, Z) for Z in up}
    for size in range(len(up) + 1):
        for combo in combinations(up, size):
            K = frozenset(combo)
            if all(ups[Z] <= K for Z in K):
                yield K


class Kadourek:
    """
    条件 (∗) 的判定：投影 π、关系 ρ、闭包 τ 与滤子搜索。
    """

    def __init__(self, S: FiniteAlgebra, G: Optional[GreenStructure] = None,
                 rho_reading: str = "prose"):
        if S.inv is None:
            raise KindMismatchError(f"{S.kind} is not an inverse semigroup")
        if rho_reading not in RHO_READINGS:
            raise WorkbenchError(f"unknown rho reading {rho_reading!r}")
        self.S = S
        self.G = G or green(S)
        self.rho_reading = rho_reading
        self._pi: Dict[Pair, FrozenSet[Pair]] = {}
        self._rho: Dict[Pair, FrozenSet[Pair]] = {}
        self._tau: Dict[Tuple[FrozenSet[int], int], Partition] = {}
        self._up: Dict[int, FrozenSet[int]] = {}
        self._filters: Dict[int, List[FrozenSet[int]]] = {}

    @property
    def combinatorial(self) -> bool:
        return is_combinatorial(self.S, self.G)

    def up_set(self, Y: int) -> FrozenSet[int]:
        if Y not in self._up:
            self._up[Y] = up_set(self.G, Y)
        return self._up[Y]

    def enumerate_filters(self, Y: int) -> List[FrozenSet[int]]:
        if Y not in self._filters:
            self._filters[Y] = list(enumerate_filters(self.G, Y))
        return self._filters[Y]

    def projection_pi(self, g: int, e: int, h: int) -> int:
        """
        hπ_{g,e} := a⁻¹·e·a，其中 a 是 D_g 中唯一满足 a·a⁻¹ = g 且 a⁻¹·a = h 的元素
        """
        M, inv, G = self.S.mul, self.S.inv, self.G
        if not G.idempotent_leq(e, g):
            raise WorkbenchError(f"{self.S.labels[e]} is not below {self.S.labels[g]}")
        if G.d[g] != G.d[h]:
            raise WorkbenchError(f"{self.S.labels[g]} and {self.S.labels[h]} lie in different D-classes")
        candidates = [a for a in G.dclasses[G.d[g]] if M[a, inv[a]] == g and M[inv[a], a] == h]
        if len(candidates) != 1:
            raise ConsistencyError(
                f"{len(candidates)} elements link {self.S.labels[g]} to {self.S.labels[h]}",
                [self.S.labels[a] for a in candidates])
        a = candidates[0]
        return int(M[M[inv[a], e], a])

    def pi_relation(self, X: int, Y: int) -> FrozenSet[Pair]:
        if (X, Y) in self._pi:
            return self._pi[(X, Y)]
        G = self.G
        top = G.idempotents_of(X)
        pairs: Set[Pair] = set()
        for g in top:
            for e in G.idempotents_of(Y):
                if not G.idempotent_leq(e, g):
                    continue
                images = {self.projection_pi(g, e, h) for h in top}
                for p in images:
                    if G.d[p] != Y:
                        raise ConsistencyError(f"projection of {self.S.labels[e]} left its D-class")
                pairs.update((p, q) for p in images for q in images)
        result = frozenset(pairs)
        self._pi[(X, Y)] = result
        return result

    def rho_relation(self, X: int, Y: int) -> FrozenSet[Pair]:
        """
        prose 读法：E(Y) 中在 E(X) 里有公共上界的幂等元对
        display 读法：E(X) 中在 E(Y) 里有公共上界的幂等元对
        """
        if (X, Y) in self._rho:
            return self._rho[(X, Y)]
        G = self.G
        lower, upper = (Y, X) if self.rho_reading == "prose" else (X, Y)
        pairs: Set[Pair] = set()
        for g in G.idempotents_of(upper):
            below = [f for f in G.idempotents_of(lower) if G.idempotent_leq(f, g)]
            pairs.update((p, q) for p in below for q in below)
        result = frozenset(pairs)
        self._rho[(X, Y)] = result
        return result

    def _closure(self, relations: Iterable[FrozenSet[Pair]], Y: int) -> Partition:
        uf = UnionFind(self.G.idempotents_of(Y))
        for relation in relations:
            for p, q in relation:
                if (q, p) not in relation:
                    raise ConsistencyError(f"relation on D{Y} is not symmetric")
                if p in uf and q in uf:
                    uf.union(p, q)
        return Partition(tuple(uf.classes()))

    def _inside(self, K: Iterable[int], Y: int) -> Tuple[FrozenSet[int], List[int]]:
        K = frozenset(K)
        up = self.up_set(Y)
        if not K <= up:
            raise WorkbenchError("filter must lie inside [Y)")
        return K, sorted(up)

    def pi_part(self, K: Iterable[int], Y: int) -> Partition:
        """K 中各类的 π 之并的传递闭包；K 变大时只会合并"""
        K, up = self._inside(K, Y)
        return self._closure((self.pi_relation(X, Y) for X in up if X in K), Y)

    def rho_part(self, K: Iterable[int], Y: int) -> Partition:
        """[Y)∖K 中各类的 ρ 之并的传递闭包；K 变大时只会细分"""
        K, up = self._inside(K, Y)
        return self._closure((self.rho_relation(X, Y) for X in up if X not in K), Y)

    def tau(self, K: Iterable[int], Y: int) -> Partition:
        """
        τ(K, Y)：K 中各类的 π 与 [Y)∖K 中各类的 ρ 之并的传递闭包
        """
        K, up = self._inside(K, Y)
        key = (K, Y)
        if key in self._tau:
            return self._tau[key]
        partition = self._closure(
            (self.pi_relation(X, Y) if X in K else self.rho_relation(X, Y) for X in up), Y)
        covered = [x for members in partition.classes for x in members]
        if sorted(covered) != sorted(self.G.idempotents_of(Y)):
            raise ConsistencyError(f"τ on D{Y} is not a partition of E(D{Y})")
        if not (self.pi_part(K, Y).refines(partition) and self.rho_part(K, Y).refines(partition)):
            raise ConsistencyError(f"τ on D{Y} does not contain its π and ρ parts")
        self._tau[key] = partition
        return partition

    def obligations(self) -> List[Obligation]:
        G = self.G
        result = []
        for Y in range(G.dclass_count):
            bottom = G.idempotents_of(Y)
            if len(bottom) < 2:
                continue
            for X in sorted(self.up_set(Y)):
                for g in G.idempotents_of(X):
                    for e in bottom:
                        if not G.idempotent_leq(e, g):
                            continue
                        for f in bottom:
                            if not G.idempotent_leq(f, g):
                                result.append(Obligation(X, Y, e, f, g))
        return result

    def separating_filter(self, X: int, Y: int, e: int, f: int) -> Optional[FrozenSet[int]]:
        for K in self.enumerate_filters(Y):
            if X in K:
                continue
            if not self.tau(K, Y).same(e, f):
                return K
        return None

    def star_condition(self) -> StarVerdict:
        """
        对每个 (X, Y, e, f, g)（e ≤ g，f ≰ g）寻找不含 X 且分离 e, f 的滤子
        """
        if not self.combinatorial:
            raise NotCombinatorialError("condition (∗) needs a combinatorial inverse semigroup")
        obligations = self.obligations()
        logger.info(f"条件 (∗): {len(obligations)} 个待验证义务")
        found: Dict[Tuple[int, int, int, int], Optional[FrozenSet[int]]] = {}
        passes = []
        for ob in obligations:
            key = (ob.X, ob.Y, ob.e, ob.f)
            if key not in found:
                found[key] = self.separating_filter(*key)
            K = found[key]
            if K is None:
                logger.info(f"条件 (∗) 不成立: X=D{ob.X}, Y=D{ob.Y}, "
                            f"e={self.S.labels[ob.e]}, f={self.S.labels[ob.f]}")
                return StarVerdict(False, passes, SeparationWitness(ob), len(obligations))
            passes.append(SeparationWitness(ob, K, self.tau(K, ob.Y)))
        logger.info(f"条件 (∗) 成立, 共 {len(found)} 组不同的 (X, Y, e, f)")
        return StarVerdict(True, passes, None, len(obligations))

    def recheck(self, witness: SeparationWitness) -> bool:
        """独立复核一个见证"""
        ob = witness.obligation
        G = self.G
        if not (G.idempotent_leq(ob.e, ob.g) and not G.idempotent_leq(ob.f, ob.g)):
            return False
        if G.d[ob.e] != ob.Y or G.d[ob.f] != ob.Y or G.d[ob.g] != ob.X:
            return False
        if witness.separated:
            K = witness.filter
            return (ob.X not in K and K <= self.up_set(ob.Y) and is_filter(G, K)
                    and not self.tau(K, ob.Y).same(ob.e, ob.f))
        return all(self.tau(K, ob.Y).same(ob.e, ob.f)
                   for K in self.enumerate_filters(ob.Y) if ob.X not in K)


def star_condition(S: FiniteAlgebra, rho_reading: str = "prose") -> StarVerdict:
    return Kadourek(S, rho_reading=rho_reading).star_condition()


def drop_dclasses(S: FiniteAlgebra, G: GreenStructure, classes: Iterable[int]) -> FiniteAlgebra:
    """去掉若干 D 类后的子半群；剩余部分不封闭时报错"""
    dropped = set(classes)
    keep = [x for x in range(S.size) if G.d[x] not in dropped]
    return restrict(S, keep)


def in_var_b21(S: FiniteAlgebra, rho_reading: str = "prose") -> MembershipVerdict:
    """
    判定有限逆半群是否属于 B₂¹ 生成的逆半群簇
    """
    if S.inv is None:
        try:
            S = inversion_table(S)
        except NotInverseError as e:
            return MembershipVerdict(False, f"not an inverse semigroup: {e}")
    G = green(S)
    if not is_combinatorial(S, G):
        M = S.mul
        for e in G.idempotents:
            group = [x for x in range(S.size) if G.h[x] == G.h[e] and x != e]
            if group:
                g = group[0]
                return MembershipVerdict(
                    False, f"nontrivial subgroup: x^2 ≠ x^3 at {S.labels[g]}", witness=g)
        raise ConsistencyError("nontrivial H-class without a nontrivial group H-class")
    star = Kadourek(S, G, rho_reading).star_condition()
    if star.ok:
        return MembershipVerdict(True, f"condition (∗) holds ({star.obligations} obligations)", star)
    ob = star.failure.obligation
    return MembershipVerdict(
        False, f"condition (∗) fails at X=D{ob.X}, Y=D{ob.Y}, "
               f"e={S.labels[ob.e]}, f={S.labels[ob.f]}, g={S.labels[ob.g]}", star)
