"""
S_n 族：由 χ, χ₁…χ_n 生成的 3n+3 点部分单射逆半群，T_n(k) = S_n ∖ B_k，以及相关的全部机械校验。
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from cells.algebra import DEFAULT_MAX_SIZE, FiniteAlgebra, Verdict, closure_from_maps, restrict
from cells.errors import ConsistencyError, WorkbenchError
from cells.pinj import PartialInjection, compose, empty_map, invert
from cells.terms import eval_term, vn_pair, word_term
from organs.green import green, is_combinatorial
from organs.kadourek import Kadourek, in_var_b21

logger = logging.getLogger(__name__)


def generator_names(n: int) -> List[str]:
    return ["chi"] + [f"chi{i}" for i in range(1, n + 1)]


def sn_generators(n: int) -> List[PartialInjection]:
    """
    χ = {n→2n+1, n+1→2n+2}
    χ_i = {i−1→i, n+1+i→n+i, 2n+1+i→2n+2+i}
    """
    if n < 2:
        raise WorkbenchError(f"S_n needs n ≥ 2, got {n}")
    degree = 3 * n + 3
    maps = [PartialInjection.from_pairs(degree, [(n, 2 * n + 1), (n + 1, 2 * n + 2)])]
    for i in range(1, n + 1):
        maps.append(PartialInjection.from_pairs(
            degree, [(i - 1, i), (n + 1 + i, n + i), (2 * n + 1 + i, 2 * n + 2 + i)]))
    return maps


def zeta(n: int, i: int, j: int) -> PartialInjection:
    return PartialInjection.from_pairs(3 * n + 3, [(i, j), (2 * n + 2 + i, 2 * n + 2 + j)])


def eta(n: int, l: int, r: int) -> PartialInjection:
    return PartialInjection.from_pairs(3 * n + 3, [(l, r)])


def _named_maps(n: int) -> Dict[PartialInjection, str]:
    named: Dict[PartialInjection, str] = {empty_map(3 * n + 3): "0"}
    for name, f in zip(generator_names(n), sn_generators(n)):
        g = invert(f)
        named[f] = name
        named[g] = f"{name}^-1"
        named[compose(f, g)] = f"{name}*{name}^-1"
        named[compose(g, f)] = f"{name}^-1*{name}"
    for i in range(n + 1):
        for j in range(n + 1):
            named[zeta(n, i, j)] = f"zeta({i},{j})"
    for l in range(3 * n + 3):
        for r in range(3 * n + 3):
            named[eta(n, l, r)] = f"eta({l},{r})"
    return named


def _quad(name: str) -> Tuple[str, ...]:
    return name, f"{name}^-1", f"{name}*{name}^-1", f"{name}^-1*{name}"


@dataclass
class SnSemigroup:
    n: int
    semigroup: FiniteAlgebra
    blocks: Dict[str, Tuple[int, ...]]
    generators: Dict[str, int]
    removed: Optional[int] = None
    _block_of: Dict[int, str] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._block_of = {x: name for name, members in self.blocks.items() for x in members}

    @property
    def degree(self) -> int:
        return 3 * self.n + 3

    @property
    def name(self) -> str:
        return f"S_{self.n}" if self.removed is None else f"T_{self.n}({self.removed})"

    def element(self, label: str) -> int:
        return self.semigroup.index(label)

    def map_of(self, x: int) -> PartialInjection:
        return self.semigroup.carriers[x]

    def block_of(self, x: int) -> str:
        return self._block_of[x]

    def point_of(self, x: int) -> int:
        """D 中幂等元 η_l 对应的点 l"""
        domain = self.map_of(x).domain()
        if len(domain) != 1:
            raise WorkbenchError(f"{self.semigroup.labels[x]} is not of rank 1")
        return next(iter(domain))

    def without_block(self, k: int) -> "SnSemigroup":
        """T_n(k) := S_n ∖ B_k"""
        if self.removed is not None:
            raise WorkbenchError(f"{self.name} already lacks a block")
        if not 1 <= k <= self.n:
            raise WorkbenchError(f"k must lie in 1..{self.n}, got {k}")
        dropped = set(self.blocks[f"B{k}"])
        keep = [x for x in range(self.semigroup.size) if x not in dropped]
        T = restrict(self.semigroup, keep)
        lookup = {old: new for new, old in enumerate(keep)}
        blocks = {name: tuple(lookup[x] for x in members)
                  for name, members in self.blocks.items() if name != f"B{k}"}
        generators = {name: lookup[x] for name, x in self.generators.items() if x in lookup}
        return SnSemigroup(self.n, T, blocks, generators, removed=k)


def _blocks(n: int, S: FiniteAlgebra) -> Dict[str, Tuple[int, ...]]:
    rank = [f.rank for f in S.carriers]
    blocks = {}
    for i in range(1, n + 1):
        blocks[f"B{i}"] = tuple(sorted(S.index(label) for label in _quad(f"chi{i}")))
    blocks["E"] = tuple(sorted(S.index(label) for label in _quad("chi")))
    in_e = set(blocks["E"])
    blocks["C"] = tuple(x for x in range(S.size) if rank[x] == 2 and x not in in_e)
    blocks["D"] = tuple(x for x in range(S.size) if rank[x] == 1)
    blocks["0"] = tuple(x for x in range(S.size) if rank[x] == 0)

    seen: Dict[int, str] = {}
    for name, members in blocks.items():
        for x in members:
            if x in seen:
                raise ConsistencyError(f"{S.labels[x]} lies in both {seen[x]} and {name}")
            seen[x] = name
    missing = [S.labels[x] for x in range(S.size) if x not in seen]
    if missing:
        raise ConsistencyError("blocks do not cover S_n", missing)
    stray = [S.labels[x] for x in range(S.size) if rank[x] == 3 and not seen[x].startswith("B")]
    if stray:
        raise ConsistencyError("rank-3 elements outside the B blocks", stray)
    return blocks


def build_sn(n: int, max_size: int = DEFAULT_MAX_SIZE) -> SnSemigroup:
    """
    对生成元做复合与求逆闭包，并按秩和成员关系划分出 B_i, C, D, E, {0}
    :param n: n ≥ 2
    :param max_size: 闭包元素上限
    """
    names = generator_names(n)
    S, _ = closure_from_maps(sn_generators(n), with_inverses=True, max_size=max_size, names=names)
    named = _named_maps(n)
    S = S.with_labels([named.get(f, str(f)) for f in S.carriers])
    try:
        blocks = _blocks(n, S)
    except KeyError as e:
        raise ConsistencyError(f"S_{n} lacks a named element: {e}") from None
    generators = {name: S.index(name) for name in names}
    logger.info(f"S_{n} 构造完成: {S.size} 个元素")
    return SnSemigroup(n, S, blocks, generators)


def block_representative(block: str) -> str:
    """块名 B_i / E / C / D / 0 对应的一个元素标签；其它名字原样返回"""
    if block.startswith("B") and block[1:].isdigit():
        return f"chi{block[1:]}"
    return {"E": "chi", "C": "zeta(0,0)", "D": "eta(0,0)", "0": "0"}.get(block, block)


def sn_size(n: int) -> int:
    return 4 * n + (n + 1) ** 2 + (3 * n + 3) ** 2 + 4 + 1


def tn(n: int, k: int, max_size: int = DEFAULT_MAX_SIZE) -> FiniteAlgebra:
    return build_sn(n, max_size).without_block(k).semigroup


# ---------------------------------------------------------------- 乘法公式

def _expected_products(n: int) -> List[Tuple[str, str, List[Tuple[int, int]]]]:
    cases = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j - 1:
                pairs = [(i - 1, i + 1), (2 * n + 1 + i, 2 * n + 3 + i)]
            elif i == j + 1:
                pairs = [(n + 1 + i, n - 1 + i)]
            else:
                pairs = []
            cases.append((f"chi{i}", f"chi{j}", pairs))
            same = i == j
            cases.append((f"chi{i}", f"chi{j}^-1",
                          [(p, p) for p in (i - 1, n + 1 + i, 2 * n + 1 + i)] if same else []))
            cases.append((f"chi{i}^-1", f"chi{j}",
                          [(p, p) for p in (i, n + i, 2 * n + 2 + i)] if same else []))
    for i in range(1, n + 1):
        left = [(n + 1, 2 * n + 3)] if i == 1 else [(n, 2 * n)] if i == n else []
        right = [(n + 2, 2 * n + 2)] if i == 1 else [(n - 1, 2 * n + 1)] if i == n else []
        cases.append(("chi", f"chi{i}", left))
        cases.append((f"chi{i}", "chi", right))
        cases.append(("chi", f"chi{i}^-1", []))
        cases.append((f"chi{i}^-1", "chi", []))
    return cases


def verify_formulas(n: int, sn: Optional[SnSemigroup] = None) -> Verdict:
    """逐一比较生成元乘积公式与 compose()、乘法表两条路径，再验证 ζ_ij = ζ_il·ζ_lj"""
    sn = sn or build_sn(n)
    S = sn.semigroup
    for left, right, pairs in _expected_products(n):
        expected = PartialInjection.from_pairs(sn.degree, pairs)
        l, r = sn.element(left), sn.element(right)
        composed = compose(sn.map_of(l), sn.map_of(r))
        tabled = sn.map_of(int(S.mul[l, r]))
        if composed != expected or tabled != expected:
            return Verdict.violation(
                f"{left}·{right} = {expected}", (l, r),
                f"compose gives {composed}, table gives {tabled}")
    for i in range(n + 1):
        for l in range(n + 1):
            for j in range(n + 1):
                a, b = sn.element(f"zeta({i},{l})"), sn.element(f"zeta({l},{j})")
                if S.labels[int(S.mul[a, b])] != f"zeta({i},{j})":
                    return Verdict.violation(f"zeta({i},{j}) = zeta({i},{l})·zeta({l},{j})", (a, b))
    return Verdict.passed(f"{len(_expected_products(n))} generator products, {(n + 1) ** 3} ζ products")


# ---------------------------------------------------------------- D 类形状

def expected_idempotents(n: int, block: str) -> int:
    if block.startswith("B") or block == "E":
        return 2
    return {"C": n + 1, "D": 3 * n + 3, "0": 1}[block]


def dclass_shape_check(n: int, sn: Optional[SnSemigroup] = None) -> Verdict:
    """
    D 类恰为 B_i, C, D, E, {0}；偏序：B_i > C > D > {0}，E > D，其余不可比
    """
    sn = sn or build_sn(n)
    S = sn.semigroup
    G = green(S)
    if not is_combinatorial(S, G):
        return Verdict.violation("S_n is combinatorial")
    if {frozenset(m) for m in G.dclasses} != {frozenset(m) for m in sn.blocks.values()}:
        return Verdict.violation("D-classes are the blocks B_i, C, D, E, {0}")
    Y = {name: G.d[members[0]] for name, members in sn.blocks.items()}
    bs = [name for name in sn.blocks if name.startswith("B")]

    def strictly_below(a, b):
        return G.leq(Y[a], Y[b]) and not G.leq(Y[b], Y[a])

    def incomparable(a, b):
        return not G.leq(Y[a], Y[b]) and not G.leq(Y[b], Y[a])

    below = [(b, "C") for b in bs] + [("C", "D"), ("E", "D"), ("D", "0")]
    for upper, lower in below:
        if not strictly_below(lower, upper):
            return Verdict.violation(f"{lower} < {upper}")
    apart = [(a, b) for a in bs for b in bs if a < b] + [(b, "E") for b in bs] + [("C", "E")]
    for a, b in apart:
        if not incomparable(a, b):
            return Verdict.violation(f"{a} and {b} are incomparable")
    for name in sn.blocks:
        count = len(G.idempotents_of(Y[name]))
        if count != expected_idempotents(n, name):
            return Verdict.violation(f"{name} has {expected_idempotents(n, name)} idempotents",
                                     detail=f"found {count}")
    rank_of = {"C": 2, "E": 2, "D": 1, "0": 0}
    for name, members in sn.blocks.items():
        expected = 3 if name.startswith("B") else rank_of[name]
        if any(sn.map_of(x).rank != expected for x in members):
            return Verdict.violation(f"{name} consists of rank-{expected} maps")
    return Verdict.passed(f"{G.dclass_count} D-classes")


def sn_report(sn: SnSemigroup) -> Dict:
    G = green(sn.semigroup)
    Y = {name: G.d[members[0]] for name, members in sn.blocks.items()}
    name_of = {y: name for name, y in Y.items()}
    return {
        "name": sn.name,
        "size": sn.semigroup.size,
        "blocks": {name: {"size": len(members), "idempotents": len(G.idempotents_of(Y[name]))}
                   for name, members in sn.blocks.items()},
        "covers": [[name_of[lower], name_of[upper]] for lower, upper in G.covers()],
    }


# ---------------------------------------------------------------- φ_n

def phi_n(n: int, sn: SnSemigroup) -> Dict[str, int]:
    """x_i ↦ χ_i (i ≤ n)，x_{n+1} ↦ χ，x_{n+2}…x_{2n} ↦ χ⁻¹χ"""
    assignment = {f"x{i}": sn.element(f"chi{i}") for i in range(1, n + 1)}
    assignment[f"x{n + 1}"] = sn.element("chi")
    for i in range(n + 2, 2 * n + 1):
        assignment[f"x{i}"] = sn.element("chi^-1*chi")
    return assignment


def verify_prop_5_3(n: int, sn: Optional[SnSemigroup] = None) -> Verdict:
    """
    φ_n(v_n) 把 0 映到 3n+2，φ_n(v_n′) 处处无定义
    直接复合部分单射，再与乘法表求值交叉比对
    """
    sn = sn or build_sn(n)
    assignment = phi_n(n, sn)
    words = vn_pair(n)
    folded = []
    for word in words:
        f = sn.map_of(assignment[word[0]])
        for letter in word[1:]:
            f = compose(f, sn.map_of(assignment[letter]))
        folded.append(f)
        tabled = sn.map_of(eval_term(word_term(word), assignment, sn.semigroup))
        if tabled != f:
            return Verdict.violation("table evaluation agrees with composition",
                                     detail=f"{tabled} vs {f}")
    v, v_prime = folded
    if v(0) != 3 * n + 2:
        return Verdict.violation(f"φ_{n}(v_{n}) maps 0 to {3 * n + 2}", detail=f"got {v}")
    if v_prime.rank != 0:
        return Verdict.violation(f"φ_{n}(v_{n}') is nowhere defined", detail=f"got {v_prime}")
    return Verdict.passed(f"φ_{n}(v_{n}) = {v}, φ_{n}(v_{n}') = 0")


# ---------------------------------------------------------------- T_n(k) 与滤子回归

def _span(a: int, b: int) -> Set[int]:
    return set(range(a, b + 1))


@dataclass(frozen=True)
class FilterCase:
    """一个具名滤子、它在 D 上的 τ 划分，以及它应当分离的 (s, t)"""
    name: str
    members: Tuple[str, ...]
    classes: Tuple[FrozenSet[int], ...]
    separates: Tuple[Tuple[FrozenSet[int], FrozenSet[int]], ...] = ()


def _blocks_except(bs: List[int], *skip: int) -> Tuple[str, ...]:
    return tuple(f"B{i}" for i in bs if i not in skip)


def _pairs(*pairs) -> Tuple[Tuple[FrozenSet[int], FrozenSet[int]], ...]:
    return tuple((frozenset(s), frozenset(t)) for s, t in pairs)


def filter_cases(n: int, k: int) -> List[FilterCase]:
    """
    T_n(k) 中 Y = D 时的具名滤子目录 K₁…K₁₀
    K₁–K₄ 按 m 参数化：X = B_m (m < k) 时 s 取 χ_mχ_m⁻¹ 或 χ_m⁻¹χ_m 的定义域；
    K₄(m=k)、K₅–K₇ 对应 X = C，K₈ 对应 X = D，K₅、K₈–K₁₀ 对应 X = E
    """
    cases = []
    bs = [i for i in range(1, n + 1) if i != k]
    below_e = _span(0, k - 1) | _span(n + 1, n + k) | _span(2 * n + 2, 2 * n + k + 1)
    beside_e = _span(k, n) | _span(n + k + 1, 2 * n + 1) | _span(2 * n + k + 2, 3 * n + 2)
    k4 = (frozenset(below_e), frozenset(beside_e))
    for m in range(1, k):
        s = {m - 1, n + 1 + m, 2 * n + 1 + m}
        s_inv = {m, n + m, 2 * n + 2 + m}
        if m + 1 < k:
            c1 = _span(0, m - 1) | _span(m + 1, k - 1) | {n + m + 1} \
                | _span(n + k + 1, 2 * n + m + 1) | _span(2 * n + m + 3, 2 * n + k + 1)
            c2 = {m} | _span(k, n + m) | _span(n + m + 2, n + k) | {2 * n + m + 2} \
                | _span(2 * n + k + 2, 3 * n + 2)
            cases.append(FilterCase(
                f"K1(m={m})", _blocks_except(bs, m, m + 1), (frozenset(c1), frozenset(c2)),
                _pairs((s, _span(n + m + 2, n + k)),
                       (s_inv, _span(m + 1, k - 1) | _span(2 * n + m + 3, 2 * n + k + 1)))))
        c1 = _span(0, m - 1) | _span(n + m + 1, 2 * n + m + 1)
        c2 = _span(m, n + m) | _span(2 * n + m + 2, 3 * n + 2)
        t = _span(m, k - 1) | _span(n + 1, n + m) | _span(2 * n + m + 2, 2 * n + k + 1)
        t_inv = _span(0, m - 1) | _span(n + m + 1, n + k) | _span(2 * n + 2, 2 * n + m + 1)
        cases.append(FilterCase(
            f"K2(m={m})", _blocks_except(bs, m), (frozenset(c1), frozenset(c2)),
            _pairs((s, t), (s_inv, t_inv))))
        if m > 1:
            c1 = _span(0, m - 2) | _span(m, k - 1) | {n + m} | _span(n + k + 1, 2 * n + m) \
                | _span(2 * n + m + 2, 2 * n + k + 1)
            c2 = {m - 1} | _span(k, n + m - 1) | _span(n + m + 1, n + k) | {2 * n + m + 1} \
                | _span(2 * n + k + 2, 3 * n + 2)
            cases.append(FilterCase(
                f"K3(m={m})", _blocks_except(bs, m - 1, m), (frozenset(c1), frozenset(c2)),
                _pairs((s, _span(0, m - 2) | _span(2 * n + 2, 2 * n + m)),
                       (s_inv, _span(n + 1, n + m - 1)))))
        cases.append(FilterCase(f"K4(m={m})", ("E",), k4, _pairs((s, beside_e), (s_inv, beside_e))))

    e_top = {n, n + 1}
    cases.append(FilterCase(f"K4(m={k})", ("E",), k4,
                            _pairs(({k - 1, 2 * n + k + 1}, {n + k + 1}))))

    c1 = _span(0, k - 1) | _span(n + k + 1, 2 * n + k + 1)
    c2 = _span(k, n + k) | _span(2 * n + k + 2, 3 * n + 2)
    apart = [({m - 1, 2 * n + m + 1}, {n + m + 1}) for m in bs]
    cases.append(FilterCase(
        "K5", _blocks_except(bs), (frozenset(c1), frozenset(c2)),
        _pairs(*apart, ({k - 1, n + k + 1, 2 * n + k + 1}, c2), (e_top, c1))))

    if k < n:
        c1 = _span(0, k) | _span(n + k + 2, 2 * n + k + 2)
        c2 = _span(k + 1, n + k + 1) | _span(2 * n + k + 3, 3 * n + 2)
        cases.append(FilterCase(
            "K6", _blocks_except(bs, k + 1), (frozenset(c1), frozenset(c2)),
            _pairs(({n + k + 1}, _span(n + k + 2, 2 * n + 1)))))
    if k > 1:
        c1 = _span(0, k - 2) | _span(n + k, 2 * n + k)
        c2 = _span(k - 1, n + k - 1) | _span(2 * n + k + 1, 3 * n + 2)
        cases.append(FilterCase(
            "K7", _blocks_except(bs, k - 1), (frozenset(c1), frozenset(c2)),
            _pairs(({k - 1, 2 * n + k + 1}, _span(0, k - 2) | _span(2 * n + 2, 2 * n + k)))))

    # ζ(j,j) 的定义域 {j, 2n+2+j}：C 不在滤子中时 ρ(C, D) 总把两点连在一起
    across = [({j}, {2 * n + 2 + j}) for j in range(n + 1)]
    cases.append(FilterCase(
        "K8", _blocks_except(bs) + ("C",),
        (frozenset(_span(0, n + k)), frozenset(_span(n + k + 1, 3 * n + 2))),
        _pairs(*across, (e_top, {3 * n + 2}))))

    if k > 1:
        c1 = {0} | _span(n + 2, 2 * n + 2)
        c2 = _span(1, n + 1) | _span(2 * n + 3, 3 * n + 2)
        cases.append(FilterCase(
            "K9", _blocks_except(bs, 1), (frozenset(c1), frozenset(c2)),
            _pairs((e_top, _span(n + 2, n + k)))))
    if k < n:
        c1 = _span(0, n - 1) | _span(2 * n + 1, 3 * n + 1)
        c2 = _span(n, 2 * n) | {3 * n + 2}
        cases.append(FilterCase(
            "K10", _blocks_except(bs, n), (frozenset(c1), frozenset(c2)),
            _pairs((e_top, _span(k, n - 1) | _span(2 * n + k + 2, 3 * n + 1)))))
    return cases


def filter_regressions(T: SnSemigroup, kadourek: Optional[Kadourek] = None) -> List[str]:
    """重算每个具名滤子的 τ(K, D) 并与目录比对；返回不一致之处"""
    kadourek = kadourek or Kadourek(T.semigroup)
    G = kadourek.G
    Y = G.d[T.blocks["D"][0]]
    problems = []
    for case in filter_cases(T.n, T.removed):
        K = frozenset(G.d[T.blocks[name][0]] for name in case.members)
        partition = kadourek.tau(K, Y)
        found = {frozenset(T.point_of(x) for x in members) for members in partition.classes}
        if found != set(case.classes):
            problems.append(f"{T.name} {case.name}: τ classes {sorted(sorted(c) for c in found)}")
            continue
        if not case.separates:
            problems.append(f"{T.name} {case.name}: no pairs to separate")
        block = {p: i for i, c in enumerate(found) for p in c}
        for ss, ts in case.separates:
            joined = [(s, t) for s in ss for t in ts if block[s] == block[t]]
            if joined:
                problems.append(f"{T.name} {case.name}: η{joined[0][0]} and η{joined[0][1]} not separated")
    logger.debug(f"{T.name}: 滤子回归 {len(problems)} 处不一致")
    return problems


def verify_prop_5_1(n: int, sn: Optional[SnSemigroup] = None, rho_reading: str = "prose") -> Verdict:
    """
    每个 T_n(k) 都满足条件 (∗)，而 S_n 本身不满足；prose 读法下另做滤子回归
    """
    sn = sn or build_sn(n)
    outside = in_var_b21(sn.semigroup, rho_reading)
    if outside:
        return Verdict.violation(f"S_{n} lies outside var B₂¹", detail=outside.reason)
    checked = 0
    for k in range(1, n + 1):
        T = sn.without_block(k)
        kadourek = Kadourek(T.semigroup, rho_reading=rho_reading)
        star = kadourek.star_condition()
        if not star:
            ob = star.failure.obligation
            return Verdict.violation(f"{T.name} satisfies condition (∗)", (ob.e, ob.f, ob.g),
                                     f"X=D{ob.X}, Y=D{ob.Y}")
        if not all(kadourek.recheck(w) for w in star.passes):
            return Verdict.violation(f"{T.name} witnesses re-check")
        checked += star.obligations
        if rho_reading == "prose":
            problems = filter_regressions(T, kadourek)
            if problems:
                return Verdict.violation("named filter partitions", detail="; ".join(problems))
    return Verdict.passed(f"n={n}: {checked} obligations over T_{n}(1..{n}); S_{n} fails (∗)")
