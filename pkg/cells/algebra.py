import logging
from collections import deque
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from cells.errors import (
    ClosureLimitError,
    ConsistencyError,
    DegreeMismatchError,
    KindMismatchError,
    NotIdealError,
    NotInverseError,
    WorkbenchError,
)
from cells.pinj import PartialInjection, compose, identity_map, invert

logger = logging.getLogger(__name__)

DEFAULT_MAX_SIZE = 1_000_000
KINDS = ("semigroup", "inverse", "ai-semiring")


class FiniteAlgebra:
    """
    有限代数：元素标签 + 以元素编号为下标的稠密运算表。
    子类决定种类（kind）以及必须存在的表。
    """
    kind = ""

    def __init__(self, labels: Sequence[str], mul, add=None, inv=None,
                 generators: Iterable[int] = (), carriers: Optional[Sequence[Any]] = None):
        self.labels: List[str] = [str(label) for label in labels]
        n = len(self.labels)
        self.mul = self._table(mul, (n, n), "mul")
        self.add = None if add is None else self._table(add, (n, n), "add")
        self.inv = None if inv is None else self._table(inv, (n,), "inv")
        self.generators: Tuple[int, ...] = tuple(int(g) for g in generators)
        self.carriers: Optional[List[Any]] = None if carriers is None else list(carriers)
        self._index: Dict[str, int] = {}
        for i, label in enumerate(self.labels):
            self._index.setdefault(label, i)

    @staticmethod
    def _table(values, shape, name) -> np.ndarray:
        table = np.asarray(values, dtype=np.intp)
        if table.shape != shape:
            raise KindMismatchError(f"{name} table has shape {table.shape}, expected {shape}")
        return table

    @property
    def size(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} size={self.size}>"

    def index(self, label: str) -> int:
        if label not in self._index:
            raise KeyError(f"no element labelled {label!r}")
        return self._index[label]

    def label_of(self, ids: Iterable[int]) -> Tuple[str, ...]:
        return tuple(self.labels[int(i)] for i in ids)

    def with_labels(self, labels: Sequence[str]) -> "FiniteAlgebra":
        if len(labels) != self.size:
            raise KindMismatchError(f"{len(labels)} labels for {self.size} elements")
        return make_algebra(self.kind, labels, self.mul, self.add, self.inv,
                            self.generators, self.carriers)


class Semigroup(FiniteAlgebra):
    kind = "semigroup"


class InverseSemigroup(FiniteAlgebra):
    kind = "inverse"

    def __init__(self, labels, mul, inv, generators=(), carriers=None):
        if inv is None:
            raise KindMismatchError("inverse semigroup needs an inv table")
        super().__init__(labels, mul, inv=inv, generators=generators, carriers=carriers)


class AiSemiring(FiniteAlgebra):
    kind = "ai-semiring"

    def __init__(self, labels, add, mul, generators=(), carriers=None):
        if add is None:
            raise KindMismatchError("ai-semiring needs an add table")
        super().__init__(labels, mul, add=add, generators=generators, carriers=carriers)


def make_algebra(kind: str, labels, mul, add=None, inv=None, generators=(), carriers=None) -> FiniteAlgebra:
    if kind == "semigroup":
        return Semigroup(labels, mul, generators=generators, carriers=carriers)
    if kind == "inverse":
        return InverseSemigroup(labels, mul, inv, generators=generators, carriers=carriers)
    if kind == "ai-semiring":
        return AiSemiring(labels, add, mul, generators=generators, carriers=carriers)
    raise KindMismatchError(f"unknown algebra kind {kind!r}")


def multiplicative_reduct(A: FiniteAlgebra) -> Semigroup:
    return Semigroup(A.labels, A.mul, generators=A.generators, carriers=A.carriers)


def additive_reduct(A: FiniteAlgebra) -> Semigroup:
    if A.add is None:
        raise KindMismatchError(f"{A.kind} has no addition")
    return Semigroup(A.labels, A.add, carriers=A.carriers)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    law: str = ""
    witness: Tuple[int, ...] = ()
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok

    @classmethod
    def passed(cls, detail: str = "") -> "Verdict":
        return cls(True, detail=detail)

    @classmethod
    def violation(cls, law: str, witness: Iterable[int] = (), detail: str = "") -> "Verdict":
        return cls(False, law, tuple(int(w) for w in witness), detail)

    def describe(self, A: Optional[FiniteAlgebra] = None) -> str:
        if self.ok:
            return f"pass{': ' + self.detail if self.detail else ''}"
        names = A.label_of(self.witness) if A is not None else self.witness
        text = f"{self.law} violated at ({', '.join(str(x) for x in names)})"
        return f"{text}: {self.detail}" if self.detail else text


# ---------------------------------------------------------------- closure

def closure_from_maps(gens: Sequence[PartialInjection], with_inverses: bool = False,
                      max_size: int = DEFAULT_MAX_SIZE, names: Optional[Sequence[str]] = None,
                      adjoin_identity: bool = False) -> Tuple[FiniteAlgebra, List[Tuple[str, ...]]]:
    """
    在复合（以及可选的求逆）下做广度优先闭包
    :param gens: 生成元
    :param with_inverses: 是否同时闭包逆元
    :param max_size: 元素上限
    :param names: 生成元名称，用于见证词
    :param adjoin_identity: 是否加入恒等映射
    :return: (代数, 每个元素的一个生成元词)
    """
    if not gens:
        raise WorkbenchError("closure needs at least one generator")
    if max_size < 1:
        raise WorkbenchError(f"max_size must be positive, got {max_size}")
    degree = gens[0].degree
    for g in gens:
        if g.degree != degree:
            raise DegreeMismatchError(f"generator degrees differ: {degree} vs {g.degree}")
    names = list(names) if names else [f"g{i}" for i in range(len(gens))]

    letters = list(zip(names, gens))
    if with_inverses:
        letters += [(f"{name}^-1", invert(g)) for name, g in zip(names, gens)]
    if adjoin_identity:
        letters.insert(0, ("1", identity_map(degree)))

    words: Dict[PartialInjection, Tuple[str, ...]] = {}
    level = []
    for name, f in letters:
        if f not in words:
            words[f] = (name,)
            level.append(f)
    # 逐层处理，层内按规范顺序
    while level:
        level.sort(key=PartialInjection.sort_key)
        next_level = []
        for f in level:
            for name, g in letters:
                h = compose(f, g)
                if h in words:
                    continue
                words[h] = words[f] + (name,)
                next_level.append(h)
                if len(words) > max_size:
                    raise ClosureLimitError(max_size, len(words))
        level = next_level
        logger.debug(f"闭包进行中: {len(words)} 个元素")

    elements = sorted(words, key=PartialInjection.sort_key)
    index = {f: i for i, f in enumerate(elements)}
    n = len(elements)
    mul = np.empty((n, n), dtype=np.intp)
    for i, f in enumerate(elements):
        mul[i] = [index[compose(f, g)] for g in elements]
    generator_ids = sorted({index[f] for name, f in letters if not name.endswith("^-1")})
    labels = [str(f) for f in elements]
    witnesses = [words[f] for f in elements]
    logger.info(f"闭包完成: {n} 个元素, 生成元 {len(gens)} 个")

    if with_inverses:
        inv = [index[invert(f)] for f in elements]
        return InverseSemigroup(labels, mul, inv, generator_ids, elements), witnesses
    return Semigroup(labels, mul, generators=generator_ids, carriers=elements), witnesses


# ---------------------------------------------------------------- verifiers

def _first_assoc_violation(table: np.ndarray) -> Optional[Tuple[int, int, int]]:
    for a in range(len(table)):
        left = table[table[a]]          # [b, c] -> (ab)c
        right = table[a][table]         # [b, c] -> a(bc)
        bad = np.argwhere(left != right)
        if len(bad):
            return a, int(bad[0][0]), int(bad[0][1])
    return None


def _range_violation(table: np.ndarray, n: int) -> Optional[Tuple[int, ...]]:
    bad = np.argwhere((table < 0) | (table >= n))
    if len(bad):
        return tuple(int(x) for x in bad[0])
    return None


def verify_semigroup(S: FiniteAlgebra) -> Verdict:
    n = S.size
    bad = _range_violation(S.mul, n)
    if bad is not None:
        return Verdict.violation("totality", bad, "product outside the carrier")
    bad = _first_assoc_violation(S.mul)
    if bad is not None:
        return Verdict.violation("associativity", bad)
    return Verdict.passed()


def verify_inverse(S: FiniteAlgebra) -> Verdict:
    if S.inv is None:
        raise KindMismatchError(f"{S.kind} carries no inv table")
    verdict = verify_semigroup(S)
    if not verdict:
        return verdict
    M, inv = S.mul, S.inv
    n = S.size
    ar = np.arange(n)
    bad = _range_violation(inv, n)
    if bad is not None:
        return Verdict.violation("totality", bad, "inverse outside the carrier")
    bad = np.flatnonzero(M[M[ar, inv], ar] != ar)
    if len(bad):
        return Verdict.violation("s·s⁻¹·s = s", bad[:1])
    bad = np.flatnonzero(M[M[inv, ar], inv] != inv)
    if len(bad):
        return Verdict.violation("s⁻¹·s·s⁻¹ = s⁻¹", bad[:1])
    bad = np.flatnonzero(inv[inv] != ar)
    if len(bad):
        return Verdict.violation("(s⁻¹)⁻¹ = s", bad[:1])
    idem = np.flatnonzero(M[ar, ar] == ar)
    sub = M[np.ix_(idem, idem)]
    bad = np.argwhere(sub != sub.T)
    if len(bad):
        return Verdict.violation("idempotents commute", (idem[bad[0][0]], idem[bad[0][1]]))
    return Verdict.passed()


def verify_ai_semiring(R: FiniteAlgebra) -> Verdict:
    if R.add is None:
        raise KindMismatchError(f"{R.kind} carries no add table")
    n = R.size
    M, A = R.mul, R.add
    for name, table in (("multiplicative", M), ("additive", A)):
        bad = _range_violation(table, n)
        if bad is not None:
            return Verdict.violation(f"{name} totality", bad)
    bad = np.argwhere(A != A.T)
    if len(bad):
        return Verdict.violation("commutativity", bad[0])
    bad = np.flatnonzero(np.diagonal(A) != np.arange(n))
    if len(bad):
        return Verdict.violation("idempotency", bad[:1])
    bad = _first_assoc_violation(A)
    if bad is not None:
        return Verdict.violation("additive associativity", bad)
    bad = _first_assoc_violation(M)
    if bad is not None:
        return Verdict.violation("multiplicative associativity", bad)
    for a in range(n):
        row = M[a]
        bad = np.argwhere(row[A] != A[row[:, None], row[None, :]])
        if len(bad):
            return Verdict.violation("left distributivity", (a, bad[0][0], bad[0][1]))
    for c in range(n):
        col = M[:, c]
        bad = np.argwhere(col[A] != A[col[:, None], col[None, :]])
        if len(bad):
            return Verdict.violation("right distributivity", (bad[0][0], bad[0][1], c))
    return Verdict.passed()


def verify(A: FiniteAlgebra) -> Verdict:
    """按种类选择校验器"""
    if A.kind == "ai-semiring":
        return verify_ai_semiring(A)
    if A.kind == "inverse":
        return verify_inverse(A)
    return verify_semigroup(A)


def inversion_table(S: FiniteAlgebra) -> InverseSemigroup:
    """
    计算每个元素唯一的逆元
    :param S: 半群
    :return: 逆半群
    """
    M = S.mul
    n = S.size
    ar = np.arange(n)
    sts = M[M, ar[:, None]]         # [s, t] -> s·t·s
    tst = M[M.T, ar[None, :]]       # [s, t] -> t·s·t
    pairs = (sts == ar[:, None]) & (tst == ar[None, :])
    inv = np.empty(n, dtype=np.intp)
    for s in range(n):
        found = np.flatnonzero(pairs[s])
        if len(found) != 1:
            raise NotInverseError(S.labels[s], S.label_of(found))
        inv[s] = found[0]
    return InverseSemigroup(S.labels, M, inv, S.generators, S.carriers)


# ---------------------------------------------------------------- constructions

def direct_product(A: FiniteAlgebra, B: FiniteAlgebra) -> FiniteAlgebra:
    if A.kind != B.kind:
        raise KindMismatchError(f"cannot multiply {A.kind} by {B.kind}")
    na, nb = A.size, B.size

    def pairwise(ta, tb):
        return (ta[:, None, :, None] * nb + tb[None, :, None, :]).reshape(na * nb, na * nb)

    add = pairwise(A.add, B.add) if A.kind == "ai-semiring" else None
    inv = (A.inv[:, None] * nb + B.inv[None, :]).ravel() if A.kind == "inverse" else None
    labels = [f"({x},{y})" for x in A.labels for y in B.labels]
    carriers = [(i, j) for i in range(na) for j in range(nb)]
    return make_algebra(A.kind, labels, pairwise(A.mul, B.mul), add, inv, (), carriers)


def _closure_mask(A: FiniteAlgebra, seeds: Iterable[int]) -> np.ndarray:
    members = np.zeros(A.size, dtype=bool)
    members[list(seeds)] = True
    while True:
        idx = np.flatnonzero(members)
        grid = np.ix_(idx, idx)
        grown = members.copy()
        grown[A.mul[grid].ravel()] = True
        if A.add is not None:
            grown[A.add[grid].ravel()] = True
        if A.inv is not None:
            grown[A.inv[idx]] = True
        if (grown == members).all():
            return members
        members = grown


def restrict(A: FiniteAlgebra, subset: Iterable[int]) -> FiniteAlgebra:
    """把代数限制到一个封闭子集上，元素保持原有顺序"""
    elems = np.array(sorted({int(x) for x in subset}), dtype=np.intp)
    if len(elems) == 0:
        raise WorkbenchError("cannot restrict to an empty subset")
    lookup = np.full(A.size, -1, dtype=np.intp)
    lookup[elems] = np.arange(len(elems))
    grid = np.ix_(elems, elems)

    def local(table, name):
        sub = lookup[table]
        if (sub < 0).any():
            where = np.argwhere(sub < 0)[0]
            raise ConsistencyError(f"subset is not closed under {name}",
                                   [A.labels[elems[i]] for i in where])
        return sub

    mul = local(A.mul[grid], "multiplication")
    add = local(A.add[grid], "addition") if A.add is not None else None
    inv = local(A.inv[elems], "inversion") if A.inv is not None else None
    generators = [int(lookup[g]) for g in A.generators if lookup[g] >= 0]
    carriers = [A.carriers[i] for i in elems] if A.carriers is not None else None
    return make_algebra(A.kind, [A.labels[i] for i in elems], mul, add, inv, generators, carriers)


def subalgebra_generated(A: FiniteAlgebra, seeds: Iterable[int]) -> Tuple[FiniteAlgebra, List[int]]:
    """
    由种子生成的子代数（对该种类的全部运算封闭）
    :return: (子代数, 包含映射：子代数编号 -> 原编号)
    """
    seeds = [int(s) for s in seeds]
    if not seeds:
        raise WorkbenchError("subalgebra needs at least one seed")
    inclusion = np.flatnonzero(_closure_mask(A, seeds)).tolist()
    sub = restrict(A, inclusion)
    sub.generators = tuple(inclusion.index(s) for s in dict.fromkeys(seeds))
    return sub, inclusion


def ideal_violation(A: FiniteAlgebra, subset: Iterable[int]) -> Optional[Tuple[str, Tuple[int, int]]]:
    inside = np.zeros(A.size, dtype=bool)
    inside[list(subset)] = True
    ideal = np.flatnonzero(inside)
    if len(ideal) == 0:
        raise WorkbenchError("ideal must be nonempty")
    checks = [("left multiplication", A.mul[:, ideal], False),
              ("right multiplication", A.mul[ideal, :], True)]
    if A.add is not None:
        checks.append(("addition", A.add[ideal, :], True))
    for name, products, ideal_first in checks:
        bad = np.argwhere(~inside[products])
        if len(bad):
            r, c = int(bad[0][0]), int(bad[0][1])
            pair = (int(ideal[r]), c) if ideal_first else (r, int(ideal[c]))
            return name, pair
    return None


def is_ideal(A: FiniteAlgebra, subset: Iterable[int]) -> bool:
    return ideal_violation(A, subset) is None


def rees_quotient(A: FiniteAlgebra, ideal: Iterable[int]) -> FiniteAlgebra:
    """
    Rees 商：把理想压缩为一个零元，零元放在最后，标签为 0
    """
    ideal = sorted({int(x) for x in ideal})
    problem = ideal_violation(A, ideal)
    if problem is not None:
        name, pair = problem
        raise NotIdealError(name, A.label_of(pair))
    inside = set(ideal)
    outside = np.array([x for x in range(A.size) if x not in inside], dtype=np.intp)
    z = len(outside)
    lookup = np.full(A.size, z, dtype=np.intp)
    lookup[outside] = np.arange(z)
    grid = np.ix_(outside, outside)

    def collapse(table):
        out = np.full((z + 1, z + 1), z, dtype=np.intp)
        out[:z, :z] = lookup[table[grid]]
        return out

    add = collapse(A.add) if A.add is not None else None
    inv = np.append(lookup[A.inv[outside]], z) if A.inv is not None else None
    labels = [A.labels[x] for x in outside] + ["0"]
    generators = sorted({int(lookup[g]) for g in A.generators})
    carriers = [A.carriers[x] for x in outside] + [None] if A.carriers is not None else None
    logger.debug(f"Rees 商: {A.size} -> {z + 1} 个元素")
    return make_algebra(A.kind, labels, collapse(A.mul), add, inv, generators, carriers)


# ---------------------------------------------------------------- isomorphism

def _operations(A: FiniteAlgebra) -> List[Tuple[str, np.ndarray]]:
    ops = [("mul", A.mul)]
    if A.add is not None:
        ops.append(("add", A.add))
    return ops


def fingerprints(A: FiniteAlgebra) -> List[Tuple[int, ...]]:
    """同构不变量：幂等性、吸收的左右单位个数、行列的秩"""
    M = A.mul
    ar = np.arange(A.size)
    prints = []
    for x in range(A.size):
        features = [
            int(M[x, x] == x),
            int((M[x] == ar).sum()),
            int((M[:, x] == ar).sum()),
            len(np.unique(M[x])),
            len(np.unique(M[:, x])),
        ]
        if A.add is not None:
            features += [int((A.add[x] == x).sum()), len(np.unique(A.add[x]))]
        if A.inv is not None:
            features.append(int(A.inv[x] == x))
        prints.append(tuple(features))
    return prints


def _generating_set(A: FiniteAlgebra) -> List[int]:
    if A.generators and _closure_mask(A, A.generators).all():
        return list(A.generators)
    gens: List[int] = []
    covered = np.zeros(A.size, dtype=bool)
    while not covered.all():
        best, best_size = -1, -1
        for x in np.flatnonzero(~covered):
            size = int(_closure_mask(A, gens + [int(x)]).sum())
            if size > best_size:
                best, best_size = int(x), size
        gens.append(best)
        covered = _closure_mask(A, gens)
    return gens


def _stages(A: FiniteAlgebra, gens: List[int]) -> List[List[Tuple[int, str, int, int]]]:
    """每个生成元新增的元素以及得到它们的运算步骤"""
    ops = _operations(A)
    known: List[int] = []
    known_set = set()
    stages = []
    for g in gens:
        steps = [(g, "gen", -1, -1)]
        known.append(g)
        known_set.add(g)
        queue = deque([g])
        while queue:
            x = queue.popleft()
            derived = []
            for y in list(known):
                for name, table in ops:
                    derived.append((int(table[x, y]), name, x, y))
                    derived.append((int(table[y, x]), name, y, x))
            if A.inv is not None:
                derived.append((int(A.inv[x]), "inv", x, -1))
            for z, name, p, q in derived:
                if z not in known_set:
                    known_set.add(z)
                    known.append(z)
                    queue.append(z)
                    steps.append((z, name, p, q))
        stages.append(steps)
    return stages


def check_isomorphism(A: FiniteAlgebra, B: FiniteAlgebra, mapping: Sequence[int]) -> Verdict:
    f = np.asarray(mapping, dtype=np.intp)
    if A.kind != B.kind or A.size != B.size or len(f) != A.size:
        return Verdict.violation("shape")
    if len(np.unique(f)) != A.size:
        return Verdict.violation("bijectivity")
    bad = np.argwhere(B.mul[f[:, None], f[None, :]] != f[A.mul])
    if len(bad):
        return Verdict.violation("f(x·y) = f(x)·f(y)", bad[0])
    if A.add is not None:
        bad = np.argwhere(B.add[f[:, None], f[None, :]] != f[A.add])
        if len(bad):
            return Verdict.violation("f(x+y) = f(x)+f(y)", bad[0])
    if A.inv is not None:
        bad = np.flatnonzero(B.inv[f] != f[A.inv])
        if len(bad):
            return Verdict.violation("f(x⁻¹) = f(x)⁻¹", bad[:1])
    return Verdict.passed()


def is_isomorphic(A: FiniteAlgebra, B: FiniteAlgebra) -> Optional[List[int]]:
    """
    回溯搜索同构：先匹配生成元的像，再按闭包扩展
    :return: 同构映射（A 编号 -> B 编号），不存在时返回 None
    """
    if A.kind != B.kind or A.size != B.size:
        return None
    fa, fb = fingerprints(A), fingerprints(B)
    if sorted(fa) != sorted(fb):
        return None
    gens = _generating_set(A)
    stages = _stages(A, gens)
    tables_b = dict(_operations(B))
    n = A.size
    f = np.full(n, -1, dtype=np.intp)
    used = np.zeros(n, dtype=bool)

    def apply_stage(k, image) -> Optional[List[int]]:
        assigned = []
        for z, name, p, q in stages[k]:
            if name == "gen":
                value = image
            elif name == "inv":
                value = int(B.inv[f[p]])
            else:
                value = int(tables_b[name][f[p], f[q]])
            if used[value] or fb[value] != fa[z]:
                for x in assigned:
                    used[f[x]] = False
                    f[x] = -1
                return None
            f[z] = value
            used[value] = True
            assigned.append(z)
        return assigned

    def search(k) -> bool:
        if k == len(gens):
            return bool(check_isomorphism(A, B, f))
        g = gens[k]
        for y in range(n):
            if used[y] or fb[y] != fa[g]:
                continue
            assigned = apply_stage(k, y)
            if assigned is None:
                continue
            if search(k + 1):
                return True
            for x in assigned:
                used[f[x]] = False
                f[x] = -1
        return False

    if search(0):
        return f.tolist()
    return None


def transport(A: FiniteAlgebra, mapping: Sequence[int]) -> FiniteAlgebra:
    """沿置换 x ↦ mapping[x] 搬运全部运算表，标签随元素一起移动"""
    f = np.asarray(mapping, dtype=np.intp)
    if sorted(f.tolist()) != list(range(A.size)):
        raise WorkbenchError(f"mapping is not a permutation of {A.size} elements")
    back = np.argsort(f)

    def carry(table):
        return None if table is None else f[table[np.ix_(back, back)]]

    return make_algebra(
        A.kind, [A.labels[x] for x in back], carry(A.mul), carry(A.add),
        None if A.inv is None else f[A.inv[back]],
        [int(f[g]) for g in A.generators],
        None if A.carriers is None else [A.carriers[x] for x in back])


# ---------------------------------------------------------------- semilattice helpers

def absorbing_elements(table: np.ndarray) -> List[int]:
    n = len(table)
    return [z for z in range(n) if (table[z] == z).all() and (table[:, z] == z).all()]


def neutral_elements(table: np.ndarray) -> List[int]:
    ar = np.arange(len(table))
    return [u for u in range(len(table)) if (table[u] == ar).all() and (table[:, u] == ar).all()]


def semilattice_leq(add: np.ndarray) -> np.ndarray:
    """[x, y] 为真当且仅当 x ≤ y，即 x + y = y"""
    return add == np.arange(len(add))[None, :]


def order_dual(R: FiniteAlgebra) -> Semigroup:
    """以加法序的交（meet）为运算的半群；序不是格时报错"""
    if R.add is None:
        raise KindMismatchError(f"{R.kind} has no addition")
    leq = semilattice_leq(R.add)
    n = R.size
    meet = np.empty((n, n), dtype=np.intp)
    for x in range(n):
        for y in range(n):
            lower = np.flatnonzero(leq[:, x] & leq[:, y])
            top = [z for z in lower if leq[lower, z].all()]
            if len(top) != 1:
                raise ConsistencyError(f"no meet of {R.labels[x]} and {R.labels[y]}")
            meet[x, y] = top[0]
    return Semigroup(R.labels, meet, carriers=R.carriers)


def compatible_additions(S: FiniteAlgebra, limit: Optional[int] = None) -> List[np.ndarray]:
    """
    穷举所有使半群 S 成为加法幂等半环的加法表
    约束传播：分配律、半格吸收律 x ≤ x+y、以及结合律的已知实例
    """
    M = S.mul
    n = S.size
    table = np.full((n, n), -1, dtype=np.intp)
    for i in range(n):
        table[i, i] = i
    cells = [(i, j) for i in range(n) for j in range(i + 1, n)]
    found: List[np.ndarray] = []

    def propagate(start, trail) -> bool:
        queue = deque([start])
        while queue:
            i, j, v = queue.popleft()
            if i == j:
                if v != i:
                    return False
                continue
            current = table[i, j]
            if current == v:
                continue
            if current != -1:
                return False
            table[i, j] = table[j, i] = v
            trail.append((i, j))
            # 吸收律：i ≤ v 且 j ≤ v
            queue.append((i, v, v))
            queue.append((j, v, v))
            for s in range(n):
                queue.append((M[s, i], M[s, j], M[s, v]))
                queue.append((M[i, s], M[j, s], M[v, s]))
                # (i+j)+s = i+(j+s)
                w, u = table[j, s], table[v, s]
                if w != -1 and u != -1:
                    queue.append((i, w, u))
                w, u = table[s, i], table[s, v]
                if w != -1 and u != -1:
                    queue.append((w, j, u))
        return True

    def search(pos) -> bool:
        while pos < len(cells) and table[cells[pos]] != -1:
            pos += 1
        if pos == len(cells):
            candidate = AiSemiring(S.labels, table.copy(), M)
            if verify_ai_semiring(candidate):
                found.append(candidate.add)
                return limit is not None and len(found) >= limit
            return False
        i, j = cells[pos]
        for v in range(n):
            trail: List[Tuple[int, int]] = []
            ok = propagate((i, j, v), trail)
            if ok and search(pos + 1):
                return True
            for a, b in trail:
                table[a, b] = table[b, a] = -1
        return False

    search(0)
    logger.info(f"加法表搜索完成: 找到 {len(found)} 个")
    return found
