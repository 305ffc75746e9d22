import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import islice, product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from cells.errors import BudgetExceededError, SignatureError
from cells.terms import (
    PLUS_TIMES,
    TIMES_INVERSE,
    TIMES_ONLY,
    Identity,
    Term,
    Word,
    evaluate,
    var_key,
    word_term,
)

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 10 ** 8
DEFAULT_CHUNK = 1 << 20


@dataclass(frozen=True)
class IdentityVerdict:
    holds: bool
    assignment: Dict[str, int] = field(default_factory=dict)
    lhs: Optional[int] = None
    rhs: Optional[int] = None
    evaluated: int = 0

    def __bool__(self) -> bool:
        return self.holds

    def describe(self, A) -> str:
        if self.holds:
            return f"Satisfied ({self.evaluated} assignments)"
        pairs = ", ".join(f"{name} ↦ {A.labels[value]}" for name, value in self.assignment.items())
        return f"Counterexample: {pairs}; lhs = {A.labels[self.lhs]}, rhs = {A.labels[self.rhs]}"


def _require_tables(A, identity: Identity):
    if identity.signature == PLUS_TIMES and A.add is None:
        raise SignatureError(f"{A.kind} cannot interpret +")
    if identity.signature == TIMES_INVERSE and A.inv is None:
        raise SignatureError(f"{A.kind} cannot interpret ^-1")


def _batched(items: Iterable, size: int):
    iterator = iter(items)
    while True:
        batch = list(islice(iterator, size))
        if not batch:
            return
        yield batch


def check_identity(A, identity: Identity, budget: int = DEFAULT_BUDGET,
                   chunk_size: int = DEFAULT_CHUNK, jobs: int = 1) -> IdentityVerdict:
    """
    穷举检查恒等式，按字典序枚举赋值，返回第一个反例
    末尾若干个变量做向量化求值，其余变量逐个前缀枚举
    :param A: 代数
    :param identity: 恒等式
    :param budget: 允许求值的赋值总数上限
    :param chunk_size: 单次向量化求值的赋值数上限
    :param jobs: 并行线程数
    """
    _require_tables(A, identity)
    variables = identity.variables()
    n, k = A.size, len(variables)
    total = n ** k
    trailing = 1
    while trailing < k and n ** (trailing + 1) <= chunk_size:
        trailing += 1
    leading = k - trailing
    grid = np.indices((n,) * trailing).reshape(trailing, -1)
    block = grid.shape[1]
    logger.debug(f"恒等式检查: {k} 个变量, 共 {total} 组赋值, 每块 {block}")

    def scan(prefix: Tuple[int, ...]) -> Optional[int]:
        env = dict(zip(variables[:leading], prefix))
        env.update(zip(variables[leading:], grid))
        lhs = evaluate(identity.lhs, env, A)
        rhs = evaluate(identity.rhs, env, A)
        diff = np.broadcast_to(np.asarray(lhs) != np.asarray(rhs), (block,))
        if diff.any():
            return int(np.argmax(diff))
        return None

    def counterexample(prefix, column, evaluated) -> IdentityVerdict:
        values = tuple(prefix) + tuple(int(v) for v in grid[:, column])
        assignment = dict(zip(variables, values))
        lhs = int(evaluate(identity.lhs, assignment, A))
        rhs = int(evaluate(identity.rhs, assignment, A))
        return IdentityVerdict(False, assignment, lhs, rhs, evaluated)

    evaluated = 0
    prefixes = product(range(n), repeat=leading)
    workers = max(1, jobs)
    pool = ThreadPoolExecutor(workers) if workers > 1 else None
    try:
        for batch in _batched(prefixes, workers):
            if evaluated + block * len(batch) > budget:
                raise BudgetExceededError(total, budget)
            results = list(pool.map(scan, batch)) if pool else [scan(batch[0])]
            evaluated += block * len(batch)
            for prefix, column in zip(batch, results):
                if column is not None:
                    return counterexample(prefix, column, evaluated)
    finally:
        if pool:
            pool.shutdown()
    return IdentityVerdict(True, evaluated=evaluated)


def evaluate_all(A, t: Term, variables: Sequence[str]) -> np.ndarray:
    """项在全部赋值（字典序）上的取值向量"""
    grid = np.indices((A.size,) * len(variables)).reshape(len(variables), -1)
    values = evaluate(t, dict(zip(variables, grid)), A)
    return np.broadcast_to(np.asarray(values), (grid.shape[1],))


# ---------------------------------------------------------------- 跳跃（jump）

@dataclass(frozen=True, order=True)
class Jump:
    x: str
    middle: Tuple[str, ...]
    y: str

    def __str__(self) -> str:
        return f"({self.x}, {{{', '.join(self.middle)}}}, {self.y})"


def first_occurrence_word(w: Word) -> Word:
    return tuple(dict.fromkeys(w))


def last_occurrence_word(w: Word) -> Word:
    return tuple(reversed(tuple(dict.fromkeys(reversed(w)))))


def jumps_of(w: Word) -> List[Jump]:
    """
    所有分解 w = u x v y u' 中 x, y 都不出现在 v 里的三元组 (x, alf(v), y)
    """
    found = set()
    for i, x in enumerate(w):
        between = set()
        for j in range(i + 1, len(w)):
            if j > i + 1:
                between.add(w[j - 1])
            if x in between:
                break
            if w[j] not in between:
                found.add(Jump(x, tuple(sorted(between, key=var_key)), w[j]))
    return sorted(found)


def a21_satisfies(w: Word, w2: Word) -> bool:
    return (first_occurrence_word(w) == first_occurrence_word(w2)
            and last_occurrence_word(w) == last_occurrence_word(w2)
            and jumps_of(w) == jumps_of(w2))


def all_words(letters: Sequence[str], max_length: int) -> List[Word]:
    return [word for length in range(1, max_length + 1)
            for word in product(letters, repeat=length)]


def word_identity(w: Word, w2: Word) -> Identity:
    return Identity(word_term(w), word_term(w2), TIMES_ONLY)
