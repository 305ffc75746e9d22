"""部分单射变换：{0,…,N−1} 上的部分一一映射，从左到右作用。"""
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Tuple, Union

from cells.errors import DegreeMismatchError

# 未定义点的哨兵值
UNDEFINED = -1


@dataclass(frozen=True)
class PartialInjection:
    degree: int
    targets: Tuple[int, ...]

    def __post_init__(self):
        if self.degree < 1:
            raise DegreeMismatchError(f"degree must be positive, got {self.degree}")
        if len(self.targets) != self.degree:
            raise DegreeMismatchError(
                f"targets has length {len(self.targets)}, expected {self.degree}")
        seen = set()
        for x, y in enumerate(self.targets):
            if y == UNDEFINED:
                continue
            if not 0 <= y < self.degree:
                raise DegreeMismatchError(f"target {y} of point {x} is out of range")
            if y in seen:
                raise DegreeMismatchError(f"target {y} is hit twice, map is not injective")
            seen.add(y)

    @classmethod
    def from_pairs(cls, degree: int,
                   pairs: Union[Dict[int, int], Iterable[Tuple[int, int]]]) -> "PartialInjection":
        """
        由 (源点, 目标点) 对构造
        :param degree: 点集大小 N
        :param pairs: dict 或二元组序列
        """
        items = pairs.items() if isinstance(pairs, dict) else pairs
        targets = [UNDEFINED] * degree
        for x, y in items:
            if not 0 <= x < degree:
                raise DegreeMismatchError(f"source point {x} is out of range")
            if targets[x] != UNDEFINED:
                raise DegreeMismatchError(f"source point {x} given twice")
            targets[x] = y
        return cls(degree, tuple(targets))

    def __call__(self, x: int) -> Optional[int]:
        y = self.targets[x]
        return None if y == UNDEFINED else y

    @property
    def rank(self) -> int:
        return sum(1 for y in self.targets if y != UNDEFINED)

    def domain(self) -> frozenset:
        return frozenset(x for x, y in enumerate(self.targets) if y != UNDEFINED)

    def image(self) -> frozenset:
        return frozenset(y for y in self.targets if y != UNDEFINED)

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        """规范顺序：秩降序，其次按 targets 字典序"""
        return (-self.rank, self.targets)

    def __str__(self) -> str:
        body = ", ".join(f"{x}→{y}" for x, y in enumerate(self.targets) if y != UNDEFINED)
        return "{" + body + "}"


def compose(f: PartialInjection, g: PartialInjection) -> PartialInjection:
    """x(fg) = (xf)g"""
    if f.degree != g.degree:
        raise DegreeMismatchError(f"cannot compose degree {f.degree} with degree {g.degree}")
    gt = g.targets
    return PartialInjection(f.degree, tuple(UNDEFINED if y == UNDEFINED else gt[y] for y in f.targets))


def invert(f: PartialInjection) -> PartialInjection:
    targets = [UNDEFINED] * f.degree
    for x, y in enumerate(f.targets):
        if y != UNDEFINED:
            targets[y] = x
    return PartialInjection(f.degree, tuple(targets))


def rank(f: PartialInjection) -> int:
    return f.rank


def domain(f: PartialInjection) -> frozenset:
    return f.domain()


def image(f: PartialInjection) -> frozenset:
    return f.image()


def identity_map(degree: int) -> PartialInjection:
    return PartialInjection(degree, tuple(range(degree)))


def empty_map(degree: int) -> PartialInjection:
    return PartialInjection(degree, (UNDEFINED,) * degree)


def partial_identity(degree: int, points: Iterable[int]) -> PartialInjection:
    return PartialInjection.from_pairs(degree, ((x, x) for x in sorted(set(points))))
