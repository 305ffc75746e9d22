from typing import Dict, Hashable, Iterable, List, Tuple


class UnionFind:
    """
    按秩合并 + 路径压缩的并查集。
    classes() 以最小成员为代表，按代表排序，结果与合并顺序无关。
    """

    def __init__(self, items: Iterable[Hashable] = ()):
        self._parents: Dict[Hashable, Hashable] = {}
        self._ranks: Dict[Hashable, int] = {}
        for item in items:
            self.add(item)

    def add(self, a: Hashable):
        if a not in self._parents:
            self._parents[a] = a
            self._ranks[a] = 0

    def __contains__(self, a: Hashable) -> bool:
        return a in self._parents

    def find(self, a: Hashable) -> Hashable:
        self.add(a)
        path = [a]
        root = self._parents[a]
        while root != path[-1]:
            path.append(root)
            root = self._parents[root]
        for node in path:
            self._parents[node] = root
        return root

    def union(self, a: Hashable, b: Hashable):
        root_a, root_b = self.find(a), self.find(b)
        if root_a == root_b:
            return
        rank_a, rank_b = self._ranks[root_a], self._ranks[root_b]
        if rank_a < rank_b:
            self._parents[root_a] = root_b
        elif rank_a > rank_b:
            self._parents[root_b] = root_a
        else:
            self._parents[root_b] = root_a
            self._ranks[root_a] += 1

    def same(self, a: Hashable, b: Hashable) -> bool:
        return self.find(a) == self.find(b)

    def classes(self) -> List[Tuple]:
        groups: Dict[Hashable, List] = {}
        for item in self._parents:
            groups.setdefault(self.find(item), []).append(item)
        return sorted(tuple(sorted(group)) for group in groups.values())
