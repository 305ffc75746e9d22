import hypothesis
import hypothesis.strategies as strat

from cells.union_find import UnionFind

pairs = strat.lists(strat.tuples(strat.integers(0, 15), strat.integers(0, 15)), max_size=30)


def test_classes_are_sorted_by_least_member():
    uf = UnionFind(range(6))
    uf.union(5, 3)
    uf.union(4, 0)
    uf.union(3, 1)
    assert uf.classes() == [(0, 4), (1, 3, 5), (2,)]
    assert uf.same(1, 5)
    assert not uf.same(0, 2)


def test_find_adds_unknown_items():
    uf = UnionFind()
    assert 7 not in uf
    assert uf.find(7) == 7
    assert 7 in uf


@hypothesis.given(pairs)
def test_classes_do_not_depend_on_union_order(edges):
    forward, backward = UnionFind(range(16)), UnionFind(range(16))
    for a, b in edges:
        forward.union(a, b)
    for a, b in reversed(edges):
        backward.union(b, a)
    assert forward.classes() == backward.classes()


@hypothesis.given(pairs)
def test_same_is_an_equivalence_containing_the_edges(edges):
    uf = UnionFind(range(16))
    for a, b in edges:
        uf.union(a, b)
    for a, b in edges:
        assert uf.same(a, b) and uf.same(b, a)
    covered = [x for members in uf.classes() for x in members]
    assert sorted(covered) == list(range(16))
