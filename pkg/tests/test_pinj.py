import hypothesis
import hypothesis.strategies as strat
import pytest

from cells.errors import DegreeMismatchError
from cells.pinj import (
    PartialInjection,
    compose,
    empty_map,
    identity_map,
    invert,
    partial_identity,
)


def maps_of_degree(degree):
    return strat.tuples(
        strat.permutations(range(degree)),
        strat.lists(strat.booleans(), min_size=degree, max_size=degree),
    ).map(lambda pm: PartialInjection(degree, tuple(t if keep else -1 for t, keep in zip(*pm))))


# 三个同度数的部分单射
triples = strat.integers(1, 7).flatmap(lambda n: strat.tuples(maps_of_degree(n), maps_of_degree(n), maps_of_degree(n)))


def test_compose_acts_left_to_right():
    f = PartialInjection.from_pairs(3, [(0, 1)])
    g = PartialInjection.from_pairs(3, [(1, 2)])
    assert compose(f, g) == PartialInjection.from_pairs(3, [(0, 2)])
    assert compose(g, f) == empty_map(3)


def test_invert_and_rank():
    f = PartialInjection.from_pairs(4, {0: 2, 3: 1})
    assert invert(f) == PartialInjection.from_pairs(4, {2: 0, 1: 3})
    assert f.rank == 2
    assert f.domain() == {0, 3}
    assert f.image() == {1, 2}
    assert f(0) == 2 and f(1) is None


def test_sort_key_orders_by_rank_then_targets():
    maps = [empty_map(2), PartialInjection(2, (1, -1)), identity_map(2), PartialInjection(2, (0, -1))]
    ordered = sorted(maps, key=PartialInjection.sort_key)
    assert ordered == [identity_map(2), PartialInjection(2, (0, -1)), PartialInjection(2, (1, -1)), empty_map(2)]


@pytest.mark.parametrize("build", [
    lambda: PartialInjection(3, (1, 1, -1)),
    lambda: PartialInjection(3, (0, 3, -1)),
    lambda: PartialInjection(3, (0, 1)),
    lambda: PartialInjection.from_pairs(2, [(0, 1), (0, 0)]),
    lambda: compose(identity_map(2), identity_map(3)),
])
def test_invalid_maps_are_rejected(build):
    with pytest.raises(DegreeMismatchError):
        build()


def test_str_lists_defined_points():
    assert str(PartialInjection.from_pairs(3, [(2, 0), (0, 1)])) == "{0→1, 2→0}"


@hypothesis.given(triples)
def test_associativity(fgh):
    f, g, h = fgh
    assert compose(compose(f, g), h) == compose(f, compose(g, h))


@hypothesis.given(triples)
def test_inverse_laws(fgh):
    f, g, _ = fgh
    assert compose(compose(f, invert(f)), f) == f
    assert compose(compose(invert(f), f), invert(f)) == invert(f)
    assert invert(invert(f)) == f
    assert invert(compose(f, g)) == compose(invert(g), invert(f))


@hypothesis.given(triples)
def test_idempotents_are_partial_identities_and_commute(fgh):
    f, g, _ = fgh
    e = compose(f, invert(f))
    e2 = compose(g, invert(g))
    assert e == partial_identity(f.degree, f.domain())
    assert compose(e, e2) == compose(e2, e)


@hypothesis.given(triples)
def test_rank_never_grows(fgh):
    f, g, _ = fgh
    assert compose(f, g).rank <= min(f.rank, g.rank)
