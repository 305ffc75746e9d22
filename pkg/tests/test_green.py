import hypothesis
import hypothesis.strategies as strat
import numpy as np
import pytest

from cells.algebra import check_isomorphism, multiplicative_reduct, transport, verify_ai_semiring
from cells.errors import KindMismatchError
from organs.green import (
    aperiodicity_index,
    green,
    is_combinatorial,
    is_regular,
    nat_addition,
    natural_leq,
    natural_order_matrix,
    render_green,
)


def test_brandt_dclasses(brandt):
    G = green(brandt)
    assert G.dclass_count == 3
    groups = sorted(sorted(brandt.label_of(members)) for members in G.dclasses)
    assert groups == [["0"], ["1"], ["c", "cd", "d", "dc"]]
    assert sorted(brandt.label_of(G.idempotents)) == ["0", "1", "cd", "dc"]
    assert is_combinatorial(brandt, G)
    assert is_regular(brandt)

    one, mid, zero = (G.d[brandt.index(x)] for x in ("1", "c", "0"))
    assert G.leq(zero, mid) and G.leq(mid, one) and G.leq(zero, one)
    assert not G.leq(one, mid)
    assert G.covers() == sorted([(zero, mid), (mid, one)])


def test_brandt_egg_box_rows_are_r_classes(brandt):
    G = green(brandt)
    c, cd, dc = brandt.index("c"), brandt.index("cd"), brandt.index("dc")
    assert G.r[c] == G.r[cd]
    assert G.l[c] == G.l[dc]
    assert G.h[c] != G.h[cd]


def test_end_chain_dclasses_follow_rank(end3):
    G = green(multiplicative_reduct(end3))
    assert sorted(len(members) for members in G.dclasses) == [1, 3, 6]
    for members in G.dclasses:
        assert len({end3.carriers[x].rank for x in members}) == 1


def test_a21_is_regular_not_inverse(a21):
    assert is_regular(multiplicative_reduct(a21))


def test_aperiodicity_index(brandt, s2):
    assert aperiodicity_index(brandt) == 2
    assert aperiodicity_index(s2.semigroup) == 2


def test_natural_order(brandt):
    one, c, cd, zero = (brandt.index(x) for x in ("1", "c", "cd", "0"))
    assert natural_leq(brandt, cd, one)
    assert not natural_leq(brandt, one, cd)
    assert not natural_leq(brandt, c, one)
    assert natural_order_matrix(brandt)[zero].all()
    with pytest.raises(KindMismatchError):
        natural_leq(multiplicative_reduct(brandt), zero, one)


def test_nat_addition_is_the_meet(brandt):
    R = nat_addition(brandt, p=2)
    assert verify_ai_semiring(R)
    label = {x: i for i, x in enumerate(brandt.labels)}
    assert R.labels[R.add[label["c"], label["d"]]] == "0"
    assert R.labels[R.add[label["1"], label["cd"]]] == "cd"
    assert R.labels[R.add[label["c"], label["c"]]] == "c"


def test_render_green(brandt):
    text = render_green(brandt, green(brandt))
    assert text.count("D") >= 3
    assert "*1" in text
    assert "order (covers):" in text


def test_addition_reverses_the_natural_order(brandt, s2):
    for S in (brandt, s2.semigroup):
        R = nat_addition(S, p=2)
        absorbed = R.add == np.arange(S.size)[None, :]
        assert (absorbed == natural_order_matrix(S).T).all()


def test_idempotents_of_a_dclass_are_incomparable(brandt, s2, t2, end3):
    for S in (brandt, s2.semigroup, t2[1].semigroup, multiplicative_reduct(end3)):
        G = green(S)
        for Y in range(G.dclass_count):
            es = G.idempotents_of(Y)
            assert not any(e != f and G.idempotent_leq(e, f) for e in es for f in es)


def classes_of(ids):
    groups = {}
    for x, c in enumerate(ids):
        groups.setdefault(c, set()).add(x)
    return {frozenset(members) for members in groups.values()}


def assert_green_carried(A, perm):
    moved = transport(A, perm)
    assert check_isomorphism(A, moved, perm)
    G, H = green(A), green(moved)

    def carry(members):
        return frozenset(perm[x] for x in members)

    for relation in ("r", "l", "h", "d"):
        assert {carry(c) for c in classes_of(getattr(G, relation))} == classes_of(getattr(H, relation))
    assert {perm[e] for e in G.idempotents} == set(H.idempotents)
    order = {(carry(G.dclasses[Y]), carry(G.dclasses[X])) for Y, X in G.dposet}
    assert order == {(frozenset(H.dclasses[Y]), frozenset(H.dclasses[X])) for Y, X in H.dposet}


@hypothesis.given(strat.permutations(range(6)))
def test_green_survives_relabeling_brandt(brandt, perm):
    assert_green_carried(brandt, perm)


@hypothesis.given(strat.permutations(range(10)))
def test_green_survives_relabeling_end_chain(end3, perm):
    assert_green_carried(multiplicative_reduct(end3), perm)
