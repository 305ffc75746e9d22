from itertools import combinations

import pytest

from cells.algebra import closure_from_maps, multiplicative_reduct
from cells.errors import KindMismatchError, NotCombinatorialError, WorkbenchError
from cells.pinj import PartialInjection
from cells.terms import vn_pair
from organs.green import green
from organs.identities import a21_satisfies, all_words, check_identity, word_identity
from organs.kadourek import (
    Kadourek,
    Partition,
    drop_dclasses,
    enumerate_filters,
    in_var_b21,
    is_filter,
    star_condition,
    up_set,
)
from systems.snfam import filter_regressions


def brandt_levels(brandt):
    G = green(brandt)
    return G, tuple(G.d[brandt.index(x)] for x in ("1", "c", "0"))


def test_brandt_filters(brandt):
    G, (top, mid, bottom) = brandt_levels(brandt)
    assert up_set(G, mid) == {mid, top}
    filters = list(enumerate_filters(G, mid))
    assert filters == [frozenset(), frozenset({top}), frozenset({mid, top})]
    assert is_filter(G, {top})
    assert not is_filter(G, {mid})


def test_brandt_tau(brandt):
    G, (top, mid, bottom) = brandt_levels(brandt)
    k = Kadourek(brandt, G)
    cd, dc = brandt.index("cd"), brandt.index("dc")
    assert len(k.tau(frozenset(), mid).classes) == 1
    split = k.tau({top}, mid)
    assert len(split.classes) == 2
    assert not split.same(cd, dc)
    with pytest.raises(WorkbenchError):
        k.tau({bottom}, mid)


def test_projection_needs_an_idempotent_below(brandt):
    k = Kadourek(brandt)
    one, cd, dc = (brandt.index(x) for x in ("1", "cd", "dc"))
    assert k.projection_pi(one, cd, one) == cd
    with pytest.raises(WorkbenchError):
        k.projection_pi(cd, one, cd)
    with pytest.raises(WorkbenchError):
        k.projection_pi(one, cd, dc)


def test_brandt_is_a_member(brandt):
    verdict = in_var_b21(brandt)
    assert verdict
    assert verdict.star.obligations == 2
    assert verdict.reason == "condition (∗) holds (2 obligations)"
    k = Kadourek(brandt)
    assert all(k.recheck(w) for w in verdict.star.passes)


def test_rejects_bad_input(brandt):
    with pytest.raises(KindMismatchError):
        Kadourek(multiplicative_reduct(brandt))
    with pytest.raises(WorkbenchError):
        Kadourek(brandt, rho_reading="sideways")


def test_a21_is_not_inverse(a21):
    verdict = in_var_b21(multiplicative_reduct(a21))
    assert not verdict
    assert verdict.reason.startswith("not an inverse semigroup")


def test_groups_are_rejected():
    swap = PartialInjection(2, (1, 0))
    Z2, _ = closure_from_maps([swap], with_inverses=True)
    verdict = in_var_b21(Z2)
    assert not verdict
    assert verdict.reason.startswith("nontrivial subgroup")
    assert Z2.carriers[verdict.witness] == swap
    with pytest.raises(NotCombinatorialError):
        star_condition(Z2)


def test_sn_fails_and_tn_passes(s2, t2):
    assert not star_condition(s2.semigroup)
    for T in t2.values():
        k = Kadourek(T.semigroup)
        verdict = k.star_condition()
        assert verdict, T.name
        assert all(k.recheck(w) for w in verdict.passes)
        assert filter_regressions(T, k) == []


def test_failure_witness_survives_recheck(s2):
    k = Kadourek(s2.semigroup)
    verdict = k.star_condition()
    assert verdict.failure is not None and not verdict.failure.separated
    assert k.recheck(verdict.failure)


def test_projections_stay_inside_tau_classes(t2):
    T = t2[1]
    k = Kadourek(T.semigroup)
    G = k.G
    for Y in range(G.dclass_count):
        for K in k.enumerate_filters(Y):
            partition = k.tau(K, Y)
            for X in K:
                assert all(partition.same(p, q) for p, q in k.pi_relation(X, Y))
            for X in k.up_set(Y) - K:
                assert all(partition.same(p, q) for p, q in k.rho_relation(X, Y))


def test_dropping_the_top_of_brandt(brandt):
    G, (top, mid, bottom) = brandt_levels(brandt)
    rest = drop_dclasses(brandt, G, [top])
    assert rest.size == 5
    assert in_var_b21(rest)


def test_partition_helpers():
    fine = Partition(((0,), (1, 2), (3,)))
    coarse = Partition(((0, 3), (1, 2)))
    assert fine.refines(coarse)
    assert not coarse.refines(fine)
    assert fine.render(["a", "b", "c", "d"]) == "{a} | {b, c} | {d}"


def test_tau_parts_are_monotone_along_filter_chains(t2):
    for T in t2.values():
        k = Kadourek(T.semigroup)
        G = k.G
        for Y in range(G.dclass_count):
            if len(G.idempotents_of(Y)) < 2:
                continue
            filters = k.enumerate_filters(Y)
            for K in filters:
                tau = k.tau(K, Y)
                assert k.pi_part(K, Y).refines(tau)
                assert k.rho_part(K, Y).refines(tau)
                for bigger in filters:
                    if K < bigger:
                        assert k.pi_part(K, Y).refines(k.pi_part(bigger, Y))
                        assert k.rho_part(bigger, Y).refines(k.rho_part(K, Y))


def test_tau_itself_is_not_monotone(t2):
    T = t2[1]
    k = Kadourek(T.semigroup)
    D, B2 = k.G.d[T.blocks["D"][0]], k.G.d[T.blocks["B2"][0]]
    small, large = k.tau(frozenset(), D), k.tau({B2}, D)
    assert not small.refines(large)
    assert not large.refines(small)


def test_filters_match_brute_force(brandt, t2):
    for S in (brandt, t2[1].semigroup, t2[2].semigroup):
        G = green(S)
        for Y in range(G.dclass_count):
            up = sorted(up_set(G, Y))
            brute = set()
            for size in range(len(up) + 1):
                for combo in combinations(up, size):
                    K = frozenset(combo)
                    if all(X in K for Z in K for X in range(G.dclass_count) if G.leq(Z, X)):
                        brute.add(K)
            found = list(enumerate_filters(G, Y))
            assert len(found) == len(brute)
            assert set(found) == brute
            assert [len(K) for K in found] == sorted(len(K) for K in found)
    T = t2[1]
    G = green(T.semigroup)
    assert len(list(enumerate_filters(G, G.d[T.blocks["D"][0]]))) == 7


def test_members_satisfy_the_word_identities_of_a21(brandt, t2):
    words = all_words(["x", "y"], 3)
    pairs = [(w, w2) for w in words for w2 in words if w < w2 and a21_satisfies(w, w2)]
    assert (("x", "x"), ("x", "x", "x")) in pairs
    for S in (brandt, t2[1].semigroup, t2[2].semigroup):
        assert in_var_b21(S)
        for w, w2 in pairs:
            assert check_identity(S, word_identity(w, w2)), (w, w2)
    assert check_identity(brandt, word_identity(*vn_pair(2)))
