import pytest

from cells.algebra import verify, verify_ai_semiring
from cells.errors import ClosureLimitError, UnknownAlgebraError, WorkbenchError
from systems.catalog import (
    MonotoneMap,
    combined_lattice_check,
    division_pipeline,
    end0_chain,
    end_chain,
    end_chain_size,
    end_chain_structure,
    fixing_top,
    meet_addition,
    omega,
    resolve,
    verify_division_pipeline,
)


def product_label(A, x, y):
    return A.labels[A.mul[A.index(x), A.index(y)]]


def sum_label(A, x, y):
    return A.labels[A.add[A.index(x), A.index(y)]]


@pytest.mark.parametrize("m, size", [(1, 1), (2, 3), (3, 10), (4, 35)])
def test_end_chain_sizes(m, size):
    R = end_chain(m)
    assert R.size == size == end_chain_size(m)
    assert verify_ai_semiring(R)


def test_small_subsemirings():
    assert end0_chain(3).size == 6
    assert fixing_top(3).size == 6
    assert omega(end_chain(3)) == end_chain(3).index("(0,0,0)")


def test_a21_tables(a21):
    assert a21.labels == ["1", "ea", "ae", "a", "e", "0"]
    assert product_label(a21, "e", "a") == "ea"
    assert product_label(a21, "a", "e") == "ae"
    assert product_label(a21, "a", "a") == "0"
    assert product_label(a21, "e", "e") == "e"
    assert sum_label(a21, "a", "e") == "a"
    for x in a21.labels:
        assert product_label(a21, x, "0") == product_label(a21, "0", x) == "0"
        assert sum_label(a21, x, "0") == "0"


def test_brandt_and_b21(brandt, b21):
    assert product_label(brandt, "d", "c") == "dc"
    assert product_label(brandt, "dc", "d") == "d"
    assert product_label(brandt, "d", "d") == "0"
    assert sum_label(b21, "c", "d") == "0"
    assert sum_label(b21, "1", "dc") == "dc"
    assert verify(b21)


@pytest.mark.parametrize("name, size", [
    ("end-chain:3", 10),
    ("end0-chain:3", 6),
    ("a21", 6),
    ("b21", 6),
    ("brandt", 6),
    ("sn:2", 103),
    ("tn:2:1", 99),
])
def test_resolve(name, size):
    assert resolve(name).size == size


@pytest.mark.parametrize("name", ["foo", "end-chain", "a21:3", "tn:2", "End-Chain:3"])
def test_resolve_rejects_unknown_names(name):
    with pytest.raises(UnknownAlgebraError):
        resolve(name)


@pytest.mark.parametrize("name", ["end-chain:4", "end0-chain:4"])
def test_resolve_checks_max_size_before_building(name):
    with pytest.raises(ClosureLimitError) as info:
        resolve(name, max_size=20)
    assert info.value.count == 35
    assert info.value.max_size == 20
    assert resolve("end-chain:3", max_size=10).size == 10


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_end_chain_structure(m):
    assert end_chain_structure(m)


@pytest.mark.parametrize("m", [2, 3])
def test_meet_addition_gives_a_distributive_lattice(m):
    assert combined_lattice_check(m)
    assert verify_ai_semiring(meet_addition(end_chain(m)))


def test_division_pipeline():
    run = division_pipeline()
    assert run.outside_n == 12
    assert run.quotient_n.size == 13
    assert len(run.ideal) == 8
    assert run.quotient.size == 6
    assert run.ok
    assert verify_division_pipeline()


def test_monotone_maps_are_checked():
    with pytest.raises(WorkbenchError):
        MonotoneMap(3, (0, 1))
    with pytest.raises(WorkbenchError):
        MonotoneMap(3, (0, 3, 3))
    with pytest.raises(WorkbenchError):
        MonotoneMap(3, (1, 0, 2))
    f = MonotoneMap(3, (0, 0, 1))
    assert f.rank == 2
    assert f.reversed_order() == MonotoneMap(3, (1, 2, 2))
    assert f.then(MonotoneMap(3, (1, 2, 2))) == MonotoneMap(3, (1, 1, 2))
    assert str(f) == "(0,0,1)"
