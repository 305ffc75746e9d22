import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from systems import catalog  # noqa: E402
from systems.snfam import build_sn  # noqa: E402


@pytest.fixture(scope="session")
def brandt():
    return catalog.brandt_monoid()


@pytest.fixture(scope="session")
def a21():
    return catalog.a21()


@pytest.fixture(scope="session")
def b21():
    return catalog.b21()


@pytest.fixture(scope="session")
def end3():
    return catalog.end_chain(3)


@pytest.fixture(scope="session")
def s2():
    return build_sn(2)


@pytest.fixture(scope="session")
def t2(s2):
    return {k: s2.without_block(k) for k in (1, 2)}
