from __future__ import annotations

import pytest
from conftest import Z
from hypothesis import given, settings, strategies as st

from finmod.fastpath import lifting
from finmod.properties import check
from finmod.suites import abelian_groups

SMALL = [g for g in abelian_groups(64)]


def test_examples():
    assert not lifting((2, 16)).verdict
    assert lifting((2,)).verdict and lifting((16,)).verdict
    assert lifting((2, 4)).verdict and lifting((2, 2, 2, 2)).verdict
    assert lifting((16,), strong=True).verdict
    assert not lifting((2, 4), strong=True).verdict
    assert lifting((), strong=True).verdict


@pytest.mark.parametrize("orders", SMALL, ids=lambda o: "x".join(map(str, o)))
def test_matches_engine(orders):
    m = Z(*orders)
    for strong in (False, True):
        fast = lifting(orders, strong=strong).verdict
        assert fast == check("lifting", m, strong=strong).verdict
        assert fast == check("dual_cs_baer", m, strong=strong).verdict


@given(st.lists(st.sampled_from([2, 3, 5, 6, 10, 15]), min_size=1, max_size=3), st.booleans())
@settings(max_examples=60)
def test_semisimple_shortcut(orders, strong):
    a = lifting(orders, strong=strong)
    b = lifting(orders, strong=strong, semisimple_shortcut=False)
    assert a.verdict == b.verdict
    assert a.method == "semisimple" and b.method == "enumeration"


def test_witness_is_not_summand():
    res = lifting((2, 16))
    assert not res.verdict and res.witness["reason"].startswith("not pure")
    strong = lifting((4, 8), strong=True)
    assert not strong.verdict and strong.witness["reason"] == "not fully invariant"
