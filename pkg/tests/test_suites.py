from __future__ import annotations

import pytest
from conftest import Z, module

from finmod.suites import (
    PASS,
    SKIPPED,
    VIOLATION,
    Report,
    abelian_groups,
    adjacent_exponents,
    classify_group,
    classify_p_groups,
    classify_partition,
    composition_length,
    embeds,
    partitions,
    surjects,
    verdict,
    verify_cononsingular_bridge,
    verify_diagram,
    verify_dsum_theorems,
    verify_essip_bridge,
    verify_nonsingular_equiv,
    verify_plus_ring,
    verify_product_reduction,
    verify_relative_weak_duo,
    verify_ring_theorems,
    verify_socle_radical,
    verify_st00,
    verify_transfer,
)


def statuses(r: Report) -> dict[str, str]:
    return {c.name: c.status for c in r.checks}


def test_report_bookkeeping():
    r = Report("x", "y")
    r.implies("a", True, False)
    r.implies("b", False, False)
    r.equiv("c", True, True)
    r.skip("d", "too big")
    assert [c.status for c in r.checks] == [VIOLATION, PASS, PASS, SKIPPED]
    assert not r.ok and r.to_json()["violations"] == 1


@pytest.mark.parametrize("orders", [(4, 8), (2, 2), (6,), (2, 16), (2, 4, 8), (3, 9)])
def test_st00_and_diagram_hold(orders):
    m = Z(*orders)
    assert verify_st00(m).ok
    assert verify_diagram(m).ok
    assert verify_socle_radical(m).ok


def test_st00_legs_for_z4_z8():
    # extending, but not weak duo, so not strongly self-CS-Baer: the legs agree
    m = Z(4, 8)
    assert verdict("extending", m) and not verdict("weak_duo", m)
    assert not verdict("cs_baer", m, strong=True)
    assert verify_st00(m).ok


def test_st00_for_z2_z2():
    m = Z(2, 2)
    assert not verdict("weak_duo", m) and not verdict("cs_baer", m, strong=True)
    assert verify_st00(m).ok


def test_nonsingular_equiv_examples():
    assert verify_nonsingular_equiv(Z(6), Z(4)).ok
    assert verify_nonsingular_equiv(Z(2), Z(3)).ok
    m = Z(4)
    assert verdict("cs_baer", m) and not verdict("k_nonsingular", m, m) and not verdict("baer", m)
    assert verify_nonsingular_equiv(m, m).ok


def test_product_reduction_examples():
    assert verify_product_reduction(Z(6), Z(4)).ok
    assert verify_product_reduction(Z(4), Z(2)).ok
    assert verify_product_reduction(Z(4), Z()).ok
    r = verify_product_reduction(Z(2, 8), Z(2, 8), limit=1 << 10)
    assert r.ok and any(c.status == SKIPPED for c in r.checks)


def test_dsum_examples():
    assert verify_dsum_theorems(Z(8), [Z(2), Z(4)]).ok
    assert verify_dsum_theorems(Z(4, 9), [Z(4), Z(9)]).ok
    r = verify_dsum_theorems(Z(2, 16), [Z(2), Z(16)])
    assert r.ok
    assert verdict("dual_cs_baer", Z(2)) and verdict("dual_cs_baer", Z(16))
    assert not verdict("dual_cs_baer", Z(2, 16))


def test_bridges():
    assert verify_essip_bridge(Z(4, 2), Z(2)).ok
    assert verify_essip_bridge(Z(4), Z(2)).ok
    assert verify_essip_bridge(Z(), Z()).ok
    assert verify_cononsingular_bridge(Z(4), Z(2)).ok
    assert verify_cononsingular_bridge(Z(4), Z()).ok
    m, n = Z(2, 8), Z(3)
    assert not verdict("extending", m)
    assert not verdict("e_k_cononsingular", m, n)
    assert verify_cononsingular_bridge(m, n).ok


def test_relative_weak_duo_and_transfer():
    assert verify_relative_weak_duo(Z(4, 8), Z(4, 8)).ok
    assert verify_relative_weak_duo(Z(6), Z(4)).ok
    assert verify_transfer(Z(2, 4), Z(2, 4)).ok


def test_ring_suites():
    r12 = module("z12_regular")
    rep = verify_ring_theorems(r12, commutative=True, cyclic_modules=[Z(6), Z(4)])
    assert rep.ok
    assert verdict("lifting", r12) and verdict("dual_cs_baer", r12)
    t2 = module("t2_f2_regular")
    assert verify_ring_theorems(t2).ok
    assert verdict("dual_cs_baer", t2) and not verdict("dual_cs_baer", t2, strong=True)
    assert verify_plus_ring(Z(2, 4), Z(4)).ok


def test_embeds_and_surjects():
    assert embeds(Z(2), Z(4)) and not embeds(Z(4), Z(2))
    assert surjects(Z(4), Z(2)) and not surjects(Z(2), Z(4))
    assert embeds(Z(), Z(3)) and surjects(Z(3), Z())


def test_composition_length():
    assert composition_length(Z(12)) == 3
    assert composition_length(module("t2_f2_regular")) == 3
    assert composition_length(module("swap_z2_z2")) == 2
    assert composition_length(Z()) == 0


def test_partitions_and_predicate():
    assert list(partitions(4)) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert sum(1 for _ in partitions(6)) == 11
    assert adjacent_exponents((1, 1, 1, 1)) and adjacent_exponents((2, 1)) and adjacent_exponents(())
    assert not adjacent_exponents((4, 1)) and not adjacent_exponents((3, 2, 1))


def test_classification_examples():
    assert classify_partition((1, 1, 1, 1), 2)["verdict"]
    assert not classify_partition((4, 1), 2)["verdict"]
    assert classify_partition((2, 1), 2)["verdict"]
    assert classify_partition((3,), 2, strong=True)["verdict"]
    rows = classify_p_groups(3, 3)
    assert len(rows) == 6 and all(r["match"] for r in rows)
    assert classify_group((2, 3), cross_check=64)["verdict"]
    assert not classify_group((2, 8, 9), cross_check=256)["verdict"]
    row = classify_group((2, 4, 3), cross_check=64)
    assert row["verdict"] and row["match"] and row["engine"]


def test_abelian_group_counts():
    # number of abelian groups of each order up to 32
    counts = {}
    for g in abelian_groups(32):
        n = 1
        for d in g:
            n *= d
        counts[n] = counts.get(n, 0) + 1
    assert counts[16] == 5 and counts[32] == 7 and counts[12] == 2 and counts[8] == 3 and counts[30] == 1
    assert sum(counts.values()) == sum({1: 1, 2: 1, 3: 1, 4: 2, 5: 1, 6: 1, 7: 1, 8: 3, 9: 2, 10: 1, 11: 1, 12: 2, 13: 1, 14: 1,
                                        15: 1, 16: 5, 17: 1, 18: 2, 19: 1, 20: 2, 21: 1, 22: 1, 23: 1, 24: 3, 25: 2, 26: 1,
                                        27: 3, 28: 2, 29: 1, 30: 1, 31: 1, 32: 7}.values()) - 1
