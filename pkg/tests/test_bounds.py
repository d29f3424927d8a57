"""Counting bounds: Plotkin, recursion, pair counts, divisibility chain."""
import random
from math import comb

import pytest

from codebounds.bounds import (
    column_recursion_bound,
    corollary_q_plus_3,
    divisibility_bound,
    equidistance_forced,
    h_table,
    irregular_budget_audit,
    pair_count_bounds,
    phi_eval,
    plotkin_bound,
    registry_lookup,
)
from codebounds.codes import Code, agreement, column_profile
from codebounds.errors import RegistryMissError


def test_plotkin_examples():
    assert plotkin_bound(5, 7, 6) == 15
    assert plotkin_bound(4, 10, 8) == 16
    assert plotkin_bound(2, 2, 2) == 2
    assert plotkin_bound(4, 7, 6) == 8
    assert plotkin_bound(4, 8, 6) is None  # qd = (q-1)n exactly
    assert plotkin_bound(3, 6, 4) is None  # qd = (q-1)n


def test_column_recursion():
    assert column_recursion_bound(5, 65) == 325
    assert column_recursion_bound(5, 325) == 1625
    assert column_recursion_bound(4, 120) == 480
    assert column_recursion_bound(4, 60) == 240


def test_pair_count_tight_cases():
    b = pair_count_bounds(5, 7, 6, 15)
    assert (b.L, b.R, b.m, b.r, b.budget) == (105, 105, 3, 0, 0)
    b = pair_count_bounds(3, 15, 11, 10)
    assert (b.L, b.R, b.budget) == (180, 180, 0)
    b = pair_count_bounds(5, 7, 6, 13)
    assert (b.L, b.R, b.budget) == (78, 77, 1)
    b = pair_count_bounds(5, 7, 6, 14)
    assert (b.m, b.r, b.budget) == (3, 1, 0)


def test_equidistance_forced():
    assert equidistance_forced(5, 7, 6, 15)
    assert equidistance_forced(5, 7, 6, 14)
    assert equidistance_forced(3, 15, 11, 10)
    assert not equidistance_forced(5, 7, 6, 13)
    assert not equidistance_forced(3, 3, 2, 9)


FIG_NET_CODE = [
    (0, 0, 0), (1, 1, 1), (2, 2, 2),
    (0, 2, 1), (1, 0, 2), (2, 1, 0),
    (0, 1, 2), (1, 2, 0), (2, 0, 1),
]


def test_irregular_budget_audit():
    c = Code.from_words(FIG_NET_CODE, q=3, n=3, d=2)
    audit = irregular_budget_audit(c)
    # nine pairs at full distance 3, none at a distance outside {2, 3}
    assert (audit.ne_d, audit.irregular, audit.budget) == (9, 0, 9)
    assert audit.ok
    two = Code.from_words([(0, 0), (1, 1)], q=2, n=2)
    a2 = irregular_budget_audit(two)
    assert (a2.ne_d, a2.irregular) == (0, 0)


def random_valid_code(rng):
    q = rng.randint(2, 4)
    n = rng.randint(2, 6)
    words = set()
    while len(words) < min(q**n, rng.randint(2, 9)):
        words.add(tuple(rng.randrange(q) for _ in range(n)))
    return Code.from_words(words, q=q, n=n)  # d = actual minimum distance


def test_pair_count_brackets_agreement_sum():
    # sum of pairwise agreements equals the block pair count and sits in [R, L]
    rng = random.Random(13)
    for _ in range(300):
        c = random_valid_code(rng)
        p = c.params
        ws = c.words
        total = sum(
            agreement(ws[i], ws[j])
            for i in range(len(ws))
            for j in range(i + 1, len(ws))
        )
        prof = column_profile(c)
        by_blocks = sum(
            comb(prof.counts[j][s], 2) for j in range(p.n) for s in range(p.q)
        )
        assert total == by_blocks
        b = pair_count_bounds(p.q, p.n, p.d, c.size)
        assert b.R <= total <= b.L
        audit = irregular_budget_audit(c)
        assert audit.ok
        assert audit.irregular <= audit.ne_d


def test_phi_values():
    assert phi_eval(5, 8, 6, 3, 4) == -98
    assert phi_eval(5, 8, 6, 3, 1) == -290
    assert phi_eval(4, 11, 8, 4, 3) == -16


def test_phi_closed_form_at_top_deficiency():
    # for n = q+3, d = q+1, m = (q+1)/2 the defect at r = q-1 collapses
    # to -(q^3 - q^2 - 2)
    for q in (5, 9, 13, 17, 21, 25, 29):
        m = (q + 1) // 2
        assert phi_eval(q, q + 3, q + 1, m, q - 1) == -(q**3 - q**2 - 2)


def test_divisibility_bound_5_8_6():
    cert = divisibility_bound(5, 8, 6)
    assert cert.applicable
    assert cert.m == 3
    assert cert.r == 4
    assert cert.bound == 70
    assert dict(cert.phi_table)[4] == -98
    assert len(cert.phi_table) == 4


def test_divisibility_bound_4_11_8():
    cert = divisibility_bound(4, 11, 8)
    assert cert.applicable
    assert (cert.m, cert.r, cert.bound) == (4, 3, 60)
    assert dict(cert.phi_table)[3] == -16


def test_divisibility_bound_inapplicable():
    cert = divisibility_bound(3, 6, 4)
    assert not cert.applicable
    assert cert.m == 2
    assert "divides" in cert.reason
    assert cert.bound is None
    # non-integral m
    cert2 = divisibility_bound(3, 7, 5)
    assert not cert2.applicable and "not an integer" in cert2.reason
    # Plotkin regime violated
    cert3 = divisibility_bound(3, 20, 4)
    assert not cert3.applicable and "not positive" in cert3.reason


def test_corollary_q_plus_3():
    assert corollary_q_plus_3(5) == 70
    assert corollary_q_plus_3(9) == 396
    with pytest.raises(ValueError):
        corollary_q_plus_3(7)
    with pytest.raises(ValueError):
        corollary_q_plus_3(1)


def test_corollary_matches_divisibility_chain():
    for q in (5, 9, 13, 17):
        cert = divisibility_bound(q, q + 3, q + 1)
        assert cert.applicable
        assert cert.m == (q + 1) // 2
        assert cert.r == q - 1
        assert cert.bound == corollary_q_plus_3(q)


def test_h_table_7_6_5():
    expected_k_desc = (0, 0, 1, 3, 6, 10, 8, 7, 7, 8, 10)  # k = 15 down to 5
    got = tuple(h_table(5, 7, 6, k) for k in range(15, 4, -1))
    assert got == expected_k_desc


def test_h_table_clamps():
    assert h_table(5, 7, 6, 16) == 0  # raw budget is negative there
    assert pair_count_bounds(5, 7, 6, 16).budget < 0


def test_registry():
    assert registry_lookup(3, 15, 11).value == 10
    assert registry_lookup(5, 7, 6).value == 15
    e = registry_lookup(4, 8, 6)
    assert e.value == 32 and e.unique
    with pytest.raises(RegistryMissError):
        registry_lookup(2, 5, 3)
