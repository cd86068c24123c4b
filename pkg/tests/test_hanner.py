import itertools
import math

import numpy as np
import pytest

from khbm.hanner import falsify_hanner, hanner_gap, hlawka_check
from khbm.norms import LpNorm, norm_eval


def full_sign_sums(norm, vectors, q):
    """Oracle over all 2^n sign patterns (the module only walks half)."""
    n = len(vectors)
    lhs = []
    rhs = []
    norms = [norm_eval(norm, v) for v in vectors]
    for signs in itertools.product((1.0, -1.0), repeat=n):
        vec = [math.fsum(s * v[j] for s, v in zip(signs, vectors)) for j in range(len(vectors[0]))]
        lhs.append(norm_eval(norm, vec) ** q)
        rhs.append(abs(math.fsum(s * m for s, m in zip(signs, norms))) ** q)
    return math.fsum(lhs), math.fsum(rhs)


def test_planar_absolute_sum_worked_example():
    rep = hanner_gap(LpNorm(1.0, 2), np.eye(2), 1.0)
    assert rep.lhs == 8.0
    assert rep.rhs == 4.0
    assert rep.gap == 4.0
    assert rep.verdict == "cotype-consistent"
    typed = hanner_gap(LpNorm(1.0, 2), np.eye(2), 1.0, mode="type")
    assert typed.verdict == "violated-type"


def test_half_enumeration_matches_full():
    rng = np.random.default_rng(12)
    for _ in range(10):
        n = int(rng.integers(2, 5))
        d = int(rng.integers(1, 4))
        q = float(rng.uniform(1.0, 4.0))
        norm = LpNorm(float(rng.choice([1.0, 2.0, 3.0, math.inf])), d)
        v = rng.standard_normal((n, d))
        rep = hanner_gap(norm, v, q)
        lhs, rhs = full_sign_sums(norm, v.tolist(), q)
        assert abs(rep.lhs - lhs) <= 1e-12 * lhs
        assert abs(rep.rhs - rhs) <= 1e-12 * max(rhs, 1e-300)


def test_euclidean_q2_gap_vanishes():
    rng = np.random.default_rng(13)
    for _ in range(20):
        v = rng.standard_normal((int(rng.integers(2, 6)), 3))
        rep = hanner_gap(LpNorm(2.0, 3), v, 2.0)
        assert abs(rep.gap) <= 1e-12 * rep.lhs


def test_verdict_modes():
    rep = hanner_gap(LpNorm(2.0, 2), np.eye(2), 2.0, mode="cotype")
    assert rep.verdict == "cotype-consistent"
    with pytest.raises(ValueError):
        hanner_gap(LpNorm(2.0, 2), np.eye(2), 2.0, mode="typo")


def test_falsifier_finds_planar_type_violation():
    hit = falsify_hanner(LpNorm(1.0, 2), q=1.0, n=2, d=2, mode="type", trials=200, seed=0)
    assert hit is not None
    assert hit.violation > 0
    # witness normalized to unit frobenius norm
    assert abs(np.linalg.norm(hit.witness.rows) - 1.0) < 1e-12
    # the reported tuple really violates the type inequality
    rep = hanner_gap(LpNorm(1.0, 2), hit.witness.rows, 1.0, mode="type")
    assert rep.verdict == "violated-type"


def test_falsifier_deterministic():
    a = falsify_hanner(LpNorm(1.0, 2), q=1.0, n=2, d=2, mode="type", trials=100, seed=5)
    b = falsify_hanner(LpNorm(1.0, 2), q=1.0, n=2, d=2, mode="type", trials=100, seed=5)
    assert a is not None and b is not None
    assert a.trial_index == b.trial_index
    assert np.array_equal(a.witness.rows, b.witness.rows)


def test_falsifier_quiet_on_consistent_claims():
    # absolute-sum norms do satisfy the q = 1 cotype inequality
    assert falsify_hanner(LpNorm(1.0, 3), q=1.0, n=3, d=3, mode="cotype", trials=2000, seed=1) is None
    # euclidean case is an identity at q = 2: neither side can be violated
    assert falsify_hanner(LpNorm(2.0, 2), q=2.0, n=2, d=2, mode="type", trials=2000, seed=2) is None
    assert falsify_hanner(LpNorm(2.0, 2), q=2.0, n=2, d=2, mode="cotype", trials=2000, seed=3) is None


def test_falsifier_validation():
    with pytest.raises(ValueError):
        falsify_hanner(LpNorm(1.0, 2), q=1.0, n=2, d=3, mode="type", trials=10, seed=0)
    with pytest.raises(ValueError):
        falsify_hanner(LpNorm(1.0, 2), q=1.0, n=1, d=2, mode="type", trials=10, seed=0)
    with pytest.raises(ValueError):
        falsify_hanner(LpNorm(1.0, 2), q=1.0, n=2, d=2, mode="both", trials=10, seed=0)
    with pytest.raises(ValueError):
        falsify_hanner(LpNorm(1.0, 2), q=0.5, n=2, d=2, mode="type", trials=10, seed=0)
    with pytest.raises(ValueError):
        falsify_hanner(LpNorm(1.0, 2), q=1.0, n=2, d=2, mode="type", trials=0, seed=0)


def test_hlawka_holds_for_l1_and_l2():
    rng = np.random.default_rng(14)
    for norm in (LpNorm(1.0, 3), LpNorm(2.0, 3)):
        for _ in range(200):
            x, y, z = rng.standard_normal((3, 3))
            assert hlawka_check(norm, x, y, z).holds


def test_hlawka_hand_case():
    # x + y + z = 0 forces equality: both sides are 2 + sqrt(2)
    rep = hlawka_check(LpNorm(2.0, 2), [1.0, 0.0], [0.0, 1.0], [-1.0, -1.0])
    assert abs(rep.lhs - (2.0 + math.sqrt(2.0))) < 1e-15
    assert abs(rep.rhs - (2.0 + math.sqrt(2.0))) < 1e-15
    assert rep.holds
