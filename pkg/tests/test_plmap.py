import random

import pytest

from conftest import zt
from taut.construct import match_intervals, random_element
from taut.errors import (
    DomainMismatch,
    NotIncreasing,
    NotTauPower,
    OutOfDomain,
    SlopeMismatch,
)
from taut.plmap import (
    ABOVE,
    BELOW,
    FLAT,
    PLMap,
    ROOT,
    commutator,
    concat,
    is_ftau,
    is_ftau_compact,
    is_supported_in,
    power,
)
from taut.ring import ONE, QTau, TAU, ZERO, tau_pow

T2 = tau_pow(2)
T3 = tau_pow(3)
CONNECT = PLMap((ZERO, TAU, ONE), (ZERO, T2, ONE), (1, -1))


def test_validate_connect_map():
    g = PLMap.from_raw([ZERO, TAU, ONE], [ZERO, T2, ONE], [1, -1])
    assert g.num_pieces == 2
    inferred = PLMap.from_raw([ZERO, TAU, ONE], [ZERO, T2, ONE])
    assert inferred == g


def test_validate_identity_and_merge():
    g = PLMap((ZERO, TAU, ONE), (ZERO, TAU, ONE), (0, 0))
    assert g.is_identity()
    assert g.num_pieces == 1


def test_validate_rejects():
    with pytest.raises(SlopeMismatch):
        PLMap((ZERO, TAU, ONE), (ZERO, T2, ONE), (1, 1))
    with pytest.raises(NotIncreasing):
        PLMap((ONE, ZERO), (ZERO, ONE), (0,))
    with pytest.raises(NotTauPower):
        PLMap.from_raw([zt(0), zt(1)], [zt(0), zt(2)])


def test_eval():
    assert CONNECT.eval(TAU) == QTau(T2)
    assert CONNECT.eval(T2) == QTau(T3)       # slope-tau piece
    assert PLMap.identity().eval(QTau(zt(1), 3)) == QTau(zt(1), 3)
    with pytest.raises(OutOfDomain):
        CONNECT.eval(zt(2))


def test_eval_keeps_ring_points_in_ring():
    rng = random.Random(11)
    for _ in range(50):
        g = random_element(rng.randrange(2**63), 5, "F_tau")
        for _ in range(5):
            x = g.xs[rng.randrange(len(g.xs))]
            assert g.eval(x).is_ring_element()


def test_compose_brute_force_oracle():
    rng = random.Random(12)
    for trial in range(30):
        g = random_element(trial, 4, "F_tau")
        h = random_element(trial + 1000, 4, "F_tau")
        gh = g * h
        for _ in range(8):
            x = QTau(zt(rng.randrange(0, 100), 0), 100)
            assert gh.eval(x) == h.eval(g.eval(x))


def test_compose_example():
    g2 = CONNECT * CONNECT
    assert g2.num_pieces == 3
    assert g2.eval(TAU) == QTau(T3)
    assert (PLMap.identity() * CONNECT) == CONNECT
    with pytest.raises(DomainMismatch):
        CONNECT * PLMap.identity(ZERO, TAU)


def test_inverse():
    assert PLMap.identity().inverse().is_identity()
    inv = CONNECT.inverse()
    assert inv.xs == (ZERO, T2, ONE) and inv.ks == (-1, 1)
    for seed in range(100):
        g = random_element(seed, 4, "F_tau")
        assert (g * g.inverse()).is_identity()


def test_group_laws_structural():
    rng = random.Random(13)
    for _ in range(40):
        f = random_element(rng.randrange(2**63), 4, "F_tau")
        g = random_element(rng.randrange(2**63), 4, "F_tau")
        h = random_element(rng.randrange(2**63), 4, "F_tau")
        assert (f * g) * h == f * (g * h)
        assert f * PLMap.identity() == f
        assert power(f, 3) == f * f * f
        assert commutator(f, f).is_identity()


def test_support():
    assert PLMap.identity().support().is_empty()
    assert CONNECT.support().intervals == ((ZERO, ONE),)
    g = concat([PLMap.identity(ZERO, T2), match_intervals(T2, ONE, T2, ONE)])
    assert is_supported_in(g, T2, ONE)


def test_support_empty_iff_identity():
    rng = random.Random(15)
    for _ in range(50):
        g = random_element(rng.randrange(2**63), 4, "F_tau")
        assert g.support().is_empty() == g.is_identity()


def test_flavors():
    assert is_ftau(CONNECT) and not is_ftau_compact(CONNECT)
    assert is_ftau(PLMap.identity()) and is_ftau_compact(PLMap.identity())
    inner = match_intervals(ZERO, ONE, T3, TAU)
    squeezed = concat([
        PLMap.identity(ZERO, T3),
        inner.inverse() * CONNECT * inner,
        PLMap.identity(TAU, ONE),
    ])
    assert is_ftau_compact(squeezed)
    assert is_supported_in(squeezed, T3, TAU)


def test_shift_roots_examples():
    assert PLMap.identity().shift_roots(ZERO).verdict == FLAT
    tri = CONNECT.shift_roots(ZERO)
    assert tri.verdict == ROOT and tri.root == QTau(ZERO)
    assert CONNECT.shift_roots(ONE).verdict == BELOW
    assert CONNECT.shift_roots(zt(-1)).verdict == ABOVE


def test_shift_roots_interior_root_is_exact():
    # push map minus a small shift crosses zero away from breakpoints
    push = PLMap((ZERO, T2, ONE), (ZERO, TAU, ONE), (-1, 1))
    tri = push.shift_roots(T3)
    assert tri.verdict == ROOT
    x = tri.root
    assert push.eval(x) == x + QTau(T3)


def test_shift_roots_sampling_never_contradicts():
    rng = random.Random(14)
    for trial in range(25):
        g = random_element(trial, 5, "F_tau")
        s = zt(0, 1) * tau_pow(rng.randrange(1, 5)) - tau_pow(5)
        tri = g.shift_roots(s)
        samples = [QTau(zt(i), 1000) for i in range(0, 1001, 97)]
        ds = [g.eval(x) - x - QTau(s) for x in samples]
        if tri.verdict == ABOVE:
            assert all(d.sign() > 0 for d in ds)
        elif tri.verdict == BELOW:
            assert all(d.sign() < 0 for d in ds)


def test_restrict_and_concat():
    left = CONNECT.restrict(ZERO, TAU)
    right = CONNECT.restrict(TAU, ONE)
    assert concat([left, right]) == CONNECT
