import random
from fractions import Fraction

import pytest

from conftest import zt
from taut.circle import CircleMap
from taut.construct import (
    SplitMix64,
    arc_contains,
    arcs_disjoint,
    commutator_trick,
    connect_tuple,
    connect_tuple_derived,
    defect_witness,
    defect_witness_search,
    factor_local,
    match_intervals,
    points_between,
    preference_points,
    proximal_shrink,
    proximal_shrink_circle,
    random_element,
)
from taut.errors import BadTuple, IdentityInput
from taut.lift import LiftMap, rot
from taut.plmap import PLMap, is_ftau, is_ftau_compact
from taut.ring import ONE, QTau, TAU, ZERO, tau_pow

T2 = tau_pow(2)
T3 = tau_pow(3)


def seeded_points(seed, count, depth=8):
    """Sample increasing tuples out of the depth-limited preference points."""
    pool = sorted(set(preference_points(depth)))
    rng = random.Random(seed)
    idx = sorted(rng.sample(range(len(pool)), count))
    return tuple(pool[i] for i in idx)


def test_match_intervals_linear_cases():
    m = match_intervals(ZERO, TAU, ZERO, T2)
    assert m == PLMap((ZERO, TAU), (ZERO, T2), (1,))
    m2 = match_intervals(TAU, ONE, T2, ONE)
    assert m2 == PLMap((TAU, ONE), (T2, ONE), (-1,))


def test_match_intervals_two_scale_case():
    m = match_intervals(ZERO, ONE, ZERO, zt(2) * T2)
    assert m.xs == (ZERO, TAU, ONE)
    assert m.ks == (1, 0)
    assert m.eval(ONE) == QTau(zt(2) * T2)


def test_match_intervals_composes():
    rng = random.Random(41)
    pool = sorted(set(preference_points(6)))
    for _ in range(25):
        a, b = sorted(rng.sample(range(len(pool)), 2))
        c, d = sorted(rng.sample(range(len(pool)), 2))
        e, f = sorted(rng.sample(range(len(pool)), 2))
        ab = match_intervals(pool[a], pool[b], pool[c], pool[d])
        bc = match_intervals(pool[c], pool[d], pool[e], pool[f])
        comp = ab * bc
        assert comp.xs[0] == pool[a] and comp.ys[-1] == pool[f]


def test_connect_tuple_examples():
    cert = connect_tuple((TAU,), (T2,))
    assert cert.element == PLMap((ZERO, TAU, ONE), (ZERO, T2, ONE), (1, -1))
    cert2 = connect_tuple((TAU,), (TAU,))
    assert cert2.element.is_identity()
    cert3 = connect_tuple((T2, TAU), (T3, T2))
    cert3.verify()
    assert cert3.element.eval_zt(T2) == T3


def test_connect_tuple_seeded():
    for seed in range(60):
        n = 1 + seed % 4
        xs = seeded_points(seed, n)
        ys = seeded_points(seed + 9999, n)
        cert = connect_tuple(xs, ys)
        cert.verify()
        for x, y in zip(xs, ys):
            assert cert.element.eval_zt(x) == y


def test_connect_tuple_bad_input():
    with pytest.raises(BadTuple):
        connect_tuple((TAU, T2), (T2,))
    with pytest.raises(BadTuple):
        connect_tuple((TAU, T2), (T2, TAU))     # not increasing
    with pytest.raises(BadTuple):
        connect_tuple((ZERO,), (TAU,))          # not inside (0, 1)


def test_connect_tuple_derived():
    cert = connect_tuple_derived((T2,), (T3,))
    cert.verify()
    assert cert.expr == "comm(l, f)"
    assert is_ftau_compact(cert.element)
    assert cert.element.eval_zt(T2) == T3
    same = connect_tuple_derived((TAU,), (TAU,))
    assert same.element.is_identity()


def test_connect_tuple_derived_seeded():
    for seed in range(20):
        n = 1 + seed % 3
        xs = seeded_points(seed, n)
        ys = seeded_points(seed + 4242, n)
        cert = connect_tuple_derived(xs, ys)
        cert.verify()
        assert is_ftau_compact(cert.element)


def test_proximal_shrink_interval():
    f = proximal_shrink((T2, TAU), (ZERO, T3))
    for s in (T2, TAU):
        img = f.eval_zt(s)
        assert img.sign() > 0 and (T3 - img).sign() > 0
    assert proximal_shrink((T2, T2 + tau_pow(5)), (T3, TAU)).is_identity()


def test_proximal_shrink_circle():
    f = proximal_shrink_circle((zt(1, -1), zt(0, 1)), (zt(0, 1), zt(1, 0) - tau_pow(4)))
    for s in (zt(1, -1), zt(0, 1)):
        img = f.eval_zt(s)
        assert arc_contains(zt(0, 1), zt(1) - tau_pow(4), img)
    # arc through 0: shrink [1-t^2, t^3] into (t^2, t)
    g = proximal_shrink_circle((ONE - T2, T3), (T2, TAU))
    for s in (ONE - T2, T3):
        assert arc_contains(T2, TAU, g.eval_zt(s))


def test_arc_helpers():
    assert arc_contains(T2, TAU, T2 + tau_pow(4))      # wrap-free
    assert arc_contains(TAU, T2, ZERO)                 # wraps through 0
    assert not arc_contains(TAU, T2, T2 + tau_pow(4))  # midpoint not in wrap arc
    assert arcs_disjoint((T3, T2), (TAU, TAU + T3))


def test_factor_local_rotation():
    cert = factor_local(CircleMap.rotation(TAU))
    cert.verify()
    assert cert.u * cert.v == CircleMap.rotation(TAU)
    assert cert.u.fixes_neighborhood_of(cert.x)
    for p in cert.pieces.values():
        assert p.fixes_neighborhood_of(cert.y)


def test_factor_local_torsion():
    from taut.circle import SubdivisionTree
    leaf = SubdivisionTree.leaf()
    tree = SubdivisionTree.split(SubdivisionTree.split(leaf, leaf), leaf)
    tor = CircleMap.from_tree_pair(tree, tree, 1)
    cert = factor_local(tor)
    cert.verify()


def test_factor_local_seeded():
    count = 0
    seed = 0
    while count < 8:
        g = random_element(seed, 4, "T_tau")
        seed += 1
        if g.is_identity():
            continue
        cert = factor_local(g)
        cert.verify()
        count += 1


def test_factor_local_identity_input():
    with pytest.raises(IdentityInput):
        factor_local(CircleMap.identity())


def test_commutator_trick():
    cert = commutator_trick(CircleMap.rotation(TAU), ZERO)
    cert.verify()
    assert not cert.result.is_identity()
    assert cert.result.fixes_neighborhood_of(ZERO)
    with pytest.raises(IdentityInput):
        commutator_trick(CircleMap.identity(), ZERO)


def test_commutator_trick_seeded():
    count = 0
    seed = 100
    while count < 50:
        g = random_element(seed, 4, "T_tau")
        seed += 1
        if g.is_identity():
            continue
        cert = commutator_trick(g, T2, seed=seed)
        cert.verify()     # includes re-evaluating the two-conjugates word
        count += 1


def test_defect_witness_family():
    w1 = defect_witness(1)
    assert w1.delta.sign() > 0 and (QTau(ONE) - w1.delta).sign() >= 0
    assert rot(w1.g).value == Fraction(0)
    assert rot(w1.h).value == Fraction(0)
    deltas = [defect_witness(n).delta for n in range(1, 6)]
    for a, b in zip(deltas, deltas[1:]):
        assert (b - a).sign() >= 0      # nondecreasing along the family
    w8 = defect_witness(8)
    assert (w8.delta - QTau(zt(9), 10)).sign() >= 0
    w8.verify()


def test_defect_witness_search():
    w = defect_witness_search(10, seed=5, size=3, max_den=64)
    assert w.delta.sign() >= 0
    assert (QTau(ONE) - w.delta).sign() >= 0
    w.verify(max_den=64)
    again = defect_witness_search(10, seed=5, size=3, max_den=64)
    assert again.delta == w.delta and again.g == w.g


def test_random_element_determinism_and_validity():
    a = random_element(123, 5, "T_tau")
    b = random_element(123, 5, "T_tau")
    assert a == b
    assert random_element(124, 5, "T_tau") != a
    f = random_element(9, 4, "F_tau")
    assert is_ftau(f)
    lf = random_element(10, 4, "Lift")
    assert isinstance(lf, LiftMap)
    for seed in range(200):
        g = random_element(seed, 1 + seed % 6, "T_tau")
        CircleMap.from_json(g.to_json())


def test_splitmix_reference_values():
    # first outputs for seed 0 of the standard splitmix64 stream
    rng = SplitMix64(0)
    assert rng.next64() == 0xE220A8397B1DCDAF
    assert rng.next64() == 0x6E789E6AA1B965F4


def test_points_between():
    lo, hi = T3, TAU
    pts = points_between(lo, hi, 3)
    prev = lo
    for p in pts:
        assert (p - prev).sign() > 0
        prev = p
    assert (hi - prev).sign() > 0
