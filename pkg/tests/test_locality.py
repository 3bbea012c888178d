import random
from fractions import Fraction
from itertools import product as iproduct

import pytest

from nsbox.boxes import Box, BoxShape, ShapeError, mix
from nsbox.dd import EnumerationCapError
from nsbox.families import (dbox, local_deterministic, pr, svetlichny_box,
                            two_way_vertex, uniform, xyplusz, xyz_box)
from nsbox.locality import (chsh, chsh_functional, convex_membership,
                            correlator, enumerate_local_strategies,
                            enumerate_twoway_strategies, evaluate_functional,
                            is_local, is_two_way_local, svetlichny,
                            svetlichny_functional)

CHSH_SHAPE = BoxShape.homogeneous(2, 2, 2)


def test_correlator_values():
    assert correlator(pr(), (0, 0)) == 1
    assert correlator(pr(), (1, 1)) == -1
    assert correlator(uniform(CHSH_SHAPE), (0, 1)) == 0
    with pytest.raises(ShapeError):
        correlator(dbox(3), (0, 0))


def test_chsh_on_the_pr_family():
    for alpha, beta, gamma in iproduct(range(2), repeat=3):
        box = pr(alpha, beta, gamma)
        for a2, b2, g2 in iproduct(range(2), repeat=3):
            value = chsh(box, a2, b2, g2)
            if (a2, b2, g2) == (alpha, beta, gamma):
                assert value == 4
            elif (a2, b2) == (alpha, beta):
                assert value == -4
            else:
                assert value == 0


def test_chsh_on_deterministic_points():
    for bits in iproduct(range(2), repeat=4):
        value = chsh(local_deterministic(*bits))
        assert value in (-2, 2)


def test_chsh_functional_matches_chsh():
    rng = random.Random(7)
    for _ in range(10):
        table = _random_box_table(rng)
        box = Box(CHSH_SHAPE, table)
        f = chsh_functional(1, 0, 1)
        assert evaluate_functional(box, f) == chsh(box, 1, 0, 1)
    assert chsh_functional().local_bound == 2
    assert chsh_functional().algebraic_max == 4


def _random_box_table(rng):
    """A valid (generally signalling-free) random table: mix vertices."""
    from nsbox.polytope import build_hrep, enumerate_vertices
    verts = enumerate_vertices(build_hrep(CHSH_SHAPE)).vertices
    picks = rng.sample(range(len(verts)), 3)
    w = [Fraction(rng.randint(1, 5)) for _ in picks]
    s = sum(w)
    table = [Fraction(0)] * CHSH_SHAPE.table_size
    for wi, j in zip(w, picks):
        for i, v in enumerate(verts[j].table):
            table[i] += wi / s * v
    return tuple(table)


def test_pr_box_is_not_local():
    res = is_local(pr())
    assert not res
    assert res.value == 4
    assert res.threshold == 2
    strategies = enumerate_local_strategies(CHSH_SHAPE)
    assert res.verify(pr(), strategies)


def test_local_deterministic_boxes_are_local():
    for bits in iproduct(range(2), repeat=4):
        res = is_local(local_deterministic(*bits))
        assert res
        assert len(res.strategies) == 1
        assert res.weights == (Fraction(1),)


def test_isotropic_mixture_crossover():
    u = uniform(CHSH_SHAPE)
    for w, expect_local in ((Fraction(1, 4), True), (Fraction(1, 2), True),
                            (Fraction(51, 100), False), (Fraction(3, 4), False)):
        box = mix(pr(), u, w)
        res = is_local(box)
        assert bool(res) == expect_local
        if expect_local:
            assert res.verify(box)
        else:
            assert res.value > res.threshold


def test_every_result_is_verified_on_random_boxes():
    rng = random.Random(41)
    strategies = enumerate_local_strategies(CHSH_SHAPE)
    for _ in range(12):
        box = Box(CHSH_SHAPE, _random_box_table(rng))
        res = is_local(box)
        if res:
            assert res.verify(box)
        else:
            assert res.verify(box, strategies)


def test_convex_membership():
    dets = [s.box() for s in enumerate_local_strategies(CHSH_SHAPE)]
    weights = convex_membership(uniform(CHSH_SHAPE), dets)
    assert weights is not None
    assert sum(weights.values()) == 1
    assert convex_membership(pr(), dets) is None
    with pytest.raises(ShapeError):
        convex_membership(dbox(3), dets)


def test_strategy_cap():
    with pytest.raises(EnumerationCapError):
        enumerate_local_strategies(CHSH_SHAPE, cap=10)
    with pytest.raises(EnumerationCapError):
        enumerate_twoway_strategies(BoxShape.homogeneous(3, 2, 2), cap=100)
    with pytest.raises(ShapeError):
        enumerate_twoway_strategies(CHSH_SHAPE)


def test_svetlichny_values():
    assert svetlichny(svetlichny_box()) == 8
    assert svetlichny(xyz_box()) == 6
    assert svetlichny(xyplusz()) == 4
    assert svetlichny(two_way_vertex()) == 4
    with pytest.raises(ShapeError):
        svetlichny(pr())


def test_svetlichny_bound_is_tight_over_bipartition_strategies():
    shape = BoxShape.homogeneous(3, 2, 2)
    f = svetlichny_functional()
    best = max(evaluate_functional(s.box(), f)
               for s in enumerate_twoway_strategies(shape))
    assert best == f.local_bound == 4
    assert f.algebraic_max == 8


def test_two_way_vertex_has_a_bipartition_model():
    res = is_two_way_local(two_way_vertex())
    assert res
    assert res.verify(two_way_vertex())


def test_genuinely_multipartite_boxes_are_caught():
    shape = BoxShape.homogeneous(3, 2, 2)
    strategies = enumerate_twoway_strategies(shape)
    for box in (xyplusz(), svetlichny_box()):
        res = is_two_way_local(box)
        assert not res
        assert res.verify(box, strategies)
        assert res.value > res.threshold


def test_local_implies_two_way_local():
    from nsbox.locality import DeterministicStrategy
    shape = BoxShape.homogeneous(3, 2, 2)
    det = DeterministicStrategy(shape, ((0, 1), (1, 1), (0, 0))).box()
    other = DeterministicStrategy(shape, ((1, 0), (0, 0), (1, 1))).box()
    assert is_local(det)
    assert is_two_way_local(det)
    blend = mix(det, other, Fraction(1, 3))
    assert is_local(blend)
    assert is_two_way_local(blend)
