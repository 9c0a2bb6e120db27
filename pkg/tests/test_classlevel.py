import math
import random

import pytest

from formclass import matrices as mx
from formclass.classlevel import (
    enumerate_classes,
    gamma_equivalent,
    group_table,
    ideal_level1_class,
    leading_coefficient_subgroup,
    minus_one_check,
    rho,
    surject_level1,
    to_json,
)
from formclass.congruence import curated_family, full_sl2, gamma0_image, gamma1, lift
from formclass.forms import QuadForm, act, reduced_forms
from formclass.orders import class_equal, order_from_disc, ray_class_number_formula, ray_class_oracle

GRID_D = [-15, -20, -23, -24, -40, -52, -56, -60, -63]


def test_enumerate_examples():
    L = enumerate_classes(-23, 1, full_sl2(1))
    assert set(L.reps) == {QuadForm(1, 1, 6), QuadForm(2, 1, 3), QuadForm(2, -1, 3)}
    assert len(enumerate_classes(-15, 2, gamma1(2))) == 2
    assert len(enumerate_classes(-20, 3, gamma1(3))) == 4


def test_enumerate_label_follows_group():
    G = gamma0_image(1, 3)
    assert enumerate_classes(-20, 3, full_sl2(3)).group.label == "sl2:3"
    assert enumerate_classes(-20, 3, G).group.label == "gamma0:1@3"


def test_gamma_equivalent_examples():
    assert gamma_equivalent(QuadForm(1, 1, 4), QuadForm(1, 3, 6), gamma1(2)) == (1, 1, 0, 1)
    assert gamma_equivalent(QuadForm(2, 1, 3), QuadForm(2, -1, 3), full_sl2(1)) is None
    assert gamma_equivalent(QuadForm(1, 1, 4), QuadForm(1, 1, 4), gamma1(7)) == mx.IDENTITY


@pytest.mark.parametrize("D", [-3, -4, -15, -23])
@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_gamma_equivalent_witness(D, N):
    rnd = random.Random(D * N)
    for G in curated_family(N):
        for _ in range(5):
            R = rnd.choice(reduced_forms(D))
            Q = act(R, lift(rnd.choice(G.image.sorted_elements()), N))
            Q = act(Q, (1, rnd.randint(-3, 3), 0, 1))
            h = lift(rnd.choice(G.image.sorted_elements()), N)
            Q2 = act(Q, h)
            w = gamma_equivalent(Q, Q2, G)
            assert w is not None and act(Q, w) == Q2 and w[0] * w[3] - w[1] * w[2] == 1


def test_group_table_examples():
    t = group_table(-15, 2)
    assert t.order == 2 and t.invariant_factors == [2]
    t = group_table(-23, 1)
    assert t.order == 3 and t.invariant_factors == [3]
    t = group_table(-20, 3)
    o = ray_class_oracle(order_from_disc(-20), 3)
    assert t.order == o.order == 4 and t.invariant_factors == o.invariant_factors
    # order-preserving bijection through class_equal
    match = {i: next(j for j, E in enumerate(o.elements) if class_equal(I, E, 3)) for i, I in enumerate(t.elements)}
    assert sorted(match.values()) == list(range(4))
    assert all(match[t.mul(i, j)] == o.mul(match[i], match[j]) for i in range(4) for j in range(4))


@pytest.mark.parametrize("D", GRID_D)
@pytest.mark.parametrize("N", [1, 2, 3, 4, 5, 6])
def test_ray_class_bijection(D, N):
    L = enumerate_classes(D, N)
    assert len(L) == ray_class_number_formula(order_from_disc(D), N)
    t = group_table(D, N)
    assert not t.axiom_failures()
    assert t.labels[t.identity] == reduced_forms(D)[0]
    assert all(math.gcd(Q.a, N) == 1 for Q in L.reps)


@pytest.mark.parametrize("D,N", [(-15, 4), (-20, 3), (-23, 5), (-3, 3), (-4, 5)])
def test_rho_well_defined(D, N):
    rnd = random.Random(N)
    for Q in enumerate_classes(D, N).reps:
        for _ in range(4):
            g = lift(rnd.choice(gamma1(N).image.sorted_elements()), N)
            g = mx.mul(g, (1, 0, N * rnd.randint(-2, 2), 1))
            assert class_equal(rho(Q), rho(act(Q, g)), N)


def test_surject_level1_examples():
    m = surject_level1(enumerate_classes(-15, 2))
    assert sorted(set(m.values())) == list(reduced_forms(-15)) and len(m) == 2
    m = surject_level1(enumerate_classes(-20, 3))
    fibers = [sum(1 for v in m.values() if v == R) for R in reduced_forms(-20)]
    assert fibers == [2, 2]
    m = surject_level1(enumerate_classes(-23, 1, full_sl2(1)))
    assert all(k == v for k, v in m.items())


@pytest.mark.parametrize("D", GRID_D)
@pytest.mark.parametrize("N", [2, 3, 6])
def test_level_one_map_matches_ideals(D, N):
    L = enumerate_classes(D, N)
    m = surject_level1(L)
    assert all(m[Q] == ideal_level1_class(Q) for Q in L.reps)


def test_leading_coefficients_examples():
    lc = leading_coefficient_subgroup(-20, 5)
    assert lc.subgroup == {1, 2, 3, 4} and lc.index == 1
    lc = leading_coefficient_subgroup(-4, 4)
    assert lc.subgroup == {1} and lc.index == 2 and lc.dK_divides_N
    assert leading_coefficient_subgroup(-23, 1).index == 1


@pytest.mark.parametrize("D", [-3, -4, -7, -8, -15, -16, -20, -24, -36, -60])
@pytest.mark.parametrize("N", range(1, 25))
def test_leading_coefficient_index(D, N):
    lc = leading_coefficient_subgroup(D, N)
    assert lc.closed
    assert lc.index in (1, 2)
    assert (lc.index == 2) == (N > 1 and lc.dK_divides_N)
    assert lc.subgroup == lc.character_kernel
    assert minus_one_check(D, N)


def test_minus_one_examples():
    assert minus_one_check(-4, 5)
    assert minus_one_check(-15, 13)
    assert minus_one_check(-20, 2)


def test_json_shape():
    j = to_json(enumerate_classes(-15, 2), group_table(-15, 2))
    assert len(j["classes"]) == 2 and j["classes"][0] == [1, 1, 4]
    assert all(c[0] % 2 == 1 for c in j["classes"])
    assert set(j) == {"disc", "level", "group", "classes", "table", "identity", "invariant_factors"}
