import math

import pytest

from formclass.classlevel import group_table
from formclass.congruence import curated_family, full_sl2, gamma0_image, gamma1, generated, member, parse_group
from formclass.errors import NoWitnessError
from formclass.forms import QuadForm, coeff_x2, in_level
from formclass.induction import (
    action_modulus,
    acts,
    acts_criterion,
    counterexample,
    induces,
    level1_kernel,
    witness_form,
)
from formclass.numtheory import kronecker

GRID_D = [-15, -20, -23, -24, -40, -52, -56, -60, -63]


def test_action_modulus_examples():
    assert action_modulus(-15, 2) == 2
    assert action_modulus(-20, 11) == 1
    assert action_modulus(-23, 1) == 1
    assert action_modulus(-20, 30) == 30  # 2 and 5 ramify, -20 = 1 mod 3 splits


def test_acts_examples():
    v = acts(full_sl2(2), -15, 2)
    assert not v.acts and v.form == QuadForm(1, 1, 4) and v.matrix == (0, -1, 1, 0)
    assert v.to_json()["witness"]["new_leading_coefficient"] == 4
    assert acts(gamma0_image(2, 2), -15, 2).acts
    assert acts(full_sl2(1), -15, 1).acts


def test_acts_criterion_examples():
    assert acts_criterion(gamma1(2), -15, 2)
    assert not acts_criterion(full_sl2(2), -15, 2)
    assert acts_criterion(gamma1(11), -20, 11)


@pytest.mark.parametrize("D", GRID_D + [-3, -4, -7, -8])
@pytest.mark.parametrize("N", range(1, 9))
def test_acts_equals_criterion(D, N):
    for G in curated_family(N):
        v = acts(G, D, N)
        assert v.acts == acts_criterion(G, D, N), (D, N, G.label)
        if not v.acts:
            assert member(G, v.matrix) and in_level(v.form, N)
            assert math.gcd(coeff_x2(v.form, v.matrix), N) > 1
            Q, gamma = counterexample(G, D, N)
            assert member(G, gamma) and in_level(Q, N) and Q.disc == D
            assert math.gcd(coeff_x2(Q, gamma), N) > 1


@pytest.mark.parametrize("D", [-3, -4, -7, -8, -15, -20, -24, -39, -40, -56, -84, -120])
def test_witness_form_cases(D):
    for p in (2, 3, 5, 7, 11, 13):
        if kronecker(D, p) == -1:
            with pytest.raises(NoWitnessError):
                witness_form(D, p)
            continue
        Q = witness_form(D, p)
        assert Q.disc == D and Q.a == 1 and Q.c % p == 0


def test_induces_examples():
    v = induces(gamma1(3), -20, 3)
    assert v.induces and len(v.H) == 1
    v = induces(full_sl2(3), -20, 3)
    assert v.induces and sorted(v.H) == level1_kernel(-20, 3)
    assert len(v.H) == group_table(-20, 3).order // 2
    assert induces(gamma0_image(2, 2), -15, 2).induces


@pytest.mark.parametrize("D", GRID_D + [-3, -4])
@pytest.mark.parametrize("N", range(1, 7))
def test_gamma1_and_sl2_induce(D, N):
    v = induces(gamma1(N), D, N)
    assert v.induces and len(v.H) == 1
    assert v.flagged == (D in (-3, -4))
    v = induces(full_sl2(N), D, N)
    assert v.induces and sorted(v.H) == level1_kernel(D, N)


@pytest.mark.parametrize("D", GRID_D)
@pytest.mark.parametrize("N", range(1, 7))
def test_induce_verdict_consistency(D, N):
    t = group_table(D, N)
    for G in curated_family(N):
        v = induces(G, D, N)
        assert sorted(i for f in v.fibers for i in f) == list(range(t.order))
        if v.induces:
            assert t.is_subgroup(v.H)
            assert all(t.coset(f[0], v.H) == frozenset(f) for f in v.fibers)


def test_exotic_groups_are_reported():
    # <Gamma_1(5), S> is all of SL2 mod 5; the verdict is recorded either way
    G = generated(5, [(0, -1, 1, 0)])
    assert G == full_sl2(5)
    v = induces(parse_group("gens:6:[[1,0,3,1]]"), -23, 6)
    assert v.to_json()["induces"] in (True, False)


def test_level_mismatch():
    with pytest.raises(ValueError):
        acts(gamma1(3), -15, 2)
    with pytest.raises(ValueError):
        induces(gamma1(3), -15, 2)
