"""Acceptance gate: one test per criterion, each printing a single PASS/FAIL line.

Run alone with `pytest tests/test_acceptance.py -s`. The default grid is swept twice through
the CLI (jobs 1 and 2); the grid-wide criteria read the first report.
"""

import json
import random
import time
from collections import Counter

import pytest

from formclass import classlevel, orders
from formclass.cli import main
from formclass.congruence import contained_in_gamma0, curated_family, not_gamma0_witness, gammaG, generated, lift, sl2_elements
from formclass.forms import act, coeff_x2, reduced_forms
from formclass.numtheory import is_squarefree, unit_subgroups
from formclass.sweep import SweepConfig, family
from oracles import act_by_substitution, class_number_by_definition, mat_mul

CFG = SweepConfig()
GRID = [(D, N) for D in CFG.discriminants for N in CFG.levels]
GROUP_CASES = sum(len(family(N, CFG)) for _, N in GRID)


@pytest.fixture(scope="module")
def runs(tmp_path_factory):
    root = tmp_path_factory.mktemp("verify")
    out = {}
    for jobs in (1, 2):
        t = time.perf_counter()
        code = main(["verify-all", "--config", "default", "--jobs", str(jobs), "--output", str(root / f"j{jobs}")])
        out[jobs] = (code, (root / f"j{jobs}" / "report.json").read_bytes(), time.perf_counter() - t)
    return out


@pytest.fixture(scope="module")
def report(runs):
    return json.loads(runs[1][1])


def records(report, check):
    return [c for c in report["cases"] if c["check"] == check]


def statuses(recs):
    return Counter(r["status"] for r in recs)


def test_c01_class_number_baselines(criterion):
    t = time.perf_counter()
    got = [len(reduced_forms(D)) for D in (-23, -47, -71)]
    elapsed = time.perf_counter() - t
    oracle = [class_number_by_definition(D) for D in (-23, -47, -71)]
    ok = got == oracle == [3, 5, 7] and elapsed < 1.0
    criterion(1, ok, f"h = {got}, oracle {oracle}, {elapsed * 1000:.1f} ms")


def test_c02_ray_class_bijection(criterion, runs, report):
    recs = records(report, "ray-class-bijection")
    st = statuses(recs)
    seconds = runs[1][2]
    ok = len(recs) == len(GRID) and st["pass"] == len(GRID) and seconds < 300
    ok = ok and all(r["detail"]["injective"] and r["detail"]["surjective"] for r in recs)
    ok = ok and all(r["detail"]["classes"] == r["detail"]["oracle"] == r["detail"]["formula"] for r in recs)
    criterion(2, ok, f"{st['pass']}/{len(GRID)} grid points, full sweep {seconds:.1f} s")


def test_c03_level_one_commutativity(criterion, report):
    recs = records(report, "level-one-commutativity")
    mism = sum(len(r["detail"]["mismatches"]) for r in recs)
    ok = len(recs) == len(GRID) and statuses(recs)["pass"] == len(GRID) and mism == 0
    criterion(3, ok, f"{len(recs)} grid points, {mism} mismatched classes")


def test_c04_action_criterion(criterion, report):
    recs = records(report, "action-criterion")
    mismatches = [r for r in recs if r["detail"]["acts"] != r["detail"]["criterion"]]
    negatives = [r for r in recs if not r["detail"]["criterion"]]
    witnessed = [r for r in negatives if r["detail"].get("case_witness", {}).get("verified")]
    ok = len(recs) == GROUP_CASES and not mismatches and len(witnessed) == len(negatives)
    ok = ok and statuses(recs)["pass"] == GROUP_CASES
    criterion(4, ok, f"{len(recs)} cases, {len(mismatches)} mismatches, {len(witnessed)}/{len(negatives)} witnesses verified")


def _random_form(rng):
    D = -rng.choice([d for d in range(3, 400) if d % 4 in (0, 3)])
    R = rng.choice(reduced_forms(D))
    return act(R, _random_sl2(rng))


def _random_sl2(rng):
    g = (1, 0, 0, 1)
    for _ in range(rng.randint(0, 6)):
        k = rng.randint(-4, 4)
        g = mat_mul(g, (1, k, 0, 1))
        g = mat_mul(g, (0, -1, 1, 0))
    return g


def test_c05_leading_coefficient_identity(criterion):
    rng = random.Random(20261016)
    bad = 0
    for _ in range(1000):
        Q, g = _random_form(rng), _random_sl2(rng)
        a2 = act(Q, g).a
        if not (coeff_x2(Q, g) == a2 == act_by_substitution(Q.astuple(), g)[0]):
            bad += 1
    criterion(5, bad == 0, f"1000 random (Q, gamma), {bad} disagreements")


def _random_group(rng, N):
    kind = rng.randrange(3)
    if kind == 0:
        return rng.choice(curated_family(N))
    if kind == 1:
        return gammaG(rng.choice(unit_subgroups(N)), N)
    elems = sl2_elements(N)
    return generated(N, [lift(rng.choice(elems), N) for _ in range(rng.randint(1, 2))])


def test_c06_gamma0_witness(criterion):
    rng = random.Random(6)
    done = bad = 0
    while done < 100:
        N = rng.randint(2, 12)
        G = _random_group(rng, N)
        Ms = [M for M in range(2, N + 1) if N % M == 0 and is_squarefree(M) and not contained_in_gamma0(G, M)]
        if not Ms:
            continue
        M = rng.choice(Ms)
        p, g = not_gamma0_witness(G, M)
        q, r, s, t = g
        reduced = tuple(x % N for x in g)
        ok = M % p == 0 and q % p == 0 and s % p != 0 and q * t - r * s == 1 and reduced in G.image.elements
        bad += not ok
        done += 1
    criterion(6, bad == 0, f"{done} random (Gamma, M), {bad} bad witnesses")


def test_c07_bottom_row_closure(criterion, report):
    recs = records(report, "bottom-row-closure")
    st = statuses(recs)
    na_explained = all(
        not (r["detail"]["acts"] and r["detail"]["induces"] and r["detail"]["minus_identity"])
        for r in recs
        if r["status"] == "not-applicable"
    )
    ok = len(recs) == GROUP_CASES and st["fail"] == 0 and st["pass"] > 0 and na_explained
    criterion(7, ok, f"{st['pass']} applicable cases pass, {st['fail']} fail, {st['not-applicable']} not applicable")


def test_c08_shadow_construction(criterion, report):
    recs = records(report, "shadow-construction")
    st = statuses(recs)
    derived = sum(r["detail"]["derived_induces"] for r in recs)
    ok = len(recs) == GROUP_CASES and st["pass"] == GROUP_CASES and derived == GROUP_CASES
    criterion(8, ok, f"{st['pass']}/{GROUP_CASES} cases, derived group induces in {derived}")


def test_c09_canonical_model_equivalence(criterion, report):
    recs = records(report, "canonical-model-equivalence")
    st = statuses(recs)
    na_explained = all(
        not (r["detail"]["hypothesis_acts"] and r["detail"]["hypothesis_disc"])
        for r in recs
        if r["status"] == "not-applicable"
    )
    ok = len(recs) == GROUP_CASES and st["fail"] == 0 and na_explained
    criterion(9, ok, f"{st['pass']} pass, {st['fail']} violations, {st['not-applicable']} reported not applicable")


def test_c10_leading_coefficient_subgroup(criterion, report):
    bad = []
    for D, N in GRID:
        lc = classlevel.leading_coefficient_subgroup(D, N)
        dK = orders.order_from_disc(D).dK
        want = 2 if N % dK == 0 else 1
        if lc.index != want or not classlevel.minus_one_check(D, N):
            bad.append((D, N))
    st = statuses(records(report, "leading-coefficient-subgroup"))
    ok = not bad and st["pass"] == len(GRID)
    criterion(10, ok, f"{len(GRID)} grid points, bad {bad}")


def test_c11_contraction(criterion):
    rows = []
    for D in (-60, -63):
        for N in (1, 2, 3, 4, 5):
            r = orders.contraction_check(D, N, samples=20)
            rows.append(r["multiplicative"] and r["class_consistent"] and r["bijective"] and r["samples"] == 20)
    criterion(11, all(rows), f"{sum(rows)}/{len(rows)} (D, N) pairs with 20 samples each")


def test_c12_determinism(criterion, runs):
    (c1, b1, t1), (c2, b2, t2) = runs[1], runs[2]
    ok = c1 == c2 == 0 and b1 == b2
    criterion(12, ok, f"jobs 1 vs 2: {len(b1)} bytes, identical={b1 == b2} ({t1:.0f} s, {t2:.0f} s)")
