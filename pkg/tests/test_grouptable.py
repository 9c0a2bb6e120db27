import pytest

from formclass.grouptable import ClassGroupTable


def cyclic_product(*ns):
    elems = [()]
    for n in ns:
        elems = [e + (k,) for e in elems for k in range(n)]
    idx = {e: i for i, e in enumerate(elems)}
    table = [[idx[tuple((x + y) % n for x, y, n in zip(a, b, ns))] for b in elems] for a in elems]
    return ClassGroupTable(elems, table)


@pytest.mark.parametrize(
    "ns,want",
    [((1,), []), ((2,), [2]), ((4,), [4]), ((2, 2), [2, 2]), ((2, 3), [6]), ((4, 6), [2, 12]), ((2, 2, 4), [2, 2, 4])],
)
def test_invariant_factors(ns, want):
    t = cyclic_product(*ns)
    assert t.invariant_factors == want
    assert not t.axiom_failures()


def test_axiom_failures_detected():
    t = ClassGroupTable([0, 1], [[0, 1], [1, 1]])
    assert t.axiom_failures()
    t = ClassGroupTable([0, 1, 2], [[0, 1, 2], [1, 0, 2], [2, 1, 0]])
    assert t.axiom_failures()


def test_subgroups_and_cosets():
    t = cyclic_product(6)
    assert t.is_subgroup([0, 3]) and not t.is_subgroup([0, 1])
    assert t.coset(1, [0, 3]) == frozenset({1, 4})
    assert t.element_order(2) == 3 and t.inverse(2) == 4 and t.power(2, 2) == 4


def test_json():
    j = cyclic_product(2).to_json()
    assert j == {"order": 2, "identity": 0, "table": [[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]], "invariant_factors": [2]}
