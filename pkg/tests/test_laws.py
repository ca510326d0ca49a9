import random

import pytest
from hypothesis import given, settings, strategies as st

from polyrun import cofree as C
from polyrun import free as F
from polyrun import laws
from polyrun.interaction import xi
from polyrun.poly import iso_unitor_associator, random_polynomial


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_all_suites_pass(seed):
    results = laws.run_all(seed, samples=40)
    assert len(results) == 16
    assert all(r.passed for r in results), [r.line() for r in results if not r.passed]


def test_corrupted_graft_is_caught():
    results = {r.name: r for r in laws.run_all(0, samples=40, graft_impl=laws.corrupted_graft)}
    assert not results["free.associativity"].passed
    assert not results["lottery.fold_commutes_with_graft"].passed
    assert results["cofree.left_counit"].passed
    assert results["free.associativity"].first_failure.startswith("case ")


def test_suite_line_format():
    r = laws.SuiteResult("x", 10, 1, 3, "case 4")
    assert not r.passed
    assert r.line() == "FAIL x: 9/10 (seed 3)  first failure: case 4"
    assert not laws.SuiteResult("empty", 0, 0, 0).passed


def nonzero_poly(rng, n=3):
    while True:
        p = random_polynomial(rng, n, n)
        if len(p):
            return p


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_module_associativity_property(seed):
    rng = random.Random(seed)
    p, q, r = nonzero_poly(rng), nonzero_poly(rng), nonzero_poly(rng)
    t = F.random_tree(rng, p, 3, ("a", "b"))
    b1, b2 = C.random_behavior(rng, q, 3), C.random_behavior(rng, r, 3)
    back = iso_unitor_associator("tensor_associator", p, q, r).backward
    assert F.tree_equal(F.map_tree(back, xi(t, C.laxator(b1, b2))), xi(xi(t, b1), b2))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_counit_laws_property(seed):
    rng = random.Random(seed)
    b = C.random_behavior(rng, nonzero_poly(rng, 4), 4)
    d = C.duplicate(b)
    assert C.bisimilar(C.counit(d), b, 4)
    assert C.bisimilar(C.map_behavior(C.cofree_counit_map(b.carrier), d), b, 4)
