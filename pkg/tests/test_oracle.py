import random

import pytest

from parorbit.oracle import (BudgetExceeded, brute_force_orbits, enumerate_orbits, group_elements, partitions,
                             random_group_element, target_size)
from parorbit.parabolic import compositions, contains, shape_of


def test_partitions():
    assert [len(partitions(n)) for n in range(1, 8)] == [1, 2, 3, 5, 7, 11, 15]


@pytest.mark.parametrize("bv", [c.blocks for n in (1, 2, 3) for c in compositions(n)])
@pytest.mark.parametrize("q", [2, 3])
def test_fiber_method_matches_brute_force(bv, q):
    tab = enumerate_orbits(bv, q)
    brute = brute_force_orbits(bv, q)
    assert tab.orbit_count == len(brute)
    assert sorted(tab.orbit_sizes) == sorted(len(o) for o in brute)
    # every representative lies in a distinct brute-force orbit
    hits = [next(i for i, o in enumerate(brute) if r in o) for r in tab.representatives]
    assert len(set(hits)) == len(hits)


@pytest.mark.parametrize("bv,target,acting", [((1, 1, 1), "nilradical", "L"), ((2, 2), "cone", "L"),
                                              ((1, 2), "cone_x", "P"), ((2, 1), "nilradical", "P")])
def test_other_targets_match_brute_force(bv, target, acting):
    x = 1 if target == "cone_x" else None
    tab = enumerate_orbits(bv, 2, target, acting, x)
    brute = brute_force_orbits(bv, 2, target, acting, x)
    assert tab.orbit_count == len(brute)
    assert tab.target_size == sum(len(o) for o in brute)


def test_known_counts():
    # nilpotent GL_n classes = partitions
    assert enumerate_orbits((4,), 3).orbit_count == 5
    # Borel of GL_2 on its cone: zero and E12
    assert enumerate_orbits((1, 1), 2).orbit_count == 2


def test_group_and_sizes():
    assert len(group_elements((1, 1), 2)) == 2
    assert len(group_elements((2,), 3)) == 48
    g = random_group_element((1, 2), 5, rng=random.Random(1))
    assert contains(shape_of((1, 2)), g) and g.is_invertible()
    assert target_size(shape_of((2,)), 2, "cone") == 4


def test_budget():
    with pytest.raises(BudgetExceeded):
        enumerate_orbits((1, 1, 1, 1), 5, budget=100)


def test_threads_same_answer():
    a = enumerate_orbits((1, 2, 1), 2, threads=1)
    b = enumerate_orbits((1, 2, 1), 2, threads=4)
    assert a.to_json() == b.to_json()


@pytest.mark.parametrize("bv", [(1, 2), (2, 1), (1, 1, 1)])
def test_representatives_are_lex_minimal_in_normal_fiber(bv):
    # representative = lex-least orbit element whose diagonal blocks are the fixed Jordan matrices
    from parorbit.oracle import lex_key
    shape = shape_of(bv)

    def diag(m):
        return tuple(m[i, j] for b in range(shape.bv.p) for i in shape.block_range(b) for j in shape.block_range(b))

    brute = brute_force_orbits(bv, 3)
    for r in enumerate_orbits(bv, 3).representatives:
        orbit = next(o for o in brute if r in o)
        assert lex_key(r) == min(lex_key(m) for m in orbit if diag(m) == diag(r))


def test_growth_profile_signals():
    from parorbit.oracle import growth_profile
    assert growth_profile((1, 1), "cone", "P", (2, 3, 5))["signal"] == "constant"
    assert growth_profile((1, 1, 1), "nilradical", "L", (2, 3, 5))["signal"] == "strictly_increasing"
    assert growth_profile((2, 2), "cone", "L", (2, 3))["signal"] == "strictly_increasing"
