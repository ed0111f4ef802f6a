"""Shared fixtures: the standard complex zoo used across the test suite."""

import pytest

from simhodge import (barycentric_refinement, generate, skeleton,
                      whitney_complex)


def k3_whitney():
    return whitney_complex(range(3), [(0, 1), (1, 2), (0, 2)])


def build_suite() -> dict:
    """Named complexes: families, the 1-skeleton circle, seeded random ones,
    and barycentric refinements of everything with at most 12 simplices."""
    named = {}
    for n in range(1, 6):
        named[f"simplex{n}"] = generate("simplex", n)
    for n in range(4, 9):
        named[f"cycle{n}"] = generate("cycle", n)
    named["path5"] = generate("path", 5)
    named["star3"] = generate("star", 3)
    for n in (4, 5, 6):
        named[f"wheel{n}"] = generate("wheel", n)
    named["octahedron"] = generate("octahedron")
    named["circle3"] = skeleton(k3_whitney(), 1)
    for s in range(20):
        named[f"random{s}"] = generate("random", 8, seed=s, edge_prob=0.45)
    for key, value in list(named.items()):
        if len(value) <= 12:
            named[f"refined_{key}"] = barycentric_refinement(value)
    return named


@pytest.fixture(scope="session")
def suite():
    return build_suite()


@pytest.fixture(scope="session")
def k3():
    return k3_whitney()


@pytest.fixture(scope="session")
def c4():
    return generate("cycle", 4)
