"""Parity of the compiled geometry core with the pure-Python fallback."""

import random

import pytest

from setlattice import _geom_py
from setlattice.backend import available_impls


def random_facets(rng, m):
    out = []
    for _ in range(m):
        a, b = 0, 0
        while (a, b) == (0, 0):
            a, b = rng.randint(-4, 4), rng.randint(-4, 4)
        out.append(_geom_py.reduce_facet(a, b, rng.randint(-9, 9), rng.randint(1, 4)))
    return out


compiled = available_impls().get("cython")
needs_ext = pytest.mark.skipif(compiled is None, reason="compiled core not built")


@needs_ext
def test_parity_on_random_systems():
    rng = random.Random(1234)
    for _ in range(1500):
        facets = random_facets(rng, rng.randint(1, 8))
        res_py = _geom_py.vrep_from_hrep(facets)
        res_cy = compiled.vrep_from_hrep(facets)
        assert res_py == res_cy
        ok, pts, rays = res_py
        if not ok:
            continue
        h_py = _geom_py.hrep_from_vrep(pts, rays)
        h_cy = compiled.hrep_from_vrep(pts, rays)
        assert h_py == h_cy
        assert _geom_py.vrep_from_hrep(h_py) == compiled.vrep_from_hrep(h_cy)


@needs_ext
def test_parity_on_generator_hulls():
    rng = random.Random(99)
    for _ in range(800):
        pts = [
            (rng.randint(-6, 6), rng.randint(-6, 6), rng.randint(1, 3))
            for _ in range(rng.randint(1, 6))
        ]
        rays = []
        for _ in range(rng.randint(0, 3)):
            r = (rng.randint(-3, 3), rng.randint(-3, 3))
            if r != (0, 0):
                rays.append(r)
        assert _geom_py.hrep_from_vrep(pts, rays) == compiled.hrep_from_vrep(pts, rays)


@needs_ext
def test_parity_containment():
    rng = random.Random(5)
    for _ in range(500):
        facets = random_facets(rng, rng.randint(1, 6))
        ok, pts, rays = _geom_py.vrep_from_hrep(facets)
        probe = random_facets(rng, 2)
        assert _geom_py.vrep_inside_hrep(pts, rays, probe) == compiled.vrep_inside_hrep(
            pts, rays, probe
        )


def test_big_integer_exactness():
    """Huge coordinates must stay exact in whichever backend is active."""
    from setlattice.backend import hrep_from_vrep, vrep_from_hrep

    big = 10**40
    facets = [
        _geom_py.reduce_facet(-1, 0, -big, 1),
        _geom_py.reduce_facet(0, -1, -(big + 1), 3),
    ]
    ok, pts, rays = vrep_from_hrep(facets)
    assert ok
    assert hrep_from_vrep(pts, rays) == sorted(facets)
