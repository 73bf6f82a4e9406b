"""Shared fixtures: the four reference domains and a build cache.

Maps are expensive enough at level 6 that tests share them through a
session-scoped cache keyed by (domain name, level, shift).
"""

from __future__ import annotations

import pytest

from discmap import build_grid, build_map, load_domain, normalize_origin

DOMAIN_SPECS = {
    "disc": {"type": "disc", "center": [0.0, 0.0], "radius": 1.0},
    "offset_disc": {"type": "disc", "center": [0.3, 0.0], "radius": 1.0},
    "square": {
        "type": "polygon",
        "vertices": [[-0.5, -0.5], [0.5, -0.5], [0.5, 0.5], [-0.5, 0.5]],
    },
    "ell": {
        "type": "polygon",
        "vertices": [[0, 0], [2, 0], [2, 1], [1, 1], [1, 2], [0, 2]],
    },
}

DOMAIN_NAMES = tuple(DOMAIN_SPECS)


@pytest.fixture(scope="session")
def domains():
    return {
        name: normalize_origin(load_domain(spec))
        for name, spec in DOMAIN_SPECS.items()
    }


@pytest.fixture(scope="session")
def grid_for(domains):
    cache = {}

    def get(name, level, shift=0.0):
        key = (name, level, shift)
        if key not in cache:
            cache[key] = build_grid(domains[name], level, shift)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def map_for(domains):
    cache = {}

    def get(name, level, shift=0.0):
        key = (name, level, shift)
        if key not in cache:
            cache[key] = build_map(domains[name], level, shift=shift)
        return cache[key]

    return get
