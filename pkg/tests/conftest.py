import time

import pytest

from flatfoliate.toruslab import (
    boundary_crossings,
    euler_estimate,
    standard_rotation_pair,
)


@pytest.fixture(scope="session")
def torus_run():
    """Cached pipeline runs keyed by box size.

    Returns (data, report, seconds); each size is computed once per
    session so the slow sizes are shared between the unit tests and the
    acceptance sweep.
    """
    cache: dict = {}

    def run(L: int):
        if L not in cache:
            start = time.perf_counter()
            data = boundary_crossings(standard_rotation_pair(), L)
            report = euler_estimate(data)
            cache[L] = (data, report, time.perf_counter() - start)
        return cache[L]

    return run
