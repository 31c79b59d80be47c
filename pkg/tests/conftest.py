from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from infometric.instances import fix_bad, fix_p2, random_instance, random_nonmonotone_length
from infometric.monoid import random_submonoid
from infometric.setmodel import random_set_instance

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

seeds = st.integers(min_value=0, max_value=2**31 - 1)


@st.composite
def monoids(draw, max_generators=3):
    g = draw(st.integers(1, max_generators))
    keep = draw(st.integers(1, 2**g))
    return random_submonoid(g, keep, draw(seeds))


@st.composite
def monotone_instances(draw, max_elements=8):
    return random_instance(draw(seeds), max_elements)


@st.composite
def nonmonotone_instances(draw):
    m = draw(monoids())
    return m, random_nonmonotone_length(m, draw(seeds))


@st.composite
def set_instances(draw, max_points=5):
    return random_set_instance(draw(seeds), max_points=max_points)


@st.composite
def rational_tables(draw, m, max_value=6):
    """Positive symmetric nilpotent table with small integer entries."""
    n = len(m)
    vals = draw(st.lists(st.integers(0, max_value), min_size=n * n, max_size=n * n))
    A = np.array(vals, dtype=object).reshape(n, n)
    T = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            T[i, j] = Fraction(0) if i == j else Fraction(A[min(i, j), max(i, j)])
    return T


@pytest.fixture
def p2():
    return fix_p2()


@pytest.fixture
def bad():
    return fix_bad()
