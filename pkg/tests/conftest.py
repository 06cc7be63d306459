import math
import random

import pytest

from chromapprox import Graph, gen_er, gen_named

# Shared validation suite: 50 connected random graphs on 4..8 vertices
# plus the small named graphs every exact routine must agree on.
SUITE_BASE_SEED = 0xC0FFEE


def build_random_suite(count=50, n_lo=4, n_hi=8):
    rng = random.Random(SUITE_BASE_SEED)
    graphs = []
    for i in range(count):
        n = rng.randint(n_lo, n_hi)
        p = rng.uniform(0.3, 0.8)
        seed = rng.randrange(1 << 32)
        graphs.append((f"er{i}_n{n}", gen_er(n, p, seed)))
    return graphs


def named_suite():
    return [
        ("kite", gen_named("kite")),
        ("C5", gen_named("cycle", 5)),
        ("W6", gen_named("wheel", 6)),
        ("K5", gen_named("complete", 5)),
        ("P6", gen_named("path", 6)),
    ]


@pytest.fixture(scope="session")
def oracle_suite():
    return build_random_suite() + named_suite()


@pytest.fixture
def kite():
    return gen_named("kite")


def as_float(x):
    """LogNumber (or number) to float for approximate comparisons."""
    if hasattr(x, "sign"):
        if x.sign == 0:
            return 0.0
        return x.sign * math.exp(x.logmag)
    return float(x)


def rel_close(x, y, tol):
    a, b = as_float(x), as_float(y)
    if b == 0.0:
        return a == 0.0
    return abs(a - b) <= tol * abs(b)
