"""Seeded random workloads shared by the property and acceptance tests."""

import numpy as np

from ropdb.generators import random_instance


def random_workload(seed: int):
    """One random query/instance with at most 4 relations, arity at most 3
    and at most 30 tuples."""
    rng = np.random.default_rng(10_000 + seed)
    k = int(rng.integers(2, 5))
    arity = int(rng.integers(1, 4))
    rows = 30 // k
    domain = int(rng.integers(2, 4))
    return random_instance(k=k, arity=arity, rows=rows, domain=domain, seed=seed)


def workloads(count: int):
    for seed in range(count):
        inst, q = random_workload(seed)
        yield seed, inst, q
