"""Shared fixtures.

The heavy Monte Carlo runs are session-scoped so that the acceptance
tests and the module-level property tests reuse the same replication
records instead of re-simulating.
"""

import time

import numpy as np
import pytest

from netpeer import graph as graphmod, sampling
from netpeer.model import ModelParams
from netpeer.montecarlo import ExperimentCell, run_cell

MASTER_SEED = 20260826
PARAMS = ModelParams(beta0=0.0, beta1=1.0, beta2=1.5, sigma2_eps=1.0)

# wall-clock seconds for each heavy fixture, keyed by fixture name
RUNTIMES = {}


def _timed_run(name, cell):
    start = time.perf_counter()
    report, records = run_cell(cell)
    RUNTIMES[name] = time.perf_counter() - start
    return cell, report, records


def _cell(n_pop, fraction, reps):
    return ExperimentCell(
        n_pop=n_pop,
        density=0.01,
        fraction=fraction,
        params=PARAMS,
        x_mean=3.0,
        x_sd=1.5,
        reps=reps,
        level=0.95,
        master_seed=MASTER_SEED,
    )


@pytest.fixture(scope="session")
def cell_small_f20():
    """N=10^3, p=1%, f=20%, 2000 reps."""
    return _timed_run("cell_small_f20", _cell(1000, 0.2, 2000))


@pytest.fixture(scope="session")
def cell_small_f80():
    """N=10^3, p=1%, f=80%, 2000 reps."""
    return _timed_run("cell_small_f80", _cell(1000, 0.8, 2000))


@pytest.fixture(scope="session")
def cell_large_f20():
    """N=10^4, p=1%, f=20%, 500 reps."""
    return _timed_run("cell_large_f20", _cell(10000, 0.2, 500))


@pytest.fixture(scope="session")
def cell_large_f80():
    """N=10^4, p=1%, f=80%, 500 reps."""
    return _timed_run("cell_large_f80", _cell(10000, 0.8, 500))


@pytest.fixture(scope="session")
def w_hat_sweep():
    """Mean scaling factor over 200 seeds at N=10^4 for f in {0.2, 0.5, 0.8}."""
    n_pop = 10_000
    out = {}
    for f in (0.2, 0.5, 0.8):
        n = sampling.sample_size(n_pop, f)
        vals = []
        for seed in range(200):
            rng = np.random.default_rng((MASTER_SEED, seed))
            g = graphmod.generate_er(n_pop, 0.01, rng)
            s = sampling.rns_sample(g, n, rng)
            vals.append(sampling.scaling_factor(s))
        out[f] = float(np.mean(vals))
    return out
