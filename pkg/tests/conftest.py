import numpy as np
import pytest

from idr import SolverConfig, SynthSpec, generate, solve_idr


@pytest.fixture(scope="session")
def default_clean_run():
    """One converged solve on the default clean instance, shared by the
    structure/feasibility/convergence criteria."""
    X, truth = generate(SynthSpec(seed=0))
    out = solve_idr(X, SolverConfig(gamma=0.05, lam=0.05, k=5))
    return X, truth, out


@pytest.fixture(scope="session")
def small_clean_run():
    """Converged solve on a small clean instance (3 subspaces of dim 2 in
    ambient 6, 10 points each); fast enough for module-level checks."""
    spec = SynthSpec(num_subspaces=3, subspace_dim=2, ambient_dim=6, points_per=10, seed=0)
    X, truth = generate(spec)
    out = solve_idr(X, SolverConfig(gamma=0.05, lam=1.0, k=3))
    return X, truth, out


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
