import numpy as np
import pytest

import neharifrac as nf


def make_spec(cells=64, s=0.4, q=0.5, alpha=1.5, beta=1.5, lam=0.01, mu=0.01,
              f=None, g=None, b=None, left=-1.0, right=1.0):
    return nf.ProblemSpec(
        grid=nf.GridSpec(left, right, cells),
        s=s, q=q, alpha=alpha, beta=beta, lam=lam, mu=mu,
        f=f or nf.WeightSpec.constant(1.0),
        g=g or nf.WeightSpec.constant(1.0),
        b=b or nf.WeightSpec.cos_pi_x(1.0),
    )


@pytest.fixture(scope="session")
def problem64():
    return nf.validate_params(make_spec(cells=64))


@pytest.fixture(scope="session")
def form64(problem64):
    return nf.assemble_form(problem64.grid, problem64.s)


@pytest.fixture(scope="session")
def problem128():
    return nf.validate_params(make_spec(cells=128))


@pytest.fixture(scope="session")
def form128(problem128):
    return nf.assemble_form(problem128.grid, problem128.s)


@pytest.fixture(scope="session")
def grid16():
    return nf.GridSpec(-1.0, 1.0, 16)


@pytest.fixture(scope="session")
def form16(grid16):
    return nf.assemble_form(grid16, 0.4)


@pytest.fixture(scope="session")
def solved64(problem64, form64):
    """Both branches of the 64-cell fixture, reused across test modules."""
    opts = nf.SolverOptions(seed=42, restarts=3)
    plus = nf.solve_branch(problem64, form64, nf.Branch.PLUS, opts)
    minus = nf.solve_branch(problem64, form64, nf.Branch.MINUS, opts)
    return plus, minus


@pytest.fixture(scope="session")
def constants64(problem64, form64, solved64):
    plus, minus = solved64
    extra = [plus.pair.u.values, plus.pair.w.values,
             minus.pair.u.values, minus.pair.w.values]
    return nf.compute_constants(problem64, form64, extra_candidates=extra)


def random_x0_pair(problem, rng, nonnegative=False):
    """Random pair vanishing at the boundary."""
    n = problem.grid.node_count
    u = np.zeros(n)
    w = np.zeros(n)
    u[1:-1] = rng.standard_normal(n - 2)
    w[1:-1] = rng.standard_normal(n - 2)
    if nonnegative:
        u = np.abs(u)
        w = np.abs(w)
        u[0] = u[-1] = w[0] = w[-1] = 0.0
    return nf.GridPair.from_arrays(problem.grid, u, w)


def bump_pair(problem, center, width, amp_u=1.0, amp_w=1.0):
    """Smooth nonnegative bump pair used to steer the coupling sign."""
    x = problem.grid.nodes()
    prof = np.maximum(0.0, 1 - ((x - center) / width) ** 2) ** 2
    prof[0] = prof[-1] = 0.0
    return nf.GridPair.from_arrays(problem.grid, amp_u * prof, amp_w * prof)
