import numpy as np
import pytest

import neharifrac as nf
from neharifrac.errors import DirectionSearchFailed, NotConvergedInput
from neharifrac.thresholds import rho_coefficients

from conftest import make_spec


def test_initial_direction_properties(problem64, form64):
    for seed in (0, 1, 17):
        rng = np.random.default_rng(seed)
        pair = nf.initial_direction(problem64, rng)
        assert np.all(pair.u.values >= 0) and np.all(pair.w.values >= 0)
        assert nf.K_value(problem64, pair) > 0


def test_initial_direction_minus_has_positive_coupling(problem64, form64):
    for seed in (0, 5, 9):
        rng = np.random.default_rng(seed)
        pair = nf.initial_direction(problem64, rng, nf.Branch.MINUS)
        assert nf.B_value(problem64, pair) > 0


def test_initial_direction_deterministic(problem64):
    a = nf.initial_direction(problem64, np.random.default_rng(7))
    b = nf.initial_direction(problem64, np.random.default_rng(7))
    assert np.array_equal(a.u.values, b.u.values)
    assert np.array_equal(a.w.values, b.w.values)


def test_initial_direction_fails_when_no_positive_coupling_possible():
    # both parameters negative make the singular integral nonpositive for
    # every nonnegative pair, so no admissible direction exists
    spec = make_spec(cells=32, lam=-0.01, mu=-0.01)
    p = nf.validate_params(spec)
    with pytest.raises(DirectionSearchFailed):
        nf.initial_direction(p, np.random.default_rng(0))


def test_solve_branch_raises_when_no_direction_exists():
    from neharifrac.errors import NoAdmissibleDirection
    p = nf.validate_params(make_spec(cells=32, lam=-0.01, mu=-0.01))
    form = nf.assemble_form(p.grid, p.s)
    with pytest.raises(NoAdmissibleDirection):
        nf.solve_branch(p, form, nf.Branch.PLUS, nf.SolverOptions(restarts=2))


def test_plus_branch_fixture(problem64, form64, solved64):
    plus, _ = solved64
    assert plus.converged
    assert plus.J < 0
    assert plus.phi2 > 0
    m = nf.classify(problem64, form64, plus.pair)
    assert m.label is nf.MembershipLabel.N_PLUS
    vals_u = plus.pair.u.values
    vals_w = plus.pair.w.values
    assert np.all(vals_u >= 0) and np.all(vals_w >= 0)
    # interior positivity
    assert vals_u[1:-1].min() > 0 and vals_w[1:-1].min() > 0


def test_minus_branch_fixture(problem64, form64, solved64):
    _, minus = solved64
    assert minus.converged
    assert minus.phi2 < 0
    m = nf.classify(problem64, form64, minus.pair)
    assert m.label is nf.MembershipLabel.N_MINUS
    assert np.all(minus.pair.u.values >= 0)
    assert np.all(minus.pair.w.values >= 0)
    assert nf.B_value(problem64, minus.pair) > 0


def test_monotone_descent_trajectory(solved64):
    for rep in solved64:
        js = [rec[0] for rec in rep.trajectory]
        assert all(b < a for a, b in zip(js, js[1:]))


def test_manifold_residual_along_solution(problem64, form64, solved64):
    for rep in solved64:
        st = nf.pair_stats(problem64, form64, rep.pair)
        assert abs(rep.phi1) <= 1e-8 * st.scale()


def test_coercivity_bound_along_trajectory(solved64, constants64):
    # scalar comparison: J >= c t^2 - d t^{1-q} at t = norm, on the manifold
    c, d = rho_coefficients(1.5, 1.5, 0.5, constants64.S, constants64.Lambda)
    for rep in solved64:
        for J, norm, _, _ in rep.trajectory:
            rho = c * norm**2 - d * norm ** (1 - 0.5)
            assert J >= rho - 1e-12 * max(1.0, abs(rho))


def test_norm_bounds_vs_gap_radii(solved64, constants64):
    plus, minus = solved64
    assert plus.norm < constants64.A_lm
    assert minus.norm > constants64.A0


def test_determinism_identical_reports(problem64, form64):
    opts = nf.SolverOptions(seed=11, restarts=2, max_iters=400)
    a = nf.solve_branch(problem64, form64, nf.Branch.PLUS, opts)
    b = nf.solve_branch(problem64, form64, nf.Branch.PLUS, opts)
    assert a.J == b.J
    assert a.iters == b.iters
    assert np.array_equal(a.pair.u.values, b.pair.u.values)
    assert np.array_equal(a.pair.w.values, b.pair.w.values)
    assert a.trajectory == b.trajectory


def test_symmetric_problem_keeps_components_equal(problem64, form64):
    # f = g, lambda = mu, alpha = beta and a symmetric seed
    opts = nf.SolverOptions(seed=3, restarts=1, max_iters=600)
    rep = nf.solve_branch(problem64, form64, nf.Branch.PLUS, opts)
    assert np.max(np.abs(rep.pair.u.values - rep.pair.w.values)) <= 1e-12
    rep_m = nf.solve_branch(problem64, form64, nf.Branch.MINUS, opts)
    assert np.max(np.abs(rep_m.pair.u.values - rep_m.pair.w.values)) <= 1e-12


def test_small_parameters_shrink_plus_solution():
    # norm of the local-min solution scales down with the parameters and
    # stays below the shrinking gap radius
    for lam in (1e-2, 1e-3):
        p = nf.validate_params(make_spec(cells=64, lam=lam, mu=lam))
        form = nf.assemble_form(p.grid, p.s)
        opts = nf.SolverOptions(seed=1, restarts=2)
        rep = nf.solve_branch(p, form, nf.Branch.PLUS, opts)
        assert rep.converged
        cons = nf.compute_constants(p, form,
                                    extra_candidates=[rep.pair.u.values,
                                                      rep.pair.w.values])
        assert rep.norm / cons.A_lm < 1.0


def test_gap_check_fixture(solved64, constants64):
    plus, minus = solved64
    gap = nf.gap_check(plus, minus, constants64)
    assert gap.ordering_ok
    assert gap.norm_minus > gap.A0 > gap.A_lm > gap.norm_plus


def test_gap_check_degenerate_norms(solved64, constants64):
    plus, minus = solved64
    import dataclasses
    fake_minus = dataclasses.replace(minus, norm=plus.norm)
    gap = nf.gap_check(plus, fake_minus, constants64)
    assert not gap.ordering_ok


def test_gap_check_rejects_unconverged(solved64, constants64):
    plus, minus = solved64
    import dataclasses
    bad = dataclasses.replace(plus, converged=False)
    with pytest.raises(NotConvergedInput):
        nf.gap_check(bad, minus, constants64)


def test_no_iterate_lands_in_degenerate_set(problem64, form64, solved64):
    # the degenerate subset of the manifold is only the origin inside the
    # admissible region: no iterate with substantial norm classifies there
    for rep in solved64:
        m = nf.classify(problem64, form64, rep.pair)
        assert m.label is not nf.MembershipLabel.N_ZERO
        for rec in rep.trajectory:
            norm = rec[1]
            assert norm > 1e-8


def test_solver_options_validation():
    with pytest.raises(ValueError):
        nf.SolverOptions(max_iters=0)
    with pytest.raises(ValueError):
        nf.SolverOptions(restarts=0)
    with pytest.raises(ValueError):
        nf.SolverOptions(step=-1.0)
