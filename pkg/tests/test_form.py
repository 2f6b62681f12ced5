import numpy as np
import pytest
from scipy.integrate import dblquad

import neharifrac as nf
from neharifrac.errors import GridMismatch, InvalidOrder
from neharifrac.form import adjacent_cell_integrals, same_cell_integral



def hat(grid, node=None):
    u = np.zeros(grid.node_count)
    u[grid.cells // 2 if node is None else node] = 1.0
    return nf.GridFunction(grid, u)


# ---------------------------------------------------------------------------
# closed-form cell integrals against adaptive-quadrature oracles


def test_same_cell_integral_value():
    # oracle: symbolic integration of |x-y|^{1-2s} over one unit cell squared
    s = 0.4
    expected = 2.0 / ((2 - 2 * s) * (3 - 2 * s))  # = 2/2.64
    assert same_cell_integral(1.0, s) == pytest.approx(expected, rel=1e-15)
    assert same_cell_integral(1.0, s) == pytest.approx(0.757575757575, rel=1e-10)
    # h-scaling h^{3-2s}
    assert same_cell_integral(0.5, s) == pytest.approx(expected * 0.5 ** 2.2, rel=1e-13)


@pytest.mark.parametrize("s", [0.2, 0.3, 0.4, 0.45])
def test_adjacent_cell_integrals_against_quadrature(s):
    sig = 1 + 2 * s
    J1, J2 = adjacent_cell_integrals(s)
    J1_num, _ = dblquad(lambda b, a: a * a * (a + b) ** (-sig), 0, 1, 0, 1,
                        epsabs=1e-12, epsrel=1e-12)
    J2_num, _ = dblquad(lambda b, a: a * b * (a + b) ** (-sig), 0, 1, 0, 1,
                        epsabs=1e-12, epsrel=1e-12)
    assert J1 == pytest.approx(J1_num, rel=1e-10)
    assert J2 == pytest.approx(J2_num, rel=1e-10)


# ---------------------------------------------------------------------------
# exterior kernel


def test_exterior_kernel_center_value(grid16):
    # oracle: int_{|y|>1} |y|^{-1.8} dy = 2/(0.8) at x = 0
    kap = nf.exterior_kernel(grid16, 0.4).values
    center = grid16.cells // 2
    assert kap[center] == pytest.approx(2.5, rel=1e-14)


def test_exterior_kernel_symmetry_and_blowup(grid16):
    kap = nf.exterior_kernel(grid16, 0.4).values
    inner = kap[1:-1]
    assert inner == pytest.approx(inner[::-1], rel=1e-13)
    # monotone increase toward each endpoint
    half = inner[: len(inner) // 2 + 1]
    assert np.all(np.diff(half) < 0)
    assert inner[0] > inner[len(inner) // 2] * 2


def test_exterior_kernel_rejects_bad_order(grid16):
    with pytest.raises(InvalidOrder):
        nf.exterior_kernel(grid16, 0.5)


# ---------------------------------------------------------------------------
# assembled form


def test_zero_function_has_zero_norm(form16, grid16):
    assert nf.seminorm_sq(form16, nf.GridFunction.zero(grid16)) == 0.0


def test_quadratic_scaling_exact(form16, grid16):
    rng = np.random.default_rng(3)
    u = np.zeros(grid16.node_count)
    u[1:-1] = rng.standard_normal(grid16.cells - 1)
    a = nf.seminorm_sq(form16, nf.GridFunction(grid16, u))
    b = nf.seminorm_sq(form16, nf.GridFunction(grid16, 2 * u))
    assert b == pytest.approx(4 * a, rel=1e-14)


def test_form_matches_brute_force_oracle(form16, grid16):
    rng = np.random.default_rng(0)
    for _ in range(10):
        u = np.zeros(grid16.node_count)
        u[1:-1] = rng.standard_normal(grid16.cells - 1)
        assembled = nf.seminorm_sq(form16, nf.GridFunction(grid16, u))
        oracle = nf.brute_force_norm(grid16, 0.4, u, refine=8)
        assert assembled == pytest.approx(oracle, rel=0.02)


def test_center_hat_positive_and_near_oracle(form16, grid16):
    val = nf.seminorm_sq(form16, hat(grid16))
    assert val > 0
    oracle = nf.brute_force_norm(grid16, 0.4, hat(grid16).values, refine=8)
    assert val == pytest.approx(oracle, rel=0.02)


def test_matrix_exactly_symmetric(form16):
    assert np.abs(form16.matrix - form16.matrix.T).max() == 0.0


def test_bilinearity_and_symmetry_on_random_vectors(form16, grid16):
    rng = np.random.default_rng(7)
    G = form16.matrix
    n = grid16.cells - 1
    for _ in range(100):
        u = rng.standard_normal(n)
        v = rng.standard_normal(n)
        a, bb = rng.standard_normal(2)
        left = (a * u + bb * v) @ G @ (a * u + bb * v)
        expand = (a * a * (u @ G @ u) + 2 * a * bb * (u @ G @ v) + bb * bb * (v @ G @ v))
        assert left == pytest.approx(expand, rel=1e-12, abs=1e-12)
        assert u @ G @ v == pytest.approx(v @ G @ u, rel=1e-13, abs=1e-15)


def test_positive_definite_on_random_vectors(form16, grid16):
    rng = np.random.default_rng(11)
    n = grid16.cells - 1
    for _ in range(100):
        u = rng.standard_normal(n)
        assert u @ form16.matrix @ u > 0


def test_reflection_invariance(form16, grid16):
    rng = np.random.default_rng(5)
    u = np.zeros(grid16.node_count)
    u[1:-1] = rng.standard_normal(grid16.cells - 1)
    a = nf.seminorm_sq(form16, nf.GridFunction(grid16, u))
    b = nf.seminorm_sq(form16, nf.GridFunction(grid16, u[::-1].copy()))
    assert b == pytest.approx(a, rel=1e-12)


def test_refinement_consistency():
    # fixed profile: hat of half-width 0.125 centered at 0
    values = []
    for cells in (16, 32, 64, 128):
        grid = nf.GridSpec(-1.0, 1.0, cells)
        form = nf.assemble_form(grid, 0.4)
        x = grid.nodes()
        prof = np.maximum(0.0, 1 - np.abs(x) / 0.125)
        prof[0] = prof[-1] = 0.0
        values.append(nf.seminorm_sq(form, nf.GridFunction(grid, prof)))
    diffs = np.abs(np.diff(values))
    assert np.all(np.diff(diffs) < 0), f"differences not decreasing: {diffs}"


def test_pair_norm_additive(form16, grid16):
    rng = np.random.default_rng(13)
    u = np.zeros(grid16.node_count)
    u[1:-1] = rng.standard_normal(grid16.cells - 1)
    gf = nf.GridFunction(grid16, u)
    zero = nf.GridFunction.zero(grid16)
    s = nf.seminorm_sq(form16, gf)
    assert nf.pair_norm_sq(form16, nf.GridPair(gf, zero)) == pytest.approx(s)
    assert nf.pair_norm_sq(form16, nf.GridPair(gf, gf)) == pytest.approx(2 * s)
    pair = nf.GridPair(gf, gf)
    assert nf.pair_norm_sq(form16, pair.scaled(3.0)) == pytest.approx(9 * 2 * s, rel=1e-13)


def test_apply_form_consistency(form16, grid16):
    rng = np.random.default_rng(17)
    u = np.zeros(grid16.node_count)
    v = np.zeros(grid16.node_count)
    u[1:-1] = rng.standard_normal(grid16.cells - 1)
    v[1:-1] = rng.standard_normal(grid16.cells - 1)
    gu = nf.apply_form(form16, nf.GridFunction(grid16, u)).values
    gv = nf.apply_form(form16, nf.GridFunction(grid16, v)).values
    assert gu @ v == pytest.approx(gv @ u, rel=1e-13)
    assert gu @ u == pytest.approx(nf.seminorm_sq(form16, nf.GridFunction(grid16, u)),
                                   rel=1e-14)
    zero = nf.apply_form(form16, nf.GridFunction.zero(grid16)).values
    assert np.all(zero == 0.0)


def test_grid_mismatch_rejected(form16):
    other = nf.GridSpec(-1.0, 1.0, 8)
    with pytest.raises(GridMismatch):
        nf.seminorm_sq(form16, nf.GridFunction.zero(other))


def test_assemble_rejects_bad_order(grid16):
    with pytest.raises(InvalidOrder):
        nf.assemble_form(grid16, 0.6)
