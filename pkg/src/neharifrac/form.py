"""Assembly of the squared zero-exterior energy norm as an explicit matrix.

For nodal values u on the grid (zero at the boundary), u' G u equals the
double-integral energy

    int_{Omega x Omega} (u(x)-u(y))^2 / |x-y|^{1+2s} dx dy
        + 2 int_Omega u(x)^2 kappa(x) dx,

of the piecewise-linear interpolant extended by zero, where kappa collects
the interaction with the exterior of the interval.

Quadrature split, driven by where the kernel is singular:
  * identical and adjacent cell pairs: exact closed-form integrals (the
    piecewise-linear difference cancels the singularity; the primitives
    are plain power functions since s < 1/2),
  * separated cell pairs (gap >= 2 cells): tensor Gauss-Legendre rule per
    cell; the kernel is smooth there but steep enough near the diagonal
    that a midpoint rule loses percent-level accuracy,
  * exterior term: exact per-cell moments of kappa against products of the
    two linear shape functions, which handles the integrable blow-up of
    kappa at the boundary without any quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GridMismatch, InvalidOrder
from .problem import GridFunction, GridPair, GridSpec

GAUSS_POINTS = 3  # per cell, for separated pairs


def _check_order(s: float) -> None:
    if not (0.0 < s < 0.5):
        raise InvalidOrder(f"form assembly needs s in (0, 1/2), got {s}")


def exterior_kernel(grid: GridSpec, s: float) -> GridFunction:
    """Nodal values of kappa(x) = [(R-x)^{-2s} + (x-L)^{-2s}] / (2s).

    kappa(x) is the integral of |x-y|^{-(1+2s)} over the complement of the
    interval. It blows up at the endpoints; the boundary entries of the
    returned function are set to 0 (they are only ever paired with nodal
    values that vanish there).
    """
    _check_order(s)
    x = grid.nodes()
    vals = np.zeros_like(x)
    xi = x[1:-1]
    vals[1:-1] = ((grid.right - xi) ** (-2 * s) + (xi - grid.left) ** (-2 * s)) / (2 * s)
    return GridFunction(grid, vals)


def same_cell_integral(h: float, s: float) -> float:
    """Exact value of the double integral of |x-y|^{1-2s} over one cell squared."""
    return 2.0 * h ** (3 - 2 * s) / ((2 - 2 * s) * (3 - 2 * s))


def adjacent_cell_integrals(s: float) -> tuple[float, float]:
    """Exact unit-cell integrals over adjacent cells.

    Returns (J1, J2) with
        J1 = int_0^1 int_0^1 a^2 (a+b)^{-(1+2s)} da db,
        J2 = int_0^1 int_0^1 a b (a+b)^{-(1+2s)} da db,
    where a, b are the distances to the shared node. Scaling a physical
    cell of width h multiplies both by h^{3-2s}.
    """
    e1, e2, e3 = 1 - 2 * s, 2 - 2 * s, 3 - 2 * s
    # D = int_0^1 a^2 (a+1)^{-2s} da, expanded via t = a+1 on [1, 2]
    D = (2**e3 - 1) / e3 - 2 * (2**e2 - 1) / e2 + (2**e1 - 1) / e1
    J1 = (1 / e3 - D) / (2 * s)
    # int (a+b)^{1-2s} over the unit square = 2 J1 + 2 J2
    T = (2**e3 - 2) / (e2 * e3)
    J2 = (T - 2 * J1) / 2
    return J1, J2


def _exterior_cell_moments(grid: GridSpec, s: float):
    """Exact per-cell moments of kappa against 1, t, t^2.

    t is the local coordinate on the cell, so the three moments determine
    the integral of kappa against any product of the two linear shape
    functions. All primitives are power functions with positive exponents
    1-2s, 2-2s, 3-2s, so the boundary cells (where kappa blows up) come
    out finite and exact.
    """
    x = grid.nodes()
    h = grid.h
    e1, e2, e3 = 1 - 2 * s, 2 - 2 * s, 3 - 2 * s
    two_s = 2 * s
    # left-blowup part, xi = x - L on [xi0, xi0 + h]
    xi0 = x[:-1] - grid.left
    xi1 = xi0 + h
    E1 = (xi1**e1 - xi0**e1) / e1
    E2 = (xi1**e2 - xi0**e2) / e2
    E3 = (xi1**e3 - xi0**e3) / e3
    m0 = E1 / two_s
    m1 = (E2 - xi0 * E1) / (two_s * h)
    m2 = (E3 - 2 * xi0 * E2 + xi0**2 * E1) / (two_s * h * h)
    # right-blowup part, zeta = R - x on [z0, z0 + h]; local t = (z1 - zeta)/h
    z0 = grid.right - x[1:]
    z1 = z0 + h
    B1 = (z1**e1 - z0**e1) / e1
    B2 = (z1**e2 - z0**e2) / e2
    B3 = (z1**e3 - z0**e3) / e3
    m0 += B1 / two_s
    m1 += (z1 * B1 - B2) / (two_s * h)
    m2 += (z1 * z1 * B1 - 2 * z1 * B2 + B3) / (two_s * h * h)
    return m0, m1, m2


@dataclass
class GagliardoForm:
    """Dense symmetric matrix of the squared energy norm over interior nodes."""

    matrix: np.ndarray
    quad_weights: np.ndarray
    s: float
    grid: GridSpec

    def __post_init__(self):
        n = self.grid.cells - 1
        if self.matrix.shape != (n, n):
            raise GridMismatch("form matrix does not match the grid")


def assemble_form(grid: GridSpec, s: float) -> GagliardoForm:
    """Assemble the energy form matrix for piecewise-linear nodal functions."""
    _check_order(s)
    N = grid.cells
    h = grid.h
    x = grid.nodes()
    idx = np.arange(N)
    G = np.zeros((N + 1, N + 1))

    # node-difference matrix: (D u)_k = u_{k+1} - u_k
    D = np.zeros((N, N + 1))
    D[idx, idx] = -1.0
    D[idx, idx + 1] = 1.0

    # identical cell pairs: slope_k^2 * same_cell_integral
    G += same_cell_integral(1.0, s) * h ** (1 - 2 * s) * (D.T @ D)

    # adjacent cell pairs (both orders), expressed on cell slopes
    J1, J2 = adjacent_cell_integrals(s)
    M = np.zeros((N, N))
    i = np.arange(N - 1)
    np.add.at(M, (i, i), 2 * J1)
    np.add.at(M, (i + 1, i + 1), 2 * J1)
    M[i, i + 1] += 2 * J2
    M[i + 1, i] += 2 * J2
    G += h ** (1 - 2 * s) * (D.T @ M @ D)

    # separated pairs: Gauss rule per cell, graph-Laplacian structure over
    # the quadrature points (each ordered pair counted once)
    ng = GAUSS_POINTS
    gp, gw = np.polynomial.legendre.leggauss(ng)
    t = (gp + 1) / 2
    wt = gw / 2
    pts = (x[:-1, None] + h * t[None, :]).reshape(-1)
    wts = np.tile(h * wt, N)
    dist = np.abs(pts[:, None] - pts[None, :])
    cell = np.repeat(idx, ng)
    sep = np.abs(cell[:, None] - cell[None, :]) >= 2
    W = np.zeros_like(dist)
    W[sep] = 2.0 * (wts[:, None] * wts[None, :])[sep] * dist[sep] ** (-1 - 2 * s)
    rows = W.sum(axis=1)
    shape = np.stack([1 - t, t])  # linear shape functions at the Gauss points
    W4 = W.reshape(N, ng, N, ng)
    R4 = rows.reshape(N, ng)
    for p in range(2):
        for r in range(2):
            C = np.einsum("a,kalb,b->kl", shape[p], W4, shape[r])
            G[p:N + p, r:N + r] -= C
            d = np.einsum("a,ka,a->k", shape[p], R4, shape[r])
            G[idx + p, idx + r] += d

    # exterior interaction: exact tridiagonal cell integrals of kappa
    m0, m1, m2 = _exterior_cell_moments(grid, s)
    G[idx, idx] += 2 * (m0 - 2 * m1 + m2)
    G[idx, idx + 1] += 2 * (m1 - m2)
    G[idx + 1, idx] += 2 * (m1 - m2)
    G[idx + 1, idx + 1] += 2 * m2

    interior = G[1:N, 1:N]
    interior = 0.5 * (interior + interior.T)  # exact symmetry
    return GagliardoForm(matrix=interior, quad_weights=grid.trapezoid_weights(),
                         s=s, grid=grid)


def _interior(form: GagliardoForm, u: GridFunction) -> np.ndarray:
    if u.grid != form.grid:
        raise GridMismatch("grid function does not match the form's grid")
    return u.values[1:-1]


def seminorm_sq(form: GagliardoForm, u: GridFunction) -> float:
    """Squared energy norm u' G u of a single grid function."""
    v = _interior(form, u)
    return float(v @ form.matrix @ v)


def pair_norm_sq(form: GagliardoForm, p: GridPair) -> float:
    """Squared product norm: sum of the two component squared norms."""
    return seminorm_sq(form, p.u) + seminorm_sq(form, p.w)


def apply_form(form: GagliardoForm, u: GridFunction) -> GridFunction:
    """Matrix-vector product G u, zero-padded back to all nodes.

    The result represents the nonlocal bilinear form paired against the
    nodal hat functions, so <Gu, v> over interior nodes equals the energy
    pairing of u with v.
    """
    v = _interior(form, u)
    out = np.zeros(form.grid.node_count)
    out[1:-1] = form.matrix @ v
    return GridFunction(form.grid, out)
