"""Independent checks: brute-force norm oracle, weak-form residuals,
and the discrete inequality chains.

Nothing here reuses the assembly path of the form module: the norm oracle
is a punctured midpoint double sum on a refined grid, and the inequality
suite evaluates both sides of each bound from raw nodal data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .energy import pair_stats
from .errors import AllMasked, CandidateNotIncluded
from .form import GagliardoForm, same_cell_integral
from .problem import GridPair, GridSpec, ValidatedProblem
from .thresholds import q_star, rayleigh_quotient, weight_norm


def brute_force_norm(grid: GridSpec, s: float, u: np.ndarray, refine: int) -> float:
    """Squared energy norm by punctured midpoint quadrature on a refined grid.

    The grid is split into refine-times finer cells; the double sum runs
    over midpoints of distinct fine cells, each same-cell contribution is
    added through the exact closed form with the local slope, and the
    exterior term uses the midpoint rule (the midpoints never touch the
    boundary, and the nodal function vanishes there).
    """
    if refine < 2:
        raise ValueError(f"refine must be at least 2, got {refine}")
    u = np.asarray(u, dtype=float)
    N = grid.cells
    h = grid.h
    M = N * refine
    hf = (grid.right - grid.left) / M
    xf = np.linspace(grid.left, grid.right, M + 1)
    cf = 0.5 * (xf[:-1] + xf[1:])
    uc = np.interp(cf, grid.nodes(), u)
    fine_slopes = np.repeat(np.diff(u) / h, refine)

    dist = np.abs(cf[:, None] - cf[None, :])
    np.fill_diagonal(dist, 1.0)
    duv = uc[:, None] - uc[None, :]
    contrib = hf * hf * duv**2 * dist ** (-1 - 2 * s)
    np.fill_diagonal(contrib, 0.0)
    total = float(contrib.sum())
    total += same_cell_integral(hf, s) * float(np.sum(fine_slopes**2))
    kap = ((grid.right - cf) ** (-2 * s) + (cf - grid.left) ** (-2 * s)) / (2 * s)
    total += 2 * hf * float(np.sum(uc**2 * kap))
    return total


@dataclass(frozen=True)
class ResidualReport:
    res_u: float
    res_w: float
    masked_fraction: float
    delta: float


def weak_residual(problem: ValidatedProblem, form: GagliardoForm,
                  pair: GridPair, delta: float) -> ResidualReport:
    """Nodewise stationarity residual of a nonnegative pair.

    Compares the nonlocal operator applied to each component against the
    quadrature-weighted right-hand side, over interior nodes where both
    components exceed delta (the singular factor is untestable where a
    component vanishes). Residuals are normalized by the largest term
    magnitude over the unmasked nodes.
    """
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    w = problem.quad_weights()
    q, al, be = problem.q, problem.alpha, problem.beta
    ab = al + be
    u = pair.u.values
    v = pair.w.values
    i = slice(1, -1)
    Gu = form.matrix @ u[i]
    Gv = form.matrix @ v[i]

    mask = (u[i] > delta) & (v[i] > delta)
    masked_fraction = 1.0 - float(mask.mean())
    if not np.any(mask):
        raise AllMasked("every interior node is below delta; nothing to test")

    um = u[i][mask]
    vm = v[i][mask]
    rhs_u = (problem.lam * (w * problem.f_vals)[i][mask] * um ** (-q)
             + (al / ab) * (w * problem.b_vals)[i][mask] * um ** (al - 1) * vm**be)
    rhs_v = (problem.mu * (w * problem.g_vals)[i][mask] * vm ** (-q)
             + (be / ab) * (w * problem.b_vals)[i][mask] * um**al * vm ** (be - 1))

    def rel_residual(lhs, rhs):
        mag = float(np.max(np.maximum(np.abs(lhs), np.abs(rhs))))
        if mag == 0.0:
            return 0.0
        return float(np.max(np.abs(lhs - rhs))) / mag

    return ResidualReport(res_u=rel_residual(Gu[mask], rhs_u),
                          res_w=rel_residual(Gv[mask], rhs_v),
                          masked_fraction=masked_fraction, delta=float(delta))


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    lhs: float
    rhs: float


@dataclass(frozen=True)
class CheckList:
    checks: tuple[CheckResult, ...]

    @property
    def all_ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def as_dict(self) -> dict:
        return {"all_ok": self.all_ok,
                "checks": [{"name": c.name, "ok": c.ok, "lhs": c.lhs, "rhs": c.rhs}
                           for c in self.checks]}


# manifold detection band for the conditional energy bound
_MANIFOLD_BAND = 1e-6
# slack for rounding in the <=-comparisons (relative)
_SLACK = 1e-12


def inequality_suite(problem: ValidatedProblem, form: GagliardoForm,
                     pair: GridPair, S_est: float) -> CheckList:
    """Evaluate the discrete inequality chains on one pair.

    Requires S_est not to exceed the Rayleigh quotient of either component
    (guaranteed when both were included in the estimate's candidate set);
    raises CandidateNotIncluded otherwise. The energy lower bound is only
    asserted for pairs on the manifold; off-manifold pairs record it as
    trivially satisfied.
    """
    q, al, be = problem.q, problem.alpha, problem.beta
    ab = al + be
    w = problem.quad_weights()
    st = pair_stats(problem, form, pair)
    norm = np.sqrt(st.norm2)

    for comp, name in ((pair.u.values, "u"), (pair.w.values, "w")):
        if np.any(comp[1:-1]):
            quot = rayleigh_quotient(form, ab, comp)
            if S_est > quot * (1 + 1e-9):
                raise CandidateNotIncluded(
                    f"S estimate {S_est} exceeds the quotient {quot} of component {name}"
                )

    qs = q_star(al, be, q)
    f_norm = weight_norm(qs, problem.f_vals, w)
    g_norm = weight_norm(qs, problem.g_vals, w)
    Lambda = ((abs(problem.lam) * f_norm) ** (2 / (1 + q))
              + (abs(problem.mu) * g_norm) ** (2 / (1 + q)))
    b_sup = float(np.max(np.maximum(problem.b_vals, 0.0)))

    checks = []

    def add(name, ok, lhs, rhs):
        checks.append(CheckResult(name, bool(ok), float(lhs), float(rhs)))

    # singular integral against the aggregated parameter bound
    rhs_e2 = Lambda ** ((1 + q) / 2) * (norm / np.sqrt(S_est)) ** (1 - q)
    add("singular_term_bound", st.K <= rhs_e2 * (1 + _SLACK) + _SLACK, st.K, rhs_e2)

    # coupling integral against the sup-weight embedding bound
    rhs_e3 = b_sup * (norm / np.sqrt(S_est)) ** ab
    add("coupling_term_bound", st.B <= rhs_e3 * (1 + _SLACK) + _SLACK, st.B, rhs_e3)

    # energy lower bound on the manifold
    J = st.norm2 / 2 - st.K / (1 - q) - st.B / ab
    phi1 = st.norm2 - st.K - st.B
    if abs(phi1) <= _MANIFOLD_BAND * max(st.scale(), 1e-300):
        bound = ((0.5 - 1 / ab) * st.norm2
                 - (1 / (1 - q) - 1 / ab) * Lambda ** ((1 + q) / 2)
                 * (norm / np.sqrt(S_est)) ** (1 - q))
        add("manifold_energy_bound", J >= bound - _SLACK * max(abs(bound), 1.0),
            J, bound)
    else:
        add("manifold_energy_bound", True, J, -np.inf)

    # exact discrete Hoelder step for the u component against f
    lhs_h = float(np.sum(w * np.abs(problem.f_vals) * np.abs(pair.u.values) ** (1 - q)))
    rhs_h = f_norm * weight_norm(ab, pair.u.values, w) ** (1 - q)
    add("discrete_hoelder", lhs_h <= rhs_h * (1 + _SLACK) + _SLACK, lhs_h, rhs_h)

    return CheckList(tuple(checks))
