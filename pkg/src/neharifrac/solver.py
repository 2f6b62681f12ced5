"""Two-branch constrained minimization by descent with fiber reprojection.

Each branch minimizes the energy over one part of the constraint manifold:
the local-min branch (projection scaling t1) and the local-max branch
(scaling t2, which needs a direction with positive coupling integral).
One iteration: take a negative gradient step of the smoothed energy from
the current on-manifold point, clip negatives to zero, reproject the
result onto the branch, and accept only if the energy decreased (else
halve the step). Every accepted iterate therefore sits on its branch, so
branch invariants are checkable at each step. Independent seeded restarts
guard against bad initial directions; the best energy wins.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .energy import energy_gradient, pair_stats, phi_from_stats
from .errors import (
    DirectionSearchFailed,
    NoAdmissibleDirection,
    NotConvergedInput,
)
from .fiber import FiberCase, project
from .form import GagliardoForm
from .problem import GridPair, ValidatedProblem
from .thresholds import ConstantsReport

_MIN_STEP = 1e-16


class Branch(enum.Enum):
    PLUS = "plus"
    MINUS = "minus"


@dataclass(frozen=True)
class SolverOptions:
    max_iters: int = 2000
    step: float = 0.1
    tol_energy: float = 1e-10
    tol_manifold: float = 1e-8
    eps_singular: float = 1e-8
    seed: int = 0
    restarts: int = 8

    def __post_init__(self):
        if self.max_iters <= 0 or self.step <= 0 or self.tol_energy <= 0 \
                or self.tol_manifold <= 0 or self.eps_singular <= 0:
            raise ValueError("solver options must be positive")
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")


@dataclass
class SolutionReport:
    branch: Branch
    pair: GridPair
    J: float
    norm: float
    phi1: float
    phi2: float
    t_used: float
    iters: int
    converged: bool
    restarts_used: int
    # one (J, norm, K, B) record per accepted iterate, in order
    trajectory: list[tuple[float, float, float, float]] = field(default_factory=list)


@dataclass(frozen=True)
class GapReport:
    norm_plus: float
    norm_minus: float
    A0: float
    A_lm: float
    ordering_ok: bool


def initial_direction(problem: ValidatedProblem, rng: np.random.Generator,
                      branch: Branch = Branch.PLUS) -> GridPair:
    """Random nonnegative direction pair with positive singular integral.

    Both components share one smooth bump profile (a symmetric seed), so a
    fully symmetric problem keeps u = w along the whole descent. For the
    local-max branch the bump is centered where the coupling weight is
    positive so the coupling integral starts positive.
    """
    grid = problem.grid
    x = grid.nodes()
    width_scale = grid.right - grid.left
    b_peak = x[int(np.argmax(problem.b_vals))]
    w = problem.quad_weights()

    for _ in range(1000):
        if branch is Branch.MINUS:
            center = b_peak + 0.1 * width_scale * rng.standard_normal()
        else:
            center = rng.uniform(grid.left + 0.1 * width_scale,
                                 grid.right - 0.1 * width_scale)
        width = rng.uniform(0.08, 0.25) * width_scale
        amp = rng.uniform(0.5, 1.5)
        prof = amp * np.maximum(0.0, 1 - ((x - center) / width) ** 2) ** 2
        prof[0] = prof[-1] = 0.0
        if not np.any(prof[1:-1] > 0):
            continue
        # a component tied to a negative parameter shrinks the singular
        # integral; damp that side until the total comes out positive
        u = prof.copy()
        v = prof.copy()
        for _damp in range(8):
            up = np.maximum(u, 0.0) ** (1 - problem.q)
            vp = np.maximum(v, 0.0) ** (1 - problem.q)
            K = (problem.lam * float(np.sum(w * problem.f_vals * up))
                 + problem.mu * float(np.sum(w * problem.g_vals * vp)))
            if K > 0:
                break
            if problem.lam < problem.mu:
                u *= 0.25
            else:
                v *= 0.25
        else:
            continue
        if K <= 0:
            continue
        if branch is Branch.MINUS:
            B = float(np.sum(w * problem.b_vals
                             * np.maximum(u, 0.0) ** problem.alpha
                             * np.maximum(v, 0.0) ** problem.beta))
            if B <= 0:
                continue
        return GridPair.from_arrays(grid, u, v)

    raise DirectionSearchFailed(
        f"no admissible initial direction for branch {branch.value} in 1000 samples"
    )


def _project_scaling(problem, stats, branch):
    """Branch scaling of a direction, or None if inadmissible."""
    roots = project(stats, problem.q, problem.alpha + problem.beta)
    if branch is Branch.MINUS:
        if roots.case is not FiberCase.TWO_ROOTS:
            return None
        return roots.t2
    if roots.case is FiberCase.NO_ADMISSIBLE_ROOT:
        return None
    return roots.t1


def _descend(problem: ValidatedProblem, form: GagliardoForm, branch: Branch,
             direction: GridPair, opts: SolverOptions):
    """One restart: returns a SolutionReport-shaped dict, or None if the
    initial direction admits no branch scaling."""
    q, ab = problem.q, problem.alpha + problem.beta

    stats = pair_stats(problem, form, direction)
    if stats.norm2 <= 0 or stats.K <= 0:
        return None
    t_used = _project_scaling(problem, stats, branch)
    if t_used is None:
        return None
    pair = direction.scaled(t_used)
    st = pair_stats(problem, form, pair)
    J_cur = st.norm2 / 2 - st.K / (1 - q) - st.B / ab

    trajectory = [(J_cur, math.sqrt(st.norm2), st.K, st.B)]
    step = opts.step
    hit_tol = False
    iters = 0
    for iters in range(1, opts.max_iters + 1):
        grad = energy_gradient(problem, form, pair, opts.eps_singular)
        accepted = False
        while step > _MIN_STEP:
            u_try = np.maximum(pair.u.values - step * grad.u.values, 0.0)
            v_try = np.maximum(pair.w.values - step * grad.w.values, 0.0)
            u_try[0] = u_try[-1] = 0.0
            v_try[0] = v_try[-1] = 0.0
            trial_dir = GridPair.from_arrays(problem.grid, u_try, v_try)
            tstats = pair_stats(problem, form, trial_dir)
            if tstats.norm2 <= 0 or tstats.K <= 0:
                step *= 0.5
                continue
            t_sel = _project_scaling(problem, tstats, branch)
            if t_sel is None:
                step *= 0.5
                continue
            n2 = tstats.norm2 * t_sel**2
            K = tstats.K * t_sel ** (1 - q)
            B = tstats.B * t_sel**ab
            J_new = n2 / 2 - K / (1 - q) - B / ab
            if J_new < J_cur:
                rel_drop = (J_cur - J_new) / max(abs(J_cur), 1e-300)
                pair = trial_dir.scaled(t_sel)
                t_used = t_sel
                J_cur = J_new
                trajectory.append((J_cur, math.sqrt(n2), K, B))
                step = opts.step
                accepted = True
                break
            step *= 0.5
        if not accepted:
            hit_tol = True  # no strictly decreasing step exists at float resolution
            break
        if rel_drop < opts.tol_energy:
            hit_tol = True
            break

    st = pair_stats(problem, form, pair)
    _, phi1, phi2 = phi_from_stats(st, q, ab, 1.0)
    scale = st.scale()
    on_branch = (phi2 > 0) if branch is Branch.PLUS else (phi2 < 0)
    converged = hit_tol and abs(phi1) <= opts.tol_manifold * scale and on_branch
    return {
        "pair": pair,
        "J": J_cur,
        "norm": math.sqrt(st.norm2),
        "phi1": phi1,
        "phi2": phi2,
        "t_used": t_used,
        "iters": iters,
        "converged": converged,
        "trajectory": trajectory,
        "residual": abs(phi1) / scale if scale > 0 else abs(phi1),
    }


def solve_branch(problem: ValidatedProblem, form: GagliardoForm, branch: Branch,
                 opts: SolverOptions = SolverOptions()) -> SolutionReport:
    """Minimize the energy over one manifold branch, best over restarts.

    Restart i uses the deterministic generator seeded with seed + i. Ties
    on energy break toward the smaller manifold residual, then the lower
    iteration count. Raises NoAdmissibleDirection if every restart fails
    to find a direction admitting the branch scaling.
    """
    best = None
    completed = 0
    for i in range(opts.restarts):
        rng = np.random.default_rng(opts.seed + i)
        try:
            direction = initial_direction(problem, rng, branch)
        except DirectionSearchFailed:
            continue
        result = _descend(problem, form, branch, direction, opts)
        if result is None:
            continue
        completed += 1
        if best is None:
            best = result
            continue
        key_new = (result["J"], result["residual"], result["iters"])
        key_old = (best["J"], best["residual"], best["iters"])
        if key_new < key_old:
            best = result

    if best is None:
        raise NoAdmissibleDirection(
            f"all {opts.restarts} restarts failed to reach branch {branch.value}; "
            "the parameter pair may be far outside the admissible region"
        )
    return SolutionReport(branch=branch, pair=best["pair"], J=best["J"],
                          norm=best["norm"], phi1=best["phi1"], phi2=best["phi2"],
                          t_used=best["t_used"], iters=best["iters"],
                          converged=best["converged"], restarts_used=completed,
                          trajectory=best["trajectory"])


def gap_check(plus: SolutionReport, minus: SolutionReport,
              constants: ConstantsReport) -> GapReport:
    """Check the strict norm separation of the two branches.

    Requires both reports converged and a constants report computed with
    the same embedding estimate as the norms being compared.
    """
    if not plus.converged or not minus.converged:
        raise NotConvergedInput("gap check needs two converged solutions")
    ordering_ok = minus.norm > constants.A0 > constants.A_lm > plus.norm
    return GapReport(norm_plus=plus.norm, norm_minus=minus.norm,
                     A0=constants.A0, A_lm=constants.A_lm,
                     ordering_ok=bool(ordering_ok))
