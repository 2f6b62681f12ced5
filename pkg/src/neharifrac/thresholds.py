"""Explicit constants: admissibility region, gap radii, energy bounds.

Everything here is closed-form arithmetic in the exponents except the
Sobolev-type embedding constant S, which is estimated as the minimum of
the discrete Rayleigh-type quotient

    Q(u) = u' G u / (sum_i w_i |u_i|^r)^{2/r},        r = alpha + beta,

over a candidate family, each candidate refined by normalized gradient
descent. The estimate is an upper bound for the discrete infimum and is
guaranteed not to exceed the quotient of any supplied candidate, which is
the property the inequality checks rely on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

import numpy as np

from .errors import (
    EmptyCandidateSet,
    NonpositiveBSup,
    NonpositiveLambda,
    NonpositiveS,
)
from .form import GagliardoForm
from .problem import GridFunction, GridSpec, ValidatedProblem


def q_star(alpha: float, beta: float, q: float) -> float:
    """Conjugate integrability exponent (alpha+beta)/(alpha+beta-1+q)."""
    ab = alpha + beta
    return ab / (ab - 1 + q)


def weight_norm(r: float, values: np.ndarray, weights: np.ndarray) -> float:
    """Discrete L^r norm (sum w_i |v_i|^r)^{1/r} with quadrature weights."""
    if r < 1:
        raise ValueError(f"weight_norm requires r >= 1, got {r}")
    total = float(np.sum(weights * np.abs(values) ** r))
    return total ** (1.0 / r)


def lambda_aggregate(lam: float, mu: float, f_norm: float, g_norm: float,
                     q: float) -> float:
    """Aggregated parameter size (|lam| f_norm)^{2/(1+q)} + (|mu| g_norm)^{2/(1+q)}."""
    e = 2.0 / (1.0 + q)
    return (abs(lam) * f_norm) ** e + (abs(mu) * g_norm) ** e


def threshold_C(alpha: float, beta: float, q: float, S: float, b_sup: float) -> float:
    """Admissibility threshold: the Lambda value below which the fiber
    maximum stays positive for every direction."""
    if S <= 0:
        raise NonpositiveS(f"threshold needs S > 0, got {S}")
    if b_sup <= 0:
        raise NonpositiveBSup(f"threshold needs b_sup > 0, got {b_sup}")
    ab = alpha + beta
    return (((1 + q) / (ab - 1 + q)) ** (2 / (ab - 2))
            * ((ab - 2) / (ab - 1 + q)) ** (2 / (1 + q))
            * (1.0 / b_sup) ** (2 / (ab - 2))
            * S ** (2 * (ab - 1 + q) / ((1 + q) * (ab - 2))))


def gap_radii(alpha: float, beta: float, q: float, S: float, b_sup: float,
              Lambda: float) -> tuple[float, float]:
    """Norm radii separating the two manifold branches.

    Local-max branch members have norm above A0; local-min branch members
    have norm below A_lm; A_lm < A0 exactly when Lambda < threshold_C.
    """
    if S <= 0:
        raise NonpositiveS(f"gap radii need S > 0, got {S}")
    if b_sup <= 0:
        raise NonpositiveBSup(f"gap radii need b_sup > 0, got {b_sup}")
    ab = alpha + beta
    A0 = ((1 + q) / ((ab - 1 + q) * b_sup) * S ** (ab / 2)) ** (1 / (ab - 2))
    A_lm = ((ab - 1 + q) / (ab - 2) * S ** (-(1 - q) / 2)) ** (1 / (1 + q)) * math.sqrt(Lambda)
    return A0, A_lm


def E_coefficient(alpha: float, beta: float, q: float, S: float, b_sup: float,
                  Lambda: float) -> float:
    """Coefficient E with sign(E) = sign(threshold_C - Lambda).

    psi(t_max) >= E * norm^{alpha+beta} for admissible directions, so
    E > 0 certifies the two-root fiber structure.
    """
    if S <= 0:
        raise NonpositiveS(f"E needs S > 0, got {S}")
    if Lambda <= 0:
        raise NonpositiveLambda(f"E needs Lambda > 0, got {Lambda}")
    ab = alpha + beta
    e = (ab - 2) / (1 + q)
    return ((1 + q) / (ab - 1 + q) * ((ab - 2) / (ab - 1 + q)) ** e
            * (S ** ((1 - q) / 2) / Lambda ** ((1 + q) / 2)) ** e
            - b_sup * S ** (-ab / 2))


def energy_lower_bound(alpha: float, beta: float, q: float, S: float,
                       Lambda: float) -> float:
    """Reported lower bound for the energy on the manifold (<= 0)."""
    if S <= 0:
        raise NonpositiveS(f"lower bound needs S > 0, got {S}")
    ab = alpha + beta
    return (-(1 + q) * (ab - 2) / ((1 - q) * ab)
            * ((ab - 1 + q) / (2 * (ab - 2))) ** (2 / (1 + q))
            * Lambda * S ** (-(1 - q) / (1 + q)))


def rho_minimum(c: float, d: float, q: float) -> tuple[float, float]:
    """Minimizer and minimum of rho(t) = c t^2 - d t^{1-q} on t > 0.

    rho bounds the manifold energy from below with
    c = 1/2 - 1/(alpha+beta) and
    d = (1/(1-q) - 1/(alpha+beta)) Lambda^{(1+q)/2} S^{-(1-q)/2}.
    """
    t_min = (d * (1 - q) / (2 * c)) ** (1 / (1 + q))
    rho_min = -(1 + q) / 2 * d ** (2 / (1 + q)) * ((1 - q) / (2 * c)) ** ((1 - q) / (1 + q))
    return t_min, rho_min


def rho_coefficients(alpha: float, beta: float, q: float, S: float,
                     Lambda: float) -> tuple[float, float]:
    """(c, d) of the scalar comparison rho(t) = c t^2 - d t^{1-q}."""
    ab = alpha + beta
    c = 0.5 - 1.0 / ab
    d = (1.0 / (1 - q) - 1.0 / ab) * Lambda ** ((1 + q) / 2) * S ** (-(1 - q) / 2)
    return c, d


# ---------------------------------------------------------------------------
# Sobolev constant estimation


def rayleigh_quotient(form: GagliardoForm, r: float, values: np.ndarray) -> float:
    """Discrete embedding quotient of one candidate (scale-invariant)."""
    v = values[1:-1]
    num = float(v @ form.matrix @ v)
    den = float(np.sum(form.quad_weights * np.abs(values) ** r)) ** (2.0 / r)
    if den == 0.0:
        raise ZeroDivisionError("candidate is identically zero")
    return num / den


def _quotient_gradient(form: GagliardoForm, r: float, values: np.ndarray) -> np.ndarray:
    v = values[1:-1]
    num = float(v @ form.matrix @ v)
    den_sum = float(np.sum(form.quad_weights * np.abs(values) ** r))
    den = den_sum ** (2.0 / r)
    g = np.zeros_like(values)
    g[1:-1] = (2.0 * (form.matrix @ v) / den
               - (num / den) * (2.0 / r)
               * (r * form.quad_weights[1:-1] * np.sign(v) * np.abs(v) ** (r - 1))
               / den_sum)
    return g


def _descend_quotient(form: GagliardoForm, r: float, values: np.ndarray,
                      max_iters: int, step0: float) -> float:
    u = values / np.abs(values).max()
    best = rayleigh_quotient(form, r, u)
    step = step0
    for _ in range(max_iters):
        g = _quotient_gradient(form, r, u)
        gn = np.linalg.norm(g)
        if gn == 0.0:
            break
        accepted = False
        while step > 1e-14:
            trial = u - step * g / gn
            trial[0] = trial[-1] = 0.0
            if not np.any(trial[1:-1]):
                step *= 0.5
                continue
            qt = rayleigh_quotient(form, r, trial)
            if qt < best:
                u, best = trial, qt
                step = min(step * 2.0, step0)
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
    return best


def estimate_S(form: GagliardoForm, r: float, candidates,
               max_iters: int = 200, step: float = 0.5) -> float:
    """Upper estimate of the discrete embedding constant.

    Returns min over the candidates and their descent refinements of the
    Rayleigh quotient; never exceeds the quotient of any supplied
    candidate (descent only accepts decreases).
    """
    cand_list = [c.values if isinstance(c, GridFunction) else np.asarray(c, dtype=float)
                 for c in candidates]
    if not cand_list:
        raise EmptyCandidateSet("estimate_S needs at least one candidate")
    best = math.inf
    for values in cand_list:
        best = min(best, rayleigh_quotient(form, r, values))
        best = min(best, _descend_quotient(form, r, values, max_iters, step))
    return best


def default_candidates(grid: GridSpec) -> list[np.ndarray]:
    """Seed family for the quotient search: hat, smooth bump, half-cosine."""
    x = grid.nodes()
    mid = 0.5 * (grid.left + grid.right)
    halfwidth = 0.5 * (grid.right - grid.left)
    hat = np.zeros(grid.node_count)
    hat[grid.cells // 2] = 1.0
    bump = np.maximum(0.0, 1 - ((x - mid) / (0.6 * halfwidth)) ** 2) ** 2
    cosine = np.cos(0.5 * np.pi * (x - mid) / halfwidth)
    for c in (bump, cosine):
        c[0] = c[-1] = 0.0
    return [hat, bump, cosine]


def estimate_S_coupled(form: GagliardoForm, alpha: float, beta: float,
                       candidates, max_iters: int = 60, step: float = 0.5) -> float:
    """Coupled-quotient analogue over pairs (informational only).

    Uses the diagonal pairs (c, c) built from the scalar candidates and a
    short descent in the product space.
    """
    ab = alpha + beta
    w = form.quad_weights

    def quot(u, v):
        ui, vi = u[1:-1], v[1:-1]
        num = float(ui @ form.matrix @ ui + vi @ form.matrix @ vi)
        den = float(np.sum(w * np.abs(u) ** alpha * np.abs(v) ** beta)) ** (2.0 / ab)
        return num / den

    cand_list = [c.values if isinstance(c, GridFunction) else np.asarray(c, dtype=float)
                 for c in candidates]
    if not cand_list:
        raise EmptyCandidateSet("estimate_S_coupled needs at least one candidate")
    best = math.inf
    for c in cand_list:
        u = c / np.abs(c).max()
        v = u.copy()
        cur = quot(u, v)
        best = min(best, cur)
        st = step
        for _ in range(max_iters):
            # numerical gradient-free refinement: nudge along the scalar
            # quotient's descent direction for both components
            g = _quotient_gradient(form, ab, u)
            gn = np.linalg.norm(g)
            if gn == 0.0:
                break
            moved = False
            while st > 1e-12:
                uu = u - st * g / gn
                uu[0] = uu[-1] = 0.0
                if not np.any(uu[1:-1]):
                    st *= 0.5
                    continue
                qt = quot(uu, uu)
                if qt < cur:
                    u = v = uu
                    cur = qt
                    best = min(best, cur)
                    st = min(st * 2.0, step)
                    moved = True
                    break
                st *= 0.5
            if not moved:
                break
    return best


# ---------------------------------------------------------------------------
# Report


@dataclass(frozen=True)
class ConstantsReport:
    q_star: float
    f_norm: float
    g_norm: float
    b_sup: float
    Lambda: float
    S: float
    C: float
    E: float
    A0: float
    A_lm: float
    J_lower: float
    in_gamma: bool
    S_bar: float

    def as_dict(self) -> dict:
        return asdict(self)


def compute_constants(problem: ValidatedProblem, form: GagliardoForm,
                      extra_candidates=()) -> ConstantsReport:
    """Evaluate every explicit constant for one problem.

    extra_candidates (nodal arrays or GridFunctions) are added to the
    default quotient-search family; passing solver outputs here makes the
    discrete embedding step of the inequality chains hold for them.
    """
    al, be, q = problem.alpha, problem.beta, problem.q
    ab = al + be
    w = problem.quad_weights()
    qs = q_star(al, be, q)
    f_norm = weight_norm(qs, problem.f_vals, w)
    g_norm = weight_norm(qs, problem.g_vals, w)
    b_sup = float(np.max(np.maximum(problem.b_vals, 0.0)))
    Lambda = lambda_aggregate(problem.lam, problem.mu, f_norm, g_norm, q)

    candidates = default_candidates(problem.grid)
    candidates += [c.values if isinstance(c, GridFunction) else np.asarray(c, dtype=float)
                   for c in extra_candidates]
    S = estimate_S(form, ab, candidates)
    S_bar = estimate_S_coupled(form, al, be, candidates)

    C = threshold_C(al, be, q, S, b_sup)
    in_gamma = 0.0 < Lambda < C
    E = E_coefficient(al, be, q, S, b_sup, Lambda) if Lambda > 0 else math.inf
    A0, A_lm = gap_radii(al, be, q, S, b_sup, Lambda)
    J_lower = energy_lower_bound(al, be, q, S, Lambda)
    return ConstantsReport(q_star=qs, f_norm=f_norm, g_norm=g_norm, b_sup=b_sup,
                           Lambda=Lambda, S=S, C=C, E=E, A0=A0, A_lm=A_lm,
                           J_lower=J_lower, in_gamma=in_gamma, S_bar=S_bar)
