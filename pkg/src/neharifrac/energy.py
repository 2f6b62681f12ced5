"""The energy functional, its ingredients, and the fiber map.

The functional splits into three parts computed from a pair (u, w):

    J = norm2/2 - K/(1-q) - B/(alpha+beta)

where norm2 is the squared product energy norm, K the weighted integral
of the positive parts to the power 1-q (the singular term acting through
lambda f and mu g), and B the sign-indefinite coupling integral of
b u_+^alpha w_+^beta. All interval integrals use the grid's trapezoid
weights, matching the quadrature used by the constants module so the
discrete inequality checks are exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonpositiveEpsilon, NonpositiveT
from .form import GagliardoForm, pair_norm_sq
from .problem import GridFunction, GridPair, ValidatedProblem


@dataclass(frozen=True)
class PairStats:
    """The three scalars a fiber map depends on."""

    norm2: float
    K: float
    B: float

    def scale(self) -> float:
        return self.norm2 + abs(self.K) + abs(self.B)


@dataclass(frozen=True)
class EnergyParts:
    norm2: float
    K: float
    B: float
    J: float


def K_value(problem: ValidatedProblem, pair: GridPair) -> float:
    """Weighted singular-term integral lam*int f u_+^{1-q} + mu*int g w_+^{1-q}."""
    w = problem.quad_weights()
    q = problem.q
    up = np.maximum(pair.u.values, 0.0)
    wp = np.maximum(pair.w.values, 0.0)
    return float(problem.lam * np.sum(w * problem.f_vals * up ** (1 - q))
                 + problem.mu * np.sum(w * problem.g_vals * wp ** (1 - q)))


def B_value(problem: ValidatedProblem, pair: GridPair) -> float:
    """Coupling integral int b u_+^alpha w_+^beta (sign-indefinite)."""
    w = problem.quad_weights()
    up = np.maximum(pair.u.values, 0.0)
    wp = np.maximum(pair.w.values, 0.0)
    return float(np.sum(w * problem.b_vals * up**problem.alpha * wp**problem.beta))


def pair_stats(problem: ValidatedProblem, form: GagliardoForm, pair: GridPair) -> PairStats:
    return PairStats(norm2=pair_norm_sq(form, pair),
                     K=K_value(problem, pair),
                     B=B_value(problem, pair))


def energy(problem: ValidatedProblem, form: GagliardoForm, pair: GridPair) -> EnergyParts:
    st = pair_stats(problem, form, pair)
    J = st.norm2 / 2 - st.K / (1 - problem.q) - st.B / (problem.alpha + problem.beta)
    return EnergyParts(norm2=st.norm2, K=st.K, B=st.B, J=J)


def _smoothed_primitive(t: np.ndarray, q: float, eps: float) -> np.ndarray:
    """Primitive of max(t, eps)^{-q}, C^1 across t = eps."""
    out = np.where(t >= eps,
                   np.maximum(t, eps) ** (1 - q) / (1 - q),
                   eps ** (1 - q) / (1 - q) + eps ** (-q) * (t - eps))
    return out


def energy_smoothed(problem: ValidatedProblem, form: GagliardoForm,
                    pair: GridPair, eps: float) -> float:
    """Energy with the singular term replaced by its eps-smoothed version.

    Below eps the integrand continues linearly with slope eps^{-q}, so the
    value is finite and the gradient formula of ``energy_gradient`` is its
    exact derivative everywhere.
    """
    if eps <= 0:
        raise NonpositiveEpsilon(f"eps must be positive, got {eps}")
    w = problem.quad_weights()
    q = problem.q
    norm2 = pair_norm_sq(form, pair)
    sing = (problem.lam * np.sum(w * problem.f_vals
                                 * _smoothed_primitive(pair.u.values, q, eps))
            + problem.mu * np.sum(w * problem.g_vals
                                  * _smoothed_primitive(pair.w.values, q, eps)))
    B = B_value(problem, pair)
    return float(norm2 / 2 - sing - B / (problem.alpha + problem.beta))


def energy_gradient(problem: ValidatedProblem, form: GagliardoForm,
                    pair: GridPair, eps: float) -> GridPair:
    """Gradient of the eps-smoothed energy with respect to the nodal values.

    Boundary components are zero (those values are pinned). The singular
    factor u^{-q} is floored at eps so descent always has a usable
    direction; where both components exceed eps this is the formal
    gradient of the energy itself.
    """
    if eps <= 0:
        raise NonpositiveEpsilon(f"eps must be positive, got {eps}")
    w = problem.quad_weights()
    q, al, be = problem.q, problem.alpha, problem.beta
    ab = al + be
    u = pair.u.values
    v = pair.w.values
    up = np.maximum(u, 0.0)
    vp = np.maximum(v, 0.0)

    gu = np.zeros_like(u)
    gv = np.zeros_like(v)
    Gu = form.matrix @ u[1:-1]
    Gv = form.matrix @ v[1:-1]
    i = slice(1, -1)
    gu[i] = (Gu - problem.lam * (w * problem.f_vals)[i] * np.maximum(u[i], eps) ** (-q)
             - (al / ab) * (w * problem.b_vals)[i] * up[i] ** (al - 1) * vp[i] ** be)
    gv[i] = (Gv - problem.mu * (w * problem.g_vals)[i] * np.maximum(v[i], eps) ** (-q)
             - (be / ab) * (w * problem.b_vals)[i] * up[i] ** al * vp[i] ** (be - 1))
    return GridPair(GridFunction(pair.grid, gu), GridFunction(pair.grid, gv))


def phi_from_stats(stats: PairStats, q: float, ab: float, t: float) -> tuple[float, float, float]:
    """Fiber map value and first two derivatives from precomputed stats."""
    if t <= 0:
        raise NonpositiveT(f"fiber map requires t > 0, got {t}")
    n2, K, B = stats.norm2, stats.K, stats.B
    val = t**2 * n2 / 2 - t ** (1 - q) * K / (1 - q) - t**ab * B / ab
    d1 = t * n2 - t ** (-q) * K - t ** (ab - 1) * B
    d2 = n2 + q * t ** (-q - 1) * K - (ab - 1) * t ** (ab - 2) * B
    return val, d1, d2


def phi(problem: ValidatedProblem, form: GagliardoForm, pair: GridPair,
        t: float) -> tuple[float, float, float]:
    """(phi(t), phi'(t), phi''(t)) for the fiber t -> J(t u, t w)."""
    st = pair_stats(problem, form, pair)
    return phi_from_stats(st, problem.q, problem.alpha + problem.beta, t)
