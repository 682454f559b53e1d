"""Iteration loop for stochastic quasi-Newton methods with noisy oracles.

One iteration computes a direction p = -(H + bias*I) g (or a Newton-type
direction from the exact Hessian), takes a step chosen by the step policy,
re-evaluates the noisy gradient, and feeds the pair (s, y) to the method's
inverse-Hessian update.  The loop tolerates noise-corrupted pairs: the soft QN
update is applied unconditionally, SP-BFGS skips pairs outside its positive
definiteness region, and plain BFGS skips pairs without positive curvature.
"""

import warnings
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .updates import (
    ConstantAlpha,
    ConstantBeta,
    biased_direction,
    bfgs_update,
    soft_qn_update,
    sp_bfgs_update,
)

__all__ = [
    "SoftQn",
    "SpBfgs",
    "StochasticBfgs",
    "Sgd",
    "ExactNewton",
    "SaddleFreeNewton",
    "FixedStep",
    "DiminishingStep",
    "NoisyArmijo",
    "Budget",
    "TrialRecord",
    "LineSearchResult",
    "saddle_free_abs",
    "compute_direction",
    "line_search_noisy",
    "run",
]

DIVERGENCE_NORM = 1e12


# --------------------------------------------------------------------------
# direction methods


@dataclass(frozen=True)
class SoftQn:
    """Penalized-secant quasi-Newton; updates on every pair."""

    policy: ConstantAlpha = ConstantAlpha(1.0)


@dataclass(frozen=True)
class SpBfgs:
    """Secant-penalized BFGS; skips pairs outside the PD region s'y > -1/beta."""

    policy: ConstantBeta = ConstantBeta(1.0)


@dataclass(frozen=True)
class StochasticBfgs:
    """Plain BFGS fed with noisy pairs; skips pairs without positive curvature."""


@dataclass(frozen=True)
class Sgd:
    """Steepest descent on the noisy gradient."""


@dataclass(frozen=True)
class ExactNewton:
    """Direction from the exact Hessian (gradient may still be noisy)."""


@dataclass(frozen=True)
class SaddleFreeNewton:
    """Newton direction preconditioned by |H|: eigenvalue magnitudes replace signs."""


def saddle_free_abs(a: np.ndarray) -> np.ndarray:
    """|A| = V |diag(w)| V' from the symmetric eigendecomposition of A."""
    w, v = np.linalg.eigh(a)
    out = (v * np.abs(w)) @ v.T
    return 0.5 * (out + out.T)


def _solve_or_pinv(a: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.solve(a, rhs)
    except np.linalg.LinAlgError:
        warnings.warn("singular matrix in direction solve; falling back to pseudo-inverse")
        return np.linalg.pinv(a) @ rhs


def compute_direction(method, state, g: np.ndarray, hess: Optional[np.ndarray] = None):
    """Descent direction of the given method at the current state."""
    if isinstance(method, Sgd):
        return -g
    if isinstance(method, SoftQn):
        return biased_direction(state.h, g, method.policy.bias)
    if isinstance(method, (SpBfgs, StochasticBfgs)):
        return biased_direction(state.h, g)
    if isinstance(method, ExactNewton):
        return -_solve_or_pinv(hess, g)
    if isinstance(method, SaddleFreeNewton):
        return -_solve_or_pinv(saddle_free_abs(hess), g)
    raise TypeError(f"unknown direction method {method!r}")


# --------------------------------------------------------------------------
# step policies


@dataclass(frozen=True)
class FixedStep:
    eta: float


@dataclass(frozen=True)
class DiminishingStep:
    """eta_k = scale/k with k counted from 1."""

    scale: float = 1.0


@dataclass(frozen=True)
class NoisyArmijo:
    """Backtracking line search with a noise allowance in both tests.

    From eta0, the step is multiplied by tau while the noisy value at the trial
    point exceeds f(x) + eta*c*p'g + 2*eps_tol, for at most max_backtracks
    halvings.  The last trial is accepted if it improves on f(x) + 2*eps_tol,
    otherwise the step is rejected (returns 0).
    """

    eta0: float = 1.0
    c: float = 1e-4
    tau: float = 0.5
    max_backtracks: int = 45
    eps_tol: float = 0.0


class LineSearchResult(NamedTuple):
    eta: float
    accepted: bool
    backtracks: int
    fun_evals: int
    interrupted: bool
    f_new: Optional[float] = None


def line_search_noisy(
    oracle,
    x,
    p,
    g_x,
    policy: NoisyArmijo,
    eval_cap: Optional[int] = None,
    f_x: Optional[float] = None,
):
    """Noisy backtracking search along p from x.

    The incumbent value may be passed in as ``f_x`` (the caller keeps the value
    of the previously accepted trial, so an accepted step costs one evaluation);
    when it is None, f(x) is evaluated here.  ``eval_cap`` limits the number of
    counted f calls this search may make; when it runs out, the search is
    interrupted and the usual accept-or-reject test is applied to the last
    evaluated trial (no further evaluations).  ``f_new`` in the result is the
    value at the point the search lands on: the accepted trial, or x itself on
    rejection (None only when the search was interrupted before evaluating).
    """
    used = 0

    def can_eval():
        return eval_cap is None or used < eval_cap

    if f_x is None:
        if not can_eval():
            return LineSearchResult(0.0, False, 0, used, True)
        f_x = oracle.f(x)
        used += 1
    eta = policy.eta0
    slope = policy.c * float(p @ g_x)
    allowance = 2.0 * policy.eps_tol
    if not can_eval():
        return LineSearchResult(0.0, False, 0, used, True)
    f_trial = oracle.f(x + eta * p)
    used += 1
    t = 0
    interrupted = False
    while f_trial > f_x + eta * slope + allowance and t < policy.max_backtracks:
        if not can_eval():
            interrupted = True
            break
        eta *= policy.tau
        t += 1
        f_trial = oracle.f(x + eta * p)
        used += 1
    accepted = f_trial < f_x + allowance
    return LineSearchResult(
        eta if accepted else 0.0, accepted, t, used, interrupted, f_trial if accepted else f_x
    )


# --------------------------------------------------------------------------
# run loop


@dataclass(frozen=True)
class Budget:
    """Stop after a fixed number of iterations, counted f evaluations, or both."""

    iterations: Optional[int] = None
    fun_evals: Optional[int] = None

    def __post_init__(self):
        if self.iterations is None and self.fun_evals is None:
            raise ValueError("budget needs iterations and/or fun_evals")


@dataclass
class _State:
    x: np.ndarray
    g: np.ndarray
    h: Optional[np.ndarray]
    k: int = 0


@dataclass
class TrialRecord:
    """Everything recorded along one run, on exact-oracle channels.

    ``grad_norms``/``suboptimality`` are per-iteration (index 0 is the start
    point); ``eval_trace`` holds (function-evaluation count, exact value) at
    every adopted iterate for evaluation-aligned comparisons.
    """

    grad_norms: np.ndarray
    suboptimality: np.ndarray
    eval_trace: list
    final_x: np.ndarray
    iterations: int
    fun_evals: int
    grad_evals: int
    step_rejections: int
    skipped_updates: int
    diverged: bool
    phi_star: Optional[float]
    iterates: Optional[list] = None


def _needs_h(method) -> bool:
    return isinstance(method, (SoftQn, SpBfgs, StochasticBfgs))


def _needs_hess(method) -> bool:
    return isinstance(method, (ExactNewton, SaddleFreeNewton))


def run(
    oracle,
    method,
    step,
    budget: Budget,
    h0: Optional[np.ndarray] = None,
    keep_iterates: bool = False,
) -> TrialRecord:
    """Run one trial of a method against a noisy oracle.

    The inverse-Hessian approximation starts at the identity unless ``h0`` is
    given.  Divergence (non-finite iterate or norm above 1e12) stops the run
    and freezes the per-iteration traces at their last finite values.
    """
    x = np.array(oracle.x0, dtype=float, copy=True)
    g = oracle.g(x)
    h = None
    if _needs_h(method):
        h = np.eye(oracle.dim) if h0 is None else np.array(h0, dtype=float, copy=True)
    state = _State(x=x, g=g, h=h)

    phi_star = oracle.problem.phi_star
    grad_norms = [float(np.linalg.norm(oracle.true_grad(x)))]
    phis = [oracle.true_phi(x)]
    eval_trace = [(oracle.fun_evals, phis[0])]
    iterates = [x.copy()] if keep_iterates else None
    rejections = 0
    skipped = 0
    diverged = False
    f_inc = None  # noisy value at the incumbent; reused across line searches

    def out_of_budget():
        if budget.iterations is not None and state.k >= budget.iterations:
            return True
        if budget.fun_evals is not None and oracle.fun_evals >= budget.fun_evals:
            return True
        return False

    while not out_of_budget():
        k = state.k + 1
        hess = oracle.hess(state.x) if _needs_hess(method) else None
        p = compute_direction(method, state, state.g, hess)

        interrupted = False
        if isinstance(step, NoisyArmijo):
            cap = None
            if budget.fun_evals is not None:
                cap = budget.fun_evals - oracle.fun_evals
            ls = line_search_noisy(oracle, state.x, p, state.g, step, eval_cap=cap, f_x=f_inc)
            eta = ls.eta
            interrupted = ls.interrupted
            if ls.f_new is not None:
                f_inc = ls.f_new
            if not ls.accepted:
                rejections += 1
        elif isinstance(step, DiminishingStep):
            eta = step.scale / k
        elif isinstance(step, FixedStep):
            eta = step.eta
        else:
            raise TypeError(f"unknown step policy {step!r}")

        x_new = state.x + eta * p
        if not np.all(np.isfinite(x_new)) or np.linalg.norm(x_new) > DIVERGENCE_NORM:
            diverged = True
            break

        phi_new = oracle.true_phi(x_new)
        gn_new = float(np.linalg.norm(oracle.true_grad(x_new)))
        if not (np.isfinite(phi_new) and np.isfinite(gn_new)):
            diverged = True
            break
        state.k = k
        eval_trace.append((oracle.fun_evals, phi_new))
        grad_norms.append(gn_new)
        phis.append(phi_new)
        if keep_iterates:
            iterates.append(x_new.copy())

        if interrupted:
            state.x = x_new
            break

        g_new = oracle.g(x_new)
        s = x_new - state.x
        y = g_new - state.g

        if isinstance(method, SoftQn):
            alpha = method.policy.value(state.h, s, y)
            state.h, _ = soft_qn_update(state.h, s, y, alpha)
        elif isinstance(method, SpBfgs):
            if float(s @ s) == 0.0:
                skipped += 1
            else:
                beta = method.policy.value(s, y)
                if float(s @ y) > -1.0 / beta + 1e-12 * (1.0 + 1.0 / beta):
                    state.h = sp_bfgs_update(state.h, s, y, beta)
                else:
                    skipped += 1
        elif isinstance(method, StochasticBfgs):
            s_t_y = float(s @ y)
            tol = 1e-12 * float(np.linalg.norm(s)) * float(np.linalg.norm(y))
            if s_t_y > tol:
                state.h = bfgs_update(state.h, s, y)
            else:
                skipped += 1

        state.x = x_new
        state.g = g_new

    # pad per-iteration traces on early stops so trials stay comparable
    if budget.iterations is not None and len(grad_norms) < budget.iterations + 1:
        pad = budget.iterations + 1 - len(grad_norms)
        grad_norms.extend([grad_norms[-1]] * pad)
        phis.extend([phis[-1]] * pad)

    phis_arr = np.array(phis)
    subopt = phis_arr - phi_star if phi_star is not None else np.full(len(phis), np.nan)
    return TrialRecord(
        grad_norms=np.array(grad_norms),
        suboptimality=subopt,
        eval_trace=eval_trace,
        final_x=state.x.copy(),
        iterations=state.k,
        fun_evals=oracle.fun_evals,
        grad_evals=oracle.grad_evals,
        step_rejections=rejections,
        skipped_updates=skipped,
        diverged=diverged,
        phi_star=phi_star,
        iterates=iterates,
    )
