"""Preset benchmark protocols built on the Monte Carlo harness.

Four experiments: noisy logistic regression with minibatch gradients, random
convex QPs with Gaussian gradient noise and a diminishing step, the classic
smooth test set under relative function/gradient noise with a noisy line
search, and the deterministic 2-D saddle walk.  Each writes the long-format
CSV, per-figure plot data, and (where meaningful) a summary table.
"""

import os
from importlib import resources

import numpy as np

from .bench import MetricSpec, align_trace, emit_csv, metric_log10_grad, metric_normalized_subopt, monte_carlo
from .noise import GaussianNoise, MinibatchSampling, NoisyOracle, SphereNoise, UniformNoise, derive_seed
from .problems import cutest_like, gen_random_qp, load_libsvm, logistic_problem, toy_2d
from .solver import (
    Budget,
    DiminishingStep,
    ExactNewton,
    FixedStep,
    NoisyArmijo,
    SaddleFreeNewton,
    Sgd,
    SoftQn,
    SpBfgs,
    StochasticBfgs,
    run,
    saddle_free_abs,
)
from .updates import ConstantAlpha, CurvatureRelaxedBeta, StepNormBeta

__all__ = [
    "fixture_dataset_path",
    "run_qp",
    "run_cutest",
    "run_logreg",
    "run_toy",
    "QP_DEFAULTS",
    "CUTEST_DEFAULTS",
    "LOGREG_DEFAULTS",
    "TOY_DEFAULTS",
]

QP_DEFAULTS = {
    "seed": 1234,
    "trials": 20,
    "n": 50,
    "iterations": 1000,
    "noise_scale": 1.0,
    "step_scale": 1.0,
    "alpha": 1e-4,
    "beta": 1e-2,
    "relax": 0.9,
    "methods": ["newton", "softqn", "spbfgs", "bfgs", "sgd"],
}

CUTEST_DEFAULTS = {
    "seed": 1234,
    "trials": 30,
    "problem": "DIXMAANA",
    "budget": 2000,
    "noise_rel": 1e-4,
    "alpha": 1e6,
    "beta_scale": 1e8,
    "beta_floor": 1e-10,
    "eta0": 1.0,
    "armijo_c": 1e-4,
    "tau": 0.5,
    "max_backtracks": 45,
    "methods": ["softqn", "spbfgs"],
}

LOGREG_DEFAULTS = {
    "seed": 1234,
    "trials": 10,
    "dataset": "",
    "rho": 0.1,
    "eta": 0.1,
    "iterations": 300,
    "batch": 0,  # 0 keeps the reference sampling fraction (1000 of 49990)
    "alpha": 0.5,
    "beta_coeff": 0.1,
    "beta_floor": 1e-10,
    "methods": ["softqn", "spbfgs", "bfgs", "sgd"],
}

TOY_DEFAULTS = {
    "seed": 1234,
    "iterations": 500,
    "eta": 0.01,
    "alpha": 8e5,
    "methods": ["softqn", "saddle_free_newton"],
}


def fixture_dataset_path() -> str:
    """Path of the bundled 200-row synthetic LIBSVM fixture (22 features)."""
    return str(resources.files("softqn").joinpath("data/synthetic_binary_n22.libsvm"))


def _final(values_fn):
    return lambda record: float(values_fn(record)[-1])


def run_qp(params, out_dir):
    """Random convex QPs, Gaussian gradient noise, diminishing step eta_k = c/k.

    A fresh problem is drawn per trial and shared (with the noise stream) by all
    methods of that trial, so comparisons are paired.
    """
    p = {**QP_DEFAULTS, **params}
    methods = {
        "newton": lambda: ExactNewton(),
        "softqn": lambda: SoftQn(ConstantAlpha(p["alpha"])),
        "spbfgs": lambda: SpBfgs(CurvatureRelaxedBeta(p["beta"], p["relax"])),
        "bfgs": lambda: StochasticBfgs(),
        "sgd": lambda: Sgd(),
    }
    _check_methods(p["methods"], methods)
    budget = Budget(iterations=int(p["iterations"]))
    step = DiminishingStep(p["step_scale"])
    problems = {}

    def trial_problem(t):
        if t not in problems:
            problems[t] = gen_random_qp(int(p["n"]), derive_seed(p["seed"], "qp-problem", t))
        return problems[t]

    def trial_fn(m, t):
        problem = trial_problem(t)
        oracle = NoisyOracle(
            problem,
            grad_noise=GaussianNoise(p["noise_scale"]),
            seed=derive_seed(p["seed"], t),
        )
        return run(oracle, methods[m](), step, budget)

    records = monte_carlo(trial_fn, p["methods"], int(p["trials"]))

    def subopt_series(record):
        phi0 = record.suboptimality[0] + record.phi_star
        return metric_normalized_subopt(record, phi0, record.phi_star)

    metric = MetricSpec("normalized_log10_subopt", "iteration", subopt_series, band="mean3sd")
    written = emit_csv(
        out_dir,
        "qp",
        f"qp{p['n']}",
        records,
        [metric],
        final_metric=("final_normalized_log10_subopt", _final(subopt_series)),
    )
    return records, written


def run_cutest(params, out_dir):
    """Smooth test problems under relative noise, with the noisy backtracking search.

    Function noise is uniform with half-width e_f = noise_rel*|phi(x0)|; gradient
    noise is uniform on the sphere of radius e_g = noise_rel*|grad(x0)|.  Both
    methods of a trial replay the same noise streams.
    """
    p = {**CUTEST_DEFAULTS, **params}
    problem = cutest_like(p["problem"])
    e_f = p["noise_rel"] * abs(problem.phi(problem.x0))
    e_g = p["noise_rel"] * float(np.linalg.norm(problem.grad(problem.x0)))
    step = NoisyArmijo(
        eta0=p["eta0"],
        c=p["armijo_c"],
        tau=p["tau"],
        max_backtracks=int(p["max_backtracks"]),
        eps_tol=e_f,
    )
    methods = {
        "softqn": lambda: SoftQn(ConstantAlpha(p["alpha"])),
        "spbfgs": lambda: SpBfgs(StepNormBeta(p["beta_scale"] / e_g, p["beta_floor"])),
    }
    _check_methods(p["methods"], methods)
    budget = Budget(fun_evals=int(p["budget"]))

    def trial_fn(m, t):
        oracle = NoisyOracle(
            problem,
            fun_noise=UniformNoise(e_f),
            grad_noise=SphereNoise(e_g),
            seed=derive_seed(p["seed"], t),
        )
        return run(oracle, methods[m](), step, budget)

    records = monte_carlo(trial_fn, p["methods"], int(p["trials"]))

    grid_max = int(p["budget"])
    metric = MetricSpec(
        "suboptimality", "fun_eval", lambda r: align_trace(r, grid_max).values, band="quartiles"
    )
    written = emit_csv(
        out_dir,
        f"cutest_{problem.name.lower()}",
        problem.name,
        records,
        [metric],
        final_metric=("final_suboptimality", lambda r: float(align_trace(r, grid_max).values[-1])),
    )
    return records, written


def run_logreg(params, out_dir):
    """Regularized logistic regression with minibatch gradients and a fixed step."""
    p = {**LOGREG_DEFAULTS, **params}
    path = p["dataset"] or fixture_dataset_path()
    data = load_libsvm(path)
    problem = logistic_problem(data, p["rho"])
    batch = int(p["batch"])
    if batch <= 0:
        batch = max(1, round(data.n_samples * 1000 / 49990))
    batch = min(batch, data.n_samples)
    methods = {
        "softqn": lambda: SoftQn(ConstantAlpha(p["alpha"])),
        "spbfgs": lambda: SpBfgs(StepNormBeta(p["beta_coeff"], p["beta_floor"])),
        "bfgs": lambda: StochasticBfgs(),
        "sgd": lambda: Sgd(),
    }
    _check_methods(p["methods"], methods)
    budget = Budget(iterations=int(p["iterations"]))
    step = FixedStep(p["eta"])

    def trial_fn(m, t):
        oracle = NoisyOracle(
            problem,
            grad_noise=MinibatchSampling(batch),
            seed=derive_seed(p["seed"], m, t),
        )
        return run(oracle, methods[m](), step, budget)

    records = monte_carlo(trial_fn, p["methods"], int(p["trials"]))
    metric = MetricSpec("log10_grad_norm", "iteration", metric_log10_grad, band="mean3sd")
    written = emit_csv(
        out_dir,
        "logreg",
        os.path.basename(path),
        records,
        [metric],
        final_metric=("final_log10_grad_norm", _final(metric_log10_grad)),
    )
    return records, written


def run_toy(params, out_dir):
    """Deterministic walk on the 2-D saddle landscape; writes iterate paths."""
    p = {**TOY_DEFAULTS, **params}
    problem = toy_2d()
    budget = Budget(iterations=int(p["iterations"]))
    step = FixedStep(p["eta"])
    h0 = np.linalg.inv(saddle_free_abs(problem.hess(problem.x0)))
    methods = {
        "softqn": lambda: (SoftQn(ConstantAlpha(p["alpha"])), h0),
        "saddle_free_newton": lambda: (SaddleFreeNewton(), None),
    }
    _check_methods(p["methods"], methods)

    def trial_fn(m, t):
        method, start_h = methods[m]()
        oracle = NoisyOracle(problem, seed=derive_seed(p["seed"], m, t))
        return run(oracle, method, step, budget, h0=start_h, keep_iterates=True)

    records = monte_carlo(trial_fn, p["methods"], 1)
    metric = MetricSpec("log10_grad_norm", "iteration", metric_log10_grad, band="mean3sd")
    written = emit_csv(out_dir, "toy", problem.name, records, [metric])
    for m, recs in records.items():
        path = os.path.join(out_dir, f"fig_toy_path_{m}.csv")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("index,x1,x2\n")
            for i, xk in enumerate(recs[0].iterates):
                fh.write(f"{i},{xk[0]:.8e},{xk[1]:.8e}\n")
        written.append(path)
    return records, written


def _check_methods(requested, available):
    unknown = [m for m in requested if m not in available]
    if unknown:
        raise ValueError(
            f"unknown method(s) {', '.join(unknown)}; available: {', '.join(available)}"
        )
