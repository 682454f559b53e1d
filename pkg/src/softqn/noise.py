"""Noisy function/gradient oracles with deterministic, replayable streams.

A NoisyOracle wraps a Problem and serves noisy values f(x) and gradients g(x)
while counting every call; the exact value, gradient and Hessian stay queryable
through a separate channel that does not touch the counters.  Each oracle owns
three independent RNG streams (function noise, gradient noise, minibatch
sampling) seeded from a single integer, so the j-th draw of a stream depends
only on (seed, j) and runs replay identically.
"""

import hashlib
from dataclasses import dataclass

import numpy as np

__all__ = [
    "NoNoise",
    "UniformNoise",
    "GaussianNoise",
    "SphereNoise",
    "MinibatchSampling",
    "NoisyOracle",
    "make_noisy",
    "derive_seed",
]

_STREAM_FUN = 0
_STREAM_GRAD = 1
_STREAM_BATCH = 2


def derive_seed(*parts) -> int:
    """Stable 64-bit seed from a mixed tuple of ints and strings."""
    h = hashlib.blake2s(digest_size=8)
    for p in parts:
        if isinstance(p, str):
            h.update(b"s" + p.encode("utf-8"))
        else:
            h.update(b"i" + int(p).to_bytes(16, "little", signed=True))
        h.update(b"\x00")
    return int.from_bytes(h.digest(), "little")


@dataclass(frozen=True)
class NoNoise:
    """Exact values; the oracle still counts calls."""


@dataclass(frozen=True)
class UniformNoise:
    """Additive scalar noise uniform on [-half_width, half_width] (function values)."""

    half_width: float


@dataclass(frozen=True)
class GaussianNoise:
    """Additive N(0, cov_scale*I) noise (gradients)."""

    cov_scale: float


@dataclass(frozen=True)
class SphereNoise:
    """Additive noise uniform on the sphere of the given radius (gradients)."""

    radius: float


@dataclass(frozen=True)
class MinibatchSampling:
    """Replace the gradient with a minibatch estimate of the given size."""

    batch: int


class NoisyOracle:
    """Counted noisy f/g access to a problem, plus an uncounted exact channel."""

    def __init__(self, problem, fun_noise=None, grad_noise=None, seed: int = 0):
        fun_noise = fun_noise if fun_noise is not None else NoNoise()
        grad_noise = grad_noise if grad_noise is not None else NoNoise()
        if not isinstance(fun_noise, (NoNoise, UniformNoise)):
            raise ValueError(f"unsupported function-noise model {fun_noise!r}")
        if not isinstance(grad_noise, (NoNoise, GaussianNoise, SphereNoise, MinibatchSampling)):
            raise ValueError(f"unsupported gradient-noise model {grad_noise!r}")
        if isinstance(grad_noise, MinibatchSampling) and problem.batch_grad is None:
            raise ValueError("minibatch sampling needs a problem with batch_grad")
        self.problem = problem
        self.fun_noise = fun_noise
        self.grad_noise = grad_noise
        self.seed = int(seed)
        self._rng_fun = np.random.default_rng([self.seed & (2**63 - 1), _STREAM_FUN])
        self._rng_grad = np.random.default_rng([self.seed & (2**63 - 1), _STREAM_GRAD])
        self._rng_batch = np.random.default_rng([self.seed & (2**63 - 1), _STREAM_BATCH])
        self._fun_evals = 0
        self._grad_evals = 0

    @property
    def x0(self) -> np.ndarray:
        return self.problem.x0

    @property
    def dim(self) -> int:
        return self.problem.dim

    @property
    def fun_evals(self) -> int:
        return self._fun_evals

    @property
    def grad_evals(self) -> int:
        return self._grad_evals

    def f(self, x) -> float:
        """Noisy function value; increments the function-evaluation counter."""
        self._fun_evals += 1
        v = self.problem.phi(x)
        if isinstance(self.fun_noise, UniformNoise):
            hw = self.fun_noise.half_width
            v = v + float(self._rng_fun.uniform(-hw, hw))
        return float(v)

    def g(self, x) -> np.ndarray:
        """Noisy gradient; increments the gradient-evaluation counter."""
        self._grad_evals += 1
        gn = self.grad_noise
        if isinstance(gn, MinibatchSampling):
            return self.problem.batch_grad(x, gn.batch, self._rng_batch)
        g = self.problem.grad(x)
        if isinstance(gn, GaussianNoise):
            g = g + np.sqrt(gn.cov_scale) * self._rng_grad.standard_normal(g.shape)
        elif isinstance(gn, SphereNoise):
            v = self._rng_grad.standard_normal(g.shape)
            nv = np.linalg.norm(v)
            while nv == 0.0:  # pragma: no cover - essentially impossible
                v = self._rng_grad.standard_normal(g.shape)
                nv = np.linalg.norm(v)
            g = g + (gn.radius / nv) * v
        return g

    # exact channel: never counted, used for metrics and Newton baselines
    def true_phi(self, x) -> float:
        return float(self.problem.phi(x))

    def true_grad(self, x) -> np.ndarray:
        return self.problem.grad(x)

    def hess(self, x) -> np.ndarray:
        if self.problem.hess is None:
            raise ValueError(f"problem {self.problem.name!r} has no Hessian")
        return self.problem.hess(x)


def make_noisy(problem, fun_noise=None, grad_noise=None, seed: int = 0) -> NoisyOracle:
    """Wrap a problem in a counted noisy oracle (see NoisyOracle)."""
    return NoisyOracle(problem, fun_noise=fun_noise, grad_noise=grad_noise, seed=seed)
