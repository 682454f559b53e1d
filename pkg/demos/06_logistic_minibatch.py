"""Regularized logistic regression with minibatch gradients.

Gradients come from random minibatches (an unbiased but noisy oracle), the
step is a fixed 0.1, and progress is measured by the true full-batch gradient
norm.  Stochastic BFGS has to discard most curvature pairs to protect its
positive definiteness; the penalized variants accept them all.

Runs on the bundled 200-sample synthetic fixture.  Point --dataset (or the
`dataset` config key) at a real LIBSVM file, e.g. ijcnn1, to reproduce the
full-scale experiment: `softqn-bench logreg --dataset ijcnn1`.
"""

import tempfile

import numpy as np

from softqn import metric_log10_grad
from softqn.experiments import fixture_dataset_path, run_logreg

print(f"fixture: {fixture_dataset_path()}")
with tempfile.TemporaryDirectory() as out:
    records, _ = run_logreg({"trials": 4}, out)

print(f"\n{'method':>8}  {'mean log10 ||grad|| @300':>24}  {'skipped updates (trial 0)':>26}")
for method, recs in records.items():
    finals = [metric_log10_grad(rec)[-1] for rec in recs]
    print(f"{method:>8}  {np.mean(finals):24.3f}  {recs[0].skipped_updates:26d}")
