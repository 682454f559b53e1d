"""Walking through a saddle instead of stopping at it.

On a 2-D landscape with four minima, four saddles and a local max, a walk
started near the origin with an absolute-Hessian starting matrix first heads
for a saddle.  Saddle-free Newton stalls there (the gradient vanishes, and
with it the step).  The penalized update keeps absorbing (s, y) pairs whose
curvature says "this is not a minimum", bends the metric, and walks on to the
actual minimum at (0.7, -0.7).
"""

import numpy as np

from softqn import (
    Budget,
    ConstantAlpha,
    FixedStep,
    NoisyOracle,
    SaddleFreeNewton,
    SoftQn,
    run,
    saddle_free_abs,
    toy_2d,
)

problem = toy_2d()
step = FixedStep(0.01)
budget = Budget(iterations=500)
h0 = np.linalg.inv(saddle_free_abs(problem.hess(problem.x0)))

soft = run(NoisyOracle(problem, seed=0), SoftQn(ConstantAlpha(8e5)), step, budget,
           h0=h0, keep_iterates=True)
sfn = run(NoisyOracle(problem, seed=0), SaddleFreeNewton(), step, budget,
          keep_iterates=True)

saddle = np.array([0.827, -0.230])
minimum = np.array([0.7, -0.7])
print(f"start {problem.x0}, saddle near {saddle}, minimum at {minimum}\n")
for name, rec in [("soft QN", soft), ("saddle-free Newton", sfn)]:
    path = np.asarray(rec.iterates)
    d_saddle = np.linalg.norm(path - saddle, axis=1)
    k_close = int(np.argmin(d_saddle))
    print(f"{name}:")
    print(f"  closest approach to the saddle: {d_saddle[k_close]:.4f} at iteration {k_close}")
    print(f"  final iterate: ({path[-1][0]:+.4f}, {path[-1][1]:+.4f}), "
          f"f = {problem.phi(path[-1]):.6f}, "
          f"distance to the minimum {np.linalg.norm(path[-1] - minimum):.4f}")

print("\nmilestones of the soft QN path (iteration: x, f):")
path = np.asarray(soft.iterates)
for k in [0, 50, 150, 250, 350, 500]:
    x = path[k]
    print(f"  {k:4d}: ({x[0]:+.4f}, {x[1]:+.4f})  f = {problem.phi(x):.6f}")
