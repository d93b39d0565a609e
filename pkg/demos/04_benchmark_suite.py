"""The shifted/rotated benchmark suite.

Every function wraps a classical base as f(x) = base(M @ (x - o)): the
shift o hides the optimum somewhere in the central 80% of the box and the
Haar-random rotation M couples the coordinates, so separable tricks don't
work. The minimum value is always exactly 0, which makes final errors
comparable across functions.
"""

import numpy as np

from quasar_opt import QuasarConfig, make_suite, optimize, suite_manifest

suite = make_suite(dim=10, seed=1)

print("suite manifest:")
print(suite_manifest(suite))

print("sanity: value at the constructed optimum, per function")
for fn in suite:
    print(f"  {fn.name:12s} f(x_opt) = {fn.evaluate(fn.x_opt):.2e}   "
          f"f(center) = {fn.evaluate(np.zeros(10)):.4g}")

# Rotation matters: rastrigin's axis-aligned cosine ripples become oblique.
rastrigin = next(f for f in suite if f.name == "rastrigin")
print("\nrotation is orthogonal:",
      np.max(np.abs(rastrigin.rotation.T @ rastrigin.rotation - np.eye(10))) < 1e-10)

# A short run on each function shows the difficulty spread.
print("\nQUASAR, N=100, 100 generations, one seed:")
for fn in suite:
    result = optimize(fn, fn.bounds, QuasarConfig(pop_size=100, g_max=100, seed=0))
    print(f"  {fn.name:12s} final error {result.error:12.4g}")
