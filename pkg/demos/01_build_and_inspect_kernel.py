"""Build the transition kernel for a short chain and inspect its structure.

Walks through the pieces that everything else rests on: the stationary
measure, the one-site conditionals, and the reversibility checks.
"""

import numpy as np

from spectral_gibbs import (
    ModelSpec,
    build_kernel,
    check_detailed_balance,
    check_irreducible,
    check_stationarity,
    colors_to_string,
    config_from_rank,
    stationary_measure,
)

spec = ModelSpec(n=3, num_colors=3, temp=1.0)
print(f"chain: n={spec.n} sites, {spec.num_colors} colors, T={spec.temp}")
print(f"state space: {spec.num_states} configurations\n")

pi = stationary_measure(spec)
order = np.argsort(pi.weights)[::-1]
print("most and least likely states:")
for rank in [*order[:3], *order[-3:]]:
    config = config_from_rank(spec, int(rank))
    print(f"  {colors_to_string(config.colors)}  pi = {pi.weights[rank]:.6f}")
print(f"log Z = {pi.log_z:.6f}\n")

kernel = build_kernel(spec)
print(f"off-diagonal edges: {len(kernel.edges)}")
print(f"row-sum deviation:        {np.abs(kernel.matrix.sum(axis=1) - 1).max():.2e}")
print(f"detailed-balance asym:    {check_detailed_balance(kernel):.2e}")
print(f"stationarity residual:    {check_stationarity(kernel):.2e}")
print(f"irreducible:              {check_irreducible(kernel)}\n")

# one row of the kernel, in letters
start = 0
print(f"moves out of {colors_to_string(config_from_rank(spec, start).colors)}:")
for col, val in kernel.row_entries(start):
    target = colors_to_string(config_from_rank(spec, col).colors)
    kind = "hold" if col == start else "move"
    print(f"  {kind} -> {target}  P = {val:.6f}")
