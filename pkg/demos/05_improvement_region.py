"""Where the congestion bound beats the comparison bound.

theta is the ratio of the two spectral-gap bounds; below 1 the congestion
route wins.  It falls geometrically in n, so for each (colors, T) there is a
crossover length past which every chain is in the improvement region.
"""

from spectral_gibbs import crossover_n, ingrassia_beta1_bound, theorem3_bound, theta

print("crossover length by colors and temperature:")
print("colors   T=0.1     T=0.2     T=0.5     T=1       T=2")
for colors in (2, 3, 4):
    row = [f"{crossover_n(colors, t):8.2f}" for t in (0.1, 0.2, 0.5, 1.0, 2.0)]
    print(f"  {colors}    " + " ".join(row))
print()

colors, temp = 3, 1.0
cross = crossover_n(colors, temp)
print(f"colors={colors}, T={temp}: crossover at n = {cross:.4f}\n")
print(" n    theta        gap bound      comparison gap")
for n in range(1, 9):
    t3 = theorem3_bound(n, colors, temp)
    ib = ingrassia_beta1_bound(n, colors, temp)
    marker = "  <- improvement" if theta(n, colors, temp) < 1 else ""
    print(
        f"{n:2d}   {theta(n, colors, temp):9.6f}   {1 - t3:.6e}   {1 - ib:.6e}{marker}"
    )
print("\npast the crossover the congestion gap is the larger (tighter) one")

# high temperature pushes the crossover below n = 1 for three or more colors
print(f"\ncrossover_n(3, T=5) = {crossover_n(3, 5.0):.4f}"
      " (every length is an improvement)")
print(f"theta(1, 3, 5.0) = {theta(1, 3, 5.0):.6f}")
