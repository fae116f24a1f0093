"""Strong and weak distances part ways along theta = 2 pi j."""

# %%
import math

from oscbayes import metrics, model

C = model.FamilySpec.cosine()
ref = (C, 0.0)
print(" j   levy        1/(4 pi j)  hellinger")
for j in (1, 2, 5, 20, 100):
    f = (C, 2 * math.pi * j)
    print(f"{j:3d}  {metrics.levy_distance(f, ref):.3e}  {1 / (4 * math.pi * j):.3e}  "
          f"{metrics.hellinger(f, ref):.4f}")
print("Hellinger limit:", round(math.sqrt(2 - 4 * math.sqrt(2) / math.pi), 4))

# %% The Lipschitz bound in theta
for t, s in [(1.0, 1.1), (3.0, 3.5), (10.0, 30.0)]:
    print(f"H({t}, {s}) = {metrics.hellinger((C, t), (C, s)):.4f} <= {min(math.sqrt(2), abs(t - s)):.4f}")

# %% The cross-correlation integral stays under 1.9
print("closed form at (4.1615, 4.1615):", round(metrics.cosine_cross_correlation(4.1615, 4.1615), 4))
print("min of 1 + sinc:", tuple(round(v, 4) for v in metrics.sinc_floor()))
