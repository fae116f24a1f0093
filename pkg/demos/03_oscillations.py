"""Counting where one density exceeds another, and the bound that ties it to weak closeness."""

# %%
import math

from oscbayes import model, oscillations

C = model.FamilySpec.cosine()
ref = (C, 0.0)
for r in oscillations.check_oscillation_bound([2 * math.pi * j for j in (1, 3, 10)], ref, 0.30):
    print(f"theta={r.theta:7.3f} count={r.count:3d} tv={r.tv_epsilon:.3f} "
          f"bound={r.bound:.3f} holds={r.inequality_holds}")

# %% The exceedance set itself
ivs = oscillations.exceedance_intervals((C, 4 * math.pi), ref)
print("f_{4 pi} > f_0 on", ivs)
