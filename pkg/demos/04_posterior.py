"""A posterior over theta concentrates around the truth as data accumulate."""

# %%
from oscbayes import inference, model, priors

C = model.FamilySpec.cosine()
prior = priors.Exponential(1.0)
full = model.sample(C, 1.0, 1000, seed=3)
for n in (10, 100, 1000):
    g = inference.build_posterior(prior, C, full.points[:n], theta_max=60.0)
    print(f"n={n:5d} nodes={len(g.nodes):6d} mass(|theta-1|<0.25)={inference.posterior_mass(g, 0.75, 1.25):.3f} "
          f"mean={g.mean():.3f} predictive H={inference.predictive_hellinger(g, 1.0):.4f}")

# %% A heavy-tailed prior at theta = 0 needs an explicit cap and records how much tail it drops
zero = model.sample(C, 0.0, 100, seed=3)
g = inference.build_posterior(priors.ParetoTail(0.5, 1.0), C, zero, theta_max=1e4, tail_check="warn")
print("mass of [0, 0.25):", round(inference.posterior_mass(g, 0.0, 0.25), 3),
      " log tail ratio:", round(g.diagnostics["log_tail_ratio"], 2))
