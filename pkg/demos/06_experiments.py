"""Seeded Monte Carlo runs and figure data as CSV."""

# %%
from oscbayes import harness, priors

cfg = harness.ExperimentConfig(theta_star=1.0, prior=priors.Exponential(1.0), n_schedule=(10, 100),
                               replicates=5, master_seed=1)
text = harness.run_consistency_experiment(cfg)
print(text.splitlines()[0])
print("median mass outside the neighbourhood:", harness.median_by_n(text, "mass_out"))
print("identical on rerun:", text == harness.run_consistency_experiment(cfg))

# %% The same experiment from a config file, as the CLI reads it
cfg2 = harness.ExperimentConfig.from_text("theta_star = 1\nprior = exponential(rate=1)\n"
                                          "n_schedule = 10, 100\nreplicates = 5\nmaster_seed = 1\n")
print("config text builds the same run:", cfg2 == cfg)

# %% Long-format density/CDF values for plotting
fig = harness.emit_figure_data(harness.FIGURE_THETAS, 8)
print(*fig.splitlines()[:4], sep="\n")
