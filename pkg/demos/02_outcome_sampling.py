# %% [markdown]
# # Sampling pointer readings
#
# Readings are drawn from the two-branch mixture: the pointer is shifted by +a
# with probability cos^2(theta_p/2) and by -a otherwise, then blurred by the
# pointer width.

# %%
import numpy as np

from weakspin import BlochDirection, WmConfig, ket_from_direction, sample_outcomes
from weakspin.weak_measurement import nm_limit_classify_many

rng = np.random.default_rng(7)
theta_p = np.radians(60)
prior = ket_from_direction(BlochDirection(theta_p))

# %% [markdown]
# Weak regime: the mean reading still tracks a cos(theta_p) even though single
# readings barely separate the branches.

# %%
weak = WmConfig(1.0, 1.0)
q = sample_outcomes(prior, weak, rng, 100_000)
print(f"weak:   mean q1 = {q.mean():.4f}  (a cos theta_p = {np.cos(theta_p):.4f})")
print(f"        fraction q1 > 0 = {np.mean(q > 0):.4f}")

# %% [markdown]
# Projective regime (a = 50 widths): sign(q1) is the measurement result and its
# frequency is the Born probability.

# %%
strong = WmConfig(50.0, 1.0)
q = sample_outcomes(prior, strong, rng, 100_000)
frac = np.mean(nm_limit_classify_many(q) == 1)
print(f"strong: fraction +1 = {frac:.4f}  (cos^2(theta_p/2) = {np.cos(theta_p / 2) ** 2:.4f})")
