# %% [markdown]
# # Conditional marginal of the singlet
#
# The left spin of a singlet is rotated by alpha about x and weakly measured
# along z. Given the pointer reading q_l, the probability of a final z+ on the
# left is 1/(1 + f^2), whatever alpha and the right-hand setting b are.

# %%
import numpy as np

from weakspin import BlochDirection, WmConfig, conditional_joint_probs, qm_marginal

cfg = WmConfig(1.0, 1.0)
rng = np.random.default_rng(0)

for q_l in (-1.0, 0.0, 1.0):
    margs = []
    for _ in range(50):
        alpha = rng.uniform(0, np.pi)
        b = BlochDirection(np.arccos(rng.uniform(-1, 1)), rng.uniform(0, 2 * np.pi))
        margs.append(conditional_joint_probs(alpha, cfg, q_l, b)[0].sum())
    print(f"q_l = {q_l:+.1f}: simulated {np.mean(margs):.6f} (spread {np.ptp(margs):.1e}), "
          f"1/(1+f^2) = {qm_marginal(cfg, q_l):.6f}")

# %% [markdown]
# The joint table still shows the anticorrelation when alpha = 0 and b = +z.

# %%
print(conditional_joint_probs(0.0, cfg, 1.0, BlochDirection(0.0)).round(6))
