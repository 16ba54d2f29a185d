# %% [markdown]
# # Crypto-nonlocal source models against the weak-measurement marginal
#
# A CNL source emits spins along definite directions u. If each pair behaves
# like a spin along u, the left z+ probability after rotation and weak
# measurement is cos^2(theta_l/2). Averaged over the source density it has to
# reproduce the quantum value 1/(1 + f^2) at every (alpha, q_l). It does not.

# %%
import numpy as np

from weakspin import BlochDirection, SourceDistribution, WmConfig, cnl_test
from weakspin.entangled_cnl import uniform_lhs_closed_form

cfg = WmConfig(1.0, 1.0)
alphas = np.radians(np.linspace(0, 180, 19))
qls = np.linspace(-2, 2, 21)

models = {
    "uniform, v = -u": SourceDistribution.uniform_anticorrelated(),
    "independent uniform": SourceDistribution.product_uniform(),
    "point mass at +z": SourceDistribution.delta_pair(BlochDirection(0.0)),
    "biased toward +z": SourceDistribution.from_u_density(lambda t, p: (1 + np.cos(t)) / (4 * np.pi)),
}

for name, F in models.items():
    rep = cnl_test(F, cfg, alphas, qls)
    print(f"{name:22s} max |lhs - rhs| = {rep.max_abs_diff:.4f} at alpha = "
          f"{np.degrees(rep.argmax_alpha):5.1f} deg, q_l = {rep.argmax_q_l:+.2f}  -> {rep.verdict()}")

# %% [markdown]
# For the isotropic source the average has a closed form, which the quadrature matches.

# %%
f = np.exp(-1.0)
rep = cnl_test(models["uniform, v = -u"], cfg, [0.0], [1.0])
print(f"quadrature {rep.rows[0].lhs:.10f}, closed form {uniform_lhs_closed_form(f):.10f}, "
      f"quantum {rep.rows[0].rhs:.10f}")

# %% [markdown]
# Only the uninformative reading q_l = 0 (f = 1) lets the isotropic source agree.

# %%
print(cnl_test(models["uniform, v = -u"], cfg, alphas, [0.0]).verdict())
