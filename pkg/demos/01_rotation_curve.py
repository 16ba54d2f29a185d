# %% [markdown]
# # Rotation of a spin by a weak measurement
#
# A spin prepared in the xy-plane (theta_p = 90 deg) is weakly measured along z
# with a Gaussian pointer whose width equals the coupling a. The pointer
# reading q1 fixes how far the spin turns: toward +z for q1 > 0, away for q1 < 0.

# %%
import numpy as np

from weakspin import BlochDirection, WmConfig, apply_wm, delta_theta, direction_from_ket, f_ratio, ket_from_direction

cfg = WmConfig(coupling_a=1.0, width=1.0)
q1 = np.linspace(-3, 3, 13)
dtheta = np.degrees(delta_theta(np.pi / 2, cfg, q1))

print(f"{'q1/a':>6} {'f':>9} {'dtheta (deg)':>13}")
for q, f, d in zip(q1, f_ratio(cfg, q1), dtheta):
    print(f"{q:6.2f} {f:9.4f} {d:13.4f}")

# %% [markdown]
# The same rotation read off the post-measurement state. The azimuth is untouched.

# %%
prior = ket_from_direction(BlochDirection(np.pi / 2, 0.6))
post = direction_from_ket(apply_wm(prior, cfg, 1.0))
print(f"theta_q = {np.degrees(post.theta):.4f} deg, phi_q = {post.phi:.4f} rad")

# %% [markdown]
# Stronger coupling pushes the curve toward a step, i.e. a projective measurement.

# %%
for a in (0.25, 1.0, 4.0):
    d = np.degrees(delta_theta(np.pi / 2, WmConfig(a, 1.0), a * np.array([-1.0, 1.0])))
    print(f"a = {a:4.2f}: dtheta(-a) = {d[0]:7.3f}, dtheta(+a) = {d[1]:7.3f}")

# %%
try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    q = np.linspace(-3, 3, 301)
    plt.plot(q, np.degrees(delta_theta(np.pi / 2, cfg, q)), "-k")
    plt.xlabel("Q1 / a")
    plt.ylabel("rotation angle (deg)")
    plt.savefig("rotation_curve.png")
