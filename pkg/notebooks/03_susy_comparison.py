"""
Satellite versus supersymmetric partner
=======================================

Both constructions delete the ground level in some sense, but the
potentials they produce are not the same.
"""

# %%
import matplotlib.pyplot as plt
import numpy as np

from natanzon import (build_state, build_zmap, compare_satellite_vs_susy, enumerate_levels,
                      partner_fd_levels, preset_pt2, preset_rm, satellite_params, susy_partner)
from natanzon.potential import potential_of_z

for name, p in (("PT2", preset_pt2(4.5, 1.5, 1.0)), ("RM", preset_rm(3.0, 2.0, 1.0))):
    zm = build_zmap(p)
    levels = enumerate_levels(p)
    ground = build_state(p, zm, levels[0])
    fd = partner_fd_levels(p, zm, ground, len(levels) - 1)
    step = satellite_params(p, levels[0], "up", "isospectral")
    res = compare_satellite_vs_susy(p, zm, step, ground)
    print(name, "partner levels", np.round(fd.eigenvalues, 6), "source", [round(lv.E, 6) for lv in levels])
    print("   ", res.to_dict())

# %% [markdown]
# RM picture, both curves referenced to their own ground energy.

# %%
p = preset_rm(3.0, 2.0, 1.0)
zm = build_zmap(p)
lv = enumerate_levels(p)
ground = build_state(p, zm, lv[0])
part = susy_partner(p, zm, ground)
step = satellite_params(p, lv[0], "up", "isospectral")
res = compare_satellite_vs_susy(p, zm, step, ground)
fig, ax = plt.subplots(figsize=(6, 4))
ax.plot(zm.r, potential_of_z(p, zm.z, zm.w), "k", lw=1, label="source")
ax.plot(zm.r, potential_of_z(step.result.as_float(), zm.z, zm.w) - res.shift_a, label="satellite")
ax.plot(part.r, part.V_partner - res.shift_b, label="SUSY partner")
ax.set_xlim(-6, 6)
ax.set_ylim(-15, 15)
ax.legend()
plt.show()
