"""
Satellite chains
================

Raising the PT2 ground state marches (A, B) -> (A + alpha, B - alpha)
until beta would go negative at the wall.
"""

# %%
import matplotlib.pyplot as plt

from natanzon import build_zmap, preset_pt2, rm_satellite_AB, satellite_chain
from natanzon.params import identify_pt2
from natanzon.potential import potential_of_z

p = preset_pt2(10.5, 2.5, 1.0)
chain = satellite_chain(p, 0, 10, closure="ground-zero")
print("steps:", len(chain), "stopped because:", chain.reason)
for step in chain:
    A, B, al, shift = identify_pt2(step.result)
    print(f"  nu={step.target_nu}  A={A:.6f}  B={B:.6f}  shift={shift:+.2e}  beta={step.target_abd[1]:.3f}")

# %% [markdown]
# The closures only move the satellite by a constant.

# %%
src = preset_pt2(4.5, 1.5, 1.0)
for closure in ("isospectral", "ground-zero", "h1s=24"):
    s = satellite_chain(src, 0, 1, closure=closure)[0]
    print(f"{closure:12s} -> {s.result.as_tuple()}  E_target={float(s.E_target):+.4f}")

# %% [markdown]
# Rosen-Morse: A_S from the map, B_S from matching (p, q).

# %%
out = rm_satellite_AB(3.0, 2.0, 1.0, 0)
for k in ("A_S", "B_S_matched", "B_S_printed", "printed_agrees"):
    print(f"{k:15s} {out[k]}")

# %%
zm = build_zmap(p)
fig, ax = plt.subplots(figsize=(6, 4))
ax.plot(zm.r, potential_of_z(p, zm.z, zm.w), "k", label="source")
for step in chain:
    ax.plot(zm.r, potential_of_z(step.result.as_float(), zm.z, zm.w), label=f"satellite {step.target_nu}")
ax.set_ylim(-20, 40)
ax.set_xlim(0, 4)
ax.legend()
plt.show()
