"""
Spectra of two shape-invariant wells and a generic member
==========================================================

Levels come from the root solver, then get cross-checked against the
finite-difference oracle, which only ever sees V(r).
"""

# %%
import matplotlib.pyplot as plt

from natanzon import (NatanzonParams, build_state, build_zmap, enumerate_levels,
                      fd_eigensolve, preset_pt2, preset_rm)
from natanzon.potential import potential_of_z

cases = {
    "PT2 (4.5, 1.5, 1)": preset_pt2(4.5, 1.5, 1.0),
    "RM (3, 2, 1)": preset_rm(3.0, 2.0, 1.0),
    "generic (1, 1, 1, 80, 10, 20)": NatanzonParams(1, 1, 1, 80, 10, 20),
}

# %% [markdown]
# Solver against the FD oracle.

# %%
for name, p in cases.items():
    levels = enumerate_levels(p)
    fd = fd_eigensolve(p, build_zmap(p), len(levels))
    print(name)
    for lv, e in zip(levels, fd.eigenvalues):
        print(f"  nu={lv.nu}  E={lv.E:+.10f}  fd={e:+.8f}  diff={abs(lv.E - e):.1e}")

# %% [markdown]
# Potentials with their levels and normalized states drawn on top.

# %%
fig, axes = plt.subplots(1, 3, figsize=(13, 4))
for ax, (name, p) in zip(axes, cases.items()):
    zm = build_zmap(p)
    V = potential_of_z(p, zm.z, zm.w)
    levels = enumerate_levels(p)
    top = max(lv.E for lv in levels) + 6
    keep = V < top + 10
    ax.plot(zm.r[keep], V[keep], "k", lw=1)
    for lv in levels:
        s = build_state(p, zm, lv)
        ax.axhline(lv.E, color="0.7", lw=0.5)
        ax.plot(zm.r[keep], lv.E + 2 * s(zm.r[keep]))
    ax.set_ylim(min(V) - 1, top)
    ax.set_xlim(zm.r[keep][0], min(zm.r[keep][-1], zm.r[keep][0] + 12))
    ax.set_title(name)
    ax.set_xlabel("r")
plt.tight_layout()
plt.show()
