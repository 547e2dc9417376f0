"""
Ground space and gap of short AKLT chains
=========================================

"""

import numpy as np

from gmqc import hamiltonian as hm

# boundary spin-1/2s pin the edge states; without them there are four ground states
for cfg in ("both", "right", "none"):
    spec = hm.ChainSpec.from_config(4, cfg)
    e0, basis = hm.chain_ground_space(spec)
    print(f"{cfg:>5}: dim={spec.dim:5d}  E0={e0:+.1e}  degeneracy={basis.shape[1]}")

# every summand annihilates the ground state on its own
spec = hm.ChainSpec(5)
_, basis = hm.chain_ground_space(spec)
print("largest term residual:", hm.frustration_residuals(spec, basis))

# finite-size gaps creep down toward the bulk value
gaps = [hm.spectral_gap(hm.ChainSpec.from_config(n, "none")) for n in range(2, 8)]
for n, g in zip(range(2, 8), gaps):
    print(f"N={n}  gap/J={g:.6f}")
print("differences:", np.round(np.diff(gaps), 4))
