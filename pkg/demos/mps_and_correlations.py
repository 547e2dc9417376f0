"""
The AKLT ground state as a bond-dimension-2 MPS
===============================================

"""

import numpy as np

from gmqc import hamiltonian as hm
from gmqc import mps

chain = mps.build_aklt_mps(4)
g = mps.to_dense(chain)

# the contracted MPS is the eigensolver's unique ground state
_, basis = hm.chain_ground_space(hm.ChainSpec(4))
print("overlap:", abs(np.vdot(basis[:, 0], g)))

# one amplitude, read straight off the Kraus product
print("amplitude (3,3,3,3), boundaries down/up:", mps.amplitude(chain, (3, 3, 3, 3), 1, 0))

# spin correlations alternate in sign and shrink by 3 per site
for d in range(1, 7):
    print(f"d={d}  <S^z S^z> = {mps.correlator(12, 3, 3 + d, 'z'):+.6f}")
