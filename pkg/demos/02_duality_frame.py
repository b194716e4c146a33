"""
A symplectic frame without a prepotential
=========================================

Rotating the worked example by an electric-magnetic duality gives a section
whose upper components do not depend on z.  The metric is unchanged, the
kinetic matrix transforms as N -> (C + D N)(A + B N)^-1, but there is no
prepotential in the new frame.
"""
import numpy as np

from specialkahler import (LocalPrepotentialModel, SymplecticMatrix, act_on_kinetic,
                           apply_symplectic_local, build_section, local_kinetic, local_metric,
                           prepotential_exists, reconstruct_prepotential)

model = LocalPrepotentialModel.from_strings("-i*X0*X1", ["X0", "X1"], ["1", "z"], ["z"], base_point=1)
section = build_section(model)

S = SymplecticMatrix(np.array([[1, 0, 0, 0],
                               [0, 0, 0, -1],
                               [0, 0, 1, 0],
                               [0, 1, 0, 0]], dtype=float))
dual = apply_symplectic_local(section, S)
print("dual section:", [str(c) for c in dual.components])

z = 2 + 1j
print("metric change:", abs(local_metric(dual, z) - local_metric(section, z)).max())

n_direct = local_kinetic(dual, z).matrix
n_mapped = act_on_kinetic(S, local_kinetic(section, z)).matrix
print("N from the dual section vs the transformation rule:", abs(n_direct - n_mapped).max())

print("prepotential in the original frame:", bool(prepotential_exists(section, z)))
verdict = prepotential_exists(dual, z)
print("prepotential in the dual frame:", bool(verdict), f"(condition number {verdict.condition_number:.2e})")

# the original frame recovers F up to the name of its fields
F = reconstruct_prepotential(section, [1, 2 + 1j, 0.3 - 0.2j])
print("reconstructed F:", F)
