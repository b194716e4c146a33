"""
Rigid special Kahler models
===========================

For a rigid model the Kahler potential is i<V, Vbar>, the metric is
2 Im F_AB in special coordinates and the kinetic matrix is N = F_AB.
"""
import numpy as np

from specialkahler import (RigidPrepotentialModel, rigid_constraint, rigid_kahler, rigid_kahler_prepotential,
                           rigid_kinetic, rigid_metric, rigid_section)
from specialkahler.catalog import catalog_get

model = RigidPrepotentialModel.from_strings("0.5*i*X1^2 + 0.5*i*X2^2 + X1^2*X2/6", ["X1", "X2"],
                                            ["z1", "z2"], ["z1", "z2"], base_point=(0.3, 0.6))
section = rigid_section(model)
z = (0.3 + 0.1j, 0.6 - 0.2j)

# two routes to K: the pairing of the section and the closed prepotential form
print("K from the pairing:", rigid_kahler(section, z))
print("K from F and F_A:  ", rigid_kahler_prepotential(model, z))

g = rigid_metric(section, z)
N = rigid_kinetic(section, z).matrix
print("metric eigenvalues:", np.linalg.eigvalsh(g))
print("|g - 2 Im N|:", abs(g - 2 * N.imag).max())
print("<dV, dV> pairing residual:", rigid_constraint(section, z).residual)

# a non-affine coordinate X = z^3 just pulls the metric back
entry = catalog_get("rigid-reparam")
sec = entry.model.build_section()
# g = 2 Im F_XX |dX/dz|^2 = 2 * 9 at z = 1
print("reparametrized metric at z = 1:", rigid_metric(sec, 1)[0, 0].real)
