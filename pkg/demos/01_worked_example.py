"""
The one-modulus example F = -i X0 X1
=====================================

Build the section from the prepotential, evaluate the Kahler potential,
metric and vector kinetic matrix, and check the defining constraints.
"""
import numpy as np

from specialkahler import (LocalPrepotentialModel, build_section, constraint_check, local_kahler,
                           local_kinetic, local_metric, prepotential_exists)

# Special coordinates Z = (1, z). The domain is Re z > 0.
model = LocalPrepotentialModel.from_strings("-i*X0*X1", ["X0", "X1"], ["1", "z"], ["z"], base_point=1)
section = build_section(model)
print("section:", [str(c) for c in section.components])

# K = -log(2 (z + zbar)) and g = 1 / (z + zbar)^2
for z in [1, 2 + 1j, 0.5 - 0.3j]:
    K = local_kahler(section, z)
    g = local_metric(section, z)[0, 0]
    print(f"z = {z}:  K = {K:.15f} (closed form {-np.log(2 * (2 * np.real(z))):.15f}),"
          f"  g = {g.real:.15f} (closed form {1 / (2 * np.real(z)) ** 2:.15f})")

# kinetic matrix at z = 1 is -i times the identity
N = local_kinetic(section, 1).matrix
print("N(1) =\n", np.round(N, 15))

# the section obeys <D_a v, v> = 0 and the frame admits a prepotential
rep = constraint_check(section, 2 + 1j)
print("constraint residuals:", rep.pair_residual, rep.vector_residual)
print("prepotential exists:", bool(prepotential_exists(section, 2 + 1j)))

# outside the domain the potential is undefined
try:
    local_kahler(section, -1)
except Exception as exc:
    print("z = -1:", type(exc).__name__, exc)
