"""
The cone over a special Kahler base
===================================

Evaluate the real cone metric in coordinates (r, theta, Re z, Im z) for the
worked example, with the connection term either switched off or chosen to
cancel the theta bracket.
"""
import numpy as np

from specialkahler import ConePoint, cone_metric
from specialkahler.catalog import catalog_get
from specialkahler.local import cone_coordinate_labels

section = catalog_get("paper-n1").model.build_section()
labels = cone_coordinate_labels(section.n)

for mode in ("zero", "composite"):
    for r in (1.0, 2.0):
        G = cone_metric(section, ConePoint(r=r, theta=0.3, z=(1 + 0.5j,), a_mode=mode))
        print(f"a_mode={mode} r={r}")
        for lab, row in zip(labels, G):
            print(f"  {lab:>6}", " ".join(f"{x:+.6f}" for x in row))
        print("  eigenvalues:", np.round(np.linalg.eigvalsh(G), 6))
