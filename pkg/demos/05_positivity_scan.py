"""
Where is the metric positive?
=============================

Sample a box in moduli space and classify every point: inside the domain,
positive metric, negative definite Im N.  For the worked example the
boundary sits at Re z = 0.
"""
from specialkahler.catalog import catalog_get
from specialkahler.scan import scan_positivity

desc = catalog_get("paper-n1").model
result = scan_positivity(desc, [(-1.0, 1.0, -2.0, 2.0)], samples=4000, seed=7)
print("pass fraction:", result.pass_fraction)
print("in-domain fraction:", result.fraction("in_domain"))
for est in result.boundary_estimate():
    lo, hi = est["between"]
    print(f"boundary along {est['axis']}: {est['estimate']:+.4f} (between {lo:+.4f} and {hi:+.4f})")

stu = catalog_get("stu").model
res = scan_positivity(stu, samples=1000, seed=1)
print("STU model, box inside Im z < 0:", res.pass_fraction)
