"""
Where are all four masses positive?
===================================

Classify a raster of shapes by the signs of five discriminants and count
connected regions.  Label C collects the all-positive shapes below t =
sqrt(3), label D those above.
"""

from cc4 import RegionLabel, all_positive_components, component_extents, scan, triple_intersection

raster = scan(s_range=(0.01, 2.5), t_range=(0.02, 4.5), resolution=(256, 256))
print("cell counts:", raster.counts())

_, n = all_positive_components(raster)
print("all-positive components:", n)

for label in (RegionLabel.C, RegionLabel.D):
    ext = component_extents(raster, label)
    print(f"{label.value}: s in [{ext.s_min:.3f}, {ext.s_max:.3f}], "
          f"t in [{ext.t_min:.3f}, {ext.t_max:.3f}], area {ext.area:.3f}")

###############################################################################
# A coarse text picture, apex height t growing upward.

glyph = {RegionLabel.C: "C", RegionLabel.D: "D", RegionLabel.A: "a", RegionLabel.B: "b",
         RegionLabel.INVALID: " ", RegionLabel.BOUNDARY: "+", RegionLabel.INFEASIBLE: "."}
small = scan((0.01, 2.5), (0.02, 4.5), (60, 30))
for i in reversed(range(small.shape[0])):
    print("".join(glyph[small.label_at(i, j)] for j in range(small.shape[1])))

###############################################################################
# The two regions, and the curves p1 = 0, p2 = 0 and p4 = 0, meet at one point.

print("triple point:", triple_intersection())
