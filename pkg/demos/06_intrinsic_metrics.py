"""Intrinsic versus chordal metrics on hypersurface clouds.

On a smooth closed hypersurface the shortest-arc (intrinsic) metric
and the ambient Euclidean metric are bi-Lipschitz equivalent. We
approximate the intrinsic metric by shortest paths in an
eps-neighborhood graph over a point cloud and measure the worst ratio
to the chord; on the circle and the sphere the supremum is known
exactly (pi/2, between antipodes), which calibrates the estimator.
"""

import os

import numpy as np

from bilip import _svg
from bilip import estimators as est

OUT = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(OUT, exist_ok=True)

half_pi = np.pi / 2

# ---------------------------------------------------------------
# Circle: polygon paths reproduce arcs almost perfectly
# ---------------------------------------------------------------
circle = est.circle_cloud(10_000)
geo = est.geodesic_estimate(circle, 0.01, 0, 5000)
print("circle with 10^4 points:")
print(f"  antipodal graph length: {geo:.6f} (arc length pi = {np.pi:.6f})")
print(f"  antipodal ratio       : {geo / 2.0:.6f} (target pi/2 = {half_pi:.6f})")

ratio = est.metric_equivalence_ratio(circle, 0.01, 5000, seed=7)
print(f"  sampled max ratio     : {ratio:.6f}")

# ---------------------------------------------------------------
# Sphere: a Fibonacci cloud and its graph dilation
# ---------------------------------------------------------------
sphere = est.sphere_cloud(10_000)
ratio_s = est.metric_equivalence_ratio(sphere, 0.09, 10_000, seed=7)
print("\nsphere with 10^4 points:")
print(f"  sampled max ratio     : {ratio_s:.6f} (target pi/2 = {half_pi:.6f})")

# ---------------------------------------------------------------
# Ellipse: no closed form needed, just a stable finite constant
# ---------------------------------------------------------------
ellipse = est.ellipse_cloud(2.0, 1.0, 10_000)
r1 = est.metric_equivalence_ratio(ellipse, 0.02, 500, seed=11)
r2 = est.metric_equivalence_ratio(ellipse, 0.02, 500, seed=12)
print("\nellipse (a=2, b=1) with 10^4 points:")
print(f"  sampled max ratio, seed 11: {r1:.4f}")
print(f"  sampled max ratio, seed 12: {r2:.4f}")
print(f"  spread: {abs(r1 - r2) / r1:.2%}")

# ---------------------------------------------------------------
# Ratio against separation angle on the circle
# ---------------------------------------------------------------
graph = est.neighbor_graph(circle, 0.01)
angles = np.linspace(0.2, np.pi, 60)
ratios = []
for a in angles:
    j = int(round(a / (2 * np.pi) * 10_000)) % 10_000
    geo_j = est.geodesic_estimate(circle, 0.01, 0, j, graph=graph)
    ratios.append(geo_j / np.linalg.norm(circle[0] - circle[j]))
svg = _svg.line_plot(angles, ratios, title="intrinsic/chordal ratio on the circle",
                     xlabel="separation angle", ylabel="ratio")
_svg.save_svg(svg, os.path.join(OUT, "circle_ratio.svg"))
print(f"\nplot written to {OUT}/circle_ratio.svg")
