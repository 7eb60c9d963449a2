"""Disk replication: one compactly supported map, infinitely many
scaled copies.

A homeomorphism of the unit disk that fixes the boundary is copied
onto the pairwise disjoint disks D(4^j e1, 2^j). The result is a
homeomorphism of R^n that

  * restricts to the original map on the unit disk,
  * keeps the original map's bi-Lipschitz constant (the copies are
    similarities of the original, and everything between disks is
    frozen), and
  * drifts arbitrarily far from the identity, with the explicit law
    drift(4^k e1 + 2^k x0) = 2^k ||g(x0) - x0||.
"""

import os

import numpy as np

from bilip import _svg
from bilip import estimators as est
from bilip import maps, verify

OUT = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(OUT, exist_ok=True)

# ---------------------------------------------------------------
# The seed map: a twist of the unit disk
# ---------------------------------------------------------------
g = maps.make_twist_disk_map(dim=2)
print("twist disk map on D^2")
print(f"  claimed constant (padded differential bound): {g.lambda_claimed:.4f}")

f = maps.disk_replication(g)
for v in ([0.5, 0.0], [4.0, 0.5], [16.5, -1.0], [1.5, 0.0], [40.0, 0.0]):
    j = maps.locate_replication_disk(v)
    moved = np.linalg.norm(maps.displacement(f, np.asarray(v)))
    where = f"disk {j}" if j is not None else "between disks"
    print(f"  point {v}: {where:14s} displacement {moved:.4f}")

# ---------------------------------------------------------------
# The constant survives replication (cross-disk pairs included)
# ---------------------------------------------------------------
cfg = est.SamplerConfig(seed=7, region=est.ball((0.0, 0.0), 300.0),
                        n_pairs=500_000)
report = verify.verify_replication_constant(g, cfg)
print("\nreplication on R^2:")
print(f"  claimed : {report.claimed:.4f}")
print(f"  sampled : {report.observed:.4f}")
print(f"  cross-disk max ratio: {report.details['cross_disk_max_ratio']:.4f}")
print(f"  verdict : {'PASS' if report.passed else 'FAIL'}")

# ---------------------------------------------------------------
# The drift law, exact to the last bit
# ---------------------------------------------------------------
x0 = np.array([0.3125, -0.25])
wdrift = verify.verify_replication_drift(g, x0, count=40, threshold=1e6)
print("\ndrift law along the disk centers:")
print(f"  base move ||g(x0) - x0||: {wdrift.details['base_move']:.6f}")
print(f"  max relative deviation from 2^k scaling: "
      f"{wdrift.details['max_relative_error']:.2e}")
print(f"  final drift (k=40): {wdrift.observed:.4e}")
print(f"  verdict: {wdrift.details['verdict']}")

witnesses = est.replication_drift_witnesses(g, x0, 40)
profile = est.drift_profile(f, witnesses, threshold=1e6)
svg = _svg.line_plot(np.arange(1, 41), profile.drifts,
                     title="replication drift law", xlabel="k",
                     ylabel="||f(x_k) - x_k||", log_y=True)
path = os.path.join(OUT, "replication_drift.svg")
_svg.save_svg(svg, path)
print(f"  plot written to {path}")

# ---------------------------------------------------------------
# Group structure: replication is a homomorphism
# ---------------------------------------------------------------
h = maps.make_twist_disk_map(dim=2, amplitude=-0.5)
hom = verify.verify_homomorphism(
    "disk_replication", g, h,
    est.SamplerConfig(seed=7, region=est.ball((0.0, 0.0), 70.0),
                      n_pairs=10_000))
print("\nhomomorphism check (composition vs composed replication):")
print(f"  pointwise residual : {hom.details['composition_residual']:.2e}")
print(f"  restriction to D^2 : {hom.details['restriction_residual']:.2e}")
print(f"  drift witness      : {hom.details['drift_witness']:.4f}")
print(f"  verdict: {'PASS' if hom.passed else 'FAIL'}")
