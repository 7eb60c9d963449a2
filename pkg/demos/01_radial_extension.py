"""Radial extensions of sphere homeomorphisms.

A bi-Lipschitz self-map of the unit sphere extends to all of R^n by
acting on directions and keeping norms: v -> ||v|| * phi(v / ||v||).
This script builds a latitude map (a polar-angle reparametrization),
measures its sphere constant by sampling, and checks two facts about
the extension:

  * its two-point distortion never beats 1 + lambda(phi), and
  * its drift away from the identity grows linearly in the radius,
    so it is far from the identity at large scales.
"""

import os

import numpy as np

from bilip import _svg
from bilip import estimators as est
from bilip import maps, verify

OUT = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(OUT, exist_ok=True)

# ---------------------------------------------------------------
# A nontrivial sphere map: slide latitudes toward the south pole
# ---------------------------------------------------------------
beta = 0.5
phi = maps.make_latitude_sphere_map(beta, dim=2)
print(f"latitude map on S^1 with beta = {beta}")
print(f"  claimed bi-Lipschitz constant (geodesic metric): {phi.lambda_claimed}")

sphere_est = est.sphere_bilip_lower_bound(phi, seed=7, n_pairs=200_000)
print(f"  sampled chordal lower bound: {sphere_est.lambda_lower:.6f}")

# ---------------------------------------------------------------
# The radial extension and its distortion
# ---------------------------------------------------------------
f = maps.radial_extension(phi)
cfg = est.SamplerConfig(seed=7, region=est.ball((0.0, 0.0), 100.0),
                        n_pairs=500_000)
report = verify.verify_radial_bound(phi, cfg)
print("\nradial extension on R^2:")
print(f"  claimed constant 1 + lambda : {report.claimed:.6f}")
print(f"  sampled distortion          : {report.observed:.6f}")
print(f"  equal-radius pairs max ratio: "
      f"{report.details['equal_radius_max_ratio']:.6f}")
print(f"  verdict: {'PASS' if report.passed else 'FAIL'}")

# norms are preserved exactly by construction
rng = np.random.default_rng(0)
pts = rng.normal(size=(10_000, 2)) * 30.0
out = maps.evaluate_points(f, pts)
err = np.abs(np.linalg.norm(out, axis=1) - np.linalg.norm(pts, axis=1)).max()
print(f"  norm preservation residual  : {err:.2e}")

# ---------------------------------------------------------------
# Drift: ||f(r x) - r x|| = r * ||phi(x) - x||
# ---------------------------------------------------------------
x = np.array([0.6, 0.8])
ks = np.arange(1, 41)
witnesses = (2.0 ** ks)[:, None] * x[None, :]
drift = est.drift_profile(f, witnesses, threshold=1e6)
print("\ndrift along the ray through x =", x)
print(f"  drift at k=1 : {drift.drifts[0]:.6f}")
print(f"  drift at k=40: {drift.drifts[-1]:.4e}")
print(f"  verdict      : {drift.verdict}")

svg = _svg.line_plot(ks, drift.drifts, title="radial extension drift",
                     xlabel="k (radius 2^k)", ylabel="||f(x_k) - x_k||",
                     log_y=True)
path = os.path.join(OUT, "radial_drift.svg")
_svg.save_svg(svg, path)
print(f"  plot written to {path}")
