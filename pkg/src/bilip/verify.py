"""Scenario-level verification: each scenario binds a construction to
the estimators that probe its quantitative claim and emits a Report.

A report is reproducible from (config, seed): rerunning a scenario
with the same inputs produces byte-identical JSON except for the
wall_time_ms field. A scenario passes only if zero sampled violations
occurred; any violation is recorded with its witness pair.
"""

import json
import time
from dataclasses import dataclass, field

import numpy as np

from . import estimators as E
from . import maps as M
from . import pl as plmod
from .core import largest_singular_values, rotation_matrix
from .errors import ConfigError, NoWitnessError
from .profiles import bump_profile

TOOL_VERSION = "0.1.0"
PASS_SLACK = 1e-6  # relative tolerance over claimed constants


@dataclass
class Report:
    """Machine-readable outcome of one verification scenario."""

    scenario: str
    passed: bool
    claimed: float | None
    observed: float | None
    worst: dict | None
    n_samples: int
    seed: int
    wall_time_ms: float
    tool_version: str = TOOL_VERSION
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return _jsonable({
            "scenario": self.scenario,
            "passed": bool(self.passed),
            "claimed": self.claimed,
            "observed": self.observed,
            "worst": self.worst,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "wall_time_ms": self.wall_time_ms,
            "tool_version": self.tool_version,
            "details": self.details,
        })

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def _jsonable(x):
    """Recursively strip numpy scalar and array types for JSON output."""
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in np.ravel(x)]
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (np.integer, int)):
        return int(x)
    return x


def _worst_pair_dict(pair):
    if pair is None:
        return None
    x, y, ratio = pair
    return {"x": _jsonable(x), "y": _jsonable(y), "ratio": float(ratio)}


def _bound_pass(observed, claimed):
    return observed <= claimed * (1.0 + PASS_SLACK)


# =====================================================================
# Scenario: radial extension bound
# =====================================================================

def verify_radial_bound(phi, cfg, sphere_pairs=200_000):
    """The radial extension of a sphere map with (sampled) chordal
    constant lambda-hat must show no two-point distortion above
    1 + lambda-hat; equal-radius pairs must stay within lambda-hat."""
    t0 = time.perf_counter()
    sphere_est = E.sphere_bilip_lower_bound(phi, cfg.seed, sphere_pairs)
    lam_hat = sphere_est.lambda_lower
    claimed = 1.0 + lam_hat
    fmap = M.radial_extension(phi)
    est = E.bilip_lower_bound(fmap, cfg, op_name="verify_radial_bound")

    # restriction to spheres of any radius: the two-point ratio at radius
    # r equals the chordal ratio of the same directions on the unit
    # sphere, so it can never beat the sphere constant
    rng = E._op_rng(cfg.seed, "verify_radial_equal_radius")
    n = phi.dim
    n_even = n + (n % 2)
    u = rng.random((20_000, 2 * n_even + 2))
    du = E._unit_rows(E._normals(u[:, :n_even])[:, :n])
    dv = E._unit_rows(E._normals(u[:, n_even : 2 * n_even])[:, :n])
    radii = np.exp(np.log(0.1) + u[:, -2] * np.log(10.0 * cfg.region.scale))
    h = 10.0 ** (-3.0 * u[:, -1])
    xu = du
    # tangential offsets: a near-parallel second direction would let the
    # pair separation collapse into rounding noise
    perp = E._unit_rows(dv - np.sum(dv * du, axis=1)[:, None] * du)
    yu = E._unit_rows(du + h[:, None] * perp)
    x = radii[:, None] * xu
    y = radii[:, None] * yu
    d = np.linalg.norm(x - y, axis=1)
    keep = d >= 1e-9 * radii
    df = np.linalg.norm(fmap._eval(x[keep]) - fmap._eval(y[keep]), axis=1)
    ratios = df / d[keep]
    eq_max = float(np.maximum(ratios, 1.0 / ratios).max())
    du_ = np.linalg.norm(xu[keep] - yu[keep], axis=1)
    dfu = np.linalg.norm(phi.apply(xu[keep]) - phi.apply(yu[keep]), axis=1)
    unit_ratios = np.maximum(dfu / du_, du_ / dfu)
    lam_sphere = max(lam_hat, float(unit_ratios.max()))

    passed = _bound_pass(est.lambda_lower, claimed) and _bound_pass(eq_max, lam_sphere)
    return Report(
        scenario="radial-bound",
        passed=passed,
        claimed=claimed,
        observed=est.lambda_lower,
        worst=_worst_pair_dict(est.worst_pair),
        n_samples=est.n_pairs_used,
        seed=cfg.seed,
        wall_time_ms=(time.perf_counter() - t0) * 1000.0,
        details={
            "sphere_lambda_lower": lam_sphere,
            "sphere_pairs": sphere_pairs,
            "equal_radius_max_ratio": eq_max,
        },
    )


# =====================================================================
# Scenario: disk replication preserves the constant
# =====================================================================

def verify_replication_constant(g, cfg, claimed=None):
    """The replication of a disk map with constant lambda must show no
    distortion above lambda, including across disks."""
    t0 = time.perf_counter()
    if claimed is None:
        claimed = g.lambda_claimed
    if claimed is None:
        raise ConfigError("disk map carries no claimed constant; pass claimed=")
    fmap = M.disk_replication(g)
    est = E.bilip_lower_bound(fmap, cfg, op_name="verify_replication_constant")

    # dedicated cross-disk pairs: one point in disk i, the other in disk j != i
    rng = E._op_rng(cfg.seed, "verify_replication_cross_disk")
    n = g.dim
    jmax = 0
    while 4.0 ** (jmax + 1) + 2.0 ** (jmax + 1) <= cfg.region.scale:
        jmax += 1
    n_even = n + (n % 2)
    u = rng.random((20_000, 2 * n_even + 4))
    p = E._unit_rows(E._normals(u[:, :n_even])[:, :n]) * u[:, [-4]] ** (1.0 / n)
    q = E._unit_rows(E._normals(u[:, n_even : 2 * n_even])[:, :n]) * u[:, [-3]] ** (1.0 / n)
    i_disk = np.floor(u[:, -2] * (jmax + 1)).astype(int)
    j_disk = np.floor(u[:, -1] * jmax).astype(int)
    j_disk = np.where(j_disk >= i_disk, j_disk + 1, j_disk)  # force i != j
    x = (4.0 ** i_disk * (i_disk > 0))[:, None] * E._e1(n) + (2.0 ** i_disk)[:, None] * p
    y = (4.0 ** j_disk * (j_disk > 0))[:, None] * E._e1(n) + (2.0 ** j_disk)[:, None] * q
    d = np.linalg.norm(x - y, axis=1)
    df = np.linalg.norm(fmap._eval(x) - fmap._eval(y), axis=1)
    ratios = np.maximum(df / d, d / df)
    cross_max = float(ratios.max())

    passed = _bound_pass(est.lambda_lower, claimed) and _bound_pass(cross_max, claimed)
    return Report(
        scenario="replication-constant",
        passed=passed,
        claimed=float(claimed),
        observed=est.lambda_lower,
        worst=_worst_pair_dict(est.worst_pair),
        n_samples=est.n_pairs_used,
        seed=cfg.seed,
        wall_time_ms=(time.perf_counter() - t0) * 1000.0,
        details={"cross_disk_max_ratio": cross_max, "disks_in_region": jmax + 1},
    )


# =====================================================================
# Scenario: replication drift law
# =====================================================================

def verify_replication_drift(g, x0, count=40, threshold=1e6):
    """Drift at the witness 4^k e1 + 2^k x0 equals 2^k ||g(x0) - x0||
    exactly (float rounding only) and exceeds the threshold."""
    t0 = time.perf_counter()
    x0 = np.asarray(x0, dtype=float)
    wit = E.replication_drift_witnesses(g, x0, count)
    fmap = M.disk_replication(g)
    rep = E.drift_profile(fmap, wit, threshold)
    base = float(np.linalg.norm(M.disk_apply(g, x0) - x0))
    expected = base * 2.0 ** np.arange(1, count + 1)
    rel = np.abs(rep.drifts - expected) / expected
    max_rel = float(rel.max())
    passed = max_rel <= 1e-12 and rep.verdict == E.VERDICT_EXCEEDS
    return Report(
        scenario="replication-drift",
        passed=passed,
        claimed=float(expected[-1]),
        observed=float(rep.drifts[-1]),
        worst=None,
        n_samples=count,
        seed=0,
        wall_time_ms=(time.perf_counter() - t0) * 1000.0,
        details={
            "base_move": base,
            "max_relative_error": max_rel,
            "verdict": rep.verdict,
            "threshold": float(threshold),
        },
    )


# =====================================================================
# Scenario: homomorphism, restriction and monomorphism evidence
# =====================================================================

_HOM_KINDS = ("disk_replication", "translated_replication", "radial")


def verify_homomorphism(kind, g, h, cfg, n_points=10_000):
    """construct(g o h) must equal construct(g) o construct(h) pointwise;
    the construction restricted to its core set must reproduce the
    input map; and a non-identity input must yield a drift witness."""
    t0 = time.perf_counter()
    if kind not in _HOM_KINDS:
        raise ConfigError(f"unknown homomorphism kind {kind!r}; pick from {_HOM_KINDS}")

    if kind == "radial":
        build = M.radial_extension
        composed_inner = M.compose_sphere_maps(g, h)
    elif kind == "disk_replication":
        build = M.disk_replication
        composed_inner = M.compose_disk_maps(g, h)
    else:
        build = lambda d: M.translated_replication(uniform=d)  # noqa: E731
        composed_inner = M.compose_disk_maps(g, h)

    f_gh = build(composed_inner)
    f_g = build(g)
    f_h = build(h)

    rng = E._op_rng(cfg.seed, "verify_homomorphism")
    n = g.dim
    n_even = n + (n % 2)
    u = rng.random((n_points, n_even + 1))
    pts = cfg.region.sample(E._normals(u[:, :n_even]), u[:, -1])
    lhs = f_gh._eval(pts)
    rhs = f_g._eval(f_h._eval(pts))
    residual = float(np.linalg.norm(lhs - rhs, axis=1).max())

    # restriction: the construction agrees with the input on its core set
    u2 = rng.random((1000, n_even + 1))
    core = E.BallRegion((0.0,) * n, 1.0).sample(E._normals(u2[:, :n_even]), u2[:, -1])
    if kind == "radial":
        core = E._unit_rows(core)
        restr = float(np.abs(f_g._eval(core) - g.apply(core)).max())
    else:
        restr = float(np.abs(f_g._eval(core) - g.apply(core)).max())

    # monomorphism evidence: if g moves some mesh point, the built map
    # has a drift witness with strictly positive displacement
    moves = np.linalg.norm(g.apply(core) - core, axis=1)
    drift_witness = 0.0
    if moves.max() > 1e-9:
        x0 = core[int(np.argmax(moves))]
        if kind == "radial":
            probe = 2.0 ** 20 * x0
        elif kind == "disk_replication":
            x0 = 0.9 * x0 / max(np.linalg.norm(x0), 1e-12)
            probe = 4.0 ** 20 * E._e1(n) + 2.0 ** 20 * x0
        else:
            x0 = 0.9 * x0 / max(np.linalg.norm(x0), 1e-12)
            probe = 40.0 * E._e1(n) + x0  # the disk centered at 2*20*e1
        drift_witness = float(np.linalg.norm(M.displacement(f_g, probe)))

    passed = residual <= 1e-9 and restr <= 1e-12 and (
        moves.max() <= 1e-9 or drift_witness > 0.0
    )
    return Report(
        scenario="homomorphism",
        passed=passed,
        claimed=0.0,
        observed=residual,
        worst=None,
        n_samples=n_points,
        seed=cfg.seed,
        wall_time_ms=(time.perf_counter() - t0) * 1000.0,
        details={
            "kind": kind,
            "composition_residual": residual,
            "restriction_residual": restr,
            "drift_witness": drift_witness,
        },
    )


# =====================================================================
# Scenario: product quasi-isometry parameters
# =====================================================================

def _qi_params(params):
    if isinstance(params, E.QiParams):
        return params.lam, params.eps
    lam, eps = params
    return float(lam), float(eps)


def verify_product_qi(f, f_params, g, g_params, cfg, grid_step=1.0,
                      density_radius=3.0):
    """The product of a (lam, eps) and a (mu, delta) quasi-isometry must
    pass the check with (max(lam, mu), eps + delta) in the product-sum
    metric, satisfy the pointwise drift identity exactly, and stay
    within twice the componentwise covering radius.

    Parameters may be (lam, eps) tuples or QiParams records.
    """
    t0 = time.perf_counter()
    lam, eps = _qi_params(f_params)
    mu, delta = _qi_params(g_params)
    nu = max(lam, mu)
    h = M.product_map(f, g)
    qi = E.qi_embedding_check(h, nu, eps + delta, "l1", cfg,
                              op_name="verify_product_qi")

    # pointwise drift identity in the product-sum metric
    rng = E._op_rng(cfg.seed, "verify_product_drift_identity")
    n = h.dim
    n_even = n + (n % 2)
    u = rng.random((10_000, n_even + 1))
    pts = cfg.region.sample(E._normals(u[:, :n_even]), u[:, -1])
    k = f.dim
    disp = h._displacement(pts)
    lhs = np.linalg.norm(disp[:, :k], axis=1) + np.linalg.norm(disp[:, k:], axis=1)
    rhs = (np.linalg.norm(f._displacement(pts[:, :k]), axis=1)
           + np.linalg.norm(g._displacement(pts[:, k:]), axis=1))
    drift_err = float(np.abs(lhs - rhs).max() / max(1.0, float(rhs.max())))

    # covering radius of the product vs its components
    c_f = E.c_density(f, E.ball((0.0,) * f.dim, density_radius), grid_step)
    c_g = E.c_density(g, E.ball((0.0,) * g.dim, density_radius), grid_step)
    c_h = E.c_density(h, E.ball((0.0,) * n, density_radius), grid_step)
    c_bound = 2.0 * max(c_f, c_g) + grid_step * np.sqrt(n)
    density_ok = c_h <= c_bound

    passed = qi.passed and drift_err <= 1e-12 and density_ok
    return Report(
        scenario="product-qi",
        passed=passed,
        claimed=float(nu),
        observed=float(nu if qi.passed else np.inf),
        worst=_worst_pair_dict(qi.worst_pair),
        n_samples=qi.n_pairs_used,
        seed=cfg.seed,
        wall_time_ms=(time.perf_counter() - t0) * 1000.0,
        details={
            "eps_combined": float(eps + delta),
            "worst_margin": qi.worst_margin,
            "drift_identity_error": drift_err,
            "c_density_left": c_f,
            "c_density_right": c_g,
            "c_density_product": c_h,
            "c_density_bound": float(c_bound),
        },
    )


# =====================================================================
# Scenario: spiral bound and kernel behaviour
# =====================================================================

def verify_spiral_bound(p, cfg, kernel_count=30, kernel_threshold=1e6):
    """A profile with certified entry bound C yields a map with no
    distortion above n*C + 1; equal-radius pairs are isometric; the
    far-field behaviour matches the kernel classification."""
    t0 = time.perf_counter()
    n = p.dim
    claimed = n * p.c_bound + 1.0
    fmap = M.spiral_map(p)
    est = E.bilip_lower_bound(fmap, cfg, op_name="verify_spiral_bound")

    # same-radius pairs are isometric up to rounding
    rng = E._op_rng(cfg.seed, "verify_spiral_equal_radius")
    n_even = n + (n % 2)
    u = rng.random((20_000, 2 * n_even + 2))
    du = E._unit_rows(E._normals(u[:, :n_even])[:, :n])
    dv = E._unit_rows(E._normals(u[:, n_even : 2 * n_even])[:, :n])
    lo = getattr(cfg.region, "inner", 1e-3 * cfg.region.scale)
    lo = max(lo, 1e-9)
    radii = np.exp(np.log(lo) + u[:, -2] * (np.log(cfg.region.scale) - np.log(lo)))
    hstep = 10.0 ** (-3.0 * u[:, -1])
    x = radii[:, None] * du
    # perpendicular offsets keep the separation ~ h * r, away from noise
    perp = E._unit_rows(dv - np.sum(dv * du, axis=1)[:, None] * du)
    y = radii[:, None] * E._unit_rows(du + hstep[:, None] * perp)
    d = np.linalg.norm(x - y, axis=1)
    keep = d >= 1e-9 * radii
    df = np.linalg.norm(fmap._eval(x[keep]) - fmap._eval(y[keep]), axis=1)
    ratios = df / d[keep]
    eq_worst = float(np.abs(ratios - 1.0).max())

    # kernel classification: compactly supported profiles must stay
    # bounded, far-field rotations must produce growing drift
    kind, _ = p.far_field()
    kernel_detail = {"far_field": kind}
    kernel_ok = True
    if kind == "identity":
        ks = np.arange(1, kernel_count + 1)
        ray = (2.0 ** ks)[:, None] * E._e1(n)[None, :]
        rep = E.drift_profile(fmap, ray, kernel_threshold)
        kernel_ok = rep.verdict == E.VERDICT_BOUNDED
        kernel_detail["verdict"] = rep.verdict
        kernel_detail["max_drift"] = float(rep.drifts.max())
    elif kind == "rotation":
        try:
            wit = E.spiral_drift_witnesses(p, kernel_count)
            rep = E.drift_profile(fmap, wit, kernel_threshold)
            theta, _ = E.rotation_angle_and_plane(p.matrix(1.0))
            expected = 2.0 * np.sin(theta / 2.0) * np.linalg.norm(wit, axis=1)
            rel = float(np.abs(rep.drifts - expected).max() / expected.max())
            kernel_ok = rep.verdict == E.VERDICT_EXCEEDS and rel <= 1e-9
            kernel_detail["verdict"] = rep.verdict
            kernel_detail["closed_form_rel_error"] = rel
        except NoWitnessError:
            kernel_detail["verdict"] = "identity-limit"

    passed = (_bound_pass(est.lambda_lower, claimed)
              and eq_worst <= 1e-9 and kernel_ok)
    return Report(
        scenario="spiral-bound",
        passed=passed,
        claimed=claimed,
        observed=est.lambda_lower,
        worst=_worst_pair_dict(est.worst_pair),
        n_samples=est.n_pairs_used,
        seed=cfg.seed,
        wall_time_ms=(time.perf_counter() - t0) * 1000.0,
        details={
            "c_bound": p.c_bound,
            "equal_radius_worst_deviation": eq_worst,
            **kernel_detail,
        },
    )


# =====================================================================
# Scenario: matrix norm inequalities
# =====================================================================

def verify_matrix_norms(seed, n_matrices=1000, max_dim=8):
    """||A|| <= ||A||_E <= sqrt(n) ||A|| on random matrices."""
    t0 = time.perf_counter()
    rng = E._op_rng(seed, "verify_matrix_norms")
    dims = rng.integers(1, max_dim + 1, size=n_matrices)
    violations = 0
    worst_gap = np.inf
    for n in range(1, max_dim + 1):
        count = int((dims == n).sum())
        if count == 0:
            continue
        mats = rng.normal(size=(count, n, n))
        ops = largest_singular_values(mats)
        fros = np.sqrt(np.sum(mats * mats, axis=(1, 2)))
        lo_gap = (fros - ops) / fros
        hi_gap = (np.sqrt(n) * ops - fros) / fros
        worst_gap = min(worst_gap, float(lo_gap.min()), float(hi_gap.min()))
        violations += int(
            np.sum(
                (ops > fros * (1.0 + 1e-9))
                | (fros > np.sqrt(n) * ops * (1.0 + 1e-9))
            )
        )
    return Report(
        scenario="matrix-norms",
        passed=violations == 0,
        claimed=0.0,
        observed=float(violations),
        worst=None,
        n_samples=n_matrices,
        seed=seed,
        wall_time_ms=(time.perf_counter() - t0) * 1000.0,
        details={"worst_relative_gap": float(worst_gap), "max_dim": max_dim},
    )


# =====================================================================
# Scenario: intrinsic vs chordal metric on hypersurface clouds
# =====================================================================

_CLOUDS = {
    "circle": lambda n: E.circle_cloud(n),
    "sphere": lambda n: E.sphere_cloud(n),
    "ellipse": lambda n: E.ellipse_cloud(2.0, 1.0, n),
}


def verify_metric_equivalence(kind, n_points, eps, n_pairs, seed,
                              expected_ratio=None, rel_tol=0.02):
    """Graph length over chord stays finite and reproduces the known
    worst ratio of the surface; the graph length never undercuts the
    chord."""
    t0 = time.perf_counter()
    if kind not in _CLOUDS:
        raise ConfigError(f"unknown cloud kind {kind!r}; pick from {sorted(_CLOUDS)}")
    cloud = _CLOUDS[kind](n_points)
    graph = E.neighbor_graph(cloud, eps)
    ratio = E.metric_equivalence_ratio(cloud, eps, n_pairs, seed)

    # spot-check delta >= d on explicit pairs, including an antipodal one
    rng = E._op_rng(seed, "verify_metric_delta_ge_d")
    idx = rng.integers(0, n_points, size=(64, 2))
    undercut = 0.0
    for i, j in idx:
        if i == j:
            continue
        geo = E.geodesic_estimate(cloud, eps, int(i), int(j), graph=graph)
        chord = float(np.linalg.norm(cloud[i] - cloud[j]))
        undercut = min(undercut, geo - chord)
    anti = E.geodesic_estimate(cloud, eps, 0, n_points // 2, graph=graph)

    details = {
        "kind": kind,
        "n_points": n_points,
        "eps": eps,
        "max_ratio": ratio,
        "antipodal_graph_length": anti,
        "worst_undercut": float(undercut),
    }
    passed = undercut >= -1e-12 and np.isfinite(ratio)
    if expected_ratio is not None:
        rel = abs(ratio - expected_ratio) / expected_ratio
        details["expected_ratio"] = float(expected_ratio)
        details["ratio_rel_error"] = float(rel)
        passed = passed and rel <= rel_tol
    return Report(
        scenario="metric-equivalence",
        passed=passed,
        claimed=float(expected_ratio) if expected_ratio is not None else None,
        observed=ratio,
        worst=None,
        n_samples=n_pairs,
        seed=seed,
        wall_time_ms=(time.perf_counter() - t0) * 1000.0,
        details=details,
    )


# =====================================================================
# Default suite: one scenario per proven bound
# =====================================================================

def default_suite(seed=7, n_pairs=100_000):
    """Run every bound through at least one scenario at reduced sizes.

    Returns the list of reports in a fixed order.
    """
    reports = []

    phi = M.make_latitude_sphere_map(0.5, dim=2)
    cfg = E.SamplerConfig(seed=seed, region=E.ball((0.0, 0.0), 100.0),
                          n_pairs=n_pairs)
    reports.append(verify_radial_bound(phi, cfg, sphere_pairs=50_000))

    twist = M.make_twist_disk_map(dim=2)
    cfg = E.SamplerConfig(seed=seed, region=E.ball((0.0, 0.0), 300.0),
                          n_pairs=n_pairs)
    reports.append(verify_replication_constant(twist, cfg))

    pl_twist = M.pl_disk_map(plmod.pl_twist_example(2, 8, 0.3))
    reports.append(verify_replication_constant(pl_twist, cfg))

    reports.append(verify_replication_drift(twist, np.array([0.3125, -0.25])))

    cfg = E.SamplerConfig(seed=seed, region=E.ball((0.0, 0.0), 70.0),
                          n_pairs=n_pairs)
    reports.append(verify_homomorphism(
        "disk_replication", twist, M.make_twist_disk_map(dim=2, amplitude=-0.5),
        cfg))

    spiral = M.LogSpiralProfile(1.0, (0, 1), 2)
    rad = M.radial_extension(phi)
    lam_f = 1.0 + phi.lambda_claimed
    lam_g = 2 * spiral.c_bound + 1.0
    cfg = E.SamplerConfig(seed=seed, region=E.ball((0.0,) * 4, 50.0),
                          n_pairs=n_pairs)
    reports.append(verify_product_qi(rad, (lam_f, 0.0),
                                     M.spiral_map(spiral), (lam_g, 0.0), cfg))

    cfg = E.SamplerConfig(seed=seed,
                          region=E.annulus((0.0, 0.0), 1e-3, 1e4),
                          n_pairs=n_pairs)
    reports.append(verify_spiral_bound(spiral, cfg))

    cutoff = M.CutoffRotationProfile(bump_profile(1.0, 1.0, 3.0), (0, 1), 2)
    reports.append(verify_spiral_bound(cutoff, cfg))

    const = M.ConstantRotationProfile(rotation_matrix((0, 1), 2.0, 2))
    reports.append(verify_spiral_bound(const, cfg))

    reports.append(verify_matrix_norms(seed))

    # pairs within 2% of the antipodal ratio occur with probability
    # ~0.02 each, so 1500 samples miss them only with probability e^-30
    reports.append(verify_metric_equivalence(
        "circle", 4000, 0.01, 1500, seed, expected_ratio=float(np.pi / 2)))

    return reports
