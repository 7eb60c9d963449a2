"""Acceptance suite: every quantitative bound the constructions promise,
checked at full desk scale with its stated tolerance.

One criterion per test, one printed pass/fail line per criterion. The
stated runtime budgets are expectations for a laptop-class machine;
they are asserted with a 3x allowance so a pathological slowdown fails
while machine variance does not.
"""

import json
import re
import time

import numpy as np

from conftest import ACCEPTANCE_LINES

from bilip import estimators as E
from bilip import maps as M
from bilip import pl
from bilip import verify as V
from bilip.cli import run_cli
from bilip.core import rotation_matrix
from bilip.profiles import bump_profile

SEED = 7
RUNTIME_ALLOWANCE = 3.0


def announce(num, name, passed, elapsed, budget, detail=""):
    status = "PASS" if passed else "FAIL"
    line = (f"[{status}] criterion {num:02d} {name}: {detail} "
            f"({elapsed:.1f}s, budget {budget:.0f}s)")
    print(line)
    ACCEPTANCE_LINES.append(line)
    return passed


def ball_cfg(dim, radius, n_pairs, seed=SEED):
    return E.SamplerConfig(seed=seed, region=E.ball((0.0,) * dim, radius),
                           n_pairs=n_pairs)


def test_criterion_01_radial_extension_bound():
    """Latitude maps on S^1 and S^2 stay within 1 + lambda-hat over
    1e6 pairs; orthogonal maps extend to exact isometries."""
    t0 = time.perf_counter()
    ok = True
    details = []
    for dim in (2, 3):
        for beta in (0.25, 0.5, 0.75):
            case_t = time.perf_counter()
            phi = M.make_latitude_sphere_map(beta, dim=dim)
            rep = V.verify_radial_bound(phi, ball_cfg(dim, 100.0, 1_000_000))
            case_el = time.perf_counter() - case_t
            ok &= rep.passed and case_el < 10.0 * RUNTIME_ALLOWANCE
            details.append(f"n={dim} b={beta}: {rep.observed:.4f}<="
                           f"{rep.claimed:.4f}")
    phi = M.OrthogonalSphereMap(rotation_matrix((0, 1), 1.0, 3))
    rep = V.verify_radial_bound(phi, ball_cfg(3, 100.0, 1_000_000))
    iso_ok = rep.passed and abs(rep.observed - 1.0) <= 1e-9
    ok &= iso_ok
    details.append(f"orthogonal: observed={rep.observed:.12f}")
    elapsed = time.perf_counter() - t0
    assert announce(1, "radial extension bound", ok, elapsed, 70,
                    "; ".join(details))


def test_criterion_02_replication_preserves_constant():
    """Disk replication of twist and PL-twist maps never distorts
    beyond the input map's constant, cross-disk pairs included."""
    t0 = time.perf_counter()
    ok = True
    details = []
    cases = [
        ("twist", 2, M.make_twist_disk_map(dim=2)),
        ("twist", 3, M.make_twist_disk_map(dim=3)),
        ("pl", 2, M.pl_disk_map(pl.pl_twist_example(2, 8, 0.3))),
        ("pl", 3, M.pl_disk_map(pl.pl_twist_example(3, 4, 0.2))),
    ]
    for kind, dim, g in cases:
        case_t = time.perf_counter()
        rep = V.verify_replication_constant(g, ball_cfg(dim, 300.0, 1_000_000))
        case_el = time.perf_counter() - case_t
        ok &= rep.passed and case_el < 15.0 * RUNTIME_ALLOWANCE
        details.append(f"{kind} n={dim}: {rep.observed:.4f}<={rep.claimed:.4f}")
    elapsed = time.perf_counter() - t0
    assert announce(2, "replication preserves constant", ok, elapsed, 60,
                    "; ".join(details))


def test_criterion_03_replication_drift_law():
    """Measured drift at 4^k e1 + 2^k x0 equals 2^k ||g(x0) - x0|| to
    1e-12 relative for k = 1..40 and exceeds 1e6."""
    t0 = time.perf_counter()
    g = M.make_twist_disk_map(dim=2)
    rep = V.verify_replication_drift(g, np.array([0.3125, -0.25]),
                                     count=40, threshold=1e6)
    elapsed = time.perf_counter() - t0
    ok = (rep.passed
          and rep.details["max_relative_error"] <= 1e-12
          and rep.details["verdict"] == E.VERDICT_EXCEEDS
          and elapsed < 1.0 * RUNTIME_ALLOWANCE)
    assert announce(3, "replication drift law", ok, elapsed, 1,
                    f"max rel err={rep.details['max_relative_error']:.2e}, "
                    f"final drift={rep.observed:.3e}")


def test_criterion_04_homomorphism_and_restriction():
    """Replication of a composition equals the composition of
    replications to 1e-9 over 1e4 points; the restriction to the unit
    disk is the input map; disjoint supports commute bit-exactly."""
    t0 = time.perf_counter()
    g = M.make_twist_disk_map(dim=2, amplitude=0.8)
    h = M.make_twist_disk_map(dim=2, amplitude=-0.5)
    rep = V.verify_homomorphism("disk_replication", g, h,
                                ball_cfg(2, 70.0, 10_000), n_points=10_000)
    # disjoint-support translated replications commute exactly
    a = M.translated_replication(disk_maps=[g])
    b = M.translated_replication(disk_maps=[None, h])
    rng = np.random.default_rng(SEED)
    pts = rng.normal(size=(10_000, 2)) * 4.0
    ab = M.evaluate_points(M.compose(a, b), pts)
    ba = M.evaluate_points(M.compose(b, a), pts)
    commute = np.array_equal(ab, ba)
    elapsed = time.perf_counter() - t0
    ok = rep.passed and commute and elapsed < 5.0 * RUNTIME_ALLOWANCE
    assert announce(4, "homomorphism and restriction", ok, elapsed, 5,
                    f"residual={rep.details['composition_residual']:.2e}, "
                    f"restriction={rep.details['restriction_residual']:.2e}, "
                    f"commute={commute}")


def test_criterion_05_product_quasi_isometry():
    """The product of verified quasi-isometries passes with the
    composed parameters in the product-sum metric; the drift identity
    is exact; the product stays 2C-dense."""
    t0 = time.perf_counter()
    phi = M.make_latitude_sphere_map(0.5, dim=2)
    f = M.radial_extension(phi)
    g = M.spiral_map(M.LogSpiralProfile(1.0, (0, 1), 2))
    rep = V.verify_product_qi(f, (1.0 + phi.lambda_claimed, 0.0),
                              g, (3.0, 0.0),
                              ball_cfg(4, 50.0, 100_000))
    elapsed = time.perf_counter() - t0
    ok = (rep.passed
          and rep.details["drift_identity_error"] <= 1e-12
          and rep.details["c_density_product"] <= rep.details["c_density_bound"]
          and elapsed < 10.0 * RUNTIME_ALLOWANCE)
    assert announce(5, "product quasi-isometry constants", ok, elapsed, 10,
                    f"nu={rep.claimed:.1f}, drift err="
                    f"{rep.details['drift_identity_error']:.2e}, "
                    f"2C ok={rep.details['c_density_product'] <= rep.details['c_density_bound']}")


def test_criterion_06_spiral_bound():
    """Log-spiral maps stay within n*C + 1 over 1e6 pairs for
    c in {0.5, 1, 2} and n in {2, 3}; same-radius pairs are isometric
    to 1e-9."""
    t0 = time.perf_counter()
    ok = True
    details = []
    for dim in (2, 3):
        for c in (0.5, 1.0, 2.0):
            case_t = time.perf_counter()
            p = M.LogSpiralProfile(c, (0, 1), dim)
            cfg = E.SamplerConfig(seed=SEED,
                                  region=E.annulus((0.0,) * dim, 1e-3, 1e4),
                                  n_pairs=1_000_000)
            rep = V.verify_spiral_bound(p, cfg)
            case_el = time.perf_counter() - case_t
            ok &= (rep.passed
                   and rep.details["equal_radius_worst_deviation"] <= 1e-9
                   and case_el < 15.0 * RUNTIME_ALLOWANCE)
            details.append(f"n={dim} c={c}: {rep.observed:.3f}<={rep.claimed:.1f}")
    elapsed = time.perf_counter() - t0
    assert announce(6, "spiral bound (nC+1)", ok, elapsed, 90,
                    "; ".join(details))


def test_criterion_07_spiral_kernel_trichotomy():
    """Compactly supported profiles drift boundedly; a far-field
    rotation by theta drifts like 2 sin(theta/2) 2^k, matching the
    closed form to 1e-9."""
    t0 = time.perf_counter()
    cut = M.CutoffRotationProfile(bump_profile(1.0, 1.0, 3.0), (0, 1), 2)
    ray = (2.0 ** np.arange(1, 31))[:, None] * np.array([1.0, 0.0])[None, :]
    rep_cut = E.drift_profile(M.spiral_map(cut), ray, 1e6)
    bounded_ok = rep_cut.verdict == E.VERDICT_BOUNDED

    theta = 2.0
    const = M.ConstantRotationProfile(rotation_matrix((0, 1), theta, 2))
    wit = E.spiral_drift_witnesses(const, 30)
    rep_const = E.drift_profile(M.spiral_map(const), wit, 1e6)
    expected = 2.0 * np.sin(theta / 2.0) * 2.0 ** np.arange(1, 31)
    rel = np.abs(rep_const.drifts / expected - 1.0).max()
    growing_ok = rep_const.verdict == E.VERDICT_EXCEEDS and rel <= 1e-9

    elapsed = time.perf_counter() - t0
    ok = bounded_ok and growing_ok and elapsed < 2.0 * RUNTIME_ALLOWANCE
    assert announce(7, "spiral kernel trichotomy", ok, elapsed, 2,
                    f"cutoff={rep_cut.verdict}, rotation rel err={rel:.2e}")


def test_criterion_08_pl_norms():
    """The exact PL differential norm matches a dense two-point
    difference-quotient supremum within 1%; identity and affine maps
    are exact to 1e-10."""
    t0 = time.perf_counter()
    ok = True
    details = []

    tri = pl.kuhn_triangulation(2, (-1.0, 1.0), 8)
    ident_err = abs(pl.pl_differential_norm(pl.identity_plmap(tri)) - 1.0)
    a = np.array([[3.0, 0.5], [0.0, 1.0]])
    f_aff = pl.PLMap(tri, tri.vertices @ a.T, boundary_fixed=False)
    from bilip.core import operator_norm

    affine_err = abs(pl.pl_differential_norm(f_aff) - operator_norm(a))
    ok &= ident_err <= 1e-10 and affine_err <= 1e-10
    details.append(f"identity err={ident_err:.1e}, affine err={affine_err:.1e}")

    rng = np.random.default_rng(SEED)
    for dim, res in ((2, 16), (3, 8)):
        t = pl.kuhn_triangulation(dim, (-1.0, 1.0), res)
        images = t.vertices.copy()
        interior = np.flatnonzero(~t.boundary_vertex_mask())
        for idx in rng.choice(interior, size=3, replace=False):
            images[idx] += rng.uniform(-0.4, 0.4, size=dim) * t.cell
        f = pl.PLMap(t, images)
        exact = pl.pl_differential_norm(f)
        x = rng.uniform(-1, 1, size=(1_000_000, dim))
        d = rng.normal(size=(1_000_000, dim))
        d /= np.linalg.norm(d, axis=1)[:, None]
        h = 1e-6
        quot = np.linalg.norm(pl.pl_eval(f, x + h * d) - pl.pl_eval(f, x),
                              axis=1) / h
        sampled = quot.max()
        case_ok = sampled <= exact * (1 + 1e-6) and sampled >= 0.99 * exact
        ok &= case_ok
        details.append(f"n={dim}: sampled/exact={sampled / exact:.5f}")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 20.0 * RUNTIME_ALLOWANCE
    assert announce(8, "exact PL norms", ok, elapsed, 20, "; ".join(details))


def test_criterion_09_metric_equivalence():
    """Graph length over chord reproduces the antipodal ratio pi/2
    within 2% on a circle cloud and 8% on a sphere cloud; the graph
    length never undercuts the chord."""
    t0 = time.perf_counter()
    half_pi = np.pi / 2

    circle = E.circle_cloud(10_000)
    graph_c = E.neighbor_graph(circle, 0.01)
    geo = E.geodesic_estimate(circle, 0.01, 0, 5000, graph=graph_c)
    chord = float(np.linalg.norm(circle[0] - circle[5000]))
    circle_ratio = geo / chord
    circle_ok = abs(circle_ratio - half_pi) / half_pi <= 0.02

    sphere = E.sphere_cloud(10_000)
    sphere_ratio = E.metric_equivalence_ratio(sphere, 0.09, 10_000, SEED)
    sphere_ok = abs(sphere_ratio - half_pi) / half_pi <= 0.08

    rng = np.random.default_rng(SEED)
    undercut = 0.0
    graph_s = E.neighbor_graph(sphere, 0.09)
    for cloud, graph in ((circle, graph_c), (sphere, graph_s)):
        n = cloud.shape[0]
        for _ in range(40):
            i, j = rng.integers(0, n, size=2)
            if i == j:
                continue
            geo_ij = E.geodesic_estimate(cloud, 0.1, int(i), int(j), graph=graph)
            undercut = min(undercut,
                           geo_ij - float(np.linalg.norm(cloud[i] - cloud[j])))
    delta_ok = undercut >= -1e-12

    elapsed = time.perf_counter() - t0
    ok = circle_ok and sphere_ok and delta_ok and elapsed < 30.0 * RUNTIME_ALLOWANCE
    assert announce(9, "intrinsic vs chordal metric", ok, elapsed, 30,
                    f"circle={circle_ratio:.4f}, sphere={sphere_ratio:.4f}, "
                    f"target={half_pi:.4f}, undercut={undercut:.1e}")


def test_criterion_10_matrix_norm_inequalities():
    """||A|| <= ||A||_E <= sqrt(n) ||A|| with zero violations on 1e3
    random matrices up to dimension 8."""
    t0 = time.perf_counter()
    rep = V.verify_matrix_norms(SEED, n_matrices=1000, max_dim=8)
    elapsed = time.perf_counter() - t0
    ok = rep.passed and rep.observed == 0.0 and elapsed < 1.0 * RUNTIME_ALLOWANCE
    assert announce(10, "matrix norm inequalities", ok, elapsed, 1,
                    f"violations={int(rep.observed)}, "
                    f"worst gap={rep.details['worst_relative_gap']:.2e}")


def test_criterion_11_determinism(tmp_path, capsys):
    """Rerunning a scenario with identical config and seed produces
    byte-identical JSON except for the wall-time field."""
    t0 = time.perf_counter()
    args = ["verify", "radial-bound", "--beta", "0.5", "--n", "2",
            "--seed", "21", "--pairs", "50000"]
    code1 = run_cli(args)
    out1 = capsys.readouterr().out
    code2 = run_cli(args)
    out2 = capsys.readouterr().out
    strip = lambda t: re.sub(r'"wall_time_ms": [0-9.e+-]+', "", t)  # noqa: E731
    identical = strip(out1) == strip(out2) and code1 == code2 == 0
    # the stripped output still parses and carries the same payload
    payload = json.loads(out1)
    elapsed = time.perf_counter() - t0
    ok = identical and payload["seed"] == 21
    assert announce(11, "byte-identical reruns", ok, elapsed, 5,
                    f"identical={identical}")
