"""Numerical certification: sampled bi-Lipschitz bounds, quasi-isometry
checks, covering-radius estimates, drift witnesses and graph-based
length metrics.

Estimators are pure functions of their SamplerConfig. Randomness comes
from one named generator (PCG64); each estimator hashes its operation
name into the seed so that different estimators draw independent
streams from the same user seed. All randomness for pair i occupies a
fixed block of uniforms, generated in row order, so the first N pairs
of a longer run coincide with a shorter run bit for bit (estimates are
monotone in n_pairs), and chunked evaluation reduces with a
deterministic ordered max, so results are reproducible bit for bit.
"""

import hashlib
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components, dijkstra
from scipy.spatial import cKDTree

from . import maps as M
from .core import as_points, as_vector
from .errors import (
    DimensionMismatchError,
    DisconnectedCloudError,
    EmptyRegionError,
    InsufficientSamplesError,
    InvalidPointError,
    NoWitnessError,
    TrivialWitnessError,
)

_CHUNK = 131072
_DEGENERATE_PAIR = 1e-12
_RELATIVE_SLACK = 1e-9  # float headroom on proven inequalities


def _op_rng(seed, op_name):
    """Generator for (seed, op name); the op name is hashed with sha256
    so streams are stable across runs and platforms."""
    tag = int.from_bytes(hashlib.sha256(op_name.encode()).digest()[:8], "big")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, tag])))


def _normals(u):
    """Standard normals from uniform columns via Box-Muller (fixed
    consumption: 2 uniforms -> 2 normals), keeping streams prefix-stable."""
    n_cols = u.shape[1]
    assert n_cols % 2 == 0
    r = np.sqrt(-2.0 * np.log1p(-u[:, 0::2]))
    ang = 2.0 * np.pi * u[:, 1::2]
    out = np.empty_like(u)
    out[:, 0::2] = r * np.cos(ang)
    out[:, 1::2] = r * np.sin(ang)
    return out


def _unit_rows(v):
    nrm = np.linalg.norm(v, axis=1)
    nrm = np.where(nrm == 0.0, 1.0, nrm)
    return v / nrm[:, None]


# =====================================================================
# Sampling regions
# =====================================================================

@dataclass(frozen=True)
class BallRegion:
    center: tuple
    radius: float

    def __post_init__(self):
        if self.radius <= 0.0:
            raise EmptyRegionError(f"ball radius must be positive, got {self.radius}")

    @property
    def dim(self):
        return len(self.center)

    @property
    def scale(self):
        return float(self.radius)

    def sample(self, dirs, aux):
        r = self.radius * aux ** (1.0 / self.dim)
        return np.asarray(self.center) + r[:, None] * _unit_rows(dirs[:, : self.dim])

    def contains(self, pts):
        return np.linalg.norm(pts - np.asarray(self.center), axis=1) <= self.radius

    def bounds(self):
        c = np.asarray(self.center)
        return c - self.radius, c + self.radius


@dataclass(frozen=True)
class BoxRegion:
    lo: tuple
    hi: tuple

    def __post_init__(self):
        lo, hi = np.asarray(self.lo), np.asarray(self.hi)
        if lo.shape != hi.shape or np.any(hi <= lo):
            raise EmptyRegionError("box needs lo < hi componentwise")

    @property
    def dim(self):
        return len(self.lo)

    @property
    def scale(self):
        return float((np.asarray(self.hi) - np.asarray(self.lo)).max() / 2.0)

    def sample(self, dirs, aux):
        # the direction columns are standard normals; the normal CDF
        # turns them back into exact uniforms for box sampling
        from scipy.special import ndtr

        lo, hi = np.asarray(self.lo), np.asarray(self.hi)
        u = ndtr(dirs[:, : self.dim])
        return lo + u * (hi - lo)

    def contains(self, pts):
        lo, hi = np.asarray(self.lo), np.asarray(self.hi)
        return ((pts >= lo) & (pts <= hi)).all(axis=1)

    def bounds(self):
        return np.asarray(self.lo, dtype=float), np.asarray(self.hi, dtype=float)


@dataclass(frozen=True)
class AnnulusRegion:
    """Ball shell between two radii; used for scale-spanning maps whose
    behaviour at the origin is excluded by construction."""

    center: tuple
    inner: float
    outer: float

    def __post_init__(self):
        if not (0.0 <= self.inner < self.outer):
            raise EmptyRegionError("annulus needs 0 <= inner < outer")

    @property
    def dim(self):
        return len(self.center)

    @property
    def scale(self):
        return float(self.outer)

    def sample(self, dirs, aux):
        n = self.dim
        rn = self.inner ** n + aux * (self.outer ** n - self.inner ** n)
        r = rn ** (1.0 / n)
        return np.asarray(self.center) + r[:, None] * _unit_rows(dirs[:, :n])

    def contains(self, pts):
        r = np.linalg.norm(pts - np.asarray(self.center), axis=1)
        return (r >= self.inner) & (r <= self.outer)

    def bounds(self):
        c = np.asarray(self.center)
        return c - self.outer, c + self.outer


def ball(center, radius):
    return BallRegion(tuple(float(c) for c in center), float(radius))


def box(lo, hi):
    return BoxRegion(tuple(float(x) for x in lo), tuple(float(x) for x in hi))


def annulus(center, inner, outer):
    return AnnulusRegion(tuple(float(c) for c in center), float(inner), float(outer))


# =====================================================================
# Sampler configuration and pair streams
# =====================================================================

@dataclass(frozen=True)
class SamplerConfig:
    """Deterministic pair-sampling plan.

    ``mix`` gives the fractions of global pairs, local pairs (offsets
    of size local_scale * region scale) and construction-aware witness
    pairs; identical configs produce identical sample streams.
    """

    seed: int
    region: object
    n_pairs: int
    mix: tuple = (0.5, 0.3, 0.2)
    local_scale: float = 1e-3

    def __post_init__(self):
        if self.seed < 0:
            raise InvalidPointError("seed must be a nonnegative integer")
        if self.n_pairs < 1:
            raise InvalidPointError("n_pairs must be >= 1")
        m = np.asarray(self.mix, dtype=float)
        if m.shape != (3,) or np.any(m < 0) or abs(m.sum() - 1.0) > 1e-12:
            raise InvalidPointError("mix must be 3 nonnegative fractions summing to 1")
        if self.local_scale <= 0:
            raise InvalidPointError("local_scale must be positive")


def _witness_pairs(m, region, dirs_a, dirs_b, aux_a, aux_b, w1, w2, w3):
    """Construction-aware pairs for the root node of ``m``.

    Heuristics per constructor: rays and tight same-sphere pairs for
    norm-preserving maps, disk-boundary and cross-disk pairs for the
    replication embeddings, single-block offsets for products, and
    multi-scale local pairs otherwise. Everything is a pure function of
    the supplied uniforms.
    """
    n = m.dim
    scale = region.scale
    if isinstance(m, (M.RadialExtensionMap, M.SpiralMap)):
        lo = max(1e-3 * scale, 1e-6)
        r = np.exp(np.log(lo) + w1 * (np.log(scale) - np.log(lo)))
        u = _unit_rows(dirs_a[:, :n])
        v = _unit_rows(dirs_b[:, :n])
        ray = w3 < 0.5
        x = r[:, None] * u
        y_ray = (r * (1.3 + 0.7 * w2))[:, None] * u    # same ray, other radius
        # same sphere, tangential offset: perpendicular so the pair
        # separation is ~ h*r and never collapses into rounding noise
        perp = _unit_rows(v - np.sum(v * u, axis=1)[:, None] * u)
        h = 1e-3 * (0.5 + w2)
        y_sph = r[:, None] * _unit_rows(u + h[:, None] * perp)
        y = np.where(ray[:, None], y_ray, y_sph)
        return x, y
    if isinstance(m, M.DiskReplicationMap):
        jmax = 0
        while 4.0 ** (jmax + 1) + 2.0 ** (jmax + 1) <= scale:
            jmax += 1
        j1 = np.floor(w1 * (jmax + 1)).astype(np.int64)
        j2 = np.floor(w2 * (jmax + 1)).astype(np.int64)
        u = _unit_rows(dirs_a[:, :n])
        v = _unit_rows(dirs_b[:, :n])
        r1 = aux_a ** (1.0 / n)
        r2 = aux_b ** (1.0 / n)
        straddle = w3 < (1.0 / 3.0)
        # interior points of two (possibly different) disks
        x = (4.0 ** j1 * (j1 > 0))[:, None] * _e1(n) + (2.0 ** j1 * r1)[:, None] * u
        y = (4.0 ** j2 * (j2 > 0))[:, None] * _e1(n) + (2.0 ** j2 * r2)[:, None] * v
        # straddling pairs hug the boundary of disk j1 from both sides
        delta = 1e-4 + 0.01 * w2
        x_in = (4.0 ** j1 * (j1 > 0))[:, None] * _e1(n) \
            + (2.0 ** j1 * (1.0 - delta))[:, None] * u
        y_out = (4.0 ** j1 * (j1 > 0))[:, None] * _e1(n) \
            + (2.0 ** j1 * (1.0 + delta))[:, None] * _unit_rows(u + 0.02 * v)
        x = np.where(straddle[:, None], x_in, x)
        y = np.where(straddle[:, None], y_out, y)
        return x, y
    if isinstance(m, M.TranslatedReplicationMap):
        count = 1 + int(min(scale / 2.0, 64.0))
        if m.disk_maps is not None:
            count = min(count, len(m.disk_maps))
        j1 = np.floor(w1 * count).astype(np.int64)
        j2 = np.floor(w2 * count).astype(np.int64)
        u = _unit_rows(dirs_a[:, :n])
        v = _unit_rows(dirs_b[:, :n])
        x = (2.0 * j1)[:, None] * _e1(n) + (aux_a ** (1.0 / n))[:, None] * u
        y = (2.0 * j2)[:, None] * _e1(n) + (aux_b ** (1.0 / n))[:, None] * v
        return x, y
    if isinstance(m, M.ProductMap):
        x = region.sample(dirs_a, aux_a)
        k = m.left.dim
        h = scale * np.exp(w2 * np.log(1e-3))  # log-uniform in [1e-3, 1] * scale
        offset = np.zeros_like(x)
        left_block = w1 < 0.5
        d_left = _unit_rows(dirs_b[:, :k])
        d_right = _unit_rows(dirs_b[:, : n - k])
        offset[left_block, :k] = d_left[left_block]
        offset[~left_block, k:] = d_right[~left_block]
        return x, x + h[:, None] * offset
    # default: multi-scale local pairs
    x = region.sample(dirs_a, aux_a)
    h = scale * np.exp(w1 * np.log(1e-6))
    y = x + h[:, None] * _unit_rows(dirs_b[:, :n])
    return x, y


def _e1(n):
    e = np.zeros(n)
    e[0] = 1.0
    return e


def _pair_chunks(m, cfg, op_name):
    """Yield (x, y) chunks of the deterministic pair stream."""
    n = m.dim
    if cfg.region.dim != n:
        raise DimensionMismatchError(
            f"region dimension {cfg.region.dim} != map dimension {n}"
        )
    n_even = n + (n % 2)
    per_point = n_even + 1
    width = 1 + 2 * per_point + 3
    rng = _op_rng(cfg.seed, op_name)
    g_frac, l_frac, _ = cfg.mix
    remaining = cfg.n_pairs
    while remaining > 0:
        count = min(_CHUNK, remaining)
        remaining -= count
        u = rng.random((count, width))
        cat = u[:, 0]
        a = u[:, 1 : 1 + per_point]
        b = u[:, 1 + per_point : 1 + 2 * per_point]
        w1, w2, w3 = u[:, -3], u[:, -2], u[:, -1]
        dirs_a, aux_a = _normals(a[:, :n_even]), a[:, n_even]
        dirs_b, aux_b = _normals(b[:, :n_even]), b[:, n_even]

        x = cfg.region.sample(dirs_a, aux_a)
        y = cfg.region.sample(dirs_b, aux_b)

        local = (cat >= g_frac) & (cat < g_frac + l_frac)
        if local.any():
            h = cfg.local_scale * cfg.region.scale * (0.5 + w1[local])
            y[local] = x[local] + h[:, None] * _unit_rows(dirs_b[local, :n])

        witness = cat >= g_frac + l_frac
        if witness.any():
            wx, wy = _witness_pairs(
                m, cfg.region, dirs_a[witness], dirs_b[witness],
                aux_a[witness], aux_b[witness],
                w1[witness], w2[witness], w3[witness],
            )
            x[witness] = wx
            y[witness] = wy
        yield x, y


# =====================================================================
# Bi-Lipschitz estimates
# =====================================================================

@dataclass
class BilipEstimate:
    """Sampled lower bound: no valid bi-Lipschitz constant of the map
    on the region can be smaller than ``lambda_lower``."""

    lambda_lower: float
    worst_pair: tuple  # (x, y, ratio)
    n_pairs_used: int
    seed: int

    def record(self):
        x, y, ratio = self.worst_pair
        return {
            "lambda_lower": self.lambda_lower,
            "worst_pair": {"x": list(x), "y": list(y), "ratio": ratio},
            "n_pairs": self.n_pairs_used,
            "seed": self.seed,
        }


def _two_point_stats(m, x, y):
    """Distance ratios for one chunk; pairs closer than 1e-12 are
    dropped. Returns (keep_count, stats, ratios, x, y) filtered."""
    d = np.linalg.norm(x - y, axis=1)
    keep = d >= _DEGENERATE_PAIR
    if not keep.any():
        return 0, None, None, None, None
    x, y, d = x[keep], y[keep], d[keep]
    fx = m._eval(x)
    fy = m._eval(y)
    df = np.linalg.norm(fx - fy, axis=1)
    with np.errstate(divide="ignore"):
        ratio = df / d
        stat = np.maximum(ratio, np.where(ratio > 0, 1.0 / ratio, np.inf))
    return int(keep.sum()), stat, ratio, x, y


def bilip_lower_bound(m, cfg, op_name="bilip_lower_bound"):
    """Largest sampled two-point distortion max(r, 1/r) of ``m``.

    Deterministic given the config; monotone nondecreasing in n_pairs
    for a fixed seed (prefix property of the sample stream).
    """
    best = 1.0
    best_pair = None
    used = 0
    for x, y in _pair_chunks(m, cfg, op_name):
        count, stat, ratio, x, y = _two_point_stats(m, x, y)
        if count == 0:
            continue
        used += count
        k = int(np.argmax(stat))
        if stat[k] > best or best_pair is None:
            best = float(max(stat[k], 1.0))
            best_pair = (x[k].copy(), y[k].copy(), float(ratio[k]))
    if used == 0:
        raise InsufficientSamplesError("all sampled pairs were degenerate")
    return BilipEstimate(best, best_pair, used, cfg.seed)


def falsify_bilip_bound(m, lambda_claim, cfg, op_name="falsify_bilip_bound"):
    """Search for a pair violating the claimed constant by more than
    1e-6 relative. Returns the worst violating pair (x, y, ratio) or
    None; None is absence of refutation, not a proof.
    """
    if lambda_claim < 1.0:
        raise InvalidPointError("a bi-Lipschitz constant is >= 1")
    threshold = lambda_claim * (1.0 + 1e-6)
    worst = threshold
    witness = None
    for x, y in _pair_chunks(m, cfg, op_name):
        count, stat, ratio, x, y = _two_point_stats(m, x, y)
        if count == 0:
            continue
        k = int(np.argmax(stat))
        if stat[k] > worst:
            worst = float(stat[k])
            witness = (x[k].copy(), y[k].copy(), float(ratio[k]))
    return witness


def sphere_bilip_lower_bound(phi, seed, n_pairs):
    """Chordal-metric bi-Lipschitz lower bound for a sphere self-map.

    Mixes independent sphere pairs with tight same-sphere pairs, whose
    chordal ratios approach the differential stretch.
    """
    n = phi.dim
    n_even = n + (n % 2)
    rng = _op_rng(seed, "sphere_bilip_lower_bound")
    best = 1.0
    best_pair = None
    used = 0
    remaining = n_pairs
    while remaining > 0:
        count = min(_CHUNK, remaining)
        remaining -= count
        u = rng.random((count, 2 * n_even + 2))
        xu = _unit_rows(_normals(u[:, :n_even])[:, :n])
        dv = _unit_rows(_normals(u[:, n_even : 2 * n_even])[:, :n])
        sel, hraw = u[:, -2], u[:, -1]
        local = sel < 0.5
        h = 10.0 ** (-1.0 - 3.0 * hraw[local])  # offsets from 1e-1 to 1e-4
        yu = dv.copy()
        # tangential offsets; a near-parallel dv would collapse the pair
        # separation into rounding noise and inflate the lower bound
        perp = _unit_rows(dv[local] - np.sum(dv[local] * xu[local], axis=1)[:, None]
                          * xu[local])
        yu[local] = _unit_rows(xu[local] + h[:, None] * perp)
        d = np.linalg.norm(xu - yu, axis=1)
        keep = d >= _DEGENERATE_PAIR
        if not keep.any():
            continue
        xk, yk, dk = xu[keep], yu[keep], d[keep]
        df = np.linalg.norm(phi.apply(xk) - phi.apply(yk), axis=1)
        with np.errstate(divide="ignore"):
            ratio = df / dk
            stat = np.maximum(ratio, np.where(ratio > 0, 1.0 / ratio, np.inf))
        used += int(keep.sum())
        k = int(np.argmax(stat))
        if stat[k] > best or best_pair is None:
            best = float(max(stat[k], 1.0))
            best_pair = (xk[k].copy(), yk[k].copy(), float(ratio[k]))
    if used == 0:
        raise InsufficientSamplesError("all sampled sphere pairs were degenerate")
    return BilipEstimate(best, best_pair, used, seed)


# =====================================================================
# Quasi-isometry checks
# =====================================================================

@dataclass(frozen=True)
class QiParams:
    """(lambda, eps) quasi-isometry parameters, with the metric they
    refer to and an optional covering constant of the image."""

    lam: float
    eps: float
    metric: str = "euclidean"
    c_density: float | None = None

    def __post_init__(self):
        if self.lam < 1.0 or self.eps < 0.0:
            raise InvalidPointError("need lambda >= 1 and eps >= 0")
        if self.metric not in ("euclidean", "l1"):
            raise InvalidPointError(f"unknown metric {self.metric!r}")


def _product_blocks(m):
    """Column blocks of the flattened product structure of ``m``.

    The 'l1' metric sums Euclidean norms over these blocks, matching
    the product norm ||(x, y)||_1 = ||x|| + ||y|| used to compose
    quasi-isometry parameters; a non-product map is a single block.
    """
    blocks = []

    def walk(node, offset):
        if isinstance(node, M.ProductMap):
            walk(node.left, offset)
            walk(node.right, offset + node.left.dim)
        else:
            blocks.append((offset, offset + node.dim))

    walk(m, 0)
    return blocks


def _metric(blocks, metric):
    if metric == "euclidean":
        return lambda a, b: np.linalg.norm(a - b, axis=1)

    def l1(a, b):
        total = np.zeros(a.shape[0])
        for lo, hi in blocks:
            total += np.linalg.norm(a[:, lo:hi] - b[:, lo:hi], axis=1)
        return total

    return l1


@dataclass
class QiCheckResult:
    passed: bool
    worst_margin: float
    worst_pair: tuple | None
    n_pairs_used: int
    seed: int


def qi_embedding_check(m, lam, eps, metric, cfg, op_name="qi_embedding_check"):
    """Check (1/lam) d(x,y) - eps <= d(f x, f y) <= lam d(x,y) + eps on
    every sampled pair; fails on any violation beyond float slack.

    ``metric`` is 'euclidean' or 'l1'; 'l1' sums Euclidean block norms
    over the map's product structure.
    """
    if lam < 1.0 or eps < 0.0:
        raise InvalidPointError("need lambda >= 1 and eps >= 0")
    dist = _metric(_product_blocks(m), metric)
    worst = np.inf
    worst_pair = None
    used = 0
    for x, y in _pair_chunks(m, cfg, op_name):
        d = dist(x, y)
        keep = d >= _DEGENERATE_PAIR
        if not keep.any():
            continue
        x, y, d = x[keep], y[keep], d[keep]
        df = dist(m._eval(x), m._eval(y))
        up = (lam * d + eps) - df
        low = df - (d / lam - eps)
        margin = np.minimum(up, low)
        slack = _RELATIVE_SLACK * (d + df + eps)
        rel = margin / np.maximum(slack / _RELATIVE_SLACK, 1e-300)
        used += int(keep.sum())
        k = int(np.argmin(rel))
        if rel[k] < worst:
            worst = float(rel[k])
            worst_pair = (x[k].copy(), y[k].copy(), float(df[k] / d[k]))
    if used == 0:
        raise InsufficientSamplesError("all sampled pairs were degenerate")
    return QiCheckResult(worst >= -_RELATIVE_SLACK, worst, worst_pair, used, cfg.seed)


# =====================================================================
# Covering radius (C-density)
# =====================================================================

def _region_grid(region, step, stagger):
    lo, hi = region.bounds()
    offset = 0.5 * step if stagger else 0.0
    axes = [np.arange(lo[a] + offset, hi[a] + step / 2, step) for a in range(len(lo))]
    total = int(np.prod([len(ax) for ax in axes]))
    if total > 4_000_000:
        raise InvalidPointError(f"grid of {total} points is beyond desk scale")
    if total == 0:
        raise EmptyRegionError("grid step larger than the region")
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack(mesh, axis=-1).reshape(-1, len(lo))
    return pts[region.contains(pts)]


def c_density(m, region, grid_step):
    """Covering-radius estimate: the largest distance from a staggered
    grid point of the region to the image of a surrounding domain grid.

    Upper-bounds the covering gap of the sampled image up to the grid
    resolution. The domain grid is padded by the largest sampled
    displacement so images from outside the region can cover its edge.
    """
    if grid_step <= 0.0:
        raise InvalidPointError("grid_step must be positive")
    domain = _region_grid(region, grid_step, stagger=False)
    if domain.shape[0] == 0:
        raise EmptyRegionError("region contains no grid points")
    drift = np.linalg.norm(m._displacement(domain), axis=1).max()
    pad = float(drift + 2.0 * grid_step)
    lo, hi = region.bounds()
    padded = box(lo - pad, hi + pad)
    sources = _region_grid(padded, grid_step, stagger=False)
    targets = _region_grid(region, grid_step, stagger=True)
    images = m._eval(sources)
    tree = cKDTree(images)
    dist, _ = tree.query(targets, k=1)
    return float(dist.max())


# =====================================================================
# Drift reports and witness builders
# =====================================================================

VERDICT_BOUNDED = "bounded-below-threshold"
VERDICT_EXCEEDS = "exceeds-threshold-with-growth"


@dataclass
class DriftReport:
    """Displacement norms ||f(x_k) - x_k|| along a witness sequence.

    The verdict is 'exceeds-threshold-with-growth' only when the final
    drift passes the threshold and the last five entries are strictly
    increasing; unboundedness is never decided, only witnessed.
    """

    witnesses: np.ndarray
    drifts: np.ndarray
    threshold: float
    verdict: str = field(init=False)

    def __post_init__(self):
        drifts = self.drifts
        tail = drifts[-min(5, len(drifts)):]
        growing = bool(np.all(np.diff(tail) > 0)) if len(tail) > 1 else True
        exceeded = bool(drifts[-1] > self.threshold)
        self.verdict = VERDICT_EXCEEDS if (exceeded and growing) else VERDICT_BOUNDED


def drift_profile(m, witnesses, threshold):
    """Evaluate the displacement field along witness points.

    Displacements are computed by each node's scale-aware form, which
    is the exact rearrangement of f(x) - x (never a literal infinity
    test; unboundedness is evidenced by growth past the threshold).
    """
    pts = as_points(witnesses, dim=m.dim)
    if pts.shape[0] == 0:
        raise InvalidPointError("need at least one witness point")
    drifts = np.linalg.norm(m._displacement(pts), axis=1)
    return DriftReport(pts, drifts, float(threshold))


def replication_drift_witnesses(g, x0, count):
    """Witness points 4^k e1 + 2^k x0, k = 1..count, for the disk
    replication of ``g``; requires g to move x0."""
    x0 = as_vector(x0, dim=g.dim)
    if np.linalg.norm(x0) >= 1.0:
        raise InvalidPointError("x0 must lie in the open unit ball")
    moved = np.linalg.norm(M.disk_apply(g, x0) - x0)
    if moved == 0.0:
        raise TrivialWitnessError("g fixes x0; drift witnesses need g(x0) != x0")
    ks = np.arange(1, count + 1)
    pts = (2.0 ** ks)[:, None] * x0[None, :]
    pts[:, 0] += 4.0 ** ks
    return pts


def rotation_angle_and_plane(a):
    """Largest rotation angle of an orthogonal matrix and a unit vector
    in the corresponding invariant plane."""
    vals, vecs = np.linalg.eig(a)
    angles = np.abs(np.angle(vals))
    k = int(np.argmax(angles))
    u = np.real(vecs[:, k])
    nrm = np.linalg.norm(u)
    if nrm < 1e-12:  # purely imaginary eigenvector: use the imaginary part
        u = np.imag(vecs[:, k])
        nrm = np.linalg.norm(u)
    return float(angles[k]), u / nrm


def spiral_drift_witnesses(p, count):
    """Witness points of norm 2^k for a spiral whose far field rotates.

    Constant profiles give every k with the invariant-plane direction
    of the limit rotation; log-spirals keep only the k whose rotation
    angle at radius 2^k stays in [pi/2, 3pi/2] so drifts grow
    monotonically; compactly supported profiles have no witnesses.
    """
    kind, data = p.far_field()
    if kind == "identity":
        raise NoWitnessError("profile is the identity far out (kernel element)")
    if kind == "rotation":
        theta, u = rotation_angle_and_plane(data)
        if theta < 1e-6:
            raise NoWitnessError("far-field rotation indistinguishable from identity")
        ks = np.arange(1, count + 1)
        return (2.0 ** ks)[:, None] * u[None, :]
    # oscillating plane angle c*ln r: keep radii whose angle is far from 0 mod 2pi
    c = data
    ks = np.arange(1, count + 1)
    ang = np.mod(c * ks * np.log(2.0), 2.0 * np.pi)
    keep = (ang >= np.pi / 2) & (ang <= 3 * np.pi / 2)
    if not keep.any():
        raise NoWitnessError("no radius 2^k with rotation angle bounded away from 0")
    u = np.zeros(p.dim)
    u[p.plane[0]] = 1.0
    return (2.0 ** ks[keep])[:, None] * u[None, :]


# =====================================================================
# Graph-based length metrics on point clouds
# =====================================================================

def neighbor_graph(cloud, eps):
    """Symmetric eps-neighborhood graph with Euclidean edge weights.

    Raises if the graph is disconnected.
    """
    pts = as_points(cloud)
    tree = cKDTree(pts)
    pairs = tree.query_pairs(r=eps, output_type="ndarray")
    if pairs.shape[0] == 0:
        raise DisconnectedCloudError("eps too small: no edges at all")
    w = np.linalg.norm(pts[pairs[:, 0]] - pts[pairs[:, 1]], axis=1)
    n = pts.shape[0]
    g = coo_matrix(
        (np.concatenate([w, w]),
         (np.concatenate([pairs[:, 0], pairs[:, 1]]),
          np.concatenate([pairs[:, 1], pairs[:, 0]]))),
        shape=(n, n),
    ).tocsr()
    n_comp, _ = connected_components(g, directed=False)
    if n_comp != 1:
        raise DisconnectedCloudError(
            f"eps-graph splits into {n_comp} components; increase eps"
        )
    return g


def geodesic_estimate(cloud, eps, i, j, graph=None):
    """Shortest-path length between cloud points i and j in the
    eps-neighborhood graph; always >= the chordal distance and
    converges to the length metric as the cloud densifies."""
    pts = as_points(cloud)
    g = neighbor_graph(pts, eps) if graph is None else graph
    dist = dijkstra(g, directed=False, indices=[i])
    d = float(dist[0, j])
    if not np.isfinite(d):
        raise DisconnectedCloudError(f"no path between {i} and {j}")
    return d


def metric_equivalence_ratio(cloud, eps, n_pairs, seed):
    """Max over sampled pairs of (graph length / chord): a sampled
    lower bound for the constant making the intrinsic and ambient
    metrics bi-Lipschitz equivalent."""
    pts = as_points(cloud)
    g = neighbor_graph(pts, eps)
    rng = _op_rng(seed, "metric_equivalence_ratio")
    n = pts.shape[0]
    n_sources = int(min(max(int(np.ceil(np.sqrt(n_pairs))), 1), 128))
    per_source = max(n_pairs // n_sources, 1)
    sources = rng.integers(0, n, size=n_sources)
    targets = rng.integers(0, n, size=(n_sources, per_source))
    dist = dijkstra(g, directed=False, indices=sources)
    best = 1.0
    for row, src in enumerate(sources):
        tgt = targets[row]
        tgt = tgt[tgt != src]
        chord = np.linalg.norm(pts[tgt] - pts[src], axis=1)
        keep = chord >= _DEGENERATE_PAIR
        if not keep.any():
            continue
        ratio = dist[row, tgt[keep]] / chord[keep]
        best = max(best, float(ratio.max()))
    return best


# =====================================================================
# Example hypersurface clouds
# =====================================================================

def circle_cloud(n_points, radius=1.0):
    t = 2.0 * np.pi * np.arange(n_points) / n_points
    return np.stack([radius * np.cos(t), radius * np.sin(t)], axis=1)


def ellipse_cloud(a, b, n_points):
    t = 2.0 * np.pi * np.arange(n_points) / n_points
    return np.stack([a * np.cos(t), b * np.sin(t)], axis=1)


def sphere_cloud(n_points):
    """Deterministic, nearly uniform cloud on S^2 (Fibonacci lattice)."""
    k = np.arange(n_points)
    golden = (1.0 + np.sqrt(5.0)) / 2.0
    z = 1.0 - (2.0 * k + 1.0) / n_points
    r = np.sqrt(np.maximum(1.0 - z * z, 0.0))
    t = 2.0 * np.pi * k / golden
    return np.stack([r * np.cos(t), r * np.sin(t), z], axis=1)


def save_cloud_csv(cloud, path):
    np.savetxt(path, np.asarray(cloud), delimiter=",", fmt="%.17g")


def load_cloud_csv(path):
    pts = np.loadtxt(path, delimiter=",", ndmin=2)
    return as_points(pts)
