"""A closed algebra of exactly evaluable self-maps of R^n.

Map expressions are immutable trees. Every node evaluates pointwise on
(N, n) row arrays with no state, so evaluation is pure and can run from
many threads at once. Each constructor records the bi-Lipschitz
constant its construction rule promises (when one is known) as
``lambda_claimed``; estimators treat those claims as hypotheses to
falsify, never as trusted facts.

Besides the plain image ``f(x)``, nodes expose the displacement field
``f(x) - x`` computed at the construction's own scale. For maps that
act on translated and dilated disks the naive difference of absolute
coordinates loses all precision once the disk center dwarfs the disk
radius; the displacement form is the same quantity rearranged exactly,
and drift measurements rely on it.
"""

import numpy as np

from . import pl as plmod
from .core import (
    SPHERE_TOL,
    as_matrix,
    as_points,
    as_vector,
    check_plane,
    largest_singular_values,
    orthogonality_defect,
    rotation_matrix,
)
from .errors import (
    DimensionMismatchError,
    InvalidPointError,
    MonotonicityError,
    NotInvertibleError,
    OffSphereError,
    SupportViolationError,
)
from .profiles import CubicProfile, twist_angle_profile

_MAX_TRANSLATED_MAPS = 10 ** 6


def unit_axis(dim, axis=0):
    e = np.zeros(dim)
    e[axis] = 1.0
    return e


def _rotate_columns(out, i, j, cos_a, sin_a):
    """Rotate coordinate columns (i, j) in place by per-row angles."""
    xi = out[:, i].copy()
    xj = out[:, j].copy()
    out[:, i] = cos_a * xi - sin_a * xj
    out[:, j] = sin_a * xi + cos_a * xj


# =====================================================================
# Sphere self-maps
# =====================================================================

class SphereMap:
    """Bi-Lipschitz self-map of the unit sphere S^{n-1} in R^n.

    ``apply`` takes rows that are already unit vectors and returns unit
    rows; outputs are renormalized, and an output drifting farther than
    1e-9 from the sphere is an error rather than silently rescaled
    garbage. ``lambda_claimed`` is a declared chordal-metric
    bi-Lipschitz constant recorded for falsification testing.
    """

    dim = None
    lambda_claimed = None

    def apply(self, units):
        raise NotImplementedError

    def inverse(self):
        raise NotImplementedError

    @staticmethod
    def _renormalize(out):
        norms = np.linalg.norm(out, axis=1)
        if np.any(np.abs(norms - 1.0) > SPHERE_TOL):
            worst = float(np.abs(norms - 1.0).max())
            raise OffSphereError(f"sphere map output drifted {worst:.3e} off the sphere")
        return out / norms[:, None]


class OrthogonalSphereMap(SphereMap):
    """Restriction of an orthogonal linear map; an isometry of the sphere."""

    def __init__(self, matrix):
        m = as_matrix(matrix)
        if orthogonality_defect(m) > 1e-9:
            raise OffSphereError("matrix is not orthogonal to 1e-9")
        self.matrix = m
        self.dim = m.shape[0]
        self.lambda_claimed = 1.0

    def apply(self, units):
        return self._renormalize(units @ self.matrix.T)

    def inverse(self):
        return OrthogonalSphereMap(self.matrix.T)


class LatitudeSphereMap(SphereMap):
    """Polar-angle reparametrization a -> a + beta*sin(a) about an axis.

    Fixes both poles, slides latitude circles toward one pole. The
    derivative 1 + beta*cos(a) stays in [1-|beta|, 1+|beta|], so the
    angle map is strictly monotone for |beta| <= 0.9, and the claimed
    constant max(1+|beta|, 1/(1-|beta|)) (valid for the chordal metric
    as well, since chordal ratios never exceed geodesic ones) is
    recorded for falsification testing.
    """

    def __init__(self, beta, axis):
        if not np.isfinite(beta) or abs(beta) > 0.9:
            raise MonotonicityError(
                f"|beta| must be <= 0.9 to keep the angle map monotone, got {beta}"
            )
        ax = as_vector(axis)
        nrm = np.linalg.norm(ax)
        if nrm == 0.0:
            raise InvalidPointError("axis must be nonzero")
        self.beta = float(beta)
        self.axis = ax / nrm
        self.dim = ax.shape[0]
        b = abs(self.beta)
        self.lambda_claimed = max(1.0 + b, 1.0 / (1.0 - b)) if b > 0 else 1.0

    def _angle_map(self, alpha):
        return alpha + self.beta * np.sin(alpha)

    def _angle_map_inverse(self, target):
        # Newton on a + beta*sin(a) - t; derivative >= 1 - 0.9 = 0.1.
        a = target.copy()
        for _ in range(80):
            fval = a + self.beta * np.sin(a) - target
            a = a - fval / (1.0 + self.beta * np.cos(a))
            if np.max(np.abs(fval)) < 1e-15:
                break
        return np.clip(a, 0.0, np.pi)

    def _remap(self, units, angle_fn):
        c = np.clip(units @ self.axis, -1.0, 1.0)
        tang = units - c[:, None] * self.axis[None, :]
        s = np.linalg.norm(tang, axis=1)
        # arctan2 keeps the polar angle well conditioned near the poles,
        # where arccos would amplify rounding by 1/sin(alpha)
        alpha = np.arctan2(s, c)
        polar = s < 1e-12  # at the poles the map is the identity
        safe = np.where(polar, 1.0, s)
        u = tang / safe[:, None]
        h = angle_fn(alpha)
        out = np.cos(h)[:, None] * self.axis[None, :] + np.sin(h)[:, None] * u
        out[polar] = units[polar]
        return self._renormalize(out)

    def apply(self, units):
        return self._remap(units, self._angle_map)

    def inverse(self):
        return _InverseLatitudeSphereMap(self)


class _InverseLatitudeSphereMap(SphereMap):
    def __init__(self, fwd):
        self.forward = fwd
        self.dim = fwd.dim
        self.lambda_claimed = fwd.lambda_claimed

    def apply(self, units):
        return self.forward._remap(units, self.forward._angle_map_inverse)

    def inverse(self):
        return self.forward


class ConjugatedSphereMap(SphereMap):
    """R o inner o R^{-1} for an orthogonal R; same constant as inner."""

    def __init__(self, rotation, inner):
        r = as_matrix(rotation, dim=inner.dim)
        if orthogonality_defect(r) > 1e-9:
            raise OffSphereError("conjugating matrix is not orthogonal to 1e-9")
        self.rotation = r
        self.inner = inner
        self.dim = inner.dim
        self.lambda_claimed = inner.lambda_claimed

    def apply(self, units):
        pulled = self._renormalize(units @ self.rotation)  # R^T x as rows
        return self._renormalize(self.inner.apply(pulled) @ self.rotation.T)

    def inverse(self):
        return ConjugatedSphereMap(self.rotation, self.inner.inverse())


class ComposedSphereMap(SphereMap):
    """Composition maps[0] o maps[1] o ... applied right to left."""

    def __init__(self, maps):
        maps = list(maps)
        if not maps:
            raise InvalidPointError("need at least one sphere map")
        dims = {m.dim for m in maps}
        if len(dims) != 1:
            raise DimensionMismatchError(f"mixed sphere map dimensions {dims}")
        self.maps = maps
        self.dim = maps[0].dim
        claims = [m.lambda_claimed for m in maps]
        self.lambda_claimed = (
            float(np.prod(claims)) if all(c is not None for c in claims) else None
        )

    def apply(self, units):
        out = units
        for m in reversed(self.maps):
            out = m.apply(out)
        return out

    def inverse(self):
        return ComposedSphereMap([m.inverse() for m in reversed(self.maps)])


def make_latitude_sphere_map(beta, axis=None, dim=None):
    """Latitude sphere map about ``axis`` (default: the last coordinate
    axis of R^dim)."""
    if axis is None:
        if dim is None:
            raise InvalidPointError("need an axis or a dimension")
        axis = unit_axis(dim, dim - 1)
    return LatitudeSphereMap(beta, axis)


def compose_sphere_maps(*maps):
    return ComposedSphereMap(maps)


def sphere_apply(phi, x):
    """Apply a sphere map to a single point, validating it is on the
    sphere to 1e-9 (renormalized internally)."""
    xv = as_vector(x, dim=phi.dim)
    nrm = np.linalg.norm(xv)
    if abs(nrm - 1.0) > SPHERE_TOL:
        raise OffSphereError(f"input norm {nrm!r} is not within 1e-9 of 1")
    return phi.apply((xv / nrm)[None, :])[0]


# =====================================================================
# Disk self-maps (identity outside the open unit ball)
# =====================================================================

class DiskMap:
    """Bijection of the closed unit disk fixing its boundary pointwise,
    extended by the identity to all of R^n. Rows with ||x|| >= 1 pass
    through bit-exactly."""

    dim = None
    lambda_claimed = None

    def apply(self, pts):
        raise NotImplementedError

    def inverse(self):
        raise NotImplementedError


class TwistDiskMap(DiskMap):
    """Rotation by a radius-dependent angle in one coordinate plane.

    The angle profile must vanish from radius 1 outward; the claimed
    bi-Lipschitz constant 2*(1 + sup_r |r * theta'(r)|) doubles the
    differential-bound estimate and is meant to be falsification
    tested, not assumed.
    """

    def __init__(self, profile, plane, dim):
        if not isinstance(profile, CubicProfile):
            raise InvalidPointError("twist profile must be a CubicProfile")
        if profile.support_end > 1.0 or profile.values[-1] != 0.0:
            raise SupportViolationError(
                "twist angle must vanish at radius 1 (theta(1) = 0)"
            )
        self.profile = profile
        self.plane = check_plane(plane, dim)
        self.dim = dim
        self.lambda_claimed = 2.0 * (1.0 + profile.weighted_derivative_sup())

    def apply(self, pts):
        r = np.linalg.norm(pts, axis=1)
        ang = self.profile(r)
        out = pts.copy()
        active = ang != 0.0
        if active.any():
            i, j = self.plane
            sub = out[active]
            _rotate_columns(sub, i, j, np.cos(ang[active]), np.sin(ang[active]))
            out[active] = sub
        return out

    def inverse(self):
        neg = CubicProfile(self.profile.knots, -self.profile.coeffs,
                           -self.profile.values)
        return TwistDiskMap(neg, self.plane, self.dim)


class PLDiskMap(DiskMap):
    """A boundary-fixed PLMap conjugated by a similarity into the unit
    ball (the box lands inside radius 0.95). Conjugation by a
    similarity preserves the bi-Lipschitz constant, so the claim is the
    exact PL constant of the underlying map."""

    _FIT_RADIUS = 0.95

    def __init__(self, plmap, _inverse=False):
        if not plmap.boundary_fixed:
            raise SupportViolationError("disk embedding needs a boundary-fixed PLMap")
        tri = plmap.triangulation
        self.plmap = plmap
        self.dim = tri.dim
        half = 0.5 * (tri.hi - tri.lo)
        self.center = 0.5 * (tri.hi + tri.lo)
        self.scale = self._FIT_RADIUS / (np.sqrt(tri.dim) * half)
        self._inverse = bool(_inverse)
        self.lambda_claimed = plmod.pl_bilip_constant(plmap)

    def apply(self, pts):
        tri = self.plmap.triangulation
        u = pts / self.scale + self.center
        tol = 0.0  # strict: anything outside the box passes through exactly
        inside = ((u > tri.lo + tol) & (u < tri.hi - tol)).all(axis=1)
        out = pts.copy()
        if inside.any():
            fn = plmod.pl_eval_inverse if self._inverse else plmod.pl_eval
            fu = fn(self.plmap, u[inside])
            out[inside] = (fu - self.center) * self.scale
        return out

    def inverse(self):
        return PLDiskMap(self.plmap, _inverse=not self._inverse)


class ComposedDiskMap(DiskMap):
    def __init__(self, maps):
        maps = list(maps)
        if not maps:
            raise InvalidPointError("need at least one disk map")
        dims = {m.dim for m in maps}
        if len(dims) != 1:
            raise DimensionMismatchError(f"mixed disk map dimensions {dims}")
        self.maps = maps
        self.dim = maps[0].dim
        claims = [m.lambda_claimed for m in maps]
        self.lambda_claimed = (
            float(np.prod(claims)) if all(c is not None for c in claims) else None
        )

    def apply(self, pts):
        out = pts
        for m in reversed(self.maps):
            out = m.apply(out)
        return out

    def inverse(self):
        return ComposedDiskMap([m.inverse() for m in reversed(self.maps)])


def make_twist_disk_map(theta=None, plane=(0, 1), dim=2, amplitude=0.8):
    """Builtin nontrivial disk map: rotate by ``theta(r)`` in a plane.

    Without an explicit profile, a default C^1 profile with the given
    center amplitude is used.
    """
    if theta is None:
        theta = twist_angle_profile(amplitude)
    return TwistDiskMap(theta, plane, dim)


def pl_disk_map(plmap):
    """Scale a boundary-fixed PLMap into the unit ball as a DiskMap."""
    return PLDiskMap(plmap)


def compose_disk_maps(*maps):
    return ComposedDiskMap(maps)


def disk_apply(g, x):
    """Apply a disk map to a single point."""
    return g.apply(as_points(as_vector(x, dim=g.dim)))[0]


# =====================================================================
# Rotation-valued radial profiles t -> SO(n)
# =====================================================================

class SpiralProfile:
    """C^1 curve of rotations with a certified derivative bound:
    every matrix entry satisfies |f'_ij(t)| <= c_bound / t for t > 0."""

    dim = None
    c_bound = None

    def rotate(self, radii, pts):
        raise NotImplementedError

    def rotate_inverse(self, radii, pts):
        raise NotImplementedError

    def matrix(self, t):
        """The rotation at a single parameter value, for diagnostics."""
        raise NotImplementedError

    def far_field(self):
        """('identity' | 'rotation' | 'oscillating', data) describing the
        behaviour of f(t) for large t; used by drift-witness search."""
        raise NotImplementedError


class ConstantRotationProfile(SpiralProfile):
    """f(t) = A for a fixed A in SO(n); the induced map is linear."""

    def __init__(self, matrix):
        m = as_matrix(matrix)
        if orthogonality_defect(m) > 1e-12:
            raise OffSphereError("rotation matrix is not orthogonal to 1e-12")
        if abs(np.linalg.det(m) - 1.0) > 1e-12:
            raise OffSphereError("matrix must have determinant 1")
        self.matrix_value = m
        self.dim = m.shape[0]
        self.c_bound = 0.0

    def rotate(self, radii, pts):
        return pts @ self.matrix_value.T

    def rotate_inverse(self, radii, pts):
        return pts @ self.matrix_value

    def matrix(self, t):
        return self.matrix_value

    def far_field(self):
        return ("rotation", self.matrix_value)

    def inverse(self):
        return ConstantRotationProfile(self.matrix_value.T)


class _PlaneAngleProfile(SpiralProfile):
    """Shared plumbing for profiles that rotate a single coordinate
    plane by a radius-dependent angle."""

    def angle(self, radii):
        raise NotImplementedError

    def rotate(self, radii, pts):
        ang = self.angle(radii)
        out = pts.copy()
        i, j = self.plane
        _rotate_columns(out, i, j, np.cos(ang), np.sin(ang))
        return out

    def rotate_inverse(self, radii, pts):
        ang = -self.angle(radii)
        out = pts.copy()
        i, j = self.plane
        _rotate_columns(out, i, j, np.cos(ang), np.sin(ang))
        return out

    def matrix(self, t):
        return rotation_matrix(self.plane, float(self.angle(np.asarray([t]))[0]),
                               self.dim)


class LogSpiralProfile(_PlaneAngleProfile):
    """f(t) = plane rotation by c*ln(t); |d/dt cos(c ln t)| <= |c|/t,
    so c_bound = |c| exactly."""

    def __init__(self, c, plane, dim):
        if not np.isfinite(c):
            raise InvalidPointError("spiral rate must be finite")
        self.c = float(c)
        self.plane = check_plane(plane, dim)
        self.dim = dim
        self.c_bound = abs(self.c)

    def angle(self, radii):
        return self.c * np.log(radii)

    def far_field(self):
        return ("oscillating", self.c)

    def inverse(self):
        return LogSpiralProfile(-self.c, self.plane, self.dim)


class CutoffRotationProfile(_PlaneAngleProfile):
    """Plane rotation by a compactly supported C^1 angle; the identity
    from the end of the support outward, hence quasi-isometrically
    trivial. c_bound = sup |t * theta'(t)| from closed-form extrema."""

    def __init__(self, theta, plane, dim):
        if not isinstance(theta, CubicProfile):
            raise InvalidPointError("cutoff angle must be a CubicProfile")
        if theta.values[-1] != 0.0:
            raise SupportViolationError("cutoff angle must vanish at its support end")
        self.theta = theta
        self.plane = check_plane(plane, dim)
        self.dim = dim
        self.c_bound = theta.weighted_derivative_sup()

    def angle(self, radii):
        return self.theta(radii)

    def far_field(self):
        return ("identity", float(self.theta.support_end))

    def inverse(self):
        neg = CubicProfile(self.theta.knots, -self.theta.coeffs, -self.theta.values)
        return CutoffRotationProfile(neg, self.plane, self.dim)


def profile_derivative_check(profile, n_grid=60, fd_step=1e-6):
    """Measured sup over a log grid t in [1e-3, 1e6] of
    t * max_ij |finite-difference f'_ij(t)|.

    For a valid profile this never exceeds c_bound by more than
    rounding; used by the certification tests.
    """
    ts = np.logspace(-3.0, 6.0, n_grid)
    worst = 0.0
    for t in ts:
        h = fd_step * t
        fd = (profile.matrix(t + h) - profile.matrix(t - h)) / (2.0 * h)
        worst = max(worst, t * float(np.abs(fd).max()))
    return worst


# =====================================================================
# Map expressions
# =====================================================================

class MapExpr:
    """Node of an exactly evaluable self-map of R^n.

    Subclasses implement ``_eval``, ``_eval_inverse`` and
    ``_displacement`` on (N, n) arrays; the public functions below
    validate inputs once and dispatch.
    """

    dim = None
    lambda_claimed = None

    def _eval(self, pts):
        raise NotImplementedError

    def _eval_inverse(self, pts):
        raise NotImplementedError(f"{type(self).__name__} has no inverse")

    def _displacement(self, pts):
        return self._eval(pts) - pts

    def __call__(self, pts):
        return evaluate_points(self, pts)


class IdentityMap(MapExpr):
    def __init__(self, dim):
        if dim < 1:
            raise InvalidPointError("dimension must be >= 1")
        self.dim = int(dim)
        self.lambda_claimed = 1.0

    def _eval(self, pts):
        return pts.copy()

    def _eval_inverse(self, pts):
        return pts.copy()

    def _displacement(self, pts):
        return np.zeros_like(pts)


class AffineMap(MapExpr):
    """x -> M x + b."""

    def __init__(self, matrix, offset=None):
        m = as_matrix(matrix)
        self.matrix = m
        self.dim = m.shape[0]
        self.offset = (
            np.zeros(self.dim) if offset is None else as_vector(offset, dim=self.dim)
        )
        self.lambda_claimed = None
        if abs(np.linalg.det(m)) > 0.0:
            try:
                inv = np.linalg.inv(m)
                self.lambda_claimed = float(
                    max(largest_singular_values(np.stack([m, inv])))
                )
            except np.linalg.LinAlgError:
                pass

    def _eval(self, pts):
        return pts @ self.matrix.T + self.offset

    def _eval_inverse(self, pts):
        try:
            return np.linalg.solve(self.matrix, (pts - self.offset).T).T
        except np.linalg.LinAlgError as exc:
            raise NotInvertibleError("affine map is singular") from exc

    def _displacement(self, pts):
        return pts @ (self.matrix - np.eye(self.dim)).T + self.offset


class RadialExtensionMap(MapExpr):
    """Extension of a sphere map by v -> ||v|| * phi(v / ||v||), 0 -> 0.

    Norm preserving by construction. When the sphere map carries a
    claimed constant lambda, the extension claims 1 + lambda.
    """

    def __init__(self, sphere_map):
        self.sphere_map = sphere_map
        self.dim = sphere_map.dim
        lam = sphere_map.lambda_claimed
        self.lambda_claimed = (1.0 + lam) if lam is not None else None

    def _radial(self, pts, phi_apply):
        r = np.linalg.norm(pts, axis=1)
        nz = r > 0.0
        out = pts.copy()
        if nz.any():
            u = pts[nz] / r[nz, None]
            out[nz] = r[nz, None] * phi_apply(u)
        return out

    def _eval(self, pts):
        return self._radial(pts, self.sphere_map.apply)

    def _eval_inverse(self, pts):
        return self._radial(pts, self.sphere_map.inverse().apply)

    def _displacement(self, pts):
        # ||v|| (phi(u) - u): same value as f(v) - v, computed at unit scale.
        r = np.linalg.norm(pts, axis=1)
        nz = r > 0.0
        out = np.zeros_like(pts)
        if nz.any():
            u = pts[nz] / r[nz, None]
            out[nz] = r[nz, None] * (self.sphere_map.apply(u) - u)
        return out


class DiskReplicationMap(MapExpr):
    """Replicates one disk map on the disjoint disks C_j = D(4^j e1, 2^j).

    Evaluation is lazy and exact: a point is matched to its disk (if
    any) in O(1) candidate checks and transported by the similarity
    that carries the unit disk onto that disk; everything outside the
    disks passes through bit-exactly. The claimed constant equals the
    disk map's own claim.
    """

    def __init__(self, disk_map):
        self.disk_map = disk_map
        self.dim = disk_map.dim
        self.lambda_claimed = disk_map.lambda_claimed

    def _transport(self, pts, apply_fn):
        j = locate_replication_disks(pts)
        out = pts.copy()
        for jj in np.unique(j[j >= 0]):
            rows = j == jj
            center, scale = replication_disk(int(jj), self.dim)
            local = (pts[rows] - center) / scale
            out[rows] = center + scale * apply_fn(local)
        return out

    def _eval(self, pts):
        return self._transport(pts, self.disk_map.apply)

    def _eval_inverse(self, pts):
        return self._transport(pts, self.disk_map.inverse().apply)

    def _displacement(self, pts):
        j = locate_replication_disks(pts)
        out = np.zeros_like(pts)
        for jj in np.unique(j[j >= 0]):
            rows = j == jj
            center, scale = replication_disk(int(jj), self.dim)
            local = (pts[rows] - center) / scale
            out[rows] = scale * (self.disk_map.apply(local) - local)
        return out


class TranslatedReplicationMap(MapExpr):
    """Applies disk maps on the unit disks centered at 0, 2e1, 4e1, ...

    Either a finite list of disk maps (entry j acts on the disk at
    2j*e1; None entries mean the identity) or a single uniform map
    acting on every disk of the family.
    """

    def __init__(self, disk_maps=None, uniform=None):
        if (disk_maps is None) == (uniform is None):
            raise InvalidPointError("pass exactly one of disk_maps or uniform")
        if uniform is not None:
            self.uniform = uniform
            self.disk_maps = None
            self.dim = uniform.dim
            self.lambda_claimed = uniform.lambda_claimed
        else:
            gs = list(disk_maps)
            if len(gs) > _MAX_TRANSLATED_MAPS:
                raise InvalidPointError(
                    f"at most {_MAX_TRANSLATED_MAPS} maps; use uniform= for more"
                )
            dims = {g.dim for g in gs if g is not None}
            if len(dims) != 1:
                raise DimensionMismatchError("need at least one map, equal dims")
            self.uniform = None
            self.disk_maps = gs
            self.dim = dims.pop()
            claims = [g.lambda_claimed for g in gs if g is not None]
            self.lambda_claimed = (
                float(max(claims)) if claims and all(c is not None for c in claims)
                else None
            )

    def _map_for(self, j):
        if self.uniform is not None:
            return self.uniform
        if 0 <= j < len(self.disk_maps):
            return self.disk_maps[j]
        return None

    def _locate(self, pts):
        x1 = pts[:, 0]
        rest_sq = np.sum(pts[:, 1:] ** 2, axis=1)
        jest = np.rint(x1 / 2.0).astype(np.int64)
        found = np.full(pts.shape[0], -1, dtype=np.int64)
        for dj in (-1, 0, 1):
            cand = jest + dj
            open_rows = (found < 0) & (cand >= 0)
            if self.uniform is None:
                open_rows &= cand < len(self.disk_maps)
            if not open_rows.any():
                continue
            c = 2.0 * cand[open_rows]
            d2 = (x1[open_rows] - c) ** 2 + rest_sq[open_rows]
            hit = d2 <= 1.0
            idx = np.flatnonzero(open_rows)[hit]
            found[idx] = cand[open_rows][hit]
        return found

    def _transport(self, pts, inverse=False):
        j = self._locate(pts)
        out = pts.copy()
        for jj in np.unique(j[j >= 0]):
            g = self._map_for(int(jj))
            if g is None:
                continue
            if inverse:
                g = g.inverse()
            rows = j == jj
            center = np.zeros(self.dim)
            center[0] = 2.0 * jj
            local = pts[rows] - center
            out[rows] = center + g.apply(local)
        return out

    def _eval(self, pts):
        return self._transport(pts, inverse=False)

    def _eval_inverse(self, pts):
        return self._transport(pts, inverse=True)

    def _displacement(self, pts):
        j = self._locate(pts)
        out = np.zeros_like(pts)
        for jj in np.unique(j[j >= 0]):
            g = self._map_for(int(jj))
            if g is None:
                continue
            rows = j == jj
            center = np.zeros(self.dim)
            center[0] = 2.0 * jj
            local = pts[rows] - center
            out[rows] = g.apply(local) - local
        return out


class ProductMap(MapExpr):
    """(x, y) -> (f(x), g(y)) on R^{k+l}."""

    def __init__(self, left, right):
        self.left = left
        self.right = right
        self.dim = left.dim + right.dim
        lams = (left.lambda_claimed, right.lambda_claimed)
        self.lambda_claimed = float(max(lams)) if None not in lams else None

    def _split(self, pts):
        k = self.left.dim
        return pts[:, :k], pts[:, k:]

    def _eval(self, pts):
        x, y = self._split(pts)
        return np.hstack([self.left._eval(x), self.right._eval(y)])

    def _eval_inverse(self, pts):
        x, y = self._split(pts)
        return np.hstack([self.left._eval_inverse(x), self.right._eval_inverse(y)])

    def _displacement(self, pts):
        x, y = self._split(pts)
        return np.hstack([self.left._displacement(x), self.right._displacement(y)])


class SpiralMap(MapExpr):
    """x -> f(||x||) x for a rotation-valued profile f; 0 -> 0.

    Maps every sphere about the origin to itself. The claimed constant
    is n * c_bound + 1.
    """

    def __init__(self, profile):
        self.profile = profile
        self.dim = profile.dim
        self.lambda_claimed = profile.dim * profile.c_bound + 1.0

    def _spun(self, pts, rotate_fn):
        r = np.linalg.norm(pts, axis=1)
        nz = r > 0.0
        out = pts.copy()
        if nz.any():
            out[nz] = rotate_fn(r[nz], pts[nz])
        return out

    def _eval(self, pts):
        return self._spun(pts, self.profile.rotate)

    def _eval_inverse(self, pts):
        # (phi_f)^{-1} = phi_g with g(t) = f(t)^{-1}
        return self._spun(pts, self.profile.rotate_inverse)


class PLHomeomorphismMap(MapExpr):
    """A boundary-fixed PLMap as a self-map of R^n (identity outside)."""

    def __init__(self, plmap):
        if not plmap.boundary_fixed:
            raise SupportViolationError(
                "a PL node must be boundary-fixed to act on all of R^n"
            )
        self.plmap = plmap
        self.dim = plmap.dim
        self.lambda_claimed = plmod.pl_bilip_constant(plmap)

    def _eval(self, pts):
        return plmod.pl_eval(self.plmap, pts)

    def _eval_inverse(self, pts):
        return plmod.pl_eval_inverse(self.plmap, pts)


class CompositionMap(MapExpr):
    """maps[0] o maps[1] o ... (rightmost applied first)."""

    def __init__(self, maps):
        maps = list(maps)
        if not maps:
            raise InvalidPointError("need at least one map")
        dims = {m.dim for m in maps}
        if len(dims) != 1:
            raise DimensionMismatchError(f"mixed dimensions {dims}")
        self.maps = maps
        self.dim = maps[0].dim
        claims = [m.lambda_claimed for m in maps]
        self.lambda_claimed = (
            float(np.prod(claims)) if all(c is not None for c in claims) else None
        )

    def _eval(self, pts):
        out = pts
        for m in reversed(self.maps):
            out = m._eval(out)
        return out

    def _eval_inverse(self, pts):
        out = pts
        for m in self.maps:
            out = m._eval_inverse(out)
        return out

    def _displacement(self, pts):
        # (f o g)(x) - x = disp_f(g(x)) + disp_g(x), folded right to left
        total = np.zeros_like(pts)
        cur = pts
        for m in reversed(self.maps):
            total = total + m._displacement(cur)
            cur = m._eval(cur)
        return total


class InverseMap(MapExpr):
    def __init__(self, inner):
        self.inner = inner
        self.dim = inner.dim
        self.lambda_claimed = inner.lambda_claimed  # symmetric in the definition

    def _eval(self, pts):
        return self.inner._eval_inverse(pts)

    def _eval_inverse(self, pts):
        return self.inner._eval(pts)


# =====================================================================
# Replication disk geometry
# =====================================================================

def replication_disk(j, dim):
    """Center and radius of the j-th replication disk: D(4^j e1, 2^j)
    for j >= 1 and the unit disk for j = 0."""
    center = np.zeros(dim)
    if j > 0:
        center[0] = 4.0 ** j
    scale = 2.0 ** j if j > 0 else 1.0
    return center, scale


def locate_replication_disks(pts):
    """Disk index for each row of ``pts``: the unique j with
    ||v - 4^j e1|| <= 2^j (j=0 means the unit disk), or -1.

    The radius of any point inside disk j is within a factor 2^-j of
    4^j, so rounding log4 of the norm and checking the three nearest
    candidates covers every case; candidates are tried smallest first.
    """
    x1 = pts[:, 0]
    rest_sq = np.sum(pts[:, 1:] ** 2, axis=1)
    r = np.linalg.norm(pts, axis=1)
    jest = np.rint(np.log(np.maximum(r, 1.0)) / np.log(4.0)).astype(np.int64)
    found = np.full(pts.shape[0], -1, dtype=np.int64)
    for dj in (-1, 0, 1):
        cand = jest + dj
        open_rows = (found < 0) & (cand >= 0)
        if not open_rows.any():
            continue
        c = np.where(cand[open_rows] > 0, 4.0 ** cand[open_rows], 0.0)
        radius = np.where(cand[open_rows] > 0, 2.0 ** cand[open_rows], 1.0)
        d2 = (x1[open_rows] - c) ** 2 + rest_sq[open_rows]
        hit = d2 <= radius * radius
        idx = np.flatnonzero(open_rows)[hit]
        found[idx] = cand[open_rows][hit]
    return found


def locate_replication_disk(v):
    """Disk index for a single point, or None when it lies in no disk."""
    arr = as_vector(v)
    j = int(locate_replication_disks(arr[None, :])[0])
    return None if j < 0 else j


# =====================================================================
# Public constructors and evaluation
# =====================================================================

def identity(dim):
    return IdentityMap(dim)


def affine(matrix, offset=None):
    return AffineMap(matrix, offset)


def radial_extension(phi):
    return RadialExtensionMap(phi)


def disk_replication(g):
    return DiskReplicationMap(g)


def translated_replication(disk_maps=None, uniform=None):
    return TranslatedReplicationMap(disk_maps=disk_maps, uniform=uniform)


def product_map(f, g):
    return ProductMap(f, g)


def spiral_map(profile):
    return SpiralMap(profile)


def pl_homeomorphism(plmap):
    return PLHomeomorphismMap(plmap)


def compose(f, g):
    """Composition f o g: evaluate(compose(f, g), v) = f(g(v))."""
    if f.dim != g.dim:
        raise DimensionMismatchError(f"cannot compose dims {f.dim} and {g.dim}")
    parts = []
    for m in (f, g):
        parts.extend(m.maps if isinstance(m, CompositionMap) else [m])
    return CompositionMap(parts)


def inverse(m):
    if isinstance(m, InverseMap):
        return m.inner
    return InverseMap(m)


def evaluate_points(m, pts):
    """Image of row points under a map expression."""
    return m._eval(as_points(pts, dim=m.dim))


def evaluate(m, v):
    """Image of a single point."""
    return m._eval(as_vector(v, dim=m.dim)[None, :])[0]


def evaluate_inverse_points(m, pts):
    return m._eval_inverse(as_points(pts, dim=m.dim))


def evaluate_inverse(m, v):
    return m._eval_inverse(as_vector(v, dim=m.dim)[None, :])[0]


def displacement_points(m, pts):
    """f(x) - x for row points, computed at the construction's scale.

    Exactly the displacement field of the map; preferred over
    subtracting absolute coordinates when points sit on far-away disks.
    """
    return m._displacement(as_points(pts, dim=m.dim))


def displacement(m, v):
    return m._displacement(as_vector(v, dim=m.dim)[None, :])[0]


def jacobian_fd(m, x, step=None):
    """Central-difference Jacobian of a map expression at ``x``.

    Default step 1e-5 * max(1, ||x||). Column k holds the difference
    quotient along axis k.
    """
    xv = as_vector(x, dim=m.dim)
    h = step if step is not None else 1e-5 * max(1.0, float(np.linalg.norm(xv)))
    probes = np.repeat(xv[None, :], 2 * m.dim, axis=0)
    for k in range(m.dim):
        probes[2 * k, k] += h
        probes[2 * k + 1, k] -= h
    vals = m._eval(probes)
    jac = np.empty((m.dim, m.dim))
    for k in range(m.dim):
        jac[:, k] = (vals[2 * k] - vals[2 * k + 1]) / (2.0 * h)
    return jac
