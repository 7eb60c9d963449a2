"""Piecewise-linear homeomorphisms on Kuhn-triangulated boxes.

The standard subdivision splits every grid cube into n! simplices, one
per coordinate ordering. A PL map stores one image point per lattice
vertex and is affine on each simplex, so its differential is constant
per simplex and the global PL norm sup ||T_sigma f|| is an exact finite
maximum rather than an estimate.
"""

import itertools

import numpy as np

from .core import as_points, largest_singular_values
from .errors import (
    DegenerateSimplexError,
    DisplacementTooLargeError,
    EmptyGridError,
    InvalidPointError,
    NotHomeomorphismError,
    OutOfDomainError,
    SupportViolationError,
)

_MAX_DIM = 6
_MAX_RESOLUTION = 64
_BARY_TOL = 1e-12
_DEGENERATE_TOL = 1e-12


class Triangulation:
    """Kuhn triangulation of the box [lo, hi]^dim at a given resolution.

    Vertices are the lattice points in C order; each cube contributes
    its dim! path simplices in lexicographic order of the coordinate
    permutation. Instances are immutable after construction.
    """

    def __init__(self, dim, lo, hi, resolution, vertices, simplices):
        self.dim = dim
        self.lo = float(lo)
        self.hi = float(hi)
        self.resolution = int(resolution)
        self.vertices = vertices
        self.simplices = simplices
        self.cell = (self.hi - self.lo) / self.resolution
        self._boundary_mask = None

    @property
    def n_vertices(self):
        return self.vertices.shape[0]

    @property
    def n_simplices(self):
        return self.simplices.shape[0]

    @property
    def grid_shape(self):
        return (self.resolution + 1,) * self.dim

    def boundary_vertex_mask(self):
        """Boolean mask of lattice vertices on the box boundary."""
        if self._boundary_mask is None:
            on_face = (np.abs(self.vertices - self.lo) == 0.0) | (
                np.abs(self.vertices - self.hi) == 0.0
            )
            self._boundary_mask = on_face.any(axis=1)
        return self._boundary_mask

    def simplex_volume(self):
        """Volume of each simplex (they are all congruent)."""
        import math

        return self.cell ** self.dim / math.factorial(self.dim)


def kuhn_triangulation(dim, box, resolution):
    """Triangulate [box[0], box[1]]^dim into resolution^dim cubes of
    dim! simplices each.

    Parameters
    ----------
    dim : int
        Ambient dimension, at most 6.
    box : (float, float)
        Lower and upper corner value, the same on every axis.
    resolution : int
        Grid cells per axis, between 1 and 64.
    """
    if resolution == 0:
        raise EmptyGridError("resolution 0 gives an empty grid")
    if not (1 <= dim <= _MAX_DIM):
        raise InvalidPointError(f"dim must be in [1, {_MAX_DIM}], got {dim}")
    if not (1 <= resolution <= _MAX_RESOLUTION):
        raise InvalidPointError(
            f"resolution must be in [1, {_MAX_RESOLUTION}], got {resolution}"
        )
    lo, hi = float(box[0]), float(box[1])
    if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
        raise InvalidPointError(f"box must satisfy lo < hi, got ({lo}, {hi})")

    axes = [np.linspace(lo, hi, resolution + 1) for _ in range(dim)]
    mesh = np.meshgrid(*axes, indexing="ij")
    vertices = np.stack(mesh, axis=-1).reshape(-1, dim)

    # Path offsets: for permutation pi, vertex k of the simplex sits at
    # cube_corner + e_{pi(0)} + ... + e_{pi(k-1)}.
    perms = list(itertools.permutations(range(dim)))
    offsets = np.zeros((len(perms), dim + 1, dim), dtype=np.int64)
    for p, perm in enumerate(perms):
        step = np.zeros(dim, dtype=np.int64)
        for k, axis in enumerate(perm):
            step = step.copy()
            step[axis] += 1
            offsets[p, k + 1] = step

    cubes = np.stack(
        np.meshgrid(*[np.arange(resolution)] * dim, indexing="ij"), axis=-1
    ).reshape(-1, dim)
    lattice = cubes[:, None, None, :] + offsets[None, :, :, :]
    lattice = lattice.reshape(-1, dim + 1, dim)
    shape = (resolution + 1,) * dim
    simplices = np.ravel_multi_index(
        tuple(lattice[..., a] for a in range(dim)), shape
    )
    return Triangulation(dim, lo, hi, resolution, vertices, simplices)


class PLMap:
    """Simplex-wise affine map defined by images of the lattice vertices.

    With ``boundary_fixed`` the map is extended by the identity outside
    the box; boundary vertices must then map to themselves exactly.
    Internal caches (differentials, inverse lookup buckets) are built
    lazily and never mutated afterwards.
    """

    def __init__(self, triangulation, vertex_images, boundary_fixed=True,
                 validate=True):
        tri = triangulation
        images = np.asarray(vertex_images, dtype=float)
        if images.shape != tri.vertices.shape:
            raise InvalidPointError(
                f"vertex_images shape {images.shape} does not match "
                f"{tri.vertices.shape}"
            )
        if not np.all(np.isfinite(images)):
            raise InvalidPointError("vertex images must be finite")
        if boundary_fixed and validate:
            # pl_validate() can still report the violation on an
            # unvalidated map; the default construction path refuses it
            mask = tri.boundary_vertex_mask()
            if not np.array_equal(images[mask], tri.vertices[mask]):
                raise SupportViolationError(
                    "boundary vertices must map to themselves exactly"
                )
        self.triangulation = tri
        self.vertex_images = images
        self.boundary_fixed = bool(boundary_fixed)
        self._diffs = None
        self._dets = None
        self._buckets = None

    @property
    def dim(self):
        return self.triangulation.dim

    def differentials(self):
        """Stacked per-simplex affine differentials, shape (S, n, n)."""
        if self._diffs is None:
            tri = self.triangulation
            src = tri.vertices[tri.simplices]  # (S, n+1, n)
            img = self.vertex_images[tri.simplices]
            e_src = (src[:, 1:, :] - src[:, :1, :]).transpose(0, 2, 1)
            e_img = (img[:, 1:, :] - img[:, :1, :]).transpose(0, 2, 1)
            self._diffs = e_img @ np.linalg.inv(e_src)
        return self._diffs

    def determinants(self):
        if self._dets is None:
            self._dets = np.linalg.det(self.differentials())
        return self._dets


def _locate(tri, pts):
    """Cube index, descending coordinate order and barycentric weights
    for points inside the box. Ties in the coordinate order resolve to
    the lexicographically smallest permutation (stable argsort)."""
    u = (pts - tri.lo) / tri.cell
    u = np.clip(u, 0.0, float(tri.resolution))
    cube = np.minimum(u.astype(np.int64), tri.resolution - 1)
    loc = np.clip(u - cube, 0.0, 1.0)
    order = np.argsort(-loc, axis=1, kind="stable")
    s = np.take_along_axis(loc, order, axis=1)
    n = tri.dim
    w = np.empty((pts.shape[0], n + 1))
    w[:, 0] = 1.0 - s[:, 0]
    if n > 1:
        w[:, 1:n] = s[:, : n - 1] - s[:, 1:]
    w[:, n] = s[:, n - 1]
    np.clip(w, 0.0, None, out=w)  # absorb -1e-17 rounding residue
    return cube, order, w


def _path_vertex_indices(tri, cube, order):
    """Flat lattice indices of the simplex path v0..vn for each row."""
    npts, n = cube.shape
    lat = np.empty((npts, n + 1, n), dtype=np.int64)
    lat[:, 0, :] = cube
    eye = np.eye(n, dtype=np.int64)
    steps = eye[order]  # (N, n, n): one-hot of order[k]
    lat[:, 1:, :] = cube[:, None, :] + np.cumsum(steps, axis=1)
    shape = tri.grid_shape
    return np.ravel_multi_index(tuple(lat[..., a] for a in range(n)), shape)


def _outside_mask(tri, pts):
    tol = _BARY_TOL * max(1.0, abs(tri.lo), abs(tri.hi))
    return ((pts < tri.lo - tol) | (pts > tri.hi + tol)).any(axis=1)


def pl_eval(f, pts):
    """Evaluate a PLMap at row points.

    Points inside the box interpolate the vertex images with the
    barycentric weights of their containing Kuhn simplex. Points
    outside pass through unchanged when ``boundary_fixed``, otherwise
    an out-of-domain error is raised.
    """
    tri = f.triangulation
    pts = as_points(pts, tri.dim)
    outside = _outside_mask(tri, pts)
    if outside.any() and not f.boundary_fixed:
        raise OutOfDomainError("point outside the triangulated box")
    out = pts.copy()
    inside = ~outside
    if inside.any():
        p_in = pts[inside]
        cube, order, w = _locate(tri, p_in)
        flat = _path_vertex_indices(tri, cube, order)
        out[inside] = np.einsum("nk,nkd->nd", w, f.vertex_images[flat])
    return out


# =====================================================================
# Inverse evaluation
# =====================================================================

def _build_buckets(f):
    """Map each grid cube to the image simplices whose bounding box
    touches it. The image of an orientation-positive boundary-fixed
    map is the box itself, so the source grid doubles as a spatial
    index for inverse queries."""
    tri = f.triangulation
    img = f.vertex_images[tri.simplices]  # (S, n+1, n)
    pad = 1e-9 * tri.cell
    lo_box = (img.min(axis=1) - tri.lo - pad) / tri.cell
    hi_box = (img.max(axis=1) - tri.lo + pad) / tri.cell
    lo_idx = np.clip(np.floor(lo_box).astype(np.int64), 0, tri.resolution - 1)
    hi_idx = np.clip(np.floor(hi_box).astype(np.int64), 0, tri.resolution - 1)
    buckets = {}
    for s in range(tri.n_simplices):
        ranges = [range(lo_idx[s, a], hi_idx[s, a] + 1) for a in range(tri.dim)]
        for cube in itertools.product(*ranges):
            buckets.setdefault(cube, []).append(s)
    return buckets


def pl_eval_inverse(f, pts):
    """Evaluate the inverse PL map at row points.

    Requires a positively oriented map. Each query point is matched to
    the image simplex containing it (via barycentric coordinates in the
    image) and pulled back with the same weights.
    """
    tri = f.triangulation
    pts = as_points(pts, tri.dim)
    dets = f.determinants()
    if np.any(dets <= 0.0):
        raise NotHomeomorphismError("map is not orientation-positive")
    if f._buckets is None:
        f._buckets = _build_buckets(f)
    outside = _outside_mask(tri, pts)
    if outside.any() and not f.boundary_fixed:
        raise OutOfDomainError("point outside the triangulated box")
    out = pts.copy()

    img_all = f.vertex_images[tri.simplices]
    src_all = tri.vertices[tri.simplices]
    inside_idx = np.flatnonzero(~outside)
    for i in inside_idx:
        y = pts[i]
        u = np.clip((y - tri.lo) / tri.cell, 0.0, float(tri.resolution))
        cube = tuple(np.minimum(u.astype(np.int64), tri.resolution - 1))
        found = False
        for cands in (f._buckets.get(cube, ()), _neighbor_candidates(f, cube)):
            for s in cands:
                q = img_all[s]
                e = (q[1:] - q[0]).T
                try:
                    w_rest = np.linalg.solve(e, y - q[0])
                except np.linalg.LinAlgError:
                    continue
                w0 = 1.0 - w_rest.sum()
                if w0 >= -1e-9 and np.all(w_rest >= -1e-9):
                    w = np.concatenate([[w0], w_rest])
                    out[i] = w @ src_all[s]
                    found = True
                    break
            if found:
                break
        if not found:
            raise OutOfDomainError(f"no image simplex contains point {y!r}")
    return out


def _neighbor_candidates(f, cube):
    tri = f.triangulation
    seen = set(f._buckets.get(cube, ()))
    cands = []
    for delta in itertools.product((-1, 0, 1), repeat=tri.dim):
        ncube = tuple(
            min(max(c + d, 0), tri.resolution - 1) for c, d in zip(cube, delta)
        )
        for s in f._buckets.get(ncube, ()):
            if s not in seen:
                seen.add(s)
                cands.append(s)
    return cands


# =====================================================================
# Norms and validation
# =====================================================================

def pl_differential_norm(f, with_argmax=False):
    """sup over simplices of the operator norm of the affine differential.

    Exact up to the singular-value iteration tolerance. With
    ``with_argmax`` also returns the index of the realizing simplex.
    """
    diffs = f.differentials()
    if np.any(np.abs(f.determinants()) < _DEGENERATE_TOL):
        raise DegenerateSimplexError("triangulation image has a degenerate simplex")
    norms = largest_singular_values(diffs)
    k = int(np.argmax(norms))
    return (float(norms[k]), k) if with_argmax else float(norms[k])


def pl_bilip_constant(f):
    """max(sup ||T_sigma f||, sup ||T_sigma f^-1||); a valid global
    bi-Lipschitz constant on the (convex) box."""
    dets = f.determinants()
    if np.any(dets <= 0.0):
        raise NotHomeomorphismError("differential determinant <= 0 somewhere")
    if np.any(np.abs(dets) < _DEGENERATE_TOL):
        raise DegenerateSimplexError("degenerate simplex in PL map")
    fwd = largest_singular_values(f.differentials())
    inv = largest_singular_values(np.linalg.inv(f.differentials()))
    return float(max(fwd.max(), inv.max()))


class PLValidation:
    """Outcome of the homeomorphism checks for a PLMap."""

    def __init__(self, ok, n_simplices, min_det, negative, degenerate,
                 boundary_violations):
        self.ok = ok
        self.n_simplices = n_simplices
        self.min_det = min_det
        self.negative_simplices = negative
        self.degenerate_simplices = degenerate
        self.boundary_violations = boundary_violations

    def __repr__(self):
        return (
            f"PLValidation(ok={self.ok}, n_simplices={self.n_simplices}, "
            f"min_det={self.min_det:.3e}, "
            f"negative={len(self.negative_simplices)}, "
            f"degenerate={len(self.degenerate_simplices)}, "
            f"boundary_violations={len(self.boundary_violations)})"
        )


def pl_validate(f):
    """Report determinant signs, degeneracies and boundary fixity.

    Never raises; failures are carried in the report.
    """
    dets = f.determinants()
    negative = np.flatnonzero(dets <= 0.0)
    degenerate = np.flatnonzero(np.abs(dets) < _DEGENERATE_TOL)
    tri = f.triangulation
    mask = tri.boundary_vertex_mask()
    if f.boundary_fixed:
        bad = ~np.all(f.vertex_images[mask] == tri.vertices[mask], axis=1)
        violations = np.flatnonzero(mask)[bad]
    else:
        violations = np.empty(0, dtype=np.int64)
    ok = negative.size == 0 and degenerate.size == 0 and violations.size == 0
    return PLValidation(ok, tri.n_simplices, float(dets.min()), negative,
                        degenerate, violations)


# =====================================================================
# Builtin generators and CSV interchange
# =====================================================================

def identity_plmap(triangulation):
    return PLMap(triangulation, triangulation.vertices.copy(), boundary_fixed=True)


def pl_twist_example(dim, resolution, displacement, plane=(0, 1)):
    """Compactly supported PL twist on the box [-1, 1]^dim.

    Interior lattice vertices rotate in the given coordinate plane by
    ``displacement`` scaled by a weight that vanishes on the boundary,
    so the boundary is fixed exactly. Raises if the displacement flips
    any simplex orientation.
    """
    from .core import check_plane

    i, j = check_plane(plane, dim)
    tri = kuhn_triangulation(dim, (-1.0, 1.0), resolution)
    v = tri.vertices
    weight = np.prod(1.0 - v * v, axis=1)
    angle = displacement * weight
    c, s = np.cos(angle), np.sin(angle)
    images = v.copy()
    images[:, i] = c * v[:, i] - s * v[:, j]
    images[:, j] = s * v[:, i] + c * v[:, j]
    # weight 0 must mean "fixed exactly", not "rotated by angle 0.0"
    fixed = weight == 0.0
    images[fixed] = v[fixed]
    f = PLMap(tri, images, boundary_fixed=True)
    if np.any(f.determinants() <= 0.0):
        raise DisplacementTooLargeError(
            f"displacement {displacement} flips a simplex; use a smaller value"
        )
    return f


def save_plmap_csv(f, path):
    """Write a PLMap as CSV: header lines (dim, box, resolution,
    boundary_fixed), then one row per vertex: index and image
    coordinates with 17 significant digits."""
    tri = f.triangulation
    lines = ["# bilip plmap v1"]
    lines.append(f"dim,{tri.dim}")
    lines.append(f"box,{tri.lo:.17g},{tri.hi:.17g}")
    lines.append(f"resolution,{tri.resolution}")
    lines.append(f"boundary_fixed,{int(f.boundary_fixed)}")
    for idx in range(tri.n_vertices):
        coords = ",".join(f"{x:.17g}" for x in f.vertex_images[idx])
        lines.append(f"{idx},{coords}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_plmap_csv(path):
    """Read a PLMap written by :func:`save_plmap_csv`."""
    with open(path, "r", encoding="utf-8") as fh:
        rows = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
    header = {}
    body = []
    for ln in rows:
        parts = ln.split(",")
        if parts[0] in ("dim", "box", "resolution", "boundary_fixed"):
            header[parts[0]] = parts[1:]
        else:
            body.append(parts)
    try:
        dim = int(header["dim"][0])
        lo, hi = float(header["box"][0]), float(header["box"][1])
        resolution = int(header["resolution"][0])
        boundary_fixed = bool(int(header["boundary_fixed"][0]))
    except (KeyError, IndexError, ValueError) as exc:
        raise InvalidPointError(f"malformed plmap csv header: {exc}") from exc
    tri = kuhn_triangulation(dim, (lo, hi), resolution)
    images = np.empty_like(tri.vertices)
    seen = np.zeros(tri.n_vertices, dtype=bool)
    for parts in body:
        idx = int(parts[0])
        images[idx] = [float(x) for x in parts[1 : dim + 1]]
        seen[idx] = True
    if not seen.all():
        raise InvalidPointError("plmap csv is missing vertex rows")
    return PLMap(tri, images, boundary_fixed=boundary_fixed)
