"""Canonical text format for map expressions.

A map expression serializes to a single line of nested constructor
calls with keyword arguments, e.g.::

    disk_replication(map=twist(profile=cubic(knots=[0,0.55,1],...),
                               plane=[0,1], dim=2))

Numbers are written with 17 significant digits so float64 values
round-trip exactly; the emitted argument order is fixed, making the
format canonical: equal expressions serialize to equal strings.
"""

import re

import numpy as np

from .errors import MapFormatError
from . import maps as M
from . import pl as plmod
from .profiles import CubicProfile


def _fmt_num(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def _fmt_value(v):
    if v is None:
        return "none"
    if isinstance(v, str):
        return v
    if isinstance(v, (list, tuple, np.ndarray)):
        return "[" + ",".join(_fmt_value(x) for x in v) + "]"
    return _fmt_num(v)


def _call(name, args):
    body = ",".join(f"{k}={_fmt_value(v)}" for k, v in args)
    return f"{name}({body})"


def _cubic_text(p: CubicProfile):
    return _call("cubic", [
        ("knots", p.knots),
        ("coeffs", p.coeffs),
        ("values", p.values),
    ])


def _plmap_text(f: plmod.PLMap):
    tri = f.triangulation
    return _call("plmap", [
        ("dim", tri.dim),
        ("lo", tri.lo),
        ("hi", tri.hi),
        ("resolution", tri.resolution),
        ("boundary_fixed", f.boundary_fixed),
        ("images", f.vertex_images),
    ])


def _sphere_text(phi):
    if isinstance(phi, M.OrthogonalSphereMap):
        return _call("orthogonal", [("matrix", phi.matrix)])
    if isinstance(phi, M.LatitudeSphereMap):
        return _call("latitude", [("beta", phi.beta), ("axis", phi.axis)])
    if isinstance(phi, M._InverseLatitudeSphereMap):
        return _call("latitude_inverse", [
            ("beta", phi.forward.beta), ("axis", phi.forward.axis)])
    if isinstance(phi, M.ConjugatedSphereMap):
        return _call("conjugated", [
            ("rotation", phi.rotation), ("map", _sphere_text(phi.inner))])
    if isinstance(phi, M.ComposedSphereMap):
        return _call("sphere_compose",
                     [("maps", [_sphere_text(m) for m in phi.maps])])
    raise MapFormatError(f"cannot serialize sphere map {type(phi).__name__}")


def _disk_text(g):
    if isinstance(g, M.TwistDiskMap):
        return _call("twist", [
            ("profile", _cubic_text(g.profile)),
            ("plane", list(g.plane)),
            ("dim", g.dim),
        ])
    if isinstance(g, M.PLDiskMap):
        return _call("pl_disk", [
            ("map", _plmap_text(g.plmap)),
            ("inverted", g._inverse),
        ])
    if isinstance(g, M.ComposedDiskMap):
        return _call("disk_compose", [("maps", [_disk_text(m) for m in g.maps])])
    raise MapFormatError(f"cannot serialize disk map {type(g).__name__}")


def _profile_text(p):
    if isinstance(p, M.ConstantRotationProfile):
        return _call("constant_rotation", [("matrix", p.matrix_value)])
    if isinstance(p, M.LogSpiralProfile):
        return _call("log_spiral", [
            ("c", p.c), ("plane", list(p.plane)), ("dim", p.dim)])
    if isinstance(p, M.CutoffRotationProfile):
        return _call("cutoff_rotation", [
            ("angle", _cubic_text(p.theta)),
            ("plane", list(p.plane)),
            ("dim", p.dim),
        ])
    raise MapFormatError(f"cannot serialize profile {type(p).__name__}")


def map_to_text(m):
    """Serialize a map expression to its canonical one-line text."""
    if isinstance(m, M.IdentityMap):
        return _call("identity", [("dim", m.dim)])
    if isinstance(m, M.AffineMap):
        return _call("affine", [("matrix", m.matrix), ("offset", m.offset)])
    if isinstance(m, M.RadialExtensionMap):
        return _call("radial_extension", [("map", _sphere_text(m.sphere_map))])
    if isinstance(m, M.DiskReplicationMap):
        return _call("disk_replication", [("map", _disk_text(m.disk_map))])
    if isinstance(m, M.TranslatedReplicationMap):
        if m.uniform is not None:
            return _call("translated_replication", [("uniform", _disk_text(m.uniform))])
        entries = [(None if g is None else _disk_text(g)) for g in m.disk_maps]
        return _call("translated_replication", [("maps", entries)])
    if isinstance(m, M.ProductMap):
        return _call("product", [
            ("left", map_to_text(m.left)), ("right", map_to_text(m.right))])
    if isinstance(m, M.SpiralMap):
        return _call("spiral", [("profile", _profile_text(m.profile))])
    if isinstance(m, M.PLHomeomorphismMap):
        return _call("pl", [("map", _plmap_text(m.plmap))])
    if isinstance(m, M.CompositionMap):
        return _call("compose", [("maps", [map_to_text(x) for x in m.maps])])
    if isinstance(m, M.InverseMap):
        return _call("inverse", [("map", map_to_text(m.inner))])
    raise MapFormatError(f"cannot serialize map {type(m).__name__}")


# =====================================================================
# Parsing
# =====================================================================

_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z_0-9]*|[-+]?[0-9][^,()\[\]\s]*|[(),=\[\]])")


class _Parser:
    def __init__(self, text):
        self.tokens = []
        pos = 0
        while pos < len(text):
            mobj = _TOKEN.match(text, pos)
            if mobj is None:
                if text[pos:].strip():
                    raise MapFormatError(f"bad token at {text[pos:pos + 20]!r}")
                break
            self.tokens.append(mobj.group(1))
            pos = mobj.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self):
        tok = self.peek()
        if tok is None:
            raise MapFormatError("unexpected end of input")
        self.i += 1
        return tok

    def expect(self, tok):
        got = self.next()
        if got != tok:
            raise MapFormatError(f"expected {tok!r}, got {got!r}")

    def parse_value(self):
        tok = self.peek()
        if tok == "[":
            return self.parse_list()
        if re.match(r"^[A-Za-z_]", tok or ""):
            name = self.next()
            if self.peek() == "(":
                return self.parse_call(name)
            if name == "true":
                return True
            if name == "false":
                return False
            if name == "none":
                return None
            raise MapFormatError(f"unknown bare word {name!r}")
        tok = self.next()
        try:
            return int(tok) if re.fullmatch(r"[-+]?[0-9]+", tok) else float(tok)
        except ValueError as exc:
            raise MapFormatError(f"bad number {tok!r}") from exc

    def parse_list(self):
        self.expect("[")
        items = []
        if self.peek() == "]":
            self.next()
            return items
        while True:
            items.append(self.parse_value())
            tok = self.next()
            if tok == "]":
                return items
            if tok != ",":
                raise MapFormatError(f"expected ',' or ']' in list, got {tok!r}")

    def parse_call(self, name):
        self.expect("(")
        kwargs = {}
        if self.peek() == ")":
            self.next()
        else:
            while True:
                key = self.next()
                self.expect("=")
                kwargs[key] = self.parse_value()
                tok = self.next()
                if tok == ")":
                    break
                if tok != ",":
                    raise MapFormatError(f"expected ',' or ')', got {tok!r}")
        try:
            return _build(name, kwargs)
        except KeyError as exc:
            raise MapFormatError(f"{name} is missing argument {exc}") from exc


def _need(kwargs, name, *keys):
    try:
        return [kwargs[k] for k in keys]
    except KeyError as exc:
        raise MapFormatError(f"{name} needs argument {exc}") from exc


def _build(name, kw):
    if name == "cubic":
        knots, coeffs, values = _need(kw, name, "knots", "coeffs", "values")
        return CubicProfile(knots, coeffs, values)
    if name == "plmap":
        dim, lo, hi, res, bf, images = _need(
            kw, name, "dim", "lo", "hi", "resolution", "boundary_fixed", "images")
        tri = plmod.kuhn_triangulation(dim, (lo, hi), res)
        return plmod.PLMap(tri, np.asarray(images, dtype=float), boundary_fixed=bf)
    if name == "orthogonal":
        return M.OrthogonalSphereMap(np.asarray(kw["matrix"], dtype=float))
    if name == "latitude":
        return M.LatitudeSphereMap(kw["beta"], kw["axis"])
    if name == "latitude_inverse":
        return M.LatitudeSphereMap(kw["beta"], kw["axis"]).inverse()
    if name == "conjugated":
        return M.ConjugatedSphereMap(np.asarray(kw["rotation"], dtype=float),
                                     kw["map"])
    if name == "sphere_compose":
        return M.ComposedSphereMap(kw["maps"])
    if name == "twist":
        return M.TwistDiskMap(kw["profile"], kw["plane"], kw["dim"])
    if name == "pl_disk":
        g = M.PLDiskMap(kw["map"])
        return g.inverse() if kw.get("inverted", False) else g
    if name == "disk_compose":
        return M.ComposedDiskMap(kw["maps"])
    if name == "constant_rotation":
        return M.ConstantRotationProfile(np.asarray(kw["matrix"], dtype=float))
    if name == "log_spiral":
        return M.LogSpiralProfile(kw["c"], kw["plane"], kw["dim"])
    if name == "cutoff_rotation":
        return M.CutoffRotationProfile(kw["angle"], kw["plane"], kw["dim"])
    if name == "identity":
        return M.IdentityMap(kw["dim"])
    if name == "affine":
        return M.AffineMap(np.asarray(kw["matrix"], dtype=float), kw.get("offset"))
    if name == "radial_extension":
        return M.RadialExtensionMap(kw["map"])
    if name == "disk_replication":
        return M.DiskReplicationMap(kw["map"])
    if name == "translated_replication":
        if "uniform" in kw:
            return M.TranslatedReplicationMap(uniform=kw["uniform"])
        return M.TranslatedReplicationMap(disk_maps=kw["maps"])
    if name == "product":
        return M.ProductMap(kw["left"], kw["right"])
    if name == "spiral":
        return M.SpiralMap(kw["profile"])
    if name == "pl":
        return M.PLHomeomorphismMap(kw["map"])
    if name == "compose":
        return M.CompositionMap(kw["maps"])
    if name == "inverse":
        return M.InverseMap(kw["map"])
    raise MapFormatError(f"unknown constructor {name!r}")


def parse_map(text):
    """Parse canonical map text back into a map expression."""
    parser = _Parser(text)
    name = parser.next()
    value = parser.parse_call(name)
    if parser.peek() is not None:
        raise MapFormatError(f"trailing input after expression: {parser.peek()!r}")
    if not isinstance(value, M.MapExpr):
        raise MapFormatError(f"{name!r} is not a map expression")
    return value


def load_map(path):
    """Read a canonical map text file (comments with # allowed)."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh
                 if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise MapFormatError(f"no map expression found in {path}")
    return parse_map(" ".join(lines))


def save_map(m, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(map_to_text(m) + "\n")
