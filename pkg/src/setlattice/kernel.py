"""Exact arithmetic in the lattice of upper closed convex sets of R^d, d <= 2.

An upper set A satisfies A = cl co(A + C) for the workspace ordering cone C.
The lattice order is reverse inclusion: a.leq(b) means a ⊇ b.  All data is
rational and every operation is exact; Empty and the whole space are the
greatest and smallest elements.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence, Tuple

from . import backend
from ._geom_py import (
    facet_from_fraction,
    reduce_point,
)
from .extres import MINUS_INF, PLUS_INF, ExtReal

Vec = Tuple[Fraction, ...]


class LatticeError(Exception):
    pass


class NormalOutsideDualCone(LatticeError):
    pass


class NegativeScalar(LatticeError):
    pass


class WorkspaceMismatch(LatticeError):
    pass


def to_frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def frac_str(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def as_vec(v) -> Vec:
    return tuple(to_frac(c) for c in v)


def _primitive_dir(v: Sequence) -> Tuple[int, ...]:
    """Scale a nonzero rational vector to a primitive integer vector."""
    fr = [to_frac(c) for c in v]
    den = 1
    for c in fr:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in fr]
    g = 0
    for c in ints:
        g = gcd(g, abs(c))
    if g == 0:
        raise LatticeError("zero vector has no direction")
    return tuple(c // g for c in ints)


# ---------------------------------------------------------------------------
# 1D geometry (intervals); the 2D twin lives in the compiled backend
# ---------------------------------------------------------------------------


def _vrep1(facets):
    lo = None
    hi = None
    for a, cn, cd in facets:
        v = Fraction(cn, cd * a)
        if a > 0:
            if hi is None or v < hi:
                hi = v
        else:
            if lo is None or v > lo:
                lo = v
    if lo is not None and hi is not None and lo > hi:
        return False, [], []
    points = []
    for v in (lo, hi):
        if v is not None:
            points.append((v.numerator, v.denominator))
    if len(points) == 2 and points[0] == points[1]:
        points = points[:1]
    if not points:
        points = [(0, 1)]
    rays = []
    if hi is None:
        rays.append((1,))
    if lo is None:
        rays.append((-1,))
    return True, sorted(points), sorted(rays)


def _hrep1(points, rays):
    up = (1,) in rays
    down = (-1,) in rays
    if up and down:
        return []
    vals = [Fraction(p[0], p[1]) for p in points]
    facets = []
    if not up:
        hi = max(vals)
        facets.append((1, hi.numerator, hi.denominator))
    if not down:
        lo = min(vals)
        facets.append((-1, -lo.numerator, lo.denominator))
    return sorted(facets)


def _inside1(points, rays, facets):
    for a, cn, cd in facets:
        for p in points:
            if cd * a * p[0] > cn * p[1]:
                return False
        for r in rays:
            if a * r[0] > 0:
                return False
    return True


def _reduce_facet1(a, cn, cd):
    if cd < 0:
        cn, cd = -cn, -cd
    k = abs(a)
    cd *= k
    a //= k
    g = gcd(abs(cn), cd)
    if g > 1:
        cn //= g
        cd //= g
    return (a, cn, cd)


def _vrep(dim, facets):
    if dim == 1:
        return _vrep1(facets)
    return backend.vrep_from_hrep(facets)


def _hrep(dim, points, rays):
    if dim == 1:
        return _hrep1(points, rays)
    return backend.hrep_from_vrep(points, rays)


def _inside(dim, points, rays, facets):
    if dim == 1:
        return _inside1(points, rays, facets)
    return backend.vrep_inside_hrep(points, rays, facets)


def _facet_of(dim, normal, offset: Fraction):
    if dim == 1:
        return _reduce_facet1(normal[0], offset.numerator, offset.denominator)
    return facet_from_fraction(normal[0], normal[1], offset)


def _facet_normal(dim, facet):
    return (facet[0],) if dim == 1 else (facet[0], facet[1])


def _facet_offset(dim, facet):
    if dim == 1:
        return Fraction(facet[1], facet[2])
    return Fraction(facet[2], facet[3])


def _point_vec(dim, p) -> Vec:
    if dim == 1:
        return (Fraction(p[0], p[1]),)
    return (Fraction(p[0], p[2]), Fraction(p[1], p[2]))


def _vec_point(dim, v: Vec):
    if dim == 1:
        f = to_frac(v[0])
        return (f.numerator, f.denominator)
    fx, fy = to_frac(v[0]), to_frac(v[1])
    den = fx.denominator * fy.denominator // gcd(fx.denominator, fy.denominator)
    return reduce_point(int(fx * den), int(fy * den), den)


def _dot(u, v) -> Fraction:
    return sum((to_frac(a) * to_frac(b) for a, b in zip(u, v)), Fraction(0))


# ---------------------------------------------------------------------------
# Order cone and direction sets
# ---------------------------------------------------------------------------


class OrderCone:
    """A closed convex polyhedral ordering cone with nontrivial dual."""

    __slots__ = ("dim", "generators", "facet_normals", "_lineality")

    def __init__(self, dim: int, generators: Iterable[Sequence]):
        if dim not in (1, 2):
            raise LatticeError("only dimensions 1 and 2 are supported")
        gens = []
        for g in generators:
            d = _primitive_dir(g)
            if len(d) != dim:
                raise LatticeError("cone generator has wrong dimension")
            if d not in gens:
                gens.append(d)
        self.dim = dim
        self.generators = tuple(sorted(gens))
        if dim == 1:
            pts = [(0, 1)]
            rays = [g for g in self.generators]
            normals = _hrep1(pts, rays)
        else:
            normals = backend.hrep_from_vrep([(0, 0, 1)], list(self.generators))
        if not normals:
            raise LatticeError("ordering cone must have a nontrivial dual cone")
        self.facet_normals = tuple(_facet_normal(dim, f) for f in normals)
        lin = []
        for g in self.generators:
            neg = tuple(-c for c in g)
            if self.contains(neg) and g not in lin and neg not in lin:
                lin.append(g)
        self._lineality = tuple(lin)

    def contains(self, v: Sequence) -> bool:
        vv = as_vec(v)
        return all(_dot(n, vv) <= 0 for n in self.facet_normals)

    def in_dual(self, z: Sequence) -> bool:
        """Membership of z in the negative dual cone C^-."""
        zz = as_vec(z)
        return all(_dot(zz, g) <= 0 for g in self.generators)

    def in_lineality(self, v: Sequence) -> bool:
        vv = as_vec(v)
        neg = tuple(-c for c in vv)
        return self.contains(vv) and self.contains(neg)

    @property
    def is_pointed(self) -> bool:
        return not self._lineality

    def __eq__(self, other):
        return (
            isinstance(other, OrderCone)
            and self.dim == other.dim
            and self.generators == other.generators
        )

    def __hash__(self):
        return hash((self.dim, self.generators))

    def __repr__(self):
        return f"OrderCone(dim={self.dim}, generators={list(self.generators)})"


class DirectionSet:
    """A finite sample of scalarization directions in C^- \\ {0}."""

    __slots__ = ("items",)

    def __init__(self, cone: OrderCone, directions: Iterable[Sequence]):
        items = []
        for d in directions:
            p = _primitive_dir(d)
            if len(p) != cone.dim:
                raise LatticeError("direction has wrong dimension")
            if not cone.in_dual(p):
                raise NormalOutsideDualCone(f"direction {p} is not in C^-")
            if p not in items:
                items.append(p)
        for n in cone.facet_normals:
            if n not in items:
                items.append(n)
        self.items = tuple(sorted(items))

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)

    def __contains__(self, d):
        return tuple(d) in self.items

    def union(self, directions: Iterable[Sequence], cone: OrderCone) -> "DirectionSet":
        return DirectionSet(cone, list(self.items) + [tuple(d) for d in directions])

    def __repr__(self):
        return f"DirectionSet({list(self.items)})"


class Workspace:
    """Ambient dimension, ordering cone and scalarization directions."""

    __slots__ = ("dim", "cone", "directions")

    def __init__(self, dim: int, cone_generators: Iterable[Sequence], directions: Iterable[Sequence] = ()):
        self.dim = dim
        self.cone = OrderCone(dim, cone_generators)
        self.directions = DirectionSet(self.cone, directions)

    # -- constructors of lattice elements -----------------------------

    def empty_set(self) -> "UpperSet":
        return UpperSet(self, None)

    def whole_space(self) -> "UpperSet":
        return UpperSet(self, [])

    def upper_set(self, constraints: Iterable[Tuple[Sequence, object]]) -> "UpperSet":
        """Canonical upper set from (normal, offset) halfspaces {z: <n,z> <= b}."""
        facets = []
        for normal, offset in constraints:
            n = _primitive_dir(normal)
            if not self.cone.in_dual(n):
                raise NormalOutsideDualCone(f"normal {tuple(normal)} is not in C^-")
            facets.append(_facet_of(self.dim, n, to_frac(offset)))
        return UpperSet(self, facets)

    def cone_set(self) -> "UpperSet":
        return self.upper_set([(n, 0) for n in self.cone.facet_normals])

    def translated_cone(self, point: Sequence) -> "UpperSet":
        p = as_vec(point)
        return self.upper_set([(n, _dot(n, p)) for n in self.cone.facet_normals])

    def hull_of_points(self, points: Iterable[Sequence]) -> "UpperSet":
        """Closed convex hull of finitely many points plus the cone."""
        pts = [_vec_point(self.dim, as_vec(p)) for p in points]
        rays = list(self.cone.generators)
        return UpperSet._from_generators(self, pts, rays)

    def from_json(self, obj) -> "UpperSet":
        if obj["tag"] == "empty":
            return self.empty_set()
        cons = [
            (tuple(int(c) for c in item["n"]), _parse_rat(item["b"]))
            for item in obj["constraints"]
        ]
        return self.upper_set(cons)

    def compatible(self, other: "Workspace") -> bool:
        return (
            self.dim == other.dim
            and self.cone == other.cone
        )

    def __repr__(self):
        return (
            f"Workspace(dim={self.dim}, cone={list(self.cone.generators)}, "
            f"directions={list(self.directions.items)})"
        )


def _parse_rat(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    raise LatticeError(f"cannot parse rational from {x!r}")


# ---------------------------------------------------------------------------
# Upper sets
# ---------------------------------------------------------------------------


class UpperSet:
    """Element of the lattice G(Z, C): empty, or a canonical polyhedron.

    The whole space is the polyhedron with no constraints.  Instances are
    immutable; the canonical facet tuple is the identity used by __eq__.
    """

    __slots__ = ("workspace", "facets", "points", "rayset")

    def __init__(self, workspace: Workspace, facets: Optional[Iterable] = None):
        self.workspace = workspace
        if facets is None:
            self.facets = None
            self.points = ()
            self.rayset = ()
            return
        dim = workspace.dim
        ok, pts, rays = _vrep(dim, list(facets))
        if not ok:
            self.facets = None
            self.points = ()
            self.rayset = ()
            return
        canon = _hrep(dim, pts, rays)
        ok2, pts2, rays2 = _vrep(dim, canon)
        self.facets = tuple(canon)
        self.points = tuple(pts2)
        self.rayset = tuple(rays2)

    @classmethod
    def _from_generators(cls, workspace: Workspace, points, rays) -> "UpperSet":
        if not points:
            return workspace.empty_set()
        canon = _hrep(workspace.dim, points, rays)
        obj = object.__new__(cls)
        obj.workspace = workspace
        ok, pts2, rays2 = _vrep(workspace.dim, canon)
        obj.facets = tuple(canon)
        obj.points = tuple(pts2)
        obj.rayset = tuple(rays2)
        return obj

    # -- structure ----------------------------------------------------

    @property
    def is_empty(self) -> bool:
        return self.facets is None

    @property
    def is_whole(self) -> bool:
        return self.facets is not None and len(self.facets) == 0

    @property
    def constraints(self):
        if self.is_empty:
            return ()
        dim = self.workspace.dim
        return tuple(
            (_facet_normal(dim, f), _facet_offset(dim, f)) for f in self.facets
        )

    @property
    def vertices(self) -> Tuple[Vec, ...]:
        dim = self.workspace.dim
        return tuple(_point_vec(dim, p) for p in self.points)

    @property
    def rays(self):
        return self.rayset

    def __eq__(self, other):
        if not isinstance(other, UpperSet):
            return NotImplemented
        return self.facets == other.facets and self.workspace.compatible(other.workspace)

    def __hash__(self):
        return hash(self.facets)

    def __repr__(self):
        if self.is_empty:
            return "UpperSet(empty)"
        if self.is_whole:
            return "UpperSet(whole space)"
        dim = self.workspace.dim
        parts = []
        for f in self.facets:
            n = _facet_normal(dim, f)
            parts.append(f"<{','.join(map(str, n))}|z> <= {frac_str(_facet_offset(dim, f))}")
        return "UpperSet({" + ", ".join(parts) + "})"

    # -- order and lattice ----------------------------------------------

    def leq(self, other: "UpperSet") -> bool:
        """The lattice order: self ≼ other, i.e. self ⊇ other."""
        self._check(other)
        if other.is_empty:
            return True
        if self.is_empty:
            return False
        return _inside(self.workspace.dim, other.points, other.rayset, self.facets)

    def contains_point(self, v: Sequence) -> bool:
        if self.is_empty:
            return False
        vv = as_vec(v)
        dim = self.workspace.dim
        for f in self.facets:
            if _dot(_facet_normal(dim, f), vv) > _facet_offset(dim, f):
                return False
        return True

    # -- conlinear operations ---------------------------------------------

    def add(self, other: "UpperSet") -> "UpperSet":
        """Minkowski sum with closure; Empty dominates."""
        self._check(other)
        if self.is_empty or other.is_empty:
            return self.workspace.empty_set()
        dim = self.workspace.dim
        pts = []
        if dim == 1:
            for p in self.points:
                for q in other.points:
                    pts.append((p[0] * q[1] + q[0] * p[1], p[1] * q[1]))
        else:
            for p in self.points:
                for q in other.points:
                    pts.append(
                        reduce_point(
                            p[0] * q[2] + q[0] * p[2],
                            p[1] * q[2] + q[1] * p[2],
                            p[2] * q[2],
                        )
                    )
        rays = list(dict.fromkeys(list(self.rayset) + list(other.rayset)))
        return UpperSet._from_generators(self.workspace, pts, rays)

    def __add__(self, other):
        return self.add(other)

    def scale(self, t) -> "UpperSet":
        """Nonnegative scaling; 0 * A = C for every A including Empty and Z."""
        t = to_frac(t)
        if t < 0:
            raise NegativeScalar("scaling factor must be nonnegative")
        if t == 0:
            return self.workspace.cone_set()
        if self.is_empty:
            return self
        dim = self.workspace.dim
        facets = [
            _facet_of(dim, _facet_normal(dim, f), _facet_offset(dim, f) * t)
            for f in self.facets
        ]
        obj = object.__new__(UpperSet)
        obj.workspace = self.workspace
        obj.facets = tuple(sorted(facets))
        if dim == 1:
            scaled = []
            for p in self.points:
                x, w = p[0] * t.numerator, p[1] * t.denominator
                g = gcd(abs(x), w)
                scaled.append((x // g, w // g))
            obj.points = tuple(sorted(scaled))
        else:
            obj.points = tuple(
                sorted(
                    reduce_point(p[0] * t.numerator, p[1] * t.numerator, p[2] * t.denominator)
                    for p in self.points
                )
            )
        obj.rayset = self.rayset
        return obj

    def __rmul__(self, t):
        return self.scale(t)

    def residual(self, other: "UpperSet") -> "UpperSet":
        """Inf-residuation A ÷ B = {z | B + z ⊆ A}."""
        self._check(other)
        if other.is_empty:
            return self.workspace.whole_space()
        if self.is_empty:
            return self.workspace.empty_set()
        dim = self.workspace.dim
        facets = []
        for f in self.facets:
            n = _facet_normal(dim, f)
            s = other.support(n)
            if s.is_plus_inf:
                return self.workspace.empty_set()
            facets.append(_facet_of(dim, n, _facet_offset(dim, f) - s.value))
        return UpperSet(self.workspace, facets)

    def recession(self) -> "UpperSet":
        """Recession cone 0+A; 0+∅ = ∅ by convention."""
        if self.is_empty:
            return self
        dim = self.workspace.dim
        facets = [_facet_of(dim, _facet_normal(dim, f), Fraction(0)) for f in self.facets]
        return UpperSet(self.workspace, facets)

    # -- scalarization ------------------------------------------------

    def support(self, direction: Sequence) -> ExtReal:
        """Support function sup{<z*, z> : z in A}; -∞ on the empty set."""
        if self.is_empty:
            return MINUS_INF
        d = as_vec(direction)
        for r in self.rayset:
            if _dot(d, r) > 0:
                return PLUS_INF
        dim = self.workspace.dim
        best = None
        for p in self.points:
            v = _dot(d, _point_vec(dim, p))
            if best is None or v > best:
                best = v
        return ExtReal(best)

    def neg_support(self, direction: Sequence) -> ExtReal:
        """-σ(z*|A) = inf{-<z*, z> : z in A}, the scalarization value."""
        return -self.support(direction)

    # -- serialization ----------------------------------------------------

    def to_json(self):
        if self.is_empty:
            return {"tag": "empty"}
        dim = self.workspace.dim
        return {
            "tag": "poly",
            "constraints": [
                {
                    "n": list(_facet_normal(dim, f)),
                    "b": frac_str(_facet_offset(dim, f)),
                }
                for f in self.facets
            ],
            "vertices": [[frac_str(c) for c in v] for v in self.vertices],
            "rays": [list(r) for r in self.rayset],
        }

    def _check(self, other: "UpperSet"):
        if not self.workspace.compatible(other.workspace):
            raise WorkspaceMismatch("upper sets live in different workspaces")


# ---------------------------------------------------------------------------
# Lattice infimum / supremum of families
# ---------------------------------------------------------------------------


def inf_family(workspace: Workspace, sets: Iterable[UpperSet]) -> UpperSet:
    """Closed convex hull of the union; the empty family gives Empty."""
    pts = []
    rays = []
    seen_rays = set()
    for s in sets:
        if s.is_empty:
            continue
        pts.extend(s.points)
        for r in s.rayset:
            if r not in seen_rays:
                seen_rays.add(r)
                rays.append(r)
    if not pts:
        return workspace.empty_set()
    return UpperSet._from_generators(workspace, pts, rays)


def sup_family(workspace: Workspace, sets: Iterable[UpperSet]) -> UpperSet:
    """Intersection; the empty family gives the whole space."""
    facets = []
    for s in sets:
        if s.is_empty:
            return workspace.empty_set()
        facets.extend(s.facets)
    return UpperSet(workspace, facets)


def feasible_with(upper: UpperSet, extra_facets) -> bool:
    """Is A ∩ {extra halfspaces} nonempty?  (Raw geometric test.)"""
    if upper.is_empty:
        return False
    dim = upper.workspace.dim
    combined = list(upper.facets) + [f for f in extra_facets]
    ok, _, _ = _vrep(dim, combined)
    return ok


def mirror_facets(upper: UpperSet):
    """Facet system of -A = {-z : z in A} (not an upper set in general)."""
    dim = upper.workspace.dim
    if upper.is_empty:
        return None
    if dim == 1:
        return [(-f[0], f[1], f[2]) for f in upper.facets]
    return [(-f[0], -f[1], f[2], f[3]) for f in upper.facets]
