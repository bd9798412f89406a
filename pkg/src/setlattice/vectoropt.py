"""Vector optimization through epigraphical extensions: efficiency, the
space extended by directions at infinity, vector Dini derivatives as outer
limits, and the vector Stampacchia/Minty corollaries."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence

from .calculus import scalar_dini, set_derivative
from .extres import ExtReal
from .kernel import (
    LatticeError,
    UpperSet,
    Vec,
    Workspace,
    _dot,
    as_vec,
    to_frac,
)
from .setfun import ConvexPWL, EpiVectorFunction, OracleFunction, Polyhedron, SetFunction
from .vi import CandidateSpace, check_mvi_M_finite, minimal_check

class EmptyGrid(LatticeError):
    pass


class InconsistentLimitData(LatticeError):
    pass


# ---------------------------------------------------------------------------
# Points at infinity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtendedPoint:
    """A point of Z or an infinite element: a direction up to positive scaling,
    canonicalized to unit L1 norm (the zero direction collapses to the origin)."""

    kind: str  # "fin" | "inf"
    vector: Vec

    @staticmethod
    def finite(v: Sequence) -> "ExtendedPoint":
        return ExtendedPoint("fin", as_vec(v))

    @staticmethod
    def at_infinity(direction: Sequence) -> "ExtendedPoint":
        d = as_vec(direction)
        norm = sum(abs(c) for c in d)
        if norm == 0:
            return ExtendedPoint("fin", d)
        return ExtendedPoint("inf", tuple(c / norm for c in d))

    @property
    def is_infinite(self) -> bool:
        return self.kind == "inf"

    def to_json(self):
        return {"kind": self.kind, "vector": [str(c) for c in self.vector]}


@dataclass
class DiniLimitSet:
    """Cluster values of the vector differential quotient in Z ∪ Z_inf."""

    finite_points: List[Vec] = field(default_factory=list)
    infinite_dirs: List[ExtendedPoint] = field(default_factory=list)
    exact: bool = True
    diagnostic: dict = field(default_factory=dict)

    @property
    def is_empty(self) -> bool:
        return not self.finite_points and not self.infinite_dirs

    def to_json(self):
        return {
            "finite": [[str(c) for c in p] for p in self.finite_points],
            "infinite": [d.to_json() for d in self.infinite_dirs],
            "exact": self.exact,
            "diagnostic": {k: str(v) for k, v in self.diagnostic.items()},
        }


# ---------------------------------------------------------------------------
# Vector-valued functions
# ---------------------------------------------------------------------------


class VectorFunction:
    """A vector-valued map on a domain in X; exact PWL or numeric oracle."""

    workspace: Workspace
    xdim: int
    is_exact: bool

    def psi(self, x: Sequence) -> Optional[Vec]:
        raise NotImplementedError

    def domain_contains(self, x: Sequence) -> bool:
        raise NotImplementedError


class PWLVectorFunction(VectorFunction):
    def __init__(
        self,
        workspace: Workspace,
        xdim: int,
        components: Sequence[ConvexPWL],
        domain: Optional[Polyhedron] = None,
        name: str = "",
    ):
        self.workspace = workspace
        self.xdim = xdim
        self.components = tuple(components)
        if len(self.components) != workspace.dim:
            raise LatticeError("need one component per image dimension")
        self.domain = domain if domain is not None else Polyhedron.whole(xdim)
        self.is_exact = True
        self.name = name

    def psi(self, x):
        xx = as_vec(x)
        if not self.domain.contains(xx):
            return None
        return tuple(c.value(xx) for c in self.components)

    def domain_contains(self, x):
        return self.domain.contains(as_vec(x))


class OracleVectorFunction(VectorFunction):
    def __init__(
        self,
        workspace: Workspace,
        xdim: int,
        handle: Callable[[Vec], Optional[Vec]],
        tolerance=Fraction(1, 10**6),
        name: str = "",
    ):
        self.workspace = workspace
        self.xdim = xdim
        self.handle = handle
        self.tolerance = to_frac(tolerance)
        self.is_exact = False
        self.name = name

    def psi(self, x):
        v = self.handle(as_vec(x))
        return None if v is None else as_vec(v)

    def domain_contains(self, x):
        return self.psi(x) is not None


def epigraphical(psi: VectorFunction) -> SetFunction:
    """The epigraphical extension x -> psi(x) + C, ∅ outside the domain."""
    ws = psi.workspace
    if isinstance(psi, PWLVectorFunction):
        return EpiVectorFunction(
            ws, psi.xdim, psi.components, psi.domain, name=psi.name or "epigraphical"
        )

    def evaluator(x: Vec) -> UpperSet:
        v = psi.psi(x)
        if v is None:
            return ws.empty_set()
        return ws.translated_cone(v)

    return OracleFunction(
        ws,
        psi.xdim,
        evaluator,
        declared_convex=True,
        tolerance=getattr(psi, "tolerance", Fraction(1, 10**6)),
        name=psi.name or "epigraphical",
    )


# ---------------------------------------------------------------------------
# Efficiency
# ---------------------------------------------------------------------------


def _dominates(cone, y: Vec, z: Vec) -> bool:
    """z ∈ y + C and z ∉ y + (C ∩ -C)."""
    d = tuple(a - b for a, b in zip(z, y))
    return cone.contains(d) and not cone.in_lineality(d)


def efficient_set(psi: VectorFunction, grid: Sequence[Sequence]) -> List[Vec]:
    """Grid points whose value is efficient in psi[grid] (pairwise dominance scan)."""
    if not grid:
        raise EmptyGrid("efficiency scan needs a nonempty grid")
    cone = psi.workspace.cone
    pts = [as_vec(x) for x in grid]
    values = {}
    for x in pts:
        v = psi.psi(x)
        if v is None:
            raise EmptyGrid(f"grid point {x} is outside the domain")
        values[x] = v
    out = []
    for x in pts:
        zx = values[x]
        if not any(_dominates(cone, values[y], zx) for y in pts if y != x):
            out.append(x)
    return out


def efficiency_minimality_bridge(
    psi: VectorFunction, grid: Sequence[Sequence], directions
) -> dict:
    """Cross-check: a grid point is efficient iff it is a minimizer of psi + C."""
    f = epigraphical(psi)
    space = CandidateSpace.of(grid)
    eff = set(efficient_set(psi, grid))
    mismatches = []
    for x in space.points:
        rep = minimal_check(f, x, space, directions)
        if rep.conditions["a"] != (x in eff):
            mismatches.append(x)
    return {
        "efficient": sorted(eff),
        "agrees": not mismatches,
        "mismatches": mismatches,
    }


def eff_plus_cone_identity(psi: VectorFunction, grid: Sequence[Sequence]) -> bool:
    """The union of minimal values equals the efficient values plus the cone."""
    ws = psi.workspace
    eff = efficient_set(psi, grid)
    minimal_values = set()
    pts = [as_vec(x) for x in grid]
    for x in pts:
        zx = psi.psi(x)
        if not any(_dominates(ws.cone, psi.psi(y), zx) for y in pts if y != x):
            minimal_values.add(ws.translated_cone(zx))
    eff_values = {ws.translated_cone(psi.psi(x)) for x in eff}
    return minimal_values == eff_values


# ---------------------------------------------------------------------------
# Vector Dini derivatives
# ---------------------------------------------------------------------------


def vector_dini(psi: VectorFunction, x0: Sequence, u: Sequence) -> DiniLimitSet:
    """Outer limit of the quotient (psi(x0 + t u) - psi(x0)) / t as t drops to 0.

    Exact PWL data stabilizes to a single finite point; oracle trails are
    classified as convergent, norm-divergent with a stabilizing direction,
    or undecided.
    """
    x0 = as_vec(x0)
    uu = as_vec(u)
    base = psi.psi(x0)
    if base is None:
        raise LatticeError("base point is outside the domain")
    if isinstance(psi, PWLVectorFunction):
        lo, hi = psi.domain.t_interval(x0, uu)
        if hi is not None and hi <= 0:
            return DiniLimitSet(exact=True, diagnostic={"note": "no admissible t"})
        slopes = []
        for comp in psi.components:
            g = comp.pullback(x0, uu)
            val0 = max(c for _, c in g.pieces)
            slopes.append(max(s[0] for s, c in g.pieces if c == val0))
        return DiniLimitSet(finite_points=[tuple(slopes)], exact=True)
    tol = getattr(psi, "tolerance", Fraction(1, 10**6))
    trail = []
    t = Fraction(1)
    for _ in range(24):
        xt = tuple(a + t * b for a, b in zip(x0, uu))
        v = psi.psi(xt)
        if v is not None:
            trail.append(tuple((a - b) / t for a, b in zip(v, base)))
        t = t / 2
    if not trail:
        return DiniLimitSet(exact=False, diagnostic={"note": "no admissible t"})
    tail = trail[-5:]
    norms = [sum(abs(c) for c in q) for q in tail]
    if all(
        max(abs(a - b) for a, b in zip(p, q)) <= tol
        for p, q in zip(tail, tail[1:])
    ):
        return DiniLimitSet(finite_points=[tail[-1]], exact=False)
    blown_up = all(n > 1 / tol for n in norms[-3:])
    growing = all(
        3 * n2 >= 4 * n1 and n2 > n1 for n1, n2 in zip(norms, norms[1:])
    )
    if blown_up or growing:
        dirs = [tuple(c / n for c in q) for q, n in zip(tail, norms) if n > 0]
        if len(dirs) >= 2 and all(
            max(abs(a - b) for a, b in zip(p, q)) <= Fraction(1, 1000)
            for p, q in zip(dirs[:-1], dirs[1:])
        ):
            return DiniLimitSet(
                infinite_dirs=[ExtendedPoint.at_infinity(dirs[-1])],
                exact=False,
                diagnostic={"norm_tail": norms[-1]},
            )
    return DiniLimitSet(exact=False, diagnostic={"note": "undecided", "norm_tail": norms[-1]})


def infdir_plus_cone(workspace: Workspace, z: Sequence) -> UpperSet:
    """The lattice shadow z_inf + C of a direction at infinity.

    Zero gives C; directions outside -C give ∅; otherwise the exact limit of
    the translated cones {t z} + C, a cone generated by C and z.
    """
    zz = as_vec(z)
    if all(c == 0 for c in zz):
        return workspace.cone_set()
    cone = workspace.cone
    if not cone.contains(tuple(-c for c in zz)):
        return workspace.empty_set()
    from .kernel import _vec_point

    origin = _vec_point(workspace.dim, (Fraction(0),) * workspace.dim)
    from .kernel import _primitive_dir

    rays = list(cone.generators) + [_primitive_dir(zz)]
    return UpperSet._from_generators(workspace, [origin], rays)


def classify_dini(
    psi: VectorFunction,
    x0: Sequence,
    x: Sequence,
    dlimit: DiniLimitSet,
    directions,
) -> dict:
    """Check the cluster values of the vector quotient against the epigraphical
    derivative: finite limits reproduce it exactly, infinite directions land
    in -C and their cones inside its recession, and mixed limits force the
    lineality space."""
    ws = psi.workspace
    f = epigraphical(psi)
    x0 = as_vec(x0)
    xx = as_vec(x)
    u = tuple(b - a for a, b in zip(x0, xx))
    D = set_derivative(f, x0, u)
    tol = getattr(psi, "tolerance", Fraction(0))
    finite_ok = True
    scalar_ok = True
    for z in dlimit.finite_points:
        zc = ws.translated_cone(z)
        if D.exact and dlimit.exact:
            if zc != D.value:
                finite_ok = False
        else:
            if not (zc.leq(D.value) or D.value.leq(zc)):
                finite_ok = False
        for zs in directions:
            lhs = scalar_dini(f, zs, x0, u)
            rhs = ExtReal(-_dot(as_vec(zs), z))
            if lhs == rhs:
                continue
            if lhs.is_finite and rhs.is_finite and abs(lhs.value - rhs.value) <= tol:
                continue
            scalar_ok = False
    infinite_ok = True
    for d in dlimit.infinite_dirs:
        vec = d.vector
        if not ws.cone.contains(tuple(-c for c in vec)):
            infinite_ok = False
            continue
        shadow = infdir_plus_cone(ws, vec)
        rec = D.value.recession()
        if rec.is_empty:
            infinite_ok = False
            continue
        if not D.exact:
            # a finite quotient sample cannot show the recession the outer
            # limit accrues along its divergence directions; fold them in
            from .kernel import _primitive_dir, _vec_point

            origin = _vec_point(ws.dim, (Fraction(0),) * ws.dim)
            rays = list(rec.rays) + [_primitive_dir(vec)]
            rec = UpperSet._from_generators(ws, [origin], rays)
        if not rec.leq(shadow):
            infinite_ok = False
    mixed_ok = True
    if dlimit.finite_points and dlimit.infinite_dirs:
        for d in dlimit.infinite_dirs:
            if not ws.cone.in_lineality(d.vector):
                mixed_ok = False
    if dlimit.is_empty and dlimit.exact:
        raise InconsistentLimitData("an exact Dini limit set cannot be empty")
    return {
        "finite_matches_derivative": finite_ok,
        "scalar_dini_matches": scalar_ok,
        "infinite_directions_valid": infinite_ok,
        "mixed_forces_lineality": mixed_ok,
        "exact": dlimit.exact and D.exact,
    }


# ---------------------------------------------------------------------------
# Vector Minty principle
# ---------------------------------------------------------------------------

DEFAULT_T_PARAMS = (Fraction(1, 8), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))


def vector_minty_check(
    psi: VectorFunction,
    x0: Sequence,
    grid: Sequence[Sequence],
    directions,
    t_params: Sequence = DEFAULT_T_PARAMS,
) -> dict:
    """The three vector Minty forms over grid points and segment parameters.

    (i)  the scalarized form: some scalarization strictly decreases toward
         the base from every differing segment point;
    (ii) the inner form: the vector Dini set at differing segment points
         avoids the cone and its directions at infinity;
    (iii) for a pointed cone, agreement of (i) with efficiency on the grid,
         plus the polyhedral finite-direction Minty check.
    """
    ws = psi.workspace
    f = epigraphical(psi)
    x0 = as_vec(x0)
    base_val = psi.psi(x0)
    if base_val is None:
        raise LatticeError("base point is outside the domain")
    pts = [as_vec(x) for x in grid]
    base_ts = [to_frac(t) for t in t_params]
    scalar_ok = True
    inner_ok = True
    single_valued = True
    witnesses = []
    zero = ExtReal(0)
    seg_points = []
    for x in pts:
        ts = list(base_ts)
        if psi.is_exact and x != x0:
            # close the sample under the segment's kinks, where off-grid
            # dominators of piecewise-linear data live, and the endpoint
            from .calculus import segment_criticals

            for t in segment_criticals(f, x0, x, directions):
                if t not in ts:
                    ts.append(t)
            ts.append(Fraction(1))
        for t in ts:
            xt = tuple(a + t * (b - a) for a, b in zip(x0, x))
            vt = psi.psi(xt)
            if vt is None:
                continue
            seg_points.append(xt)
            if vt == base_val:
                continue
            u_back = tuple(a - b for a, b in zip(x0, x))
            if not any(scalar_dini(f, z, xt, u_back) < zero for z in directions):
                scalar_ok = False
                witnesses.append({"form": "scalar", "x": x, "t": t})
            dl = vector_dini(psi, xt, u_back)
            if len(dl.finite_points) + len(dl.infinite_dirs) != 1 or dl.infinite_dirs:
                single_valued = False
            bad = False
            for p in dl.finite_points:
                if ws.cone.contains(p):
                    bad = True
            for d in dl.infinite_dirs:
                if ws.cone.contains(d.vector):
                    bad = True
            if bad:
                inner_ok = False
                witnesses.append({"form": "inner", "x": x, "t": t})
    space = CandidateSpace.of(list(pts) + seg_points + [x0], base=x0)
    finite_dirs = list(ws.cone.facet_normals)
    mvi = check_mvi_M_finite(f, x0, space, finite_dirs)
    eff = efficient_set(psi, [p for p in space.points if psi.domain_contains(p)])
    is_efficient = x0 in eff
    pointed = ws.cone.is_pointed
    return {
        "scalar_form": scalar_ok,
        "inner_form": inner_ok,
        "mvi_M_finite": mvi.holds,
        "efficient": is_efficient,
        "pointed_cone": pointed,
        "single_valued_quotients": single_valued,
        "agrees_with_efficiency": (scalar_ok == is_efficient)
        and (mvi.holds == is_efficient),
        "witnesses": witnesses,
        "exact": psi.is_exact,
    }
