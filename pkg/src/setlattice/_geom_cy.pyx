# cython: language_level=3
"""Compiled twin of the exact 2D geometry core.

Same conventions and behaviour as ``_geom_py`` (the parity tests enforce
bit-identical outputs); arithmetic stays on Python integers so results are
exact at any magnitude, the speedup comes from typed loops and dispatch.
"""

from fractions import Fraction
from math import gcd

IMPL_NAME = "cython"

_FULL_RAYS = ((1, 0), (-1, 0), (0, 1), (0, -1))


def reduce_ray(x, y):
    g = gcd(abs(x), abs(y))
    if g == 0:
        return None
    return (x // g, y // g)


def reduce_point(X, Y, W):
    if W < 0:
        X, Y, W = -X, -Y, -W
    g = gcd(gcd(abs(X), abs(Y)), W)
    if g > 1:
        X, Y, W = X // g, Y // g, W // g
    return (X, Y, W)


def reduce_facet(a, b, cn, cd):
    if cd < 0:
        cn, cd = -cn, -cd
    g = gcd(abs(a), abs(b))
    if g > 1:
        a //= g
        b //= g
        cd *= g
    g2 = gcd(abs(cn), cd)
    if g2 > 1:
        cn //= g2
        cd //= g2
    return (a, b, cn, cd)


def facet_from_fraction(a, b, off):
    return reduce_facet(a, b, off.numerator, off.denominator)


def point_satisfies(f, p):
    return f[3] * (f[0] * p[0] + f[1] * p[1]) <= f[2] * p[2]


def ray_satisfies(f, r):
    return f[0] * r[0] + f[1] * r[1] <= 0


def support_value(n, p):
    return Fraction(n[0] * p[0] + n[1] * p[1], p[2])


def vrep_inside_hrep(points, rays, facets):
    cdef Py_ssize_t i, j
    for f in facets:
        a, b, cn, cd = f
        for p in points:
            if cd * (a * p[0] + b * p[1]) > cn * p[2]:
                return False
        for r in rays:
            if a * r[0] + b * r[1] > 0:
                return False
    return True


cdef _canon_sign(v):
    if v[0] < 0 or (v[0] == 0 and v[1] < 0):
        return (-v[0], -v[1])
    return v


cdef int _orient(p, q, r):
    s = (q[0] * p[2] - p[0] * q[2]) * (r[1] * p[2] - p[1] * r[2]) - (
        q[1] * p[2] - p[1] * q[2]
    ) * (r[0] * p[2] - p[0] * r[2])
    if s > 0:
        return 1
    if s < 0:
        return -1
    return 0


def convex_hull(points):
    pts = sorted(set(points), key=lambda p: (Fraction(p[0], p[2]), Fraction(p[1], p[2])))
    if len(pts) <= 1:
        return pts
    lower = []
    for p in pts:
        while len(lower) >= 2 and _orient(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and _orient(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        return hull[:1]
    return hull


def vrep_from_hrep(facets):
    if not facets:
        return True, [(0, 0, 1)], list(_FULL_RAYS)
    a0 = facets[0][0]
    b0 = facets[0][1]
    cdef bint rank1 = True
    for f in facets[1:]:
        if a0 * f[1] - b0 * f[0] != 0:
            rank1 = False
            break
    if rank1:
        return _vrep_rank1(facets)
    return _vrep_rank2(facets)


cdef _vrep_rank1(facets):
    n0 = _canon_sign(reduce_ray(facets[0][0], facets[0][1]))
    nx = n0[0]
    ny = n0[1]
    lo = None
    hi = None
    for a, b, cn, cd in facets:
        k = a // nx if nx != 0 else b // ny
        val = Fraction(cn, cd * k)
        if k > 0:
            if hi is None or val < hi:
                hi = val
        else:
            if lo is None or val > lo:
                lo = val
    if lo is not None and hi is not None and lo > hi:
        return False, [], []
    nn = nx * nx + ny * ny
    points = []
    for v in (lo, hi):
        if v is not None:
            points.append(reduce_point(nx * v.numerator, ny * v.numerator, nn * v.denominator))
    if lo is not None and hi is not None and points[0] == points[1]:
        points = points[:1]
    rays = [(-ny, nx), (ny, -nx)]
    if hi is None:
        rays.append((nx, ny))
    if lo is None:
        rays.append((-nx, -ny))
    return True, sorted(points), sorted(rays)


cdef _vrep_rank2(facets):
    cdef Py_ssize_t m = len(facets)
    cdef Py_ssize_t i, j
    cdef bint ok
    points = set()
    for i in range(m):
        ai, bi, cni, cdi = facets[i]
        for j in range(i + 1, m):
            aj, bj, cnj, cdj = facets[j]
            D = ai * bj - aj * bi
            if D == 0:
                continue
            X = cni * bj * cdj - cnj * bi * cdi
            Y = ai * cnj * cdi - aj * cni * cdj
            p = reduce_point(X, Y, D * cdi * cdj)
            if p in points:
                continue
            ok = True
            for f in facets:
                if not point_satisfies(f, p):
                    ok = False
                    break
            if ok:
                points.add(p)
    if not points:
        return False, [], []
    rays = set()
    for a, b, _, _ in facets:
        for r in ((-b, a), (b, -a)):
            rr = reduce_ray(r[0], r[1])
            if rr in rays:
                continue
            ok = True
            for f in facets:
                if not ray_satisfies(f, rr):
                    ok = False
                    break
            if ok:
                rays.add(rr)
    return True, sorted(points), sorted(rays)


cdef _classify_cone(rays):
    if not rays:
        return ("zero", None)
    cert = None
    for r in rays:
        for m in ((r[1], -r[0]), (-r[1], r[0])):
            good = True
            for s in rays:
                if m[0] * s[0] + m[1] * s[1] < 0:
                    good = False
                    break
            if good:
                cert = m
                break
        if cert is not None:
            break
    if cert is None:
        return ("full", None)
    b = (cert[1], -cert[0])
    fwd = None
    bwd = None
    interior = []
    for r in rays:
        c = cert[0] * r[0] + cert[1] * r[1]
        if c > 0:
            interior.append(r)
        elif b[0] * r[0] + b[1] * r[1] > 0:
            fwd = r
        else:
            bwd = r
    if fwd is not None and bwd is not None:
        if interior:
            return ("halfplane", cert)
        return ("line", b)
    lo = fwd
    hi = bwd
    if lo is None and interior:
        lo = interior[0]
        for s in interior[1:]:
            if lo[0] * s[1] - lo[1] * s[0] < 0:
                lo = s
    if hi is None and interior:
        hi = interior[0]
        for s in interior[1:]:
            if s[0] * hi[1] - s[1] * hi[0] < 0:
                hi = s
    if lo is None:
        lo = hi
    if hi is None:
        hi = lo
    if lo == hi:
        return ("ray", lo)
    return ("wedge", (lo, hi))


cdef _max_support(n, points):
    best = None
    for p in points:
        v = support_value(n, p)
        if best is None or v > best:
            best = v
    return best


def hrep_from_vrep(points, rays):
    cdef Py_ssize_t i, k
    pts = [reduce_point(p[0], p[1], p[2]) for p in points]
    rset = []
    for r in rays:
        rr = reduce_ray(r[0], r[1])
        if rr is not None and rr not in rset:
            rset.append(rr)
    kind, data = _classify_cone(rset)
    if kind == "full":
        return []
    if kind == "halfplane":
        n = reduce_ray(-data[0], -data[1])
        return [facet_from_fraction(n[0], n[1], _max_support(n, pts))]
    if kind == "line":
        n0 = _canon_sign(reduce_ray(-data[1], data[0]))
        hi = _max_support(n0, pts)
        lo = -_max_support((-n0[0], -n0[1]), pts)
        return sorted(
            (
                facet_from_fraction(n0[0], n0[1], hi),
                facet_from_fraction(-n0[0], -n0[1], -lo),
            )
        )
    hull = convex_hull(pts)
    facets = []
    if kind == "zero":
        if len(hull) == 1:
            x = Fraction(hull[0][0], hull[0][2])
            y = Fraction(hull[0][1], hull[0][2])
            facets = [
                facet_from_fraction(1, 0, x),
                facet_from_fraction(-1, 0, -x),
                facet_from_fraction(0, 1, y),
                facet_from_fraction(0, -1, -y),
            ]
        elif len(hull) == 2:
            p, q = hull
            d = reduce_ray(q[0] * p[2] - p[0] * q[2], q[1] * p[2] - p[1] * q[2])
            n = (-d[1], d[0])
            facets = [
                facet_from_fraction(n[0], n[1], support_value(n, p)),
                facet_from_fraction(-n[0], -n[1], -support_value(n, p)),
                facet_from_fraction(d[0], d[1], support_value(d, q)),
                facet_from_fraction(-d[0], -d[1], -support_value(d, p)),
            ]
        else:
            k = len(hull)
            for i in range(k):
                p = hull[i]
                q = hull[(i + 1) % k]
                d = (q[0] * p[2] - p[0] * q[2], q[1] * p[2] - p[1] * q[2])
                n = reduce_ray(d[1], -d[0])
                facets.append(facet_from_fraction(n[0], n[1], support_value(n, p)))
    else:
        if kind == "ray":
            r_lo = data
            r_hi = data
        else:
            r_lo, r_hi = data
        n1 = reduce_ray(r_lo[1], -r_lo[0])
        n2 = reduce_ray(-r_hi[1], r_hi[0])
        for n in ((n1, n2) if n1 != n2 else (n1,)):
            facets.append(facet_from_fraction(n[0], n[1], _max_support(n, pts)))
        if len(hull) >= 3:
            k = len(hull)
            for i in range(k):
                p = hull[i]
                q = hull[(i + 1) % k]
                d = (q[0] * p[2] - p[0] * q[2], q[1] * p[2] - p[1] * q[2])
                n = reduce_ray(d[1], -d[0])
                if (
                    n[0] * r_lo[0] + n[1] * r_lo[1] < 0
                    and n[0] * r_hi[0] + n[1] * r_hi[1] < 0
                ):
                    facets.append(facet_from_fraction(n[0], n[1], support_value(n, p)))
        elif len(hull) == 2:
            p, q = hull
            d = (q[0] * p[2] - p[0] * q[2], q[1] * p[2] - p[1] * q[2])
            if kind == "ray" and d[0] * data[1] - d[1] * data[0] == 0:
                n = (-data[0], -data[1])
                facets.append(facet_from_fraction(n[0], n[1], _max_support(n, pts)))
            else:
                for n in ((d[1], -d[0]), (-d[1], d[0])):
                    if (
                        n[0] * r_lo[0] + n[1] * r_lo[1] < 0
                        and n[0] * r_hi[0] + n[1] * r_hi[1] < 0
                    ):
                        facets.append(facet_from_fraction(n[0], n[1], _max_support(n, pts)))
        elif kind == "ray":
            n = (-data[0], -data[1])
            facets.append(facet_from_fraction(n[0], n[1], _max_support(n, pts)))
    best = {}
    for f in facets:
        key = (f[0], f[1])
        cur = best.get(key)
        if cur is None or f[2] * cur[3] < cur[2] * f[3]:
            best[key] = f
    return sorted(best.values())
