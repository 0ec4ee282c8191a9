"""Vertex enumeration by the double description method.

Works on the equality-reduced system. The polytope ``{x : G x <= h}`` is
homogenised to the pointed cone ``{(t, x) : t h - G x >= 0, t >= 0}`` whose
extreme rays with ``t > 0`` are the vertices. All ray arithmetic is done on
primitive integer vectors.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from ..errors import EmptyPolytope, UnboundedPolytope
from ..rational import Vector
from .hrep import HPolytope, ReducedSystem, rref

Vertex = Vector


def _primitive(v: list[int]) -> tuple[int, ...]:
    g = gcd(*v)
    return tuple(x // g for x in v) if g > 1 else tuple(v)


def _cone_rows(system: ReducedSystem) -> list[tuple[int, ...]]:
    rows = [(1,) + (0,) * system.k]
    for g, h in zip(system.rows, system.rhs):
        den = h.denominator
        rows.append((h.numerator,) + tuple(-v * den for v in g))
    return rows


def _initial_basis(rows: list[tuple[int, ...]], n: int):
    """Pick ``n`` linearly independent rows; returns (indices, rays)."""
    chosen: list[int] = []
    echelon: list[list[Fraction]] = []
    for i, row in enumerate(rows):
        v = [Fraction(x) for x in row]
        for e in echelon:
            p = next(c for c, x in enumerate(e) if x)
            if v[p]:
                f = v[p] / e[p]
                v = [a - f * b for a, b in zip(v, e)]
        if any(v):
            echelon.append(v)
            chosen.append(i)
            if len(chosen) == n:
                break
    if len(chosen) < n:
        raise UnboundedPolytope("constraint matrix is rank deficient; polytope is unbounded")
    # Columns of the inverse of the chosen square block are the initial rays.
    aug = [[Fraction(x) for x in rows[i]] + [Fraction(int(r == c)) for c in range(n)]
           for r, i in enumerate(chosen)]
    m, _ = rref(aug, n)
    rays = []
    for c in range(n):
        col = [m[r][n + c] for r in range(n)]
        den = lcm(*(x.denominator for x in col))
        rays.append(_primitive([int(x * den) for x in col]))
    return chosen, rays


def double_description(system: ReducedSystem) -> list[tuple[int, ...]]:
    """Extreme rays ``(t, x_1, ..., x_k)`` of the homogenised cone."""
    rows = _cone_rows(system)
    n = system.k + 1
    chosen, rays = _initial_basis(rows, n)
    zero_sets = []
    for r in rays:
        z = 0
        for i in chosen:
            if not sum(a * b for a, b in zip(rows[i], r)):
                z |= 1 << i
        zero_sets.append(z)
    done = set(chosen)
    for i, row in enumerate(rows):
        if i in done:
            continue
        done.add(i)
        values = [sum(a * b for a, b in zip(row, r) if a) for r in rays]
        pos = [j for j, s in enumerate(values) if s > 0]
        neg = [j for j, s in enumerate(values) if s < 0]
        zer = [j for j, s in enumerate(values) if s == 0]
        bit = 1 << i
        new_rays = [rays[j] for j in pos] + [rays[j] for j in zer]
        new_zero = [zero_sets[j] for j in pos] + [zero_sets[j] | bit for j in zer]
        if pos and neg:
            for p in pos:
                zp = zero_sets[p]
                for q in neg:
                    common = zp & zero_sets[q]
                    if common.bit_count() < n - 2:
                        continue
                    if any((zero_sets[o] & common) == common
                           for o in range(len(rays)) if o != p and o != q):
                        continue
                    sp, sq = values[p], -values[q]
                    combo = [sp * b + sq * a for a, b in zip(rays[p], rays[q])]
                    new_rays.append(_primitive(combo))
                    new_zero.append(common | bit)
        rays, zero_sets = new_rays, new_zero
    return rays


def enumerate_vertices(poly: HPolytope) -> list[Vertex]:
    """All vertices of a bounded polytope, in exact arithmetic."""
    system = poly.reduced
    if system.infeasible:
        raise EmptyPolytope("equality or trivial inequality constraints are inconsistent")
    if system.k == 0:
        if any(b < 0 for b in system.rhs):
            raise EmptyPolytope("the unique candidate point violates an inequality")
        return [system.offset]
    rays = double_description(system)
    vertices = []
    seen = set()
    for r in rays:
        t = r[0]
        if t < 0:
            raise AssertionError("ray violates t >= 0")
        if t == 0:
            raise UnboundedPolytope("recession direction found")
        x = tuple(Fraction(v, t) for v in r[1:])
        c = system.lift(x)
        if c not in seen:
            seen.add(c)
            vertices.append(c)
    if not vertices:
        raise EmptyPolytope("no feasible vertex")
    vertices.sort()
    return vertices
