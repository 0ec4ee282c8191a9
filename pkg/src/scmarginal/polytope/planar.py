"""Exact planar geometry: convex hulls, areas, membership and 2D projections."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from ..errors import EmptyPolytope
from ..rational import Vector, dot, fmt, to_rational
from .hrep import HPolytope, primitive
from .lp import Sense, Status, solve_reduced

Point = tuple[Fraction, Fraction]


def cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Iterable[Sequence]) -> tuple[Point, ...]:
    """Counter-clockwise hull starting at the lexicographically smallest point.

    Collinear and duplicate points are dropped; a single point or a segment
    comes back with one or two vertices.
    """
    pts = sorted({(to_rational(p[0]), to_rational(p[1])) for p in points})
    if len(pts) <= 2:
        return tuple(pts)
    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        return (hull[0],)
    return tuple(hull)


@dataclass(frozen=True)
class Polygon2:
    """Convex polygon in canonical form (see :func:`convex_hull`)."""

    vertices: tuple[Point, ...]

    @classmethod
    def from_points(cls, points: Iterable[Sequence]) -> "Polygon2":
        return cls(convex_hull(points))

    @classmethod
    def box(cls, x: tuple[Fraction, Fraction], y: tuple[Fraction, Fraction]) -> "Polygon2":
        return cls.from_points([(x[0], y[0]), (x[1], y[0]), (x[1], y[1]), (x[0], y[1])])

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def area(self) -> Fraction:
        return polygon_area(self)

    def extent(self, axis: int) -> tuple[Fraction, Fraction]:
        values = [v[axis] for v in self.vertices]
        return min(values), max(values)

    def contains(self, point: Sequence) -> bool:
        return contains(self, point)

    def __str__(self) -> str:
        return " ".join(f"({fmt(x)};{fmt(y)})" for x, y in self.vertices)


def polygon_area(poly: Polygon2) -> Fraction:
    v = poly.vertices
    if len(v) < 3:
        return Fraction(0)
    twice = sum(
        (v[i][0] * v[(i + 1) % len(v)][1] - v[(i + 1) % len(v)][0] * v[i][1] for i in range(len(v))),
        Fraction(0),
    )
    return abs(twice) / 2


def contains(poly: Polygon2, point: Sequence) -> bool:
    """Closed membership test."""
    p = (to_rational(point[0]), to_rational(point[1]))
    v = poly.vertices
    if not v:
        return False
    if len(v) == 1:
        return p == v[0]
    if len(v) == 2:
        a, b = v
        return (cross(a, b, p) == 0
                and min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
                and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))
    return all(cross(v[i], v[(i + 1) % len(v)], p) >= 0 for i in range(len(v)))


def project_points(vertices: Iterable[Sequence[Fraction]], projection) -> list[Point]:
    rows = tuple(projection)
    return [(dot(rows[0], c), dot(rows[1], c)) for c in vertices]


def project_hull(vertices: Sequence[Sequence[Fraction]], projection) -> Polygon2:
    """Convex hull of the projected vertices."""
    if not vertices:
        raise ValueError("need at least one vertex")
    return Polygon2.from_points(project_points(vertices, projection))


class _PlaneOracle:
    """Lexicographic support-point queries in the projected plane."""

    def __init__(self, poly: HPolytope, projection):
        self.system = poly.reduced
        rows = tuple(projection)
        self.maps = [self.system.pull_objective(r) for r in rows]

    def _weights(self, d: Point) -> tuple[Vector, Fraction]:
        (w0, c0), (w1, c1) = self.maps
        return tuple(d[0] * a + d[1] * b for a, b in zip(w0, w1)), d[0] * c0 + d[1] * c1

    def point(self, x) -> Point:
        return tuple(dot(w, x) + c for w, c in self.maps)

    def support(self, d: Point, tie: Point) -> Point | None:
        """Extreme point in direction ``d``; ties broken by maximising ``tie``."""
        w, _ = self._weights(d)
        status, x = solve_reduced(self.system, w, Sense.MAX)
        if status is Status.INFEASIBLE:
            return None
        best = dot(w, x)
        row, scale = primitive(w)
        extra = []
        if scale:
            extra = [(row, best * scale), (tuple(-v for v in row), -best * scale)]
        wt, _ = self._weights(tie)
        status, x = solve_reduced(self.system, wt, Sense.MAX, extra)
        return self.point(x)


def directional_extremes(poly: HPolytope, projection) -> Polygon2:
    """Projected polygon computed from support-function LPs only."""
    oracle = _PlaneOracle(poly, projection)
    one, zero = Fraction(1), Fraction(0)
    axes = [((one, zero), (zero, one)), ((zero, one), (-one, zero)),
            ((-one, zero), (zero, -one)), ((zero, -one), (one, zero))]
    found = []
    for d, tie in axes:
        p = oracle.support(d, tie)
        if p is None:
            raise EmptyPolytope("projection of an empty polytope")
        if p not in found:
            found.append(p)
    if len(found) == 1:
        return Polygon2(tuple(found))
    ring = list(convex_hull(found))
    if len(ring) == 2:
        ring = [ring[0], ring[1]]
        pairs = [(ring[0], ring[1]), (ring[1], ring[0])]
    else:
        pairs = [(ring[i], ring[(i + 1) % len(ring)]) for i in range(len(ring))]
    points = set(ring)
    stack = pairs
    while stack:
        u, v = stack.pop()
        normal = (v[1] - u[1], u[0] - v[0])  # outward for a CCW edge u -> v
        along = (v[0] - u[0], v[1] - u[1])
        w = oracle.support(normal, along)
        level = normal[0] * u[0] + normal[1] * u[1]
        if normal[0] * w[0] + normal[1] * w[1] > level and w not in points:
            points.add(w)
            stack.extend([(u, w), (w, v)])
    return Polygon2.from_points(points)
