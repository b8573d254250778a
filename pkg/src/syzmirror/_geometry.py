"""Small exact planar geometry kernels (ints or Fractions)."""
import math


def cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull_2d(points):
    """Counter-clockwise hull vertices starting at the lexicographic minimum.

    Collinear boundary points are dropped. Degenerate inputs return the
    distinct extreme points (1 or 2 of them).
    """
    pts = sorted(set(tuple(p) for p in points))
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        return hull[:1]
    return hull


def polygon_double_area(cycle):
    """Twice the signed area of a polygon given as a vertex cycle."""
    total = 0
    for i in range(len(cycle)):
        x0, y0 = cycle[i]
        x1, y1 = cycle[(i + 1) % len(cycle)]
        total += x0 * y1 - x1 * y0
    return total


def in_convex_polygon(cycle, p):
    """Closed membership test for a ccw convex polygon (or segment/point)."""
    if len(cycle) == 1:
        return tuple(p) == tuple(cycle[0])
    if len(cycle) == 2:
        return on_segment(cycle[0], cycle[1], p)
    return all(cross(cycle[i], cycle[(i + 1) % len(cycle)], p) >= 0 for i in range(len(cycle)))


def on_segment(a, b, p):
    if cross(a, b, p) != 0:
        return False
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def point_segment_distance(p, a, b):
    ax, ay = float(a[0]), float(a[1])
    dx, dy = float(b[0]) - ax, float(b[1]) - ay
    px, py = float(p[0]) - ax, float(p[1]) - ay
    denom = dx * dx + dy * dy
    t = 0.0 if denom == 0 else max(0.0, min(1.0, (px * dx + py * dy) / denom))
    return math.hypot(px - t * dx, py - t * dy)


def point_ray_distance(p, origin, direction):
    ox, oy = float(origin[0]), float(origin[1])
    dx, dy = float(direction[0]), float(direction[1])
    px, py = float(p[0]) - ox, float(p[1]) - oy
    t = max(0.0, (px * dx + py * dy) / (dx * dx + dy * dy))
    return math.hypot(px - t * dx, py - t * dy)
