"""Shared geometric fixtures for the test suite."""

import math

import numpy as np

from spherewidth.body import ConvexBody, Polytope
from spherewidth.sphere import SmallCircleArc, cross, dot, unit


def lens(z1, z2, r1, r2):
    """Intersection of two overlapping caps: a two-arc piecewise body.

    Not of constant width in general; used as a negative control and as a
    generic curved test body.
    """
    z1, z2 = unit(z1), unit(z2)
    g = dot(z1, z2)
    c1, c2 = math.cos(r1), math.cos(r2)
    a = (c1 - c2 * g) / (1 - g * g)
    b = (c2 - c1 * g) / (1 - g * g)
    x0 = a * z1 + b * z2
    t2 = 1.0 - float(np.dot(x0, x0))
    if t2 <= 0:
        raise ValueError("caps do not intersect transversally")
    n = unit(cross(z1, z2))
    xp = x0 + math.sqrt(t2) * n
    xm = x0 - math.sqrt(t2) * n

    probe1 = SmallCircleArc(z1, r1, 0.0, 2 * math.pi)
    probe2 = SmallCircleArc(z2, r2, 0.0, 2 * math.pi)

    def sub_arc(probe, z_other, r_other, start_pt, end_pt):
        a0 = float(probe.azimuth_of(start_pt))
        a1 = float(probe.azimuth_of(end_pt))
        span = (a1 - a0) % (2 * math.pi)
        arc = SmallCircleArc(probe.center, probe.radius, a0, a0 + span)
        mid = arc.point_at(a0 + span / 2)[0]
        if math.acos(max(-1, min(1, dot(mid, z_other)))) > r_other:
            # wrong side: take the complementary span
            span = 2 * math.pi - span
            arc = SmallCircleArc(probe.center, probe.radius, a1, a1 + span)
        return arc

    arc1 = sub_arc(probe1, z2, r2, xp, xm)
    arc2 = sub_arc(probe2, z1, r1, xm, xp)
    witness = unit(arc1.midpoint() + arc2.midpoint())
    body = ConvexBody([arc1, arc2], witness)
    if np.linalg.norm(body.pieces[0].end - body.pieces[1].start) > 1e-9:
        body = ConvexBody([arc2, arc1], witness)
    return body


def truncated_octant(s=0.25):
    """Octant with the e3 vertex cut off: a non-constant-width polytope."""
    e1, e2, e3 = np.eye(3)
    p = unit((1 - s) * e3 + s * e2)
    q = unit((1 - s) * e3 + s * e1)
    return Polytope(np.array([e1, e2, p, q]))
